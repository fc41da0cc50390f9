"""Deformed complexes: hand-derived oracles, cone agreement, gauge collapse."""

import random
from fractions import Fraction

import pytest

from conftest import (
    circle_complex,
    cube_complex,
    exact_cocycle,
    gauge_system,
    interval_complex,
    torus_complex,
)
from novikov_kit.cellkit import CellPair, LocalSystem, OneCocycle
from novikov_kit.errors import ParameterError
from novikov_kit.exactalg import Poly
from novikov_kit.novikov import (
    NovikovInput,
    background_betti,
    betti_at,
    build_cone,
    build_deformed,
    cone_betti,
    cone_betti_at,
    jump_points,
    novikov_result,
    untwisted_betti,
)

F = Fraction


def circle_input(weight=F(1)) -> NovikovInput:
    c = circle_complex()
    return NovikovInput.build(CellPair(c, frozenset()), OneCocycle({"e": F(weight)}))


def torus_input(w1=F(1), w2=F(0)) -> NovikovInput:
    c = torus_complex()
    return NovikovInput.build(
        CellPair(c, frozenset()), OneCocycle({"a": F(w1), "b": F(w2)})
    )


# --- build_deformed oracles ---------------------------------------------------

def test_circle_delta0_is_s_minus_one():
    dc = build_deformed(circle_input())
    d0 = dc.delta(0)
    assert (d0.rows, d0.cols) == (1, 1)
    e = d0.entry(0, 0)
    assert e.offset == 0 and e.poly == Poly([-1, 1])


def test_circle_scale_clears_denominators():
    inp = circle_input(F(2, 3))
    assert inp.scale == 3
    e = build_deformed(inp).delta(0).entry(0, 0)
    assert e.offset == 0 and e.poly == Poly([-1, 0, 1])  # s^2 - 1


def test_torus_delta0_matches_hand_computation():
    dc = build_deformed(torus_input())
    d0 = dc.delta(0)
    cols = {eid: i for i, eid in enumerate(dc.orders[1])}
    a_entry = d0.entry(cols["a"], 0)
    b_entry = d0.entry(cols["b"], 0)
    assert a_entry.poly == Poly([-1, 1]) and a_entry.offset == 0
    assert b_entry.is_zero


def test_deformed_squares_to_zero_on_models():
    for inp in (circle_input(), torus_input(), torus_input(F(3), F(-2))):
        assert build_deformed(inp).squares_to_zero()


def test_cube_deformed_squares_to_zero_rank2():
    c = cube_complex()
    rng = random.Random(3)
    frames = {}
    for v in c.cells[0]:
        while True:
            m = [[F(rng.randrange(-2, 3)) for _ in range(2)] for _ in range(2)]
            if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0:
                frames[v] = tuple(tuple(r) for r in m)
                break
    system = gauge_system(c, frames, 2)
    potential = {v: rng.randrange(-3, 4) for v in c.cells[0]}
    cocycle = exact_cocycle(c, potential)
    inp = NovikovInput.build(CellPair(c, frozenset()), cocycle, system)
    dc = build_deformed(inp)
    assert dc.squares_to_zero()
    assert build_cone(inp).squares_to_zero()
    # contractible: only H^0 survives, with the full fiber rank
    assert background_betti(inp, dc) == (2, 0, 0, 0)


def test_evaluation_at_one_gives_untwisted_complex():
    inp = torus_input()
    assert betti_at(inp, F(1)) == (1, 2, 1)


# --- background + jumps -------------------------------------------------------

def test_circle_background_and_jumps():
    inp = circle_input()
    assert background_betti(inp) == (0, 0)
    jumps = jump_points(inp)
    assert set(jumps) == {0, 1}
    for d in (0, 1):
        [entry] = jumps[d]
        assert entry.interval.exact and entry.interval.lo == 1
        assert entry.deficit == 1
        assert entry.factor == Poly([-1, 1])


def test_torus_background_and_jumps():
    inp = torus_input()
    assert background_betti(inp) == (0, 0, 0)
    jumps = jump_points(inp)
    assert all(
        entry.interval.exact and entry.interval.lo == 1
        for entries in jumps.values()
        for entry in entries
    )
    assert betti_at(inp, F(1)) == (1, 2, 1)
    assert betti_at(inp, F(3)) == (0, 0, 0)


def test_interval_variants():
    c = interval_complex()
    both = NovikovInput.build(CellPair(c, frozenset()))
    assert background_betti(both) == (1, 0)
    rel_point = NovikovInput.build(CellPair(c, frozenset({"p0"})))
    assert background_betti(rel_point) == (0, 0)
    rel_both = NovikovInput.build(CellPair(c, frozenset({"p0", "p1"})))
    assert background_betti(rel_both) == (0, 1)


def test_betti_at_rejects_nonpositive():
    with pytest.raises(ParameterError):
        betti_at(circle_input(), F(0))


def test_background_equals_generic_samples():
    rng = random.Random(11)
    inp = torus_input(F(2), F(5))
    dc = build_deformed(inp)
    bg = background_betti(inp, dc)
    result = novikov_result(inp, dc)
    roots = {
        e.interval.lo
        for entries in result.jumps.values()
        for e in entries
        if e.interval.exact
    }
    seen = 0
    while seen < 20:
        s0 = F(rng.randrange(1, 60), rng.randrange(1, 7))
        if s0 in roots:
            continue
        if any(
            not e.interval.exact and e.interval.contains(s0)
            for entries in result.jumps.values()
            for e in entries
        ):
            continue
        assert betti_at(inp, s0, dc) == bg
        seen += 1


# --- cone cross-check ----------------------------------------------------------

def test_cone_equals_absolute_for_empty_sub(torus_pair):
    inp = NovikovInput.build(torus_pair, OneCocycle({"a": F(1), "b": F(0)}))
    assert cone_betti(inp) == background_betti(inp)


def test_cone_interval_rel_point():
    inp = NovikovInput.build(CellPair(interval_complex(), frozenset({"p0"})))
    assert cone_betti(inp) == (0, 0)


def test_cone_agrees_pointwise():
    inp = torus_input(F(1), F(2))
    dc = build_deformed(inp)
    cone = build_cone(inp)
    assert cone.squares_to_zero()
    assert cone_betti(inp, cone) == background_betti(inp, dc)
    rng = random.Random(23)
    for _ in range(20):
        s0 = F(rng.randrange(1, 40), rng.randrange(1, 5))
        assert cone_betti_at(inp, s0, cone) == betti_at(inp, s0, dc)


# --- exactness collapse + covariance --------------------------------------------

def test_exact_cocycle_has_empty_jumps_and_constant_rank():
    from novikov_kit.geomlab import gen_example

    inp = gen_example("cylinder_failing").novikov_input
    result = novikov_result(inp)
    assert result.background == (0, 2, 0)
    assert result.jumps == {}
    assert betti_at(inp, F(1)) == (0, 2, 0)
    # conjugation oracle: gauge by diag(s^(N*h(v))) must kill the s-dependence
    dc = build_deformed(inp)
    for s0 in (F(1), F(2), F(1, 3), F(7, 2)):
        assert betti_at(inp, s0, dc) == (0, 2, 0)


def test_scaling_covariance():
    base = torus_input(F(1), F(2))
    scaled = torus_input(F(3), F(6))
    dc_b = build_deformed(base)
    dc_s = build_deformed(scaled)
    assert background_betti(base, dc_b) == background_betti(scaled, dc_s)
    rng = random.Random(2)
    for _ in range(8):
        s1 = F(rng.randrange(1, 9), rng.randrange(1, 4))
        assert betti_at(scaled, s1, dc_s) == betti_at(base, s1**3, dc_b)


def test_jump_monotone_direction():
    inp = torus_input(F(1), F(0))
    result = novikov_result(inp)
    for d, entries in result.jumps.items():
        for e in entries:
            if e.interval.exact:
                assert betti_at(inp, e.interval.lo)[d] > result.background[d]


def test_euler_check_in_result():
    result = novikov_result(torus_input())
    assert result.euler_ok
    assert result.euler_expected == 0


def test_untwisted_betti_minus_one_monodromy_circle():
    c = circle_complex()
    system = LocalSystem(1, {"e": ((F(-1),),)})
    assert untwisted_betti(CellPair(c, frozenset()), system) == (0, 0)


def test_result_json_shape():
    js = novikov_result(circle_input()).to_json()
    assert js["background"] == [0, 0]
    assert js["scale_N"] == 1
    assert js["euler_check"]["ok"] is True
    assert js["jumps"]["0"][0]["interval"] == {"lo": "1", "hi": "1", "exact": True}
