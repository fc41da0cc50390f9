"""Shared model-building helpers for the test suite."""

from fractions import Fraction

import pytest

from novikov_kit.cellkit import CellComplex, CellPair, LocalSystem, OneCocycle

F = Fraction


def circle_complex() -> CellComplex:
    return CellComplex(
        (("v",), ("e",)),
        {"e": (("v", 0),)},
        {},
    )


def torus_complex(word=(("a", 1), ("b", 1), ("a", -1), ("b", -1))) -> CellComplex:
    abel = {}
    for eid, d in word:
        abel[eid] = abel.get(eid, 0) + d
    inc = tuple((eid, n) for eid, n in sorted(abel.items()) if n)
    return CellComplex(
        (("v",), ("a", "b"), ("f",)),
        {"a": (("v", 0),), "b": (("v", 0),), "f": inc},
        {"f": tuple(word)},
    )


def interval_complex() -> CellComplex:
    return CellComplex(
        (("p0", "p1"), ("e0",)),
        {"e0": (("p0", -1), ("p1", 1))},
        {},
    )


def cube_complex() -> CellComplex:
    """The solid cube [0,1]^3 as a regular cell complex (exercises dim 3)."""
    verts = [f"v{x}{y}{z}" for x in (0, 1) for y in (0, 1) for z in (0, 1)]
    edges = {}
    for x in (0, 1):
        for y in (0, 1):
            for z in (0, 1):
                if x == 0:
                    edges[f"ex{y}{z}"] = (f"v0{y}{z}", f"v1{y}{z}")
                if y == 0:
                    edges[f"ey{x}{z}"] = (f"v{x}0{z}", f"v{x}1{z}")
                if z == 0:
                    edges[f"ez{x}{y}"] = (f"v{x}{y}0", f"v{x}{y}1")
    boundary = {eid: ((t, -1), (h, 1)) for eid, (t, h) in edges.items()}
    # six faces, each an oriented 4-edge loop
    words = {
        "fz0": (("ex00", 1), ("ey10", 1), ("ex10", -1), ("ey00", -1)),
        "fz1": (("ex01", 1), ("ey11", 1), ("ex11", -1), ("ey01", -1)),
        "fy0": (("ex00", 1), ("ez10", 1), ("ex01", -1), ("ez00", -1)),
        "fy1": (("ex10", 1), ("ez11", 1), ("ex11", -1), ("ez01", -1)),
        "fx0": (("ey00", 1), ("ez01", 1), ("ey01", -1), ("ez00", -1)),
        "fx1": (("ey10", 1), ("ez11", 1), ("ey11", -1), ("ez10", -1)),
    }
    for fid, word in words.items():
        abel = {}
        for eid, d in word:
            abel[eid] = abel.get(eid, 0) + d
        boundary[fid] = tuple((eid, n) for eid, n in sorted(abel.items()) if n)
    # the solid cell: signed sum of faces; signs chosen so the double
    # boundary cancels (outward/inward orientation bookkeeping)
    boundary["cube"] = (("fx0", -1), ("fx1", 1), ("fy0", 1), ("fy1", -1), ("fz0", -1), ("fz1", 1))
    return CellComplex(
        (tuple(verts), tuple(sorted(edges)), tuple(sorted(words)), ("cube",)),
        boundary,
        words,
    )


def exact_cocycle(c: CellComplex, potential: dict) -> OneCocycle:
    """Coboundary of a vertex potential h: w(e) = h(head) - h(tail)."""
    weights = {}
    for eid in c.cells[1] if len(c.cells) > 1 else ():
        tail, head = c.edge_endpoints(eid)
        weights[eid] = F(potential[head]) - F(potential[tail])
    return OneCocycle(weights)


def gauge_system(c: CellComplex, frames: dict, rank: int) -> LocalSystem:
    """Flat system U_e = P_head @ P_tail^-1 from invertible vertex frames."""
    from novikov_kit.exactalg import mat_inverse, mat_mul

    transports = {}
    for eid in c.cells[1] if len(c.cells) > 1 else ():
        tail, head = c.edge_endpoints(eid)
        mat = mat_mul([list(r) for r in frames[head]], mat_inverse([list(r) for r in frames[tail]]))
        transports[eid] = tuple(tuple(x) for x in mat)
    return LocalSystem(rank, transports)


@pytest.fixture
def torus_pair():
    return CellPair(torus_complex(), frozenset())
