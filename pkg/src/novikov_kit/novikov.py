"""Deformed relative twisted cochain complexes and their Novikov invariants.

The deformation multiplies each edge transport U_e by the monomial
s^(N*w(e)), where N clears the weight denominators and s = exp(-T/N), so
that the monodromy of a loop of period w is exp(-T*w) = s^(N*w). Background
Betti numbers are coranks over Q(s); jump parameters are positive real
roots of the coboundaries' invariant factors.

Transport conventions (pinned; ranks and factors do not depend on them):
  * every cell of dimension >= 1 is based at the lowest-id vertex of its
    closure; a face's attaching walk is rotated to start there;
  * a degree-0 row reads "transported tail value minus head value", so a
    loop of weight w with transport U contributes s^(N*w)*U - I (the circle
    with weight 1 and trivial coefficients gives exactly [s - 1]);
  * entries in degree >= 2 transport along the face's attaching walk; in
    degree >= 3 along a breadth-first edge path inside the closed cell,
    which is path-independent once flatness and the cocycle condition hold.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cellkit import (
    CellComplex,
    CellPair,
    LocalSystem,
    OneCocycle,
    ParsedDocument,
    check_cocycle,
    check_flat,
    euler_characteristic,
    relative_subcomplex,
    validate_complex,
    validate_pair,
    word_vertex_path,
)
from .errors import InputError, ParameterError
from .exactalg import (
    LaurentMatrix,
    LaurentPoly,
    Poly,
    RootInterval,
    evaluate_rank,
    invariant_factors,
    mat_identity,
    mat_inverse,
    mat_mul,
    poly_lcm,
    positive_real_roots,
    rank_generic,
    rational_rank,
    vanishes_at_root,
)

Frac = Fraction


@dataclass(frozen=True)
class NovikovInput:
    """Validated (pair, cocycle, local system) with the weight-clearing scale N."""

    pair: CellPair
    cocycle: OneCocycle
    system: LocalSystem
    scale: int
    incidence_transport: dict

    @classmethod
    def build(
        cls,
        pair: CellPair,
        cocycle: OneCocycle | None = None,
        system: LocalSystem | None = None,
        incidence_transport: dict | None = None,
    ) -> "NovikovInput":
        cx = pair.complex
        bad = validate_complex(cx)
        if bad:
            raise InputError(f"invalid complex: {bad[0].rule} at {bad[0].cell}: {bad[0].detail}")
        bad = validate_pair(pair)
        if bad:
            raise InputError(f"invalid pair: {bad[0].rule} at {bad[0].cell}: {bad[0].detail}")
        edges = cx.cells[1] if len(cx.cells) > 1 else ()
        if cocycle is None:
            cocycle = OneCocycle({eid: Fraction(0) for eid in edges})
        if system is None:
            system = LocalSystem.trivial(cx)
        bad = check_cocycle(cx, cocycle)
        if bad:
            raise InputError(f"cocycle condition fails at {bad[0].cell}: {bad[0].detail}")
        bad = check_flat(cx, system)
        if bad:
            raise InputError(f"flatness fails at {bad[0].cell}: {bad[0].detail}")
        scale = 1
        for eid in edges:
            den = cocycle[eid].denominator
            g = _gcd(scale, den)
            scale = scale // g * den
        return cls(pair, cocycle, system, scale, dict(incidence_transport or {}))

    @classmethod
    def from_document(cls, parsed: ParsedDocument) -> "NovikovInput":
        return cls.build(parsed.pair, parsed.cocycle, parsed.system, parsed.incidence_transport)

    @property
    def rank(self) -> int:
        return self.system.rank


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# --- transports: (integer s-exponent, rational matrix), always a pure monomial

def _t_mul(a, b):
    return (a[0] + b[0], tuple(tuple(r) for r in mat_mul([list(r) for r in a[1]], [list(r) for r in b[1]])))


def _t_inv(a):
    return (-a[0], tuple(tuple(r) for r in mat_inverse([list(r) for r in a[1]])))


class _Builder:
    """Assembles the deformed coboundary blocks for one NovikovInput."""

    def __init__(self, inp: NovikovInput):
        self.inp = inp
        self.cx = inp.pair.complex
        self.r = inp.system.rank
        self.ident = (0, tuple(tuple(r) for r in mat_identity(self.r)))
        self._edge_hat = {}
        self._edge_hat_inv = {}
        self._base = {}
        self._closure_skeleton_cache = {}

    def edge_hat(self, eid: str):
        """Deformed transport s^(N*w) * U along the edge orientation."""
        if eid not in self._edge_hat:
            exp = int(self.inp.scale * self.inp.cocycle[eid])
            self._edge_hat[eid] = (exp, tuple(tuple(r) for r in self.inp.system[eid]))
        return self._edge_hat[eid]

    def edge_hat_inv(self, eid: str):
        if eid not in self._edge_hat_inv:
            self._edge_hat_inv[eid] = _t_inv(self.edge_hat(eid))
        return self._edge_hat_inv[eid]

    def base_vertex(self, cid: str) -> str:
        """Lowest-id vertex of the closed cell."""
        if cid not in self._base:
            d = self.cx.dim_of(cid)
            if d == 0:
                self._base[cid] = cid
            elif d == 1:
                self._base[cid] = min(self.cx.edge_endpoints(cid))
            else:
                verts = [c for c in self.cx.closure(cid) if self.cx.dim_of(c) == 0]
                if not verts:
                    raise InputError(f"cell {cid!r} has no vertices in its closure")
                self._base[cid] = min(verts)
        return self._base[cid]

    # degree 0 -> 1 -----------------------------------------------------

    def degree0_slots(self, eid: str):
        """Signed transports of the (edge, vertex) contributions.

        The row reads T(b<-tail) at the tail slot minus T(b<-head) at the
        head slot; a loop therefore contributes s^(N*w)*U - I at its single
        vertex (head-based convention).
        """
        tail, head = self.cx.edge_endpoints(eid)
        b = self.base_vertex(eid)
        if tail == head or b == head:
            t_tail, t_head = self.edge_hat(eid), self.ident
        else:
            t_tail, t_head = self.ident, self.edge_hat_inv(eid)
        minus_head = (t_head[0], tuple(tuple(-x for x in row) for row in t_head[1]))
        return [(tail, t_tail), (head, minus_head)]

    # degree 1 -> 2 -----------------------------------------------------

    def face_walk(self, fid: str):
        """Rotated attaching walk with prefix transports W_0..W_k."""
        word = self.cx.attaching_words.get(fid)
        if not word:
            raise InputError(f"2-cell {fid!r} has no attaching word")
        path = word_vertex_path(self.cx, word)
        if path is None or path[0] != path[-1]:
            raise InputError(f"2-cell {fid!r} has a broken attaching word")
        b = self.base_vertex(fid)
        starts = [i for i, v in enumerate(path[:-1]) if v == b]
        rot = starts[0]
        word = word[rot:] + word[:rot]
        prefixes = [self.ident]
        for eid, direction in word:
            step = self.edge_hat(eid) if direction == 1 else self.edge_hat_inv(eid)
            prefixes.append(_t_mul(step, prefixes[-1]))
        return word, prefixes

    def degree1_contributions(self, fid: str):
        """List of (edge id, sign, transport to the face base) along the walk."""
        word, prefixes = self.face_walk(fid)
        out = []
        for i, (eid, direction) in enumerate(word, start=1):
            tail, head = self.cx.edge_endpoints(eid)
            b = self.base_vertex(eid)
            # walk position carrying the edge's base vertex (head position
            # for head-based edges and loops, tail position otherwise)
            if tail == head or b == head:
                pos = i if direction == 1 else i - 1
            else:
                pos = i - 1 if direction == 1 else i
            out.append((eid, direction, _t_inv(prefixes[pos])))
        return out

    # degree >= 2 ---------------------------------------------------------

    def _closure_skeleton(self, cid: str):
        if cid not in self._closure_skeleton_cache:
            closure = self.cx.closure(cid)
            adj: dict = {}
            for eid in sorted(c for c in closure if self.cx.dim_of(c) == 1):
                tail, head = self.cx.edge_endpoints(eid)
                adj.setdefault(tail, []).append((head, eid, +1))
                adj.setdefault(head, []).append((tail, eid, -1))
            self._closure_skeleton_cache[cid] = adj
        return self._closure_skeleton_cache[cid]

    def path_transport(self, cid: str, src: str, dst: str):
        """Transport dst <- src along a BFS edge path in the closure of cid.

        Path-independent for valid inputs: loops inside a closed cell are
        null-homotopic, so both the holonomy (flatness) and the weight sum
        (cocycle condition) are path-independent.
        """
        if src == dst:
            return self.ident
        adj = self._closure_skeleton(cid)
        prev = {src: None}
        queue = [src]
        while queue:
            cur = queue.pop(0)
            if cur == dst:
                break
            for nxt, eid, direction in adj.get(cur, ()):
                if nxt not in prev:
                    prev[nxt] = (cur, eid, direction)
                    queue.append(nxt)
        if dst not in prev:
            raise InputError(f"closure 1-skeleton of {cid!r} is disconnected")
        steps = []
        cur = dst
        while prev[cur] is not None:
            cur, eid, direction = prev[cur]
            steps.append((eid, direction))
        transport = self.ident
        for eid, direction in reversed(steps):
            step = self.edge_hat(eid) if direction == 1 else self.edge_hat_inv(eid)
            transport = _t_mul(step, transport)
        return transport

    def high_degree_block(self, cid: str, face: str, coeff: int):
        override = self.inp.incidence_transport.get((cid, face))
        if override is not None:
            weight = self.path_transport(cid, self.base_vertex(face), self.base_vertex(cid))[0]
            transport = (weight, tuple(tuple(r) for r in override))
        else:
            transport = self.path_transport(cid, self.base_vertex(face), self.base_vertex(cid))
        return (transport[0], tuple(tuple(coeff * x for x in row) for row in transport[1]))


def _assemble(
    builder: _Builder,
    row_cells,
    col_cells,
    contributions,
) -> LaurentMatrix:
    """Blocked Laurent matrix from per-(row cell, col cell) monomial contributions."""
    r = builder.r
    col_index = {cid: k for k, cid in enumerate(col_cells)}
    m = LaurentMatrix.zeros(len(row_cells) * r, len(col_cells) * r)
    for i, rid in enumerate(row_cells):
        for cid, transport in contributions(rid):
            j = col_index.get(cid)
            if j is None:
                continue
            exp, mat = transport
            for a in range(r):
                row = m.data[i * r + a]
                for b in range(r):
                    c = mat[a][b]
                    if c:
                        row[j * r + b] = row[j * r + b] + LaurentPoly.monomial(c, exp)
    return m


def _coboundaries(inp: NovikovInput, orders) -> dict:
    """Deformed coboundary matrices delta_d : C^d -> C^(d+1) on given cell orders."""
    builder = _Builder(inp)
    cx = inp.pair.complex
    out = {}
    top = len(orders) - 1
    for d in range(top):
        rows = orders[d + 1]
        cols = orders[d]

        if d == 0:
            def contributions(eid):
                return builder.degree0_slots(eid)
        elif d == 1:
            def contributions(fid):
                acc = {}
                for eid, sign, transport in builder.degree1_contributions(fid):
                    signed = (
                        transport[0],
                        tuple(tuple(sign * x for x in row) for row in transport[1]),
                    )
                    acc.setdefault(eid, []).append(signed)
                return [(eid, t) for eid, ts in acc.items() for t in ts]
        else:
            def contributions(cid):
                return [
                    (face, builder.high_degree_block(cid, face, coeff))
                    for face, coeff in cx.boundary_of(cid)
                    if coeff
                ]

        out[d] = _assemble(builder, rows, cols, contributions)
    return out


@dataclass
class DeformedComplex:
    """Relative deformed cochain complex: per-degree coboundary LaurentMatrix."""

    input: NovikovInput
    orders: tuple
    matrices: dict

    @property
    def top_degree(self) -> int:
        return len(self.orders) - 1

    def delta(self, d: int) -> LaurentMatrix | None:
        return self.matrices.get(d)

    def cochain_dim(self, d: int) -> int:
        if 0 <= d < len(self.orders):
            return len(self.orders[d]) * self.input.rank
        return 0

    def squares_to_zero(self) -> bool:
        for d in range(self.top_degree):
            a = self.matrices.get(d)
            b = self.matrices.get(d + 1)
            if a is None or b is None:
                continue
            if not (b @ a).is_zero:
                return False
        return True


def build_deformed(inp: NovikovInput) -> DeformedComplex:
    """Deformed coboundaries of the relative complex (subcomplex cells dropped)."""
    orders = relative_subcomplex(inp.pair)
    return DeformedComplex(inp, orders, _coboundaries(inp, orders))


@dataclass
class ConeComplex:
    """Algebraic mapping cone of the restriction to the subcomplex."""

    input: NovikovInput
    ambient_orders: tuple
    sub_orders: tuple
    matrices: dict

    def cochain_dim(self, k: int) -> int:
        r = self.input.rank
        amb = len(self.ambient_orders[k]) if 0 <= k < len(self.ambient_orders) else 0
        sub = len(self.sub_orders[k - 1]) if 0 <= k - 1 < len(self.sub_orders) else 0
        return (amb + sub) * r

    def delta(self, k: int) -> LaurentMatrix | None:
        return self.matrices.get(k)

    def squares_to_zero(self) -> bool:
        ks = sorted(self.matrices)
        for k in ks:
            nxt = self.matrices.get(k + 1)
            if nxt is not None and not (nxt @ self.matrices[k]).is_zero:
                return False
        return True


def build_cone(inp: NovikovInput) -> ConeComplex:
    """Cone of the restriction map: Cone^k = C^k(X) (+) C^(k-1)(A).

    The differential is (eta, eta1) |-> (delta eta, -delta_A eta1 + eta|_A).
    Its cohomology computes the relative cohomology of the pair and must
    agree with the relative model in every degree.
    """
    cx = inp.pair.complex
    ambient = tuple(tuple(sorted(layer)) for layer in cx.cells)
    sub = tuple(
        tuple(sorted(cid for cid in layer if cid in inp.pair.sub)) for layer in cx.cells
    )
    dx = _coboundaries(inp, ambient)
    da = _coboundaries(inp, sub)
    r = inp.rank
    top = len(ambient) - 1
    matrices = {}
    for k in range(top + 1):
        amb_k = len(ambient[k]) if k <= top else 0
        amb_k1 = len(ambient[k + 1]) if k + 1 <= top else 0
        sub_km1 = len(sub[k - 1]) if k - 1 >= 0 else 0
        sub_k = len(sub[k]) if k <= top else 0
        rows = (amb_k1 + sub_k) * r
        cols = (amb_k + sub_km1) * r
        if rows == 0 or cols == 0:
            if rows or cols:
                matrices[k] = LaurentMatrix.zeros(rows, cols)
            continue
        m = LaurentMatrix.zeros(rows, cols)
        dxk = dx.get(k)
        if dxk is not None:
            for i in range(dxk.rows):
                for j in range(dxk.cols):
                    m.data[i][j] = dxk.data[i][j]
        # restriction block: identity on ambient cells that lie in A
        amb_index = {cid: i for i, cid in enumerate(ambient[k])}
        for sj, cid in enumerate(sub[k]):
            j = amb_index[cid]
            for a in range(r):
                m.data[amb_k1 * r + sj * r + a][j * r + a] = LaurentPoly.monomial(1, 0)
        dak = da.get(k - 1)
        if dak is not None:
            for i in range(dak.rows):
                for j in range(dak.cols):
                    e = dak.data[i][j]
                    if not e.is_zero:
                        m.data[amb_k1 * r + i][amb_k * r + j] = -e
        matrices[k] = m
    return ConeComplex(inp, ambient, sub, matrices)


# ---------------------------------------------------------------------------
# invariants of the deformation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JumpEntry:
    """One jump parameter in one degree: where the Betti number exceeds background."""

    interval: RootInterval
    deficit: int
    factor: Poly

    def to_json(self):
        return {
            "interval": self.interval.to_json(),
            "deficit": self.deficit,
            "factor": self.factor.to_json(),
        }


@dataclass
class NovikovResult:
    background: tuple[int, ...]
    jumps: dict
    scale: int
    euler_alternating: int
    euler_expected: int

    @property
    def euler_ok(self) -> bool:
        return self.euler_alternating == self.euler_expected

    def to_json(self):
        return {
            "background": list(self.background),
            "jumps": {
                str(d): [e.to_json() for e in entries] for d, entries in sorted(self.jumps.items())
            },
            "scale_N": self.scale,
            "t_from_s": "T = -N*ln(s)",
            "euler_check": {
                "alternating_sum": self.euler_alternating,
                "rank_times_chi": self.euler_expected,
                "ok": self.euler_ok,
            },
        }


def _generic_ranks(dc: DeformedComplex) -> dict:
    return {d: rank_generic(m) for d, m in dc.matrices.items()}


def background_betti(inp: NovikovInput, dc: DeformedComplex | None = None) -> tuple[int, ...]:
    """Generic-in-T Betti numbers: corank over the rational function field."""
    dc = dc or build_deformed(inp)
    ranks = _generic_ranks(dc)
    out = []
    for d in range(dc.top_degree + 1):
        out.append(dc.cochain_dim(d) - ranks.get(d, 0) - ranks.get(d - 1, 0))
    return tuple(out)


def betti_at(inp: NovikovInput, s0: Fraction, dc: DeformedComplex | None = None) -> tuple[int, ...]:
    """Betti numbers of the complex evaluated at a positive rational s0."""
    if s0 <= 0:
        raise ParameterError(f"deformation point must be positive, got {s0}")
    dc = dc or build_deformed(inp)
    ranks = {d: evaluate_rank(m, s0) for d, m in dc.matrices.items()}
    out = []
    for d in range(dc.top_degree + 1):
        out.append(dc.cochain_dim(d) - ranks.get(d, 0) - ranks.get(d - 1, 0))
    return tuple(out)


def jump_points(inp: NovikovInput, dc: DeformedComplex | None = None) -> dict:
    """Per degree: isolated positive roots where the Betti number jumps up.

    The jump locus in degree d is the positive root set of the invariant
    factors of delta_d and delta_(d-1); the deficit at a root is the total
    rank drop of the two matrices there.
    """
    dc = dc or build_deformed(inp)
    factors = {d: invariant_factors(m) for d, m in dc.matrices.items()}
    jumps: dict = {}
    for d in range(dc.top_degree + 1):
        chain_here = factors.get(d)
        chain_below = factors.get(d - 1)
        locus = Poly((1,))
        for chain in (chain_here, chain_below):
            if chain and chain.factors:
                last = chain.factors[-1]
                if last.degree >= 1:
                    locus = poly_lcm(locus, last.squarefree_part())
        if locus.degree < 1:
            continue
        sq = locus.squarefree_part()
        entries = []
        for iv in positive_real_roots(sq):
            deficit = 0
            for chain in (chain_here, chain_below):
                if not chain:
                    continue
                deficit += sum(
                    1 for f in chain.factors if f.degree >= 1 and vanishes_at_root(f, sq, iv)
                )
            if deficit > 0:
                entries.append(JumpEntry(iv, deficit, sq))
        if entries:
            jumps[d] = entries
    return jumps


def novikov_result(inp: NovikovInput, dc: DeformedComplex | None = None) -> NovikovResult:
    dc = dc or build_deformed(inp)
    background = background_betti(inp, dc)
    jumps = jump_points(inp, dc)
    alt = sum((-1) ** d * b for d, b in enumerate(background))
    expected = inp.rank * euler_characteristic(inp.pair)
    return NovikovResult(background, jumps, inp.scale, alt, expected)


def cone_betti(inp: NovikovInput, cone: ConeComplex | None = None) -> tuple[int, ...]:
    """Background Betti numbers of the mapping cone (cross-check route)."""
    cone = cone or build_cone(inp)
    top = len(cone.ambient_orders) - 1
    ranks = {k: rank_generic(m) for k, m in cone.matrices.items()}
    out = []
    for k in range(top + 1):
        out.append(cone.cochain_dim(k) - ranks.get(k, 0) - ranks.get(k - 1, 0))
    return tuple(out)


def cone_betti_at(inp: NovikovInput, s0: Fraction, cone: ConeComplex | None = None) -> tuple[int, ...]:
    cone = cone or build_cone(inp)
    top = len(cone.ambient_orders) - 1
    ranks = {k: evaluate_rank(m, s0) for k, m in cone.matrices.items()}
    out = []
    for k in range(top + 1):
        out.append(cone.cochain_dim(k) - ranks.get(k, 0) - ranks.get(k - 1, 0))
    return tuple(out)


def untwisted_betti(pair: CellPair, system: LocalSystem) -> tuple[int, ...]:
    """Betti numbers of the relative complex with constant twist (T = 0)."""
    inp = NovikovInput.build(pair, None, system)
    return betti_at(inp, Fraction(1))
