"""Exact linear algebra over Q, Q[s] and Laurent-monomial-twisted matrices.

Everything in this module is exact: rationals are `fractions.Fraction`,
polynomials are dense coefficient tuples in the deformation variable s
(lowest degree first), and matrix entries carry an integer Laurent offset
so that an entry s^k * p(s) always stores p with nonzero constant term.

Rank over the rational-function field is computed by fraction-free
(Bareiss) elimination after clearing offsets; invariant factors come from
a Smith-form reduction over Q[s]; positive real roots are isolated by
sign-variation (Descartes) bisection with exact rational endpoints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _int_gcd

from .errors import ParameterError

Frac = Fraction


def parse_fraction(value) -> Fraction:
    """Parse "p/q" / "p" strings or ints into an exact rational.

    Floats are rejected: the exact core admits rational data only.
    """
    if isinstance(value, bool):
        raise ParameterError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParameterError(f"not a rational: {value!r}") from exc
    raise ParameterError(f"not a rational: {value!r} (floats are rejected, use 'p/q' strings)")


def fraction_decimal(x: Fraction, digits: int) -> str:
    """Decimal rendering with `digits` places, round half away from zero."""
    sign = "-" if x < 0 else ""
    x = abs(x)
    scaled = x * 10**digits
    units = scaled.numerator // scaled.denominator
    if 2 * (scaled - units) >= 1:
        units += 1
    if digits == 0:
        return f"{sign}{units}"
    whole, frac = divmod(units, 10**digits)
    return f"{sign}{whole}.{str(frac).rjust(digits, '0')}"


class Poly:
    """Dense univariate polynomial over Fraction, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((Fraction(c),))

    @classmethod
    def monomial(cls, c, k: int) -> "Poly":
        return cls((0,) * k + (Fraction(c),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise ParameterError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def valuation(self) -> int:
        """Multiplicity of the root s = 0."""
        if self.is_zero:
            raise ParameterError("zero polynomial has no valuation")
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        raise AssertionError

    def __bool__(self):
        return not self.is_zero

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(tuple(c * other for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    if cb:
                        out[i + j] += ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def __call__(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db, lb = other.degree, other.leading
        q = [Fraction(0)] * max(0, len(rem) - db)
        for i in range(len(rem) - db - 1, -1, -1):
            c = rem[i + db] / lb
            if c:
                q[i] = c
                for j, oc in enumerate(other.coeffs):
                    rem[i + j] -= c * oc
        return Poly(q), Poly(rem[:db] if db > 0 else [])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        lead = self.leading
        return Poly(tuple(c / lead for c in self.coeffs))

    def derivative(self) -> "Poly":
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def shifted(self, k: int) -> "Poly":
        """Multiply by s^k (k >= 0)."""
        if self.is_zero:
            return self
        return Poly((0,) * k + self.coeffs)

    def drop_valuation(self) -> tuple[int, "Poly"]:
        """Split off the s^v factor, returning (v, p/s^v)."""
        if self.is_zero:
            return 0, self
        v = self.valuation()
        return v, Poly(self.coeffs[v:])

    def squarefree_part(self) -> "Poly":
        d = self.derivative()
        if d.is_zero:
            return self.monic()
        g = poly_gcd(self, d)
        if g.degree <= 0:
            return self.monic()
        return (self // g).monic()

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, coeffs) -> "Poly":
        return cls([parse_fraction(c) for c in coeffs])

    def __repr__(self):
        if self.is_zero:
            return "Poly(0)"
        terms = [f"{c}*s^{i}" if i else f"{c}" for i, c in enumerate(self.coeffs) if c]
        return "Poly(" + " + ".join(terms) + ")"


POLY_ZERO = Poly()
POLY_ONE = Poly((1,))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q[s] (Euclid with monic normalization)."""
    while not b.is_zero:
        a, b = b, a % b
        if not b.is_zero:
            b = b.monic()
    return a.monic() if not a.is_zero else a


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero or b.is_zero:
        return POLY_ZERO
    return ((a * b) // poly_gcd(a, b)).monic()


class LaurentPoly:
    """A value s^offset * p(s) with p zero or of nonzero constant term."""

    __slots__ = ("offset", "poly")

    def __init__(self, offset: int = 0, poly: Poly = POLY_ZERO):
        if poly.is_zero:
            self.offset, self.poly = 0, POLY_ZERO
        else:
            v, reduced = poly.drop_valuation()
            self.offset, self.poly = offset + v, reduced

    @classmethod
    def monomial(cls, c, k: int) -> "LaurentPoly":
        c = Fraction(c)
        if c == 0:
            return cls()
        return cls(k, Poly((c,)))

    @property
    def is_zero(self) -> bool:
        return self.poly.is_zero

    def __eq__(self, other):
        return (
            isinstance(other, LaurentPoly)
            and self.poly == other.poly
            and (self.is_zero or self.offset == other.offset)
        )

    def __hash__(self):
        return hash((self.offset, self.poly))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        base = min(self.offset, other.offset)
        return LaurentPoly(
            base,
            self.poly.shifted(self.offset - base) + other.poly.shifted(other.offset - base),
        )

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.offset, -self.poly)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.is_zero or other.is_zero:
            return LaurentPoly()
        return LaurentPoly(self.offset + other.offset, self.poly * other.poly)

    def scale(self, c) -> "LaurentPoly":
        c = Fraction(c)
        if c == 0:
            return LaurentPoly()
        return LaurentPoly(self.offset, self.poly * c)

    def evaluate(self, s0: Fraction) -> Fraction:
        if s0 <= 0:
            raise ParameterError(f"evaluation point must be positive, got {s0}")
        return s0**self.offset * self.poly(s0)

    def to_json(self):
        return {"offset": self.offset, "coeffs": self.poly.to_json()}

    def __repr__(self):
        return f"LaurentPoly(s^{self.offset} * {self.poly!r})"


LAURENT_ZERO = LaurentPoly()


@dataclass
class LaurentMatrix:
    """Dense rows x cols matrix of LaurentPoly entries."""

    rows: int
    cols: int
    data: list  # list of rows of LaurentPoly

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "LaurentMatrix":
        return cls(rows, cols, [[LAURENT_ZERO] * cols for _ in range(rows)])

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries) -> "LaurentMatrix":
        m = cls.zeros(rows, cols)
        for (i, j), v in entries.items():
            m.data[i][j] = v
        return m

    def entry(self, i: int, j: int) -> LaurentPoly:
        return self.data[i][j]

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for row in self.data for e in row)

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.cols != other.rows:
            raise ParameterError("matrix dimensions do not match")
        out = LaurentMatrix.zeros(self.rows, other.cols)
        for i in range(self.rows):
            row = self.data[i]
            for k in range(self.cols):
                a = row[k]
                if a.is_zero:
                    continue
                brow = other.data[k]
                orow = out.data[i]
                for j in range(other.cols):
                    b = brow[j]
                    if not b.is_zero:
                        orow[j] = orow[j] + a * b
        return out

    def evaluate(self, s0: Fraction) -> list[list[Fraction]]:
        if s0 <= 0:
            raise ParameterError(f"evaluation point must be positive, got {s0}")
        return [[e.evaluate(s0) for e in row] for row in self.data]

    def to_json(self):
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [
                [i, j, self.data[i][j].to_json()]
                for i in range(self.rows)
                for j in range(self.cols)
                if not self.data[i][j].is_zero
            ],
        }


# ---------------------------------------------------------------------------
# fraction-free rank over Q(s)
# ---------------------------------------------------------------------------

def _zstrip(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _zmul(a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] += ca * cb
    return _zstrip(out)


def _zsub(a: list[int], b: list[int]) -> list[int]:
    out = list(a) + [0] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return _zstrip(out)


def _zdiv_exact(a: list[int], b: list[int]) -> list[int]:
    """Exact division in Z[s]; the Bareiss identity guarantees exactness."""
    if not a:
        return []
    rem = list(a)
    db, lb = len(b) - 1, b[-1]
    q = [0] * (len(rem) - db)
    for i in range(len(rem) - db - 1, -1, -1):
        c = rem[i + db]
        if c % lb != 0:
            raise AssertionError("non-exact division in fraction-free elimination")
        c //= lb
        if c:
            q[i] = c
            for j, oc in enumerate(b):
                rem[i + j] -= c * oc
    if any(rem):
        raise AssertionError("non-exact division in fraction-free elimination")
    return _zstrip(q)


def _integer_poly_rows(m: LaurentMatrix) -> list[list[list[int]]]:
    """Clear the global Laurent offset and per-row denominators.

    Multiplying the whole matrix by s^(-min offset) and each row by a
    positive integer changes neither the rank over Q(s) nor which rows
    vanish, and leaves every entry in Z[s].
    """
    offsets = [e.offset for row in m.data for e in row if not e.is_zero]
    base = min(offsets) if offsets else 0
    rows = []
    for row in m.data:
        polys = [
            (e.poly.shifted(e.offset - base).coeffs if not e.is_zero else ())
            for e in row
        ]
        denom = 1
        for cs in polys:
            for c in cs:
                denom = denom * c.denominator // _int_gcd(denom, c.denominator)
        rows.append([_zstrip([int(c * denom) for c in cs]) for cs in polys])
    return rows


def rank_generic(m: LaurentMatrix) -> int:
    """Rank of m over the field of rational functions Q(s).

    Fraction-free Bareiss elimination; the pivot is the first nonzero entry
    in row-major order with minimal polynomial degree (deterministic).
    """
    if m.rows == 0 or m.cols == 0:
        return 0
    a = _integer_poly_rows(m)
    n_rows, n_cols = m.rows, m.cols
    rank = 0
    prev = [1]
    while rank < min(n_rows, n_cols):
        piv_pos = None
        piv_deg = None
        for i in range(rank, n_rows):
            for j in range(rank, n_cols):
                e = a[i][j]
                if e and (piv_deg is None or len(e) - 1 < piv_deg):
                    piv_deg = len(e) - 1
                    piv_pos = (i, j)
        if piv_pos is None:
            return rank
        pi, pj = piv_pos
        a[rank], a[pi] = a[pi], a[rank]
        if pj != rank:
            for row in a:
                row[rank], row[pj] = row[pj], row[rank]
        piv = a[rank][rank]
        for i in range(rank + 1, n_rows):
            head = a[i][rank]
            for j in range(rank + 1, n_cols):
                a[i][j] = _zdiv_exact(_zsub(_zmul(piv, a[i][j]), _zmul(head, a[rank][j])), prev)
            a[i][rank] = []
        prev = piv
        rank += 1
    return rank


def rational_rank(rows: list[list[Fraction]]) -> int:
    """Rank of a matrix of Fractions by exact Gaussian elimination."""
    a = [list(r) for r in rows]
    n_rows = len(a)
    n_cols = len(a[0]) if a else 0
    rank = 0
    for col in range(n_cols):
        piv = None
        for i in range(rank, n_rows):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = 1 / a[rank][col]
        for i in range(rank + 1, n_rows):
            f = a[i][col] * inv
            if f:
                for j in range(col, n_cols):
                    a[i][j] -= f * a[rank][j]
        rank += 1
        if rank == n_rows:
            break
    return rank


def evaluate_rank(m: LaurentMatrix, s0: Fraction) -> int:
    """Rank of the rational matrix m(s0) for s0 > 0."""
    if s0 <= 0:
        raise ParameterError(f"evaluation point must be positive, got {s0}")
    if m.rows == 0 or m.cols == 0:
        return 0
    return rational_rank(m.evaluate(s0))


def mat_inverse(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Exact inverse of a square Fraction matrix; ParameterError if singular."""
    n = len(rows)
    a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            raise ParameterError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [c * inv for c in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [c - f * p for c, p in zip(a[i], a[col])]
    return [row[n:] for row in a]


def mat_mul(a: list[list[Fraction]], b: list[list[Fraction]]) -> list[list[Fraction]]:
    return [
        [sum((ra[k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))]
        for ra in a
    ]


def mat_identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# Smith form over Q[s]
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InvariantFactors:
    """Nonzero invariant factor chain with unit s-powers split off.

    factors[i] is monic with nonzero constant term (or the constant 1);
    s_powers[i] is the multiplicity of the stripped s^k factor, which is a
    unit for every s != 0 and corresponds to no real deformation parameter
    (it encodes T -> +infinity behaviour and is kept as metadata only).
    """

    factors: tuple[Poly, ...]
    s_powers: tuple[int, ...]

    def to_json(self):
        return {
            "factors": [f.to_json() for f in self.factors],
            "s_powers": list(self.s_powers),
        }


def _clear_offsets(m: LaurentMatrix) -> tuple[int, list[list[Poly]]]:
    offsets = [e.offset for row in m.data for e in row if not e.is_zero]
    base = min(offsets) if offsets else 0
    return base, [
        [e.poly.shifted(e.offset - base) if not e.is_zero else POLY_ZERO for e in row]
        for row in m.data
    ]


def invariant_factors(m: LaurentMatrix) -> InvariantFactors:
    """Smith-form invariant factors of m over the PID Q[s].

    Clearing the global Laurent offset multiplies every invariant factor by
    one and the same s-power, which the s_powers metadata absorbs; the
    reported (monic, constant-term-nonzero) factors are invariant under it.
    """
    if m.rows == 0 or m.cols == 0:
        return InvariantFactors((), ())
    base, a = _clear_offsets(m)
    n_rows, n_cols = m.rows, m.cols
    diag: list[Poly] = []
    t = 0
    while t < min(n_rows, n_cols):
        piv_pos = None
        piv_deg = None
        for i in range(t, n_rows):
            for j in range(t, n_cols):
                if a[i][j] and (piv_deg is None or a[i][j].degree < piv_deg):
                    piv_deg = a[i][j].degree
                    piv_pos = (i, j)
        if piv_pos is None:
            break
        pi, pj = piv_pos
        a[t], a[pi] = a[pi], a[t]
        if pj != t:
            for row in a:
                row[t], row[pj] = row[pj], row[t]

        while True:
            dirty = False
            for i in range(t + 1, n_rows):
                if a[i][t]:
                    q, r = a[i][t].divmod(a[t][t])
                    for j in range(t, n_cols):
                        a[i][j] = a[i][j] - q * a[t][j]
                    if r:
                        a[t], a[i] = a[i], a[t]
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, n_cols):
                if a[t][j]:
                    q, r = a[t][j].divmod(a[t][t])
                    for i in range(t, n_rows):
                        a[i][j] = a[i][j] - q * a[i][t]
                    if r:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        dirty = True
                        break
            if dirty:
                continue
            fix = None
            for i in range(t + 1, n_rows):
                for j in range(t + 1, n_cols):
                    if a[i][j] and (a[i][j] % a[t][t]):
                        fix = i
                        break
                if fix is not None:
                    break
            if fix is None:
                break
            for j in range(t, n_cols):
                a[t][j] = a[t][j] + a[fix][j]
        diag.append(a[t][t])
        t += 1

    # enforce the divisibility chain (gcd/lcm sweep), then normalize
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            g = poly_gcd(diag[i], diag[j])
            diag[i], diag[j] = g, (diag[i] * diag[j]) // g
    factors = []
    powers = []
    for d in diag:
        v, reduced = d.drop_valuation()
        factors.append(reduced.monic())
        # the global offset is a unit for s != 0 but belongs to the honest
        # Q[s] factor, so it is restored in the metadata (may be negative
        # for genuinely Laurent input)
        powers.append(v + base)
    return InvariantFactors(tuple(factors), tuple(powers))


# ---------------------------------------------------------------------------
# positive real root isolation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootInterval:
    """Closed rational interval containing exactly one positive real root."""

    lo: Fraction
    hi: Fraction

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def to_json(self):
        return {"lo": str(self.lo), "hi": str(self.hi), "exact": self.exact}


def _trial_divisors(n: int, bound: int = 10**4) -> list[int]:
    """Divisors of |n| by trial division up to `bound` plus the leftover cofactor.

    Complete whenever the second-largest prime factor of |n| is below the
    bound; otherwise best-effort (root isolation stays correct, only the
    exact-rational detection of a root may fall back to an interval).
    """
    n = abs(n)
    if n == 0:
        return []
    primes: dict[int, int] = {}
    d = 2
    while d * d <= n and d <= bound:
        while n % d == 0:
            primes[d] = primes.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        primes[n] = primes.get(n, 0) + 1
    divisors = [1]
    for p, k in primes.items():
        divisors = [dv * p**e for dv in divisors for e in range(k + 1)]
    return sorted(set(divisors))


def _rational_roots_positive(p: Poly) -> list[Fraction]:
    """Positive rational roots of p (complete for moderate coefficient sizes)."""
    if p.is_zero or p.degree <= 0:
        return []
    denom = 1
    for c in p.coeffs:
        denom = denom * c.denominator // _int_gcd(denom, c.denominator)
    ints = [int(c * denom) for c in p.coeffs]
    content = 0
    for c in ints:
        content = _int_gcd(content, abs(c))
    ints = [c // content for c in ints]
    a0 = next(c for c in ints if c != 0)
    an = ints[-1]
    roots = set()
    for num in _trial_divisors(a0):
        for den in _trial_divisors(an):
            cand = Fraction(num, den)
            if cand > 0 and p(cand) == 0:
                roots.add(cand)
    return sorted(roots)


def _taylor_shift(coeffs: list[Fraction], a: Fraction) -> list[Fraction]:
    """Coefficients of p(x + a), classic O(n^2) scheme."""
    out = list(coeffs)
    n = len(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] += a * out[j + 1]
    return out


def _sign_variations(coeffs) -> int:
    var = 0
    prev = 0
    for c in coeffs:
        if c == 0:
            continue
        sgn = 1 if c > 0 else -1
        if prev and sgn != prev:
            var += 1
        prev = sgn
    return var


def _variations_on(p: Poly, a: Fraction, b: Fraction) -> int:
    """Descartes bound for the number of roots of p in (a, b).

    Exact when it returns 0 or 1.
    """
    shifted = _taylor_shift(list(p.coeffs), a)  # p(x + a)
    scale = b - a
    acc = Fraction(1)
    for i in range(len(shifted)):
        shifted[i] *= acc
        acc *= scale
    rev = list(reversed(shifted))  # x^n * q(1/x)
    return _sign_variations(_taylor_shift(rev, Fraction(1)))


def positive_real_roots(p: Poly) -> list[RootInterval]:
    """Disjoint isolating intervals, one per distinct positive real root.

    Rational roots are detected where feasible and reported as degenerate
    [r, r] intervals; the rest are isolated by sign-variation bisection on
    the squarefree part. Output is ordered by left endpoint.
    """
    if p.is_zero:
        raise ParameterError("cannot isolate roots of the zero polynomial")
    _, reduced = p.drop_valuation()
    if reduced.degree <= 0:
        return []
    sq = reduced.squarefree_part()
    rational = list(_rational_roots_positive(sq))
    rem = sq
    for r in rational:
        rem = rem // Poly((-r, 1))

    intervals: list[RootInterval] = []
    if rem.degree >= 1:
        bound = Fraction(1) + max(abs(c) for c in rem.coeffs) / abs(rem.leading)
        stack = [(Fraction(0), bound)]
        while stack:
            a, b = stack.pop()
            v = _variations_on(rem, a, b)
            if v == 0:
                continue
            mid = (a + b) / 2
            if v == 1:
                if rem(a) * rem(b) < 0:
                    intervals.append(RootInterval(a, b))
                else:
                    stack.append((a, mid))
                    stack.append((mid, b))
                continue
            if rem(mid) == 0:
                # the bisection midpoint hit a rational root missed by trial division
                rational.append(mid)
                rem = rem // Poly((-mid, 1))
                stack = [(Fraction(0), bound)]
                intervals = []
                continue
            stack.append((a, mid))
            stack.append((mid, b))

    def shrink(iv: RootInterval) -> RootInterval:
        lo, hi = iv.lo, iv.hi
        while any(lo <= r <= hi for r in rational):
            mid = (lo + hi) / 2
            if rem(lo) * rem(mid) < 0:
                hi = mid
            else:
                lo = mid
        return RootInterval(lo, hi)

    intervals = [shrink(iv) for iv in intervals]
    changed = True
    while changed:
        changed = False
        intervals.sort(key=lambda iv: (iv.lo, iv.hi))
        for i, j in itertools.combinations(range(len(intervals)), 2):
            a, b = intervals[i], intervals[j]
            if a.hi > b.lo and b.hi > a.lo:
                mid = (a.lo + a.hi) / 2
                if rem(a.lo) * rem(mid) < 0:
                    intervals[i] = RootInterval(a.lo, mid)
                else:
                    intervals[i] = RootInterval(mid, a.hi)
                changed = True
                break

    out = [RootInterval(r, r) for r in sorted(set(rational))] + intervals
    out.sort(key=lambda iv: (iv.lo, iv.hi))
    return out


def vanishes_at_root(q: Poly, isolator: Poly, iv: RootInterval) -> bool:
    """Does q vanish at the root of `isolator` isolated by iv?

    `isolator` must be squarefree, have exactly one root inside iv, and not
    vanish at the interval endpoints.
    """
    if q.is_zero:
        return True
    if iv.exact:
        return q(iv.lo) == 0
    g = poly_gcd(q, isolator)
    if g.degree <= 0:
        return False
    return g(iv.lo) * g(iv.hi) < 0
