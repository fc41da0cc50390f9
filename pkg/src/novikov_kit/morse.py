"""Morse counting polynomial, Novikov polynomial and the (1+lambda) certificate.

Polynomials in lambda live in Z[lambda] and are plain integer coefficient
lists, lowest degree first. The certificate Q is the unique formal quotient
(M - N)/(1 + lambda); the inequalities hold for the data iff the remainder
at lambda = -1 vanishes and every quotient coefficient is a non-negative
integer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cellkit import CellPair, LocalSystem, parse_document
from .errors import InputError, ParameterError
from .novikov import untwisted_betti


def _strip(coeffs) -> list[int]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def poly_add(a, b) -> list[int]:
    out = list(a) + [0] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] += c
    return _strip(out)


def poly_sub(a, b) -> list[int]:
    return poly_add(a, [-c for c in b])


def poly_shift(a, k: int) -> list[int]:
    return _strip([0] * k + list(a))


def poly_eval(a, x: int) -> int:
    acc = 0
    for c in reversed(list(a)):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class LocalModel:
    """Finite cellular model of a critical neighborhood with its twisted system."""

    pair: CellPair
    system: LocalSystem


@dataclass(frozen=True)
class CriticalSubsetData:
    """Declared critical-subset data: index and twisted Poincare coefficients.

    The index and Poincare polynomial are an input contract; checking the
    minimal-degeneracy conditions needs smooth data outside this tool.
    """

    label: str
    index: int
    poincare: tuple[int, ...]
    local_model: LocalModel | None = None

    def __post_init__(self):
        if self.index < 0:
            raise InputError(f"critical subset {self.label!r}: index must be >= 0")
        if any(c < 0 for c in self.poincare):
            raise InputError(
                f"critical subset {self.label!r}: Poincare coefficients must be >= 0"
            )

    @classmethod
    def from_json(cls, entry: dict) -> "CriticalSubsetData":
        if not isinstance(entry, dict):
            raise InputError("critical data entries must be objects")
        try:
            label = str(entry["label"])
            index = entry["index"]
            poincare = entry["poincare"]
        except KeyError as exc:
            raise InputError(f"critical data entry missing {exc}") from exc
        if not isinstance(index, int):
            raise InputError(f"critical subset {label!r}: index must be an integer")
        if not isinstance(poincare, list) or not all(isinstance(c, int) for c in poincare):
            raise InputError(f"critical subset {label!r}: poincare must be a list of integers")
        model = None
        if entry.get("local_model") is not None:
            parsed = parse_document(entry["local_model"])
            system = parsed.system
            if system is None:
                from .cellkit import LocalSystem as _LS

                system = _LS.trivial(parsed.complex)
            model = LocalModel(parsed.pair, system)
        return cls(label, index, tuple(poincare), model)

    def to_json(self) -> dict:
        out = {"label": self.label, "index": self.index, "poincare": list(self.poincare)}
        if self.local_model is not None:
            from .cellkit import document_of

            out["local_model"] = document_of(
                self.local_model.pair, None, self.local_model.system
            )
        return out


def morse_polynomial(critical: list[CriticalSubsetData]) -> list[int]:
    """Sum over critical subsets of lambda^index * P(lambda)."""
    total: list[int] = []
    for c in critical:
        total = poly_add(total, poly_shift(c.poincare, c.index))
    return total


def novikov_polynomial(background) -> list[int]:
    """Background Betti vector as a polynomial in lambda."""
    return _strip(list(background))


@dataclass(frozen=True)
class MorseReport:
    morse: tuple[int, ...]
    novikov: tuple[int, ...]
    certificate: tuple[int, ...] | None
    remainder_at_minus1: int
    negative_q: tuple[tuple[int, int], ...]  # (degree, coefficient)
    deficit: tuple[int, ...]  # M - N when the certificate fails

    @property
    def holds(self) -> bool:
        return self.certificate is not None

    def to_json(self) -> dict:
        out = {"M": list(self.morse), "N": list(self.novikov)}
        if self.holds:
            out["verdict"] = {"Q": list(self.certificate)}
        else:
            out["verdict"] = {
                "failure": {
                    "remainder_at_minus1": self.remainder_at_minus1,
                    "negative_q": [list(t) for t in self.negative_q],
                    "deficit": list(self.deficit),
                }
            }
        return out


def certify(morse, novikov) -> MorseReport:
    """Divide M - N by (1 + lambda) and decide the inequalities.

    q_k = sum_{i<=k} (-1)^(k-i) D_i with D = M - N; the certificate exists
    iff D(-1) = 0 and every q_k is >= 0 (integrality is automatic over Z).
    """
    m = _strip(morse)
    n = _strip(novikov)
    diff = poly_sub(m, n)
    remainder = poly_eval(diff, -1)
    full: list[int] = []
    acc = 0
    for c in diff:
        acc = c - acc
        full.append(acc)
    negative = tuple((k, c) for k, c in enumerate(full) if c < 0)
    # the top partial sum is +-D(-1); with zero remainder the rest is Q
    qs = _strip(full[:-1]) if full else []
    if remainder == 0 and not negative:
        # degree-0 consequence of the certificate: M_0 >= N_0
        m0 = m[0] if m else 0
        n0 = n[0] if n else 0
        if m0 - n0 < 0:
            raise AssertionError("certificate with negative degree-0 difference")
        return MorseReport(tuple(m), tuple(n), tuple(qs), 0, (), ())
    return MorseReport(tuple(m), tuple(n), None, remainder, negative, tuple(diff))


def local_model_contribution(c: CriticalSubsetData) -> tuple[int, ...]:
    """Betti vector of the local model's twisted cohomology, shifted by the index.

    With a trivial deformation this must reproduce lambda^index * P(lambda).
    """
    if c.local_model is None:
        raise ParameterError(f"critical subset {c.label!r} has no local model")
    betti = untwisted_betti(c.local_model.pair, c.local_model.system)
    return tuple([0] * c.index + list(betti))


def parse_critical_data(entries) -> list[CriticalSubsetData]:
    if not isinstance(entries, list):
        raise InputError("critical data must be a list")
    return [CriticalSubsetData.from_json(e) for e in entries]
