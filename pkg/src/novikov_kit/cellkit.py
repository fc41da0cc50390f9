"""Finite regular cell complexes, pairs, rational 1-cocycles and flat local systems.

All types are immutable values after construction and every operation is a
pure function. Validation returns violation lists (violations are data, not
failures); structurally malformed input raises InputError.

Document format (one JSON object):

    {
      "novikov_kit_schema": 1,
      "cells": {"0": [ids...], "1": [ids...], ...},
      "boundary": {cell_id: [[face_id, coeff], ...], ...},
      "attaching_words": {two_cell_id: [[edge_id, +1|-1], ...], ...},
      "subcomplex": [ids...],
      "cocycle": {edge_id: "p/q", ...},
      "local_system": {"rank": r, "transports": {edge_id: [["p/q", ...], ...]}},
      "incidence_transport": {"cell|face": [["p/q", ...], ...]}   # optional, dim >= 3
    }

An edge's boundary is [[tail, -1], [head, +1]]; a loop edge is recorded as
[[v, 0]] (or [] when the complex has a single vertex, in which case the
endpoint is inferred).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError
from .exactalg import mat_identity, mat_inverse, mat_mul, parse_fraction

SCHEMA_KEY = "novikov_kit_schema"
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Violation:
    """One invariant violation, naming the offending cell and rule."""

    rule: str
    cell: str
    detail: str

    def to_json(self):
        return {"rule": self.rule, "cell": self.cell, "detail": self.detail}


@dataclass(frozen=True)
class CellComplex:
    cells: tuple[tuple[str, ...], ...]
    boundary: dict
    attaching_words: dict
    _dims: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        dims = {}
        for d, layer in enumerate(self.cells):
            for cid in layer:
                if cid in dims:
                    raise InputError(f"duplicate cell id {cid!r}")
                dims[cid] = d
        object.__setattr__(self, "_dims", dims)

    @property
    def dimension(self) -> int:
        return len(self.cells) - 1

    def dim_of(self, cid: str) -> int:
        try:
            return self._dims[cid]
        except KeyError:
            raise InputError(f"unknown cell id {cid!r}") from None

    def has_cell(self, cid: str) -> bool:
        return cid in self._dims

    def boundary_of(self, cid: str):
        return self.boundary.get(cid, ())

    def edge_endpoints(self, eid: str) -> tuple[str, str]:
        """(tail, head) of a 1-cell; loops resolve to their single vertex."""
        entries = list(self.boundary_of(eid))
        if len(entries) == 2:
            tails = [c for c, n in entries if n == -1]
            heads = [c for c, n in entries if n == +1]
            if len(tails) == 1 and len(heads) == 1:
                return tails[0], heads[0]
        if len(entries) == 1 and entries[0][1] == 0:
            v = entries[0][0]
            return v, v
        if not entries:
            if len(self.cells[0]) == 1:
                v = self.cells[0][0]
                return v, v
            raise InputError(
                f"loop edge {eid!r} without endpoint record in a multi-vertex complex"
            )
        raise InputError(f"edge {eid!r} has malformed boundary {entries!r}")

    def closure(self, cid: str) -> set[str]:
        """All cells of the closed cell, including cid itself.

        For 2-cells the attaching word contributes edges whose net signed
        incidence cancels (they never appear in the boundary list).
        """
        out = {cid}
        stack = [cid]
        while stack:
            cur = stack.pop()
            d = self.dim_of(cur)
            if d == 0:
                continue
            if d == 1:
                for v in self.edge_endpoints(cur):
                    if v not in out:
                        out.add(v)
                        stack.append(v)
                continue
            faces = {face for face, _ in self.boundary_of(cur)}
            if d == 2:
                faces |= {eid for eid, _ in self.attaching_words.get(cur, ())}
            for face in faces:
                if face not in out:
                    out.add(face)
                    stack.append(face)
        return out

    def to_json(self):
        return {
            "cells": {str(d): list(layer) for d, layer in enumerate(self.cells)},
            "boundary": {cid: [list(t) for t in inc] for cid, inc in self.boundary.items()},
            "attaching_words": {
                cid: [list(t) for t in word] for cid, word in self.attaching_words.items()
            },
        }


@dataclass(frozen=True)
class CellPair:
    complex: CellComplex
    sub: frozenset

    def to_json(self):
        doc = self.complex.to_json()
        doc["subcomplex"] = sorted(self.sub)
        return doc


@dataclass(frozen=True)
class OneCocycle:
    """Rational periods of a closed 1-form, one per 1-cell."""

    weight: dict

    def __getitem__(self, eid: str) -> Fraction:
        try:
            return self.weight[eid]
        except KeyError:
            raise InputError(f"missing cocycle weight for edge {eid!r}") from None

    def to_json(self):
        return {eid: str(w) for eid, w in sorted(self.weight.items())}


@dataclass(frozen=True)
class LocalSystem:
    """Invertible rational transports tail-to-head along each 1-cell."""

    rank: int
    transport: dict

    def __getitem__(self, eid: str):
        try:
            return self.transport[eid]
        except KeyError:
            raise InputError(f"missing transport for edge {eid!r}") from None

    def inverse(self, eid: str):
        return mat_inverse([list(r) for r in self[eid]])

    @classmethod
    def trivial(cls, c: CellComplex, rank: int = 1) -> "LocalSystem":
        ident = tuple(tuple(r) for r in mat_identity(rank))
        edges = c.cells[1] if len(c.cells) > 1 else ()
        return cls(rank, {eid: ident for eid in edges})

    def to_json(self):
        return {
            "rank": self.rank,
            "transports": {
                eid: [[str(x) for x in row] for row in mat]
                for eid, mat in sorted(self.transport.items())
            },
        }


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def _abelianized_word(word) -> dict:
    out: dict = {}
    for eid, direction in word:
        out[eid] = out.get(eid, 0) + direction
    return {k: v for k, v in out.items() if v}


def word_vertex_path(c: CellComplex, word) -> list[str] | None:
    """Vertex sequence v_0 .. v_k of an attaching walk, or None if broken."""
    path = []
    for eid, direction in word:
        if not c.has_cell(eid) or c.dim_of(eid) != 1:
            return None
        tail, head = c.edge_endpoints(eid)
        start, end = (tail, head) if direction == 1 else (head, tail)
        if not path:
            path.append(start)
        elif path[-1] != start:
            return None
        path.append(end)
    return path


def validate_complex(c: CellComplex) -> list[Violation]:
    """All CellComplex invariants; empty report iff valid."""
    out: list[Violation] = []
    # referenced ids exist with the right dimension
    for cid, inc in c.boundary.items():
        if not c.has_cell(cid):
            out.append(Violation("unknown-cell", cid, "boundary recorded for unknown cell"))
            continue
        d = c.dim_of(cid)
        for face, coeff in inc:
            if not c.has_cell(face):
                out.append(Violation("unknown-cell", cid, f"boundary references unknown {face!r}"))
            elif c.dim_of(face) != d - 1:
                out.append(
                    Violation(
                        "dimension-mismatch",
                        cid,
                        f"boundary face {face!r} has dimension {c.dim_of(face)}, expected {d - 1}",
                    )
                )
    if out:
        return out

    # edges have head/tail (or loop) structure
    for eid in c.cells[1] if len(c.cells) > 1 else ():
        try:
            c.edge_endpoints(eid)
        except InputError as exc:
            out.append(Violation("edge-boundary", eid, str(exc)))
    if out:
        return out

    # double boundary vanishes (checked coefficient-wise over Z)
    for d in range(2, len(c.cells)):
        for cid in c.cells[d]:
            acc: dict = {}
            for face, n in c.boundary_of(cid):
                for sub_face, k in c.boundary_of(face):
                    acc[sub_face] = acc.get(sub_face, 0) + n * k
            bad = {k: v for k, v in acc.items() if v}
            if bad:
                out.append(Violation("double-boundary", cid, f"nonzero on {sorted(bad)}"))

    # attaching words: every 2-cell has a closed connected walk matching its incidence
    for fid in c.cells[2] if len(c.cells) > 2 else ():
        word = c.attaching_words.get(fid)
        if not word:
            out.append(Violation("missing-word", fid, "2-cell without attaching word"))
            continue
        path = word_vertex_path(c, word)
        if path is None:
            out.append(Violation("broken-word", fid, "attaching word is not a walk"))
            continue
        if path[0] != path[-1]:
            out.append(Violation("open-word", fid, "attaching word is not a closed walk"))
            continue
        inc = {cid: n for cid, n in c.boundary_of(fid) if n}
        if _abelianized_word(word) != inc:
            out.append(
                Violation(
                    "incidence-word-mismatch",
                    fid,
                    "incidence != abelianized word",
                )
            )
    for fid in c.attaching_words:
        if not c.has_cell(fid) or c.dim_of(fid) != 2:
            out.append(Violation("stray-word", fid, "attaching word on a non-2-cell"))
    return out


def check_cocycle(c: CellComplex, cocycle: OneCocycle) -> list[Violation]:
    """Cocycle condition: signed weight sum over each 2-cell incidence is 0."""
    edges = c.cells[1] if len(c.cells) > 1 else ()
    for eid in edges:
        cocycle[eid]  # raises InputError when missing
    out = []
    for fid in c.cells[2] if len(c.cells) > 2 else ():
        total = sum((n * cocycle[eid] for eid, n in c.boundary_of(fid)), Fraction(0))
        if total != 0:
            out.append(Violation("cocycle", fid, f"signed weight sum is {total}, expected 0"))
    return out


def check_flat(c: CellComplex, system: LocalSystem) -> list[Violation]:
    """Flatness: ordered transport product along each attaching word is the identity."""
    edges = c.cells[1] if len(c.cells) > 1 else ()
    inverses = {}
    for eid in edges:
        mat = system[eid]
        if len(mat) != system.rank or any(len(row) != system.rank for row in mat):
            raise InputError(f"transport for {eid!r} is not {system.rank}x{system.rank}")
        try:
            inverses[eid] = mat_inverse([list(r) for r in mat])
        except Exception as exc:
            raise InputError(f"non-invertible transport for edge {eid!r}") from exc
    out = []
    ident = mat_identity(system.rank)
    for fid in c.cells[2] if len(c.cells) > 2 else ():
        word = c.attaching_words.get(fid)
        if not word:
            continue  # reported by validate_complex
        hol = ident
        for eid, direction in word:
            step = [list(r) for r in system[eid]] if direction == 1 else inverses[eid]
            hol = mat_mul(step, hol)
        if hol != ident:
            out.append(Violation("holonomy", fid, "holonomy around 2-cell is not the identity"))
    return out


def validate_pair(p: CellPair) -> list[Violation]:
    out = []
    for cid in sorted(p.sub):
        if not p.complex.has_cell(cid):
            out.append(Violation("unknown-cell", cid, "subcomplex references unknown cell"))
            continue
        if p.complex.dim_of(cid) == 1:
            closure = set(p.complex.edge_endpoints(cid))
        else:
            closure = {face for face, _ in p.complex.boundary_of(cid)}
            if p.complex.dim_of(cid) == 2:
                closure |= {eid for eid, _ in p.complex.attaching_words.get(cid, ())}
        missing = closure - set(p.sub)
        if missing:
            out.append(
                Violation("not-closed", cid, f"subcomplex misses boundary cells {sorted(missing)}")
            )
    return out


def relative_subcomplex(p: CellPair) -> tuple[tuple[str, ...], ...]:
    """Per-degree orderings of the cells outside the subcomplex, sorted by id.

    These orderings are used consistently by every downstream matrix builder.
    """
    bad = validate_pair(p)
    if bad:
        raise InputError(f"invalid pair: {bad[0].detail}")
    return tuple(
        tuple(sorted(cid for cid in layer if cid not in p.sub)) for layer in p.complex.cells
    )


def euler_characteristic(p: CellPair) -> int:
    rel = relative_subcomplex(p)
    return sum((-1) ** d * len(layer) for d, layer in enumerate(rel))


# ---------------------------------------------------------------------------
# document parsing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParsedDocument:
    complex: CellComplex
    pair: CellPair
    cocycle: OneCocycle | None
    system: LocalSystem | None
    incidence_transport: dict


def _parse_matrix(rows, what: str):
    try:
        return tuple(tuple(parse_fraction(x) for x in row) for row in rows)
    except (TypeError, InputError) as exc:
        raise InputError(f"malformed matrix in {what}: {exc}") from exc


def parse_document(doc: dict) -> ParsedDocument:
    if not isinstance(doc, dict):
        raise InputError("document must be a JSON object")
    version = doc.get(SCHEMA_KEY)
    if version is not None and version != SCHEMA_VERSION:
        raise InputError(f"unsupported {SCHEMA_KEY} {version!r}")
    cells_raw = doc.get("cells")
    if not isinstance(cells_raw, dict) or not cells_raw:
        raise InputError('document needs a "cells" object keyed by dimension')
    try:
        by_dim = {int(k): list(v) for k, v in cells_raw.items()}
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed cells table: {exc}") from exc
    top = max(by_dim) if by_dim else 0
    layers = tuple(tuple(str(x) for x in by_dim.get(d, ())) for d in range(top + 1))

    boundary_raw = doc.get("boundary", {})
    if not isinstance(boundary_raw, dict):
        raise InputError('"boundary" must be an object')
    boundary = {}
    for cid, inc in boundary_raw.items():
        try:
            boundary[str(cid)] = tuple((str(f), int(n)) for f, n in inc)
        except (TypeError, ValueError) as exc:
            raise InputError(f"malformed boundary for {cid!r}: {exc}") from exc

    words_raw = doc.get("attaching_words", {})
    if not isinstance(words_raw, dict):
        raise InputError('"attaching_words" must be an object')
    words = {}
    for cid, word in words_raw.items():
        try:
            parsed = tuple((str(e), int(d)) for e, d in word)
        except (TypeError, ValueError) as exc:
            raise InputError(f"malformed attaching word for {cid!r}: {exc}") from exc
        if any(d not in (1, -1) for _, d in parsed):
            raise InputError(f"attaching word directions for {cid!r} must be +1/-1")
        words[str(cid)] = parsed

    cx = CellComplex(layers, boundary, words)

    sub_raw = doc.get("subcomplex", [])
    if not isinstance(sub_raw, (list, tuple)):
        raise InputError('"subcomplex" must be a list of cell ids')
    pair = CellPair(cx, frozenset(str(x) for x in sub_raw))

    cocycle = None
    if "cocycle" in doc and doc["cocycle"] is not None:
        if not isinstance(doc["cocycle"], dict):
            raise InputError('"cocycle" must map edge ids to rationals')
        cocycle = OneCocycle({str(k): parse_fraction(v) for k, v in doc["cocycle"].items()})

    system = None
    if "local_system" in doc and doc["local_system"] is not None:
        ls = doc["local_system"]
        if not isinstance(ls, dict) or "rank" not in ls or "transports" not in ls:
            raise InputError('"local_system" needs "rank" and "transports"')
        rank = ls["rank"]
        if not isinstance(rank, int) or rank < 1:
            raise InputError("local system rank must be a positive integer")
        transports = {
            str(eid): _parse_matrix(mat, f"transport {eid!r}")
            for eid, mat in ls["transports"].items()
        }
        for eid, mat in transports.items():
            if len(mat) != rank or any(len(row) != rank for row in mat):
                raise InputError(f"transport for {eid!r} is not {rank}x{rank}")
        system = LocalSystem(rank, transports)

    overrides = {}
    for key, mat in (doc.get("incidence_transport") or {}).items():
        try:
            cell, face = str(key).split("|")
        except ValueError:
            raise InputError(f'incidence_transport key {key!r} must be "cell|face"') from None
        overrides[(cell, face)] = _parse_matrix(mat, f"incidence_transport {key!r}")

    return ParsedDocument(cx, pair, cocycle, system, overrides)


def document_of(pair: CellPair, cocycle: OneCocycle | None = None,
                system: LocalSystem | None = None) -> dict:
    """Canonical JSON document for a pair with optional twist data."""
    doc = {SCHEMA_KEY: SCHEMA_VERSION}
    doc.update(pair.to_json())
    if cocycle is not None:
        doc["cocycle"] = cocycle.to_json()
    if system is not None:
        doc["local_system"] = system.to_json()
    return doc
