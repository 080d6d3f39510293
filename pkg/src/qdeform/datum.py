"""Diagonal braided data {x_i, g_i, chi_i} and their combinatorics.

Indices are user labels (ints such as 1, -1, or strings).  Internally every
datum also numbers its indices by *position*: blocks are laid out in order and
labels keep their listed order inside a block.  Positions are what words in
:mod:`qdeform.freealg` are made of, and position order is the total order on I
used by the rewriting engine.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .abgroup import BilinearCocycle, Character, FreeAbGroup, GrpElt
from .scalars import ONE, Scalar, as_scalar, format_scalar, q_integer, specialize

Label = Hashable


class DatumError(ValueError):
    pass


@dataclass(frozen=True)
class GCM:
    """Generalized Cartan matrix with symmetrizer, indexed like the datum."""

    A: tuple[tuple[int, ...], ...]
    d: tuple[int, ...]

    def __post_init__(self):
        A = tuple(tuple(int(x) for x in row) for row in self.A)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        n = len(A)
        if any(len(row) != n for row in A) or len(self.d) != n:
            raise DatumError("GCM and symmetrizer sizes disagree")
        for i in range(n):
            if A[i][i] != 2:
                raise DatumError(f"a_{i}{i} must be 2")
            for j in range(n):
                if i != j:
                    if A[i][j] > 0:
                        raise DatumError(f"a_{i}{j} must be <= 0")
                    if (A[i][j] == 0) != (A[j][i] == 0):
                        raise DatumError(f"a_{i}{j} = 0 must match a_{j}{i} = 0")
                if self.d[i] * A[i][j] != self.d[j] * A[j][i]:
                    raise DatumError(f"symmetrizer fails at ({i}, {j})")
        if any(x <= 0 for x in self.d):
            raise DatumError("symmetrizer entries must be positive")

    @property
    def n(self) -> int:
        return len(self.A)

    def __getitem__(self, ij):
        i, j = ij
        return self.A[i][j]

    @staticmethod
    def direct_sum(*parts: "GCM") -> "GCM":
        n = sum(p.n for p in parts)
        A = [[0] * n for _ in range(n)]
        d = []
        off = 0
        for p in parts:
            for i in range(p.n):
                for j in range(p.n):
                    A[off + i][off + j] = p.A[i][j]
            d.extend(p.d)
            off += p.n
        return GCM(tuple(map(tuple, A)), tuple(d))


class YDDatum:
    """Diagonal Yetter-Drinfeld datum over Gamma = Z^m with an index partition."""

    def __init__(self, group: FreeAbGroup, blocks: Sequence[Sequence[Label]],
                 g: dict, chi: dict, validate: bool = True):
        self.group = group
        self.blocks = tuple(tuple(b) for b in blocks)
        if any(not b for b in self.blocks):
            raise DatumError("blocks must be non-empty")
        labels = [lab for b in self.blocks for lab in b]
        if len(set(labels)) != len(labels):
            raise DatumError("blocks must be disjoint")
        self.labels: tuple[Label, ...] = tuple(labels)
        self.pos = {lab: k for k, lab in enumerate(labels)}
        self.block_of = tuple(r for r, b in enumerate(self.blocks) for _ in b)
        m = group.rank
        self.g: tuple[GrpElt, ...] = tuple(tuple(int(x) for x in g[lab]) for lab in labels)
        self.chi: tuple[Character, ...] = tuple(
            c if isinstance(c, Character) else Character(c) for c in (chi[lab] for lab in labels))
        for lab, gi, ci in zip(labels, self.g, self.chi):
            if len(gi) != m or ci.rank != m:
                raise DatumError(f"index {lab!r} has data of the wrong rank")
        n = len(labels)
        self.q = tuple(tuple(self.chi[l](self.g[k]) for l in range(n)) for k in range(n))
        if validate:
            for k in range(n):
                for l in range(k + 1, n):
                    if self.block_of[k] != self.block_of[l] and not (self.q[k][l] * self.q[l][k]).is_one():
                        raise DatumError(
                            f"blocks not mutually disconnected: q_ij q_ji != 1 for "
                            f"({labels[k]!r}, {labels[l]!r})")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def rank(self) -> int:
        return self.group.rank

    def qij(self, i: Label, j: Label) -> Scalar:
        return self.q[self.pos[i]][self.pos[j]]

    def block(self, i: Label) -> int:
        """1-based block index |i|."""
        return self.block_of[self.pos[i]] + 1

    def label_of(self, k: int) -> Label:
        return self.labels[k]

    def __repr__(self):
        return f"YDDatum(blocks={self.blocks}, rank={self.rank})"

    # ---- JSON ------------------------------------------------------------
    def to_json(self, gcm: GCM | None = None, lam: dict | None = None,
                mu: dict | None = None) -> dict:
        doc = {
            "rank": self.rank,
            "generators": list(self.group.labels),
            "blocks": [list(b) for b in self.blocks],
            "g": {str(lab): list(self.g[k]) for k, lab in enumerate(self.labels)},
            "chi": {str(lab): self.chi[k].to_json() for k, lab in enumerate(self.labels)},
        }
        if gcm is not None:
            doc["gcm"] = {"A": [list(r) for r in gcm.A], "d": list(gcm.d)}
        if lam:
            doc["lambda"] = {f"{i},{j}": format_scalar(v) for (i, j), v in lam.items()}
        if mu:
            doc["mu"] = {f"{i},{j}": format_scalar(v) for (i, j), v in mu.items()}
        return doc


def _parse_label(text):
    if isinstance(text, int):
        return text
    try:
        return int(text)
    except (TypeError, ValueError):
        return text


def _parse_pairs(raw: dict | None) -> dict:
    out = {}
    for key, val in (raw or {}).items():
        a, b = key.split(",")
        out[(_parse_label(a.strip()), _parse_label(b.strip()))] = as_scalar(val)
    return out


@dataclass
class DatumDocument:
    datum: YDDatum
    gcm: GCM | None = None
    lam: dict = field(default_factory=dict)
    mu: dict = field(default_factory=dict)


def datum_from_json(doc: dict | str, validate: bool = True) -> DatumDocument:
    """Read the datum JSON schema (see README): rank, blocks, g, chi, gcm, lambda, mu."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        rank = int(doc["rank"])
        group = FreeAbGroup(rank, tuple(doc.get("generators", ())))
        blocks = [[_parse_label(x) for x in b] for b in doc["blocks"]]
        g = {_parse_label(k): v for k, v in doc["g"].items()}
        chi = {_parse_label(k): Character.from_json(v) for k, v in doc["chi"].items()}
    except (KeyError, TypeError) as exc:
        raise DatumError(f"malformed datum document: {exc}") from exc
    datum = YDDatum(group, blocks, g, chi, validate=validate)
    gcm = None
    if "gcm" in doc:
        gcm = GCM(tuple(map(tuple, doc["gcm"]["A"])), tuple(doc["gcm"]["d"]))
    return DatumDocument(datum, gcm, _parse_pairs(doc.get("lambda")), _parse_pairs(doc.get("mu")))


# ---- derived data ---------------------------------------------------------------

def braiding_matrix(d: YDDatum) -> tuple[tuple[Scalar, ...], ...]:
    """q_ij = chi_j(g_i), rows/columns in position order."""
    return d.q


def theta(d: YDDatum) -> set[tuple[Label, Label]]:
    """Pairs (i, j) with |i| > |j|."""
    return {(d.labels[k], d.labels[l]) for k in range(d.n) for l in range(d.n)
            if d.block_of[k] > d.block_of[l]}


def xi(d: YDDatum) -> set[tuple[Label, Label]]:
    """Pairs in theta with chi_i chi_j = 1."""
    return {(i, j) for (i, j) in theta(d)
            if (d.chi[d.pos[i]] * d.chi[d.pos[j]]).is_trivial()}


def s_character(sigma: BilinearCocycle, gi: GrpElt) -> Character:
    """s_i(g) = sigma(g, g_i)/sigma(g_i, g) as a character."""
    m = sigma.rank
    gens = [tuple(1 if r == k else 0 for r in range(m)) for k in range(m)]
    return Character(sigma(e, gi) / sigma(gi, e) for e in gens)


def xi_sigma(d: YDDatum, sigma: BilinearCocycle) -> set[tuple[Label, Label]]:
    """Pairs in theta with chi_i chi_j = s_i s_j."""
    out = set()
    for (i, j) in theta(d):
        k, l = d.pos[i], d.pos[j]
        lhs = d.chi[k] * d.chi[l]
        rhs = s_character(sigma, d.g[k]) * s_character(sigma, d.g[l])
        if lhs == rhs:
            out.add((i, j))
    return out


def deform_datum(d: YDDatum, sigma: BilinearCocycle) -> YDDatum:
    """chi_i^sigma(g) = sigma(g, g_i)/sigma(g_i, g) chi_i(g)."""
    chi = {lab: s_character(sigma, d.g[k]) * d.chi[k] for k, lab in enumerate(d.labels)}
    g = {lab: d.g[k] for k, lab in enumerate(d.labels)}
    return YDDatum(d.group, d.blocks, g, chi, validate=False)


# ---- Cartan-type conditions -------------------------------------------------------

@dataclass
class CheckEntry:
    condition: str
    indices: tuple
    passed: bool
    value: str

    def to_json(self) -> dict:
        return {"condition": self.condition, "indices": list(self.indices),
                "pass": self.passed, "value": self.value}


@dataclass
class CheckReport:
    entries: list[CheckEntry]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def failures(self, condition: str | None = None) -> list[CheckEntry]:
        return [e for e in self.entries if not e.passed
                and (condition is None or e.condition == condition)]

    def to_json(self) -> dict:
        return {"pass": self.passed, "entries": [e.to_json() for e in self.entries]}


def _nonzero(value: Scalar, q0) -> tuple[bool, str]:
    if q0 is None:
        return bool(value), format_scalar(value)
    v = specialize(value, q0)
    return v != 0, str(v)


def _equal(lhs: Scalar, rhs: Scalar, q0) -> tuple[bool, str]:
    if q0 is None:
        return lhs == rhs, f"{format_scalar(lhs)} vs {format_scalar(rhs)}"
    a, b = specialize(lhs, q0), specialize(rhs, q0)
    return a == b, f"{a} vs {b}"


def cartan_checks(d: YDDatum, A: GCM, q0=None) -> CheckReport:
    """(C1) Cartan type, (C3) q_ii != 1, (C4) on Serre pairs, and qint: (l)_{q_ii} != 0 for l <= -a_ij.

    Failures are report entries.  With ``q0`` every quantity is specialized
    before testing.
    """
    if A.n != d.n:
        raise DatumError("GCM size differs from the index set")
    entries = []
    q = d.q
    lab = d.labels
    for i in range(d.n):
        for j in range(d.n):
            ok, val = _equal(q[i][j] * q[j][i], q[i][i] ** A[i, j], q0)
            entries.append(CheckEntry("C1", (lab[i], lab[j]), ok, val))
    for i in range(d.n):
        ok, val = _nonzero(q[i][i] - ONE, q0)
        entries.append(CheckEntry("C3", (lab[i],), ok, val))
    for i in range(d.n):
        for j in range(d.n):
            if i == j or d.block_of[i] != d.block_of[j]:
                continue
            ok, val = _nonzero(q[i][i] * q[j][j] - q[i][j] * q[j][i], q0)
            entries.append(CheckEntry("C4", (lab[i], lab[j]), ok, val))
            for l in range(1, -A[i, j] + 1):
                ok, val = _nonzero(q_integer(l, q[i][i]), q0)
                entries.append(CheckEntry("qint", (lab[i], lab[j], l), ok, val))
    return CheckReport(entries)


def make_datum(rank: int, blocks: Sequence[Sequence[Label]], g: dict, chi: dict,
               validate: bool = True) -> YDDatum:
    """Convenience constructor taking plain lists for characters."""
    return YDDatum(FreeAbGroup(rank), blocks, g,
                   {k: v if isinstance(v, Character) else Character(v) for k, v in chi.items()},
                   validate=validate)


def labels_of_pairs(d: YDDatum, pairs: Iterable[tuple[int, int]]) -> set:
    return {(d.labels[k], d.labels[l]) for k, l in pairs}
