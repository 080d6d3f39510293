"""Quantized enveloping algebras as instances of the generic engine.

From a generalized Cartan matrix, its symmetrizer and a lattice this module
builds the positive Borel part B_q, U_q (flavor Hlam) and its graded
degeneration (flavor H0), the twisted comodule algebras A_q(u, mu), and the
desk-scale drivers for the classification statements.

The index set of U_q is I_- + I_+ with labels -1..-n and 1..n, in that block
order.  g_{-i} = g_i and chi_{-i} = chi_i^{-1}.  The usual generators are
recovered through X_i^+ = x_i and X_i^- = x_{-i} g_i^{-1}.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .abgroup import (AdditiveCochain, AdditiveCocycle, BilinearCocycle, Character, FreeAbGroup,
                      MVec, add_coboundary, unit_vector)
from .datum import GCM, YDDatum, theta, xi
from .freealg import Element, Presentation, build_presentation, serre_relations
from .freealg.overlaps import complete_block_relations
from .scalars import ONE, Q, Scalar, as_scalar, gauss_binomial

PRESETS = {
    "A1": ((( 2,),), (1,)),
    "A2": (((2, -1), (-1, 2)), (1, 1)),
    "B2": (((2, -2), (-1, 2)), (1, 2)),
    "A3": (((2, -1, 0), (-1, 2, -1), (0, -1, 2)), (1, 1, 1)),
}


class UqError(ValueError):
    pass


def _int_rank(A) -> int:
    """Rank of an integer matrix over Q (fraction-free elimination)."""
    rows = [[Fraction(x) for x in r] for r in A]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


@dataclass
class UqInput:
    """Cartan data plus lattice; ``P[i][r] = alpha_i(h_r)``, ``coroots[i]`` = d_i alpha_i^vee."""

    gcm: GCM
    P: tuple | None = None
    coroots: tuple | None = None
    q0: Fraction | None = None
    name: str = ""

    def __post_init__(self):
        n = self.gcm.n
        if self.P is None:
            if _int_rank(self.gcm.A) != n:
                raise UqError("det A = 0 needs an explicit lattice (P, coroots)")
            # h_r = d_r alpha_r^vee, so alpha_i(h_r) = d_r a_ri
            self.P = tuple(tuple(self.gcm.d[r] * self.gcm.A[r][i] for r in range(n))
                           for i in range(n))
            self.coroots = tuple(unit_vector(n, i) for i in range(n))
        else:
            self.P = tuple(tuple(int(x) for x in row) for row in self.P)
            self.coroots = tuple(tuple(int(x) for x in c) for c in self.coroots)
        m = len(self.P[0])
        if len(self.P) != n or len(self.coroots) != n or any(len(c) != m for c in self.coroots):
            raise UqError("lattice data has inconsistent sizes")
        for i in range(n):
            for j in range(n):
                pairing = sum(self.P[j][r] * self.coroots[i][r] for r in range(m))
                if pairing != self.gcm.d[i] * self.gcm.A[i][j]:
                    raise UqError(f"alpha_{j + 1}(d_{i + 1} alpha_{i + 1}^vee) != d_i a_ij")

    @property
    def n(self) -> int:
        return self.gcm.n

    @property
    def m(self) -> int:
        return len(self.P[0])

    @property
    def det_nonzero(self) -> bool:
        return _int_rank(self.gcm.A) == self.n

    @property
    def q(self) -> Scalar:
        return Q if self.q0 is None else Scalar(self.q0)

    def qi(self, i: int) -> Scalar:
        """q_i = q^{d_i}, 1-based i."""
        return self.q ** self.gcm.d[i - 1]

    @classmethod
    def preset(cls, name: str, q0=None) -> "UqInput":
        if name not in PRESETS:
            raise UqError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
        A, d = PRESETS[name]
        return cls(GCM(A, d), q0=None if q0 is None else Fraction(q0), name=name)

    @classmethod
    def from_json(cls, doc: dict | str) -> "UqInput":
        if isinstance(doc, str):
            doc = json.loads(doc)
        A = tuple(tuple(int(x) for x in r) for r in doc["cartan_matrix"])
        d = tuple(doc.get("symmetrizer") or [1] * len(A))
        q = doc.get("q", "formal")
        q0 = None if q in (None, "formal") else Fraction(str(q))
        lat = doc.get("lattice")
        P = coroots = None
        if lat:
            P, coroots = lat["P"], lat["coroots"]
        return cls(GCM(A, d), P, coroots, q0, doc.get("name", ""))

    def to_json(self) -> dict:
        return {"cartan_matrix": [list(r) for r in self.gcm.A], "symmetrizer": list(self.gcm.d),
                "lattice": {"P": [list(r) for r in self.P],
                            "coroots": [list(c) for c in self.coroots]},
                "q": "formal" if self.q0 is None else str(self.q0)}


# ---- conditions -----------------------------------------------------------------

def order_condition(u: UqInput) -> list[tuple[int, bool]]:
    """ord(q_i^2) > max(1, -a_ij) for every i (trivially true at formal q)."""
    out = []
    for i in range(1, u.n + 1):
        bound = max([1] + [-u.gcm.A[i - 1][j] for j in range(u.n)])
        t = u.qi(i) ** 2
        ok = all(not (t ** k).is_one() for k in range(1, bound + 1))
        out.append((i, ok))
    return out


def cq_condition(u: UqInput) -> list[tuple[tuple[int, int], bool, Scalar]]:
    """q^{2(d_i + d_j - d_i a_ij)} != 1 for i != j."""
    out = []
    A, d = u.gcm.A, u.gcm.d
    for i in range(u.n):
        for j in range(u.n):
            if i != j:
                val = u.q ** (2 * (d[i] + d[j] - d[i] * A[i][j]))
                out.append(((i + 1, j + 1), not val.is_one(), val))
    return out


def _require_order(u: UqInput):
    bad = [i for i, ok in order_condition(u) if not ok]
    if bad:
        raise UqError(f"order condition ord(q_i^2) > max(1, -a_ij) fails for i = {bad}")


# ---- data --------------------------------------------------------------------------

def _characters(u: UqInput) -> list[Character]:
    return [Character([u.q ** u.P[i][r] for r in range(u.m)]) for i in range(u.n)]


def positive_datum(u: UqInput) -> YDDatum:
    chis = _characters(u)
    labels = list(range(1, u.n + 1))
    return YDDatum(FreeAbGroup(u.m), [labels],
                   {i: u.coroots[i - 1] for i in labels}, {i: chis[i - 1] for i in labels})


def uq_datum(u: UqInput) -> YDDatum:
    chis = _characters(u)
    pos = list(range(1, u.n + 1))
    neg = [-i for i in pos]
    g = {}
    chi = {}
    for i in pos:
        g[i] = g[-i] = u.coroots[i - 1]
        chi[i] = chis[i - 1]
        chi[-i] = chis[i - 1].inverse()
    return YDDatum(FreeAbGroup(u.m), [neg, pos], g, chi)


def standard_lambda(u: UqInput) -> dict:
    """lambda_{i,-i} = 1/(q_i - q_i^{-1})."""
    return {(i, -i): ONE / (u.qi(i) - u.qi(i) ** -1) for i in range(1, u.n + 1)}


def uq_gcm(u: UqInput) -> GCM:
    return GCM.direct_sum(u.gcm, u.gcm)


def _confluent_block_relations(base: Presentation, max_len: int = 12) -> tuple[list, int | None]:
    """Block relations plus whatever a truncated completion adds.

    Returns the relations and the word length up to which they are known to
    give unique normal forms (None when every critical pair was resolved).
    """
    rels, _added = complete_block_relations(base, max_len)
    full = base.clone(block_relations=rels)
    longest = max((len(w) for w in full.rules), default=0)
    if 2 * longest - 1 <= max_len:
        return rels, None
    return rels, max_len


_BLOCK_CACHE: dict = {}


def block_relations_for(datum: YDDatum, gcm: GCM, key) -> tuple[list, int | None]:
    """Serre relations of every block, completed where needed; cached per input."""
    if key in _BLOCK_CACHE:
        return _BLOCK_CACHE[key]
    serre = serre_relations(datum, gcm)
    base = build_presentation(datum, "H0", block_rules=serre)
    rels, valid = _confluent_block_relations(base)
    _BLOCK_CACHE[key] = (rels, valid)
    return rels, valid


def _key(u: UqInput, which: str):
    return (which, u.gcm.A, u.gcm.d, u.P, u.coroots, u.q0)


def uq_block_rules(u: UqInput) -> list:
    """The (completed) Serre relations of both blocks of the U_q datum."""
    return block_relations_for(uq_datum(u), uq_gcm(u), _key(u, "uq"))[0]


def build_borel(u: UqInput) -> tuple[YDDatum, Presentation]:
    """B_q: one block, Serre relations, flavor H0."""
    _require_order(u)
    d = positive_datum(u)
    rels, valid = block_relations_for(d, u.gcm, _key(u, "borel"))
    p = build_presentation(d, "H0", block_rules=rels, valid_length=valid, name="B_q")
    return d, p


def build_uq(u: UqInput, mode: str = "standard") -> tuple[YDDatum, Presentation]:
    """U_q (mode 'standard', flavor Hlam) or its graded version (mode 'zero', flavor H0)."""
    _require_order(u)
    d = uq_datum(u)
    rels, valid = block_relations_for(d, uq_gcm(u), _key(u, "uq"))
    if mode == "standard":
        return d, build_presentation(d, "Hlam", lam=standard_lambda(u), block_rules=rels,
                                     valid_length=valid, name="U_q")
    if mode == "zero":
        return d, build_presentation(d, "H0", block_rules=rels, valid_length=valid, name="U_q^0")
    raise UqError(f"unknown lambda mode {mode!r}")


def build_uq_flavor(u: UqInput, flavor: str, sigma=None, mu=None, lam=None,
                    check_support: bool = True) -> Presentation:
    """Any flavor on the U_q datum with the (completed) Serre block relations."""
    d = uq_datum(u)
    rels, valid = block_relations_for(d, uq_gcm(u), _key(u, "uq"))
    if lam is None and flavor in ("Alam", "Hlam", "Alamsigmu", "Blam"):
        lam = standard_lambda(u)
    return build_presentation(d, flavor, lam=lam, sigma=sigma, mu=mu, block_rules=rels,
                              valid_length=valid, check_support=check_support, name=flavor)


# ---- generator dictionary -----------------------------------------------------------

def x_plus(p: Presentation, i: int) -> Element:
    return p.gen(i)


def x_minus(p: Presentation, i: int) -> Element:
    """X_i^- = x_{-i} g_i^{-1}."""
    g = p.datum.g[p.datum.pos[i]]
    return p.mul(p.gen(-i), Element(p.group_inverse(g)))


def k_elt(p: Presentation, i: int, power: int = 1) -> Element:
    g = p.datum.g[p.datum.pos[i]]
    return p.group(tuple(power * e for e in g))


def dictionary(u: UqInput) -> dict:
    """Generator renaming table for reports."""
    out = {}
    for i in range(1, u.n + 1):
        out[f"x[{i}]"] = f"X{i}+"
        out[f"x[{-i}]"] = f"X{i}- K{i}"
    return out


def _commutator(p, a, b):
    return p.mul(a, b) - p.mul(b, a)


def relation_residuals(u: UqInput, p: Presentation) -> dict:
    """Defining relations of U_q written through the dictionary, reduced in p.

    Covers K X^{+-} K^{-1} = q^{+-a} X^{+-}, the commutator relation and both
    q-Serre relations in their Gauss-binomial form.  Every residual should be
    zero in U_q (and the commutator should vanish in the graded version).
    """
    out = {}
    n = u.n
    A = u.gcm.A
    lam_mode = p.flavor == "Hlam"
    for i in range(1, n + 1):
        Ki, Kinv = k_elt(p, i), k_elt(p, i, -1)
        for j in range(1, n + 1):
            e = u.qi(i) ** A[i - 1][j - 1]
            out[f"K{i} X{j}+ K{i}^-1"] = p.product(Ki, x_plus(p, j), Kinv) - x_plus(p, j).scale(e)
            out[f"K{i} X{j}- K{i}^-1"] = (p.product(Ki, x_minus(p, j), Kinv)
                                          - x_minus(p, j).scale(e.inverse()))
            comm = _commutator(p, x_plus(p, i), x_minus(p, j))
            if i == j and lam_mode:
                target = (Ki - Kinv).scale(ONE / (u.qi(i) - u.qi(i) ** -1))
            else:
                target = Element()
            out[f"[X{i}+, X{j}-]"] = comm - target
            if i != j:
                a = A[i - 1][j - 1]
                for sign, gen in (("+", x_plus), ("-", x_minus)):
                    tot = Element()
                    for r in range(1 - a + 1):
                        coeff = gauss_binomial(1 - a, r, u.qi(i)) * (-1) ** r
                        term = p.product(*([gen(p, i)] * (1 - a - r) + [gen(p, j)] + [gen(p, i)] * r))
                        tot = tot + term.scale(coeff)
                    out[f"serre{sign}({i},{j})"] = tot
    return out


# ---- A_q(u, mu) -------------------------------------------------------------------

def xi_u(u: UqInput, umat: dict) -> set[tuple[int, int]]:
    """(i, j) in I_+ x I_+ with q^{d_r(a_ri - a_rj)} = u_ir u_jr for all r (u_ii = 1, u_ji = u_ij^-1)."""
    n = u.n
    A, d = u.gcm.A, u.gcm.d

    def uu(a, b):
        if a == b:
            return ONE
        if (a, b) in umat:
            return as_scalar(umat[(a, b)])
        if (b, a) in umat:
            return as_scalar(umat[(b, a)]).inverse()
        return ONE

    out = set()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if all(u.q ** (d[r - 1] * (A[r - 1][i - 1] - A[r - 1][j - 1])) == uu(i, r) * uu(j, r)
                   for r in range(1, n + 1)):
                out.add((i, j))
    return out


def sigma_from_u(u: UqInput, umat: dict) -> BilinearCocycle:
    """Bilinear cocycle with sigma(e_j, e_i)/sigma(e_i, e_j) = u_ij for i < j (det A != 0 lattice)."""
    if not u.det_nonzero:
        raise UqError("A_q(u, mu) is built in the det A != 0 lattice mode")
    entries = {(i - 1, j - 1): as_scalar(v) for (i, j), v in umat.items()}
    return BilinearCocycle.from_skew(u.n, entries)


def build_Aq(u: UqInput, umat: dict, mu: dict) -> Presentation:
    """A^lambda(sigma, mu) on the U_q datum; mu keyed by (i, j) in I_+ x I_+.

    The pair (i, j) of the twisted algebra corresponds to (i, -j) of the datum.
    """
    sigma = sigma_from_u(u, umat)
    allowed = xi_u(u, umat)
    mu_lab = {}
    for (i, j), v in mu.items():
        if (i, j) not in allowed:
            raise UqError(f"mu support violation at ({i}, {j}): not in Xi(u)")
        mu_lab[(i, -j)] = as_scalar(v)
    return build_uq_flavor(u, "Alamsigmu", sigma=sigma, mu=mu_lab)


def aq_relation_residuals(u: UqInput, p: Presentation, umat: dict, mu: dict) -> dict:
    """The A_q(u, mu) defining list evaluated in p through the twisted dictionary.

    X~_i^+ = x_i, X~_i^- = x_{-i} (g_i bar)^{-1}, g~_i = g_i bar.
    """
    n = u.n
    A = u.gcm.A
    out = {}

    def gt(i, power=1):
        g = p.datum.g[p.datum.pos[i]]
        if power == 1:
            return p.group(g)
        return Element(p.group_inverse(g))

    def xm(i):
        return p.mul(p.gen(-i), gt(i, -1))

    def uu(a, b):
        if (a, b) in umat:
            return as_scalar(umat[(a, b)])
        if (b, a) in umat:
            return as_scalar(umat[(b, a)]).inverse()
        return ONE

    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i < j:
                out[f"g{j} g{i} - u g{i} g{j}"] = (p.mul(gt(j), gt(i))
                                                   - p.mul(gt(i), gt(j)).scale(uu(i, j)))
            comm = _commutator(p, p.gen(i), xm(j))
            target = gt(i).scale(as_scalar(mu.get((i, j), 0))) if mu.get((i, j)) else Element()
            if i == j:
                target = target - gt(i, -1).scale(ONE / (u.qi(i) - u.qi(i) ** -1))
            out[f"[X{i}+, X{j}-]"] = comm - target
            if i != j:
                a = A[i - 1][j - 1]
                tot = Element()
                for r in range(1 - a + 1):
                    coeff = gauss_binomial(1 - a, r, u.qi(i)) * (-uu(i, j)) ** r
                    term = p.product(*([xm(i)] * (1 - a - r) + [xm(j)] + [xm(i)] * r))
                    tot = tot + term.scale(coeff)
                out[f"serre-({i},{j})"] = tot
    return out


# ---- associated graded -------------------------------------------------------------

@dataclass
class GrReport:
    ranks_zero: list[int]
    ranks_gr: list[int]
    pairs: int
    mismatches: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.ranks_zero == self.ranks_gr and not self.mismatches

    def to_json(self) -> dict:
        return {"ranks_zero": self.ranks_zero, "ranks_gr": self.ranks_gr, "pairs": self.pairs,
                "mismatches": len(self.mismatches), "examples": self.mismatches[:10],
                "pass": self.passed}


def gr_compare(u: UqInput, D: int, groups=None) -> GrReport:
    """(U_q)^0 against the associated graded of U_q for the x-letter filtration.

    Ranks are counted from each rewrite system separately.  For basis
    monomials a, b the product in U_q is cut down to its terms of x-length
    |a| + |b| and compared with the product in (U_q)^0.
    """
    from .hopf import basis_monomials, group_generators
    from .freealg import hilbert_ranks
    _, hz = build_uq(u, "zero")
    _, hl = build_uq(u, "standard")
    ranks_z = hilbert_ranks(hz, D)
    ranks_l = hilbert_ranks(hl, D)
    groups = groups if groups is not None else [hl.zero_g] + group_generators(hl.rank)
    mons = basis_monomials(hl, D, groups)
    bad = []
    npairs = 0
    for a in mons:
        for b in mons:
            top = len(a[0]) + len(b[0])
            if top > D:
                continue
            npairs += 1
            graded = {m: c for m, c in hl.mono_mul(a, b).items() if len(m[0]) == top}
            diff = Element(graded) - Element(hz.mono_mul(a, b))
            if not diff.is_zero():
                bad.append(f"{hl.format({a: ONE})} * {hl.format({b: ONE})}: {hl.format(diff)}")
    return GrReport(ranks_z, ranks_l, npairs, bad)


# ---- classification drivers ----------------------------------------------------------

def additive_h2_dimension(m: int) -> int:
    """dim of bilinear forms on Z^m modulo coboundaries of quadratic cochains (one M-coordinate)."""
    from .linalg import rank
    vecs = []
    for i in range(m):
        for j in range(i, m):
            sym = [[MVec([0]) for _ in range(m)] for _ in range(m)]
            sym[i][j] = sym[j][i] = MVec([1])
            t = AdditiveCochain([MVec([0])] * m, sym)
            s = add_coboundary(t)
            vecs.append({(r, c): s.T[r][c].v[0] for r in range(m) for c in range(m) if s.T[r][c].v[0]})
    return m * m - rank(vecs)


@dataclass
class BorelParameterReport:
    theta_empty: bool
    xi_empty: bool
    h2_parameters: int
    expected_parameters: int

    @property
    def passed(self) -> bool:
        return self.theta_empty and self.xi_empty and self.h2_parameters == self.expected_parameters

    def to_json(self) -> dict:
        return {"theta_empty": self.theta_empty, "xi_empty": self.xi_empty,
                "h2_parameters": self.h2_parameters,
                "expected_parameters": self.expected_parameters, "pass": self.passed}


def borel_parameters(u: UqInput) -> BorelParameterReport:
    """For B_q the classification of cleft objects is pure group cohomology.

    With one block theta and Xi are empty, so pairs reduce to sigma up to
    coboundary, classified by the m(m-1)/2 skew entries; the additive
    mirror has the same number of parameters per coordinate of M.
    """
    d, _p = build_borel(u)
    m = u.m
    return BorelParameterReport(not theta(d), not xi(d), additive_h2_dimension(m), m * (m - 1) // 2)


def classify_uq_pairs(u: UqInput, pairs: list[tuple[dict, dict]]) -> dict:
    """Classify A_q(u, mu) pairs given as (uMat, mu) with mu keyed (i, j) in I_+ x I_+.

    The orbit report also lists each pair's skew invariant u and Xi(u).
    """
    from .cleft import PairSigmaMu, classify, orbits_to_json
    d = uq_datum(u)
    objs = []
    info = []
    for umat, mu in pairs:
        sigma = sigma_from_u(u, umat)
        allowed = xi_u(u, umat)
        mu_lab = {}
        for (i, j), v in mu.items():
            if (i, j) not in allowed:
                raise UqError(f"mu support violation at ({i}, {j}): not in Xi(u)")
            if as_scalar(v):
                mu_lab[(i, -j)] = as_scalar(v)
        objs.append(PairSigmaMu(sigma, mu_lab))
        info.append({"u": {f"{i},{j}": str(as_scalar(v)) for (i, j), v in sorted(umat.items())},
                     "xi_u": sorted([list(x) for x in allowed])})
    orbits = classify(d, objs)
    return {"pairs": info, "orbits": orbits_to_json(orbits, objs)}


@dataclass
class WhiteheadReport:
    samples: int
    reduced: int
    witnesses: list[dict]
    failures: list[str]

    @property
    def passed(self) -> bool:
        return self.reduced == self.samples and not self.failures

    def to_json(self) -> dict:
        return {"samples": self.samples, "reduced": self.reduced, "failures": self.failures,
                "witnesses": self.witnesses, "pass": self.passed}


def whitehead_samples(u: UqInput, dim: int = 2, samples: int = 20, seed: int = 0) -> WhiteheadReport:
    """Reduce random augmented pairs (s, m) to (0, 0) and verify each witness.

    Samples have symmetric s and arbitrary m on the diagonal pairs (i, -i);
    each witness is checked directly and again through aug_equivalent.
    """
    from .cleft import (AugPairSM, CleftError, aug_equivalent, random_aug_pair,
                        verify_aug_witness, whitehead_reduce)
    if not u.det_nonzero:
        raise UqError("the Whitehead driver runs in the det A != 0 lattice mode")
    d = uq_datum(u)
    lam = standard_lambda(u)
    rng = random.Random(seed)
    zero_pair = AugPairSM(AdditiveCocycle.zero(d.rank, dim), {})
    ok = 0
    wits, fails = [], []
    for k in range(samples):
        ap = random_aug_pair(d, lam, dim, rng)
        try:
            t = whitehead_reduce(ap, d, lam)
        except CleftError as exc:
            fails.append(f"sample {k}: {exc}")
            continue
        t2 = aug_equivalent(ap, zero_pair, d, lam)
        if verify_aug_witness(ap, zero_pair, d, lam, t) and t2 is not None:
            ok += 1
            wits.append({"sample": k, "pair": ap.to_json(), "t": t.to_json()})
        else:
            fails.append(f"sample {k}: witness not verified")
    return WhiteheadReport(samples, ok, wits, fails)
