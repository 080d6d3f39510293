"""Presentations of quotients of F = TV x Gamma and their rewrite systems.

Words are tuples of datum positions; the position order lists the blocks in
order, so it refines the block order.  Monomials are compared by length and
then lexicographically, and every rule replaces a word by strictly smaller
terms, which makes rewriting terminate.

Group letters always sit on the right.  Moving ``g`` past a word ``w``
multiplies by ``chi_w(g)``; in a crossed product the group elements multiply
through a 2-cocycle, ``gbar * hbar = sigma(g, h) (g+h)bar``.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from ..abgroup import BilinearCocycle, gadd, gneg, zero
from ..datum import YDDatum, xi, xi_sigma, theta
from ..scalars import ONE, as_scalar
from .element import Element, acc

FLAVORS = ("F", "H0", "Alam", "Hlam", "Asigmu", "Alamsigmu", "Blam")
HOPF_FLAVORS = ("F", "H0", "Hlam")
CROSSED_FLAVORS = ("Asigmu", "Alamsigmu")

_ALIASES = {
    "Hλ": "Hlam", "Aλ": "Alam", "Aσμ": "Asigmu", "Aλσμ": "Alamsigmu", "Bλ": "Blam",
    "H⁰": "H0", "A0": "H0",
}


class PresentationError(ValueError):
    pass


class RewriteBudgetError(RuntimeError):
    """Raised when rewriting exceeds its step budget (bad rule set)."""


def canonical_flavor(flavor: str) -> str:
    f = _ALIASES.get(flavor, flavor)
    if f not in FLAVORS:
        raise PresentationError(f"unknown flavor {flavor!r}")
    return f


def leading_word(rel: dict) -> tuple:
    return max(rel, key=lambda m: (len(m[0]), m[0]))


def orient(rel: dict) -> tuple[tuple[int, ...], dict]:
    """Turn a relation into ``lead -> rhs`` using the deglex-largest word."""
    lead = leading_word(rel)
    w, g = lead
    if any(g):
        raise PresentationError("leading monomial of a relation must have trivial group part")
    inv = ONE / rel[lead]
    rhs = {}
    for mono, c in rel.items():
        if mono != lead:
            acc(rhs, mono, -(c * inv))
    for (w2, _g2) in rhs:
        if w2 == w:
            raise PresentationError("relation has two terms on its leading word")
    return w, rhs


class Presentation:
    """A datum, a flavor tag and the oriented rewrite system of the quotient."""

    def __init__(self, datum: YDDatum, flavor: str, relations: Sequence[dict],
                 block_relations: Sequence[dict] = (), sigma: Callable | None = None,
                 lam: dict | None = None, mu: dict | None = None,
                 central_groups: bool = False, max_steps: int = 2_000_000,
                 valid_length: int | None = None, name: str = ""):
        self.datum = datum
        self.flavor = flavor
        self.lam = dict(lam or {})
        self.mu = dict(mu or {})
        self.sigma = sigma
        self.crossed = sigma is not None
        self.central_groups = central_groups
        self.max_steps = max_steps
        self.valid_length = valid_length
        self.name = name or flavor
        self.n = datum.n
        self.rank = datum.rank
        self.zero_g = zero(self.rank)
        self.theta_relations = [dict(r) for r in relations]
        self.block_relations = [dict(r) for r in block_relations]
        self.rules: dict[tuple[int, ...], dict] = {}
        for rel in list(self.theta_relations) + list(self.block_relations):
            if not rel:
                continue
            lhs, rhs = orient(rel)
            if lhs in self.rules:
                if self.rules[lhs] == rhs:
                    continue
                raise PresentationError(f"two rules share the leading word {lhs}")
            self.rules[lhs] = rhs
        self._lens = sorted({len(w) for w in self.rules})
        self._nf: dict[tuple[int, ...], dict] = {}
        self._chi: dict = {}
        self._mono: dict = {}
        self._steps = 0
        # chi_k(e_r), used to evaluate chi_w(g) generator-wise
        self._chi_gen = [[datum.chi[k](tuple(1 if s == r else 0 for s in range(self.rank)))
                          for r in range(self.rank)] for k in range(self.n)]

    # ---- basic data ------------------------------------------------------
    @property
    def relations(self) -> list[dict]:
        return self.theta_relations + self.block_relations

    @property
    def is_hopf(self) -> bool:
        return self.flavor in HOPF_FLAVORS

    @property
    def labels(self):
        return self.datum.labels

    def __repr__(self):
        return f"Presentation({self.name}, n={self.n}, rules={len(self.rules)})"

    def gen(self, label) -> Element:
        return Element({((self.datum.pos[label],), self.zero_g): ONE})

    def group(self, g: Iterable[int], coeff=ONE) -> Element:
        return Element({((), tuple(g)): coeff})

    def one(self) -> Element:
        return self.group(self.zero_g)

    def g_of(self, k: int) -> tuple[int, ...]:
        return self.datum.g[k]

    def word_degree(self, w: Sequence[int]) -> tuple[int, ...]:
        """Gamma-degree sum of g over the letters of w."""
        out = [0] * self.rank
        for k in w:
            for r, e in enumerate(self.datum.g[k]):
                out[r] += e
        return tuple(out)

    # ---- twist factors ------------------------------------------------------
    def chi_word(self, w: Sequence[int], g: tuple[int, ...]):
        """chi_w(g) = prod over letters k of chi_k(g); 1 with central groups."""
        if self.central_groups or not w or not any(g):
            return ONE
        key = (tuple(sorted(w)), g)
        val = self._chi.get(key)
        if val is None:
            val = ONE
            for k in key[0]:
                row = self._chi_gen[k]
                for r, e in enumerate(g):
                    if e:
                        val = val * row[r] ** e
            self._chi[key] = val
        return val

    def sig(self, a: tuple[int, ...], b: tuple[int, ...]):
        if not self.crossed or not any(a) or not any(b):
            return ONE
        return self.sigma(a, b)

    def group_inverse(self, g: tuple[int, ...]) -> dict:
        """Inverse of gbar: sigma(g, -g)^-1 (-g)bar."""
        ng = gneg(g)
        return {((), ng): ONE / self.sig(g, ng)}

    # ---- rewriting -----------------------------------------------------------
    def _tick(self):
        self._steps += 1
        if self._steps > self.max_steps:
            raise RewriteBudgetError(
                f"rewriting exceeded {self.max_steps} steps; the rule set may not terminate")

    def find_redex(self, w: tuple[int, ...]):
        """Leftmost (position, lhs) occurrence of a rule in w, or None."""
        rules = self.rules
        for p in range(len(w)):
            for l in self._lens:
                if p + l > len(w):
                    break
                lhs = w[p:p + l]
                if lhs in rules:
                    return p, lhs
        return None

    def is_irreducible(self, w: tuple[int, ...]) -> bool:
        return self.find_redex(w) is None

    def expand_at(self, w: tuple[int, ...], p: int, lhs: tuple[int, ...]) -> dict:
        """One rewriting step u.lhs.v -> sum c chi_v(g') u w' v g' (not normalized)."""
        u, v = w[:p], w[p + len(lhs):]
        out: dict = {}
        for (w2, g2), c in self.rules[lhs].items():
            acc(out, (u + w2 + v, g2), c * self.chi_word(v, g2))
        return out

    def nf_word(self, w: tuple[int, ...]) -> dict:
        """Normal form of the pure word w, as a dict of monomials."""
        cached = self._nf.get(w)
        if cached is not None:
            return cached
        hit = self.find_redex(w)
        if hit is None:
            res = {(w, self.zero_g): ONE}
        else:
            self._tick()
            res = self.reduce_dict(self.expand_at(w, *hit))
        self._nf[w] = res
        return res

    def right_group(self, d: dict, g: tuple[int, ...], coeff=ONE) -> dict:
        """d * (coeff gbar) without reduction of words."""
        out: dict = {}
        for (w, h), c in d.items():
            acc(out, (w, gadd(h, g)), c * coeff * self.sig(h, g))
        return out

    def reduce_dict(self, d: dict) -> dict:
        out: dict = {}
        for (w, g), c in d.items():
            base = self.nf_word(w)
            if not any(g):
                for mono, c2 in base.items():
                    acc(out, mono, c2 * c)
            else:
                for (w2, h), c2 in base.items():
                    acc(out, (w2, gadd(h, g)), c2 * c * self.sig(h, g))
        return out

    def normal_form(self, a: Element | dict) -> Element:
        d = a.terms if isinstance(a, Element) else a
        return Element(self.reduce_dict(d))

    def mono_mul(self, m1, m2) -> dict:
        key = (m1, m2)
        cached = self._mono.get(key)
        if cached is not None:
            return cached
        (w1, g1), (w2, g2) = m1, m2
        c = self.chi_word(w2, g1) * self.sig(g1, g2)
        base = self.nf_word(w1 + w2)
        g = gadd(g1, g2)
        out: dict = {}
        for (w3, h), c3 in base.items():
            acc(out, (w3, gadd(h, g)), c3 * c * self.sig(h, g))
        self._mono[key] = out
        return out

    def mul_dict(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                c = c1 * c2
                for mono, c3 in self.mono_mul(m1, m2).items():
                    acc(out, mono, c3 * c)
        return out

    def mul(self, a: Element, b: Element) -> Element:
        return Element(self.mul_dict(a.terms, b.terms))

    def product(self, *factors: Element) -> Element:
        out = self.one()
        for f in factors:
            out = self.mul(out, f)
        return out

    def power(self, a: Element, n: int) -> Element:
        out = self.one()
        for _ in range(n):
            out = self.mul(out, a)
        return out

    # ---- normal words ------------------------------------------------------
    def basis(self, D: int) -> list[list[tuple[int, ...]]]:
        """Irreducible words grouped by length 0..D."""
        layers = [[()]]
        for _ in range(D):
            nxt = []
            for w in layers[-1]:
                for k in range(self.n):
                    w2 = w + (k,)
                    if not any(w2[-l:] in self.rules for l in self._lens if l <= len(w2)):
                        nxt.append(w2)
            layers.append(nxt)
        return layers

    def format(self, a: Element | dict) -> str:
        from .element import format_element
        return format_element(a, self.datum.labels)

    def clone(self, **changes) -> "Presentation":
        kw = dict(datum=self.datum, flavor=self.flavor, relations=self.theta_relations,
                  block_relations=self.block_relations, sigma=self.sigma, lam=self.lam,
                  mu=self.mu, central_groups=self.central_groups, max_steps=self.max_steps,
                  valid_length=self.valid_length, name=self.name)
        kw.update(changes)
        return Presentation(**kw)


# ---- braided commutators ---------------------------------------------------------

def braided_adjoint(datum: YDDatum, i, a: Element) -> Element:
    """(ad_c x_i)(a) = x_i a - chi_w(g_i) a x_i for a homogeneous a in TV."""
    k = datum.pos[i]
    factor = None
    out: dict = {}
    for (w, g), c in a.terms.items():
        if any(g):
            raise PresentationError("braided_adjoint needs an element of TV (no group part)")
        f = ONE
        for letter in w:
            f = f * datum.q[k][letter]
        if factor is None:
            factor = f
        elif f != factor:
            raise PresentationError("braided_adjoint needs a homogeneous argument")
        acc(out, ((k,) + w, g), c)
        acc(out, (w + (k,), g), -(c * f))
    return Element(out)


def serre_element(datum: YDDatum, i, j, aij: int) -> Element:
    """(ad_c x_i)^(1 - a_ij)(x_j)."""
    if i == j:
        raise PresentationError("serre_element needs i != j")
    e = Element({((datum.pos[j],), zero(datum.rank)): ONE})
    for _ in range(1 - aij):
        e = braided_adjoint(datum, i, e)
    return e


def serre_relations(datum: YDDatum, gcm) -> list[Element]:
    """Serre elements for all ordered pairs i != j inside one block (GCM in position order)."""
    out = []
    for k in range(datum.n):
        for l in range(datum.n):
            if k != l and datum.block_of[k] == datum.block_of[l]:
                out.append(serre_element(datum, datum.labels[k], datum.labels[l], gcm.A[k][l]))
    return out


# ---- builder -----------------------------------------------------------------------

def _pos_pairs(datum: YDDatum, params: dict | None) -> dict:
    out = {}
    for (i, j), v in (params or {}).items():
        v = v if not isinstance(v, (int, str)) else as_scalar(v)
        if v:
            out[(datum.pos[i], datum.pos[j])] = v
    return out


def theta_relation(p_datum: YDDatum, flavor: str, k: int, l: int, lam, mu, sigma) -> dict:
    """x_i x_j - q_ij x_j x_i - tail for (i, j) in theta (positions k, l)."""
    z = zero(p_datum.rank)
    rel: dict = {}
    acc(rel, ((k, l), z), ONE)
    acc(rel, ((l, k), z), -p_datum.q[k][l])
    gij = gadd(p_datum.g[k], p_datum.g[l])
    tail: dict = {}
    if flavor == "Alam" and lam:
        acc(tail, ((), gij), lam)
    elif flavor == "Hlam" and lam:
        acc(tail, ((), gij), lam)
        acc(tail, ((), z), -lam)
    elif flavor == "Blam" and lam:
        acc(tail, ((), z), -lam)
    elif flavor in CROSSED_FLAVORS:
        if flavor == "Alamsigmu" and lam:
            acc(tail, ((), z), -lam)
        if mu:
            acc(tail, ((), gij), mu * sigma(p_datum.g[k], p_datum.g[l]))
    for mono, c in tail.items():
        acc(rel, mono, -c)
    return rel


def build_presentation(datum: YDDatum, flavor: str, lam: dict | None = None,
                       sigma: Callable | None = None, mu: dict | None = None,
                       block_rules: Sequence[Element | dict] = (), *,
                       check_support: bool = True, central_groups: bool = False,
                       max_steps: int = 2_000_000, valid_length: int | None = None,
                       name: str = "") -> Presentation:
    """Assemble the rewrite system of one of the seven algebra flavors.

    ``lam`` and ``mu`` are keyed by label pairs in theta.  ``block_rules`` are
    relations inside single blocks (usually Serre elements); they are oriented
    by their deglex-largest word.
    """
    flavor = canonical_flavor(flavor)
    lam_p = _pos_pairs(datum, lam)
    mu_p = _pos_pairs(datum, mu)
    if flavor in CROSSED_FLAVORS and sigma is None:
        sigma = BilinearCocycle.trivial(datum.rank)
    if flavor not in CROSSED_FLAVORS:
        sigma = None
        if mu_p:
            raise PresentationError(f"flavor {flavor} takes no mu")
    if flavor in ("F", "H0", "Asigmu") and lam_p:
        raise PresentationError(f"flavor {flavor} takes no lambda")
    th = {(datum.pos[i], datum.pos[j]) for i, j in theta(datum)}
    for (k, l) in list(lam_p) + list(mu_p):
        if (k, l) not in th:
            raise PresentationError(
                f"parameter on ({datum.labels[k]}, {datum.labels[l]}) outside theta")
    if check_support:
        xs = {(datum.pos[i], datum.pos[j]) for i, j in xi(datum)}
        for (k, l) in lam_p:
            if (k, l) not in xs:
                raise PresentationError(
                    f"lambda support violation at ({datum.labels[k]}, {datum.labels[l]}): not in Xi")
        if mu_p:
            if not isinstance(sigma, BilinearCocycle):
                raise PresentationError("mu support check needs a bilinear sigma; "
                                        "pass check_support=False and validate separately")
            xss = {(datum.pos[i], datum.pos[j]) for i, j in xi_sigma(datum, sigma)}
            for (k, l) in mu_p:
                if (k, l) not in xss:
                    raise PresentationError(
                        f"mu support violation at ({datum.labels[k]}, {datum.labels[l]}): "
                        f"not in Xi(sigma)")
    relations = []
    if flavor != "F":
        for (k, l) in sorted(th):
            relations.append(theta_relation(datum, flavor, k, l, lam_p.get((k, l)),
                                            mu_p.get((k, l)), sigma))
    blocks = []
    if flavor != "F":
        for r in block_rules:
            d = r.terms if isinstance(r, Element) else r
            for (w, g) in d:
                if any(g) or len({datum.block_of[k] for k in w}) > 1:
                    raise PresentationError("block relations must be pure words inside one block")
            blocks.append(dict(d))
    return Presentation(datum, flavor, relations, blocks, sigma=sigma,
                        lam={(datum.labels[k], datum.labels[l]): v for (k, l), v in lam_p.items()},
                        mu={(datum.labels[k], datum.labels[l]): v for (k, l), v in mu_p.items()},
                        central_groups=central_groups, max_steps=max_steps,
                        valid_length=valid_length, name=name or flavor)
