"""Coproducts, coactions, counit and antipode on bosonizations, plus convolution.

Every coproduct-like map here is the multiplicative extension of
``x_i -> x_i (x) 1 + g_i (x) x_i`` and ``g -> g (x) g``.  A
:class:`CoactionSpec` says in which presentation each tensor leg is reduced,
which covers the coproduct of a Hopf flavor (both legs the same), the left
coaction ``A -> H (x) A`` and the right coaction ``A -> A (x) H``.

Verification works on truncations: normal words of x-degree at most D, with
group parts either zero or a handful of sample elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .abgroup import gneg, unit_vector
from .freealg import Element, Presentation, TensorElement, format_element
from .freealg.element import acc
from .scalars import ONE, Scalar


class HopfError(ValueError):
    pass


Mono = tuple
TMono = tuple


@dataclass(eq=False)
class CoactionSpec:
    """Which presentation reduces each leg, and which side A sits on.

    ``side`` is ``"coproduct"`` (src = left = right = H), ``"left"``
    (A -> H (x) A) or ``"right"`` (A -> A (x) H).
    """

    src: Presentation
    left: Presentation
    right: Presentation
    side: str = "coproduct"
    _memo: dict = field(default_factory=dict, repr=False)

    @classmethod
    def coproduct(cls, h: Presentation) -> "CoactionSpec":
        return cls(h, h, h, "coproduct")

    @classmethod
    def left_coaction(cls, a: Presentation, h: Presentation) -> "CoactionSpec":
        return cls(a, h, a, "left")

    @classmethod
    def right_coaction(cls, a: Presentation, h: Presentation) -> "CoactionSpec":
        return cls(a, a, h, "right")

    @property
    def legs(self) -> tuple[Presentation, Presentation]:
        return self.left, self.right

    def t_mul(self, s: dict, t: dict) -> dict:
        """Product of two arity-2 tensor dicts, legwise."""
        out: dict = {}
        L, R = self.left, self.right
        for (a1, a2), c in s.items():
            for (b1, b2), d in t.items():
                p1 = L.mono_mul(a1, b1)
                p2 = R.mono_mul(a2, b2)
                cd = c * d
                for m1, c1 in p1.items():
                    for m2, c2 in p2.items():
                        acc(out, (m1, m2), c1 * c2 * cd)
        return out

    def gen_image(self, k: int) -> dict:
        z = self.src.zero_g
        gk = self.src.datum.g[k]
        return {(((k,), z), ((), z)): ONE, (((), gk), ((k,), z)): ONE}

    def word_image(self, w: tuple[int, ...]) -> dict:
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        if not w:
            z = self.src.zero_g
            res = {(((), z), ((), z)): ONE}
        else:
            res = self.t_mul(self.word_image(w[:-1]), self.gen_image(w[-1]))
        self._memo[w] = res
        return res

    def mono_image(self, mono: Mono) -> dict:
        w, g = mono
        base = self.word_image(w)
        if not any(g):
            return base
        return self.t_mul(base, {(((), g), ((), g)): ONE})

    def apply(self, a: Element | dict) -> TensorElement:
        d = a.terms if isinstance(a, Element) else a
        out: dict = {}
        for mono, c in d.items():
            for tm, c2 in self.mono_image(mono).items():
                acc(out, tm, c2 * c)
        return TensorElement(out, 2)


def coproduct(a: Element, spec: CoactionSpec) -> TensorElement:
    return spec.apply(a)


def coproduct2(a: Element, spec: CoactionSpec, order: str = "left") -> TensorElement:
    """(Delta (x) id) rho  ('left')  or  (id (x) Delta) rho  ('right'), arity 3.

    For ``order='left'`` the first leg is expanded with the coproduct of its
    own presentation, which must be a Hopf flavor (or A for right coactions).
    """
    t = spec.apply(a)
    out: dict = {}
    if order == "left":
        sub = CoactionSpec.coproduct(spec.left) if spec.side != "right" else \
            CoactionSpec.right_coaction(spec.left, spec.right)
        for (m1, m2), c in t.terms.items():
            for (n1, n2), c2 in sub.mono_image(m1).items():
                acc(out, (n1, n2, m2), c * c2)
    else:
        sub = CoactionSpec.coproduct(spec.right) if spec.side != "left" else \
            CoactionSpec.left_coaction(spec.right, spec.left)
        for (m1, m2), c in t.terms.items():
            for (n1, n2), c2 in sub.mono_image(m2).items():
                acc(out, (m1, n1, n2), c * c2)
    return TensorElement(out, 3)


def counit_mono(mono: Mono):
    return ONE if not mono[0] else Scalar(0)


def counit(a: Element | dict):
    d = a.terms if isinstance(a, Element) else a
    tot = Scalar(0)
    for (w, _g), c in d.items():
        if not w:
            tot = c + tot
    return tot


class Antipode:
    """S(w g) = S(g) S(x_{i_l}) ... S(x_{i_1}) with S(x_i) = -g_i^{-1} x_i."""

    def __init__(self, h: Presentation):
        if not h.is_hopf:
            raise HopfError(f"antipode requested on non-Hopf flavor {h.flavor}")
        self.h = h
        self._memo: dict = {}

    def gen(self, k: int) -> dict:
        h = self.h
        gk = h.datum.g[k]
        return {m: -c for m, c in h.mono_mul(((), gneg(gk)), ((k,), h.zero_g)).items()}

    def word(self, w: tuple[int, ...]) -> dict:
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        if not w:
            res = {((), self.h.zero_g): ONE}
        else:
            res = self.h.mul_dict(self.gen(w[-1]), self.word(w[:-1]))
        self._memo[w] = res
        return res

    def mono(self, mono: Mono) -> dict:
        w, g = mono
        if not any(g):
            return self.word(w)
        return self.h.mul_dict({((), gneg(g)): ONE}, self.word(w))

    def __call__(self, a: Element | dict) -> Element:
        d = a.terms if isinstance(a, Element) else a
        out: dict = {}
        for mono, c in d.items():
            for m2, c2 in self.mono(mono).items():
                acc(out, m2, c2 * c)
        return Element(out)


def antipode(a: Element, p: Presentation) -> Element:
    return Antipode(p)(a)


# ---- reports ---------------------------------------------------------------------

@dataclass
class IdentityCheck:
    identity: str
    element: str
    residual: str
    passed: bool

    def to_json(self) -> dict:
        return {"identity": self.identity, "element": self.element,
                "residual": self.residual, "pass": self.passed}


@dataclass
class VerifyReport:
    checks: list[IdentityCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[IdentityCheck]:
        return [c for c in self.checks if not c.passed]

    def counts(self) -> dict:
        out: dict = {}
        for c in self.checks:
            tot, bad = out.get(c.identity, (0, 0))
            out[c.identity] = (tot + 1, bad + (0 if c.passed else 1))
        return out

    def add(self, identity: str, element: str, residual, fmt: Callable) -> None:
        ok = not residual
        self.checks.append(IdentityCheck(identity, element, "0" if ok else fmt(residual), ok))

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.checks]


def basis_monomials(p: Presentation, D: int, groups: Iterable = None) -> list[Mono]:
    groups = list(groups) if groups is not None else [p.zero_g]
    out = []
    for layer in p.basis(D):
        for w in layer:
            for g in groups:
                out.append((w, g))
    return out


def group_generators(rank: int) -> list[tuple[int, ...]]:
    return [unit_vector(rank, r) for r in range(rank)]


def _fmt_mono(p: Presentation, m: Mono) -> str:
    return format_element({m: ONE}, p.labels)


def _tensor_fmt(p: Presentation):
    from .freealg import format_tensor
    return lambda t: format_tensor(t if isinstance(t, TensorElement) else TensorElement(t, 2),
                                   [p.labels, p.labels])


def verify_hopf(p: Presentation, D: int, assoc_degree: int | None = 3) -> VerifyReport:
    """Coassociativity, counit, antipode and multiplicativity up to x-degree D."""
    if not p.is_hopf:
        raise HopfError(f"flavor {p.flavor} is not a Hopf flavor")
    spec = CoactionSpec.coproduct(p)
    S = Antipode(p)
    rep = VerifyReport()
    fmt = p.format
    tfmt = _tensor_fmt(p)
    mons = basis_monomials(p, D)
    for b in mons:
        name = _fmt_mono(p, b)
        t = spec.mono_image(b)
        l3 = coproduct2(Element({b: ONE}), spec, "left")
        r3 = coproduct2(Element({b: ONE}), spec, "right")
        res = l3 - r3
        rep.add("coassociativity", name, res, lambda x: f"{len(x)} tensor terms")
        lft: dict = {}
        rgt: dict = {}
        for (m1, m2), c in t.items():
            if not m1[0]:
                acc(lft, m2, c)
            if not m2[0]:
                acc(rgt, m1, c)
        rep.add("counit-left", name, Element(lft) - Element({b: ONE}), fmt)
        rep.add("counit-right", name, Element(rgt) - Element({b: ONE}), fmt)
        eps = counit_mono(b)
        unit = Element({((), p.zero_g): eps}) if eps else Element()
        sl: dict = {}
        sr: dict = {}
        for (m1, m2), c in t.items():
            for m, c2 in p.mul_dict(S.mono(m1), {m2: ONE}).items():
                acc(sl, m, c2 * c)
            for m, c2 in p.mul_dict({m1: ONE}, S.mono(m2)).items():
                acc(sr, m, c2 * c)
        rep.add("antipode-left", name, Element(sl) - unit, fmt)
        rep.add("antipode-right", name, Element(sr) - unit, fmt)
    # multiplicativity of Delta and epsilon on pairs
    layers = p.basis(D)
    left_groups = [p.zero_g] + group_generators(p.rank)
    for da in range(D + 1):
        for db in range(D + 1 - da):
            for wa in layers[da]:
                for ga in left_groups:
                    a = (wa, ga)
                    for wb in layers[db]:
                        b = (wb, p.zero_g)
                        prod = p.mono_mul(a, b)
                        lhs = spec.apply(prod)
                        rhs = TensorElement(spec.t_mul(spec.mono_image(a), spec.mono_image(b)), 2)
                        name = f"{_fmt_mono(p, a)} . {_fmt_mono(p, b)}"
                        rep.add("delta-multiplicative", name, lhs - rhs, tfmt)
                        e = counit(prod) - counit_mono(a) * counit_mono(b)
                        rep.add("counit-multiplicative", name, Element({((), p.zero_g): e}) if e else Element(), fmt)
    if assoc_degree:
        rep.checks.extend(check_associativity(p, min(D, assoc_degree)).checks)
    return rep


def check_associativity(p: Presentation, D: int, groups=None) -> VerifyReport:
    """(ab)c = a(bc) on normal monomial triples of total x-degree <= D."""
    rep = VerifyReport()
    layers = p.basis(D)
    groups = groups if groups is not None else [p.zero_g] + group_generators(p.rank)
    mons = [(w, g) for L in layers for w in L for g in groups]
    deg = lambda m: len(m[0])
    for a in mons:
        for b in mons:
            if deg(a) + deg(b) > D:
                continue
            ab = p.mono_mul(a, b)
            for c in mons:
                if deg(a) + deg(b) + deg(c) > D or any(c[1]):
                    continue
                lhs = p.mul_dict(ab, {c: ONE})
                rhs = p.mul_dict({a: ONE}, p.mono_mul(b, c))
                rep.add("associativity",
                        f"{_fmt_mono(p, a)} . {_fmt_mono(p, b)} . {_fmt_mono(p, c)}",
                        Element(lhs) - Element(rhs), p.format)
    return rep


def is_skew_primitive(y: Element, g, h, p: Presentation) -> bool:
    """Delta(y) == y (x) g + h (x) y."""
    spec = CoactionSpec.coproduct(p)
    lhs = spec.apply(y)
    rhs: dict = {}
    g, h = tuple(g), tuple(h)
    for m, c in y.terms.items():
        acc(rhs, (m, ((), g)), c)
        acc(rhs, (((), h), m), c)
    return (lhs - TensorElement(rhs, 2)).is_zero()


# ---- convolution -------------------------------------------------------------------

class AlgebraTarget:
    """Values are dicts of monomials in an algebra presentation."""

    def __init__(self, pres: Presentation):
        self.pres = pres

    def mul(self, a: dict, b: dict) -> dict:
        return self.pres.mul_dict(a, b)

    def add(self, a: dict, b: dict, c=ONE) -> dict:
        out = dict(a)
        for m, x in b.items():
            acc(out, m, x * c)
        return out

    def zero(self) -> dict:
        return {}

    def unit(self) -> dict:
        return {((), self.pres.zero_g): ONE}

    def scale(self, a: dict, c) -> dict:
        out: dict = {}
        for m, x in a.items():
            acc(out, m, x * c)
        return out

    def is_zero(self, a) -> bool:
        return not a

    def group_inverse(self, val: dict) -> dict:
        """Inverse of c * gbar."""
        if len(val) != 1:
            raise HopfError("degree-0 value is not a unit multiple of a group element")
        ((w, g), c), = val.items()
        if w:
            raise HopfError("degree-0 value is not a unit multiple of a group element")
        inv = self.pres.group_inverse(g)
        return {m: x / c for m, x in inv.items()}


class ScalarTarget:
    """Values are coefficients (Scalar or KM)."""

    def mul(self, a, b):
        return a * b

    def add(self, a, b, c=ONE):
        return a + b * c

    def zero(self):
        return Scalar(0)

    def unit(self):
        return ONE

    def scale(self, a, c):
        return a * c

    def is_zero(self, a) -> bool:
        return not a

    def group_inverse(self, val):
        if not val:
            raise HopfError("degree-0 value is not a unit")
        return ONE / val


class FilteredMap:
    """Linear map on the Hopf presentation, memoized on monomials."""

    def __init__(self, fn: Callable[[Mono], object], target, name: str = "f"):
        self.fn = fn
        self.target = target
        self.name = name
        self._memo: dict = {}

    def __call__(self, mono: Mono):
        hit = self._memo.get(mono)
        if hit is None:
            hit = self.fn(mono)
            self._memo[mono] = hit
        return hit

    def on(self, a: Element | dict):
        d = a.terms if isinstance(a, Element) else a
        T = self.target
        out = T.zero()
        for m, c in d.items():
            out = T.add(out, self(m), c)
        return out


def convolve(f: FilteredMap, g: FilteredMap, spec: CoactionSpec, name: str = "") -> FilteredMap:
    """(f * g)(a) = sum f(a_1) g(a_2)."""
    T = f.target

    def fn(mono):
        out = T.zero()
        for (m1, m2), c in spec.mono_image(mono).items():
            out = T.add(out, T.mul(f(m1), g(m2)), c)
        return out

    return FilteredMap(fn, T, name or f"({f.name}*{g.name})")


def epsilon_map(target) -> FilteredMap:
    unit = target.unit()
    return FilteredMap(lambda m: target.zero() if m[0] else unit, target, "eps")


def conv_inverse(f: FilteredMap, spec: CoactionSpec) -> FilteredMap:
    """Convolution inverse via f = f0 * (eps + nu) with nu nilpotent on the filtration.

    f0(w g) = eps(w) f(g); its inverse is eps(w) f(g)^{-1}.  On a monomial of
    x-degree d the series (-nu)^{*n} * f0^{-1} stops at n = d.
    """
    T = f.target

    def f0inv_fn(mono):
        w, g = mono
        if w:
            return T.zero()
        return T.group_inverse(f(((), g)))

    f0inv = FilteredMap(f0inv_fn, T, f"{f.name}0^-1")
    prod = convolve(f0inv, f, spec)
    eps = epsilon_map(T)

    def nu_fn(mono):
        out = prod(mono)
        return T.add(out, eps(mono), -ONE)

    negnu = FilteredMap(lambda m: T.scale(nu_fn(m), -ONE), T, f"-nu({f.name})")
    terms = [f0inv]

    def fn(mono):
        d = len(mono[0])
        while len(terms) <= d:
            terms.append(convolve(negnu, terms[-1], spec))
        out = T.zero()
        for n in range(d + 1):
            out = T.add(out, terms[n](mono))
        return out

    return FilteredMap(fn, T, f"{f.name}^-1")


def identity_map(p: Presentation) -> FilteredMap:
    return FilteredMap(lambda m: {m: ONE}, AlgebraTarget(p), "id")


# ---- Hochschild 2-cocycles --------------------------------------------------------

def hochschild_check(t: Callable[[Mono, Mono], object], p: Presentation, D: int,
                     groups=None, zero_value=None) -> VerifyReport:
    """eps(a) t(b,c) - t(ab,c) + t(a,bc) - t(a,b) eps(c) = 0 on basis triples.

    ``t`` takes two monomials; it is extended linearly over products.
    """
    rep = VerifyReport()
    groups = groups if groups is not None else [p.zero_g] + group_generators(p.rank) + \
        [gneg(g) for g in group_generators(p.rank)]
    mons = [(w, g) for L in p.basis(D) for w in L for g in groups]
    deg = lambda m: len(m[0])

    def t_lin(d1: dict, m2):
        tot = None
        for m, c in d1.items():
            v = t(m, m2) * c
            tot = v if tot is None else tot + v
        return tot

    def t_rlin(m1, d2: dict):
        tot = None
        for m, c in d2.items():
            v = t(m1, m) * c
            tot = v if tot is None else tot + v
        return tot

    for a in mons:
        for b in mons:
            if deg(a) + deg(b) > D:
                continue
            ab = p.mono_mul(a, b)
            for c in mons:
                if deg(a) + deg(b) + deg(c) > D:
                    continue
                bc = p.mono_mul(b, c)
                val = t(b, c) * counit_mono(a) - t(a, b) * counit_mono(c)
                x = t_lin(ab, c)
                y = t_rlin(a, bc)
                if x is not None:
                    val = val - x
                if y is not None:
                    val = val + y
                rep.checks.append(IdentityCheck(
                    "hochschild", f"{_fmt_mono(p, a)}, {_fmt_mono(p, b)}, {_fmt_mono(p, c)}",
                    "0" if not val else str(val), not val))
    return rep


def tau_from_t(t: Callable[[Mono, Mono], object], d: int):
    """tau(a, b) = eps(a) eps(b) + t(a, b) with values in k_M."""
    from .abgroup import KM, MVec

    def tau(a: Mono, b: Mono):
        body = counit_mono(a) * counit_mono(b)
        val = t(a, b)
        if isinstance(val, KM):
            return val + body
        if isinstance(val, MVec):
            return KM(body, val)
        return KM(body + val, MVec.zero(d))

    return tau
