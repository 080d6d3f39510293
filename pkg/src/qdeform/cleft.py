"""Cleft comodule algebras, their 2-cocycles and the classification of pairs.

A cleft object here is a presentation A together with a coaction of a Hopf
presentation H and a section phi: H -> A that is the identity on normal
monomials.  Everything the theory promises about phi (colinearity,
convolution invertibility, scalar coinvariants) is checked, never assumed.

Left objects give the cocycle tau(a, b) = sum phi^-1(a1 b1) phi(a2) phi(b2)
and A is H with the product a.b = sum a1 b1 tau(a2, b2).  Right objects give
sigma(a, b) = sum phi(a1) phi(b1) phi^-1(a2 b2) and A is H with
a.b = sum sigma(a1, b1) a2 b2.

Coefficients are Scalars, or KM values for the square-zero extension k + M
used by augmented extensions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .abgroup import (KM, AdditiveCochain, AdditiveCocycle, BilinearCocycle, MVec,
                      OneCochain, add_coboundary, add_cohomologous, coboundary, cohomologous,
                      gadd, gneg, skew_invariant, unit_vector, zero)
from .datum import YDDatum, xi, xi_sigma
from .freealg import Element, Presentation, build_presentation
from .freealg.element import acc, format_element
from .hopf import (AlgebraTarget, CoactionSpec, FilteredMap, VerifyReport,
                   basis_monomials, conv_inverse, convolve, counit_mono, epsilon_map,
                   group_generators, hochschild_check)
from .linalg import nullspace
from .scalars import ONE, ZERO, Scalar, as_scalar, format_scalar, nth_root

Mono = tuple


class CleftError(ValueError):
    pass


def _fmt(p: Presentation, d) -> str:
    return format_element(d, p.labels)


def _mfmt(p: Presentation, m: Mono) -> str:
    return format_element({m: ONE}, p.labels)


def _is_zero(x) -> bool:
    return x is None or not x


def default_groups(rank: int) -> list[tuple[int, ...]]:
    """Group parts used for test monomials: 0 and the generators e_r."""
    return [zero(rank)] + group_generators(rank)


# ---- cleft objects -----------------------------------------------------------------

@dataclass(eq=False)
class CleftObject:
    A: Presentation
    H: Presentation
    side: str
    section: FilteredMap
    coeff_dim: int = 0
    _inv: FilteredMap | None = field(default=None, repr=False)
    _cocycles: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise CleftError(f"side must be 'left' or 'right', not {self.side!r}")
        if self.side == "left":
            self.coaction = CoactionSpec.left_coaction(self.A, self.H)
        else:
            self.coaction = CoactionSpec.right_coaction(self.A, self.H)
        self.hspec = CoactionSpec.coproduct(self.H)

    @property
    def section_inverse(self) -> FilteredMap:
        if self._inv is None:
            self._inv = conv_inverse(self.section, self.hspec)
        return self._inv

    def cocycle(self, inverse: bool = False, method: str = "convolution") -> "Cocycle":
        """tau (left) or sigma (right), or its convolution inverse.

        ``method="expansion"`` evaluates the cocycle itself by peeling the top
        term off phi(a) phi(b); it never forms phi^-1 and is much cheaper
        over k_M.
        """
        key = (inverse, method)
        if key not in self._cocycles:
            if method == "convolution":
                self._cocycles[key] = _extract(self, inverse)
            elif method == "expansion" and not inverse:
                self._cocycles[key] = _extract_expansion(self)
            else:
                raise CleftError(f"no evaluation method {method!r} for this cocycle")
        return self._cocycles[key]


def canonical_section(A: Presentation, H: Presentation) -> FilteredMap:
    """w g in H goes to w gbar in A; both must have the same normal words."""
    if A.datum.labels != H.datum.labels or A.datum.g != H.datum.g:
        raise CleftError("section needs a shared datum")
    if set(A.rules) != set(H.rules):
        only_a = sorted(set(A.rules) - set(H.rules))
        only_h = sorted(set(H.rules) - set(A.rules))
        raise CleftError(f"normal bases differ: rule words only in A {only_a}, only in H {only_h}")
    return FilteredMap(lambda m: {m: ONE}, AlgebraTarget(A), "phi")


def make_cleft(A: Presentation, H: Presentation, side: str = "left",
               coeff_dim: int = 0) -> CleftObject:
    return CleftObject(A, H, side, canonical_section(A, H), coeff_dim)


def _tensor_sub(x: dict, y: dict) -> dict:
    out = dict(x)
    for k, c in y.items():
        acc(out, k, -c)
    return out


def section_checks(c: CleftObject, D: int, groups=None) -> VerifyReport:
    """phi(1) = 1, colinearity of phi, and phi * phi^-1 = eps = phi^-1 * phi."""
    A, H = c.A, c.H
    groups = groups if groups is not None else default_groups(H.rank)
    rep = VerifyReport()
    phi, inv = c.section, c.section_inverse
    one = ((), H.zero_g)
    rep.add("phi(1) = 1", "1", _tensor_sub(phi(one), {((), A.zero_g): ONE}), lambda d: _fmt(A, d))
    tfmt = lambda d: str(d)
    for b in basis_monomials(H, D, groups):
        lhs = c.coaction.apply(phi(b)).terms
        rhs: dict = {}
        for (b1, b2), co in c.hspec.mono_image(b).items():
            if c.side == "left":
                for m, x in phi(b2).items():
                    acc(rhs, (b1, m), x * co)
            else:
                for m, x in phi(b1).items():
                    acc(rhs, (m, b2), x * co)
        rep.add("colinear", _mfmt(H, b), _tensor_sub(lhs, rhs), tfmt)
    eps = epsilon_map(AlgebraTarget(A))
    right = convolve(phi, inv, c.hspec)
    left = convolve(inv, phi, c.hspec)
    for b in basis_monomials(H, D, groups):
        rep.add("phi * phi^-1 = eps", _mfmt(H, b), _tensor_sub(right(b), eps(b)), lambda d: _fmt(A, d))
        rep.add("phi^-1 * phi = eps", _mfmt(H, b), _tensor_sub(left(b), eps(b)), lambda d: _fmt(A, d))
    return rep


# ---- coinvariants -------------------------------------------------------------------

def _split(x, d: int) -> list:
    """Coefficient as [body, nil_1, ..., nil_d]."""
    if isinstance(x, KM):
        return [x.body, *x.nil.v]
    return [as_scalar(x)] + [ZERO] * d


@dataclass
class CoinvariantReport:
    candidates: int
    dimension: int
    expected: int
    nonscalar: list[str]

    @property
    def passed(self) -> bool:
        return self.dimension == self.expected and not self.nonscalar

    def to_json(self) -> dict:
        return {"candidates": self.candidates, "dimension": self.dimension,
                "expected": self.expected, "nonscalar": self.nonscalar, "pass": self.passed}


def coinvariants_check(A: Presentation, H: Presentation, side: str, D: int,
                       coeff_dim: int = 0, groups: Iterable | None = None) -> CoinvariantReport:
    """Solve rho(a) = 1 (x) a (left) or a (x) 1 (right) for a of x-degree <= D.

    Candidates are w gbar with w normal in A, |w| <= D, and g among the
    negated Gamma-degrees -g_v of words v with |v| <= D (a coinvariant has
    total Gamma-degree zero in each leg that carries the words).  With k_M
    coefficients every candidate carries 1 + d unknowns and the equations are
    split into body and nil components.
    """
    spec = CoactionSpec.left_coaction(A, H) if side == "left" else CoactionSpec.right_coaction(A, H)
    layers = A.basis(D)
    if groups is None:
        gs = {A.zero_g}
        frontier = {A.zero_g}
        for _ in range(D):
            frontier = {gadd(g, gneg(A.datum.g[k])) for g in frontier for k in range(A.n)}
            gs |= frontier
        groups = sorted(gs)
    cands = [(w, g) for layer in layers for w in layer for g in groups]
    d = coeff_dim
    width = 1 + d
    z = A.zero_g
    unit = ((), z)
    columns: list[dict] = [dict() for _ in range(len(cands) * width)]
    for ci, mono in enumerate(cands):
        img = dict(spec.mono_image(mono))
        if side == "left":
            acc(img, (((), H.zero_g), mono), -ONE)
        else:
            acc(img, (mono, ((), H.zero_g)), -ONE)
        for key, x in img.items():
            parts = _split(x, d)
            beta = parts[0]
            base = ci * width
            # body unknown a contributes beta to the body row and nu_c to nil row c
            if beta:
                acc(columns[base], (key, 0), beta)
            for cc in range(d):
                nu = parts[1 + cc]
                if nu:
                    acc(columns[base], (key, 1 + cc), nu)
                if beta:
                    acc(columns[base + 1 + cc], (key, 1 + cc), beta)
    sols = nullspace(columns, len(columns))
    unit_idx = cands.index((unit[0], unit[1]))
    allowed = set(range(unit_idx * width, unit_idx * width + width))
    bad = []
    for vec in sols:
        extra = {k: x for k, x in enumerate(vec) if x and k not in allowed}
        if extra:
            el: dict = {}
            for k, x in extra.items():
                if k % width == 0:
                    acc(el, cands[k // width], x)
            bad.append(_fmt(A, el) if el else f"nil-only combination on {len(extra)} unknowns")
    return CoinvariantReport(len(cands), len(sols), width, bad)


# ---- 2-cocycles ---------------------------------------------------------------------

class Cocycle:
    """A bilinear form on H given on monomial pairs, memoized, with linear extension."""

    def __init__(self, fn: Callable[[Mono, Mono], object], name: str = "sigma"):
        self.fn = fn
        self.name = name
        self._memo: dict = {}

    def __call__(self, a: Mono, b: Mono):
        key = (a, b)
        hit = self._memo.get(key)
        if hit is None:
            hit = self.fn(a, b)
            self._memo[key] = hit
        return hit

    def on(self, x: dict, y: dict):
        tot = ZERO
        for a, ca in x.items():
            for b, cb in y.items():
                v = self(a, b)
                if v:
                    tot = v * (ca * cb) + tot
        return tot


def _scalar_value(A: Presentation, d: dict, what: str):
    val = ZERO
    for (w, g), x in d.items():
        if w or any(g):
            raise CleftError(f"{what} is not a scalar: {_fmt(A, d)}")
        val = x
    return val


def _extract(c: CleftObject, inverse: bool) -> Cocycle:
    A, H = c.A, c.H
    phi, inv = c.section, c.section_inverse
    cop = c.hspec.mono_image
    mul = A.mul_dict

    def left_fn(a, b):
        out: dict = {}
        for (a1, a2), x in cop(a).items():
            for (b1, b2), y in cop(b).items():
                head = inv.on(H.mono_mul(a1, b1))
                if head:
                    for m, z in mul(head, mul(phi(a2), phi(b2))).items():
                        acc(out, m, z * x * y)
        return _scalar_value(A, out, f"tau({_mfmt(H, a)}, {_mfmt(H, b)})")

    def left_inv_fn(a, b):
        out: dict = {}
        for (a1, a2), x in cop(a).items():
            for (b1, b2), y in cop(b).items():
                tail = phi.on(H.mono_mul(a2, b2))
                if tail:
                    for m, z in mul(mul(inv(b1), inv(a1)), tail).items():
                        acc(out, m, z * x * y)
        return _scalar_value(A, out, f"tau^-1({_mfmt(H, a)}, {_mfmt(H, b)})")

    def right_fn(a, b):
        out: dict = {}
        for (a1, a2), x in cop(a).items():
            for (b1, b2), y in cop(b).items():
                tail = inv.on(H.mono_mul(a2, b2))
                if tail:
                    for m, z in mul(mul(phi(a1), phi(b1)), tail).items():
                        acc(out, m, z * x * y)
        return _scalar_value(A, out, f"sigma({_mfmt(H, a)}, {_mfmt(H, b)})")

    def right_inv_fn(a, b):
        out: dict = {}
        for (a1, a2), x in cop(a).items():
            for (b1, b2), y in cop(b).items():
                head = phi.on(H.mono_mul(a1, b1))
                if head:
                    for m, z in mul(head, mul(inv(b2), inv(a2))).items():
                        acc(out, m, z * x * y)
        return _scalar_value(A, out, f"sigma^-1({_mfmt(H, a)}, {_mfmt(H, b)})")

    if c.side == "left":
        return Cocycle(left_inv_fn if inverse else left_fn, "tau^-1" if inverse else "tau")
    return Cocycle(right_inv_fn if inverse else right_fn, "sigma^-1" if inverse else "sigma")


def _extract_expansion(c: CleftObject) -> Cocycle:
    """Cocycle values from phi(a) phi(b) = sum phi(a1 b1) tau(a2, b2) (left side)
    or sum sigma(a1, b1) phi(a2 b2) (right side).

    On the left the only term with (a2, b2) = (a, b) is g_a g_b tau(a, b),
    where g_a is the total group degree of a; every other term has smaller
    x-degree.  So tau(a, b) is the coefficient of (g_a + g_b)bar in
    phi(a) phi(b) minus the lower terms.  The right side is the mirror image
    with the group parts g, h of a, b.  The remaining coefficients must
    cancel, which is checked as the scalar test.
    """
    A, H = c.A, c.H
    cop = c.hspec.mono_image
    phi = c.section
    left = c.side == "left"

    def fn(a, b):
        if left:
            top = ((), gadd(H.word_degree(a[0]), a[1])), ((), gadd(H.word_degree(b[0]), b[1]))
        else:
            top = ((), a[1]), ((), b[1])
        out = dict(A.mul_dict(phi(a), phi(b)))
        for (a1, a2), x in cop(a).items():
            for (b1, b2), y in cop(b).items():
                if left:
                    if (a2, b2) == (a, b):
                        continue
                    t = cyc(a2, b2)
                    if t:
                        for m, z in phi.on(H.mono_mul(a1, b1)).items():
                            acc(out, m, -(t * z * x * y))
                else:
                    if (a1, b1) == (a, b):
                        continue
                    t = cyc(a1, b1)
                    if t:
                        for m, z in phi.on(H.mono_mul(a2, b2)).items():
                            acc(out, m, -(t * z * x * y))
        lead = ((), gadd(top[0][1], top[1][1]))
        val = out.pop(lead, ZERO)
        if out:
            raise CleftError(f"cocycle value at ({_mfmt(H, a)}, {_mfmt(H, b)}) is not a scalar: "
                             f"{_fmt(A, out)}")
        # the top term's H-product is (g_a g_b)bar with coefficient 1 in H
        for m, z in phi.on(H.mono_mul(*top)).items():
            if m != lead or z != ONE:
                raise CleftError("top term of the expansion is not a bare group element")
        return val

    cyc = Cocycle(fn, "tau" if left else "sigma")
    return cyc


def extract_cocycle(c: CleftObject, a: Element | Mono, b: Element | Mono):
    """Evaluate the object's 2-cocycle (tau on the left, sigma on the right)."""
    cyc = c.cocycle()
    da = a.terms if isinstance(a, Element) else {a: ONE}
    db = b.terms if isinstance(b, Element) else {b: ONE}
    return cyc.on(da, db)


def cocycle_brute_force(c: CleftObject, a: Mono, b: Mono):
    """The same value computed as a full convolution sum in A, without memo tables.

    phi^-1 is recomputed as a fresh Neumann series and the whole sum is
    formed before the scalar test.
    """
    fresh = conv_inverse(FilteredMap(lambda m: {m: ONE}, AlgebraTarget(c.A), "phi"), c.hspec)
    spec = c.hspec
    out: dict = {}
    for (a1, a2), x in spec.apply({a: ONE}).terms.items():
        for (b1, b2), y in spec.apply({b: ONE}).terms.items():
            if c.side == "left":
                t = c.A.mul_dict(fresh.on(c.H.mono_mul(a1, b1)), c.A.mul_dict({a2: ONE}, {b2: ONE}))
            else:
                t = c.A.mul_dict(c.A.mul_dict({a1: ONE}, {b1: ONE}), fresh.on(c.H.mono_mul(a2, b2)))
            for m, z in t.items():
                acc(out, m, z * x * y)
    return _scalar_value(c.A, out, "brute-force cocycle value")


def _mono_deg(m: Mono) -> int:
    return len(m[0])


def cocycle_checks(c: CleftObject, D: int = 3, groups=None) -> VerifyReport:
    """Cocycle identity on triples, normalization and invertibility on pairs, up to total degree D."""
    H = c.H
    groups = groups if groups is not None else default_groups(H.rank)
    cyc, cinv = c.cocycle(), c.cocycle(inverse=True)
    cop = c.hspec.mono_image
    mons = basis_monomials(H, D, groups)
    one = ((), H.zero_g)
    rep = VerifyReport()
    show = lambda x: str(x)

    def ee(a, b):
        return counit_mono(a) * counit_mono(b)

    for a in mons:
        rep.add("normalized", f"(1, {_mfmt(H, a)})", cyc(one, a) - counit_mono(a), show)
        rep.add("normalized", f"({_mfmt(H, a)}, 1)", cyc(a, one) - counit_mono(a), show)
    for a in mons:
        for b in mons:
            if _mono_deg(a) + _mono_deg(b) > D:
                continue
            x = y = ZERO
            for (a1, a2), ca in cop(a).items():
                for (b1, b2), cb in cop(b).items():
                    x = cyc(a1, b1) * cinv(a2, b2) * (ca * cb) + x
                    y = cinv(a1, b1) * cyc(a2, b2) * (ca * cb) + y
            label = f"{_mfmt(H, a)}, {_mfmt(H, b)}"
            rep.add("sigma * sigma^-1 = eps eps", label, x - ee(a, b), show)
            rep.add("sigma^-1 * sigma = eps eps", label, y - ee(a, b), show)
    for a in mons:
        for b in mons:
            if _mono_deg(a) + _mono_deg(b) > D:
                continue
            for cc in mons:
                if _mono_deg(a) + _mono_deg(b) + _mono_deg(cc) > D:
                    continue
                res = _cocycle_identity(c, cyc, a, b, cc)
                rep.add("cocycle identity", f"{_mfmt(H, a)}, {_mfmt(H, b)}, {_mfmt(H, cc)}", res, show)
    return rep


def _cocycle_identity(c: CleftObject, cyc: Cocycle, a, b, cc):
    H = c.H
    cop = c.hspec.mono_image
    lhs = rhs = ZERO
    if c.side == "left":
        # sum tau(a1 b1, c) tau(a2, b2) = sum tau(a, b1 c1) tau(b2, c2)
        for (a1, a2), x in cop(a).items():
            for (b1, b2), y in cop(b).items():
                t2 = cyc(a2, b2)
                if t2:
                    lhs = cyc.on(H.mono_mul(a1, b1), {cc: ONE}) * t2 * (x * y) + lhs
        for (b1, b2), y in cop(b).items():
            for (c1, c2), z in cop(cc).items():
                t2 = cyc(b2, c2)
                if t2:
                    rhs = cyc.on({a: ONE}, H.mono_mul(b1, c1)) * t2 * (y * z) + rhs
        return lhs - rhs
    # sum sigma(a1, b1) sigma(a2 b2, c) = sum sigma(b1, c1) sigma(a, b2 c2)
    for (a1, a2), x in cop(a).items():
        for (b1, b2), y in cop(b).items():
            s1 = cyc(a1, b1)
            if s1:
                lhs = s1 * cyc.on(H.mono_mul(a2, b2), {cc: ONE}) * (x * y) + lhs
    for (b1, b2), y in cop(b).items():
        for (c1, c2), z in cop(cc).items():
            s1 = cyc(b1, c1)
            if s1:
                rhs = s1 * cyc.on({a: ONE}, H.mono_mul(b2, c2)) * (y * z) + rhs
    return lhs - rhs


# ---- deformed products ---------------------------------------------------------------

def deformed_product(H: Presentation, sigma: Cocycle, sigma_inv: Cocycle,
                     a: Mono, b: Mono) -> dict:
    """a . b = sum sigma(a1, b1) a2 b2 sigma^-1(a3, b3), computed in H."""
    spec = CoactionSpec.coproduct(H)
    out: dict = {}
    for (a1, a2), x in spec.mono_image(a).items():
        for (b1, b2), y in spec.mono_image(b).items():
            s = sigma(a1, b1)
            if not s:
                continue
            for (a2_, a3), x2 in spec.mono_image(a2).items():
                for (b2_, b3), y2 in spec.mono_image(b2).items():
                    t = sigma_inv(a3, b3)
                    if not t:
                        continue
                    coeff = s * t * x * y * x2 * y2
                    for m, z in H.mono_mul(a2_, b2_).items():
                        acc(out, m, z * coeff)
    return out


@dataclass
class DeformationReport:
    pairs: int
    mismatches: list[str]
    coaction_failures: list[str]

    @property
    def passed(self) -> bool:
        return not self.mismatches and not self.coaction_failures

    def to_json(self) -> dict:
        return {"pairs": self.pairs, "mismatches": len(self.mismatches),
                "examples": self.mismatches[:10], "coaction_failures": self.coaction_failures[:10],
                "pass": self.passed}


def compare_deformation(h0: Presentation, hl: Presentation, A: Presentation, D: int,
                        groups=None) -> DeformationReport:
    """Check that H0 and H^lambda are 2-cocycle twists of each other.

    A is a left H0- and right H^lambda-comodule algebra with the identity
    section.  The right cocycle sigma of A gives H0 = (H^lambda)^sigma and
    H^lambda = (H0)^(sigma^-1) under the identity map on normal monomials.
    Both directions are compared on basis pairs of total x-degree <= D, after
    confirming that the left H0-coaction is (id (x) phi) Delta.
    """
    groups = groups if groups is not None else default_groups(hl.rank)
    c = make_cleft(A, hl, "right")
    canonical_section(A, h0)
    sig, sinv = c.cocycle(), c.cocycle(inverse=True)
    left = CoactionSpec.left_coaction(A, h0)
    mons = basis_monomials(hl, D, groups)
    cfail = []
    for b in mons:
        diff = _tensor_sub(left.mono_image(b), c.hspec.mono_image(b))
        if diff:
            cfail.append(_mfmt(hl, b))
    bad = []
    npairs = 0
    for a in mons:
        for b in mons:
            if _mono_deg(a) + _mono_deg(b) > D:
                continue
            npairs += 1
            twisted = deformed_product(hl, sig, sinv, a, b)
            r1 = _tensor_sub(twisted, h0.mono_mul(a, b))
            back = deformed_product(h0, sinv, sig, a, b)
            r2 = _tensor_sub(back, hl.mono_mul(a, b))
            if r1:
                bad.append(f"H0 vs twisted H^lambda at ({_mfmt(hl, a)}, {_mfmt(hl, b)}): {_fmt(hl, r1)}")
            if r2:
                bad.append(f"H^lambda vs twisted H0 at ({_mfmt(hl, a)}, {_mfmt(hl, b)}): {_fmt(hl, r2)}")
    return DeformationReport(npairs, bad, cfail)


# ---- NB elements -----------------------------------------------------------------------

@dataclass
class NBResult:
    value: Element
    c: object
    verified: bool


def normalize_nb(c: CleftObject, label, value: Element | None = None) -> NBResult:
    """Replace the section's value at x_label by the unique normalized NB element.

    With x~ the current value and g~ = phi(g_i): g~ x~ - q_ii x~ g~ = c g~ g~,
    and x^ = x~ + c/(q_ii - 1) g~ satisfies g~ x^ = chi_i(g) x^ g~.
    """
    A = c.A
    k = A.datum.pos[label]
    gi = A.datum.g[k]
    qii = A.datum.q[k][k]
    if (qii - ONE) == ZERO:
        raise CleftError(f"q_ii = 1 at {label!r}: no normalized NB element")
    phi = c.section
    xt = Element(phi(((k,), A.zero_g))) if value is None else value
    gt = Element(phi(((), gi)))
    lhs = A.mul(gt, xt) - A.mul(xt, gt).scale(qii)
    g2 = A.mul(gt, gt)
    coeff = ZERO
    if not lhs.is_zero():
        if set(lhs.terms) != set(g2.terms) or len(g2.terms) != 1:
            raise CleftError(f"g~ x~ - q_ii x~ g~ is not a multiple of g~^2: {A.format(lhs)}")
        (m, y), = g2.terms.items()
        coeff = lhs.terms[m] / y
    xhat = xt + gt.scale(coeff / (qii - ONE))
    ok = True
    for r in range(A.rank):
        e = unit_vector(A.rank, r)
        ge = Element(phi(((), e)))
        res = A.mul(ge, xhat) - A.mul(xhat, ge).scale(A.datum.chi[k](e))
        ok = ok and res.is_zero()
    return NBResult(xhat, coeff, ok)


# ---- pairs (sigma, mu) and their equivalence ---------------------------------------------

@dataclass
class PairSigmaMu:
    sigma: BilinearCocycle
    mu: dict

    def __post_init__(self):
        self.mu = {k: as_scalar(v) for k, v in self.mu.items() if as_scalar(v)}

    def to_json(self) -> dict:
        return {"sigma_skew": {f"{i},{j}": format_scalar(v)
                               for (i, j), v in sorted(skew_invariant(self.sigma).items())},
                "mu": {f"{i},{j}": format_scalar(v) for (i, j), v in sorted(self.mu.items())}}


def validate_pair(p: PairSigmaMu, d: YDDatum) -> None:
    allowed = xi_sigma(d, p.sigma)
    for key in p.mu:
        if key not in allowed:
            raise CleftError(f"mu support violation at {key}: not in Xi(sigma)")


@dataclass
class Equivalence:
    witness: OneCochain | None
    reason: str = ""

    def __bool__(self):
        return self.witness is not None


def _smith(rows: list[list[int]]):
    """(D, U, W) with U V W = D for the integer matrix V (sympy's exact SNF)."""
    from sympy import Matrix
    from sympy.matrices.normalforms import smith_normal_decomp
    D, U, W = smith_normal_decomp(Matrix(rows))
    return ([[int(x) for x in D.row(i)] for i in range(D.rows)],
            [[int(x) for x in U.row(i)] for i in range(U.rows)],
            [[int(x) for x in W.row(i)] for i in range(W.rows)])


def _pow(x: Scalar, e: int) -> Scalar:
    return x ** e if e >= 0 else x.inverse() ** (-e)


def solve_character(rows: list[tuple[int, ...]], values: list[Scalar], m: int):
    """Values w_c = chi(e_c) with prod_c w_c^V[p][c] = values[p], or None."""
    if not rows:
        return [ONE] * m
    D, U, W = _smith([list(r) for r in rows])
    rp = []
    for s in range(len(rows)):
        acc_v = ONE
        for p, e in enumerate(U[s]):
            if e:
                acc_v = acc_v * _pow(values[p], e)
        rp.append(acc_v)
    z = [ONE] * m
    for s in range(len(rows)):
        dk = D[s][s] if s < m else 0
        if dk == 0:
            if not rp[s].is_one():
                return None
            continue
        root = nth_root(rp[s], abs(dk))
        if root is None:
            return None
        z[s] = root if dk > 0 else root.inverse()
    w = []
    for cix in range(m):
        val = ONE
        for kk in range(m):
            if W[cix][kk]:
                val = val * _pow(z[kk], W[cix][kk])
        w.append(val)
    for row, v in zip(rows, values):
        got = ONE
        for cix, e in enumerate(row):
            if e:
                got = got * _pow(w[cix], e)
        if got != v:
            raise CleftError("character solve produced an inconsistent answer")
    return w


def pair_equivalent(p: PairSigmaMu, p2: PairSigmaMu, d: YDDatum) -> Equivalence:
    """Find eta with sigma2 = sigma d(eta) and mu2_ij = mu_ij eta(g_i) eta(g_j)."""
    eta0, key = cohomologous(p.sigma, p2.sigma)
    if eta0 is None:
        return Equivalence(None, f"skew invariants differ at {key}")
    s1, s2 = set(p.mu), set(p2.mu)
    if s1 != s2:
        diff = sorted(s1 ^ s2)
        return Equivalence(None, f"mu supports differ at {diff[0]}")
    rows, vals = [], []
    for (i, j) in sorted(s1):
        gi, gj = d.g[d.pos[i]], d.g[d.pos[j]]
        rows.append(gadd(gi, gj))
        vals.append(p2.mu[(i, j)] / (p.mu[(i, j)] * eta0(gi) * eta0(gj)))
    w = solve_character(rows, vals, d.rank)
    if w is None:
        return Equivalence(None, "no character solves the mu constraints (square-class obstruction)")
    eta = eta0 * OneCochain(w, [[ONE] * d.rank for _ in range(d.rank)])
    if not verify_pair_witness(p, p2, d, eta):
        raise CleftError("constructed witness failed verification")
    return Equivalence(eta)


def verify_pair_witness(p: PairSigmaMu, p2: PairSigmaMu, d: YDDatum, eta: OneCochain) -> bool:
    if p.sigma * coboundary(eta) != p2.sigma:
        return False
    keys = set(p.mu) | set(p2.mu)
    for (i, j) in keys:
        gi, gj = d.g[d.pos[i]], d.g[d.pos[j]]
        if p.mu.get((i, j), ZERO) * eta(gi) * eta(gj) != p2.mu.get((i, j), ZERO):
            return False
    return True


@dataclass
class Orbit:
    representative: int
    members: list[int]
    witnesses: dict


def classify(d: YDDatum, pairs: list[PairSigmaMu]) -> list[Orbit]:
    """Partition the list by pair_equivalent against each orbit's first member."""
    for p in pairs:
        validate_pair(p, d)
    orbits: list[Orbit] = []
    for idx, p in enumerate(pairs):
        for orb in orbits:
            eq = pair_equivalent(pairs[orb.representative], p, d)
            if eq:
                orb.members.append(idx)
                orb.witnesses[idx] = eq.witness
                break
        else:
            orbits.append(Orbit(idx, [idx], {idx: OneCochain.trivial(d.rank)}))
    return orbits


def orbits_to_json(orbits: list[Orbit], pairs: list[PairSigmaMu]) -> list[dict]:
    return [{"orbit_id": n, "representative": pairs[o.representative].to_json(),
             "members": o.members,
             "witnesses": {str(k): w.to_json() for k, w in o.witnesses.items()}}
            for n, o in enumerate(orbits)]


# ---- augmented pairs (s, m) over k_M ---------------------------------------------------

@dataclass
class AugPairSM:
    s: AdditiveCocycle
    m: dict

    def __post_init__(self):
        self.m = {k: v for k, v in self.m.items() if v}

    @property
    def dim(self) -> int:
        return self.s.dim

    def to_json(self) -> dict:
        return {"s": self.s.to_json(),
                "m": {f"{i},{j}": v.to_json() for (i, j), v in sorted(self.m.items())}}


def _lam_support(lam: dict) -> set:
    return {k for k, v in lam.items() if v}


def aug_membership(ap: AugPairSM, d: YDDatum, lam: dict) -> None:
    """s(g, g_i) + s(g, g_j) = s(g_i, g) + s(g_j, g) wherever lambda_ij or m_ij is nonzero."""
    allowed = xi(d)
    for key in ap.m:
        if key not in allowed:
            raise CleftError(f"m is supported outside Xi at {key}")
    gens = group_generators(d.rank)
    for (i, j) in sorted(_lam_support(lam) | set(ap.m)):
        gi, gj = d.g[d.pos[i]], d.g[d.pos[j]]
        for e in gens:
            if ap.s(e, gi) + ap.s(e, gj) != ap.s(gi, e) + ap.s(gj, e):
                raise CleftError(f"membership fails at ({i}, {j}) against generator {e}")


def aug_pair_to_extension(ap: AugPairSM, d: YDDatum, lam: dict, block_rules=(),
                          valid_length=None) -> CleftObject:
    """A^lambda(1 + s, lambda + m) over k_M as a left H^lambda-cleft object."""
    aug_membership(ap, d, lam)
    dim = ap.dim
    s = ap.s
    sigma = lambda a, b: KM(ONE, s(a, b))
    mu = {}
    for key in sorted(_lam_support(lam) | set(ap.m)):
        mu[key] = KM(as_scalar(lam.get(key, ZERO)), ap.m.get(key, MVec.zero(dim)))
    A = build_presentation(d, "Alamsigmu", lam=lam, sigma=sigma, mu=mu, block_rules=block_rules,
                           check_support=False, valid_length=valid_length, name="A(1+s, lambda+m)")
    H = build_presentation(d, "Hlam", lam=lam, block_rules=block_rules,
                           valid_length=valid_length, name="H^lambda")
    return make_cleft(A, H, "left", coeff_dim=dim)


def _body(x):
    return x.body if isinstance(x, KM) else as_scalar(x)


def augmentation(A: Presentation, a: dict):
    """x_i -> 0, gbar -> 1, k_M -> k."""
    tot = ZERO
    for (w, _g), x in a.items():
        if not w:
            tot = tot + _body(x)
    return tot


def augmentation_checks(c: CleftObject, D: int, groups=None) -> VerifyReport:
    """eps_A o phi = eps on basis monomials; eps_A multiplicative on basis pairs."""
    A, H = c.A, c.H
    groups = groups if groups is not None else default_groups(H.rank)
    mons = basis_monomials(H, D, groups)
    rep = VerifyReport()
    for b in mons:
        rep.add("augmented section", _mfmt(H, b), augmentation(A, c.section(b)) - counit_mono(b), str)
    for a in mons:
        for b in mons:
            if _mono_deg(a) + _mono_deg(b) > D:
                continue
            val = augmentation(A, A.mono_mul(a, b)) - augmentation(A, {a: ONE}) * augmentation(A, {b: ONE})
            rep.add("augmentation multiplicative", f"{_mfmt(A, a)}, {_mfmt(A, b)}", val, str)
    return rep


def _pairs_of(ap: AugPairSM, ap2: AugPairSM, lam: dict) -> list:
    return sorted(_lam_support(lam) | set(ap.m) | set(ap2.m))


def verify_aug_witness(ap: AugPairSM, ap2: AugPairSM, d: YDDatum, lam: dict,
                       t: AdditiveCochain) -> bool:
    if ap.s + add_coboundary(t) != ap2.s:
        return False
    zero_m = MVec.zero(ap.dim)
    for (i, j) in _pairs_of(ap, ap2, lam):
        gi, gj = d.g[d.pos[i]], d.g[d.pos[j]]
        lij = as_scalar(lam.get((i, j), ZERO))
        expect = ap.m.get((i, j), zero_m) - (t(gi) + t(gj)).scale(lij)
        if expect != ap2.m.get((i, j), zero_m):
            return False
    return True


def aug_equivalent(ap: AugPairSM, ap2: AugPairSM, d: YDDatum, lam: dict) -> AdditiveCochain | None:
    """t with s2 = s + d(t) and m2_ij = m_ij - lambda_ij (t(g_i) + t(g_j)), or None.

    The symmetric part of t comes from add_cohomologous; its linear part l is
    then found by exact linear algebra over M, one coordinate at a time.
    """
    t0, _key = add_cohomologous(ap.s, ap2.s)
    if t0 is None:
        return None
    rank, dim = d.rank, ap.dim
    zero_m = MVec.zero(dim)
    eqs = []
    for (i, j) in _pairs_of(ap, ap2, lam):
        gi, gj = d.g[d.pos[i]], d.g[d.pos[j]]
        lij = as_scalar(lam.get((i, j), ZERO))
        rhs = ap.m.get((i, j), zero_m) - ap2.m.get((i, j), zero_m) - (t0(gi) + t0(gj)).scale(lij)
        row = {r: lij * (gi[r] + gj[r]) for r in range(rank) if lij * (gi[r] + gj[r])}
        eqs.append((row, rhs))
    lin = [[ZERO] * dim for _ in range(rank)]
    for cc in range(dim):
        # unknowns 0..rank-1 are l_r, unknown `rank` multiplies -rhs
        cols = [dict() for _ in range(rank + 1)]
        for e, (row, rhs) in enumerate(eqs):
            for r, x in row.items():
                cols[r][e] = x
            if rhs.v[cc]:
                cols[rank][e] = -rhs.v[cc]
        sol = next((v for v in nullspace(cols, rank + 1) if v[rank]), None)
        if sol is None:
            return None
        for r in range(rank):
            lin[r][cc] = as_scalar(sol[r]) / sol[rank]
    t = AdditiveCochain([t0.linear[r] + MVec(lin[r]) for r in range(rank)], t0.sym)
    if not verify_aug_witness(ap, ap2, d, lam, t):
        raise CleftError("constructed additive witness failed verification")
    return t


def whitehead_reduce(ap: AugPairSM, d: YDDatum, lam: dict) -> AdditiveCochain:
    """t with (s, m) ~ (0, 0) for a datum whose Xi is {(i, -i)} with g_i = e_i.

    t(g_i) = m_{i,-i} / (2 lambda_{i,-i}) and the quadratic part of t is s
    itself, which the membership condition forces to be symmetric.
    """
    aug_membership(ap, d, lam)
    rank, dim = d.rank, ap.dim
    pos_labels = [lab for lab in d.labels if isinstance(lab, int) and lab > 0]
    if set(xi(d)) != {(i, -i) for i in pos_labels}:
        raise CleftError("whitehead_reduce needs Xi = {(i, -i)}")
    linear = [MVec.zero(dim) for _ in range(rank)]
    for i in pos_labels:
        lij = as_scalar(lam.get((i, -i), ZERO))
        if not lij:
            raise CleftError(f"lambda_({i},{-i}) = 0: hypothesis violated")
        gi = d.g[d.pos[i]]
        if sorted(gi) != [0] * (rank - 1) + [1]:
            raise CleftError(f"g_{i} is not a basis vector of the group")
        r = gi.index(1)
        linear[r] = ap.m.get((i, -i), MVec.zero(dim)).scale(ONE / (2 * lij))
    if not ap.s.is_symmetric():
        raise CleftError("s is not symmetric; membership should have forced it")
    t = AdditiveCochain(linear, ap.s.T)
    zero_pair = AugPairSM(AdditiveCocycle.zero(rank, dim), {})
    if not verify_aug_witness(ap, zero_pair, d, lam, t):
        raise CleftError("whitehead witness failed verification")
    return t


def random_aug_pair(d: YDDatum, lam: dict, dim: int, rng: random.Random,
                    symmetric: bool = True) -> AugPairSM:
    """Small random (s, m): symmetric s, m on the lambda-support."""
    rank = d.rank

    def rv():
        return MVec([rng.randint(-5, 5) for _ in range(dim)])

    T = [[None] * rank for _ in range(rank)]
    for i in range(rank):
        for j in range(i, rank):
            T[i][j] = rv()
            T[j][i] = T[i][j] if symmetric else rv()
    m = {key: rv() for key in sorted(_lam_support(lam))}
    return AugPairSM(AdditiveCocycle(T), m)


# ---- Hochschild cocycles and the augmented correspondence ------------------------------

def nil_part(cyc: Cocycle, dim: int) -> Callable[[Mono, Mono], MVec]:
    """t = tau - eps eps as an M-valued bilinear form (the body must be eps eps)."""
    def t(a, b):
        v = cyc(a, b)
        if isinstance(v, KM):
            if v.body != counit_mono(a) * counit_mono(b):
                raise CleftError("cocycle body differs from eps eps")
            return v.nil
        if as_scalar(v) != counit_mono(a) * counit_mono(b):
            raise CleftError("cocycle body differs from eps eps")
        return MVec.zero(dim)
    return t


def twisted_product(H: Presentation, tau: Callable[[Mono, Mono], object], a: Mono, b: Mono) -> dict:
    """a . b = sum a1 b1 tau(a2, b2) in H (x) k_M."""
    spec = CoactionSpec.coproduct(H)
    out: dict = {}
    for (a1, a2), x in spec.mono_image(a).items():
        for (b1, b2), y in spec.mono_image(b).items():
            t = tau(a2, b2)
            if not t:
                continue
            for m, z in H.mono_mul(a1, b1).items():
                acc(out, m, t * z * x * y)
    return out


def _tau_of(t: Callable, dim: int) -> Callable:
    def tau(a, b):
        return KM(counit_mono(a) * counit_mono(b), t(a, b))
    return tau


def pair_from_tau(H: Presentation, tau: Callable, d: YDDatum, lam: dict, dim: int,
                  pairs: Iterable) -> AugPairSM:
    """Read (s, m) back off the algebra (H (x) k_M)_tau.

    s(e_r, e_c) is the nil part of tau on grouplikes.  For (i, j) the element
    x_i.x_j - q_ij x_j.x_i equals -lambda_ij + mu_ij gbar_i.gbar_j, which
    determines mu_ij = lambda_ij + m_ij.
    """
    rank = d.rank
    gens = group_generators(rank)
    T = [[tau(((), gens[r]), ((), gens[c])).nil for c in range(rank)] for r in range(rank)]
    s = AdditiveCocycle(T)
    m = {}
    z = zero(rank)
    for (i, j) in pairs:
        k, l = d.pos[i], d.pos[j]
        xi_, xj = ((k,), z), ((l,), z)
        rel = twisted_product(H, tau, xi_, xj)
        for mono, c in twisted_product(H, tau, xj, xi_).items():
            acc(rel, mono, -(c * d.q[k][l]))
        gg = twisted_product(H, tau, ((), d.g[k]), ((), d.g[l]))
        (gm, gc), = gg.items()
        rest = dict(rel)
        coeff = rest.pop(gm, ZERO)
        lij = as_scalar(lam.get((i, j), ZERO))
        const = rest.pop(((), z), ZERO)
        if rest or const != -lij:
            raise CleftError(f"relation ({i}, {j}) of the twisted algebra has an unexpected shape")
        mu = coeff / gc
        if isinstance(mu, KM):
            if mu.body != lij:
                raise CleftError(f"mu body differs from lambda at ({i}, {j})")
            m[(i, j)] = mu.nil
        elif as_scalar(mu) != lij:
            raise CleftError(f"mu body differs from lambda at ({i}, {j})")
    return AugPairSM(s, m)


@dataclass
class RoundTripReport:
    section: VerifyReport
    augmentation: VerifyReport
    coinvariants: CoinvariantReport
    cocycle: VerifyReport | None
    hochschild: VerifyReport
    product_mismatches: list[str]
    recovered: AugPairSM | None
    witness: AdditiveCochain | None

    @property
    def passed(self) -> bool:
        return (self.section.passed and self.augmentation.passed and self.coinvariants.passed
                and (self.cocycle is None or self.cocycle.passed) and self.hochschild.passed
                and not self.product_mismatches and self.witness is not None)


def aug_round_trip(ap: AugPairSM, d: YDDatum, lam: dict, D: int = 3, block_rules=(),
                   hochschild_degree: int | None = None, groups=None,
                   full_cocycle: bool = False) -> RoundTripReport:
    """Pair -> extension -> tau = eps eps + t -> (H (x) k_M)_tau -> pair.

    The extension A^lambda(1+s, lambda+m) is checked as an augmented cleft
    object; t is checked to be a Hochschild 2-cocycle; the algebra built from
    tau is compared with A product by product (the identity map being the
    isomorphism), and the pair read off that algebra must be equivalent to ap.
    Since t t = 0 in k_M, the cocycle identity for tau is the Hochschild
    condition for t; ``full_cocycle`` runs the triple check on tau as well.
    """
    c = aug_pair_to_extension(ap, d, lam, block_rules)
    groups = groups if groups is not None else default_groups(d.rank)
    sec = section_checks(c, D, groups)
    aug = augmentation_checks(c, D, groups)
    coi = coinvariants_check(c.A, c.H, "left", D, coeff_dim=ap.dim)
    coc = cocycle_checks(c, D, groups) if full_cocycle else None
    cyc = c.cocycle(method="expansion")
    t = nil_part(cyc, ap.dim)
    hd = D if hochschild_degree is None else hochschild_degree
    hoch = hochschild_check(t, c.H, hd, groups=groups)
    tau = _tau_of(t, ap.dim)
    bad = []
    mons = basis_monomials(c.H, D, groups)
    for a in mons:
        for b in mons:
            if _mono_deg(a) + _mono_deg(b) > D:
                continue
            r = _tensor_sub(twisted_product(c.H, tau, a, b), c.A.mono_mul(a, b))
            if r:
                bad.append(f"({_mfmt(c.H, a)}, {_mfmt(c.H, b)})")
    back = pair_from_tau(c.H, tau, d, lam, ap.dim, sorted(_lam_support(lam) | set(ap.m)))
    wit = aug_equivalent(ap, back, d, lam)
    return RoundTripReport(sec, aug, coi, coc, hoch, bad, back, wit)


def pullback_cocycle(s: AdditiveCocycle) -> Callable[[Mono, Mono], MVec]:
    """t(w g, v h) = s(g, h) when both words are empty, else 0."""
    def t(a, b):
        if a[0] or b[0]:
            return MVec.zero(s.dim)
        return s(a[1], b[1])
    return t


def pullback_round_trip(s: AdditiveCocycle, d: YDDatum, D: int = 3, block_rules=(),
                        groups=None) -> tuple[VerifyReport, list[str], AugPairSM]:
    """For H0: the pulled-back t is Hochschild and (H0 (x) k_M)_tau equals A(1+s, 0).

    Returns the Hochschild report, product mismatches against the extension
    of the pair (s, 0), and the pair read back from the twisted algebra.
    """
    groups = groups if groups is not None else default_groups(d.rank)
    H = build_presentation(d, "H0", block_rules=block_rules)
    t = pullback_cocycle(s)
    hoch = hochschild_check(t, H, D, groups=groups)
    ap = AugPairSM(s, {})
    c = aug_pair_to_extension(ap, d, {}, block_rules)
    tau = _tau_of(t, s.dim)
    bad = []
    mons = basis_monomials(H, D, groups)
    for a in mons:
        for b in mons:
            if _mono_deg(a) + _mono_deg(b) > D:
                continue
            if _tensor_sub(twisted_product(H, tau, a, b), c.A.mono_mul(a, b)):
                bad.append(f"({_mfmt(H, a)}, {_mfmt(H, b)})")
    back = pair_from_tau(H, tau, d, {}, s.dim, [])
    return hoch, bad, back
