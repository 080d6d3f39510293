import pytest

from qdeform.abgroup import gadd
from qdeform.freealg import Element, build_presentation, serre_element
from qdeform.hopf import (Antipode, CoactionSpec, HopfError, conv_inverse, counit, hochschild_check,
                          identity_map, is_skew_primitive, verify_hopf)
from qdeform.scalars import ONE, Q, Scalar
from qdeform.uq import UqInput, build_borel, positive_datum


def test_verify_hopf_sl2(a1):
    _, _, h0, hl, _ = a1
    for p in (h0, hl):
        rep = verify_hopf(p, 3)
        assert rep.passed, rep.failures[:3]
        assert set(rep.counts()) >= {"coassociativity", "counit-left", "antipode-left",
                                      "antipode-right", "delta-multiplicative"}


def test_verify_hopf_rejects_non_hopf(a1):
    with pytest.raises(HopfError):
        verify_hopf(a1[4], 2)


def test_non_hopf_ideal_detected(a1):
    # the A(lambda) tail lambda g_i g_j is not a Hopf ideal generator
    fake = a1[4].clone(flavor="Hlam")
    rep = verify_hopf(fake, 2)
    assert not rep.passed
    assert {c.identity for c in rep.failures} == {"delta-multiplicative", "counit-multiplicative"}


def test_generators_skew_primitive(a2):
    _, d, _, hl, _ = a2
    for lab in d.labels:
        g = d.g[d.pos[lab]]
        assert is_skew_primitive(hl.gen(lab), hl.zero_g, g, hl)
        assert not is_skew_primitive(hl.gen(lab), g, hl.zero_g, hl)


def test_serre_element_primitive_in_free_algebra():
    u = UqInput.preset("B2")
    d = positive_datum(u)
    F = build_presentation(d, "F")
    for i, j in ((1, 2), (2, 1)):
        aij = u.gcm.A[i - 1][j - 1]
        y = serre_element(d, i, j, aij)
        gi, gj = d.g[d.pos[i]], d.g[d.pos[j]]
        top = gj
        for _ in range(1 - aij):
            top = gadd(top, gi)
        assert is_skew_primitive(y, F.zero_g, top, F)


def test_antipode_on_generator(a1):
    hl = a1[3]
    S = Antipode(hl)
    # S(x_1) = -g_1^{-1} x_1 = -chi_1(g_1^{-1}) x_1 g_1^{-1} = -q^-2 x_1 g_1^{-1}
    assert S(hl.gen(1)) == hl.mul(hl.gen(1), hl.group((-1,))).scale(-Q ** -2)
    assert S(hl.group((3,))) == hl.group((-3,))


def test_convolution_inverse_of_identity_is_antipode(a1):
    hl = a1[3]
    inv = conv_inverse(identity_map(hl), CoactionSpec.coproduct(hl))
    S = Antipode(hl)
    for layer in hl.basis(3):
        for w in layer:
            for g in ((0,), (1,), (-2,)):
                assert Element(inv.on({(w, g): ONE})) == S({(w, g): ONE})


def test_counit():
    _, b = build_borel(UqInput.preset("A1"))
    assert counit(b.gen(1)) == 0
    assert counit(b.group((2,), Q)) == Q


def test_hochschild_coboundary_passes(a1):
    hl = a1[3]

    def f(m):
        w, g = m
        return Scalar((len(w) + 1) * (g[0] + 2))

    def t(a, b):
        ea = ONE if not a[0] else Scalar(0)
        eb = ONE if not b[0] else Scalar(0)
        fab = sum((f(m) * c for m, c in hl.mono_mul(a, b).items()), Scalar(0))
        return ea * f(b) - fab + f(a) * eb

    assert hochschild_check(t, hl, 3).passed


def test_hochschild_detects_non_cocycle(a1):
    hl = a1[3]
    # at a = b = c = x_1 this gives -t(x1x1, x1) + t(x1, x1x1) = -4 + 2
    t = lambda a, b: Scalar(len(a[0]) ** 2 * len(b[0]))
    assert not hochschild_check(t, hl, 3).passed
