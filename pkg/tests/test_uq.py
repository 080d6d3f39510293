import json

import pytest

from qdeform.datum import cartan_checks
from qdeform.scalars import ONE, Q, Scalar
from qdeform.uq import (UqError, UqInput, additive_h2_dimension, aq_relation_residuals,
                        borel_parameters, build_Aq, build_borel, build_uq, classify_uq_pairs,
                        cq_condition, gr_compare, order_condition, positive_datum,
                        relation_residuals, standard_lambda, uq_datum, whitehead_samples, xi_u)


@pytest.mark.parametrize("name", ["A1", "A2", "B2"])
def test_textbook_relations_hold(name):
    u = UqInput.preset(name)
    _, p = build_uq(u, "standard")
    res = relation_residuals(u, p)
    assert res and all(v.is_zero() for v in res.values())


def test_zero_mode_commutes():
    u = UqInput.preset("A2")
    _, p = build_uq(u, "zero")
    res = relation_residuals(u, p)
    assert all(v.is_zero() for v in res.values())


def test_standard_lambda():
    u = UqInput.preset("B2")
    lam = standard_lambda(u)
    assert lam[(1, -1)] == ONE / (Q - Q ** -1)
    assert lam[(2, -2)] == ONE / (Q ** 2 - Q ** -2)


def test_datum_shape():
    u = UqInput.preset("A2")
    d = uq_datum(u)
    assert d.blocks == ((-1, -2), (1, 2))
    assert d.qij(1, 1) == Q ** 2 and d.qij(1, 2) == Q ** -1
    assert d.qij(-1, -1) == Q ** -2


def test_conditions_formal_and_numeric():
    u = UqInput.preset("B2")
    assert all(ok for _, ok in order_condition(u))
    assert all(ok for _, ok, _ in cq_condition(u))
    u1 = UqInput.preset("A2", q0=1)
    assert not all(ok for _, ok in order_condition(u1))
    assert not all(ok for _, ok, _ in cq_condition(u1))


def test_cq_matches_c4():
    u = UqInput.preset("B2")
    d = positive_datum(u)
    A, dd = u.gcm.A, u.gcm.d
    for i in range(2):
        for j in range(2):
            if i != j:
                c4 = d.q[i][i] * d.q[j][j] - d.q[i][j] * d.q[j][i]
                cq = Q ** (2 * (dd[i] + dd[j] - dd[i] * A[i][j])) - 1
                assert c4 == Q ** (2 * dd[i] * A[i][j]) * cq


def test_borel_cartan_checks():
    u = UqInput.preset("A3")
    assert cartan_checks(positive_datum(u), u.gcm).passed


def test_lattice_required_for_singular_cartan():
    with pytest.raises(UqError):
        UqInput.from_json({"cartan_matrix": [[2, -2], [-2, 2]]})


def test_explicit_lattice_checked():
    doc = {"cartan_matrix": [[2]], "lattice": {"P": [[2]], "coroots": [[1]]}}
    assert UqInput.from_json(doc).m == 1
    with pytest.raises(UqError):
        UqInput.from_json({"cartan_matrix": [[2]], "lattice": {"P": [[3]], "coroots": [[1]]}})


def test_json_round_trip():
    u = UqInput.preset("B2")
    back = UqInput.from_json(json.dumps(u.to_json()))
    assert back.gcm == u.gcm and back.P == u.P and back.coroots == u.coroots


def test_gr_compare_sl2():
    rep = gr_compare(UqInput.preset("A1"), 4)
    assert rep.passed and rep.ranks_gr == [1, 2, 3, 4, 5]


def test_borel_ranks_sl2():
    from qdeform.freealg import hilbert_ranks
    _, b = build_borel(UqInput.preset("A1"))
    assert hilbert_ranks(b, 4) == [1, 1, 1, 1, 1]


def test_borel_parameters():
    rep = borel_parameters(UqInput.preset("A3"))
    assert rep.passed and rep.h2_parameters == 3
    assert additive_h2_dimension(1) == 0
    assert additive_h2_dimension(4) == 6


def test_xi_u_trivial_is_diagonal():
    u = UqInput.preset("A2")
    assert xi_u(u, {}) == {(1, 1), (2, 2)}


def test_aq_relations():
    u = UqInput.preset("A2")
    umat = {(1, 2): Scalar(-1)}
    allowed = xi_u(u, umat)
    mu = {k: Q for k in sorted(allowed)}
    p = build_Aq(u, umat, mu)
    res = aq_relation_residuals(u, p, umat, mu)
    assert all(v.is_zero() for v in res.values()), [k for k, v in res.items() if v]


def test_aq_support_violation():
    u = UqInput.preset("A2")
    with pytest.raises(UqError):
        build_Aq(u, {}, {(1, 2): ONE})


def test_classify_uq_pairs_sl2():
    out = classify_uq_pairs(UqInput.preset("A1"), [({}, {(1, 1): ONE}), ({}, {(1, 1): Q ** 2}),
                                                   ({}, {(1, 1): Q}), ({}, {})])
    assert [o["members"] for o in out["orbits"]] == [[0, 1], [2], [3]]


def test_whitehead_samples_deterministic():
    u = UqInput.preset("A2")
    a = whitehead_samples(u, samples=4, seed=11)
    b = whitehead_samples(u, samples=4, seed=11)
    assert a.passed and a.to_json() == b.to_json()
