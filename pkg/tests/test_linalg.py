from hypothesis import given, strategies as st

from qdeform.linalg import Echelon, nullspace, rank
from qdeform.scalars import Q, Scalar

coeffs = st.sampled_from([Scalar(0), Scalar(1), Scalar(-2), Q, Q + 1, Q ** -1])
vecs = st.lists(st.dictionaries(st.integers(0, 4), coeffs, max_size=4), max_size=5)


def test_rank_small():
    assert rank([{0: Q, 1: Scalar(1)}, {0: Q * Q, 1: Q}, {2: Scalar(3)}]) == 2
    assert rank([]) == 0


@given(vecs)
def test_nullspace_solutions(cols):
    sols = nullspace(cols, len(cols))
    for s in sols:
        tot = {}
        for k, col in enumerate(cols):
            for key, x in col.items():
                tot[key] = tot.get(key, Scalar(0)) + s[k] * x
        assert all(not v for v in tot.values())
    # rank-nullity
    assert len(sols) + rank(cols) == len(cols)


@given(vecs)
def test_echelon_membership(rows):
    e = Echelon()
    for r in rows:
        e.add(r)
    for r in rows:
        assert e.contains(r)
    if len(rows) >= 2:
        combo = {}
        for key, x in rows[0].items():
            combo[key] = combo.get(key, Scalar(0)) + x * Q
        for key, x in rows[1].items():
            combo[key] = combo.get(key, Scalar(0)) - x
        assert e.contains(combo)
