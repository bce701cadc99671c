from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from superw.graded import (
    GradedDim, SuperMatrix, ThetaData, graded_tensor, inverse, metric, permutation_P,
    proportionality, q_operator, rank, supertrace, transpose_order, transpose_t,
)

DIMS = [(1, 0), (1, 1), (2, 1), (1, 2), (2, 2), (0, 2)]


def units(dim):
    n = dim.size
    return [(a, b) for a in range(1, n + 1) for b in range(1, n + 1)]


def test_supertrace_identity():
    for M, N in DIMS:
        assert supertrace(SuperMatrix.identity(GradedDim(M, N))) == M - N
    assert supertrace(SuperMatrix.identity(GradedDim(2, 2))) == 0
    assert supertrace(SuperMatrix.unit(GradedDim(2, 1), 3, 3)) == -1


def test_invalid_dim():
    with pytest.raises(ValueError):
        GradedDim(0, 0)


def test_tensor_identity_case():
    d = GradedDim(1, 1)
    A, B = SuperMatrix.unit(d, 1, 2, 3), SuperMatrix.unit(d, 2, 2, -1)
    II = graded_tensor(SuperMatrix.identity(d), SuperMatrix.identity(d))
    assert II @ graded_tensor(A, B) == graded_tensor(A, B)


def test_tensor_odd_sign_gl11():
    d = GradedDim(1, 1)
    E = lambda a, b: SuperMatrix.unit(d, a, b)
    lhs = graded_tensor(E(1, 2), E(2, 1)) @ graded_tensor(E(2, 1), E(1, 2))
    assert lhs == -graded_tensor(E(1, 1), E(2, 2))


def test_tensor_even_is_kronecker():
    A = SuperMatrix(2, {(1, 1): 1, (1, 2): 2, (2, 1): 3})
    B = SuperMatrix(2, {(1, 2): 5, (2, 2): 7})
    K = graded_tensor(A, B)
    for (i, j), u in A.entries.items():
        for (k, l), v in B.entries.items():
            assert K[((i - 1) * 2 + k, (j - 1) * 2 + l)] == u * v
    assert len(K.entries) == len(A.entries) * len(B.entries)


@pytest.mark.parametrize("M,N", DIMS)
def test_permutation_squares_to_identity(M, N):
    d = GradedDim(M, N)
    P = permutation_P(d)
    assert P @ P == graded_tensor(SuperMatrix.identity(d), SuperMatrix.identity(d))


def test_permutation_gl10():
    assert permutation_P(GradedDim(1, 0)) == SuperMatrix.identity(1)


@st.composite
def unit_quads(draw):
    M, N = draw(st.sampled_from(DIMS))
    d = GradedDim(M, N)
    idx = st.integers(1, d.size)
    return d, [draw(idx) for _ in range(8)]


@given(unit_quads())
def test_tensor_product_rule(data):
    d, (i, j, k, l, m, n, p, q) = data
    E = lambda a, b: SuperMatrix.unit(d, a, b)
    P = d.parity
    lhs = graded_tensor(E(i, j), E(k, l)) @ graded_tensor(E(m, n), E(p, q))
    s = (-1) ** ((P(k) + P(l)) * (P(m) + P(n)))
    rhs = graded_tensor(E(i, j) @ E(m, n), E(k, l) @ E(p, q)).scale(s)
    assert lhs == rhs


@st.composite
def matrix_pairs(draw):
    M, N = draw(st.sampled_from(DIMS))
    d = GradedDim(M, N)
    coeff = st.integers(-3, 3)

    def mat():
        return SuperMatrix(d, {ab: draw(coeff) for ab in units(d)})
    return mat(), mat()


@given(matrix_pairs())
def test_supertrace_multiplicative(pair):
    A, B = pair
    assert supertrace(graded_tensor(A, B)) == supertrace(A) * supertrace(B)


@pytest.mark.parametrize("M,N", DIMS)
def test_metric_symmetry(M, N):
    d = GradedDim(M, N)
    g = metric(d)
    for a, b in units(d):
        for c, e in units(d):
            x, y = (a, b), (c, e)
            px, py = (d.parity(a) + d.parity(b)) % 2, (d.parity(c) + d.parity(e)) % 2
            v = g.get((x, y), 0)
            assert v == (-1) ** (px * py) * g.get((y, x), 0)
            if px != py:
                assert v == 0


THETAS = [ThetaData(1, 1), ThetaData(2, 1), ThetaData(0, 1), ThetaData(1, 2), ThetaData(3, 0)]


@pytest.mark.parametrize("th", THETAS)
def test_theta_invariants(th):
    for a in range(1, th.dim.size + 1):
        assert (-1) ** th.parity(a) * th.theta(a) * th.theta(th.bar(a)) == 1
        assert th.parity(th.bar(a)) == th.parity(a)
        assert th.bar(th.bar(a)) == a


def test_transpose_examples():
    th = ThetaData(1, 1)
    d = th.dim
    assert transpose_t(SuperMatrix.unit(d, 1, 1), th) == SuperMatrix.unit(d, 1, 1)
    assert transpose_t(SuperMatrix.unit(d, 2, 3), th) == SuperMatrix.unit(d, 2, 3, -1)
    assert transpose_t(SuperMatrix.zero(d), th).is_zero()


def test_transpose_needs_even_odd_part():
    with pytest.raises(ValueError):
        ThetaData.from_dim(GradedDim(1, 1))


@pytest.mark.parametrize("th", THETAS)
def test_transpose_order_is_two(th):
    # computed, not assumed: t^2 = id on every matrix unit and t != id
    assert transpose_order(th) == 2


def test_q_operator_examples():
    assert q_operator(ThetaData(1, 0)) == SuperMatrix.identity(1)
    Q = q_operator(ThetaData(1, 1))
    assert set(Q.entries.values()) <= {1, -1}
    # regression constant from the direct product: Q^2 = (M - 2n) Q
    assert proportionality(Q @ Q, Q) == -1


@pytest.mark.parametrize("th", THETAS)
def test_q_square_proportional(th):
    Q = q_operator(th)
    assert proportionality(Q @ Q, Q) == th.M - 2 * th.n


def test_rank_and_inverse():
    A = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    inv = inverse(A)
    assert inv == [[1, -1], [-1, 2]]
    assert rank([[1, 2], [2, 4]], 2) == 1
    with pytest.raises(ZeroDivisionError):
        inverse([[1, 2], [2, 4]])
