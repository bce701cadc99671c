from fractions import Fraction
from itertools import product

import pytest

from superw.graded import GradedDim
from superw.sl2 import supertrace_closed_form
from superw.superpoly import Poly, check_jacobi, poisson_bracket, sym
from superw.wgen import (
    W, alpha_closed_forms, build_bar_basis, change_bar_basis, centrality_report, chain,
    closed_form_rows, dirac_brackets, solder_brackets, solve_lambda, w_generators,
)


def table(M, N, p):
    return solder_brackets(solve_lambda(M, N, p))


@pytest.mark.parametrize("M,N,p", [(1, 1, 1), (1, 1, 2), (2, 1, 2), (1, 1, 3)])
def test_free_parameter_count(M, N, p):
    assert solve_lambda(M, N, p).n_free == (M + N) ** 2 * p


def test_lambda_base_is_free_parameter():
    s = solve_lambda(1, 1, 2)
    for k in range(2):
        for a, b in product((1, 2), repeat=2):
            t = sym("lambda", k, a, b, 1)
            assert s.lam[(k, -k, a, b)] == Poly.gen(t, Fraction(1, supertrace_closed_form(2, k)))


def test_lambda_linear():
    s = solve_lambda(1, 1, 2)
    for v in s.lam.values():
        for mono in v.terms:
            assert sum(1 for x in mono if x.family == "lambda") == 1


@pytest.mark.parametrize("M,N,p", [(1, 1, 2), (1, 2, 2)])
def test_closed_form_rows(M, N, p):
    assert closed_form_rows(table(M, N, p), GradedDim(M, N), p) == {}


def test_solder_jacobi_112():
    assert check_jacobi(table(1, 1, 2)).ok


@pytest.mark.parametrize("M,N,p", [(1, 1, 2), (2, 1, 2)])
def test_w00_central(M, N, p):
    t = table(M, N, p)
    dim = GradedDim(M, N)
    w00 = sum((Poly.gen(W(0, a, a, M)) for a in range(1, dim.size + 1)), Poly())
    for g in w_generators(dim, p):
        assert poisson_bracket(w00, Poly.gen(g), t) == Poly()


@pytest.mark.parametrize("M,N,p", [(1, 1, 3), (2, 1, 2)])
def test_linear_part_is_scaled_loop_bracket(M, N, p):
    # the degree-one part of {W_j, W_l} is c(j,l) times the loop bracket, c independent of indices
    t = table(M, N, p)
    dim = GradedDim(M, N)
    P = dim.parity
    n = dim.size
    for j, l in product(range(p), repeat=2):
        scale = None
        for a, b, c, d in product(range(1, n + 1), repeat=4):
            lin = t.get(W(j, a, b, M), W(l, c, d, M)).homogeneous(1)
            loop = Poly()
            if j + l < p:
                if b == c:
                    loop = loop + Poly.gen(W(j + l, a, d, M))
                if a == d:
                    loop = loop - Poly.gen(W(j + l, c, b, M), (-1) ** ((P(a) + P(b)) * (P(c) + P(d))))
            if not loop:
                assert not lin
                continue
            mono, coef = next(iter(loop.terms.items()))
            k = lin.terms.get(mono, 0) / coef
            assert lin == loop.scale(k)
            scale = k if scale is None else scale
            assert k == scale and k != 0


@pytest.mark.parametrize("M,N,p", [(1, 1, 2), (1, 1, 3)])
def test_dirac_equals_solder(M, N, p):
    d = dirac_brackets(M, N, p)
    assert d.delta0_rank == d.size
    assert d.table.equals(table(M, N, p))


def test_dirac_nilpotency_regression():
    # order of hat Delta, computed and frozen
    assert [dirac_brackets(*c).nilpotency for c in [(1, 1, 2), (2, 1, 2), (1, 1, 3)]] == [2, 2, 4]


def test_dirac_w00_central():
    res = dirac_brackets(1, 1, 2)
    w00 = Poly.gen(W(0, 1, 1, 1)) + Poly.gen(W(0, 2, 2, 1))
    for g in w_generators(GradedDim(1, 1), 2):
        assert poisson_bracket(w00, Poly.gen(g), res.table) == Poly()


def test_bar_basis_examples_p2():
    dim = GradedDim(1, 1)
    t = table(1, 1, 2)
    minus = build_bar_basis(-1, t, dim, 2)
    plus = build_bar_basis(1, t, dim, 2)
    w = lambda j, a, b: Poly.gen(W(j, a, b, 1)) if j < 2 else Poly()
    for a, b in product((1, 2), repeat=2):
        assert minus.gens[(0, a, b)] == plus.gens[(0, a, b)] == w(0, a, b).scale(2)
        assert minus.gens[(1, a, b)] == -w(1, a, b) + chain(w, (0, 0), a, b, dim)
        assert minus.gens[(2, a, b)] == Poly()
        # +Wbar_1 = -(-Wbar_1) + sum_i (-1)^[i] -Wbar_0 -Wbar_0
        g = lambda j, x, y: minus.gens[(j, x, y)]
        assert plus.gens[(1, a, b)] == -minus.gens[(1, a, b)] + chain(g, (0, 0), a, b, dim)


@pytest.mark.parametrize("M,N,p", [(1, 1, 2), (1, 1, 3), (2, 1, 2)])
def test_change_of_bar_basis(M, N, p):
    dim = GradedDim(M, N)
    t = table(M, N, p)
    assert change_bar_basis(build_bar_basis(1, t, dim, p), build_bar_basis(-1, t, dim, p)).ok


@pytest.mark.parametrize("sign", [1, -1])
def test_alpha_closed_forms_p3(sign):
    p = 3
    bars = build_bar_basis(sign, table(1, 1, p), GradedDim(1, 1), p)
    for j in range(p):
        for key, want in alpha_closed_forms(sign, p, j).items():
            assert bars.alpha[j].get(key, 0) == want


def test_alpha_closed_form_values():
    assert alpha_closed_forms(-1, 2, 1) == {(1,): -1, (0, 0): 1}
    assert alpha_closed_forms(1, 3, 1) == {(1,): 4, (0, 0): 6}


def test_centrality_report_p3():
    t = table(1, 1, 3)
    rep = centrality_report(t, build_bar_basis(-1, t, GradedDim(1, 1), 3))
    assert rep.ok
    assert all(not v for v in rep.pair_values.values())
