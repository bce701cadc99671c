from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from superw.graded import SuperMatrix
from superw.reps import (
    DrinfeldInput, NotFactorable, RepAssignment, check_defining_relations, drinfeld_check,
    drinfeld_input_from, evaluation_rep, fundamental_rep, graded_bracket, highest_weight,
    level_nonzero, poly_from_roots, rational_roots, tensor_eval,
)


def test_fundamental_gl11():
    rep = fundamental_rep(1, 1)
    lhs = graded_bracket(rep.op(1, 2), 1, rep.op(2, 1), 1)
    assert lhs == rep.op(1, 1) + rep.op(2, 2)
    assert rep.op(1, 2) @ rep.op(1, 2) == SuperMatrix.zero(rep.parities)


def test_diagonal_action_and_parity_blocks():
    rep = fundamental_rep(2, 1)
    for a in range(1, 4):
        for b in range(1, 4):
            e = [Fraction(int(i == b)) for i in range(1, 4)]
            img = [sum(rep.op(a, a)[(i, j)] * e[j - 1] for j in range(1, 4)) for i in range(1, 4)]
            assert img == [Fraction(int(a == b)) * x for x in e]
    E12 = fundamental_rep(1, 1).op(1, 2)
    assert E12.block_parity() == 1 and list(E12.entries) == [(1, 2)]


def test_broken_rep_detected():
    rep = fundamental_rep(1, 1)
    bad = dict(rep.rho)
    bad[(1, 2)] = bad[(1, 2)].scale(2)
    assert type(rep)(rep.dim, rep.parities, bad).violations()


@pytest.mark.parametrize("M,N", [(1, 1), (2, 1), (1, 2), (0, 2)])
def test_evaluation_relations(M, N):
    ev = evaluation_rep(fundamental_rep(M, N))
    assert check_defining_relations(ev, 3).ok
    assert ev.op(1, 2, 2).is_zero() and ev.op(1, 1, 0) == SuperMatrix.identity(ev.parities)


def test_injected_defect_fails():
    ev = evaluation_rep(fundamental_rep(1, 1))
    ops = dict(ev.ops)
    ops[(1, 2, 1)] = ops[(1, 2, 1)].scale(3)
    assert not check_defining_relations(RepAssignment(ev.dim, ev.parities, ops, 1), 2).ok


def test_single_factor_tensor():
    ev = evaluation_rep(fundamental_rep(2, 1))
    assert tensor_eval([ev]) == ev


def test_two_factor_gl11():
    ev = evaluation_rep(fundamental_rep(1, 1))
    tp = tensor_eval([ev, ev])
    assert level_nonzero(tp, 2) and not level_nonzero(tp, 3)
    assert check_defining_relations(tp, 3).ok


@given(st.sampled_from([(1, 1), (2, 1), (1, 2), (0, 2), (2, 0)]), st.integers(1, 3))
def test_tensor_properties(mn, s):
    ev = evaluation_rep(fundamental_rep(*mn))
    tp = tensor_eval([ev] * s)
    assert level_nonzero(tp, s) and not level_nonzero(tp, s + 1)
    assert check_defining_relations(tp, s + 1).ok


def test_highest_weight_gl11():
    hw = highest_weight(evaluation_rep(fundamental_rep(1, 1)))
    assert hw.vector == (1, 0) and hw.kernel_dim == 1 and hw.label == "singular"
    assert hw.lam(1) == (1, 1) and hw.lam(2) == (1, 0)


def test_highest_weight_gl21():
    hw = highest_weight(evaluation_rep(fundamental_rep(2, 1)))
    assert hw.vector == (1, 0, 0) and hw.kernel_dim == 1


def test_evaluation_weight_form():
    # mu_a(u) = 1 + mu_a / u with mu the gl highest weight (1, 0, ..., 0)
    hw = highest_weight(evaluation_rep(fundamental_rep(1, 2)))
    assert [hw.lambdas[a] for a in (1, 2, 3)] == [(1,), (0,), (0,)]


def test_trivial_rep_flagged():
    ev = evaluation_rep(fundamental_rep(1, 1))
    hw = highest_weight(RepAssignment(ev.dim, ev.parities, {}, 1))
    assert hw.kernel_dim == 2 and hw.label == "reducible-or-trivial"


def test_drinfeld_equal_weights():
    d = DrinfeldInput.from_roots(([(2, 1)], [(0, 1)]), ([(2, 1)], [(0, 1)]), ([(2, 1)], [(0, 1)]))
    res = drinfeld_check(d, 2, 1)
    assert res.accept and res.witnesses[1] == () and res.witnesses[2] == ((), ())


def test_drinfeld_gl11_fundamental():
    d = DrinfeldInput.from_roots(([(-1, 1)], [(0, 1)]), ([], []))
    res = drinfeld_check(d, 1, 1)
    # P~ = 1 + 1/u, P = 1 - 0/u
    assert res.accept and res.witnesses[1] == ((-1,), (0,))


def test_drinfeld_half_shift_rejected():
    d = DrinfeldInput.from_roots(([(Fraction(-1, 2), 1)], [(0, 1)]), ([], []), ([], []))
    res = drinfeld_check(d, 2, 1)
    assert not res.accept and res.diagnostics


def test_drinfeld_malformed():
    with pytest.raises(NotFactorable):
        drinfeld_check(DrinfeldInput.from_roots(([(1, 1)], []), ([], [])), 1, 1)
    with pytest.raises(NotFactorable):
        DrinfeldInput.from_roots(([(2 ** 0.5, 1)], [(0, 1)]))


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=1, max_size=4))
def test_drinfeld_shift_chain_roundtrip(gammas):
    # lambda_1 / lambda_2 = P(u+1)/P(u) with roots gamma: numerator roots gamma - 1
    num = [(g - 1, 1) for g in gammas]
    den = [(g, 1) for g in gammas]
    d = DrinfeldInput.from_roots((num, den), ([], []), ([], []))
    res = drinfeld_check(d, 2, 1)
    assert res.accept
    assert sorted(res.witnesses[1]) == sorted(gammas)


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=1, max_size=4))
def test_rational_roots_roundtrip(roots):
    assert sorted(rational_roots(poly_from_roots(roots))) == sorted(roots)


def test_rational_roots_irrational():
    with pytest.raises(NotFactorable):
        rational_roots([1, 0, -2])


@pytest.mark.parametrize("M,N,s", [(1, 1, 2), (2, 1, 3), (1, 2, 2)])
def test_tensor_weights_pass_drinfeld(M, N, s):
    ev = evaluation_rep(fundamental_rep(M, N))
    hw = highest_weight(tensor_eval([ev] * s))
    assert hw.kernel_dim == 1
    assert drinfeld_check(drinfeld_input_from(hw), M, N).accept
