"""W_p(M|N) brackets by soldering and by Dirac reduction, and the bar bases."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .graded import GradedDim, inverse, rref
from .sl2 import build_mjm, clebsch, j_symbol, structure_constants_J
from .superpoly import BracketTable, Poly, Symbol, bracket_gen, poisson_bracket, sym


def W(j, a, b, M, family="W") -> Symbol:
    return sym(family, j, a, b, M)


def w_generators(dim: GradedDim, p: int, family="W") -> list:
    n = dim.size
    return [W(j, a, b, dim.M, family) for j in range(p)
            for a in range(1, n + 1) for b in range(1, n + 1)]


def _Wp(j, a, b, dim, p) -> Poly:
    return Poly.gen(W(j, a, b, dim.M)) if 0 <= j < p else Poly()


# ---- soldering ---------------------------------------------------------------

@dataclass
class SolderState:
    dim: GradedDim
    p: int
    lam: dict  # (j, m, a, b) -> Poly, linear in lambda~
    delta_w: dict  # (j, a, b) -> Poly
    free: list  # lambda~ symbols

    @property
    def n_free(self) -> int:
        return len(self.free)


def _norm(p: int, k: int) -> Fraction:
    B = build_mjm(p)
    return (B[(k, -k)] @ B[(k, k)]).trace()


def _solder_sum(j, m, a, b, lam, dim, p, C) -> Poly:
    """sum_{k,r,l,e} (lam_kl^ae W_r^eb <k,l;r,r|j,m> - W_r^ae lam_kl^eb <r,r;k,l|j,m>)."""
    n = dim.size
    out = Poly()
    for r in range(p):
        l = m - r
        for k in range(abs(l), p):
            c1 = C(k, l, r, r, j, m)
            c2 = C(r, r, k, l, j, m)
            if not (c1 or c2):
                continue
            for e in range(1, n + 1):
                if c1:
                    out = out + (lam[(k, l, a, e)] * _Wp(r, e, b, dim, p)).scale(c1)
                if c2:
                    out = out - (_Wp(r, a, e, dim, p) * lam[(k, l, e, b)]).scale(c2)
    return out


def solve_lambda(M: int, N: int, p: int) -> SolderState:
    dim = GradedDim(M, N)
    C = clebsch(p)
    n = dim.size
    lam, free = {}, []
    for k in range(p):
        ck = _norm(p, k)
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                t = sym("lambda", k, a, b, M)
                free.append(t)
                lam[(k, -k, a, b)] = Poly.gen(t, Fraction(1) / ck)
    # weights in increasing order; lam at weight w+1 only needs weights <= w
    for w in range(-(p - 1), p - 1):
        for j in range(p):
            if not (-j <= w < j):
                continue
            for a in range(1, n + 1):
                for b in range(1, n + 1):
                    lam[(j, w + 1, a, b)] = _solder_sum(j, w, a, b, lam, dim, p, C)
    delta_w = {}
    for j in range(p):
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                delta_w[(j, a, b)] = _solder_sum(j, j, a, b, lam, dim, p, C)
    return SolderState(dim, p, lam, delta_w, free)


class ExtractionError(ValueError):
    pass


def hat_map(dim: GradedDim, p: int) -> dict:
    """W^{ab} -> (-1)^{[a]} W^{ab}; an involution, so it converts both ways."""
    return {g: Poly.gen(g, (-1) ** dim.parity(g.a)) for g in w_generators(dim, p)
            if dim.parity(g.a)}


def to_hat(table: BracketTable, dim: GradedDim, p: int) -> BracketTable:
    hm = hat_map(dim, p)
    out = BracketTable("W^")
    for (x, y), v in table.entries.items():
        s = (-1) ** (dim.parity(x.a) + dim.parity(y.a))
        out.entries[(x, y)] = v.subs(hm).scale(s)
    return out


def solder_brackets(state: SolderState, hat: bool = True) -> BracketTable:
    """Read {W_k^cd, W_j^ab} off delta W_j^ab as the (-1)^[d] lambda~_k^dc coefficient."""
    dim, p = state.dim, state.p
    gens = w_generators(dim, p)
    raw = {}
    for (j, a, b), dw in state.delta_w.items():
        try:
            parts = dw.leading_split("lambda")
        except ValueError as exc:
            raise ExtractionError(str(exc)) from exc
        target = W(j, a, b, dim.M)
        for g in gens:
            k, c, d = g.level, g.a, g.b
            t = sym("lambda", k, d, c, dim.M)
            val = parts.get(t, Poly()).scale((-1) ** dim.parity(d))
            raw[(g, target)] = val
    table = BracketTable("W")
    for (x, y), v in raw.items():
        if x <= y:
            table.entries[(x, y)] = v
    # the other ordering comes from a different delta W: it must agree
    for (x, y), v in raw.items():
        if y < x and table.get(x, y) != v:
            raise ExtractionError(f"antisymmetry fails for {{{x}, {y}}}")
    return to_hat(table, dim, p) if hat else table


# ---- closed forms for rows j = 0, 1 ------------------------------------------

def _sgn(*pars) -> int:
    return -1 if sum(pars) % 2 else 1


def pb_w0_formula(a, b, c, d, k, dim: GradedDim, p: int) -> Poly:
    """{W^_0^ab, W^_k^cd} = (1/p)(d^cb W^_k^ad - d^ad (-1)^{([a]+[b])([c]+[d])} W^_k^cb)."""
    P = dim.parity
    S = _sgn((P(a) + P(b)) * (P(c) + P(d)))
    out = Poly()
    if c == b:
        out = out + _Wp(k, a, d, dim, p)
    if a == d:
        out = out - _Wp(k, c, b, dim, p).scale(S)
    return out.scale(Fraction(1, p))


def pb_w1_formula(a, b, c, d, r, dim: GradedDim, p: int) -> Poly:
    """{W^_1^ab, W^_r^cd} transcribed term by term from the closed form."""
    P = dim.parity
    n = dim.size
    S = _sgn((P(a) + P(b)) * (P(c) + P(d)))
    S2 = _sgn(P(b) * (P(c) + P(d)) + P(c) * P(d))

    def w(j, x, y):
        return _Wp(j, x, y, dim, p)

    def chain2(j1, j2, x, y):
        # sum_e (-1)^[e] W_j1^xe W_j2^ey
        out = Poly()
        for e in range(1, n + 1):
            out = out + (w(j1, x, e) * w(j2, e, y)).scale(_sgn(P(e)))
        return out

    def chain3(j1, j2, j3, x, y):
        out = Poly()
        for e in range(1, n + 1):
            for f in range(1, n + 1):
                out = out + (w(j1, x, e) * w(j2, e, f) * w(j3, f, y)).scale(_sgn(P(e), P(f)))
        return out

    total = Poly()
    lin = Poly()
    if b == c:
        lin = lin + w(r + 1, a, d)
    if a == d:
        lin = lin - w(r + 1, c, b).scale(S)
    total = total + lin.scale(Fraction((r + 1) * (p * p - (r + 1) ** 2), 2 * (r + 1) + 1))

    for k in range(1, r + 1):
        t = Poly()
        if b == c:
            t = t + chain2(k, r - k, a, d)
        if a == d:
            t = t - chain2(r - k, k, c, b).scale(S)
        t = t + (w(r - k, a, d) * w(k, c, b) - w(k, a, d) * w(r - k, c, b)).scale(S2)
        total = total + t

    for k in range(0, r):
        t = Poly()
        if b == c:
            t = t + chain2(k, r - k, a, d)
        if a == d:
            t = t - chain2(r - k, k, c, b).scale(S)
        t = t + (w(k, a, d) * w(r - k, c, b) - w(r - k, a, d) * w(k, c, b)).scale(S2)
        total = total + t.scale(Fraction(r - k, 2 * k + 1))

    for m in range(1, r + 1):
        for k in range(0, m):
            t = Poly()
            if c == b:
                t = t + chain3(k, m - k - 1, r - m, a, d)
            if a == d:
                t = t - chain3(r - m, m - k - 1, k, c, b).scale(S)
            u = (w(r - m, a, d) * chain2(m - k - 1, k, c, b)
                 - chain2(k, m - k - 1, a, d) * w(r - m, c, b)
                 + w(m - k - 1, a, d) * chain2(r - m, k, c, b)
                 - chain2(k, r - m, a, d) * w(m - k - 1, c, b)
                 + w(k, a, d) * chain2(r - m, m - k - 1, c, b)
                 - chain2(m - k - 1, r - m, a, d) * w(k, c, b))
            t = t + u.scale(S2)
            total = total - t.scale(Fraction(1, m * (2 * k + 1)))

    return total.scale(Fraction(3, p * (p * p - 1)))


def closed_form_rows(table: BracketTable, dim: GradedDim, p: int) -> dict:
    """Mismatches of rows j=0 (and j=1 when p>1) against the closed forms."""
    bad = {}
    n = dim.size
    for a, b, c, d in product(range(1, n + 1), repeat=4):
        for k in range(p):
            x, y = W(0, a, b, dim.M), W(k, c, d, dim.M)
            r = table.get(x, y) - pb_w0_formula(a, b, c, d, k, dim, p)
            if r:
                bad[(x, y)] = r
            if p > 1:
                x = W(1, a, b, dim.M)
                r = table.get(x, y) - pb_w1_formula(a, b, c, d, k, dim, p)
                if r:
                    bad[(x, y)] = r
    return bad


# ---- Dirac reduction ---------------------------------------------------------

def coordinate_table(st) -> BracketTable:
    """Brackets of the coordinates J_beta of the current on the M_jm (x) E_ab basis.

    With X_alpha the basis, g = str(X_alpha X_beta) and [X_alpha, X_beta} = f X_gamma,
    requiring {str(lambda J), J} = [lambda, J] gives
    {J_delta, J_gamma} = sum_beta f_{delta*, beta}^gamma J_beta / g_{delta* delta},
    where delta* is the unique basis element pairing with delta.
    """
    C = clebsch(st.p)
    dim = st.dim
    gens = st.gens
    # f_{alpha beta}^gamma from the element table
    f = {}
    for alpha in gens:
        for beta in gens:
            for mono, c in st.table.get(alpha, beta).terms.items():
                f.setdefault((alpha, mono[0]), []).append((beta, c))
    out = BracketTable("Jc")
    for delta in gens:
        j, m, a, b = delta.level, delta.m, delta.a, delta.b
        star = j_symbol(j, -m, b, a, dim.M)
        g = Fraction((-1) ** (m + dim.parity(b))) * C.eta[j]  # str(X_star X_delta)
        for gamma in gens:
            if gamma < delta:
                continue
            terms = {}
            for beta, c in f.get((star, gamma), ()):
                terms[(beta,)] = terms.get((beta,), 0) + c / g
            out.entries[(delta, gamma)] = Poly(terms)
    return out


@dataclass
class DiracResult:
    table: BracketTable
    delta0_rank: int
    size: int
    nilpotency: int
    constraints: list = field(default_factory=list)


def _matmul(A, B):
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    out = [[Poly() for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for t in range(k):
            a = A[i][t]
            if not a:
                continue
            row = B[t]
            for j in range(m):
                if row[j]:
                    out[i][j] = out[i][j] + a * row[j]
    return out


def dirac_brackets(M: int, N: int, p: int, hat: bool = True, kappa: Fraction | None = None) -> DiracResult:
    """Dirac brackets of the highest-weight coordinates J_jj^ab = W_j^ab.

    Constraints put the current in the form eps_- + sum_j W_j M_jj: the
    coordinate of M_{1,-1} (x) E_aa is kappa = -1/2 since M_{1,-1} = -2 eps_-.
    """
    st = structure_constants_J(M, N, p)
    dim = st.dim
    ctab = coordinate_table(st)
    if kappa is None:
        B = build_mjm(p)
        kappa = Fraction(-1, 2) if p > 1 else Fraction(0)
        if p > 1:
            assert B[(1, -1)].scale(kappa) == B.sl2.eps_minus
    constraints = [g for g in st.gens if g.m < g.level]
    subst = {}
    for g in st.gens:
        if g.m < g.level:
            val = kappa if (g.level == 1 and g.m == -1 and g.a == g.b) else 0
            subst[g] = Poly.const(val)
        else:
            subst[g] = Poly.gen(W(g.level, g.a, g.b, dim.M))

    def br(x, y):
        return ctab.get(x, y).subs(subst)

    size = len(constraints)
    Delta = [[br(x, y) for y in constraints] for x in constraints]
    D0 = [[e.constant_term() for e in row] for row in Delta]
    rk = len(rref(D0, size)[1]) if size else 0
    if rk != size:
        raise ZeroDivisionError("constant part of the constraint matrix is singular")
    D0inv = inverse(D0) if size else []
    D0inv_p = [[Poly.const(v) for v in row] for row in D0inv]
    D1 = [[e - Poly.const(e.constant_term()) for e in row] for row in Delta]
    hatD = _matmul(D0inv_p, D1)
    # Delta^{-1} = sum_n (-hatD)^n D0^{-1}
    power = [[Poly.const(int(i == j)) for j in range(size)] for i in range(size)]
    acc = [row[:] for row in power]
    order = 0
    for step in range(1, size + 2):
        power = _matmul(power, [[-e for e in row] for row in hatD])
        if all(not e for row in power for e in row):
            order = step
            break
        acc = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(acc, power)]
    else:
        raise ArithmeticError("hat Delta is not nilpotent within the matrix size")
    Dinv = _matmul(acc, D0inv_p)

    hw = [g for g in st.gens if g.m == g.level]
    left = {x: [br(x, c) for c in constraints] for x in hw}
    right = {y: [br(c, y) for c in constraints] for y in hw}
    table = BracketTable("W")
    for x in hw:
        row = _matmul([left[x]], Dinv)[0] if size else []
        for y in hw:
            wx, wy = W(x.level, x.a, x.b, dim.M), W(y.level, y.a, y.b, dim.M)
            if wy < wx:
                continue
            val = br(x, y)
            for i, e in enumerate(row):
                if e and right[y][i]:
                    val = val - e * right[y][i]
            table.entries[(wx, wy)] = val
    if hat:
        table = to_hat(table, dim, p)
    return DiracResult(table, rk, size, order, constraints)


# ---- bar bases ---------------------------------------------------------------

def compositions(total: int, parts: int, cap: int):
    """Tuples of `parts` integers in [0, cap] summing to `total`."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(0, min(total, cap) + 1):
        for rest in compositions(total - first, parts - 1, cap):
            yield (first,) + rest


def chain(gens_poly, s, a, b, dim: GradedDim) -> Poly:
    """sum_i (-1)^{[i1]+..} X_{s1}^{a i1} X_{s2}^{i1 i2} ... X_{sn}^{i_{n-1} b}."""
    n = dim.size
    out = Poly()
    for mids in product(range(1, n + 1), repeat=len(s) - 1):
        idx = (a,) + mids + (b,)
        term = Poly.const(_sgn(*(dim.parity(i) for i in mids)))
        for t, lvl in enumerate(s):
            term = term * gens_poly(lvl, idx[t], idx[t + 1])
            if not term:
                break
        out = out + term
    return out


@dataclass
class BarBasis:
    sign: int
    dim: GradedDim
    p: int
    gens: dict  # (j, a, b) -> Poly in hatted W
    alpha: dict  # j -> {s tuple: Fraction}
    top: int = 0


class RecursionInconsistent(ArithmeticError):
    pass


def build_bar_basis(sign: int, table: BracketTable, dim: GradedDim, p: int, top: int | None = None) -> BarBasis:
    """Build +-Wbar_j for j <= top (default p) from the recursion in Wbar_1."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    top = p if top is None else top
    n = dim.size
    idx = list(product(range(1, n + 1), repeat=2))

    def w(j, x, y):
        return _Wp(j, x, y, dim, p)

    bars = {}
    alpha = {0: {(0,): Fraction(p)}}
    for a, b in idx:
        bars[(0, a, b)] = w(0, a, b).scale(p)
    if top >= 1:
        c1 = Fraction(sign * p * (p * p - 1), 6)
        c2 = Fraction(p * (p + sign), 2)
        alpha[1] = {(1,): c1, (0, 0): c2}
        for a, b in idx:
            bars[(1, a, b)] = w(1, a, b).scale(c1) + chain(w, (0, 0), a, b, dim).scale(c2)
    for j in range(1, top):
        bars_j, coeffs = _next_bar(j, bars, table, dim, p)
        bars.update(bars_j)
        alpha[j + 1] = coeffs
    return BarBasis(sign, dim, p, bars, alpha, top)


def _recursion_lhs(j, a, b, c, d, bars, table, dim):
    P = dim.parity
    lhs = poisson_bracket(bars[(1, a, b)], bars[(j, c, d)], table)
    tail = (bars[(0, c, b)] * bars[(j, a, d)] - bars[(j, c, b)] * bars[(0, a, d)])
    return lhs - tail.scale(_sgn(P(c) * (P(a) + P(b)) + P(a) * P(b)))


def _next_bar(j, bars, table, dim, p):
    """Solve for the coefficients of Wbar_{j+1} in the chain ansatz."""
    n = dim.size
    P = dim.parity
    target = j + 1
    shapes = []
    for parts in range(1, target + 2):
        for s in compositions(target + 1 - parts, parts, p - 1):
            shapes.append(s)

    def w(lv, x, y):
        return _Wp(lv, x, y, dim, p)

    chains = {s: {(a, b): chain(w, s, a, b, dim) for a in range(1, n + 1)
                  for b in range(1, n + 1)} for s in shapes}
    rows, rhs = [], []
    for a, b, c, d in product(range(1, n + 1), repeat=4):
        if not (c == b or a == d):
            lhs = _recursion_lhs(j, a, b, c, d, bars, table, dim)
            if lhs:
                raise RecursionInconsistent(f"no Wbar_{target} term can produce {lhs}")
            continue
        lhs = _recursion_lhs(j, a, b, c, d, bars, table, dim)
        S = _sgn((P(a) + P(b)) * (P(c) + P(d)))
        cols = []
        for s in shapes:
            v = Poly()
            if c == b:
                v = v + chains[s][(a, d)]
            if a == d:
                v = v - chains[s][(c, b)].scale(S)
            cols.append(v)
        monos = set(lhs.terms)
        for v in cols:
            monos |= set(v.terms)
        for mono in sorted(monos):
            rows.append([v.terms.get(mono, Fraction(0)) for v in cols])
            rhs.append(lhs.terms.get(mono, Fraction(0)))
    k = len(shapes)
    red, piv = rref([r + [t] for r, t in zip(rows, rhs)], k + 1)
    if k in piv:
        raise RecursionInconsistent(f"recursion for Wbar_{target} has no solution")
    sol = {s: Fraction(0) for s in shapes}
    for row, pc in zip(red, piv):
        sol[shapes[pc]] = row[k]
    # free columns must not change the polynomial (uniqueness of Wbar_{j+1})
    free = [c for c in range(k) if c not in piv]
    for fc in free:
        vec = {shapes[fc]: Fraction(1)}
        for row, pc in zip(red, piv):
            if row[fc]:
                vec[shapes[pc]] = -row[fc]
        for a, b in product(range(1, n + 1), repeat=2):
            acc = Poly()
            for s, c in vec.items():
                acc = acc + chains[s][(a, b)].scale(c)
            if acc:
                raise RecursionInconsistent(f"Wbar_{target} is not unique")
    out = {}
    for a, b in product(range(1, n + 1), repeat=2):
        acc = Poly()
        for s, c in sol.items():
            if c:
                acc = acc + chains[s][(a, b)].scale(c)
        out[(target, a, b)] = acc
    return out, {s: c for s, c in sol.items() if c}


def alpha_closed_forms(sign: int, p: int, j: int) -> dict:
    """Leading and last chain coefficients predicted in closed form."""
    from math import comb, factorial
    out = {(j,): Fraction(sign ** j * factorial(j) ** 2 * comb(p + j, 2 * j + 1))}
    last = comb(p, j + 1) if sign < 0 else comb(p + j, j + 1)
    zeros = (0,) * (j + 1)
    if zeros in out:
        # j = 0: both forms describe the same single coefficient
        if out[zeros] != last:
            out[zeros] = None
    else:
        out[zeros] = Fraction(last)
    return out


@dataclass
class ChangeReport:
    mismatches: dict

    @property
    def ok(self) -> bool:
        return not self.mismatches


def change_bar_basis(plus: BarBasis, minus: BarBasis, upto: int | None = None) -> ChangeReport:
    """Check +-Wbar_j = sum_n (-1)^{j+1+n} sum_s chain of -+Wbar, both directions."""
    dim, p = plus.dim, plus.p
    upto = min(plus.top, minus.top) if upto is None else upto
    n = dim.size
    bad = {}
    for tgt, src in ((plus, minus), (minus, plus)):
        def g(lv, x, y, src=src):
            return src.gens.get((lv, x, y), Poly())
        for j in range(upto + 1):
            for a, b in product(range(1, n + 1), repeat=2):
                acc = Poly()
                for parts in range(1, j + 2):
                    for s in compositions(j + 1 - parts, parts, j):
                        acc = acc + chain(g, s, a, b, dim).scale((-1) ** (j + 1 + parts))
                r = tgt.gens[(j, a, b)] - acc
                if r:
                    bad[(tgt.sign, j, a, b)] = r
    return ChangeReport(bad)


def trace_gen(bars: BarBasis, j: int) -> Poly:
    acc = Poly()
    for a in range(1, bars.dim.size + 1):
        acc = acc + bars.gens[(j, a, a)]
    return acc


@dataclass
class CentralityReport:
    w00_failures: list
    pair_values: dict  # (j, k) -> Poly
    noncentral: dict  # (j, k) -> list of generators with nonzero bracket
    nonzero_low: list  # (j, k) with j <= 1 and nonzero value

    @property
    def ok(self) -> bool:
        return not self.w00_failures and not self.noncentral and not self.nonzero_low


def centrality_report(table: BracketTable, minus: BarBasis) -> CentralityReport:
    dim, p = minus.dim, minus.p
    gens = w_generators(dim, p)
    w00 = Poly()
    for a in range(1, dim.size + 1):
        w00 = w00 + Poly.gen(W(0, a, a, dim.M))
    w00_bad = [g for g in gens if poisson_bracket(w00, Poly.gen(g), table)]
    values, noncentral, low = {}, {}, []
    traces = {j: trace_gen(minus, j) for j in range(p)}
    for j in range(p):
        for k in range(j, p):
            v = poisson_bracket(traces[j], traces[k], table)
            values[(j, k)] = v
            if v and j <= 1:
                low.append((j, k))
            bad = [g for g in gens if poisson_bracket(v, Poly.gen(g), table)]
            if bad:
                noncentral[(j, k)] = bad
    return CentralityReport(w00_bad, values, noncentral, low)
