"""Principal sl(2) in gl(p), the M_jm basis and gl(Mp|Np) in the J basis."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .graded import GradedDim, SuperMatrix, ThetaData, commutator, rank, supercommutator, supertrace
from .superpoly import BracketTable, Poly, Symbol, check_jacobi, sym


@dataclass(frozen=True)
class Sl2Triple:
    eps_plus: SuperMatrix
    eps_minus: SuperMatrix
    eps_zero: SuperMatrix


def build_principal_sl2(p: int) -> Sl2Triple:
    if p < 1:
        raise ValueError("p must be >= 1")
    em = SuperMatrix(p, {(i + 1, i): 1 for i in range(1, p)})
    e0 = SuperMatrix(p, {(i, i): Fraction(p + 1 - 2 * i, 2) for i in range(1, p + 1)})
    ep = SuperMatrix(p, {(i, i + 1): Fraction(i * (p - i), 2) for i in range(1, p)})
    t = Sl2Triple(ep, em, e0)
    if commutator(e0, ep) != ep or commutator(e0, em) != -em or commutator(ep, em) != e0:
        raise AssertionError("sl(2) relations fail")
    return t


@dataclass(frozen=True)
class MjmBasis:
    p: int
    sl2: Sl2Triple
    M: dict  # (j, m) -> SuperMatrix

    def labels(self):
        return [(j, m) for j in range(self.p) for m in range(-j, j + 1)]

    def __getitem__(self, jm) -> SuperMatrix:
        return self.M[jm]


@lru_cache(maxsize=None)
def build_mjm(p: int) -> MjmBasis:
    t = build_principal_sl2(p)
    two_ep = t.eps_plus.scale(2)
    Ms = {}
    for j in range(p):
        cur = two_ep.power(j)
        Ms[(j, j)] = cur
        for m in range(j, -j, -1):
            cur = commutator(t.eps_minus, cur)
            Ms[(j, m - 1)] = cur
    for (j, m), X in Ms.items():
        if commutator(t.eps_zero, X) != X.scale(m):
            raise AssertionError(f"[e0, M_{j}{m}] != m M")
        lower = Ms.get((j, m - 1), SuperMatrix.zero(p))
        if commutator(t.eps_minus, X) != lower:
            raise AssertionError(f"[e-, M_{j}{m}] != M_{j},{m - 1}")
        upper = Ms.get((j, m + 1), SuperMatrix.zero(p))
        if commutator(t.eps_plus, X) != upper.scale(Fraction(j * (j + 1) - m * (m + 1), 2)):
            raise AssertionError(f"[e+, M_{j}{m}] has wrong normalization")
    return MjmBasis(p, t, Ms)


def supertrace_closed_form(p: int, k: int) -> int:
    """(-1)^k (2k)! (k!)^2 binom(p+k, 2k+1), the value of tr(M_{k,-k} M_{kk})."""
    return (-1) ** k * factorial(2 * k) * factorial(k) ** 2 * comb(p + k, 2 * k + 1)


@dataclass(frozen=True)
class ClebschTable:
    p: int
    coeffs: dict  # (j,m,k,l,r,s) -> Fraction, nonzero entries only
    eta: dict  # r -> Fraction

    def __call__(self, j, m, k, l, r, s) -> Fraction:
        return self.coeffs.get((j, m, k, l, r, s), Fraction(0))

    def products(self, j, m, k, l):
        """Nonzero (r, s, coeff) in M_jm M_kl = sum <j,m;k,l|r,s> M_rs."""
        s = m + l
        out = []
        for r in range(abs(s), self.p):
            c = self.coeffs.get((j, m, k, l, r, s))
            if c:
                out.append((r, s, c))
        return out


@lru_cache(maxsize=None)
def clebsch(p: int) -> ClebschTable:
    B = build_mjm(p)
    eta = {}
    for r in range(p):
        eta[r] = (B[(r, 0)] @ B[(r, 0)]).trace()
        if not eta[r]:
            raise ZeroDivisionError(f"eta_{r} vanishes")
    coeffs = {}
    labels = B.labels()
    for (j, m) in labels:
        for (k, l) in labels:
            prod = B[(j, m)] @ B[(k, l)]
            for (r, s) in labels:
                v = (prod @ B[(r, -s)]).trace()
                if v:
                    coeffs[(j, m, k, l, r, s)] = Fraction((-1) ** s) * v / eta[r]
    return ClebschTable(p, coeffs, eta)


def verify_scalar_product(p: int) -> bool:
    """tr(M_jm M_kl) = delta_jk delta_{m+l,0} (-1)^m eta_j."""
    B, C = build_mjm(p), clebsch(p)
    for (j, m) in B.labels():
        for (k, l) in B.labels():
            want = (-1) ** m * C.eta[j] if (j == k and m + l == 0) else 0
            if (B[(j, m)] @ B[(k, l)]).trace() != want:
                return False
    return True


def verify_product_law(p: int) -> list:
    """Pairs (j,m,k,l) where M_jm M_kl differs from its Clebsch expansion."""
    B, C = build_mjm(p), clebsch(p)
    bad = []
    for (j, m) in B.labels():
        for (k, l) in B.labels():
            acc = SuperMatrix.zero(p)
            for r, s, c in C.products(j, m, k, l):
                acc = acc + B[(r, s)].scale(c)
            if acc != B[(j, m)] @ B[(k, l)]:
                bad.append((j, m, k, l))
    return bad


def verify_swap_symmetry(p: int) -> list:
    """Entries violating <j,m;t,q|r,s> = (-1)^{j+t+r} <t,q;j,m|r,s>."""
    C = clebsch(p)
    labels = build_mjm(p).labels()
    bad = []
    for (j, m) in labels:
        for (t, q) in labels:
            for (r, s) in labels:
                if C(j, m, t, q, r, s) != (-1) ** (j + t + r) * C(t, q, j, m, r, s):
                    bad.append((j, m, t, q, r, s))
    return bad


def verify_supertrace_closed_form(p: int) -> list:
    B = build_mjm(p)
    return [k for k in range(p)
            if (B[(k, -k)] @ B[(k, k)]).trace() != supertrace_closed_form(p, k)]


# ---- gl(Mp|Np) in the J basis ------------------------------------------------

def j_symbol(j, m, a, b, M) -> Symbol:
    return sym("J", j, a, b, M, m)


@dataclass
class JBasisStructure:
    dim: GradedDim
    p: int
    table: BracketTable
    gens: list = field(default_factory=list)

    def matrix(self, s: Symbol) -> SuperMatrix:
        """M_jm (x) E_ab in the fundamental of gl(Mp|Np), basis index (i, a) -> (i-1)(M+N)+a."""
        return embed(build_mjm(self.p)[(s.level, s.m)], s.a, s.b, self.dim)


def embed(Mjm: SuperMatrix, a: int, b: int, dim: GradedDim) -> SuperMatrix:
    n = dim.size
    par = tuple(x for _ in range(Mjm.size) for x in dim.parities)
    return SuperMatrix(par, {((i - 1) * n + a, (k - 1) * n + b): v
                             for (i, k), v in Mjm.entries.items()})


def decompose(X: SuperMatrix, dim: GradedDim, p: int) -> Poly:
    """Coordinates of a gl(Mp|Np) matrix on the M_jm (x) E_ab basis, as a linear Poly in J."""
    B, C = build_mjm(p), clebsch(p)
    n = dim.size
    blocks = {}
    for (r, c), v in X.entries.items():
        i, a = divmod(r - 1, n)
        k, b = divmod(c - 1, n)
        blocks.setdefault((a + 1, b + 1), {})[(i + 1, k + 1)] = v
    out = {}
    for (a, b), ent in blocks.items():
        blk = SuperMatrix(p, ent)
        for (j, m) in B.labels():
            v = (blk @ B[(j, -m)]).trace()
            if v:
                out[(j_symbol(j, m, a, b, dim.M),)] = Fraction((-1) ** m) * v / C.eta[j]
    return Poly(out)


def structure_constants_J(M: int, N: int, p: int, verify: bool = True) -> JBasisStructure:
    """Brackets [M^{ab}_{jm}, M^{cd}_{ln}} of gl(Mp|Np), written on J symbols."""
    dim = GradedDim(M, N)
    C = clebsch(p)
    n = dim.size
    gens = [j_symbol(j, m, a, b, M) for j in range(p) for m in range(-j, j + 1)
            for a in range(1, n + 1) for b in range(1, n + 1)]
    table = BracketTable("J")
    for x in gens:
        for y in gens:
            if y < x:
                continue
            table.set(x, y, _j_bracket(x, y, C, dim))
    st = JBasisStructure(dim, p, table, sorted(gens))
    if verify:
        bad = verify_J_against_matrices(st)
        if bad:
            raise AssertionError(f"J-basis closure fails on {bad[:3]}")
    return st


def _j_bracket(x: Symbol, y: Symbol, C: ClebschTable, dim: GradedDim) -> Poly:
    j, m, a, b = x.level, x.m, x.a, x.b
    l, n, c, d = y.level, y.m, y.a, y.b
    sign = (-1) ** (x.par * y.par)
    out = {}
    if b == c:
        for r, s, v in C.products(j, m, l, n):
            key = (j_symbol(r, s, a, d, dim.M),)
            out[key] = out.get(key, 0) + v
    if a == d:
        for r, s, v in C.products(l, n, j, m):
            key = (j_symbol(r, s, c, b, dim.M),)
            out[key] = out.get(key, 0) - sign * v
    return Poly(out)


def verify_J_against_matrices(st: JBasisStructure) -> list:
    bad = []
    mats = {g: st.matrix(g) for g in st.gens}
    for (x, y), val in st.table.entries.items():
        if decompose(supercommutator(mats[x], mats[y]), st.dim, st.p) != val:
            bad.append((x, y))
    return bad


def verify_J_pairing(st: JBasisStructure) -> list:
    """str(M^{ab}_{jm} M^{cd}_{ln}) = (-1)^{[a]} d^{ad} d^{cb} (-1)^m d_jl d_{m+n,0} eta_j."""
    C = clebsch(st.p)
    bad = []
    mats = {g: st.matrix(g) for g in st.gens}
    for x in st.gens:
        for y in st.gens:
            want = 0
            if x.a == y.b and y.a == x.b and x.level == y.level and x.m + y.m == 0:
                want = (-1) ** (st.dim.parity(x.a) + x.m) * C.eta[x.level]
            if supertrace(mats[x] @ mats[y]) != want:
                bad.append((x, y))
    return bad


# ---- tau and folding ------------------------------------------------------------

def tau_J(s: Symbol, th: ThetaData) -> Poly:
    """tau(J^{ab}_{jm}) = (-1)^{j+1} (-1)^{[a]([b]+1)} theta_a theta_b J^{b'a'}_{jm}."""
    sign = (-1) ** (s.level + 1) * th.sigma(s.a, s.b)
    return Poly.gen(j_symbol(s.level, s.m, th.bar(s.b), th.bar(s.a), th.M), sign)


@dataclass
class TauReport:
    bracket_failures: list
    involution_failures: list

    @property
    def ok(self) -> bool:
        return not self.bracket_failures and not self.involution_failures


def tau_on_J(st: JBasisStructure, th: ThetaData) -> TauReport:
    if st.dim != th.dim:
        raise ValueError("tau needs gl(M|2n) with matching dimensions")
    from .superpoly import poisson_bracket
    tmap = {g: tau_J(g, th) for g in st.gens}
    inv_bad = [g for g in st.gens if tmap[g].subs(tmap) != Poly.gen(g)]
    br_bad = []
    for (x, y), val in st.table.entries.items():
        lhs = val.subs(tmap)
        rhs = poisson_bracket(tmap[x], tmap[y], st.table)
        if lhs != rhs:
            br_bad.append((x, y))
    return TauReport(br_bad, inv_bad)


def osp_dimension(M: int, n: int, p: int) -> int:
    q, r = M * p, n * p
    return q * (q - 1) // 2 + r * (2 * r + 1) + 2 * q * r


@dataclass
class FoldReport:
    fixed_dimension: int
    expected_dimension: int
    closure_failures: list
    symmetry_failures: list
    formula_failures: list

    @property
    def ok(self) -> bool:
        return (self.fixed_dimension == self.expected_dimension and not self.closure_failures
                and not self.symmetry_failures and not self.formula_failures)


def fold_K(s: Symbol, th: ThetaData) -> Poly:
    return Poly.gen(s) + tau_J(s, th)


def fold_fixed_subalgebra(st: JBasisStructure, th: ThetaData) -> FoldReport:
    from .superpoly import poisson_bracket
    gens = st.gens
    index = {g: i for i, g in enumerate(gens)}
    # matrix of (I - tau) on the span of J's
    rows = []
    for g in gens:
        row = [Fraction(0)] * len(gens)
        row[index[g]] += 1
        for mono, c in tau_J(g, th).terms.items():
            row[index[mono[0]]] -= c
        rows.append(row)
    fixed = len(gens) - rank(rows, len(gens))

    Ks = {g: fold_K(g, th) for g in gens}
    tmap = {g: tau_J(g, th) for g in gens}
    sym_bad = [g for g in gens if Ks[g].subs(tmap) != Ks[g]]
    closure_bad, formula_bad = [], []
    C = clebsch(st.p)
    for i, x in enumerate(gens):
        for y in gens[i:]:
            val = poisson_bracket(Ks[x], Ks[y], st.table)
            if val.subs(tmap) != val:
                closure_bad.append((x, y))
            if val != _k_bracket_formula(x, y, C, th):
                formula_bad.append((x, y))
    return FoldReport(fixed, osp_dimension(th.M, th.n, st.p), closure_bad, sym_bad, formula_bad)


def _k_bracket_formula(x: Symbol, y: Symbol, C: ClebschTable, th: ThetaData) -> Poly:
    """Displayed {K,K}: sum <j,m;k,l|r,s>(d^{bc}K^{ad} - (-1)^j s_ab d^{a'c} K^{b'd}
    - (-1)^{j+k+r} sgn [d^{ad} K^{cb} - (-1)^j s_ab d^{b'd} K^{ca'}])."""
    j, m, a, b = x.level, x.m, x.a, x.b
    k, l, c, d = y.level, y.m, y.a, y.b
    sgn = (-1) ** (x.par * y.par)
    sab = th.sigma(a, b)
    ab, bb = th.bar(a), th.bar(b)
    out = Poly()
    for r, s, v in C.products(j, m, k, l):
        def K(e, f):
            return fold_K(j_symbol(r, s, e, f, th.M), th)
        term = Poly()
        if b == c:
            term = term + K(a, d)
        if ab == c:
            term = term - K(bb, d).scale((-1) ** j * sab)
        inner = Poly()
        if a == d:
            inner = inner + K(c, b)
        if bb == d:
            inner = inner - K(c, ab).scale((-1) ** j * sab)
        term = term - inner.scale((-1) ** (j + k + r) * sgn)
        out = out + term.scale(v)
    return out
