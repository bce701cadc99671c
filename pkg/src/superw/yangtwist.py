"""Classical truncated super-Yangians, twisted super-Yangians and folding."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .graded import GradedDim, ThetaData
from .superpoly import BracketTable, Poly, Symbol, mono_parity, poisson_bracket, sym


def T(n, a, b, M, family="T") -> Symbol:
    return sym(family, n, a, b, M)


def _sgn(*pars) -> int:
    return -1 if sum(pars) % 2 else 1


def _tgen(n, a, b, dim, top, family="T") -> Poly:
    if n == 0:
        return Poly.const(int(a == b))
    if top is not None and n > top:
        return Poly()
    return Poly.gen(T(n, a, b, dim.M, family))


def yangian_rhs(a, b, c, d, m, n, dim: GradedDim, top: int | None, family="T") -> Poly:
    """Right side of the classical RTT bracket {T^ab_(m), T^cd_(n)}."""
    P = dim.parity
    S = _sgn((P(a) + P(b)) * (P(c) + P(d)))
    S2 = _sgn(P(c) * (P(a) + P(b)) + P(a) * P(b))
    k = m + n - 1
    out = Poly()
    if c == b:
        out = out + _tgen(k, a, d, dim, top, family)
    if a == d:
        out = out - _tgen(k, c, b, dim, top, family).scale(S)
    for r in range(1, min(m, n)):
        out = out + (_tgen(r, c, b, dim, top, family) * _tgen(k - r, a, d, dim, top, family)
                     - _tgen(k - r, c, b, dim, top, family) * _tgen(r, a, d, dim, top, family)).scale(S2)
    return out


@dataclass
class YangianTable:
    dim: GradedDim
    p: int | None
    table: BracketTable

    def gens(self, upto: int | None = None) -> list:
        top = self.p if upto is None else upto
        n = self.dim.size
        return [T(k, a, b, self.dim.M) for k in range(1, top + 1)
                for a in range(1, n + 1) for b in range(1, n + 1)]


def yangian_pb_table(M: int, N: int, p: int | None) -> YangianTable:
    """Truncated (T_(n) = 0 for n > p) table; p=None gives the lazy untruncated one."""
    dim = GradedDim(M, N)

    def rule(x, y):
        return yangian_rhs(x.a, x.b, y.a, y.b, x.level, y.level, dim, p)

    table = BracketTable("T", rule=rule)
    yt = YangianTable(dim, p, table)
    if p is not None:
        gens = yt.gens()
        for i, x in enumerate(gens):
            for y in gens[i:]:
                table.get(x, y)
    return yt


@dataclass
class IdealReport:
    checked: int = 0
    offenders: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.offenders


def verify_poisson_ideal(M: int, N: int, p: int) -> IdealReport:
    """Every bracket with a generator of level > p lies in the ideal of levels > p."""
    yt = yangian_pb_table(M, N, None)
    rep = IdealReport()
    low, high = yt.gens(2 * p), yt.gens(2 * p)
    for x in low:
        for y in high:
            if y.level <= p:
                continue
            rep.checked += 1
            val = yt.table.get(x, y)
            for mono in val.terms:
                if not any(s.level > p for s in mono):
                    rep.offenders.append((x, y, mono))
    return rep


# ---- isomorphism with the W-algebra -----------------------------------------

@dataclass
class IsoReport:
    checked: int
    residuals: dict
    truncation_ok: bool

    @property
    def ok(self) -> bool:
        return not self.residuals and self.truncation_ok


def iso_check(M: int, N: int, p: int, wtable: BracketTable, minus) -> IsoReport:
    """Compare brackets of T_(n) := -Wbar_{n-1}, computed in the W table, with the Yangian."""
    dim = GradedDim(M, N)
    yt = yangian_pb_table(M, N, p)
    n = dim.size
    image = {T(k, a, b, M): minus.gens[(k - 1, a, b)] for k in range(1, p + 1)
             for a in range(1, n + 1) for b in range(1, n + 1)}
    gens = yt.gens()
    residuals = {}
    for i, x in enumerate(gens):
        for y in gens[i:]:
            lhs = poisson_bracket(image[x], image[y], wtable)
            rhs = yt.table.get(x, y).subs(image)
            r = lhs - rhs
            if r:
                residuals[(x, y)] = r
    trunc = all(not minus.gens[(j, a, b)] for j in range(p, minus.top + 1)
                for a in range(1, n + 1) for b in range(1, n + 1))
    return IsoReport(len(gens) * (len(gens) + 1) // 2, residuals, trunc)


# ---- two-factor matrix algebra ----------------------------------------------

class TensorPoly:
    """sum of c * (E_ij (x) E_kl), coefficients written to the left of the units."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: GradedDim, terms=None):
        self.dim = dim
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    def _upar(self, key):
        P = self.dim.parity
        return (P(key[0]) + P(key[1]) + P(key[2]) + P(key[3])) % 2

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Poly()) + v
        return TensorPoly(self.dim, out)

    def __neg__(self):
        return TensorPoly(self.dim, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return TensorPoly(self.dim, {k: v.scale(c) for k, v in self.terms.items()})

    def __matmul__(self, other):
        P = self.dim.parity
        out = {}
        by_row = {}
        for k2, c2 in other.terms.items():
            by_row.setdefault((k2[0], k2[2]), []).append((k2, c2))
        for k1, c1 in self.terms.items():
            i, j, k, l = k1
            upar = self._upar(k1)
            for k2, c2 in by_row.get((j, l), ()):
                _, n, _, q = k2
                s = _sgn((P(k) + P(l)) * (P(k2[0]) + P(n)))
                # move c2 left past the units of the first factor
                moved = Poly()
                for mono, v in c2.terms.items():
                    moved.terms[mono] = v * (-1 if upar and mono_parity(mono) else 1)
                val = (c1 * Poly(moved.terms)).scale(s)
                key = (i, n, k, q)
                out[key] = out.get(key, Poly()) + val
        return TensorPoly(self.dim, out)

    def component(self, i, j, k, l) -> Poly:
        return self.terms.get((i, j, k, l), Poly())

    def __eq__(self, other):
        return (self - other).is_zero()

    def is_zero(self) -> bool:
        return not any(self.terms.values())


@dataclass(frozen=True)
class Layout:
    """How a generator matrix is assembled: X = sum sign(a,b) x^{ab} E_{ab} (or E_{ba})."""

    flip: bool = False
    row_sign: bool = False
    col_sign: bool = False
    cross_sign: bool = False
    p_row: bool = False  # P carries (-1)^{[i]}
    p_col: bool = True  # P carries (-1)^{[j]}
    lhs_x: bool = False  # extra (-1)^{|x|} in {xA, yB}
    lhs_y: bool = False  # extra (-1)^{|y|} in {xA, yB}

    def place(self, a, b, dim):
        s = 1
        if self.row_sign and dim.parity(a):
            s = -s
        if self.col_sign and dim.parity(b):
            s = -s
        if self.cross_sign and dim.parity(a) and dim.parity(b):
            s = -s
        return ((b, a) if self.flip else (a, b)), s


DEFAULT_LAYOUT = Layout()


def embed(mat: dict, slot: int, dim: GradedDim, layout: Layout = DEFAULT_LAYOUT,
          constant: bool = False) -> TensorPoly:
    """mat: (a,b) -> Poly component; slot 1 gives X (x) 1, slot 2 gives 1 (x) X.

    `constant` marks the level-0 identity, which is placed without layout signs.
    """
    n = dim.size
    out = {}
    for (a, b), c in mat.items():
        if not c:
            continue
        if constant:
            (i, j), s = (a, b), 1
        else:
            (i, j), s = layout.place(a, b, dim)
        for e in range(1, n + 1):
            key = (i, j, e, e) if slot == 1 else (e, e, i, j)
            out[key] = out.get(key, Poly()) + c.scale(s)
    return TensorPoly(dim, out)


def constant_P(dim: GradedDim, layout: Layout = DEFAULT_LAYOUT) -> TensorPoly:
    n = dim.size
    return TensorPoly(dim, {(i, j, j, i): Poly.const(_sgn(layout.p_row * dim.parity(i),
                                                          layout.p_col * dim.parity(j)))
                            for i in range(1, n + 1) for j in range(1, n + 1)})


def constant_Q(th: ThetaData) -> TensorPoly:
    """Q = P^{t_1}: transposition E_ij -> sigma_ij E_{bar j bar i} on the first factor."""
    dim = th.dim
    n = dim.size
    out = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            key = (th.bar(j), th.bar(i), j, i)
            out[key] = out.get(key, Poly()) + Poly.const(_sgn(dim.parity(j)) * th.sigma(i, j))
    return TensorPoly(dim, out)


def bracket_12(X: dict, Y: dict, table: BracketTable, dim: GradedDim, layout: Layout = DEFAULT_LAYOUT) -> TensorPoly:
    """{X_1, Y_2} for component dicts of polynomials, by Leibniz in `table`.

    With A = E (x) 1 and B = 1 (x) E constant units, {xA, yB} = (-1)^{|A||y|} {x,y} AB.
    """
    P = dim.parity
    out = {}
    for (a, b), x in X.items():
        (i, j), s1 = layout.place(a, b, dim)
        for (c, d), y in Y.items():
            (k, l), s2 = layout.place(c, d, dim)
            v = poisson_bracket(x, y, table)
            if not v:
                continue
            s = _sgn((P(i) + P(j)) * (P(c) + P(d)),
                     layout.lhs_x * (P(a) + P(b)), layout.lhs_y * (P(c) + P(d))) * s1 * s2
            key = (i, j, k, l)
            out[key] = out.get(key, Poly()) + v.scale(s)
    return TensorPoly(dim, out)


# ---- Yangian in matrix form (calibration) -----------------------------------

def t_matrix(level, dim: GradedDim, top, family="T") -> dict:
    n = dim.size
    return {(a, b): _tgen(level, a, b, dim, top, family) for a in range(1, n + 1)
            for b in range(1, n + 1)}


def yangian_matrix_rhs(q, r, mats: dict, dim: GradedDim, layout: Layout, rsign: int) -> TensorPoly:
    """rsign * sum_{s<min(q,r)} (P X_s1 X_t2 - X_t2 X_s1 P), t = q+r-1-s."""
    Pm = constant_P(dim, layout)
    out = TensorPoly(dim)
    for s in range(min(q, r)):
        t = q + r - 1 - s
        A = embed(mats[s], 1, dim, layout, constant=(s == 0))
        B = embed(mats[t], 2, dim, layout, constant=(t == 0))
        out = out + (Pm @ A @ B) - (B @ A @ Pm)
    return out.scale(rsign)


def calibrate_layout(M: int = 1, N: int = 1, p: int = 2):
    """Find the matrix conventions that make the matrix form reproduce the component table."""
    dim = GradedDim(M, N)
    yt = yangian_pb_table(M, N, p)
    mats = {k: t_matrix(k, dim, p) for k in range(0, 2 * p + 1)}
    found = []
    for *flags, rsign in product(*([(False, True)] * 8), (1, -1)):
        lay = Layout(*flags)
        ok = True
        for q in range(1, p + 1):
            for r in range(1, p + 1):
                lhs = bracket_12(mats[q], mats[r], yt.table, dim, lay)
                if not (lhs == yangian_matrix_rhs(q, r, mats, dim, lay, rsign)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.append((lay, rsign))
    return found


CALIBRATED = (Layout(cross_sign=True), 1)


# ---- twisted super-Yangian ---------------------------------------------------

@dataclass
class SGenerators:
    th: ThetaData
    p: int
    comps: dict  # (a, b, m) -> Poly in T

    @property
    def dim(self) -> GradedDim:
        return self.th.dim

    def matrix(self, m: int) -> dict:
        n = self.dim.size
        return {(a, b): self.comps.get((a, b, m), Poly()) for a in range(1, n + 1)
                for b in range(1, n + 1)}

    @property
    def top(self) -> int:
        return 2 * self.p


def build_S_generators(M: int, N: int, p: int, literal: bool = False) -> SGenerators:
    """Components of S(u) = T(u) tau[T(u)] with tau(T^{cb}(u)) = sigma_{cb} T^{bar b bar c}(-u).

    S^{ab}_(m) = sum_{c,q} (-1)^q sigma_{cb} k_c T^{ac}_(m-q) T^{bar b bar c}_(q), where the
    graded matrix product gives k_c = (-1)^{[c]} when both factors are generators and
    k_c = 1 when one factor is the level-0 identity.  `literal=True` drops k_c.
    """
    dim = GradedDim(M, N)
    th = ThetaData.from_dim(dim)
    n = dim.size
    comps = {}
    for m in range(0, 2 * p + 1):
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                acc = Poly()
                for c in range(1, n + 1):
                    sg = th.sigma(c, b)
                    for q in range(0, m + 1):
                        left = _tgen(m - q, a, c, dim, p)
                        right = _tgen(q, th.bar(b), th.bar(c), dim, p)
                        if not (left and right):
                            continue
                        k = -1 if (not literal and 0 < q < m and dim.parity(c)) else 1
                        acc = acc + (left * right).scale(sg * k * (-1) ** q)
                comps[(a, b, m)] = acc
    return SGenerators(th, p, comps)


@dataclass
class SymmetryReport:
    checked: int
    failures: dict

    @property
    def ok(self) -> bool:
        return not self.failures


def check_symmetry(comps: dict, th: ThetaData, levels) -> SymmetryReport:
    """sigma_{cd} X^{bar d bar c}_(m) = (-1)^m X^{cd}_(m), i.e. X^t(u) = X(-u)."""
    n = th.dim.size
    bad, count = {}, 0
    for m in levels:
        for c in range(1, n + 1):
            for d in range(1, n + 1):
                count += 1
                r = (comps.get((th.bar(d), th.bar(c), m), Poly()).scale(th.sigma(c, d))
                     - comps.get((c, d, m), Poly()).scale((-1) ** m))
                if r:
                    bad[(c, d, m)] = r
    return SymmetryReport(count, bad)


def twisted_matrix_rhs(q, r, mats: dict, th: ThetaData, layout: Layout, rsign: int, qsign: int,
                       top: int | None = None) -> TensorPoly:
    """Mode expansion of r(u-v) S1 S2 - S2 S1 r(u-v) + S2 r'(u+v) S1 - S1 r'(u+v) S2."""
    dim = th.dim
    Pm = constant_P(dim, layout)
    Qm = constant_Q(th)
    zero = {}

    def E(level, slot):
        if top is not None and level > top:
            return embed(zero, slot, dim, layout)
        return embed(mats[level], slot, dim, layout, constant=(level == 0))

    out = TensorPoly(dim)
    for s in range(q):
        t = q + r - 1 - s
        A1, B2 = E(s, 1), E(t, 2)
        part = (Pm @ A1 @ B2 - B2 @ A1 @ Pm).scale(rsign)
        qpart = (B2 @ Qm @ A1 - A1 @ Qm @ B2).scale(qsign * (-1) ** (q - 1 - s))
        out = out + part + qpart
    return out


def calibrate_twist(sg: SGenerators, yt: YangianTable, layouts=None, levels=None):
    dim = sg.dim
    mats = {m: sg.matrix(m) for m in range(0, sg.top + 1)}
    levels = levels or range(1, sg.p + 1)
    found = []
    for lay, rsign in (layouts or [CALIBRATED]):
        for qsign in (1, -1):
            ok = True
            for q in levels:
                for r in levels:
                    lhs = bracket_12(mats[q], mats[r], yt.table, dim, lay)
                    if not (lhs == twisted_matrix_rhs(q, r, mats, sg.th, lay, rsign, qsign)):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                found.append((lay, rsign, qsign))
    return found


def component_bracket(tp: TensorPoly, a, b, c, d, dim: GradedDim, layout: Layout = DEFAULT_LAYOUT) -> Poly:
    """Invert bracket_12: read {x^{ab}, y^{cd}} off the tensor component."""
    P = dim.parity
    (i, j), s1 = layout.place(a, b, dim)
    (k, l), s2 = layout.place(c, d, dim)
    s = _sgn((P(i) + P(j)) * (P(c) + P(d)),
             layout.lhs_x * (P(a) + P(b)), layout.lhs_y * (P(c) + P(d))) * s1 * s2
    return tp.component(i, j, k, l).scale(s)


@dataclass
class TwistReport:
    symmetry: SymmetryReport
    checked: int
    residuals: dict

    @property
    def ok(self) -> bool:
        return self.symmetry.ok and not self.residuals


def twisted_pb_check(sg: SGenerators, yt: YangianTable, levels=None) -> TwistReport:
    """S^t(u) = S(-u) and the mode form of the classical reflection bracket, from the T table."""
    lay, rsign = CALIBRATED
    top = sg.top
    levels = list(levels or range(1, sg.p + 1))
    mats = {m: sg.matrix(m) for m in range(0, top + 1)}
    sym_rep = check_symmetry(sg.comps, sg.th, range(0, top + 1))
    residuals, count = {}, 0
    for q in levels:
        for r in levels:
            count += 1
            lhs = bracket_12(mats[q], mats[r], yt.table, sg.dim, lay)
            rhs = twisted_matrix_rhs(q, r, mats, sg.th, lay, rsign, 1, top=top)
            d = lhs - rhs
            if not d.is_zero():
                residuals[(q, r)] = {k: v for k, v in d.terms.items() if v}
    return TwistReport(sym_rep, count, residuals)


# ---- representatives under X^t(u) = X(-u) -----------------------------------

def partner(c, d, s, th: ThetaData):
    """X^{cd}_(s) = f X^{rep}_(s): returns (rep, f) with f in {0, 1, -1}."""
    pc = (th.bar(d), th.bar(c))
    f = (-1) ** s * th.sigma(c, d)
    if pc == (c, d):
        return (c, d), (1 if f == 1 else 0)
    if (c, d) < pc:
        return (c, d), 1
    # X^{cd} = (-1)^s sigma_{cd} X^{bar d bar c}
    return pc, f


def rep_symbol(family, s, c, d, th: ThetaData, top: int):
    """Poly for X^{cd}_(s) in terms of representative generators (X_(0) = identity)."""
    if s == 0:
        return Poly.const(int(c == d))
    if s > top:
        return Poly()
    (a, b), f = partner(c, d, s, th)
    if f == 0:
        return Poly()
    return Poly.gen(sym(family, s, a, b, th.M), f)


def rep_generators(family, th: ThetaData, top: int) -> list:
    n = th.dim.size
    out = []
    for s in range(1, top + 1):
        for c in range(1, n + 1):
            for d in range(1, n + 1):
                (a, b), f = partner(c, d, s, th)
                if f and (a, b) == (c, d):
                    out.append(sym(family, s, c, d, th.M))
    return out


def k_component_count(M: int, n: int, p: int) -> int:
    """Representatives of K_(1..p): odd levels give osp(M|2n), even levels its complement."""
    gl = (M + 2 * n) ** 2
    osp = M * (M - 1) // 2 + n * (2 * n + 1) + 2 * M * n
    return sum(osp if s % 2 else gl - osp for s in range(1, p + 1))


def _rep_matrix(family, s, th, top):
    n = th.dim.size
    return {(a, b): rep_symbol(family, s, a, b, th, top) for a in range(1, n + 1)
            for b in range(1, n + 1)}


def twisted_table(M: int, N: int, p: int, family="S") -> BracketTable:
    """Truncated (X_(m) = 0 for m > p) classical twisted table on representatives."""
    dim = GradedDim(M, N)
    th = ThetaData.from_dim(dim)
    lay, rsign = CALIBRATED
    mats = {m: _rep_matrix(family, m, th, p) for m in range(0, 2 * p + 1)}
    gens = rep_generators(family, th, p)
    table = BracketTable(family)
    for q in range(1, p + 1):
        for r in range(q, p + 1):
            rhs = twisted_matrix_rhs(q, r, mats, th, lay, rsign, 1, top=p)
            for x in gens:
                if x.level != q:
                    continue
                for y in gens:
                    if y.level != r or (q == r and y < x):
                        continue
                    table.set(x, y, component_bracket(rhs, x.a, x.b, y.a, y.b, dim, lay))
    return table


@dataclass
class FoldResult:
    table: BracketTable  # {K, K} on representatives
    count: int
    expected_count: int
    phi_rank: list  # per level: number of independent constraint components
    formula_residuals: dict  # 2{K_q1, K_r2} vs the displayed folded bracket
    twisted_residuals: dict  # 2^{q+r}{K,K} vs the truncated twisted table

    @property
    def ok(self) -> bool:
        return (self.count == self.expected_count and not self.formula_residuals
                and not self.twisted_residuals)


def fold_and_compare(M: int, N: int, p: int) -> FoldResult:
    dim = GradedDim(M, N)
    th = ThetaData.from_dim(dim)
    yt = yangian_pb_table(M, N, p)
    lay, rsign = CALIBRATED
    n = dim.size
    # K and phi as polynomials in T
    Kt, phi_rank = {}, []
    for s in range(0, p + 1):
        rank = 0
        seen = set()
        for c in range(1, n + 1):
            for d in range(1, n + 1):
                t1 = _tgen(s, c, d, dim, p)
                t2 = _tgen(s, th.bar(d), th.bar(c), dim, p).scale((-1) ** s * th.sigma(c, d))
                Kt[(c, d, s)] = (t1 + t2).scale(Fraction(1, 2)) if s else Poly.const(int(c == d))
                if s and (t1 - t2):
                    key = frozenset([(c, d), (th.bar(d), th.bar(c))])
                    if key not in seen:
                        seen.add(key)
                        rank += 1
        if s:
            phi_rank.append(rank)
    # quotient map T -> K representatives
    quot = {}
    for s in range(1, p + 1):
        for c in range(1, n + 1):
            for d in range(1, n + 1):
                quot[T(s, c, d, M)] = rep_symbol("K", s, c, d, th, p)
    gens = rep_generators("K", th, p)
    table = BracketTable("K")
    for i, x in enumerate(gens):
        for y in gens[i:]:
            v = poisson_bracket(Kt[(x.a, x.b, x.level)], Kt[(y.a, y.b, y.level)], yt.table)
            table.set(x, y, v.subs(quot))
    # displayed folded formula in matrix form
    kmats = {m: _rep_matrix("K", m, th, p) for m in range(0, 2 * p + 1)}
    tmats = {m: {(a, b): Kt[(a, b, m)] for a in range(1, n + 1) for b in range(1, n + 1)}
             for m in range(0, p + 1)}
    formula_res = {}
    for q in range(1, p + 1):
        for r in range(1, p + 1):
            lhs = bracket_12(tmats[q], tmats[r], yt.table, dim, lay).scale(2)
            lhs = TensorPoly(dim, {k: v.subs(quot) for k, v in lhs.terms.items()})
            rhs = twisted_matrix_rhs(q, r, kmats, th, lay, rsign, 1, top=p)
            d = lhs - rhs
            if not d.is_zero():
                formula_res[(q, r)] = {k: v for k, v in d.terms.items() if v}
    # comparison with the truncated twisted table under S_(m) = 2^m K_(m)
    tw = twisted_table(M, N, p)
    to_k = {g: Poly.gen(sym("K", g.level, g.a, g.b, M), 2 ** g.level)
            for g in rep_generators("S", th, p)}
    tw_res = {}
    for i, x in enumerate(gens):
        for y in gens[i:]:
            sx, sy = sym("S", x.level, x.a, x.b, M), sym("S", y.level, y.a, y.b, M)
            lhs = table.get(x, y).scale(2 ** (x.level + y.level))
            r = lhs - tw.get(sx, sy).subs(to_k)
            if r:
                tw_res[(x, y)] = r
    return FoldResult(table, len(gens), k_component_count(M, N // 2, p), phi_rank,
                      formula_res, tw_res)
