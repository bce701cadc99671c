"""Finite-dimensional representations of gl(M|N) and of the super-Yangian.

Operators are SuperMatrix instances on a graded carrier space.  An
assignment maps (a, b, r) to the operator representing T^{ab}_(r);
levels above the cutoff act by zero.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .graded import GradedDim, SuperMatrix, graded_tensor, rref, to_scalar


def _gsign(*bits) -> int:
    return -1 if sum(bits) % 2 else 1


def graded_bracket(A: SuperMatrix, pa: int, B: SuperMatrix, pb: int) -> SuperMatrix:
    return A @ B - _gsign(pa * pb) * (B @ A)


@dataclass(frozen=True)
class GlRep:
    dim: GradedDim
    parities: tuple
    rho: dict  # (a, b) -> SuperMatrix

    def op(self, a: int, b: int) -> SuperMatrix:
        return self.rho[(a, b)]

    def violations(self) -> list:
        """Index quadruples where the gl(M|N) relation or block parity fails."""
        n, d = self.dim.size, self.dim
        bad = []
        for (a, b), X in self.rho.items():
            if X.block_parity() not in (None, (d.parity(a) + d.parity(b)) % 2) and not X.is_zero():
                bad.append(("parity", a, b))
        for a, b, c, e in product(range(1, n + 1), repeat=4):
            pab = (d.parity(a) + d.parity(b)) % 2
            pce = (d.parity(c) + d.parity(e)) % 2
            lhs = graded_bracket(self.op(a, b), pab, self.op(c, e), pce)
            rhs = SuperMatrix.zero(self.parities)
            if c == b:
                rhs = rhs + self.op(a, e)
            if a == e:
                rhs = rhs - _gsign(pab * pce) * self.op(c, b)
            if lhs != rhs:
                bad.append(("relation", a, b, c, e))
        return bad


def fundamental_rep(M: int, N: int) -> GlRep:
    dim = GradedDim(M, N)
    n = dim.size
    rho = {(a, b): SuperMatrix.unit(dim, a, b) for a in range(1, n + 1) for b in range(1, n + 1)}
    rep = GlRep(dim, dim.parities, rho)
    bad = rep.violations()
    assert not bad, bad
    return rep


@dataclass(frozen=True)
class RepAssignment:
    dim: GradedDim
    parities: tuple
    ops: dict  # (a, b, r) -> SuperMatrix for 1 <= r <= cutoff
    cutoff: int

    def op(self, a: int, b: int, r: int) -> SuperMatrix:
        if r == 0:
            return SuperMatrix.identity(self.parities) if a == b else SuperMatrix.zero(self.parities)
        if r > self.cutoff:
            return SuperMatrix.zero(self.parities)
        return self.ops.get((a, b, r)) or SuperMatrix.zero(self.parities)

    def parity(self, a: int, b: int) -> int:
        return (self.dim.parity(a) + self.dim.parity(b)) % 2


def evaluation_rep(rep: GlRep) -> RepAssignment:
    ops = {(a, b, 1): X for (a, b), X in rep.rho.items()}
    return RepAssignment(rep.dim, rep.parities, ops, 1)


def relation_rhs(ra: RepAssignment, a, b, c, d, m, n) -> SuperMatrix:
    """Right-hand side of the mode relation of Y(M|N) as an operator."""
    pa, pb, pc = (ra.dim.parity(x) for x in (a, b, c))
    k = m + n - 1
    out = SuperMatrix.zero(ra.parities)
    if c == b:
        out = out + ra.op(a, d, k)
    if a == d:
        out = out - _gsign(ra.parity(a, b) * ra.parity(c, d)) * ra.op(c, b, k)
    tail = SuperMatrix.zero(ra.parities)
    for r in range(1, min(m, n)):
        tail = tail + ra.op(c, b, r) @ ra.op(a, d, k - r) - ra.op(c, b, k - r) @ ra.op(a, d, r)
    return out + _gsign(pc * (pa + pb) + pa * pb) * tail


@dataclass
class RelationReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_defining_relations(ra: RepAssignment, level_bound: int) -> RelationReport:
    """Verify the Yangian mode relations on operators for all m, n <= level_bound."""
    rep = RelationReport()
    idx = range(1, ra.dim.size + 1)
    for m, n in product(range(1, level_bound + 1), repeat=2):
        for a, b, c, d in product(idx, repeat=4):
            lhs = graded_bracket(ra.op(a, b, m), ra.parity(a, b), ra.op(c, d, n), ra.parity(c, d))
            rhs = relation_rhs(ra, a, b, c, d, m, n)
            rep.checked += 1
            if lhs != rhs:
                rep.failures.append((a, b, c, d, m, n))
    return rep


def _tensor_pair(X: RepAssignment, Y: RepAssignment) -> RepAssignment:
    # coproduct T^{ab}(u) -> sum_e T^{ae}(u) (x) T^{eb}(u)
    par = tuple((x + y) % 2 for x in X.parities for y in Y.parities)
    n = X.dim.size
    cutoff = X.cutoff + Y.cutoff
    ops = {}
    for a, b in product(range(1, n + 1), repeat=2):
        for r in range(1, cutoff + 1):
            acc = SuperMatrix.zero(par)
            for e in range(1, n + 1):
                for r1 in range(max(0, r - Y.cutoff), min(r, X.cutoff) + 1):
                    A, B = X.op(a, e, r1), Y.op(e, b, r - r1)
                    if A.entries and B.entries:
                        acc = acc + graded_tensor(A, B)
            if acc.entries:
                ops[(a, b, r)] = acc
    return RepAssignment(X.dim, par, ops, cutoff)


def _functional(ra: RepAssignment) -> RepAssignment:
    # the mode relations match the RTT form after T^{ab}_(n) -> (-1)^{[b]} T^{ab}_(n), n >= 1;
    # the map is an involution
    P = ra.dim.parity
    ops = {k: (-X if P(k[1]) else X) for k, X in ra.ops.items()}
    return RepAssignment(ra.dim, ra.parities, ops, ra.cutoff)


def tensor_eval(reps: list) -> RepAssignment:
    """Graded tensor product of representations through the coproduct.

    Folding pairwise gives the chain sum over compositions r_1+..+r_s = r
    with intermediate indices summed, each chain tensored with Koszul signs.
    The coproduct acts on the RTT generators, so factors are moved to
    that normalization and back.
    """
    if not reps:
        raise ValueError("need at least one factor")
    out = _functional(reps[0])
    for r in reps[1:]:
        out = _tensor_pair(out, _functional(r))
    return _functional(out)


def level_nonzero(ra: RepAssignment, r: int) -> bool:
    n = ra.dim.size
    return any(not ra.op(a, b, r).is_zero() for a in range(1, n + 1) for b in range(1, n + 1))


def nullspace(rows: list, ncols: int) -> list:
    red, piv = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, piv):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def _apply(X: SuperMatrix, v: list) -> list:
    out = [Fraction(0)] * len(v)
    for (i, j), x in X.entries.items():
        out[i - 1] += x * v[j - 1]
    return out


@dataclass(frozen=True)
class HighestWeightData:
    vector: tuple | None
    kernel_dim: int
    lambdas: dict  # a -> (lambda_a^(1), ..., lambda_a^(cutoff))
    label: str     # "singular", "reducible-or-trivial" or "empty"

    def lam(self, a: int) -> tuple:
        """Coefficients (1, lambda^(1), lambda^(2), ...) of lambda_a(u) in powers of 1/u."""
        return (Fraction(1),) + self.lambdas[a]


def highest_weight(ra: RepAssignment) -> HighestWeightData:
    """Joint kernel of the raising operators T^{ab}_(n), a < b, and its weights."""
    size = len(ra.parities)
    n = ra.dim.size
    rows = []
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            for r in range(1, ra.cutoff + 1):
                X = ra.op(a, b, r)
                rows.extend(list(row) for row in X.dense() if any(row))
    kern = nullspace(rows, size)
    if not kern:
        return HighestWeightData(None, 0, {}, "empty")
    label = "singular" if len(kern) == 1 and ra.cutoff >= 1 and any(
        level_nonzero(ra, r) for r in range(1, ra.cutoff + 1)) else "reducible-or-trivial"
    v = kern[0]
    piv = next(i for i, x in enumerate(v) if x)
    lambdas = {}
    for a in range(1, n + 1):
        vals = []
        for r in range(1, ra.cutoff + 1):
            w = _apply(ra.op(a, a, r), v)
            lam = w[piv] / v[piv]
            if any(wi != lam * vi for wi, vi in zip(w, v)):
                # kernel vector is not a weight vector
                label = "reducible-or-trivial"
            vals.append(lam)
        lambdas[a] = tuple(vals)
    return HighestWeightData(tuple(v), len(kern), lambdas, label)


# Drinfeld polynomial test

class NotFactorable(ValueError):
    pass


@dataclass(frozen=True)
class RationalFunction:
    """prod (u - x)^k over numerator roots divided by the same over denominator roots."""

    num: tuple  # ((root, multiplicity), ...)
    den: tuple

    @classmethod
    def make(cls, num=(), den=()) -> "RationalFunction":
        def norm(pairs):
            c = Counter()
            for r, k in pairs:
                if int(k) != k or k < 0:
                    raise NotFactorable(f"bad multiplicity {k!r}")
                if isinstance(r, float):
                    raise NotFactorable(f"root {r!r} is a float; give an exact rational")
                try:
                    c[to_scalar(r)] += int(k)
                except (TypeError, ValueError) as exc:
                    raise NotFactorable(f"root {r!r} is not rational") from exc
            return c
        n, d = norm(num), norm(den)
        common = n & d
        n.subtract(common)
        d.subtract(common)
        return cls(tuple(sorted((r, k) for r, k in n.items() if k)),
                   tuple(sorted((r, k) for r, k in d.items() if k)))

    def signed(self) -> Counter:
        c = Counter()
        for r, k in self.num:
            c[r] += k
        for r, k in self.den:
            c[r] -= k
        return c

    def degree_balance(self) -> int:
        return sum(k for _, k in self.num) - sum(k for _, k in self.den)


@dataclass(frozen=True)
class DrinfeldInput:
    lams: tuple  # RationalFunction per index a = 1..M+N

    @classmethod
    def from_roots(cls, *pairs) -> "DrinfeldInput":
        """Each pair is (numerator roots, denominator roots) as (root, mult) lists."""
        return cls(tuple(RationalFunction.make(n, d) for n, d in pairs))


@dataclass
class DrinfeldResult:
    accept: bool
    witnesses: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)


def _shift_chain(f: Counter):
    """Solve g(x+1) - g(x) = f(x) with g >= 0 and finite support.

    Returns the root multiset of P (as a Counter) or None.
    """
    classes = {}
    for x, k in f.items():
        if k:
            classes.setdefault(x - (x.numerator // x.denominator), []).append(x)
    g = Counter()
    for xs in classes.values():
        if sum(f[x] for x in xs) != 0:
            return None
        lo, hi = min(xs), max(xs)
        acc = 0
        x = hi
        while x >= lo:
            # g(x) = -sum_{y >= x} f(y); g(hi + 1) = 0
            acc -= f.get(x, 0)
            if acc < 0:
                return None
            if acc:
                g[x] = acc
            x -= 1
    return g


def drinfeld_check(d: DrinfeldInput, M: int, N: int) -> DrinfeldResult:
    """Finite-dimensionality test on a factored highest weight.

    Witnesses: for a != M the roots of P_a; for a = M the pair of root
    lists (r~, r) of the 1 - r/u products.
    """
    n = M + N
    res = DrinfeldResult(True)
    if len(d.lams) != n:
        raise NotFactorable(f"expected {n} factors, got {len(d.lams)}")
    for a, lam in enumerate(d.lams, start=1):
        if lam.degree_balance():
            raise NotFactorable(f"lambda_{a} is not of the form 1 + O(1/u)")
    for a in range(1, n):
        f = d.lams[a - 1].signed()
        f.subtract(d.lams[a].signed())
        f = Counter({x: k for x, k in f.items() if k})
        if a == M:
            num = sorted(x for x, k in f.items() for _ in range(max(k, 0)))
            den = sorted(x for x, k in f.items() for _ in range(max(-k, 0)))
            # equal degrees; u^m P~/P = prod(u - r~)/prod(u - r)
            res.witnesses[a] = (tuple(num), tuple(den))
            continue
        g = _shift_chain(f)
        if g is None:
            res.accept = False
            res.diagnostics.append(f"a={a}: no unit-shift chain closes the root multiset")
        else:
            res.witnesses[a] = tuple(sorted(g.elements()))
    return res


def poly_from_roots(roots) -> list:
    """Coefficients (leading first) of prod (u - r)."""
    c = [Fraction(1)]
    for r in roots:
        c = [x - r * y for x, y in zip(c + [Fraction(0)], [Fraction(0)] + c)]
    return c


def rational_roots(coeffs: list) -> list:
    """Rational roots with multiplicity of a monic-normalizable polynomial.

    Raises NotFactorable if it does not split over the rationals.
    """
    from math import gcd, lcm

    c = [to_scalar(x) for x in coeffs]
    roots = []
    while len(c) > 1:
        if c[-1] == 0:
            roots.append(Fraction(0))
            c.pop()
            continue
        den = lcm(*(x.denominator for x in c))
        ints = [int(x * den) for x in c]
        g = 0
        for x in ints:
            g = gcd(g, x)
        ints = [x // g for x in ints]
        lead, const = abs(ints[0]), abs(ints[-1])
        cands = sorted({Fraction(s * p, q) for p in _divisors(const) for q in _divisors(lead)
                        for s in (1, -1)})
        for x in cands:
            quo, rem = _synthetic(c, x)
            if rem == 0:
                roots.append(x)
                c = quo
                break
        else:
            raise NotFactorable("polynomial has irrational or complex roots")
    return roots


def _divisors(k: int) -> list:
    return [d for d in range(1, k + 1) if k % d == 0] if k else [1]


def _synthetic(c: list, x: Fraction):
    out = [c[0]]
    for coef in c[1:]:
        out.append(coef + x * out[-1])
    return out[:-1], out[-1]


def drinfeld_input_from(hw: HighestWeightData) -> DrinfeldInput:
    """Factor lambda_a(u) = u^{-s} (u^s + lambda^(1) u^{s-1} + ...) over the rationals."""
    pairs = []
    for a in sorted(hw.lambdas):
        coeffs = list(hw.lam(a))
        s = len(coeffs) - 1
        pairs.append(([(r, 1) for r in rational_roots(coeffs)], [(Fraction(0), s)]))
    return DrinfeldInput.from_roots(*pairs)
