"""Z2-graded linear algebra over the rationals.

Indices are 1-based throughout, matching the usual E_ab notation: even
basis vectors come first (1..M), odd ones after (M+1..M+N).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

Scalar = Fraction


def to_scalar(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class GradedDim:
    M: int
    N: int

    def __post_init__(self):
        if self.M < 0 or self.N < 0 or self.M + self.N < 1:
            raise ValueError(f"invalid graded dimension ({self.M}|{self.N})")

    @property
    def size(self) -> int:
        return self.M + self.N

    def parity(self, a: int) -> int:
        if not 1 <= a <= self.size:
            raise IndexError(a)
        return 0 if a <= self.M else 1

    @property
    def parities(self) -> tuple:
        return (0,) * self.M + (1,) * self.N


class SuperMatrix:
    """Square matrix over a graded space, stored sparsely.

    `parities` lists the parity of each basis vector; entries maps
    (row, col) -> Fraction with zeros omitted.
    """

    __slots__ = ("parities", "entries")

    def __init__(self, dim, entries: Mapping | None = None):
        self.parities = _parities(dim)
        n = len(self.parities)
        clean = {}
        for (i, j), v in (entries or {}).items():
            if not (1 <= i <= n and 1 <= j <= n):
                raise IndexError((i, j))
            v = to_scalar(v)
            if v:
                clean[(i, j)] = v
        self.entries = clean

    # constructors
    @classmethod
    def zero(cls, dim) -> "SuperMatrix":
        return cls(_parities(dim))

    @classmethod
    def identity(cls, dim) -> "SuperMatrix":
        par = _parities(dim)
        return cls(par, {(i, i): 1 for i in range(1, len(par) + 1)})

    @classmethod
    def unit(cls, dim, a: int, b: int, coeff=1) -> "SuperMatrix":
        return cls(_parities(dim), {(a, b): coeff})

    @property
    def size(self) -> int:
        return len(self.parities)

    def parity_of(self, a: int) -> int:
        return self.parities[a - 1]

    def __getitem__(self, key) -> Fraction:
        return self.entries.get(key, Fraction(0))

    def _check(self, other: "SuperMatrix"):
        if self.parities != other.parities:
            raise ValueError("graded spaces differ")

    def __add__(self, other):
        self._check(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return SuperMatrix(self.parities, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return SuperMatrix(self.parities, {k: -v for k, v in self.entries.items()})

    def scale(self, c) -> "SuperMatrix":
        c = to_scalar(c)
        return SuperMatrix(self.parities, {k: c * v for k, v in self.entries.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        self._check(other)
        rows = {}
        for (k, j), v in other.entries.items():
            rows.setdefault(k, []).append((j, v))
        out = {}
        for (i, k), u in self.entries.items():
            for j, v in rows.get(k, ()):
                out[(i, j)] = out.get((i, j), 0) + u * v
        return SuperMatrix(self.parities, out)

    def __eq__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return self.parities == other.parities and self.entries == other.entries

    def __hash__(self):
        return hash((self.parities, frozenset(self.entries.items())))

    def __repr__(self):
        items = ", ".join(f"{k}: {v}" for k, v in sorted(self.entries.items()))
        return f"SuperMatrix({self.size}, {{{items}}})"

    def is_zero(self) -> bool:
        return not self.entries

    def block_parity(self) -> int | None:
        """Parity of a homogeneous matrix, None if mixed (0 for the zero matrix)."""
        seen = {(self.parities[i - 1] + self.parities[j - 1]) % 2 for i, j in self.entries}
        if len(seen) > 1:
            return None
        return seen.pop() if seen else 0

    def trace(self) -> Fraction:
        return sum((v for (i, j), v in self.entries.items() if i == j), Fraction(0))

    def power(self, k: int) -> "SuperMatrix":
        out = SuperMatrix.identity(self.parities)
        for _ in range(k):
            out = out @ self
        return out

    def dense(self) -> list:
        n = self.size
        return [[self[(i, j)] for j in range(1, n + 1)] for i in range(1, n + 1)]


def _parities(dim) -> tuple:
    if isinstance(dim, GradedDim):
        return dim.parities
    if isinstance(dim, int):
        return (0,) * dim
    return tuple(dim)


def supertrace(A: SuperMatrix) -> Fraction:
    return sum(((-1) ** A.parities[i - 1] * v for (i, j), v in A.entries.items() if i == j),
               Fraction(0))


def homogeneous_parts(A: SuperMatrix) -> dict:
    parts = {0: {}, 1: {}}
    for (i, j), v in A.entries.items():
        parts[(A.parities[i - 1] + A.parities[j - 1]) % 2][(i, j)] = v
    return {k: SuperMatrix(A.parities, e) for k, e in parts.items() if e}


def supercommutator(A: SuperMatrix, B: SuperMatrix) -> SuperMatrix:
    """[A, B} extended bilinearly from homogeneous components."""
    out = SuperMatrix.zero(A.parities)
    for pa, Ah in homogeneous_parts(A).items():
        for pb, Bh in homogeneous_parts(B).items():
            out = out + Ah @ Bh - ((-1) ** (pa * pb)) * (Bh @ Ah)
    return out


def commutator(A: SuperMatrix, B: SuperMatrix) -> SuperMatrix:
    return A @ B - B @ A


def graded_tensor(A: SuperMatrix, B: SuperMatrix) -> SuperMatrix:
    """Graded tensor product A (x) B acting on V (x) W.

    The basis vector e_i (x) f_k gets index (i-1)*dim(W) + k and parity
    [i]+[k].  Entry signs follow the Koszul rule, so that
    (E_ij(x)E_kl)(E_mn(x)E_pq) = (-1)^{([k]+[l])([m]+[n])} E_ij E_mn (x) E_kl E_pq.
    """
    pa, pb = A.parities, B.parities
    nb = len(pb)
    par = tuple((x + y) % 2 for x in pa for y in pb)
    out = {}
    for (i, j), u in A.entries.items():
        for (k, l), v in B.entries.items():
            sign = -1 if (pb[k - 1] + pb[l - 1]) * pa[j - 1] % 2 else 1
            out[((i - 1) * nb + k, (j - 1) * nb + l)] = sign * u * v
    return SuperMatrix(par, out)


def permutation_P(dim: GradedDim) -> SuperMatrix:
    n = dim.size
    out = SuperMatrix.zero(tuple((x + y) % 2 for x in dim.parities for y in dim.parities))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            e = graded_tensor(SuperMatrix.unit(dim, i, j), SuperMatrix.unit(dim, j, i))
            out = out + ((-1) ** dim.parity(j)) * e
    return out


@dataclass(frozen=True)
class ThetaData:
    """Signs theta_a and the bar involution for gl(M|2n)."""

    M: int
    n: int

    def __post_init__(self):
        if self.M < 0 or self.n < 0 or self.M + 2 * self.n < 1:
            raise ValueError(f"invalid (M|2n) = ({self.M}|{2 * self.n})")

    @classmethod
    def from_dim(cls, dim: GradedDim) -> "ThetaData":
        if dim.N % 2:
            raise ValueError(f"odd part N={dim.N} has no symplectic 2n split")
        return cls(dim.M, dim.N // 2)

    @property
    def dim(self) -> GradedDim:
        return GradedDim(self.M, 2 * self.n)

    def parity(self, a: int) -> int:
        return self.dim.parity(a)

    def bar(self, a: int) -> int:
        if a <= self.M:
            return self.M + 1 - a
        return 2 * self.M + 2 * self.n + 1 - a

    def theta(self, a: int) -> int:
        if a <= self.M:
            return 1
        # sign((2M+2n+1)/2 - a), never zero since 2M+2n+1 is odd
        return 1 if 2 * a < 2 * self.M + 2 * self.n + 1 else -1

    def sigma(self, a: int, b: int) -> int:
        """(-1)^{[a]([b]+1)} theta_a theta_b, the sign in E_ab^t."""
        s = (-1) ** (self.parity(a) * (self.parity(b) + 1))
        return s * self.theta(a) * self.theta(b)


def transpose_t(A: SuperMatrix, th: ThetaData) -> SuperMatrix:
    if A.parities != th.dim.parities:
        raise ValueError("matrix does not live on gl(M|2n)")
    out = {}
    for (a, b), v in A.entries.items():
        out[(th.bar(b), th.bar(a))] = th.sigma(a, b) * v
    return SuperMatrix(A.parities, out)


def transpose_order(th: ThetaData, bound: int = 8) -> int:
    """Smallest k with t^k = id on every matrix unit."""
    dim = th.dim
    units = [SuperMatrix.unit(dim, a, b) for a in range(1, dim.size + 1)
             for b in range(1, dim.size + 1)]
    cur = units
    for k in range(1, bound + 1):
        cur = [transpose_t(u, th) for u in cur]
        if cur == units:
            return k
    raise RuntimeError("transposition order exceeds bound")


def transpose_first(X: SuperMatrix, th: ThetaData) -> SuperMatrix:
    """Apply t in the first factor of an element of End(V) (x) End(V)."""
    dim = th.dim
    n = dim.size
    out = SuperMatrix.zero(X.parities)
    for (r, c), v in X.entries.items():
        i, k = divmod(r - 1, n)
        j, l = divmod(c - 1, n)
        i, k, j, l = i + 1, k + 1, j + 1, l + 1
        # undo the Koszul sign of graded_tensor to recover the E_ij (x) E_kl coefficient
        sign = -1 if (dim.parity(k) + dim.parity(l)) * dim.parity(j) % 2 else 1
        first = transpose_t(SuperMatrix.unit(dim, i, j), th)
        out = out + (sign * v) * graded_tensor(first, SuperMatrix.unit(dim, k, l))
    return out


def q_operator(th: ThetaData) -> SuperMatrix:
    return transpose_first(permutation_P(th.dim), th)


def proportionality(X: SuperMatrix, Y: SuperMatrix):
    """Return k with X == k*Y, or None."""
    if Y.is_zero():
        return Fraction(0) if X.is_zero() else None
    (key, yv), = [next(iter(Y.entries.items()))]
    k = X[key] / yv
    return k if X == Y.scale(k) else None


def metric(dim: GradedDim) -> dict:
    """g_{(ab),(cd)} = str(E_ab E_cd) on the matrix-unit basis."""
    n = dim.size
    g = {}
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            for c in range(1, n + 1):
                for d in range(1, n + 1):
                    v = supertrace(SuperMatrix.unit(dim, a, b) @ SuperMatrix.unit(dim, c, d))
                    if v:
                        g[(a, b), (c, d)] = v
    return g


def rref(rows: list, ncols: int):
    """Reduced row echelon form of a rational matrix (list of lists).

    Returns (reduced rows, pivot columns).
    """
    A = [[to_scalar(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(rows: list, ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def inverse(rows: list) -> list:
    """Inverse of a square rational matrix; raises ZeroDivisionError if singular."""
    n = len(rows)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    red, piv = rref(aug, n)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in red]
