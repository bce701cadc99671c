"""Supercommutative polynomials and graded Poisson brackets.

A monomial is a sorted tuple of symbols, repeated for powers.  Odd
symbols never repeat.  Reordering a product picks up the Koszul sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple

# families in canonical order; the soldering parameters sort first
FAMILIES = ("lambda", "W", "Wbar+", "Wbar-", "T", "S", "K", "J")
_FAM_INDEX = {f: i for i, f in enumerate(FAMILIES)}


class Symbol(NamedTuple):
    fam: int
    level: int
    a: int
    b: int
    m: int
    par: int

    @property
    def family(self) -> str:
        return FAMILIES[self.fam]

    def __repr__(self):
        extra = f",{self.m}" if self.family == "J" else ""
        return f"{self.family}{self.level}[{self.a},{self.b}{extra}]"

    def record(self) -> dict:
        rec = {"family": self.family, "level": self.level, "a": self.a, "b": self.b}
        if self.family == "J":
            rec["m"] = self.m
        return rec


def sym(family: str, level: int, a: int, b: int, M: int, m: int = 0) -> Symbol:
    """Generator with row a, column b of a gl(M|N) index set (parity [a]+[b])."""
    par = (int(a > M) + int(b > M)) % 2
    return Symbol(_FAM_INDEX[family], level, a, b, m, par)


def symbol_from_record(rec: dict, M: int) -> Symbol:
    return sym(rec["family"], rec["level"], rec["a"], rec["b"], M, rec.get("m", 0))


def mono_parity(mono: tuple) -> int:
    return sum(s.par for s in mono) % 2


def mono_mul(m1: tuple, m2: tuple):
    """Product of two sorted monomials: (sign, monomial) or (0, None)."""
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    odd2 = [s for s in m2 if s.par]
    swaps = 0
    if odd2:
        for x in m1:
            if x.par:
                for y in odd2:
                    if y < x:
                        swaps += 1
                    elif y == x:
                        return 0, None
    merged = tuple(sorted(m1 + m2))
    return (-1 if swaps % 2 else 1), merged


def normalize(symbols: Iterable[Symbol]):
    """Sort a word of symbols into canonical order.

    Returns (sign, monomial); sign is 0 when an odd symbol repeats.
    """
    word = list(symbols)
    sign = 1
    # insertion sort, tracking odd-odd transpositions
    for i in range(1, len(word)):
        j = i
        while j > 0 and word[j] < word[j - 1]:
            if word[j].par and word[j - 1].par:
                sign = -sign
            word[j], word[j - 1] = word[j - 1], word[j]
            j -= 1
    for x, y in zip(word, word[1:]):
        if x == y and x.par:
            return 0, None
    return sign, tuple(word)


class Poly:
    """Element of the supercommutative polynomial ring with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): Fraction(c)})

    @classmethod
    def gen(cls, s: Symbol, c=1) -> "Poly":
        return cls({(s,): Fraction(c)})

    @classmethod
    def word(cls, symbols, c=1) -> "Poly":
        sign, mono = normalize(symbols)
        return cls({mono: Fraction(c) * sign}) if sign else cls()

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly()
        return Poly({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                sign, m = mono_mul(m1, m2)
                if sign:
                    out[m] = out.get(m, 0) + sign * c1 * c2
        return Poly(out)

    def __rmul__(self, other):
        return self.scale(other)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in sorted(self.terms.items()):
            parts.append(f"{c}" + "".join(f"*{s!r}" for s in mono))
        return " + ".join(parts)

    def parity(self):
        """Parity of a homogeneous polynomial (0 for constants/zero); None if mixed."""
        ps = {mono_parity(m) for m in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def symbols(self) -> set:
        return {s for m in self.terms for s in m}

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def homogeneous(self, deg: int) -> "Poly":
        return Poly({m: c for m, c in self.terms.items() if len(m) == deg})

    def subs(self, mapping: dict) -> "Poly":
        """Substitute symbols by polynomials (unlisted symbols stay)."""
        out = Poly()
        cache = {}
        for mono, c in self.terms.items():
            if not any(s in mapping for s in mono):
                out = out + Poly({mono: c})
                continue
            acc = Poly.const(c)
            for s in mono:
                if s not in cache:
                    cache[s] = mapping[s] if s in mapping else Poly.gen(s)
                acc = acc * cache[s]
            out = out + acc
        return out

    def leading_split(self, fam: str) -> dict:
        """Group terms by their first symbol when it belongs to `fam`.

        Used to read off coefficients of parameters ordered before all
        other symbols; raises if a term has no such leading symbol.
        """
        fi = _FAM_INDEX[fam]
        out = {}
        for mono, c in self.terms.items():
            if not mono or mono[0].fam != fi:
                raise ValueError(f"term {mono} has no leading {fam} symbol")
            if any(s.fam == fi for s in mono[1:]):
                raise ValueError(f"term {mono} is not linear in {fam}")
            rest = out.setdefault(mono[0], {})
            rest[mono[1:]] = rest.get(mono[1:], 0) + c
        return {k: Poly(v) for k, v in out.items()}


def poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, Symbol):
        return Poly.gen(x)
    return Poly.const(x)


class UncoveredPair(KeyError):
    def __init__(self, x, y):
        super().__init__(f"uncovered pair {{{x!r}, {y!r}}}")
        self.pair = (x, y)


@dataclass
class BracketTable:
    """Brackets of generator pairs, one stored ordering per pair.

    Lookup in the other order applies {x,y} = -(-1)^{[x][y]} {y,x}.
    An optional `rule(x, y)` computes missing entries on demand (the
    result is cached under the canonical ordering).
    """

    domain: str = ""
    entries: dict = field(default_factory=dict)
    rule: Callable | None = None

    def set(self, x: Symbol, y: Symbol, value: Poly):
        value = poly(value)
        if y < x:
            x, y = y, x
            value = -value if not (x.par and y.par) else value
        self.entries[(x, y)] = value

    def get(self, x: Symbol, y: Symbol) -> Poly:
        if x <= y:
            key, flip = (x, y), False
        else:
            key, flip = (y, x), True
        val = self.entries.get(key)
        if val is None:
            if self.rule is None:
                raise UncoveredPair(x, y)
            val = poly(self.rule(*key))
            self.entries[key] = val
        if flip:
            return val if (x.par and y.par) else -val
        return val

    def generators(self) -> list:
        return sorted({s for k in self.entries for s in k})

    def __len__(self):
        return len(self.entries)

    def equals(self, other: "BracketTable", pairs=None) -> bool:
        return not self.diff(other, pairs)

    def diff(self, other: "BracketTable", pairs=None) -> dict:
        keys = pairs if pairs is not None else set(self.entries) | set(other.entries)
        out = {}
        for x, y in keys:
            r = self.get(x, y) - other.get(x, y)
            if r:
                out[(x, y)] = r
        return out


def _bracket_gen_mono(x: Symbol, mono: tuple, table: BracketTable) -> Poly:
    # {x, y1...yn} = sum_j (-1)^{[x]([y1]+..+[y_{j-1}])} y1..y_{j-1} {x,yj} y_{j+1}..yn
    out = Poly()
    pre_par = 0
    for j, y in enumerate(mono):
        b = table.get(x, y)
        if b:
            left = Poly({mono[:j]: Fraction(1)})
            right = Poly({mono[j + 1:]: Fraction(1)})
            term = left * b * right
            if x.par and pre_par:
                term = -term
            out = out + term
        pre_par ^= y.par
    return out


def bracket_gen(x: Symbol, g: Poly, table: BracketTable) -> Poly:
    out = Poly()
    for mono, c in g.terms.items():
        if mono:
            out = out + _bracket_gen_mono(x, mono, table).scale(c)
    return out


def poisson_bracket(f, g, table: BracketTable) -> Poly:
    """Graded Poisson bracket of polynomials, extended from `table` by Leibniz."""
    f, g = poly(f), poly(g)
    g_by_par = {}
    for mono, c in g.terms.items():
        if mono:
            g_by_par.setdefault(mono_parity(mono), {})[mono] = c
    out = Poly()
    for mono, c in f.terms.items():
        if not mono:
            continue
        for gp, gt in g_by_par.items():
            gpoly = Poly(gt)
            # {x1..xn, h} = sum_i x1..x_{i-1} {x_i, h} x_{i+1}..x_n (-1)^{[h]([x_{i+1}]+..+[x_n])}
            for i, x in enumerate(mono):
                b = bracket_gen(x, gpoly, table)
                if not b:
                    continue
                post_par = sum(s.par for s in mono[i + 1:]) % 2
                term = Poly({mono[:i]: Fraction(1)}) * b * Poly({mono[i + 1:]: Fraction(1)})
                if gp and post_par:
                    term = -term
                out = out + term.scale(c)
    return out


@dataclass
class JacobiReport:
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def jacobiator(x: Symbol, y: Symbol, z: Symbol, table: BracketTable) -> Poly:
    """(-1)^{[x][z]}{x,{y,z}} + (-1)^{[y][x]}{y,{z,x}} + (-1)^{[z][y]}{z,{x,y}}."""
    def sgn(u, v):
        return -1 if u.par and v.par else 1
    r = bracket_gen(x, table.get(y, z), table).scale(sgn(x, z))
    r = r + bracket_gen(y, table.get(z, x), table).scale(sgn(y, x))
    r = r + bracket_gen(z, table.get(x, y), table).scale(sgn(z, y))
    return r


def check_jacobi(table: BracketTable, triples=None, generators=None) -> JacobiReport:
    """Check the graded Jacobi identity on generator triples.

    By default every unordered triple (with repetition) of the table's
    generators is checked; the graded cyclic sum is symmetric enough
    that this covers all ordered triples.
    """
    if triples is None:
        gens = sorted(generators) if generators is not None else table.generators()
        triples = [(gens[i], gens[j], gens[k]) for i in range(len(gens))
                   for j in range(i, len(gens)) for k in range(j, len(gens))]
    rep = JacobiReport()
    for x, y, z in triples:
        rep.checked += 1
        r = jacobiator(x, y, z, table)
        if r:
            rep.violations.append(((x, y, z), r))
    return rep
