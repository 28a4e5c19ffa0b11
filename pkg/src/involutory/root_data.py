"""Finite root systems, Chevalley structure constants and Weyl dimensions.

Roots are stored as integer coefficient tuples in the basis of simple roots.
Inner products come from an integer Euclidean realisation (some types are
doubled to stay integral); only ratios of lengths ever matter.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources


def _unit(n, i, v=1):
    e = [0] * n
    e[i] = v
    return e


def _sub(a, b):
    return [x - y for x, y in zip(a, b)]


def _euclidean_simple_roots(typ: str, rank: int) -> list[list[int]]:
    if typ == "A":
        return [_sub(_unit(rank + 1, i), _unit(rank + 1, i + 1)) for i in range(rank)]
    if typ in "BCD":
        out = [_sub(_unit(rank, i), _unit(rank, i + 1)) for i in range(rank - 1)]
        if typ == "B":
            out.append(_unit(rank, rank - 1))
        elif typ == "C":
            out.append(_unit(rank, rank - 1, 2))
        else:
            out.append([0] * (rank - 2) + [1, 1])
        return out
    if typ == "E":
        # doubled standard E8 realisation; E6, E7 are the leading sub-diagrams
        e8 = [[1, -1, -1, -1, -1, -1, -1, 1], [2, 2, 0, 0, 0, 0, 0, 0]]
        e8 += [[2 * (x == i + 1) - 2 * (x == i) for x in range(8)] for i in range(6)]
        return e8[:rank]
    if typ == "F":
        return [[0, 2, -2, 0], [0, 0, 2, -2], [0, 0, 0, 2], [1, -1, -1, -1]]
    if typ == "G":
        return [[1, -1, 0], [-2, 1, 1]]
    raise ValueError(f"unknown type {typ}")


_VALID = {"A": 1, "B": 2, "C": 2, "D": 3, "E": 6, "F": 4, "G": 2}


@dataclass(frozen=True)
class RootSystem:
    type: str
    rank: int
    simple_roots: tuple  # Euclidean integer vectors
    gram: tuple  # (alpha_i, alpha_j), integers
    cartan: tuple  # A_ij = 2(alpha_i,alpha_j)/(alpha_j,alpha_j)
    positive_roots: tuple  # coefficient tuples, height-then-lex order

    @property
    def name(self):
        return f"{self.type}{self.rank}"

    def ip(self, a, b) -> int:
        g = self.gram
        return sum(a[i] * g[i][j] * b[j] for i in range(self.rank) if a[i] for j in range(self.rank) if b[j])

    def norm2(self, a) -> int:
        return self.ip(a, a)

    @cached_property
    def roots(self) -> tuple:
        return self.positive_roots + tuple(tuple(-c for c in r) for r in self.positive_roots)

    @cached_property
    def root_index(self) -> dict:
        return {r: k for k, r in enumerate(self.roots)}

    def is_root(self, a) -> bool:
        return tuple(a) in self.root_index

    @cached_property
    def highest_root(self) -> tuple:
        return self.positive_roots[-1]

    @cached_property
    def long_norm2(self) -> int:
        return max(self.gram[i][i] for i in range(self.rank))

    def pairing(self, a, i) -> Fraction:
        """<a, alpha_i^vee> = 2(a, alpha_i)/(alpha_i, alpha_i)."""
        return Fraction(2 * sum(a[j] * self.gram[j][i] for j in range(self.rank)), self.gram[i][i])

    def coroot(self, a) -> tuple:
        """Coefficients of a^vee in the simple coroots."""
        n = self.norm2(a)
        return tuple(Fraction(a[i] * self.gram[i][i], n) for i in range(self.rank))

    def euclidean(self, a) -> tuple:
        dim = len(self.simple_roots[0])
        return tuple(sum(a[i] * self.simple_roots[i][k] for i in range(self.rank)) for k in range(dim))

    @cached_property
    def weyl_vector(self) -> tuple:
        """rho in fundamental-weight coordinates."""
        return (1,) * self.rank

    def reflect(self, a, i) -> tuple:
        k = self.pairing(a, i)
        out = list(a)
        out[i] -= int(k)
        return tuple(out)


def build_root_system(typ: str, rank: int) -> RootSystem:
    typ = typ.upper()
    if typ not in _VALID or rank < _VALID[typ] and not (typ == "B" and rank == 1):
        raise ValueError(f"invalid Cartan type {typ}{rank}")
    if (typ == "E" and rank > 8) or (typ == "F" and rank != 4) or (typ == "G" and rank != 2):
        raise ValueError(f"invalid Cartan type {typ}{rank}")
    simple = _euclidean_simple_roots(typ, rank)
    gram = tuple(tuple(sum(x * y for x, y in zip(a, b)) for b in simple) for a in simple)
    cartan = []
    for i in range(rank):
        row = []
        for j in range(rank):
            q = Fraction(2 * gram[i][j], gram[j][j])
            assert q.denominator == 1
            row.append(int(q))
        cartan.append(tuple(row))
    pos = _positive_roots(gram, rank)
    return RootSystem(typ, rank, tuple(map(tuple, simple)), gram, tuple(cartan), pos)


def _positive_roots(gram, rank) -> tuple:
    simple = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    found = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for b in layer:
            for i in range(rank):
                # string b - p a_i, ..., b + q a_i
                p = 0
                while True:
                    c = list(b)
                    c[i] -= p + 1
                    if tuple(c) in found:
                        p += 1
                    else:
                        break
                pair = Fraction(2 * sum(b[j] * gram[j][i] for j in range(rank)), gram[i][i])
                q = p - pair
                if q > 0:
                    c = list(b)
                    c[i] += 1
                    c = tuple(c)
                    if c not in found:
                        found.add(c)
                        nxt.append(c)
        layer = nxt
    return tuple(sorted(found, key=lambda r: (sum(r), tuple(-x for x in r))))


# ---------------------------------------------------------------- Chevalley

@dataclass
class ChevalleyConstants:
    rs: RootSystem
    extraspecial: dict = field(default_factory=dict)  # xi -> (alpha_i, xi - alpha_i)
    _cache: dict = field(default_factory=dict)

    def N(self, a, b) -> int:
        """Structure constant with [e_a, e_b] = N(a,b) e_{a+b}; 0 if a+b is not a root."""
        a, b = tuple(a), tuple(b)
        key = (a, b)
        if key in self._cache:
            return self._cache[key]
        rs = self.rs
        s = tuple(x + y for x, y in zip(a, b))
        if not rs.is_root(s):
            val = 0
        else:
            val = self._compute(a, b, s)
        self._cache[key] = val
        return val

    def _compute(self, a, b, s) -> int:
        rs = self.rs
        pa, pb = sum(a) > 0, sum(b) > 0
        if pa and pb:
            return self._positive(a, b, s)
        if not pa and not pb:
            return -self.N(_neg(a), _neg(b))
        c = _neg(s)
        if sum(c) > 0 and pa:  # (c, a) both positive
            return _int(Fraction(rs.norm2(c), rs.norm2(b)) * self.N(c, a))
        if sum(c) > 0:  # (b, c) both positive
            return _int(Fraction(rs.norm2(c), rs.norm2(a)) * self.N(b, c))
        if pa:  # b, c negative
            return _int(Fraction(rs.norm2(c), rs.norm2(a)) * self.N(b, c))
        return _int(Fraction(rs.norm2(c), rs.norm2(b)) * self.N(c, a))

    def _positive(self, a, b, xi) -> int:
        rs = self.rs
        g, d = self.extraspecial[xi]
        if (a, b) == (g, d):
            p = 0
            while rs.is_root(tuple(x - (p + 1) * y for x, y in zip(b, a))):
                p += 1
            return p + 1
        if (a, b) == (d, g):
            return -self.N(g, d)
        ng, nd = _neg(g), _neg(d)
        t = Fraction(0)
        bg = tuple(x - y for x, y in zip(b, g))
        if rs.is_root(bg):
            t += Fraction(self.N(b, ng) * self.N(a, nd), rs.norm2(bg))
        ag = tuple(x - y for x, y in zip(a, g))
        if rs.is_root(ag):
            t += Fraction(self.N(ng, a) * self.N(b, nd), rs.norm2(ag))
        return _int(Fraction(rs.norm2(xi), self.N(g, d)) * t)


def _neg(a):
    return tuple(-x for x in a)


def _int(q: Fraction) -> int:
    if q.denominator != 1:
        raise ArithmeticError(f"non-integral structure constant {q}")
    return int(q)


def chevalley_constants(rs: RootSystem, verify: bool | None = None) -> ChevalleyConstants:
    cc = ChevalleyConstants(rs)
    for xi in rs.positive_roots:
        if sum(xi) == 1:
            continue
        for i in range(rs.rank):
            rest = list(xi)
            rest[i] -= 1
            if rs.is_root(tuple(rest)) and min(rest) >= 0:
                cc.extraspecial[xi] = (tuple(int(j == i) for j in range(rs.rank)), tuple(rest))
                break
    if verify is None:
        verify = rs.rank <= 4
    if verify:
        alg = ChevalleyAlgebra(rs, cc)
        bad = alg.jacobi_violations()
        if bad:
            raise ArithmeticError(f"Jacobi fails for {len(bad)} triples")
    return cc


class ChevalleyAlgebra:
    """Chevalley basis: indices 0..r-1 are simple coroots h_i, then e_alpha for all roots."""

    def __init__(self, rs: RootSystem, cc: ChevalleyConstants | None = None):
        self.rs = rs
        self.cc = cc or chevalley_constants(rs, verify=False)
        self.rank = rs.rank
        self.dim = rs.rank + len(rs.roots)
        self._br: dict = {}

    def root_of(self, k: int) -> tuple | None:
        return None if k < self.rank else self.rs.roots[k - self.rank]

    def index_of_root(self, a) -> int:
        return self.rank + self.rs.root_index[tuple(a)]

    def bracket_basis(self, a: int, b: int) -> dict:
        key = (a, b)
        if key in self._br:
            return self._br[key]
        rs, r = self.rs, self.rank
        out: dict = {}
        if a < r and b < r:
            pass
        elif a < r:
            beta = self.root_of(b)
            c = rs.pairing(beta, a)
            if c:
                out[b] = int(c)
        elif b < r:
            out = {k: -v for k, v in self.bracket_basis(b, a).items()}
        else:
            al, be = self.root_of(a), self.root_of(b)
            s = tuple(x + y for x, y in zip(al, be))
            if not any(s):
                out = {i: c for i, c in enumerate(rs.coroot(al)) if c}
            elif rs.is_root(s):
                out[self.index_of_root(s)] = self.cc.N(al, be)
        self._br[key] = out
        return out

    def bracket(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for c, v in self.bracket_basis(a, b).items():
                    out[c] = out.get(c, 0) + ca * cb * v
        return {k: v for k, v in out.items() if v}

    def form_basis(self, a: int, b: int) -> Fraction:
        """Invariant form normalised to (theta, theta) = 2."""
        rs, r = self.rs, self.rank
        L = rs.long_norm2
        if a < r and b < r:
            # (h_i, h_j) = 4 (a_i, a_j) / (|a_i|^2 |a_j|^2) scaled by L/2
            return Fraction(4 * rs.gram[a][b] * L, 2 * rs.gram[a][a] * rs.gram[b][b])
        if a < r or b < r:
            return Fraction(0)
        al, be = self.root_of(a), self.root_of(b)
        if any(x + y for x, y in zip(al, be)):
            return Fraction(0)
        return Fraction(2 * L, 2 * rs.norm2(al))

    def form(self, x: dict, y: dict) -> Fraction:
        return sum((ca * cb * self.form_basis(a, b) for a, ca in x.items() for b, cb in y.items()), Fraction(0))

    def omega_basis(self, a: int) -> tuple[int, int]:
        """Chevalley involution on a basis vector: returns (index, sign)."""
        if a < self.rank:
            return a, -1
        return self.index_of_root(_neg(self.root_of(a))), -1

    def jacobi_violations(self, triples=None) -> list:
        bad = []
        n = self.dim
        if triples is None:
            triples = itertools.combinations(range(n), 3)
        for a, b, c in triples:
            x, y, z = {a: 1}, {b: 1}, {c: 1}
            s: dict = {}
            for u, v, w in ((x, y, z), (y, z, x), (z, x, y)):
                for k, val in self.bracket(u, self.bracket(v, w)).items():
                    s[k] = s.get(k, 0) + val
            if any(s.values()):
                bad.append((a, b, c))
        return bad


# ---------------------------------------------------------------- Weyl dimension

def weyl_dim(rs: RootSystem, hw) -> int:
    """Weyl dimension formula; ``hw`` in fundamental-weight coordinates."""
    hw = tuple(hw)
    if len(hw) != rs.rank:
        raise ValueError(f"weight has {len(hw)} labels, rank is {rs.rank}")
    if any(x < 0 for x in hw):
        raise ValueError("highest weight must be dominant")
    num, den = 1, 1
    for a in rs.positive_roots:
        cv = rs.coroot(a)
        num *= sum(c * (l + 1) for c, l in zip(cv, hw))
        den *= sum(cv)
    d = Fraction(num) / Fraction(den)
    if d.denominator != 1:
        raise ArithmeticError(f"non-integral dimension {d}")
    return int(d)


def weyl_dim_table(rs: RootSystem, hws) -> list[tuple[tuple, int]]:
    return [(tuple(hw), weyl_dim(rs, hw)) for hw in hws]


def so16_table() -> list[dict]:
    """Dimensions, Dynkin labels and chirality tags of the so(16) irreps in the e9 level tables."""
    with resources.files("involutory").joinpath("data/so16_reps.json").open() as fh:
        return json.load(fh)


def weyl_orbit_roots(rs: RootSystem) -> set:
    """All roots as the Weyl orbit of the simple roots (independent of the closure above)."""
    seen = {tuple(int(i == j) for j in range(rs.rank)) for i in range(rs.rank)}
    todo = list(seen)
    while todo:
        a = todo.pop()
        for i in range(rs.rank):
            b = rs.reflect(a, i)
            if b not in seen:
                seen.add(b)
                todo.append(b)
    return seen
