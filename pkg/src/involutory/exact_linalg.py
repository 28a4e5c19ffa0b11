"""Exact scalars, sparse vectors/matrices and rank computations.

Scalars are :class:`fractions.Fraction` for rational data and
:class:`GaussianRational` when a factor of ``i`` is needed.  Large dense
rank problems are handed to FLINT (``python-flint``); everything else runs
through a small sparse Gaussian elimination written here.
"""
from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import flint

DEFAULT_PRIME = 2**61 - 1


class DimensionMismatch(ValueError):
    pass


class DenominatorDivisibleByP(ArithmeticError):
    pass


class GaussianRational:
    """Element ``re + im*i`` of Q(i) with Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return self * GaussianRational(o.re / n, -o.im / n)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({format_scalar(self)!r})"

    def is_real(self):
        return self.im == 0


I = GaussianRational(0, 1)

Scalar = Union[Fraction, GaussianRational]


def as_scalar(x) -> Scalar:
    if isinstance(x, GaussianRational):
        return x if x.im else x.re
    return Fraction(x)


def _fmt_q(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    """Canonical text form: ``"num/den"`` or ``"a/b+c/d*i"``."""
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return _fmt_q(x.re)
        sign = "-" if x.im < 0 else "+"
        return f"{_fmt_q(x.re)}{sign}{_fmt_q(abs(x.im))}*i"
    return _fmt_q(Fraction(x))


_GAUSS_RE = re.compile(r"^([+-]?\d+(?:/\d+)?)([+-])(\d+(?:/\d+)?)\*i$")


def parse_scalar(s: str) -> Scalar:
    s = s.strip().replace(" ", "")
    m = _GAUSS_RE.match(s)
    if m:
        im = Fraction(m.group(3))
        if m.group(2) == "-":
            im = -im
        return as_scalar(GaussianRational(Fraction(m.group(1)), im))
    if s.endswith("*i"):
        return as_scalar(GaussianRational(0, Fraction(s[:-2])))
    return Fraction(s)


def sqrt_minus_one_mod(p: int) -> int:
    if p % 4 != 1:
        raise ValueError(f"-1 is not a square mod {p}")
    for a in range(2, p):
        r = pow(a, (p - 1) // 4, p)
        if r * r % p == p - 1:
            return r
    raise ValueError("no square root of -1 found")  # pragma: no cover


def to_mod_p(x, p: int, i_mod_p: int | None = None) -> int:
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return to_mod_p(x.re, p)
        if i_mod_p is None:
            i_mod_p = sqrt_minus_one_mod(p)
        return (to_mod_p(x.re, p) + i_mod_p * to_mod_p(x.im, p)) % p
    x = Fraction(x)
    if x.denominator % p == 0:
        raise DenominatorDivisibleByP(f"denominator {x.denominator} divisible by {p}")
    return x.numerator * pow(x.denominator, -1, p) % p


# ---------------------------------------------------------------- containers

@dataclass(frozen=True)
class SparseVector:
    dim: int
    entries: tuple  # sorted ((index, coefficient), ...), no zeros

    @classmethod
    def from_dict(cls, dim: int, d: Mapping[int, Scalar]) -> "SparseVector":
        items = tuple(sorted((k, v) for k, v in d.items() if v))
        if items and not (0 <= items[0][0] and items[-1][0] < dim):
            raise DimensionMismatch("index out of range")
        return cls(dim, items)

    def to_dict(self) -> dict:
        return dict(self.entries)


@dataclass(frozen=True)
class SparseMatrix:
    """Triplet-list matrix; ``entries`` is a tuple of ``(row, col, value)``."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        for r, c, _ in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise DimensionMismatch(f"entry ({r},{c}) outside {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Mapping[int, Scalar]], cols: int) -> "SparseMatrix":
        ent = []
        for r, row in enumerate(rows):
            for c in sorted(row):
                if row[c]:
                    ent.append((r, c, row[c]))
        return cls(len(rows), cols, tuple(ent))

    @classmethod
    def from_dense(cls, dense) -> "SparseMatrix":
        dense = [list(r) for r in dense]
        cols = len(dense[0]) if dense else 0
        return cls.from_rows([{c: as_scalar(v) for c, v in enumerate(r) if v} for r in dense], cols)

    def row_dicts(self) -> list[dict]:
        out = [dict() for _ in range(self.rows)]
        for r, c, v in self.entries:
            if v:
                out[r][c] = out[r].get(c, 0) + v
        return [{c: v for c, v in row.items() if v} for row in out]

    def to_dense(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for r, c, v in self.entries:
            out[r][c] += v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, tuple((c, r, v) for r, c, v in self.entries))

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[r, c, format_scalar(v)] for r, c, v in sorted(self.entries, key=lambda e: e[:2])]}

    @classmethod
    def from_json(cls, data: Mapping) -> "SparseMatrix":
        return cls(int(data["rows"]), int(data["cols"]),
                   tuple((int(r), int(c), parse_scalar(str(v))) for r, c, v in data["entries"]))


# ---------------------------------------------------------------- elimination

class Echelon:
    """Incremental row echelon form over an exact field (Q or Q(i)).

    Pivot rows are normalised to 1 at their pivot column.  A new row only ever
    picks up pivot columns created after the one being eliminated, so a heap
    ordered by creation time reduces it in a single sweep.
    """

    def __init__(self):
        self.pivots: dict[int, tuple[int, dict]] = {}  # col -> (order, row)

    def __len__(self):
        return len(self.pivots)

    def reduce(self, row: Mapping[int, Scalar]) -> dict:
        row = {c: v for c, v in row.items() if v}
        piv = self.pivots
        heap = [(piv[c][0], c) for c in row if c in piv]
        heapq.heapify(heap)
        while heap:
            _, c = heapq.heappop(heap)
            f = row.get(c)
            if not f:
                continue
            for cc, vv in piv[c][1].items():
                nv = row.get(cc, 0) - f * vv
                if nv:
                    if cc not in row and cc in piv:
                        heapq.heappush(heap, (piv[cc][0], cc))
                    row[cc] = nv
                else:
                    row.pop(cc, None)
        return row

    def add(self, row: Mapping[int, Scalar]) -> bool:
        r = self.reduce(row)
        if not r:
            return False
        c = min(r)
        inv = 1 / r[c] if not isinstance(r[c], int) else Fraction(1, r[c])
        self.pivots[c] = (len(self.pivots), {k: v * inv for k, v in r.items()})
        return True

    def contains(self, row: Mapping[int, Scalar]) -> bool:
        return not self.reduce(row)


class EchelonModP:
    """Same as :class:`Echelon` with integer arithmetic modulo a prime."""

    def __init__(self, p: int = DEFAULT_PRIME):
        self.p = p
        self.pivots: dict[int, tuple[int, dict]] = {}

    def __len__(self):
        return len(self.pivots)

    def reduce(self, row: Mapping[int, int]) -> dict:
        p = self.p
        row = {c: v % p for c, v in row.items() if v % p}
        piv = self.pivots
        heap = [(piv[c][0], c) for c in row if c in piv]
        heapq.heapify(heap)
        while heap:
            _, c = heapq.heappop(heap)
            f = row.get(c)
            if not f:
                continue
            for cc, vv in piv[c][1].items():
                nv = (row.get(cc, 0) - f * vv) % p
                if nv:
                    if cc not in row and cc in piv:
                        heapq.heappush(heap, (piv[cc][0], cc))
                    row[cc] = nv
                else:
                    row.pop(cc, None)
        return row

    def add(self, row: Mapping[int, int]) -> bool:
        r = self.reduce(row)
        if not r:
            return False
        c = min(r)
        inv = pow(r[c], -1, self.p)
        self.pivots[c] = (len(self.pivots), {k: v * inv % self.p for k, v in r.items()})
        return True

    def contains(self, row: Mapping[int, int]) -> bool:
        return not self.reduce(row)


def _sorted_rows(m: SparseMatrix) -> list[dict]:
    return sorted(m.row_dicts(), key=len)


def rank_exact(m: SparseMatrix) -> int:
    ech = Echelon()
    for row in _sorted_rows(m):
        ech.add(row)
    return len(ech)


def rank_mod_p(m: SparseMatrix, p: int = DEFAULT_PRIME) -> int:
    ip = None
    if any(isinstance(v, GaussianRational) and v.im for _, _, v in m.entries):
        ip = sqrt_minus_one_mod(p)
    ech = EchelonModP(p)
    for row in _sorted_rows(m):
        ech.add({c: to_mod_p(v, p, ip) for c, v in row.items()})
    return len(ech)


def in_span(basis: Sequence[SparseVector], v: SparseVector) -> bool:
    for b in basis:
        if b.dim != v.dim:
            raise DimensionMismatch(f"dimension {b.dim} != {v.dim}")
    ech = Echelon()
    for b in basis:
        ech.add(b.to_dict())
    return ech.contains(v.to_dict())


def kernel_dimension(m: SparseMatrix, exact: bool = True, p: int = DEFAULT_PRIME) -> int:
    return m.cols - (rank_exact(m) if exact else rank_mod_p(m, p))


# ---------------------------------------------------------------- dense (FLINT)

def dense_rank_mod_p(rows: Iterable[Mapping[int, int]], ncols: int, p: int = DEFAULT_PRIME) -> int:
    rows = list(rows)
    if not rows or not ncols:
        return 0
    m = flint.nmod_mat(len(rows), ncols, p)
    for r, row in enumerate(rows):
        for c, v in row.items():
            m[r, c] = v % p
    return m.rank()


def dense_rref_mod_p(rows: Sequence[Mapping[int, int]], ncols: int, p: int = DEFAULT_PRIME):
    """Return ``(rank, pivot_rows)`` where pivot_rows are dicts in RREF."""
    if not rows or not ncols:
        return 0, []
    m = flint.nmod_mat(len(rows), ncols, p)
    for r, row in enumerate(rows):
        for c, v in row.items():
            m[r, c] = v % p
    red, rank = m.rref()
    out = []
    for r in range(rank):
        out.append({c: int(red[r, c]) for c in range(ncols) if int(red[r, c])})
    return rank, out


def dense_rank_exact(rows: Sequence[Mapping[int, Fraction]], ncols: int) -> int:
    if not rows or not ncols:
        return 0
    m = flint.fmpq_mat(len(rows), ncols)
    for r, row in enumerate(rows):
        for c, v in row.items():
            v = Fraction(v)
            m[r, c] = flint.fmpq(v.numerator, v.denominator)
    return m.rank()
