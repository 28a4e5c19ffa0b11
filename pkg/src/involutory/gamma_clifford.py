"""Real so(16) gamma matrices as signed permutations.

``Gamma[I]`` (I = 1..16) maps the dotted spinor space to the undotted one,
i.e. its rows are indexed by A and its columns by A-dot, both 0..127.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, reduce

import numpy as np

from .exact_linalg import SparseMatrix

DIM = 128
N_GAMMA = 16


class RepeatedIndex(ValueError):
    pass


@dataclass(frozen=True)
class SignedPerm:
    """Matrix with entry ``sign[r]`` at ``(r, perm[r])`` and zeros elsewhere."""

    perm: tuple
    sign: tuple

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)), (1,) * n)

    @classmethod
    def from_dense(cls, m) -> "SignedPerm":
        m = np.asarray(m)
        perm, sign = [], []
        for row in m:
            nz = np.flatnonzero(row)
            if len(nz) != 1 or abs(row[nz[0]]) != 1:
                raise ValueError("not a signed permutation")
            perm.append(int(nz[0]))
            sign.append(int(row[nz[0]]))
        if len(set(perm)) != len(perm):
            raise ValueError("not a signed permutation")
        return cls(tuple(perm), tuple(sign))

    def __matmul__(self, other: "SignedPerm") -> "SignedPerm":
        p2, s2 = other.perm, other.sign
        return SignedPerm(tuple(p2[k] for k in self.perm),
                          tuple(s * s2[k] for s, k in zip(self.sign, self.perm)))

    def __neg__(self):
        return SignedPerm(self.perm, tuple(-s for s in self.sign))

    @property
    def T(self) -> "SignedPerm":
        n = len(self.perm)
        perm, sign = [0] * n, [0] * n
        for r, (c, s) in enumerate(zip(self.perm, self.sign)):
            perm[c], sign[c] = r, s
        return SignedPerm(tuple(perm), tuple(sign))

    def kron(self, other: "SignedPerm") -> "SignedPerm":
        m = len(other.perm)
        perm, sign = [], []
        for c1, s1 in zip(self.perm, self.sign):
            for c2, s2 in zip(other.perm, other.sign):
                perm.append(c1 * m + c2)
                sign.append(s1 * s2)
        return SignedPerm(tuple(perm), tuple(sign))

    def to_dense(self) -> np.ndarray:
        n = len(self.perm)
        m = np.zeros((n, n), dtype=np.int64)
        m[np.arange(n), self.perm] = self.sign
        return m

    def entry(self, r, c) -> int:
        return self.sign[r] if self.perm[r] == c else 0

    def to_sparse(self) -> SparseMatrix:
        n = len(self.perm)
        return SparseMatrix(n, n, tuple((r, c, s) for r, (c, s) in enumerate(zip(self.perm, self.sign))))


_one2 = SignedPerm.identity(2)
_eps = SignedPerm((1, 0), (1, -1))  # [[0,1],[-1,0]]
_s1 = SignedPerm((1, 0), (1, 1))
_s3 = SignedPerm((0, 1), (1, -1))


def _k(*ms):
    return reduce(SignedPerm.kron, ms)


def octonionic_units() -> list[SignedPerm]:
    """Seven real antisymmetric 8x8 matrices, mutually anticommuting, squaring to -1."""
    e, o = _eps, _one2
    return [_k(e, _s1, o), _k(e, _s3, o), _k(o, e, _s1), _k(o, e, _s3),
            _k(_s1, o, e), _k(_s3, o, e), _k(e, e, e)]


@dataclass(frozen=True)
class GammaSet:
    gammas: tuple  # Gamma^1..Gamma^16 stored at positions 0..15

    def __getitem__(self, I: int) -> SignedPerm:
        if not 1 <= I <= N_GAMMA:
            raise IndexError(I)
        return self.gammas[I - 1]

    @cached_property
    def transposed(self) -> tuple:
        return tuple(g.T for g in self.gammas)

    def two(self, I: int, J: int) -> SignedPerm | None:
        """Gamma^{IJ}_{AB}; None when I == J."""
        if I == J:
            return None
        return self[I] @ self.transposed[J - 1]

    def clifford_defects(self) -> list[tuple[int, int]]:
        bad = []
        ident = np.eye(DIM, dtype=np.int64)
        for I in range(1, N_GAMMA + 1):
            for J in range(I, N_GAMMA + 1):
                s = (self[I] @ self[J].T).to_dense() + (self[J] @ self[I].T).to_dense()
                if not np.array_equal(s, 2 * (I == J) * ident):
                    bad.append((I, J))
        return bad


def _ordered_product(g: GammaSet, indices, start_plain: bool) -> SignedPerm:
    out = None
    plain = start_plain
    for I in indices:
        m = g[I] if plain else g.transposed[I - 1]
        out = m if out is None else out @ m
        plain = not plain
    return out


def build_gammas() -> GammaSet:
    J = octonionic_units()
    one8 = SignedPerm.identity(8)
    mats = [_k(j, one8, _s3) for j in J] + [_k(one8, j, _s1) for j in J]
    mats.append(_k(one8, one8, _eps))
    mats.append(SignedPerm.identity(DIM))
    g = GammaSet(tuple(mats))
    # self-dual eight-form on the undotted block <=> Gamma^{1..16}_{AB} = +1
    top = _ordered_product(g, range(1, 17), True)
    if top.sign[0] < 0:
        g = GammaSet(tuple(m.T for m in mats))
    return g


def antisym_product(g: GammaSet, indices, block: str = "AB") -> SignedPerm:
    """Normalised antisymmetrised product Gamma^{I1...Ik} on the requested block.

    ``block`` is "AB" or "dAdB" for even k and "AdB" or "dAB" for odd k.
    For distinct indices the 1/k! average collapses to the ordered product.
    """
    indices = list(indices)
    if len(set(indices)) != len(indices):
        raise RepeatedIndex(f"repeated index in {indices}")
    k = len(indices)
    if not 1 <= k <= N_GAMMA:
        raise ValueError("need between 1 and 16 indices")
    order = sorted(range(k), key=lambda t: indices[t])
    sign = _perm_sign(order)
    sorted_idx = sorted(indices)
    allowed = ("AB", "dAdB") if k % 2 == 0 else ("AdB", "dAB")
    if block not in allowed:
        raise ValueError(f"block {block} not available for {k} indices")
    m = _ordered_product(g, sorted_idx, block in ("AB", "AdB"))
    return m if sign > 0 else -m


def _perm_sign(order) -> int:
    order = list(order)
    sign = 1
    for i in range(len(order)):
        while order[i] != i:
            j = order[i]
            order[i], order[j] = order[j], order[i]
            sign = -sign
    return sign


def brute_force_antisym(g: GammaSet, indices, block: str = "AB") -> np.ndarray:
    """(1/k!) sum over permutations with alternating plain/transposed factors (dense oracle)."""

    k = len(indices)
    acc = np.zeros((DIM, DIM), dtype=np.int64)
    for perm in itertools.permutations(range(k)):
        m = _ordered_product(g, [indices[p] for p in perm], block in ("AB", "AdB"))
        acc += _perm_sign(perm) * m.to_dense()
    q = math.factorial(k)
    if (acc % q).any():
        raise ArithmeticError("antisymmetrised product is not integral")
    return acc // q
