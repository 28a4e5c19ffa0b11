"""Floating-point demonstration that the invariant-norm completion of k is not closed
under the bracket: sum_n f_n^2 diverges for eps < 1/4.

Here f_n(N) = sum_{m<n} a_m a_{n-m} + sum_{m<=N} a_m a_{n+m} with a_m = m^(-1/2-eps).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve


def _a(m, eps):
    return m ** (-0.5 - eps)


def f_n(n: int, N: int, eps: float, reverse: bool = False) -> float:
    if not 1 <= n <= N:
        raise ValueError("need 1 <= n <= N")
    if eps <= 0:
        raise ValueError("eps must be positive")
    first = range(1, n)
    second = range(1, N + 1)
    if reverse:
        first, second = reversed(first), reversed(second)
    s = 0.0
    for m in first:
        s += _a(m, eps) * _a(n - m, eps)
    for m in second:
        s += _a(m, eps) * _a(n + m, eps)
    return s


def f_all(N: int, eps: float) -> np.ndarray:
    """f_1..f_N (index n-1) via two FFT convolutions."""
    a = np.arange(1, 2 * N + 1, dtype=float) ** (-0.5 - eps)
    first = np.zeros(N)
    if N > 1:
        first[1:] = fftconvolve(a[:N], a[:N])[:N - 1]
    second = fftconvolve(a, a[:N][::-1])[N:2 * N]
    return first + second


def j_norm2(N: int, eps: float) -> float:
    """||J_N||^2 / C_0."""
    return float(np.sum(np.arange(1, N + 1, dtype=float) ** (-1 - 2 * eps)))


@dataclass
class DivergenceReport:
    eps: float
    rows: list = field(default_factory=list)  # (N, partial_sum, f_N, C1 fit)

    @property
    def Ns(self):
        return [r[0] for r in self.rows]

    @property
    def partial_sums(self):
        return [r[1] for r in self.rows]

    def slope(self, lo: float = 1e4, hi: float = 1e5) -> float:
        pts = [(math.log(N), math.log(S)) for N, S, *_ in self.rows if lo <= N <= hi]
        if len(pts) < 2:
            raise ValueError("need at least two points in the fit window")
        x, y = np.array(pts).T
        return float(np.polyfit(x, y, 1)[0])

    def tail_increment(self, lo: float = 1e4, hi: float = 1e5) -> float:
        inside = [S for N, S, *_ in self.rows if lo <= N <= hi]
        return max(inside) - min(inside)

    def monotone(self) -> bool:
        s = self.partial_sums
        return all(b >= a for a, b in zip(s, s[1:]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "partial_sum"])
        for N, S, *_ in self.rows:
            w.writerow([N, repr(S)])
        return buf.getvalue()


def default_grid(max_n: int, per_decade: int = 10, start: int = 100) -> list[int]:
    if max_n < start:
        return [max_n]
    k = math.log10(max_n / start)
    pts = np.logspace(math.log10(start), math.log10(max_n), int(round(k * per_decade)) + 1)
    return sorted({int(round(x)) for x in pts})


def divergence_table(eps: float, N_list) -> DivergenceReport:
    if eps <= 0:
        raise ValueError("eps must be positive")
    rep = DivergenceReport(eps)
    for N in sorted(N_list):
        f = f_all(N, eps)
        n = np.arange(1, N + 1, dtype=float)
        c1 = float(np.min(f * n ** (2 * eps)))
        rep.rows.append((N, float(np.sum(f * f)), float(f[-1]), c1))
    return rep
