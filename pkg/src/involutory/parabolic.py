"""Parabolic model N(P_N): truncated power series in u with values in g.

Even degrees carry k-valued coefficients and odd degrees p-valued ones.
Elements are dicts ``{(degree, u): coeff}`` with unified classical indices.
The maps rho_+- send the filtered model onto N(P_N) via the Taylor
coefficients a^{(n)}_j of (t^n +- t^-n) around t = 1, u = (1-t)/(1+t).
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .classical_decomposition import ClassicalDecomposition, _acc
from .exact_linalg import Echelon
from .filtered_k import HALF, CheckResult, FilteredElement, bracket_terms, generators, virasoro_terms


class TruncationMismatch(ValueError):
    pass


# ---------------------------------------------------------------- coefficients

def _b(n: int, j: int) -> int:
    """Coefficient of u^{2j} in (1 - u^2)^{-n}."""
    if j < 0:
        return 0
    if n == 0:
        return int(j == 0)
    return comb(n + j - 1, j)


@lru_cache(maxsize=None)
def coeff(n: int, j: int) -> int:
    """a^{(n)}_j as an exact integer."""
    if n < 0 or j < 0:
        raise ValueError("n and j must be nonnegative")
    k, odd = divmod(j, 2)
    if not odd:
        return 2 * sum(comb(2 * n, 2 * l) * _b(n, k - l) for l in range(n + 1))
    return -2 * sum(comb(2 * n, 2 * l + 1) * _b(n, k - l) for l in range(n))


class CoeffTable:
    """Memoised a^{(n)}_j; reads are lock-free, fills are serialised."""

    def __init__(self, overrides: dict | None = None):
        self._values: dict = dict(overrides or {})
        self._lock = threading.Lock()

    def __call__(self, n: int, j: int) -> int:
        v = self._values.get((n, j))
        if v is None:
            with self._lock:
                v = self._values.setdefault((n, j), coeff(n, j))
        return v

    def mutated(self, n: int, j: int, delta: int) -> "CoeffTable":
        return CoeffTable({**self._values, (n, j): self(n, j) + delta})


DEFAULT_TABLE = CoeffTable()


def closed_form(n: int, j: int) -> Fraction | None:
    """Low-order closed forms for k >= 1, used as an independent check."""
    k, odd = divmod(j, 2)
    F = Fraction
    if not odd and k >= 1:
        return {1: F(4), 2: F(16 * k), 3: F(32 * k * k + 4), 4: F(128, 3) * k ** 3 + F(64, 3) * k}.get(n)
    if odd and k >= 1:
        return {1: F(-4), 2: F(-16 * k - 8), 3: F(-32 * k * k - 32 * k - 12),
                4: -F(128, 3) * k ** 3 - 64 * k * k - F(160, 3) * k - 16}.get(n)
    return None


def series_coefficients(n: int, jmax: int, sign: int = 1) -> list[Fraction]:
    """Taylor coefficients of t^n + sign t^-n in u, independent of :func:`coeff`.

    Uses exact power-series arithmetic for t = (1-u)/(1+u).
    """
    def mul(a, b):
        out = [Fraction(0)] * (jmax + 1)
        for i, x in enumerate(a):
            if x:
                for j in range(jmax + 1 - i):
                    out[i + j] += x * b[j]
        return out

    t = [Fraction(1)] + [Fraction(2 * (-1) ** j) for j in range(1, jmax + 1)]  # (1-u)/(1+u)
    tinv = [Fraction(1)] + [Fraction(2) for _ in range(jmax)]  # (1+u)/(1-u)
    p, q = [Fraction(1)] + [Fraction(0)] * jmax, [Fraction(1)] + [Fraction(0)] * jmax
    for _ in range(n):
        p, q = mul(p, t), mul(q, tinv)
    return [x + sign * y for x, y in zip(p, q)]


def check_convolutions(m_max: int, n_max: int, k_max: int, table: CoeffTable = DEFAULT_TABLE) -> list[CheckResult]:
    out = []
    for twisted in (False, True):
        def a(n, j):
            return (-1) ** n * table(n, j) if twisted else table(n, j)

        fails = {"even-even": [], "even-odd": [], "odd-odd": []}
        for m in range(1, m_max + 1):
            for n in range(1, n_max + 1):
                d = abs(m - n)
                s = (n > m) - (n < m)
                for k in range(k_max + 1):
                    lhs = sum(a(m, 2 * l) * a(n, 2 * (k - l)) for l in range(k + 1))
                    if lhs != a(m + n, 2 * k) + a(d, 2 * k):
                        fails["even-even"].append([m, n, k])
                    lhs = sum(a(m, 2 * l) * a(n, 2 * (k - l) + 1) for l in range(k + 1))
                    if lhs != a(m + n, 2 * k + 1) + s * a(d, 2 * k + 1):
                        fails["even-odd"].append([m, n, k])
                    lhs = sum(a(m, 2 * l + 1) * a(n, 2 * (k - l) - 1) for l in range(k))
                    if lhs != a(m + n, 2 * k) - a(d, 2 * k):
                        fails["odd-odd"].append([m, n, k])
        tag = "twisted" if twisted else "plain"
        for name, f in fails.items():
            out.append(CheckResult(f"lemma1-{name}-{tag}", "pass" if not f else "fail",
                                   {"m_max": m_max, "n_max": n_max, "k_max": k_max, "failures": f[:20],
                                    "n_failures": len(f)}))
    return out


def finite_difference_degree(n: int, kmax: int = 30, table: CoeffTable = DEFAULT_TABLE) -> int:
    """Degree of the polynomial interpolating k -> a^{(n)}_{2k} on k = 1..kmax (-1 for zero)."""
    seq = [table(n, 2 * k) for k in range(1, kmax + 1)]
    for d in range(len(seq)):
        if all(x == 0 for x in seq):
            return d - 1
        if len(set(seq)) == 1:
            return d
        seq = [b - a for a, b in zip(seq, seq[1:])]
    return len(seq)


# ---------------------------------------------------------------- elements

@dataclass
class ParabolicElement:
    dec: ClassicalDecomposition
    N: int
    terms: dict = field(default_factory=dict)  # (degree, u) -> coeff

    def __post_init__(self):
        dk = self.dec.dim_k
        for (d, u), c in list(self.terms.items()):
            if d > self.N or d < 0:
                raise TruncationMismatch(f"degree {d} outside 0..{self.N}")
            if (d % 2 == 0) != (u < dk):
                raise ValueError("parity rule violated: even degrees are k-valued, odd ones p-valued")
            if not c:
                del self.terms[(d, u)]

    def __eq__(self, other):
        return isinstance(other, ParabolicElement) and self.N == other.N and self.terms == other.terms

    def to_json(self) -> dict:
        from .exact_linalg import format_scalar
        dk = self.dec.dim_k
        return {"N": self.N, "terms": [{"degree": d, "index": u if u < dk else u - dk, "coeff": format_scalar(c)}
                                       for (d, u), c in sorted(self.terms.items())]}


def dim_parabolic(dec: ClassicalDecomposition, N: int) -> int:
    return (N // 2 + 1) * dec.dim_k + ((N - 1) // 2 + 1 if N >= 1 else 0) * dec.dim_p


def parabolic_basis(dec: ClassicalDecomposition, N: int) -> list[tuple[int, int]]:
    out = []
    for d in range(N + 1):
        if d % 2 == 0:
            out += [(d, a) for a in range(dec.dim_k)]
        else:
            out += [(d, dec.dim_k + i) for i in range(dec.dim_p)]
    return out


def pbracket_terms(dec: ClassicalDecomposition, N: int, a: dict, b: dict) -> dict:
    table = dec.table
    out: dict = {}
    for (d1, u), cu in a.items():
        for (d2, v), cv in b.items():
            d = d1 + d2
            if d > N:
                continue
            r = table.get((u, v))
            if r:
                c = cu * cv
                for w, x in r.items():
                    _acc(out, (d, w), c * x)
    return out


def parabolic_bracket(dec: ClassicalDecomposition, a: ParabolicElement, b: ParabolicElement) -> ParabolicElement:
    if a.N != b.N:
        raise TruncationMismatch(f"truncations {a.N} and {b.N} differ")
    return ParabolicElement(dec, a.N, pbracket_terms(dec, a.N, a.terms, b.terms))


# ---------------------------------------------------------------- rho

def rho_terms(dec: ClassicalDecomposition, sign: int, N: int, terms: dict,
              table: CoeffTable = DEFAULT_TABLE) -> dict:
    dk = dec.dim_k
    out: dict = {}
    for (n, u), c in terms.items():
        f = c * HALF * (sign ** n)
        start = 0 if u < dk else 1
        for j in range(start, N + 1, 2):
            a = table(n, j)
            if a:
                _acc(out, (j, u), f * a)
    return out


def rho(dec: ClassicalDecomposition, sign: int, N: int, a: FilteredElement,
        table: CoeffTable = DEFAULT_TABLE) -> ParabolicElement:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return ParabolicElement(dec, N, rho_terms(dec, sign, N, a.terms, table))


def project(N: int, terms: dict) -> dict:
    return {k: v for k, v in terms.items() if k[0] <= N}


def kernel_test(dec: ClassicalDecomposition, sign: int, N: int, a: FilteredElement,
                table: CoeffTable = DEFAULT_TABLE) -> bool:
    direct = not rho_terms(dec, sign, N, a.terms, table)
    # linear conditions sum_i b_i (+-1)^{m_i} a^{(m_i)}_j = 0 for each classical index and j <= N
    by_index: dict = {}
    for (m, u), c in a.terms.items():
        by_index.setdefault(u, []).append((m, c))
    linear = True
    dk = dec.dim_k
    for u, items in by_index.items():
        for j in range(0 if u < dk else 1, N + 1, 2):
            if sum(c * sign ** m * table(m, j) for m, c in items):
                linear = False
    if direct != linear:
        raise AssertionError("direct evaluation and linear conditions disagree")
    return direct


def check_homomorphism(dec: ClassicalDecomposition, sign: int, N: int, m_max: int,
                       table: CoeffTable = DEFAULT_TABLE, pairs=None) -> CheckResult:
    gens = generators(dec, m_max)
    images = {g: rho_terms(dec, sign, N, {g: 1}, table) for g in gens}
    if pairs is None:
        pairs = ((gens[i], gens[j]) for i in range(len(gens)) for j in range(i, len(gens)))
    checked, fails = 0, []
    for a, b in pairs:
        lhs = rho_terms(dec, sign, N, bracket_terms(dec, {a: 1}, {b: 1}), table)
        rhs = pbracket_terms(dec, N, images[a], images[b])
        checked += 1
        if lhs != rhs:
            fails.append([list(a), list(b)])
    return CheckResult(f"homomorphism-{dec.name}-{'+' if sign > 0 else '-'}",
                       "pass" if not fails else "fail",
                       {"N": N, "m_max": m_max, "pairs_checked": checked, "failures": fails[:20],
                        "n_failures": len(fails)})


def _column_map(dec, N):
    return {k: i for i, k in enumerate(parabolic_basis(dec, N))}


def check_surjectivity(dec: ClassicalDecomposition, sign: int, N: int, m_max: int | None = None,
                       table: CoeffTable = DEFAULT_TABLE) -> CheckResult:
    target = dim_parabolic(dec, N)
    if m_max is None:
        m_max = N + 2
    cols = _column_map(dec, N)
    ech = Echelon()
    found = None
    for n in range(m_max + 1):
        keys = [(n, a) for a in range(dec.dim_k)]
        if n:
            keys += [(n, dec.dim_k + i) for i in range(dec.dim_p)]
        for g in keys:
            ech.add({cols[k]: v for k, v in rho_terms(dec, sign, N, {g: 1}, table).items()})
        if len(ech) == target:
            found = n
            break
    return CheckResult(f"surjectivity-{dec.name}-N{N}", "pass" if found is not None else "fail",
                       {"N": N, "dim": target, "rank": len(ech), "minimal_m_max": found})


def injectivity_rank(dec: ClassicalDecomposition, sign: int, n_max: int, N: int, u: int = 0,
                     table: CoeffTable = DEFAULT_TABLE) -> int:
    """Rank of {rho^{(N)}(X_n(e_u)) : n <= n_max} (finite shadow of injectivity)."""
    ech = Echelon()
    for n in range(n_max + 1):
        ech.add({k[0]: v for k, v in rho_terms(dec, sign, N, {(n, u): 1}, table).items()})
    return len(ech)


# ---------------------------------------------------------------- radical

def _derived(dec, N, basis: list[dict]) -> list[dict]:
    cols = _column_map(dec, N)
    inv = {i: k for k, i in cols.items()}
    ech = Echelon()
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            br = pbracket_terms(dec, N, basis[i], basis[j])
            if br:
                ech.add({cols[k]: v for k, v in br.items()})
    return [{inv[c]: v for c, v in row.items()} for _, row in sorted(ech.pivots.values(), key=lambda t: t[0])]


def radical_basis(dec: ClassicalDecomposition, N: int) -> list[dict]:
    out = [{(0, u): c for u, c in z.items()} for z in dec.center]
    out += [{k: Fraction(1)} for k in parabolic_basis(dec, N) if k[0] > 0]
    return out


def killing_form_quotient(dec: ClassicalDecomposition) -> np.ndarray:
    """Killing form of k / z(k) in a complement basis of the centre.

    Returned as an integer matrix equal to ``scale**2`` times the form.
    """
    import math

    ech = Echelon()
    for z in dec.center:
        ech.add(z)
    comp = [a for a in range(dec.dim_k) if a not in ech.pivots]
    pos = {a: i for i, a in enumerate(comp)}
    n = len(comp)
    entries = []
    for i, a in enumerate(comp):
        for b in comp:
            for c, v in ech.reduce(dec.c_kk.get((a, b), {})).items():
                entries.append((i, pos[c], pos[b], Fraction(v)))
    scale = math.lcm(1, *(v.denominator for *_, v in entries))
    ad = np.zeros((n, n, n), dtype=np.int64)
    for i, r, c, v in entries:
        ad[i, r, c] = int(v * scale)
    flat = ad.reshape(n, n * n)
    flat_t = ad.transpose(0, 2, 1).reshape(n, n * n)
    return flat @ flat_t.T


def radical_check(dec: ClassicalDecomposition, N: int) -> list[CheckResult]:
    from .exact_linalg import SparseMatrix, rank_exact

    J = radical_basis(dec, N)
    full = [{k: Fraction(1)} for k in parabolic_basis(dec, N)]
    centre = Echelon()
    for z in dec.center:
        centre.add(z)
    dk = dec.dim_k

    def in_J(x: dict) -> bool:
        deg0 = {u: c for (d, u), c in x.items() if d == 0}
        return centre.contains(deg0)

    not_closed = 0
    for x in full:
        for y in J:
            if not in_J(pbracket_terms(dec, N, x, y)):
                not_closed += 1
    res = [CheckResult("radical-ideal", "pass" if not not_closed else "fail",
                       {"N": N, "dim_J": len(J), "violations": not_closed})]
    series = [len(J)]
    cur = J
    steps = 0
    while cur and steps <= N + 2:
        cur = _derived(dec, N, cur)
        series.append(len(cur))
        steps += 1
    res.append(CheckResult("radical-solvable", "pass" if not cur else "fail",
                           {"derived_series_dims": series, "steps": steps}))
    K = killing_form_quotient(dec)
    n = K.shape[0]
    rank = rank_exact(SparseMatrix.from_dense(K.tolist())) if n else 0
    res.append(CheckResult("quotient-killing-nondegenerate", "pass" if rank == n else "fail",
                           {"quotient_dim": n, "killing_rank": rank, "dim_parabolic": dim_parabolic(dec, N),
                            "levi_dim_expected": dk - len(dec.center)}))
    return res


# ---------------------------------------------------------------- Virasoro

def virasoro_profile(m: int, N: int, sign: int = 1) -> list[Fraction]:
    """Coefficients phi_j with K_m = (sum_j phi_j u^j) d/du on N(P_N).

    K_m = -(t^{m+1} - t^{1-m}) d/dt rewritten with t = +-(1-u)/(1+u) gives
    -(+-1)^m (1/2) (1-u^2)^{1-m} ((1+u)^{2m} - (1-u)^{2m}) d/du.
    """
    L = N + 2
    poly = [Fraction(0)] * L
    for j in range(min(2 * m, L - 1) + 1):
        poly[j] = Fraction(comb(2 * m, j) * (1 - (-1) ** j))
    # (1 - u^2)^{1-m}
    e = 1 - m
    ser = [Fraction(0)] * L
    if e >= 0:
        for l in range(e + 1):
            if 2 * l < L:
                ser[2 * l] = Fraction((-1) ** l * comb(e, l))
    else:
        for l in range(L // 2 + 1):
            if 2 * l < L:
                ser[2 * l] = Fraction(_b(-e, l))
    out = [Fraction(0)] * L
    for i, x in enumerate(poly):
        if x:
            for j in range(L - i):
                out[i + j] += x * ser[j]
    f = -Fraction(sign ** m, 2)
    return [f * x for x in out]


def virasoro_parabolic(m: int, element: ParabolicElement, N: int | None = None, sign: int = 1) -> ParabolicElement:
    N = element.N if N is None else N
    phi = virasoro_profile(m, N, sign)
    out: dict = {}
    for (d, u), c in element.terms.items():
        if not d:
            continue
        for j, p in enumerate(phi):
            if p and d - 1 + j <= N:
                _acc(out, (d - 1 + j, u), d * c * p)
    return ParabolicElement(element.dec, N, out)


def check_virasoro_intertwining(dec: ClassicalDecomposition, sign: int, N: int, m_max: int, n_max: int) -> CheckResult:
    fails = []
    for m in range(1, m_max + 1):
        for g in generators(dec, n_max):
            lhs = rho_terms(dec, sign, N, virasoro_terms({m: 1}, {g: 1}, dec.dim_k))
            img = ParabolicElement(dec, N, rho_terms(dec, sign, N, {g: 1}))
            rhs = virasoro_parabolic(m, img, N, sign).terms
            if lhs != rhs:
                fails.append([m, list(g)])
    return CheckResult("virasoro-intertwining", "pass" if not fails else "fail",
                       {"N": N, "failures": fails[:20], "n_failures": len(fails)})


# ---------------------------------------------------------------- Berman (parabolic)

def berman_check_parabolic(dec: ClassicalDecomposition, g, N: int = 8, k_max: int = 4) -> list[CheckResult]:
    """Degree-2k Berman relation with constant 448 (tensor-product convention) for k = 1..k_max."""
    from .classical_decomposition import so16_index
    from .gamma_clifford import antisym_product

    dk = dec.dim_k
    idx = so16_index()
    out = []
    for k in range(1, k_max + 1):
        if 2 * k > N:
            break
        fails = []
        for I in range(1, 17):
            for J in range(I + 1, 17):
                lhs: dict = {}
                G = g.two(I, J)
                for k1 in range(k):
                    k2 = k - 1 - k1
                    for A in range(128):
                        B, s = G.perm[A], G.sign[A]
                        for key, v in pbracket_terms(dec, N, {(2 * k1 + 1, dk + A): 1},
                                                     {(2 * k2 + 1, dk + B): 1}).items():
                            _acc(lhs, key, 7 * s * v)
                for k1 in range(1, k):
                    for K in range(1, 17):
                        if K in (I, J):
                            continue
                        a, sa = idx[(I, K)]
                        b, sb = idx[(K, J)]
                        for key, v in pbracket_terms(dec, N, {(2 * k1, a): 1}, {(2 * (k - k1), b): 1}).items():
                            _acc(lhs, key, -32 * sa * sb * v)
                a, sgn_ = idx[(I, J)]
                if lhs != {(2 * k, a): Fraction(448)}:
                    fails.append([I, J])
        six = antisym_product(g, range(1, 7), "AB")
        acc: dict = {}
        for k1 in range(k):
            for A in range(128):
                B, s = six.perm[A], six.sign[A]
                for key, v in pbracket_terms(dec, N, {(2 * k1 + 1, dk + A): 1},
                                             {(2 * (k - 1 - k1) + 1, dk + B): 1}).items():
                    _acc(acc, key, s * v)
        status = "pass" if not fails and not acc else "fail"
        out.append(CheckResult(f"ber162-k{k}", status, {"N": N, "failures": fails[:20], "n_failures": len(fails),
                                                        "sixform_zero": not acc}))
    return out


def jacobi_parabolic(dec: ClassicalDecomposition, N: int, samples: int | None = None, seed: int = 0) -> CheckResult:
    """Jacobi and antisymmetry of the truncated bracket; exhaustive when ``samples`` is None."""
    import itertools
    import random

    from .filtered_k import _jacobi_sum

    basis = parabolic_basis(dec, N)
    if samples is None:
        triples = itertools.combinations(basis, 3)
        pairs = itertools.combinations(basis, 2)
    else:
        rng = random.Random(seed)
        triples = ((rng.choice(basis), rng.choice(basis), rng.choice(basis)) for _ in range(samples))
        pairs = ((rng.choice(basis), rng.choice(basis)) for _ in range(samples))

    def br(a, b):
        return pbracket_terms(dec, N, a, b)

    jac = anti = checked = 0
    for a, b, c in triples:
        checked += 1
        jac += bool(_jacobi_sum(br, {a: 1}, {b: 1}, {c: 1}))
    for a, b in pairs:
        s = br({a: 1}, {b: 1})
        for k, v in br({b: 1}, {a: 1}).items():
            _acc(s, k, v)
        anti += bool(s)
    return CheckResult(f"jacobi-parabolic-{dec.name}", "pass" if not jac and not anti else "fail",
                       {"N": N, "triples": checked, "exhaustive": samples is None,
                        "jacobi_failures": jac, "antisymmetry_failures": anti, "seed": seed})
