"""Filtered model of k: elements are combinations of

    X_m(x) = 1/2 (t^m + t^-m) (x)   (x in k-ring, m >= 0)
    Y_m(y) = 1/2 (t^m - t^-m) (y)   (y in p-ring, m >= 1)

stored as dicts ``{(m, u): coeff}`` with ``u`` a unified classical index
(see :mod:`classical_decomposition`); the sector follows from ``u``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .classical_decomposition import ClassicalDecomposition, _acc, so16_index
from .gamma_clifford import GammaSet, antisym_product

HALF = Fraction(1, 2)


class DecompositionMismatch(ValueError):
    pass


def sgn(x: int) -> int:
    return (x > 0) - (x < 0)


@dataclass
class FilteredElement:
    dec: ClassicalDecomposition
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        dk = self.dec.dim_k
        for (m, u), c in list(self.terms.items()):
            if m < 0:
                raise ValueError("negative mode")
            if u >= dk and m == 0:
                raise ValueError("Y-sector element with mode 0")
            if not c:
                del self.terms[(m, u)]

    @classmethod
    def X(cls, dec, m, a, c=1):
        return cls(dec, {(m, a): Fraction(c)})

    @classmethod
    def Y(cls, dec, m, i, c=1):
        """``i`` indexes p (0-based)."""
        return cls(dec, {(m, dec.dim_k + i): Fraction(c)})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return FilteredElement(self.dec, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return FilteredElement(self.dec, {k: v * c for k, v in self.terms.items() if v * c})

    def __eq__(self, other):
        return isinstance(other, FilteredElement) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def to_json(self) -> list:
        from .exact_linalg import format_scalar
        dk = self.dec.dim_k
        return [{"sector": "X" if u < dk else "Y", "mode": m, "index": u if u < dk else u - dk,
                 "coeff": format_scalar(c)} for (m, u), c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, dec, data) -> "FilteredElement":
        from .exact_linalg import parse_scalar
        terms: dict = {}
        for t in data:
            u = t["index"] + (dec.dim_k if t["sector"] == "Y" else 0)
            _acc(terms, (int(t["mode"]), u), parse_scalar(str(t["coeff"])))
        return cls(dec, terms)


def bracket_terms(dec: ClassicalDecomposition, a: dict, b: dict) -> dict:
    """Bracket on raw term dicts; see :func:`bracket_filtered`."""
    dk = dec.dim_k
    table = dec.table
    out: dict = {}
    for (m, u), cu in a.items():
        for (n, v), cv in b.items():
            r = table.get((u, v))
            if not r:
                continue
            c = cu * cv * HALF
            s, d = m + n, abs(m - n)
            if u < dk and v < dk:
                for w, x in r.items():
                    _acc(out, (s, w), c * x)
                    _acc(out, (d, w), c * x)
            elif u >= dk and v >= dk:
                for w, x in r.items():
                    _acc(out, (s, w), c * x)
                    _acc(out, (d, w), -c * x)
            else:
                # one X and one Y: Y_{m+n} plus a sign-weighted Y_{|m-n|}
                sg = -sgn(m - n) if u < dk else sgn(m - n)
                for w, x in r.items():
                    _acc(out, (s, w), c * x)
                    if d and sg:
                        _acc(out, (d, w), sg * c * x)
    return out


def bracket_filtered(dec: ClassicalDecomposition, a: FilteredElement, b: FilteredElement) -> FilteredElement:
    if a.dec is not dec or b.dec is not dec:
        raise DecompositionMismatch("elements belong to a different decomposition")
    return FilteredElement(dec, bracket_terms(dec, a.terms, b.terms))


# ---------------------------------------------------------------- Laurent oracle

def to_laurent(dec: ClassicalDecomposition, terms: dict) -> dict:
    """Expand into honest loop elements ``{(power, u): coeff}``."""
    dk = dec.dim_k
    out: dict = {}
    for (m, u), c in terms.items():
        s = 1 if u < dk else -1
        if m == 0:
            _acc(out, (0, u), c)  # X_0 = x; Y_0 never stored
        else:
            _acc(out, (m, u), c * HALF)
            _acc(out, (-m, u), s * c * HALF)
    return out


def from_laurent(dec: ClassicalDecomposition, loop: dict) -> dict:
    """Inverse of :func:`to_laurent`; raises if the input is not omega-fixed."""
    dk = dec.dim_k
    out: dict = {}
    for (p, u), c in loop.items():
        s = 1 if u < dk else -1
        if p == 0:
            if u >= dk:
                raise ValueError("p-valued constant term is not in k")
            _acc(out, (0, u), c)
        elif p > 0:
            if loop.get((-p, u), 0) != s * c:
                raise ValueError("loop element is not fixed by the involution")
            _acc(out, (p, u), 2 * c)
        elif (-p, u) not in loop:
            raise ValueError("loop element is not fixed by the involution")
    return out


def loop_bracket(dec: ClassicalDecomposition, a: dict, b: dict) -> dict:
    out: dict = {}
    for (p, u), cu in a.items():
        for (q, v), cv in b.items():
            for w, x in dec.table.get((u, v), {}).items():
                _acc(out, (p + q, w), cu * cv * x)
    return out


def laurent_virasoro(m: int, loop: dict) -> dict:
    """K_m = -(t^{m+1} - t^{1-m}) d/dt on loop elements."""
    out: dict = {}
    for (p, u), c in loop.items():
        if p:
            _acc(out, (p + m, u), -p * c)
            _acc(out, (p - m, u), p * c)
    return out


# ---------------------------------------------------------------- Virasoro

@dataclass
class CompactVirasoroElement:
    terms: dict = field(default_factory=dict)  # m -> coeff, m >= 1

    def __post_init__(self):
        if any(m < 1 for m in self.terms):
            raise ValueError("compact Virasoro modes start at 1")
        self.terms = {m: Fraction(c) for m, c in self.terms.items() if c}

    @classmethod
    def K(cls, m, c=1):
        return cls({m: c})


def virasoro_terms(kt: dict, terms: dict, dim_k: int) -> dict:
    out: dict = {}
    for m, ck in kt.items():
        for (n, u), c in terms.items():
            if not n:
                continue
            f = -n * c * ck
            s, d = m + n, abs(m - n)
            _acc(out, (s, u), f)
            if u < dim_k:
                _acc(out, (d, u), -f)
            elif d:
                # sign forced by K_m = L_m - L_-m acting on (t^n - t^-n)/2
                _acc(out, (d, u), sgn(m - n) * f)
    return out


def virasoro_action(k: CompactVirasoroElement, a: FilteredElement) -> FilteredElement:
    return FilteredElement(a.dec, virasoro_terms(k.terms, a.terms, a.dec.dim_k))


def virasoro_bracket(a: CompactVirasoroElement, b: CompactVirasoroElement) -> CompactVirasoroElement:
    out: dict = {}
    for m, cm in a.terms.items():
        for n, cn in b.terms.items():
            c = cm * cn
            if m + n:
                _acc(out, m + n, (m - n) * c)
            if m != n:
                _acc(out, abs(m - n), -sgn(m - n) * (m + n) * c)
    return CompactVirasoroElement(out)


# ---------------------------------------------------------------- Berman relations

@dataclass
class CheckResult:
    id: str
    status: str
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status == "pass"


def berman_check_filtered(dec: ClassicalDecomposition, g: GammaSet, six_samples: int = 20,
                          seed: int = 0) -> list[CheckResult]:
    """7 Gamma^{IJ}_{AB}[Y_1^A, Y_1^B] - 32 [X_1^{IK}, X_1^{KJ}] = -448 X_0^{IJ}, plus the six-form relation."""
    if dec.name != "e8":
        raise DecompositionMismatch("Berman relations are stated for the e8 data")
    dk = dec.dim_k
    idx = so16_index()
    failures = []
    for I in range(1, 17):
        for J in range(I + 1, 17):
            lhs: dict = {}
            G = g.two(I, J)
            for A in range(128):
                B, s = G.perm[A], G.sign[A]
                for key, v in bracket_terms(dec, {(1, dk + A): 1}, {(1, dk + B): 1}).items():
                    _acc(lhs, key, 7 * s * v)
            for K in range(1, 17):
                if K in (I, J):
                    continue
                a, sa = idx[(I, K)]
                b, sb = idx[(K, J)]
                for key, v in bracket_terms(dec, {(1, a): 1}, {(1, b): 1}).items():
                    _acc(lhs, key, -32 * sa * sb * v)
            a, _ = idx[(I, J)]
            if lhs != {(0, a): Fraction(-448)}:
                failures.append([I, J])
    out = [CheckResult("ber1", "pass" if not failures else "fail",
                       {"pairs_checked": 120, "failures": failures})]
    rng = random.Random(seed)
    bad6 = []
    tuples = [tuple(range(1, 7))] + [tuple(sorted(rng.sample(range(1, 17), 6))) for _ in range(six_samples)]
    for ind in tuples:
        G = antisym_product(g, ind, "AB")
        acc: dict = {}
        for A in range(128):
            B, s = G.perm[A], G.sign[A]
            for key, v in bracket_terms(dec, {(1, dk + A): 1}, {(1, dk + B): 1}).items():
                _acc(acc, key, s * v)
        if acc:
            bad6.append(list(ind))
    out.append(CheckResult("ber1-sixform", "pass" if not bad6 else "fail",
                           {"tuples_checked": len(tuples), "failures": bad6}))
    return out


def generators(dec: ClassicalDecomposition, m_max: int) -> list[tuple[int, int]]:
    """All basis keys (m, u) with m <= m_max (Y-sector from m = 1)."""
    out = [(m, a) for m in range(m_max + 1) for a in range(dec.dim_k)]
    out += [(m, dec.dim_k + i) for m in range(1, m_max + 1) for i in range(dec.dim_p)]
    return out


def _jacobi_sum(br, x, y, z) -> dict:
    out: dict = {}
    for p, q, r in ((x, y, z), (y, z, x), (z, x, y)):
        for k, v in br(p, br(q, r)).items():
            _acc(out, k, v)
    return out


def jacobi_filtered(dec: ClassicalDecomposition, m_max: int, samples: int | None = None,
                    seed: int = 0) -> CheckResult:
    """Jacobi and antisymmetry on basis triples; exhaustive when ``samples`` is None."""
    gens = generators(dec, m_max)
    if samples is None:
        triples = itertools.combinations(gens, 3)
        pairs = itertools.combinations(gens, 2)
    else:
        rng = random.Random(seed)
        triples = ((rng.choice(gens), rng.choice(gens), rng.choice(gens)) for _ in range(samples))
        pairs = ((rng.choice(gens), rng.choice(gens)) for _ in range(samples))

    def br(a, b):
        return bracket_terms(dec, a, b)

    jac = anti = checked = 0
    for a, b, c in triples:
        checked += 1
        jac += bool(_jacobi_sum(br, {a: 1}, {b: 1}, {c: 1}))
    for a, b in pairs:
        s = br({a: 1}, {b: 1})
        for k, v in br({b: 1}, {a: 1}).items():
            _acc(s, k, v)
        anti += bool(s)
    return CheckResult(f"jacobi-filtered-{dec.name}", "pass" if not jac and not anti else "fail",
                       {"m_max": m_max, "triples": checked, "exhaustive": samples is None,
                        "jacobi_failures": jac, "antisymmetry_failures": anti, "seed": seed})
