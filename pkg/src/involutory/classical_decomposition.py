"""Cartan decompositions g = k + p with explicit structure constants.

Basis vectors of g are addressed by a single integer: ``0 .. dim_k-1`` span
k, ``dim_k .. dim_k+dim_p-1`` span p.  Brackets of basis vectors are sparse
dicts ``{index: Fraction}``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .exact_linalg import Echelon, SparseMatrix, format_scalar, parse_scalar
from .gamma_clifford import GammaSet, antisym_product


class DegenerateForm(ArithmeticError):
    pass


def _acc(out: dict, k, v):
    nv = out.get(k, 0) + v
    if nv:
        out[k] = nv
    else:
        out.pop(k, None)


@dataclass
class ClassicalDecomposition:
    name: str
    dim_k: int
    dim_p: int
    c_kk: dict  # (a, b) -> {c: coef}, a, b, c in k
    c_kp: dict  # (a, i) -> {j: coef}, i, j in p (0-based within p)
    c_pp: dict  # (i, j) -> {a: coef}
    form_k: dict  # (a, b) -> value
    form_p: dict  # (i, j) -> value
    center: list = field(default_factory=list)  # list of dicts over k
    k_labels: list = field(default_factory=list)
    p_labels: list = field(default_factory=list)

    @property
    def dim(self):
        return self.dim_k + self.dim_p

    def is_k(self, u: int) -> bool:
        return u < self.dim_k

    @cached_property
    def table(self) -> dict:
        """Full bracket on unified indices, only nonzero entries stored."""
        dk = self.dim_k
        t: dict = {}
        for (a, b), v in self.c_kk.items():
            if v:
                t[(a, b)] = dict(v)
        for (a, i), v in self.c_kp.items():
            if v:
                t[(a, dk + i)] = {dk + j: c for j, c in v.items()}
                t[(dk + i, a)] = {dk + j: -c for j, c in v.items()}
        for (i, j), v in self.c_pp.items():
            if v:
                t[(dk + i, dk + j)] = dict(v)
        return t

    def bracket_basis(self, u: int, v: int) -> dict:
        return self.table.get((u, v), {})

    def bracket(self, x: dict, y: dict) -> dict:
        out: dict = {}
        t = self.table
        for u, cu in x.items():
            for v, cv in y.items():
                r = t.get((u, v))
                if r:
                    for w, c in r.items():
                        _acc(out, w, cu * cv * c)
        return out

    def form(self, x: dict, y: dict) -> Fraction:
        dk = self.dim_k
        s = Fraction(0)
        for u, cu in x.items():
            for v, cv in y.items():
                if u < dk and v < dk:
                    s += cu * cv * self.form_k.get((u, v), 0)
                elif u >= dk and v >= dk:
                    s += cu * cv * self.form_p.get((u - dk, v - dk), 0)
        return s

    # -- checks -------------------------------------------------------------

    def jacobi_defect(self, a: int, b: int, c: int) -> dict:
        x, y, z = {a: 1}, {b: 1}, {c: 1}
        out: dict = {}
        for p, q, r in ((x, y, z), (y, z, x), (z, x, y)):
            for k, v in self.bracket(p, self.bracket(q, r)).items():
                _acc(out, k, v)
        return out

    def antisymmetry_defects(self) -> list:
        bad = []
        for (u, v), r in self.table.items():
            if r != {k: -c for k, c in self.table.get((v, u), {}).items()}:
                bad.append((u, v))
        return bad

    def ad_matrices(self, scale: int = 1):
        """ad(e_u) as scipy CSR matrices with integer entries ``scale * ad``."""
        import scipy.sparse as sp

        n = self.dim
        cols: dict = {u: ([], [], []) for u in range(n)}
        for (u, v), r in self.table.items():
            rows_, cols_, vals = cols[u]
            for w, c in r.items():
                val = c * scale
                if Fraction(val).denominator != 1:
                    raise ValueError("scale too small for integer ad matrices")
                rows_.append(w)
                cols_.append(v)
                vals.append(int(val))
        return [sp.csr_matrix((vals, (r_, c_)), shape=(n, n), dtype="int64")
                for r_, c_, vals in (cols[u] for u in range(n))]

    def jacobi_exhaustive(self, scale: int = 2) -> int:
        """Count basis pairs (u, v) with ad[u, v] != [ad u, ad v]; covers every triple."""
        ad = self.ad_matrices(scale)
        n = self.dim
        bad = 0
        for u in range(n):
            for v in range(u + 1, n):
                lhs = ad[u] @ ad[v] - ad[v] @ ad[u]
                r = self.table.get((u, v), {})
                rhs = None
                for w, c in r.items():
                    term = ad[w] * int(c * scale)
                    rhs = term if rhs is None else rhs + term
                if rhs is None:
                    if lhs.count_nonzero():
                        bad += 1
                elif (lhs - rhs).count_nonzero():
                    bad += 1
        return bad

    def form_invariance_defect(self, u: int, v: int, w: int) -> Fraction:
        """<[x,y],z> + <y,[x,z]> for basis vectors (x = e_u)."""
        x, y, z = {u: 1}, {v: 1}, {w: 1}
        return self.form(self.bracket(x, y), z) + self.form(y, self.bracket(x, z))

    def pp_spans_k(self) -> bool:
        ech = Echelon()
        for (i, j), r in self.c_pp.items():
            if i < j and r:
                ech.add(r)
                if len(ech) == self.dim_k:
                    return True
        return len(ech) == self.dim_k

    # -- JSON ---------------------------------------------------------------

    def to_json(self) -> dict:
        def tab(d):
            return [[a, b, c, format_scalar(v)] for (a, b), r in sorted(d.items()) for c, v in sorted(r.items())]

        def frm(d):
            return [[a, b, format_scalar(v)] for (a, b), v in sorted(d.items()) if v]

        return {"name": self.name, "dim_k": self.dim_k, "dim_p": self.dim_p,
                "c_kk": tab(self.c_kk), "c_kp": tab(self.c_kp), "c_pp": tab(self.c_pp),
                "form_k": frm(self.form_k), "form_p": frm(self.form_p),
                "center": [[[a, format_scalar(v)] for a, v in sorted(z.items())] for z in self.center],
                "k_labels": self.k_labels, "p_labels": self.p_labels}

    @classmethod
    def from_json(cls, data) -> "ClassicalDecomposition":
        def tab(rows):
            out: dict = {}
            for a, b, c, v in rows:
                out.setdefault((a, b), {})[c] = parse_scalar(v)
            return out

        def frm(rows):
            return {(a, b): parse_scalar(v) for a, b, v in rows}

        return cls(data.get("name", ""), data["dim_k"], data["dim_p"], tab(data["c_kk"]), tab(data["c_kp"]),
                   tab(data["c_pp"]), frm(data["form_k"]), frm(data["form_p"]),
                   [{a: parse_scalar(v) for a, v in z} for z in data.get("center", [])],
                   data.get("k_labels", []), data.get("p_labels", []))

    def dumps(self) -> str:
        return json.dumps(self.to_json())


# ---------------------------------------------------------------- e8 / so(16)

def so16_pairs() -> list[tuple[int, int]]:
    return [(I, J) for I in range(1, 17) for J in range(I + 1, 17)]


def so16_index() -> dict:
    """(I, J) -> (k index, sign) for all I != J, using X^{JI} = -X^{IJ}."""
    idx = {}
    for a, (I, J) in enumerate(so16_pairs()):
        idx[(I, J)] = (a, 1)
        idx[(J, I)] = (a, -1)
    return idx


def _so_bracket(pairs, idx, n_labels=16) -> dict:
    out = {}
    for a, (I, J) in enumerate(pairs):
        for b, (K, L) in enumerate(pairs):
            r: dict = {}
            for d, P, Q, s in ((J == K, I, L, 1), (I == K, J, L, -1), (J == L, I, K, -1), (I == L, J, K, 1)):
                if d and P != Q:
                    c, sg = idx[(P, Q)]
                    _acc(r, c, Fraction(s * sg))
            if r:
                out[(a, b)] = r
    return out


def build_e8(g: GammaSet) -> ClassicalDecomposition:
    pairs = so16_pairs()
    idx = so16_index()
    c_kk = _so_bracket(pairs, idx)
    half = Fraction(1, 2)
    c_kp: dict = {}
    c_pp: dict = {}
    for a, (I, J) in enumerate(pairs):
        G = g.two(I, J)
        for A in range(128):
            B, s = G.perm[A], G.sign[A]
            # [X^{IJ}, Y^A] = -1/2 Gamma^{IJ}_{AB} Y^B
            c_kp[(a, A)] = {B: -half * s}
            # [Y^A, Y^B] = 1/4 sum_{I,J} = 1/2 sum_{I<J} Gamma^{IJ}_{AB} X^{IJ}
            c_pp.setdefault((A, B), {})[a] = half * s
    form_k = {(a, a): Fraction(-1) for a in range(len(pairs))}
    form_p = {(A, A): Fraction(1) for A in range(128)}
    return ClassicalDecomposition("e8", 120, 128, c_kk, c_kp, c_pp, form_k, form_p, [],
                                  [f"X{I},{J}" for I, J in pairs], [f"Y{A}" for A in range(128)])


def build_sl2() -> ClassicalDecomposition:
    # k = e - f ; p = (e + f, h)
    F = Fraction
    c_kk: dict = {}
    c_kp = {(0, 0): {1: F(2)}, (0, 1): {0: F(-2)}}
    c_pp = {(0, 1): {0: F(-2)}, (1, 0): {0: F(2)}}
    form_k = {(0, 0): F(-2)}
    form_p = {(0, 0): F(2), (1, 1): F(2)}
    return ClassicalDecomposition("sl2", 1, 2, c_kk, c_kp, c_pp, form_k, form_p, [{0: F(1)}],
                                  ["e-f"], ["e+f", "h"])


def build(name: str, g: GammaSet | None = None) -> ClassicalDecomposition:
    if name == "e8":
        from .gamma_clifford import build_gammas
        return build_e8(g or build_gammas())
    if name == "sl2":
        return build_sl2()
    raise ValueError(f"unknown algebra {name!r}")


# ---------------------------------------------------------------- k-modules

@dataclass
class Rep0:
    """Finite-dimensional module of k: one sparse matrix ``{(row, col): value}`` per k basis vector."""

    name: str
    dim: int
    matrices: list
    spinorial: bool = False

    def apply(self, a: int, vec: dict) -> dict:
        out: dict = {}
        m = self.by_col[a]
        for c, x in vec.items():
            for r, v in m.get(c, ()):
                _acc(out, r, v * x)
        return out

    @cached_property
    def by_col(self) -> list:
        cols = []
        for m in self.matrices:
            d: dict = {}
            for (r, c), v in m.items():
                d.setdefault(c, []).append((r, v))
            cols.append(d)
        return cols

    def to_sparse(self, a: int) -> SparseMatrix:
        return SparseMatrix(self.dim, self.dim, tuple((r, c, v) for (r, c), v in sorted(self.matrices[a].items())))


def _matmul(x: dict, y: dict) -> dict:
    ycols: dict = {}
    for (r, c), v in y.items():
        ycols.setdefault(r, []).append((c, v))
    out: dict = {}
    for (r, k), v in x.items():
        for c, w in ycols.get(k, ()):
            _acc(out, (r, c), v * w)
    return out


def _matsub(x: dict, y: dict) -> dict:
    out = dict(x)
    for k, v in y.items():
        _acc(out, k, -v)
    return out


def _rep_csr(rep: Rep0, scale: int):
    import scipy.sparse as sp

    out = []
    for m in rep.matrices:
        rows, cols, vals = [], [], []
        for (r, c), v in m.items():
            rows.append(r)
            cols.append(c)
            vals.append(int(v * scale))
        out.append(sp.csr_matrix((vals, (rows, cols)), shape=(rep.dim, rep.dim), dtype="int64"))
    return out


def rep_defects(dec: ClassicalDecomposition, rep: Rep0) -> list:
    """Basis pairs (a, b) with M([x_a, x_b]) != [M(x_a), M(x_b)] (exhaustive)."""
    dens = [Fraction(v).denominator for m in rep.matrices for v in m.values()]
    dens += [Fraction(v).denominator for r in dec.c_kk.values() for v in r.values()]
    scale = math.lcm(1, *dens)
    M = _rep_csr(rep, scale)
    bad = []
    for a in range(dec.dim_k):
        for b in range(dec.dim_k):
            lhs = M[a] @ M[b] - M[b] @ M[a]
            rhs = lhs * 0
            for c, v in dec.c_kk.get((a, b), {}).items():
                rhs = rhs + M[c] * int(v * scale)
            if (lhs - rhs).count_nonzero():
                bad.append((a, b))
    return bad


def build_rep0(dec: ClassicalDecomposition, which: str, g: GammaSet | None = None) -> Rep0:
    F = Fraction
    if which in ("1", "trivial"):
        return Rep0("1", 1, [{} for _ in range(dec.dim_k)])
    if dec.name == "e8":
        pairs = so16_pairs()
        if which == "16":
            mats = [{(I - 1, J - 1): F(1), (J - 1, I - 1): F(-1)} for I, J in pairs]
            return Rep0("16", 16, mats)
        if which in ("128s", "128c"):
            if g is None:
                from .gamma_clifford import build_gammas
                g = build_gammas()
            mats = []
            for I, J in pairs:
                G = g.two(I, J) if which == "128s" else antisym_product(g, (I, J), "dAdB")
                mats.append({(A, G.perm[A]): F(G.sign[A], 2) for A in range(128)})
            return Rep0(which, 128, mats, spinorial=True)
    if dec.name == "sl2":
        if which == "2":
            return Rep0("2", 2, [{(1, 0): F(2), (0, 1): F(-2)}])
        if which.startswith("char:"):
            return Rep0(which, 1, [{(0, 0): parse_scalar(which[5:])}])
    raise ValueError(f"unknown module {which!r} for {dec.name}")


def dual_basis_k(dec: ClassicalDecomposition) -> list[dict]:
    """x^a with <x_a, x^b> = delta_ab, w.r.t. form_k."""
    n = dec.dim_k
    diag = all(a == b for (a, b), v in dec.form_k.items() if v)
    if diag:
        out = []
        for a in range(n):
            v = dec.form_k.get((a, a), 0)
            if not v:
                raise DegenerateForm(f"form vanishes on basis vector {a}")
            out.append({a: 1 / Fraction(v)})
        return out
    # general case: invert the Gram matrix
    aug = [[Fraction(dec.form_k.get((a, b), 0)) for b in range(n)] + [Fraction(a == b) for b in range(n)]
           for a in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise DegenerateForm("invariant form on k is degenerate")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    inv = [row[n:] for row in aug]
    return [{b: inv[a][b] for b in range(n) if inv[a][b]} for a in range(n)]


def quadratic_casimir(dec: ClassicalDecomposition, rep: Rep0) -> SparseMatrix:
    dual = dual_basis_k(dec)
    out: dict = {}
    for a in range(dec.dim_k):
        ma = rep.matrices[a]
        for b, w in dual[a].items():
            for k, v in _matmul(ma, rep.matrices[b]).items():
                _acc(out, k, w * v)
    return SparseMatrix(rep.dim, rep.dim, tuple((r, c, v) for (r, c), v in sorted(out.items())))


def casimir_commutes(dec: ClassicalDecomposition, rep: Rep0) -> bool:
    C = {(r, c): v for r, c, v in quadratic_casimir(dec, rep).entries}
    return all(_matmul(C, m) == _matmul(m, C) for m in rep.matrices)


# ---------------------------------------------------------------- Fierz checks

def ber1_contractions(dec: ClassicalDecomposition, g: GammaSet, I: int, J: int) -> tuple[dict, dict]:
    """P = Gamma^{IJ}_{AB} [Y^A, Y^B] and Q = sum_K [X^{IK}, X^{KJ}], both in k."""
    dk = dec.dim_k
    G = g.two(I, J)
    P: dict = {}
    for A in range(128):
        B, s = G.perm[A], G.sign[A]
        for c, v in dec.bracket_basis(dk + A, dk + B).items():
            _acc(P, c, s * v)
    idx = so16_index()
    Q: dict = {}
    for K in range(1, 17):
        if K in (I, J):
            continue
        a, sa = idx[(I, K)]
        b, sb = idx[(K, J)]
        for c, v in dec.bracket_basis(a, b).items():
            _acc(Q, c, sa * sb * v)
    return P, Q


def ber1_classical_holds(dec: ClassicalDecomposition, g: GammaSet, I: int, J: int) -> bool:
    """Loop-level-1 relation split into its X_2 and X_0 parts.

    With [Y_1,Y_1] = (X_2 - X_0)/2 and [X_1,X_1] = (X_2 + X_0)/2 the relation
    7 Gamma [Y_1,Y_1] - 32 [X_1,X_1] = -448 X_0 becomes 7P - 32Q = 0 and
    7P + 32Q = 896 X^{IJ}.
    """
    P, Q = ber1_contractions(dec, g, I, J)
    a, s = so16_index()[(I, J)]
    comb_minus: dict = {}
    comb_plus: dict = {}
    for c, v in P.items():
        _acc(comb_minus, c, 7 * v)
        _acc(comb_plus, c, 7 * v)
    for c, v in Q.items():
        _acc(comb_minus, c, -32 * v)
        _acc(comb_plus, c, 32 * v)
    return not comb_minus and comb_plus == {a: Fraction(896 * s)}


def six_form_contraction(dec: ClassicalDecomposition, g: GammaSet, indices) -> dict:
    dk = dec.dim_k
    G = antisym_product(g, indices, "AB")
    out: dict = {}
    for A in range(128):
        B, s = G.perm[A], G.sign[A]
        for c, v in dec.bracket_basis(dk + A, dk + B).items():
            _acc(out, c, s * v)
    return out


