"""Induced modules V = U(N+) (x) V0 of the parabolic algebra and their quotients.

Letters of U(N+) are parabolic basis keys ``(degree, u)`` with degree >= 1;
a PBW word is a non-decreasing tuple of letters. Module vectors are dicts
``{(word, i): coeff}`` with ``i`` indexing V0.
"""
from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import flint

from .classical_decomposition import ClassicalDecomposition, Rep0, _acc, build_rep0, dual_basis_k, so16_pairs
from .exact_linalg import DEFAULT_PRIME, dense_rank_exact, format_scalar, to_mod_p
from .filtered_k import FilteredElement
from .parabolic import TruncationMismatch, pbracket_terms, rho_terms
from .root_data import build_root_system, weyl_dim


class UnresolvedEigenvalue(ArithmeticError):
    pass


# ---------------------------------------------------------------- words and vectors

@dataclass(frozen=True, order=True)
class PBWWord:
    letters: tuple = ()

    def __post_init__(self):
        if any(d < 1 for d, _ in self.letters):
            raise ValueError("degree-0 letters are not part of U(N+)")
        if list(self.letters) != sorted(self.letters):
            raise ValueError("letters must be sorted by (degree, index)")

    @property
    def degree(self) -> int:
        return sum(d for d, _ in self.letters)

    def compressed(self) -> list[tuple[int, int, int]]:
        return [(d, u, m) for (d, u), m in sorted(Counter(self.letters).items())]

    @classmethod
    def from_compressed(cls, items) -> "PBWWord":
        return cls(tuple(sorted((d, u) for d, u, m in items for _ in range(m))))


@dataclass
class ModuleElement:
    N: int
    terms: dict = field(default_factory=dict)  # (letters tuple, i) -> coeff

    def __post_init__(self):
        for (w, _), c in list(self.terms.items()):
            if sum(d for d, _ in w) > self.N:
                raise TruncationMismatch("word degree exceeds the truncation")
            if not c:
                del self.terms[(w, _)]

    def level_parts(self) -> dict:
        out: dict = {}
        for (w, i), c in self.terms.items():
            out.setdefault(sum(d for d, _ in w), {})[(w, i)] = c
        return out

    def to_json(self) -> list:
        return [{"word": [list(t) for t in PBWWord(w).compressed()], "v0": i, "coeff": format_scalar(c)}
                for (w, i), c in sorted(self.terms.items())]


# ---------------------------------------------------------------- the module

class InducedModule:
    """Truncated induced module: levels 0..N of U(N+) (x) V0."""

    def __init__(self, dec: ClassicalDecomposition, rep0: Rep0, N: int):
        if N < 0:
            raise ValueError("truncation must be non-negative")
        self.dec, self.rep0, self.N = dec, rep0, N
        self._mul: dict = {}
        self._brk: dict = {}

    # -- letters and bases
    def letters(self, d: int) -> list[tuple[int, int]]:
        dk = self.dec.dim_k
        if d < 1:
            return []
        return [(d, a) for a in range(dk)] if d % 2 == 0 else [(d, dk + i) for i in range(self.dec.dim_p)]

    def pbw_words(self, level: int) -> list[tuple]:
        return pbw_words(self.dec, level)

    def level_basis(self, level: int) -> list[tuple]:
        return [(w, i) for w in self.pbw_words(level) for i in range(self.rep0.dim)]

    def level_dim(self, level: int) -> int:
        return pbw_count(self.dec, level) * self.rep0.dim

    @property
    def dim(self) -> int:
        return sum(self.level_dim(l) for l in range(self.N + 1))

    # -- normal ordering inside U(N+)
    def _bracket(self, x, y) -> dict:
        key = (x, y)
        r = self._brk.get(key)
        if r is None:
            r = pbracket_terms(self.dec, self.N, {x: 1}, {y: 1})
            self._brk[key] = r
        return r

    def mul_letter_word(self, letter, word: tuple) -> dict:
        """Normal-ordered ``letter * word`` as ``{word: coeff}``, truncated at N."""
        key = (letter, word)
        hit = self._mul.get(key)
        if hit is not None:
            return hit
        if letter[0] + sum(d for d, _ in word) > self.N:
            out = {}
        elif not word or letter <= word[0]:
            out = {(letter,) + word: Fraction(1)}
        else:
            # l w1 rest = w1 (l rest) + [l, w1] rest
            w1, rest = word[0], word[1:]
            out = {}
            for w, c in self.mul_letter_word(letter, rest).items():
                _acc(out, (w1,) + w, c)
            for z, c in self._bracket(letter, w1).items():
                for w, c2 in self.mul_letter_word(z, rest).items():
                    _acc(out, w, c * c2)
        self._mul[key] = out
        return out

    def normal_order(self, seq) -> dict:
        acc = {(): Fraction(1)}
        for letter in reversed(seq):
            nxt: dict = {}
            for w, c in acc.items():
                for w2, c2 in self.mul_letter_word(letter, w).items():
                    _acc(nxt, w2, c * c2)
            acc = nxt
        return acc

    # -- the action
    def act_basis(self, gen, w: tuple, i: int) -> dict:
        d, u = gen
        if d > self.N:
            raise TruncationMismatch(f"generator degree {d} exceeds N = {self.N}")
        out: dict = {}
        if d > 0:
            for w2, c in self.mul_letter_word(gen, w).items():
                out[(w2, i)] = c
            return out
        # degree 0: derivation on the word plus the V0 action
        for pos, letter in enumerate(w):
            for z, c in self._bracket(gen, letter).items():
                seq = w[:pos] + (z,) + w[pos + 1:]
                for w2, c2 in self.normal_order(seq).items():
                    _acc(out, (w2, i), c * c2)
        for r, c in self.rep0.apply(u, {i: 1}).items():
            _acc(out, (w, r), c)
        return out

    def act(self, gen, vec: dict) -> dict:
        out: dict = {}
        for (w, i), c in vec.items():
            for k, v in self.act_basis(gen, w, i).items():
                _acc(out, k, c * v)
        return out

    def act_terms(self, terms: dict, vec: dict) -> dict:
        """Action of a parabolic element ``{(degree, u): coeff}``."""
        out: dict = {}
        for gen, c in terms.items():
            if gen[0] > self.N:
                continue
            for k, v in self.act(gen, vec).items():
                _acc(out, k, c * v)
        return out

    def casimir(self, vec: dict) -> dict:
        out: dict = {}
        for a, dual in enumerate(self._dual):
            inner: dict = {}
            for b, w in dual.items():
                for k, v in self.act((0, b), vec).items():
                    _acc(inner, k, w * v)
            for k, v in self.act((0, a), inner).items():
                _acc(out, k, v)
        return out

    @cached_property
    def _dual(self):
        return dual_basis_k(self.dec)

    def generators(self) -> list[tuple[int, int]]:
        dk = self.dec.dim_k
        out = [(0, a) for a in range(dk)]
        for d in range(1, self.N + 1):
            out += self.letters(d)
        return out


def pbw_words(dec: ClassicalDecomposition, level: int) -> list[tuple]:
    """All non-decreasing letter tuples of total degree ``level``."""
    if level < 0:
        raise ValueError("level must be non-negative")
    dk = dec.dim_k
    letters = []
    for d in range(1, level + 1):
        letters += [(d, a) for a in range(dk)] if d % 2 == 0 else [(d, dk + i) for i in range(dec.dim_p)]
    out = []

    def rec(start, remaining, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for k in range(start, len(letters)):
            d = letters[k][0]
            if d > remaining:
                break
            prefix.append(letters[k])
            rec(k, remaining - d, prefix)
            prefix.pop()

    rec(0, level, [])
    return out


def pbw_count(dec: ClassicalDecomposition, level: int) -> int:
    """Coefficient of q^level in prod_d (1 - q^d)^(-dim N_d)."""
    series = [1] + [0] * level
    for d in range(1, level + 1):
        n = dec.dim_k if d % 2 == 0 else dec.dim_p
        for _ in range(n):
            for k in range(d, level + 1):
                series[k] += series[k - d]
    return series[level]


def pbw_basis(dec: ClassicalDecomposition, level: int) -> list[PBWWord]:
    return [PBWWord(w) for w in pbw_words(dec, level)]


def act(dec: ClassicalDecomposition, rep0: Rep0, g: tuple, v: ModuleElement, N: int) -> ModuleElement:
    if v.N != N:
        raise TruncationMismatch(f"element truncated at {v.N}, module at {N}")
    mod = InducedModule(dec, rep0, N)
    return ModuleElement(N, mod.act(g, v.terms))


# ---------------------------------------------------------------- truncated representation

@dataclass
class TruncatedRep:
    module: InducedModule

    @cached_property
    def basis(self) -> list[tuple]:
        return [b for l in range(self.module.N + 1) for b in self.module.level_basis(l)]

    @cached_property
    def index(self) -> dict:
        return {b: k for k, b in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self, gen) -> dict:
        """Sparse ``{(row, col): value}`` of a generator on the level-<=N module."""
        out = {}
        for col, (w, i) in enumerate(self.basis):
            for k, v in self.module.act_basis(gen, w, i).items():
                out[(self.index[k], col)] = v
        return out

    def representation_defects(self, pairs=None) -> list:
        """Generator pairs where [M(a), M(b)] differs from M([a, b]) on the full truncated module."""
        mod = self.module
        gens = mod.generators()
        if pairs is None:
            pairs = itertools.product(gens, gens)
        bad = []
        for a, b in pairs:
            br = pbracket_terms(mod.dec, mod.N, {a: 1}, {b: 1})
            for w, i in self.basis:
                v = {(w, i): Fraction(1)}
                lhs = mod.act(a, mod.act(b, v))
                for k, c in mod.act(b, mod.act(a, v)).items():
                    _acc(lhs, k, -c)
                for k, c in mod.act_terms(br, v).items():
                    _acc(lhs, k, -c)
                if lhs:
                    bad.append((a, b))
                    break
        return bad


def truncated_rep(dec: ClassicalDecomposition, rep0: Rep0, N: int) -> TruncatedRep:
    return TruncatedRep(InducedModule(dec, rep0, N))


def k_action(dec: ClassicalDecomposition, rep0: Rep0, N: int, sign: int, a: FilteredElement,
             module: InducedModule | None = None):
    """Endomorphism ``vec -> rho^(N)(a) . vec`` of the truncated module."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    mod = module or InducedModule(dec, rep0, N)
    image = rho_terms(dec, sign, N, a.terms)
    return lambda vec: mod.act_terms(image, vec)


# ---------------------------------------------------------------- free-algebra oracle

def bubble_normal_order(dec: ClassicalDecomposition, N: int, seq) -> dict:
    """Independent normal ordering by repeated adjacent swaps on noncommutative words."""
    todo = {tuple(seq): Fraction(1)}
    done: dict = {}
    while todo:
        w, c = todo.popitem()
        if sum(d for d, _ in w) > N:
            continue
        pos = next((k for k in range(len(w) - 1) if w[k] > w[k + 1]), None)
        if pos is None:
            _acc(done, w, c)
            continue
        swapped = w[:pos] + (w[pos + 1], w[pos]) + w[pos + 2:]
        _acc(todo, swapped, c)
        for z, x in pbracket_terms(dec, N, {w[pos]: 1}, {w[pos + 1]: 1}).items():
            _acc(todo, w[:pos] + (z,) + w[pos + 2:], c * x)
    return done


# ---------------------------------------------------------------- submodules (generic path)

def _vec_mod_p(vec: dict, index: dict, p: int) -> dict:
    out = {}
    for k, c in vec.items():
        v = to_mod_p(c, p)
        if v:
            j = index[k]
            out[j] = (out.get(j, 0) + v) % p
    return {j: v for j, v in out.items() if v}


def _rref(rows: list[dict], ncols: int, p: int):
    """RREF over F_p; returns (rank, pivot columns, nmod_mat)."""
    m = flint.nmod_mat(max(len(rows), 1), max(ncols, 1), p)
    for r, row in enumerate(rows):
        for c, v in row.items():
            m[r, c] = v
    red, rank = m.rref()
    pivots, i = [], 0
    for c in range(ncols):
        if i < rank and int(red[i, c]):
            pivots.append(c)
            i += 1
    return rank, pivots, red


@dataclass
class LevelData:
    level: int
    dim_V: int
    dim_W: int
    basis: list  # ambient basis of the level
    pivots: list  # pivot columns of W's RREF
    rref: object  # flint nmod_mat (rows beyond dim_W are zero)
    exact_dim_W: int | None = None

    @property
    def dim_quotient(self) -> int:
        return self.dim_V - self.dim_W



@dataclass
class Submodule:
    module: InducedModule
    levels: list
    prime: int
    seed: int


def submodule_generate(dec: ClassicalDecomposition, rep0: Rep0, N: int, seeds: list[ModuleElement],
                       p: int = DEFAULT_PRIME, seed: int = 0, exact: bool = False,
                       module: InducedModule | None = None) -> Submodule:
    """Level-by-level span of U(N(P_N)) . seeds, ranks certified mod p.

    W_l is the span of the level-l seeds and N_d W_{l-d}; closure under the
    degree-0 part is tested on random combinations (a failure to close is
    detected with probability at least 1 - dim/p per round).
    """
    mod = module or InducedModule(dec, rep0, N)
    rng = random.Random(seed)
    seeds_by_level: dict = {}
    for s in seeds:
        if s.N != N:
            raise TruncationMismatch("seed truncated at a different N")
        parts = s.level_parts()
        if len(parts) > 1:
            raise ValueError("seeds must be homogeneous")
        for l, t in parts.items():
            seeds_by_level.setdefault(l, []).append(t)
    levels: list[LevelData] = []
    w_fraction: dict = {}  # level -> spanning vectors (exact coefficients)
    for l in range(N + 1):
        basis = mod.level_basis(l)
        index = {b: k for k, b in enumerate(basis)}
        span = list(seeds_by_level.get(l, []))
        for d in range(1, l + 1):
            for letter in mod.letters(d):
                for v in w_fraction.get(l - d, []):
                    img = mod.act(letter, v)
                    if img:
                        span.append(img)
        rows = [_vec_mod_p(v, index, p) for v in span]
        rank, pivots, red = _rref(rows, len(basis), p)
        while rank:
            combo: dict = {}
            for v in span:
                x = rng.randrange(1, p)
                for k, c in v.items():
                    _acc(combo, k, c * x)
            new = [mod.act((0, a), combo) for a in range(dec.dim_k)]
            new = [v for v in new if v]
            if not new:
                break
            r2, pv2, red2 = _rref(rows + [_vec_mod_p(v, index, p) for v in new], len(basis), p)
            if r2 == rank:
                break
            span += new
            rows += [_vec_mod_p(v, index, p) for v in new]
            rank, pivots, red = r2, pv2, red2
        if l < N:
            w_fraction[l] = _independent(span, rows, rank, len(basis), p)
        ld = LevelData(l, len(basis), rank, basis, pivots, red)
        if exact:
            ld.exact_dim_W = dense_rank_exact([{index[k]: c for k, c in v.items()} for v in span], len(basis))
        levels.append(ld)
    return Submodule(mod, levels, p, seed)


def _independent(span, rows, rank, ncols, p) -> list:
    """A subset of ``span`` whose reductions mod p are independent (pivots of the transpose)."""
    if len(span) == rank:
        return list(span)
    t = [dict() for _ in range(ncols)]
    for r, row in enumerate(rows):
        for c, v in row.items():
            t[c][r] = v
    _, pivots, _ = _rref(t, len(rows), p)
    return [span[r] for r in pivots]


def quotient_dims(sub: Submodule) -> list[int]:
    return [ld.dim_quotient for ld in sub.levels]


# ---------------------------------------------------------------- Casimir splitting

def d8_casimir_candidates(max_label_sum: int = 3) -> dict:
    """Casimir value -> list of (dimension, Dynkin labels) for small so(16) weights.

    Normalised so that long roots have length squared 2 (the vector has value 15).
    """
    rs = build_root_system("D", 8)
    n = rs.rank
    # lambda in simple-root coordinates: solve <lambda, alpha_j^vee> = l_j
    A = [[Fraction(2 * rs.gram[i][j], rs.gram[j][j]) for j in range(n)] for i in range(n)]
    inv = _inverse(A)
    rho = [sum(inv[j][i] for j in range(n)) for i in range(n)]
    scale = Fraction(2, rs.long_norm2)
    out: dict = {}
    for labels in itertools.product(range(max_label_sum + 1), repeat=n):
        if sum(labels) > max_label_sum:
            continue
        lam = [sum(labels[j] * inv[j][i] for j in range(n)) for i in range(n)]
        shifted = [x + 2 * y for x, y in zip(lam, rho)]
        val = scale * sum(lam[i] * rs.gram[i][j] * shifted[j] for i in range(n) for j in range(n))
        out.setdefault(val, []).append((weyl_dim(rs, labels), labels))
    return out


def _inverse(A):
    n = len(A)
    aug = [list(r) + [Fraction(i == j) for j in range(n)] for i, r in enumerate(A)]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c])
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [r[n:] for r in aug]


def _nullity(mat: list[list[int]], q: int, lam: int, p: int) -> int:
    if not q:
        return 0
    m = flint.nmod_mat(q, q, p)
    for r in range(q):
        for c in range(q):
            m[r, c] = (mat[r][c] - (lam if r == c else 0)) % p
    return q - m.rank()


def split_by_casimir(matrix: list[list[int]], candidates: dict, p: int) -> list[dict]:
    q = len(matrix)
    found, total = [], 0
    for val in sorted(candidates):
        k = _nullity(matrix, q, to_mod_p(val, p), p)
        if k:
            found.append({"eigenvalue": format_scalar(val), "dimension": k,
                          "candidates": [{"dim": d, "labels": list(l)} for d, l in candidates[val]]})
            total += k
    if total != q:
        raise UnresolvedEigenvalue(f"{q - total} quotient dimensions match no candidate Casimir value")
    return found


def _quotient_casimir_matrix(rank, pivots, red, ncols, columns_image, p) -> list[list[int]]:
    """Casimir on V/W in the basis of non-pivot columns.

    ``columns_image(j)`` returns the image of basis column j as ``{col: value mod p}``.
    """
    piv_set = set(pivots)
    free = [c for c in range(ncols) if c not in piv_set]
    pos = {c: k for k, c in enumerate(free)}
    rfree = [[int(red[r, c]) for c in free] for r in range(rank)]
    row_of = {c: r for r, c in enumerate(pivots)}
    q = len(free)
    mat = [[0] * q for _ in range(q)]
    for k, j in enumerate(free):
        img = columns_image(j)
        col = [0] * q
        for c, v in img.items():
            if c in pos:
                col[pos[c]] = (col[pos[c]] + v) % p
            else:
                rr = rfree[row_of[c]]
                for t in range(q):
                    if rr[t]:
                        col[t] = (col[t] - v * rr[t]) % p
        for t in range(q):
            mat[t][k] = col[t]
    return mat


def casimir_split(sub: Submodule, level: int, candidates: dict | None = None) -> list[dict]:
    """Split level ``level`` of V/W into eigenspaces of the quadratic Casimir of the degree-0 algebra."""
    mod, p = sub.module, sub.prime
    if candidates is None:
        candidates = default_candidates(mod.dec)
    ld = sub.levels[level]
    index = {b: k for k, b in enumerate(ld.basis)}

    def image(j):
        return _vec_mod_p(mod.casimir({ld.basis[j]: Fraction(1)}), index, p)

    mat = _quotient_casimir_matrix(ld.dim_W, ld.pivots, ld.rref, ld.dim_V, image, p)
    return split_by_casimir(mat, candidates, p)


def default_candidates(dec: ClassicalDecomposition) -> dict:
    if dec.name == "e8":
        return d8_casimir_candidates()
    if dec.name == "sl2":
        # k is spanned by x = e - f with <x, x> = -2, so C = -M(x)^2 / 2 and M(x) ~ 2in
        return {Fraction(2 * n * n): [(1, (n,)), (1, (-n,))] if n else [(1, (0,))] for n in range(0, 41)}
    raise ValueError(f"no Casimir candidates for {dec.name}")


# ---------------------------------------------------------------- e8 seeds

def chi_1920(dec: ClassicalDecomposition, g, N: int) -> list[ModuleElement]:
    """S_1^A v^I - 1/16 (Gamma^I Gamma^J)_{AB} S_1^B v^J for all (I, A)."""
    if dec.name != "e8":
        raise ValueError("the 1920 projector lives on the e8 data")
    dk = dec.dim_k
    out = []
    sixteenth = Fraction(1, 16)
    for I in range(1, 17):
        for A in range(128):
            t: dict = {}
            _acc(t, (((1, dk + A),), I - 1), Fraction(1))
            for J in range(1, 17):
                if J == I:
                    _acc(t, (((1, dk + A),), J - 1), -sixteenth)
                    continue
                G = g.two(I, J)
                _acc(t, (((1, dk + G.perm[A]),), J - 1), -sixteenth * G.sign[A])
            out.append(ModuleElement(N, t))
    return out


# ---------------------------------------------------------------- e8 level 2 via Z_2^8 blocks

_PARITY = [bin(m).count("1") & 1 for m in range(256)]


class E8LevelTwo:
    """Level 2 of V = U(N+) (x) 16 and W generated by the 1920 at level 1.

    Eight commuting involutions g_j = exp(pi X^{2j-1,2j}) act on level 2 by
    signed permutations of a symmetrised basis (sym(A,B) (x) v^I and
    X_2^a (x) v^I), so W_2 splits over the 256 characters of Z_2^8.
    """

    def __init__(self, dec: ClassicalDecomposition, g, p: int = DEFAULT_PRIME):
        if dec.name != "e8":
            raise ValueError("e8 data required")
        self.dec, self.g, self.p = dec, g, p
        self.rep0 = build_rep0(dec, "16")
        self.mod = InducedModule(dec, self.rep0, 2)
        self.dk = dec.dim_k
        self.pairs = [(A, B) for A in range(128) for B in range(A, 128)]
        self.pair_index = {ab: k for k, ab in enumerate(self.pairs)}
        self.n_sym = len(self.pairs) + self.dk
        self.dim = self.n_sym * 16

    # -- symmetrised coordinates: basis index = s * 16 + I0
    def to_sym(self, vec: dict) -> dict:
        dk, out = self.dk, {}
        for (w, i), c in vec.items():
            if len(w) == 1:
                _acc(out, (len(self.pairs) + w[0][1]) * 16 + i, c)
                continue
            A, B = w[0][1] - dk, w[1][1] - dk
            _acc(out, self.pair_index[(A, B)] * 16 + i, c)
            if A != B:
                for a, x in self.dec.c_pp.get((A, B), {}).items():
                    _acc(out, (len(self.pairs) + a) * 16 + i, c * x / 2)
        return out

    def from_sym(self, b: int) -> dict:
        s, i = divmod(b, 16)
        dk = self.dk
        if s >= len(self.pairs):
            return {(((2, s - len(self.pairs)),), i): Fraction(1)}
        A, B = self.pairs[s]
        out = {(((1, dk + A), (1, dk + B)), i): Fraction(1)}
        if A != B:
            for a, x in self.dec.c_pp.get((A, B), {}).items():
                _acc(out, (((2, a),), i), -x / 2)
        return out

    # -- the group
    @cached_property
    def spinor_action(self) -> list[tuple[list, list]]:
        """For each j: Y^A -> sign * Y^perm(A), the adjoint action of exp(pi X^{2j-1,2j})."""
        acts = []
        for j in range(8):
            G = self.g.two(2 * j + 1, 2 * j + 2)
            perm, sign = [0] * 128, [0] * 128
            for A in range(128):
                # coefficient map c -> Gamma c sends Y^A to sum_B Gamma_{BA} Y^B
                B, s = G.perm[A], G.sign[A]
                perm[B], sign[B] = A, s
            acts.append((perm, sign))
        return acts

    @cached_property
    def so16_action(self) -> list[list]:
        """Sign picked up by X^{IJ} under each g_j."""
        out = []
        for j in range(8):
            flip = {2 * j + 1, 2 * j + 2}
            out.append([-1 if ((I in flip) != (J in flip)) else 1 for I, J in so16_pairs()])
        return out

    def g_on_basis(self, j: int, b: int) -> tuple[int, int]:
        s, i = divmod(b, 16)
        sign = -1 if i in (2 * j, 2 * j + 1) else 1
        if s >= len(self.pairs):
            a = s - len(self.pairs)
            return b, sign * self.so16_action[j][a]
        perm, sg = self.spinor_action[j]
        A, B = self.pairs[s]
        A2, B2 = perm[A], perm[B]
        key = (A2, B2) if A2 <= B2 else (B2, A2)
        return self.pair_index[key] * 16 + i, sign * sg[A] * sg[B]

    def g_on_element(self, j: int, vec: dict) -> dict:
        """Apply g_j to a PBW-coordinate vector of any level (checks equivariance)."""
        dk = self.dk
        perm, sg = self.spinor_action[j]
        out: dict = {}
        for (w, i), c in vec.items():
            s = -1 if i in (2 * j, 2 * j + 1) else 1
            seq = []
            for d, u in w:
                if u >= dk:
                    seq.append((d, dk + perm[u - dk]))
                    s *= sg[u - dk]
                else:
                    seq.append((d, u))
                    s *= self.so16_action[j][u]
            for w2, c2 in self.mod.normal_order(seq).items():
                _acc(out, (w2, i), s * c * c2)
        return out

    @cached_property
    def orbits(self):
        """(orbit_of, rep list, h mask, sigma, constraints per orbit)."""
        n = self.dim
        orbit_of = [-1] * n
        h = [0] * n
        sigma = [0] * n
        reps, constraints = [], []
        for r in range(n):
            if orbit_of[r] >= 0:
                continue
            o = len(reps)
            reps.append(r)
            cons = set()
            orbit_of[r], h[r], sigma[r] = o, 0, 1
            stack = [r]
            while stack:
                b = stack.pop()
                for j in range(8):
                    b2, s = self.g_on_basis(j, b)
                    m2, s2 = h[b] ^ (1 << j), sigma[b] * s
                    if orbit_of[b2] < 0:
                        orbit_of[b2], h[b2], sigma[b2] = o, m2, s2
                        stack.append(b2)
                    elif (h[b2], sigma[b2]) != (m2, s2):
                        cons.add((h[b2] ^ m2, sigma[b2] * s2))
            constraints.append(sorted(cons))
        return orbit_of, reps, h, sigma, constraints

    def compatible(self, mask: int, o: int) -> bool:
        return all((-1) ** _PARITY[mask & hh] == s for hh, s in self.orbits[4][o])

    @cached_property
    def generator_vectors(self) -> list[dict]:
        """S_1^C chi^{IA} for one (C, A) per orbit of the spinor action, all I, in sym coordinates."""
        seen, reps = set(), []
        acts = self.spinor_action
        for C in range(128):
            for A in range(128):
                if (C, A) in seen:
                    continue
                reps.append((C, A))
                stack = [(C, A)]
                seen.add((C, A))
                while stack:
                    c, a = stack.pop()
                    for perm, _ in acts:
                        nxt = (perm[c], perm[a])
                        if nxt not in seen:
                            seen.add(nxt)
                            stack.append(nxt)
        chis = chi_1920(self.dec, self.g, 2)
        out = []
        for C, A in reps:
            for I in range(16):
                v = self.mod.act((1, self.dk + C), chis[I * 128 + A].terms)
                out.append(self.to_sym(v))
        return out

    def _prepared(self, vec: dict) -> list[tuple]:
        """Terms of ``vec`` as (orbit, h, signed value mod p)."""
        orbit_of, _, h, sigma, _ = self.orbits
        p = self.p
        return [(orbit_of[b], h[b], to_mod_p(c, p) * sigma[b] % p) for b, c in vec.items()]

    def _block_row(self, prepared: list, mask: int, col_of: dict) -> dict:
        p = self.p
        row: dict = {}
        for o, hb, x in prepared:
            col = col_of.get(o)
            if col is None:
                continue
            if _PARITY[mask & hb]:
                x = p - x
            row[col] = (row.get(col, 0) + x) % p
        return {k: v for k, v in row.items() if v}

    @cached_property
    def _casimir_cache(self) -> dict:
        return {}

    def casimir_on_rep(self, o: int) -> dict:
        cache = self._casimir_cache
        if o not in cache:
            r = self.orbits[1][o]
            cache[o] = self._prepared(self.to_sym(self.mod.casimir(self.from_sym(r))))
        return cache[o]

    def run(self, candidates: dict | None = None, with_casimir: bool = True) -> dict:
        candidates = candidates or d8_casimir_candidates()
        _, reps, _, _, _ = self.orbits
        gens = [self._prepared(v) for v in self.generator_vectors]
        dim_W = 0
        eig: Counter = Counter()
        p = self.p
        for mask in range(256):
            cols = [o for o in range(len(reps)) if self.compatible(mask, o)]
            col_of = {o: k for k, o in enumerate(cols)}
            rows = [self._block_row(v, mask, col_of) for v in gens]
            rows = [r for r in rows if r]
            rank, pivots, red = _rref(rows, len(cols), p)
            dim_W += rank
            if with_casimir and rank < len(cols):
                def image(j, mask=mask, col_of=col_of, cols=cols):
                    return self._block_row(self.casimir_on_rep(cols[j]), mask, col_of)
                mat = _quotient_casimir_matrix(rank, pivots, red, len(cols), image, p)
                for item in split_by_casimir(mat, candidates, p):
                    eig[item["eigenvalue"]] += item["dimension"]
        split = [{"eigenvalue": k, "dimension": v,
                  "candidates": [{"dim": d, "labels": list(l)}
                                 for d, l in candidates[Fraction(k)]]} for k, v in sorted(
                      eig.items(), key=lambda kv: Fraction(kv[0]))]
        return {"dim_V": self.dim, "dim_W": dim_W, "dim_quotient": self.dim - dim_W,
                "casimir_split": split if with_casimir else None}


def e8_quotient_levels(g, N: int = 2, p: int = DEFAULT_PRIME, exact: bool = False) -> list[dict]:
    """Quotient data of U(N+) (x) 16 by the submodule generated by the 1920 at level 1."""
    from .classical_decomposition import build_e8
    if N > 2:
        raise ValueError("levels above 2 are not supported for the e8 quotient")
    dec = build_e8(g)
    rep0 = build_rep0(dec, "16")
    mod = InducedModule(dec, rep0, min(N, 1))
    sub = submodule_generate(dec, rep0, min(N, 1), chi_1920(dec, g, min(N, 1)), p=p, exact=exact, module=mod)
    out = []
    for ld in sub.levels:
        out.append({"level": ld.level, "dim_V": ld.dim_V, "dim_W": ld.dim_W, "dim_quotient": ld.dim_quotient,
                    "casimir_split": casimir_split(sub, ld.level)})
        if exact:
            out[-1]["exact_dim_W"] = ld.exact_dim_W
    if N >= 2:
        lv2 = E8LevelTwo(dec, g, p).run()
        lv2["level"] = 2
        out.append(lv2)
    return out


def spin32_dims(levels: list[dict], drop_value=39) -> list[int]:
    """Dimensions after removing the Casimir-``drop_value`` piece at level 2 and all higher levels."""
    dims = []
    for lv in levels:
        if lv["level"] > 2:
            break
        d = lv["dim_quotient"]
        if lv["level"] == 2:
            d -= sum(x["dimension"] for x in lv["casimir_split"] if Fraction(x["eigenvalue"]) == drop_value)
        dims.append(d)
    return dims
