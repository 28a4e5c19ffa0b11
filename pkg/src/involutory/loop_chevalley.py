"""Untwisted affine algebras L(g) + K + d in a Chevalley basis, Berman generators and
the check that k(E9)(C) receives the generators of the GIM algebra of B4-diamond.

Elements are dicts with keys ``(m, b)`` (mode m, Chevalley basis index b of the
finite algebra), ``"K"`` and ``"d"``; coefficients are Fractions or Gaussian rationals.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .classical_decomposition import _acc
from .exact_linalg import GaussianRational, I, format_scalar
from .filtered_k import CheckResult
from .root_data import ChevalleyAlgebra, build_root_system, chevalley_constants


class BadNode(ValueError):
    pass


class NodeMapError(RuntimeError):
    pass


@dataclass
class LoopElement:
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {k: v for k, v in self.terms.items() if v}

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return LoopElement(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return LoopElement({k: c * v for k, v in self.terms.items()})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, LoopElement) and not (self - other).terms


class LoopAlgebra:
    """L(g) + K + d with [d, t^m x] = -m t^m x and cocycle m delta_{m,-n} (x, y) K."""

    def __init__(self, alg: ChevalleyAlgebra):
        self.alg = alg

    def bracket(self, x: LoopElement, y: LoopElement) -> LoopElement:
        alg = self.alg
        out: dict = {}
        for ka, ca in x.terms.items():
            for kb, cb in y.terms.items():
                if ka == "K" or kb == "K":
                    continue
                c = ca * cb
                if ka == "d":
                    if kb != "d":
                        _acc(out, kb, -kb[0] * c)
                    continue
                if kb == "d":
                    _acc(out, ka, ka[0] * c)
                    continue
                (m, a), (n, b) = ka, kb
                for w, v in alg.bracket_basis(a, b).items():
                    _acc(out, (m + n, w), c * v)
                if m and m + n == 0:
                    f = alg.form_basis(a, b)
                    if f:
                        _acc(out, "K", m * f * c)
        return LoopElement(out)

    def omega(self, x: LoopElement) -> LoopElement:
        out: dict = {}
        for k, c in x.terms.items():
            if k in ("K", "d"):
                _acc(out, k, -c)
                continue
            m, a = k
            b, s = self.alg.omega_basis(a)
            _acc(out, (-m, b), s * c)
        return LoopElement(out)

    def ad_power(self, x: LoopElement, k: int, y: LoopElement) -> LoopElement:
        for _ in range(k):
            y = self.bracket(x, y)
        return y

    # -- affine Chevalley generators
    @property
    def n_nodes(self) -> int:
        return self.alg.rank + 1

    def chevalley_e(self, i: int) -> LoopElement:
        self._check_node(i)
        rs = self.alg.rs
        if i == 0:
            theta = rs.highest_root
            return LoopElement({(1, self.alg.index_of_root(tuple(-c for c in theta))): Fraction(1)})
        return LoopElement({(0, self.alg.index_of_root(_unit(rs.rank, i - 1))): Fraction(1)})

    def chevalley_f(self, i: int) -> LoopElement:
        self._check_node(i)
        rs = self.alg.rs
        if i == 0:
            return LoopElement({(-1, self.alg.index_of_root(rs.highest_root)): Fraction(1)})
        return LoopElement({(0, self.alg.index_of_root(_unit(rs.rank, i - 1, -1))): Fraction(1)})

    def berman_generator(self, i: int) -> LoopElement:
        return self.chevalley_e(i) - self.chevalley_f(i)

    def _check_node(self, i):
        if not 0 <= i < self.n_nodes:
            raise BadNode(f"node {i} outside 0..{self.n_nodes - 1}")

    @property
    def affine_cartan(self) -> list[list[int]]:
        """Generalised Cartan matrix, node 0 is the affine node."""
        rs = self.alg.rs
        n = rs.rank
        roots = [tuple(-c for c in rs.highest_root)] + [_unit(n, i) for i in range(n)]
        return [[int(2 * rs.ip(a, b) / rs.norm2(b)) for b in roots] for a in roots]

    def fixed_dimension(self, M: int) -> int:
        """Dimension of the omega-fixed subspace of modes |m| <= M (K and d included)."""
        seen, count = set(), 0
        basis = [(m, b) for m in range(-M, M + 1) for b in range(self.alg.dim)] + ["K", "d"]
        for k in basis:
            if k in seen:
                continue
            img = self.omega(LoopElement({k: Fraction(1)})).terms
            (k2, s), = img.items()
            seen.update((k, k2))
            if k2 != k:
                count += 1
            elif s == 1:
                count += 1
        return count


def _unit(n, i, v=1):
    return tuple(v if j == i else 0 for j in range(n))


def predicted_fixed_dimension(alg: ChevalleyAlgebra, M: int) -> int:
    """Count of the X-type and Y-type basis elements with modes up to M."""
    npos = len(alg.rs.positive_roots)
    return npos + M * alg.dim


def jacobi_random(loop: LoopAlgebra, n: int = 10_000, seed: int = 0, max_mode: int = 3) -> int:
    rng = random.Random(seed)
    dim = loop.alg.dim

    def rand():
        k = rng.random()
        if k < 0.05:
            return LoopElement({"d": Fraction(1)})
        if k < 0.08:
            return LoopElement({"K": Fraction(1)})
        return LoopElement({(rng.randint(-max_mode, max_mode), rng.randrange(dim)): Fraction(rng.randint(1, 3))})

    bad = 0
    for _ in range(n):
        x, y, z = rand(), rand(), rand()
        s = (loop.bracket(x, loop.bracket(y, z)) + loop.bracket(y, loop.bracket(z, x))
             + loop.bracket(z, loop.bracket(x, y)))
        bad += bool(s)
    return bad


def build_e9() -> LoopAlgebra:
    rs = build_root_system("E", 8)
    return LoopAlgebra(ChevalleyAlgebra(rs, chevalley_constants(rs, verify=False)))


def berman_relation_defects(loop: LoopAlgebra) -> list[tuple[int, int]]:
    """Ordered node pairs violating [x_i, x_j] = 0 (A_ij = 0) or ad(x_i)^2 x_j = -x_j (A_ij = -1)."""
    A = loop.affine_cartan
    xs = [loop.berman_generator(i) for i in range(loop.n_nodes)]
    bad = []
    for i, j in itertools.permutations(range(loop.n_nodes), 2):
        if A[i][j] == 0:
            ok = not loop.bracket(xs[i], xs[j])
        elif A[i][j] == -1:
            ok = loop.ad_power(xs[i], 2, xs[j]) == xs[j].scale(-1)
        else:
            continue
        if not ok:
            bad.append((i, j))
    return bad


# ---------------------------------------------------------------- node dictionary

def find_node_map(loop: LoopAlgebra) -> list[int]:
    """alpha_1..alpha_8 along an A8 chain, alpha_9 the remaining node attached to alpha_3.

    Returns loop node numbers for alpha_1..alpha_9; raises if the choice is not unique.
    """
    A = loop.affine_cartan
    n = loop.n_nodes
    adj = {i: {j for j in range(n) if j != i and A[i][j]} for i in range(n)}
    found = []
    for path in itertools.permutations(range(n), 8):
        if any(path[k + 1] not in adj[path[k]] for k in range(7)):
            continue
        if any(abs(a - b) > 1 and path[b] in adj[path[a]] for a in range(8) for b in range(8)):
            continue
        rest = [v for v in range(n) if v not in path]
        if len(rest) != 1:
            continue
        nine = rest[0]
        if adj[nine] == {path[2]}:
            found.append(list(path) + [nine])
    if len(found) != 1:
        raise NodeMapError(f"expected a unique A8 chain with the extra node on alpha_3, found {len(found)}")
    return found[0]


# ---------------------------------------------------------------- the B4 / GIM check

class GimCheck:
    def __init__(self, loop: LoopAlgebra | None = None, node_map: list[int] | None = None,
                 literal_short_roots: bool = False):
        self.loop = loop or build_e9()
        self.node_map = node_map or find_node_map(self.loop)
        if sorted(self.node_map) != list(range(self.loop.n_nodes)):
            raise NodeMapError("node map must be a permutation of the E9 nodes")
        self.literal_short_roots = literal_short_roots
        self._x: dict = {}

    def x(self, *seq) -> LoopElement:
        """[x_{i1}, [x_{i2}, ... [x_{ik-1}, x_{ik}]]] in the alpha numbering."""
        key = tuple(seq)
        if key not in self._x:
            if len(seq) == 1:
                v = self.loop.berman_generator(self.node_map[seq[0] - 1])
            else:
                v = self.loop.bracket(self.x(seq[0]), self.x(*seq[1:]))
            self._x[key] = v
        return self._x[key]

    def H(self, j: int) -> LoopElement:
        return self.x(2 * j - 1).scale(-I)

    def long_root(self, e1: int, i: int, e2: int, j: int) -> LoopElement:
        """e_{e1 L_i + e2 L_j} for i < j."""
        b1 = self.x(*range(2 * i, 2 * j))
        b2 = self.x(*range(2 * i, 2 * j - 1))
        b3 = self.x(*range(2 * i - 1, 2 * j))
        b4 = self.x(*range(2 * i - 1, 2 * j - 1))
        tot = b1 - b2.scale(I * e2) - b3.scale(I * e1) - b4.scale(e1 * e2)
        return tot.scale(I / 2)

    def short_root(self, s: int, j: int) -> LoopElement:
        a = self.x(*range(2 * j, 9))
        b = self.x(2 * j - 1, 2 * j) if self.literal_short_roots else self.x(*range(2 * j - 1, 9))
        return (a - b.scale(I * s)).scale(I)

    def root_vector(self, root: tuple) -> LoopElement:
        """root as a 4-tuple of L-coefficients."""
        nz = [(k, c) for k, c in enumerate(root) if c]
        if len(nz) == 1:
            (k, c), = nz
            return self.short_root(c, k + 1)
        (i, e1), (j, e2) = nz
        return self.long_root(e1, i + 1, e2, j + 1)

    @staticmethod
    def b4_roots() -> list[tuple]:
        out = []
        for i, j in itertools.combinations(range(4), 2):
            for e1, e2 in itertools.product((1, -1), repeat=2):
                r = [0] * 4
                r[i], r[j] = e1, e2
                out.append(tuple(r))
        for j in range(4):
            for s in (1, -1):
                r = [0] * 4
                r[j] = s
                out.append(tuple(r))
        return out

    # Chevalley basis of B4
    def e(self, i):
        if i == 4:
            return self.root_vector((0, 0, 0, 1))
        r = [0] * 4
        r[i - 1], r[i] = 1, -1
        return self.root_vector(tuple(r))

    def f(self, i):
        if i == 4:
            return self.root_vector((0, 0, 0, -1))
        r = [0] * 4
        r[i - 1], r[i] = -1, 1
        return self.root_vector(tuple(r))

    def h(self, i):
        return self.H(4).scale(2) if i == 4 else self.H(i) - self.H(i + 1)

    @property
    def x_plus(self):
        return (self.x(9) - self.x(3, 9).scale(I)).scale(I)

    @property
    def x_minus(self):
        return (self.x(9) + self.x(3, 9).scale(I)).scale(I)

    # -- relation bookkeeping
    def _rel(self, rid, tag, lhs: LoopElement, rhs: LoopElement, allow_scalar: bool = False) -> dict:
        diff = lhs - rhs
        status, details = "pass", {}
        if diff:
            status = "fail"
            if allow_scalar and lhs and rhs:
                c = _proportional(lhs, rhs)
                if c is not None:
                    status = "convention-mismatch"
                    details["scalar"] = format_scalar(c)
        return {"id": rid, "paper_tag": tag, "status": status, "residual_norm": _norm(diff), "details": details}

    def relations(self) -> list[dict]:
        L = self.loop
        br = L.bracket
        out = []
        zero = LoopElement()
        H = {j: self.H(j) for j in range(1, 5)}
        roots = self.b4_roots()
        # so(9) root decomposition
        for r in roots:
            v = self.root_vector(r)
            nonzero = bool(v)
            for j in range(1, 5):
                rel = self._rel(f"so9-eigen[{_rname(r)}][H{j}]", "so9-root-decomposition",
                                br(H[j], v), v.scale(r[j - 1]))
                if not nonzero:
                    rel["status"], rel["details"] = "fail", {"reason": "root vector vanishes"}
                out.append(rel)
        for a, b in itertools.combinations(range(1, 5), 2):
            out.append(self._rel(f"cartan-commute[H{a},H{b}]", "so9-root-decomposition", br(H[a], H[b]), zero))
        # Chevalley basis of B4
        B4 = [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -1, 2, -1], [0, 0, -2, 2]]
        for i in range(1, 5):
            for j in range(1, 5):
                if i == j:
                    out.append(self._rel(f"chev[e{i},f{i}]", "so9-chevalley-basis", br(self.e(i), self.f(i)),
                                         self.h(i), allow_scalar=True))
                else:
                    out.append(self._rel(f"chev[e{i},f{j}]", "so9-chevalley-basis", br(self.e(i), self.f(j)), zero))
                out.append(self._rel(f"chev[h{i},e{j}]", "so9-chevalley-basis", br(self.h(i), self.e(j)),
                                     self.e(j).scale(B4[i - 1][j - 1])))
                out.append(self._rel(f"chev[h{i},f{j}]", "so9-chevalley-basis", br(self.h(i), self.f(j)),
                                     self.f(j).scale(-B4[i - 1][j - 1])))
        xp, xm = self.x_plus, self.x_minus
        e = {i: self.e(i) for i in range(1, 5)}
        f = {i: self.f(i) for i in range(1, 5)}
        # X-relations
        out.append(self._rel("X1[x+,x-]", "X-relations-1", br(xp, xm), H[2].scale(2)))
        out.append(self._rel("X1[H2,x+]", "X-relations-1", br(H[2], xp), xp))
        out.append(self._rel("X1[H2,x-]", "X-relations-1", br(H[2], xm), xm.scale(-1)))
        for j in (1, 3, 4):
            out.append(self._rel(f"X1[H{j},x+]", "X-relations-1", br(H[j], xp), zero))
            out.append(self._rel(f"X1[H{j},x-]", "X-relations-1", br(H[j], xm), zero))
        set_a = {"f1": f[1], "e2": e[2], "e3": e[3], "e4": e[4], "f3": f[3], "f4": f[4]}
        set_b = {"e1": e[1], "f2": f[2], "e3": e[3], "e4": e[4], "f3": f[3], "f4": f[4]}
        for name, y in set_a.items():
            out.append(self._rel(f"X2[x+,{name}]", "X-relations-2", br(xp, y), zero))
        for name, y in set_b.items():
            out.append(self._rel(f"X3ad(x+)^3({name})", "X-relations-3", L.ad_power(xp, 3, y), zero))
            out.append(self._rel(f"X3ad({name})^2(x+)", "X-relations-3", L.ad_power(y, 2, xp), zero))
            out.append(self._rel(f"X4[x-,{name}]", "X-relations-4", br(xm, y), zero))
        for name, y in set_a.items():
            out.append(self._rel(f"X5ad(x-)^3({name})", "X-relations-5", L.ad_power(xm, 3, y), zero))
            out.append(self._rel(f"X5ad({name})^2(x-)", "X-relations-5", L.ad_power(y, 2, xm), zero))
        # relations that hold in the image but are not defining
        for eps in (1, -1):
            e_m = self.root_vector((eps, -1, 0, 0))
            e_p = self.root_vector((eps, 1, 0, 0))
            target = self.x(2, 3, 9) - self.x(1, 2, 3, 9).scale(I * eps)
            out.append(self._rel(f"N1[x+,e({eps}L1-L2)]", "non-defining-1", br(xp, e_m), target))
            out.append(self._rel(f"N1[x-,e({eps}L1+L2)]", "non-defining-1", br(xm, e_p), target))
            out.append(self._rel(f"N2ad(x+)^2(e({eps}L1-L2))", "non-defining-2", L.ad_power(xp, 2, e_m), e_p.scale(2)))
            out.append(self._rel(f"N2ad(x-)^2(e({eps}L1+L2))", "non-defining-2", L.ad_power(xm, 2, e_p), e_m.scale(2)))
            u_p = self.root_vector((0, 1, eps, 0))
            u_m = self.root_vector((0, -1, eps, 0))
            out.append(self._rel(f"N3[x+,e(L2+{eps}L3)]", "non-defining-3", br(xp, u_p), zero))
            out.append(self._rel(f"N3[x-,e(-L2+{eps}L3)]", "non-defining-3", br(xm, u_m), zero))
            t4 = self.x(9, 3, 4).scale(-eps) - self.x(9, 3, 4, 5).scale(I)
            out.append(self._rel(f"N4[x+,e(-L2+{eps}L3)]", "non-defining-4", br(xp, u_m), t4))
            out.append(self._rel(f"N4[x-,e(L2+{eps}L3)]", "non-defining-4", br(xm, u_p), t4.scale(-1)))
            out.append(self._rel(f"N5ad(x+)^2(e(-L2+{eps}L3))", "non-defining-5", L.ad_power(xp, 2, u_m),
                                 u_p.scale(-2)))
            out.append(self._rel(f"N5ad(x-)^2(e(L2+{eps}L3))", "non-defining-5", L.ad_power(xm, 2, u_p),
                                 u_m.scale(-2)))
        out += self.gim_relations()
        return out

    def gim_images(self):
        Eg = [self.x_plus] + [self.e(i) for i in range(1, 5)]
        Fg = [self.x_minus] + [self.f(i) for i in range(1, 5)]
        Hg = [self.H(2).scale(2)] + [self.h(i) for i in range(1, 5)]
        return Eg, Fg, Hg

    def gim_relations(self) -> list[dict]:
        """Every defining relation of gim(B4-diamond) evaluated on the images of the generators."""
        L = self.loop
        A = B4_DIAMOND
        Eg, Fg, Hg = self.gim_images()
        zero = LoopElement()
        out = []
        n = len(A)
        for i, j in itertools.combinations(range(n), 2):
            out.append(self._rel(f"gim[H{i},H{j}]", "gim-definition", L.bracket(Hg[i], Hg[j]), zero))
        for i in range(n):
            for j in range(n):
                out.append(self._rel(f"gim[H{i},E{j}]", "gim-definition", L.bracket(Hg[i], Eg[j]),
                                     Eg[j].scale(A[i][j])))
                out.append(self._rel(f"gim[H{i},F{j}]", "gim-definition", L.bracket(Hg[i], Fg[j]),
                                     Fg[j].scale(-A[i][j])))
            out.append(self._rel(f"gim[E{i},F{i}]", "gim-definition", L.bracket(Eg[i], Fg[i]), Hg[i]))
        gens = {1: Eg, -1: Fg}
        for i, j in itertools.product(range(n), repeat=2):
            for s, t in itertools.product((1, -1), repeat=2):
                if i == j:
                    continue
                k = max(1, 1 - s * t * A[i][j])
                name = f"gim-ad({'E' if s > 0 else 'F'}{i})^{k}({'E' if t > 0 else 'F'}{j})"
                out.append(self._rel(name, "gim-definition", L.ad_power(gens[s][i], k, gens[t][j]), zero))
        return out


B4_DIAMOND = [[2, -2, 2, 0, 0],
              [-1, 2, -1, 0, 0],
              [1, -1, 2, -1, 0],
              [0, 0, -1, 2, -1],
              [0, 0, 0, -2, 2]]


def is_gim(A) -> bool:
    n = len(A)
    if any(A[i][i] != 2 for i in range(n)):
        return False
    return all((A[i][j] < 0) == (A[j][i] < 0) and (A[i][j] > 0) == (A[j][i] > 0)
               for i in range(n) for j in range(n) if i != j)


def _rname(r) -> str:
    parts = []
    for k, c in enumerate(r):
        if c:
            parts.append(f"{'+' if c > 0 else '-'}L{k + 1}")
    return "".join(parts)


def _norm(x: LoopElement) -> float:
    tot = 0.0
    for v in x.terms.values():
        if isinstance(v, GaussianRational):
            tot += float(abs(v.re)) + float(abs(v.im))
        else:
            tot += float(abs(v))
    return tot


def _proportional(a: LoopElement, b: LoopElement):
    if set(a.terms) != set(b.terms):
        return None
    k = next(iter(a.terms))
    c = GaussianRational(0) + a.terms[k]
    c = c / (GaussianRational(0) + b.terms[k])
    return c if a == b.scale(c) else None


def check_gim_homomorphism(node_map: list[int] | None = None, literal_short_roots: bool = False) -> list[dict]:
    return GimCheck(node_map=node_map, literal_short_roots=literal_short_roots).relations()


def summarize(relations: list[dict]) -> CheckResult:
    counts: dict = {}
    for r in relations:
        counts[r["status"]] = counts.get(r["status"], 0) + 1
    status = "pass" if counts.get("fail", 0) == 0 and counts.get("convention-mismatch", 0) == 0 else (
        "fail" if counts.get("fail") else "convention-mismatch")
    return CheckResult("gim-homomorphism", status, {"counts": counts})
