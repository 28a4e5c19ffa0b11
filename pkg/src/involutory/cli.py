"""Command-line entry point: one verification or computation per subcommand.

Every subcommand writes a JSON report ``{subcommand, config, checks, timing}``
(hilbert-demo can also write CSV). Exit status: 0 when every check passes,
1 when any check does not, 2 on configuration errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import flint

from .exact_linalg import DEFAULT_PRIME

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    options: dict = field(default_factory=dict)


def _check(cid: str, tag: str, status: str, details: dict | None = None) -> dict:
    return {"id": cid, "paper_tag": tag, "status": status, "details": details or {}}


def _from_result(r, tag: str) -> dict:
    return _check(r.id, tag, r.status, r.details)


def _json_default(o):
    if isinstance(o, Fraction):
        return f"{o.numerator}/{o.denominator}"
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


# ---------------------------------------------------------------- algebra selection

def _load_algebra(name: str):
    from .classical_decomposition import ClassicalDecomposition, build

    if name in ("e8", "sl2"):
        return build(name)
    path = Path(name)
    if not path.is_file():
        raise ConfigError(f"unknown algebra {name!r} (expected e8, sl2 or a JSON file)")
    return ClassicalDecomposition.from_json(json.loads(path.read_text()))


def _gammas():
    from .gamma_clifford import build_gammas
    return build_gammas()


# ---------------------------------------------------------------- subcommands

def cmd_coeffs(a) -> list[dict]:
    from .parabolic import closed_form, coeff, series_coefficients

    checks = []
    bad = [[n, j] for n in range(1, 5) for j in range(2, 2 * a.k_max + 2) if coeff(n, j) != closed_form(n, j)]
    checks.append(_check("closed-forms", "coefficient-closed-forms", "pass" if not bad else "fail",
                         {"n_range": [1, 4], "k_range": [1, a.k_max], "mismatches": bad[:20]}))
    bad0 = [n for n in range(0, a.n_max + 1) if coeff(n, 0) != 2]
    checks.append(_check("a0-equals-2", "coefficient-closed-forms", "pass" if not bad0 else "fail",
                         {"n_max": a.n_max, "mismatches": bad0}))
    jmax = 2 * a.k_max + 1
    bad_s = []
    for n in range(0, min(a.n_max, 12) + 1):
        plus, minus = series_coefficients(n, jmax, 1), series_coefficients(n, jmax, -1)
        for j in range(jmax + 1):
            want = plus[j] if j % 2 == 0 else minus[j]
            if coeff(n, j) != want:
                bad_s.append([n, j])
    checks.append(_check("series-oracle", "coefficient-closed-forms", "pass" if not bad_s else "fail",
                         {"n_max": min(a.n_max, 12), "j_max": jmax, "mismatches": bad_s[:20]}))
    table = {str(n): [coeff(n, j) for j in range(a.show + 1)] for n in range(0, 5)}
    checks.append(_check("table", "coefficient-closed-forms", "pass", {"a_n_j": table}))
    return checks


def cmd_check_lemma1(a) -> list[dict]:
    from .parabolic import check_convolutions
    return [_from_result(r, "convolution-identities") for r in check_convolutions(a.max, a.max, a.k_max)]


def cmd_check_berman(a) -> list[dict]:
    from .filtered_k import berman_check_filtered
    from .parabolic import berman_check_parabolic

    dec = _load_algebra(a.algebra)
    if dec.name != "e8":
        raise ConfigError("Berman relations are stated for e8")
    g = _gammas()
    out = [_from_result(r, "berman-degree-one") for r in berman_check_filtered(dec, g, a.six_samples, a.seed)]
    out += [_from_result(r, "berman-parabolic") for r in berman_check_parabolic(dec, g, a.N, a.k_max)]
    return out


def cmd_check_clifford(a) -> list[dict]:
    from .gamma_clifford import _ordered_product, antisym_product, brute_force_antisym

    g = _gammas()
    bad = g.clifford_defects()
    out = [_check("clifford", "gamma-matrices", "pass" if not bad else "fail",
                  {"pairs_checked": 136, "defects": [list(p) for p in bad]})]
    top = _ordered_product(g, range(1, 17), True)
    chir = all(s == 1 for s in top.sign) and list(top.perm) == list(range(128))
    out.append(_check("chirality", "gamma-matrices", "pass" if chir else "fail",
                      {"gamma_1_to_16_on_AB": "identity" if chir else "other"}))
    mism = []
    for idx in ((1, 2), (3, 7, 11), (1, 2, 3, 4), (2, 5, 9, 13, 16)):
        block = "AB" if len(idx) % 2 == 0 else "AdB"
        if not (antisym_product(g, idx, block).to_dense() == brute_force_antisym(g, idx, block)).all():
            mism.append(list(idx))
    out.append(_check("antisymmetrised-products", "gamma-matrices", "pass" if not mism else "fail",
                      {"mismatches": mism}))
    return out


def cmd_check_jacobi(a) -> list[dict]:
    from .filtered_k import jacobi_filtered
    from .parabolic import jacobi_parabolic

    dec = _load_algebra(a.algebra)
    small = dec.dim <= 16
    samples = None if small else a.samples
    bad = dec.jacobi_exhaustive()
    out = [_check(f"jacobi-classical-{dec.name}", "jacobi", "pass" if not bad else "fail",
                  {"pair_defects": bad, "antisymmetry_defects": len(dec.antisymmetry_defects())})]
    if dec.antisymmetry_defects():
        out[-1]["status"] = "fail"
    out.append(_from_result(jacobi_filtered(dec, a.m_max, samples, a.seed), "jacobi"))
    out.append(_from_result(jacobi_parabolic(dec, a.N, samples, a.seed), "jacobi"))
    return out


def cmd_rho(a) -> list[dict]:
    from .parabolic import check_homomorphism

    dec = _load_algebra(a.algebra)
    return [_from_result(check_homomorphism(dec, s, a.N, a.m_max), "truncated-homomorphism") for s in a.signs]


def cmd_kernel(a) -> list[dict]:
    from .filtered_k import FilteredElement
    from .parabolic import kernel_test

    dec = _load_algebra(a.algebra)
    if a.element:
        elements = [FilteredElement.from_json(dec, json.loads(Path(a.element).read_text()))]
    else:
        # X_m - X_0 on the first k basis vector: in the kernel exactly at N = 0
        elements = [FilteredElement.X(dec, m, 0) - FilteredElement.X(dec, 0, 0) for m in range(1, a.m_max + 1)]
    out = []
    for el in elements:
        res = {str(N): kernel_test(dec, a.sign, N, el) for N in range(a.N + 1)}
        nested = all(res[str(N)] <= res[str(N - 1)] for N in range(1, a.N + 1))
        out.append(_check("kernel", "kernel-nesting", "pass" if nested else "fail",
                          {"element": el.to_json(), "in_kernel_by_N": res, "nested": nested}))
    return out


def cmd_surjectivity(a) -> list[dict]:
    from .parabolic import check_surjectivity

    dec = _load_algebra(a.algebra)
    return [_from_result(check_surjectivity(dec, a.sign, N, a.m_max), "surjectivity")
            for N in range(a.N_min, a.N + 1)]


def cmd_radical(a) -> list[dict]:
    from .parabolic import radical_check

    dec = _load_algebra(a.algebra)
    return [_from_result(r, "radical-structure") for r in radical_check(dec, a.N)]


def cmd_induce(a) -> list[dict]:
    from .classical_decomposition import build_rep0
    from .induced_reps import (InducedModule, ModuleElement, UnresolvedEigenvalue, casimir_split,
                               e8_quotient_levels, spin32_dims, submodule_generate)

    dec = _load_algebra(a.algebra)
    if a.quotient_seed == "1920s":
        if dec.name != "e8" or a.rep0 != "16":
            raise ConfigError("the 1920s seed needs --algebra e8 --rep0 16")
        if a.N > 2:
            raise ConfigError("levels above 2 are not supported for the 1920s quotient")
        levels = e8_quotient_levels(_gammas(), a.N, a.prime, a.exact)
        dims = [lv["dim_quotient"] for lv in levels]
        expected = [16, 128, 576][:a.N + 1]
        out = [_check("quotient-dims", "quotient-levels", "pass" if dims == expected else "fail",
                      {"levels": levels, "quotient_dims": dims, "expected": expected, "prime": a.prime})]
        if a.N >= 2:
            sd = spin32_dims(levels)
            out.append(_check("spin-3/2-subquotient", "quotient-levels", "pass" if sd == [16, 128, 16] else "fail",
                              {"dims": sd}))
        return out
    rep0 = build_rep0(dec, a.rep0)
    mod = InducedModule(dec, rep0, a.N)
    seeds = []
    if a.quotient_seed == "all-v0":
        seeds = [ModuleElement(a.N, {((), i): Fraction(1)}) for i in range(rep0.dim)]
    elif a.quotient_seed != "none":
        raise ConfigError(f"unknown quotient seed {a.quotient_seed!r}")
    sub = submodule_generate(dec, rep0, a.N, seeds, p=a.prime, seed=a.seed, exact=a.exact, module=mod)
    levels, unresolved = [], False
    for ld in sub.levels:
        lv = {"level": ld.level, "dim_V": ld.dim_V, "dim_W": ld.dim_W, "dim_quotient": ld.dim_quotient}
        if a.casimir:
            try:
                lv["casimir_split"] = casimir_split(sub, ld.level)
            except UnresolvedEigenvalue as exc:
                lv["casimir_split"], unresolved = str(exc), True
        if a.exact:
            lv["exact_dim_W"] = ld.exact_dim_W
        levels.append(lv)
    ok = not unresolved and all(lv["dim_V"] == mod.level_dim(lv["level"]) for lv in levels)
    if a.exact:
        ok = ok and all(lv["exact_dim_W"] == lv["dim_W"] for lv in levels)
    return [_check("induced-levels", "quotient-levels", "pass" if ok else "fail", {"levels": levels})]


def cmd_gim_check(a) -> list[dict]:
    from .loop_chevalley import check_gim_homomorphism

    node_map = None
    if a.node_map:
        try:
            node_map = [int(x) for x in a.node_map.split(",")]
        except ValueError as exc:
            raise ConfigError("node map must be nine comma-separated integers") from exc
        if len(node_map) != 9:
            raise ConfigError("node map must list nine nodes")
    rels = check_gim_homomorphism(node_map, a.literal_short_roots)
    return [{"id": r["id"], "paper_tag": r["paper_tag"], "status": r["status"],
             "details": {**r["details"], "residual_norm": r["residual_norm"]}} for r in rels]


def cmd_weyl_dim_table(a) -> list[dict]:
    from .root_data import build_root_system, so16_table, weyl_dim

    rs = build_root_system("D", 8)
    out = []
    for row in so16_table():
        d = weyl_dim(rs, row["labels"])
        name = f"{row['dim']}{row['tag']}"
        out.append(_check(f"weyl-dim[{name}]", "so16-table", "pass" if d == row["dim"] else "fail",
                          {"labels": row["labels"], "table": row["dim"], "weyl": d}))
    return out


def cmd_hilbert_demo(a) -> list[dict]:
    from .analysis_demo import default_grid, divergence_table, j_norm2

    grid = default_grid(a.max_n)
    rep = divergence_table(a.eps, grid)
    if a.csv:
        Path(a.csv).write_text(rep.to_csv())
    details = {"rows": [{"N": N, "partial_sum": S, "f_N": fN, "C1_fit": c1} for N, S, fN, c1 in rep.rows],
               "J_norm2_over_C0": j_norm2(a.max_n, a.eps)}
    out = [_check("monotone", "completion-divergence", "pass" if rep.monotone() else "fail", {})]
    lo, hi = a.max_n / 10, a.max_n
    if a.eps < 0.25:
        s = rep.slope(lo, hi)
        ok = abs(s - (1 - 4 * a.eps)) <= 0.1
        out.append(_check("growth-slope", "completion-divergence", "pass" if ok else "fail",
                          {"slope": s, "expected": 1 - 4 * a.eps, "window": [lo, hi]}))
    else:
        t = rep.tail_increment(lo, hi)
        out.append(_check("tail-increment", "completion-divergence", "pass" if t < 1e-3 else "fail",
                          {"increment": t, "threshold": 1e-3, "window": [lo, hi]}))
    out.append(_check("table", "completion-divergence", "pass", details))
    return out


COMMANDS = {
    "coeffs": cmd_coeffs,
    "check-lemma1": cmd_check_lemma1,
    "check-berman": cmd_check_berman,
    "check-clifford": cmd_check_clifford,
    "check-jacobi": cmd_check_jacobi,
    "rho": cmd_rho,
    "kernel": cmd_kernel,
    "surjectivity": cmd_surjectivity,
    "radical": cmd_radical,
    "induce": cmd_induce,
    "gim-check": cmd_gim_check,
    "weyl-dim-table": cmd_weyl_dim_table,
    "hilbert-demo": cmd_hilbert_demo,
}


# ---------------------------------------------------------------- parser

def _nonneg(x: str) -> int:
    v = int(x)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _sign(x: str) -> int:
    if x in ("+", "+1", "1"):
        return 1
    if x in ("-", "-1"):
        return -1
    raise argparse.ArgumentTypeError("sign must be + or -")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="involutory", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the JSON report here instead of stdout")
    common.add_argument("--prime", type=int, default=DEFAULT_PRIME, help="prime for mod-p certification")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--timing", action="store_true", help="record wall time (reports stop being reproducible)")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    s = add("coeffs", "Taylor coefficients a^(n)_j and their closed forms")
    s.add_argument("--k-max", type=_nonneg, default=50)
    s.add_argument("--n-max", type=_nonneg, default=50)
    s.add_argument("--show", type=_nonneg, default=8)

    s = add("check-lemma1", "convolution identities for the coefficients")
    s.add_argument("--max", type=_nonneg, default=20)
    s.add_argument("--k-max", type=_nonneg, default=40)

    s = add("check-berman", "Berman relations in the filtered and parabolic models")
    s.add_argument("--algebra", default="e8")
    s.add_argument("--N", type=_nonneg, default=8)
    s.add_argument("--k-max", type=_nonneg, default=4)
    s.add_argument("--six-samples", type=_nonneg, default=20)

    add("check-clifford", "so(16) gamma matrices")

    s = add("check-jacobi", "Jacobi identity and antisymmetry at all three layers")
    s.add_argument("--algebra", default="e8")
    s.add_argument("--samples", type=_nonneg, default=100_000)
    s.add_argument("--m-max", type=_nonneg, default=3)
    s.add_argument("--N", type=_nonneg, default=6)

    s = add("rho", "homomorphism property of rho^(N)")
    s.add_argument("--algebra", default="e8")
    s.add_argument("--N", type=_nonneg, default=8)
    s.add_argument("--m-max", type=_nonneg, default=4)
    s.add_argument("--sign", dest="signs", type=_sign, action="append")

    s = add("kernel", "kernel membership of filtered elements under rho^(N)")
    s.add_argument("--algebra", default="sl2")
    s.add_argument("--N", type=_nonneg, default=4)
    s.add_argument("--m-max", type=_nonneg, default=4)
    s.add_argument("--sign", type=_sign, default=1)
    s.add_argument("--element", help="JSON file holding a filtered element")

    s = add("surjectivity", "rank of the image of rho^(N)")
    s.add_argument("--algebra", default="e8")
    s.add_argument("--N", type=_nonneg, default=4)
    s.add_argument("--N-min", type=_nonneg, default=0)
    s.add_argument("--m-max", type=_nonneg)
    s.add_argument("--sign", type=_sign, default=1)

    s = add("radical", "solvable radical and semisimple quotient of N(P_N)")
    s.add_argument("--algebra", default="e8")
    s.add_argument("--N", type=_nonneg, default=3)

    s = add("induce", "induced modules, submodules and quotients")
    s.add_argument("--algebra", default="e8")
    s.add_argument("--rep0", default="16")
    s.add_argument("--N", type=_nonneg, default=2)
    s.add_argument("--quotient-seed", default="1920s", help="1920s, all-v0 or none")
    s.add_argument("--exact", action="store_true")
    s.add_argument("--casimir", action="store_true", help="Casimir split for the generic path")

    s = add("gim-check", "GIM(B4-diamond) relations in the E9 loop model over Q(i)")
    s.add_argument("--node-map", help="loop nodes for alpha_1..alpha_9, comma separated")
    s.add_argument("--literal-short-roots", action="store_true",
                   help="use x_{a(2j-1)+a(2j)} in the short root operators instead of the full tail")

    add("weyl-dim-table", "Weyl dimension formula against the so(16) table")

    s = add("hilbert-demo", "divergence of sum f_n^2 for the invariant-norm completion")
    s.add_argument("--eps", type=float, default=0.1)
    s.add_argument("--max-n", type=int, default=100_000)
    s.add_argument("--csv", help="write (N, partial_sum) CSV here")
    return p


def _validate(a):
    if a.prime <= 2 ** 40 or not flint.fmpz(a.prime).is_prime():
        raise ConfigError("--prime must be a prime above 2^40")
    if a.subcommand == "hilbert-demo":
        if not a.eps > 0:
            raise ConfigError("--eps must be positive")
        if a.max_n < 10:
            raise ConfigError("--max-n must be at least 10")
    if a.subcommand == "rho" and not a.signs:
        a.signs = [1, -1]


def run(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    config = {k: v for k, v in sorted(vars(a).items()) if k not in ("output", "timing")}
    t0 = time.perf_counter()
    try:
        _validate(a)
        checks = COMMANDS[a.subcommand](a)
    except (ConfigError, ValueError, FileNotFoundError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    report = {"subcommand": a.subcommand, "config": config, "checks": checks,
              "timing": {"wall_seconds": round(time.perf_counter() - t0, 3)} if a.timing else None}
    text = json.dumps(report, indent=1, sort_keys=True, default=_json_default) + "\n"
    if a.output:
        Path(a.output).write_text(text)
    else:
        sys.stdout.write(text)
    failed = [c["id"] for c in checks if c["status"] != "pass"]
    if failed:
        print(f"{len(failed)} check(s) did not pass: {', '.join(failed[:10])}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
