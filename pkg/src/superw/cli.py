"""Command line entry point: emit bracket tables and run verification suites.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from . import serialize as ser
from .graded import GradedDim, ThetaData, transpose_order
from .superpoly import UncoveredPair, check_jacobi

SUITES = ("jacobi", "closedforms", "iso", "ideal", "twist", "fold", "reps", "clebsch", "tau")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    M: int
    N: int
    p: int
    max_dim: int = 8

    def validate(self, need_even: bool = False):
        if self.p < 1:
            raise ConfigError("p must be at least 1")
        if self.M < 0 or self.N < 0 or self.M + self.N < 1:
            raise ConfigError(f"invalid graded dimension ({self.M}|{self.N})")
        if (self.M + self.N) * self.p > self.max_dim:
            raise ConfigError(f"(M+N)p = {(self.M + self.N) * self.p} exceeds --max-dim {self.max_dim}")
        if need_even and self.N % 2:
            raise ConfigError("this suite needs N = 2n even")


def thread_cap() -> int:
    """SUPERW_THREADS caps parallelism; all work here runs on one thread."""
    raw = os.environ.get("SUPERW_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"SUPERW_THREADS={raw!r} is not an integer") from None
    if n < 1:
        raise ConfigError("SUPERW_THREADS must be positive")
    return min(n, 1)


# ---- table documents ---------------------------------------------------------

def clebsch_document(p: int) -> dict:
    from .sl2 import clebsch, verify_swap_symmetry
    C = clebsch(p)
    coeffs = [{"j": j, "m": m, "k": k, "l": l, "r": r, "s": s, "coeff": ser.coeff_str(v)}
              for (j, m, k, l, r, s), v in sorted(C.coeffs.items())]
    eta = [ser.coeff_str(C.eta[r]) for r in range(p)]
    swap = [list(t) for t in verify_swap_symmetry(p)]
    return {"metadata": {"suite": "clebsch", "p": p, "version": ser.VERSION},
            "coefficients": coeffs, "eta": eta, "swap_symmetry_violations": swap}


def w_document(table, cfg: RunConfig) -> dict:
    # solder and dirac describe the same algebra and share one document shape
    return ser.table_document(table, "W", cfg.M, cfg.N, cfg.p)


def solder_table(cfg: RunConfig):
    from .wgen import solder_brackets, solve_lambda
    return solder_brackets(solve_lambda(cfg.M, cfg.N, cfg.p))


def dirac_table(cfg: RunConfig):
    from .wgen import dirac_brackets
    return dirac_brackets(cfg.M, cfg.N, cfg.p).table


def yangian_table(cfg: RunConfig):
    from .yangtwist import yangian_pb_table
    return yangian_pb_table(cfg.M, cfg.N, cfg.p).table


def twist_table(cfg: RunConfig):
    from .yangtwist import twisted_table
    return twisted_table(cfg.M, cfg.N, cfg.p)


# ---- verification suites -----------------------------------------------------

def _residuals(items) -> list:
    return [ser.residual_record(k, v) for k, v in items]


def _check(name: str, residuals: list, **info) -> dict:
    return {"check": name, "ok": not residuals, "residuals": residuals, **info}


def suite_jacobi(cfg: RunConfig, infile: str | None) -> list:
    if infile:
        table = ser.table_from_document(ser.load(infile))
        try:
            rep = check_jacobi(table)
        except UncoveredPair as exc:
            return [_check(f"jacobi:{infile}", [{"where": "table", "residual": str(exc)}])]
        return [_check(f"jacobi:{infile}", _residuals(rep.violations), triples=rep.checked)]
    cfg.validate()
    from .yangtwist import fold_and_compare
    tables = [("solder", solder_table(cfg)), ("dirac", dirac_table(cfg)),
              ("yangian", yangian_table(cfg))]
    if cfg.N % 2 == 0:
        tables.append(("twisted", twist_table(cfg)))
        tables.append(("folded", fold_and_compare(cfg.M, cfg.N, cfg.p).table))
    out = []
    for name, table in tables:
        rep = check_jacobi(table)
        out.append(_check(f"jacobi:{name}", _residuals(rep.violations), triples=rep.checked))
    return out


def suite_closedforms(cfg: RunConfig) -> list:
    from .wgen import closed_form_rows
    cfg.validate()
    rows = closed_form_rows(solder_table(cfg), GradedDim(cfg.M, cfg.N), cfg.p)
    return [_check("closedforms", _residuals(rows.items()))]


def suite_iso(cfg: RunConfig) -> list:
    from .wgen import build_bar_basis
    from .yangtwist import iso_check
    cfg.validate()
    table = solder_table(cfg)
    minus = build_bar_basis(-1, table, GradedDim(cfg.M, cfg.N), cfg.p)
    rep = iso_check(cfg.M, cfg.N, cfg.p, table, minus)
    res = _residuals(rep.residuals.items())
    if not rep.truncation_ok:
        res.append({"where": "truncation", "residual": "Wbar_j nonzero for j >= p"})
    return [_check("iso", res, pairs=rep.checked)]


def suite_ideal(cfg: RunConfig) -> list:
    from .yangtwist import verify_poisson_ideal
    cfg.validate()
    rep = verify_poisson_ideal(cfg.M, cfg.N, cfg.p)
    return [_check("ideal", [ser.residual_record((x, y), str(m)) for x, y, m in rep.offenders],
                   pairs=rep.checked)]


def suite_twist(cfg: RunConfig) -> list:
    from .yangtwist import build_S_generators, twisted_pb_check, yangian_pb_table
    cfg.validate(need_even=True)
    sg = build_S_generators(cfg.M, cfg.N, cfg.p)
    rep = twisted_pb_check(sg, yangian_pb_table(cfg.M, cfg.N, cfg.p))
    return [_check("twist:symmetry", _residuals(rep.symmetry.failures.items())),
            _check("twist:relation", _residuals(rep.residuals.items()), levels=rep.checked)]


def suite_fold(cfg: RunConfig) -> list:
    from .yangtwist import fold_and_compare
    cfg.validate(need_even=True)
    r = fold_and_compare(cfg.M, cfg.N, cfg.p)
    count = [] if r.count == r.expected_count else [
        {"where": "count", "residual": f"{r.count} != {r.expected_count}"}]
    return [_check("fold:count", count, count=r.count),
            _check("fold:formula", _residuals(r.formula_residuals.items())),
            _check("fold:twisted", _residuals(r.twisted_residuals.items()))]


def suite_tau(cfg: RunConfig) -> list:
    from .sl2 import fold_fixed_subalgebra, structure_constants_J, tau_on_J
    cfg.validate(need_even=True)
    st = structure_constants_J(cfg.M, cfg.N, cfg.p)
    th = ThetaData.from_dim(st.dim)
    rep = tau_on_J(st, th)
    order = transpose_order(th)
    fr = fold_fixed_subalgebra(st, th)
    dim_res = [] if fr.fixed_dimension == fr.expected_dimension else [
        {"where": "fixed dimension", "residual": f"{fr.fixed_dimension} != {fr.expected_dimension}"}]
    return [_check("tau:automorphism", _residuals((x, "bracket") for x in rep.bracket_failures)),
            _check("tau:involution", _residuals((x, "tau^2") for x in rep.involution_failures)),
            _check("tau:order", [] if order == 2 else [{"where": "order", "residual": str(order)}]),
            _check("tau:closure", _residuals((x, "closure") for x in fr.closure_failures
                                             + fr.symmetry_failures + fr.formula_failures)),
            _check("tau:fixed-dimension", dim_res, fixed=fr.fixed_dimension,
                   expected=fr.expected_dimension)]


def suite_reps(cfg: RunConfig) -> list:
    from .reps import (check_defining_relations, evaluation_rep, fundamental_rep, highest_weight,
                       level_nonzero, tensor_eval)
    cfg.validate()
    ev = evaluation_rep(fundamental_rep(cfg.M, cfg.N))
    out = []
    rel = check_defining_relations(ev, 3)
    out.append(_check("reps:evaluation", _residuals((f, "relation") for f in rel.failures)))
    for s in range(2, min(cfg.p, 3) + 1):
        tp = tensor_eval([ev] * s)
        rel = check_defining_relations(tp, s + 1)
        out.append(_check(f"reps:tensor{s}", _residuals((f, "relation") for f in rel.failures)))
        tens = [] if level_nonzero(tp, s) and not level_nonzero(tp, s + 1) else [
            {"where": f"level {s}/{s + 1}", "residual": "tensW fails"}]
        out.append(_check(f"reps:tensW{s}", tens))
    hw = highest_weight(ev)
    bad = [] if hw.kernel_dim == 1 and hw.lambdas[1] == (1,) else [
        {"where": "highest weight", "residual": f"kernel {hw.kernel_dim}, {hw.lambdas}"}]
    out.append(_check("reps:highest-weight", bad))
    return out


def suite_clebsch(cfg: RunConfig) -> list:
    from .sl2 import verify_product_law, verify_supertrace_closed_form, verify_swap_symmetry
    if cfg.p < 1 or cfg.p > cfg.max_dim:
        raise ConfigError(f"p = {cfg.p} out of bounds")
    p = cfg.p
    return [_check("clebsch:product", _residuals((t, "product") for t in verify_product_law(p))),
            _check("clebsch:swap", _residuals((t, "swap") for t in verify_swap_symmetry(p))),
            _check("clebsch:supertrace",
                   _residuals((k, "supertrace") for k in verify_supertrace_closed_form(p)))]


# ---- argument handling -------------------------------------------------------

def _add_cfg(sp, need_p=True):
    sp.add_argument("--M", type=int, default=None)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--N", type=int, default=None)
    g.add_argument("--n", type=int, default=None, help="N = 2n")
    sp.add_argument("--p", type=int, default=None, required=need_p)
    sp.add_argument("--out", default=None)
    sp.add_argument("--max-dim", type=int, default=8)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="superw", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("clebsch", "solder", "dirac", "yangian", "twist"):
        _add_cfg(sub.add_parser(name))
    v = sub.add_parser("verify")
    v.add_argument("suite_pos", nargs="?", metavar="suite")
    v.add_argument("--suite", default=None)
    v.add_argument("--in", dest="infile", default=None)
    _add_cfg(v, need_p=False)
    return ap


def _config(args, need_mn=True) -> RunConfig:
    if args.p is None:
        raise ConfigError("--p is required")
    N = args.N if args.N is not None else (2 * args.n if args.n is not None else None)
    if need_mn and (args.M is None or N is None):
        raise ConfigError("--M and --N (or --n) are required")
    return RunConfig(args.M or 0, N or 0, args.p, args.max_dim)


def _emit(doc: dict, out: str | None):
    text = ser.dumps(doc)
    if out:
        ser.write_atomic(out, text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        thread_cap()
        cmd = args.command
        if cmd == "clebsch":
            cfg = _config(args, need_mn=False)
            if cfg.p < 1 or cfg.p > cfg.max_dim:
                raise ConfigError(f"p = {cfg.p} out of bounds")
            _emit(clebsch_document(cfg.p), args.out)
            return 0
        if cmd == "verify":
            suite = args.suite or args.suite_pos
            if suite not in SUITES:
                raise ConfigError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
            if suite == "jacobi" and args.infile:
                checks = suite_jacobi(None, args.infile)
                meta = {"suite": suite, "input": args.infile}
            else:
                cfg = _config(args, need_mn=suite != "clebsch")
                fn = globals()[f"suite_{suite}"]
                checks = fn(cfg, None) if suite == "jacobi" else fn(cfg)
                meta = {"suite": suite, "M": cfg.M, "N": cfg.N, "p": cfg.p}
            ok = all(c["ok"] for c in checks)
            report = {"metadata": {**meta, "version": ser.VERSION}, "ok": ok, "checks": checks}
            _emit(report, args.out)
            return 0 if ok else 1
        cfg = _config(args)
        if cmd == "twist":
            cfg.validate(need_even=True)
        else:
            cfg.validate()
        if cmd in ("solder", "dirac"):
            table = solder_table(cfg) if cmd == "solder" else dirac_table(cfg)
            doc = w_document(table, cfg)
        elif cmd == "yangian":
            doc = ser.table_document(yangian_table(cfg), "yangian", cfg.M, cfg.N, cfg.p)
        else:
            doc = ser.table_document(twist_table(cfg), "twist", cfg.M, cfg.N, cfg.p)
        _emit(doc, args.out)
        return 0
    except (ConfigError, ser.DocumentError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
