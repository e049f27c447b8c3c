"""Command-line front end: ``convasym {conv,rate,saddle,sample,verify}``.

Every data command writes one record, either CSV (``#`` metadata lines,
then a header and rows) or JSON with the same rows under ``"rows"``. Reals
are printed with 17 significant digits. Exit codes: 0 success, 2 usage
error, 3 saddle at the radius, 4 verification failure.
"""

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import asymptotics, ensembles, genfun, ratefn, seqcore, verify

SCHEMA_VERSION = "1"
EXIT_USAGE = 2
EXIT_EDGE = 3
EXIT_VERIFY = 4

CONV_MODES = ("exact", "closed", "asympt")
CLOSED_FAMILIES = ("catalan", "central")
BUILTIN_FAMILIES = ("catalan", "central", "central_sq", "central_cube")
RATE_ENSEMBLES = ("srwb", "dyck", "srwb2") + tuple(f"from-gf:{f}" for f in BUILTIN_FAMILIES)


class UsageError(Exception):
    pass


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(v)


def _json_value(v):
    # big integers stay exact as decimal strings
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        v = int(v)
        return v if abs(v) < 2**53 else str(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else fmt(v)
    return v


def render(command, params, columns, rows, fmt_name="csv") -> str:
    if fmt_name == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "params": {k: _json_value(v) for k, v in params.items()},
            "columns": list(columns),
            "rows": [[_json_value(v) for v in r] for r in rows],
        }
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    buf.write(f"# schema_version={SCHEMA_VERSION}\n")
    buf.write(f"# command={command}\n")
    for k, v in params.items():
        buf.write(f"# {k}={fmt(v)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


# -- commands ----------------------------------------------------------------

def cmd_conv(args):
    fam, mode = args.family, args.mode
    if mode == "closed" and fam not in CLOSED_FAMILIES:
        raise UsageError(f"--mode closed needs --family in {{{', '.join(CLOSED_FAMILIES)}}}, got {fam}")
    if args.k < 1:
        raise UsageError("--k must be >= 1")
    rows = []
    for n in args.n:
        if n < 0:
            raise UsageError("--n must be >= 0")
        if mode == "exact":
            val = seqcore.multifold_exact(fam, args.k, n)
            rows.append((n, args.k, mode, val, math.log(val)))
        elif mode == "closed":
            close = seqcore.multifold_closed_catalan if fam == "catalan" else seqcore.multifold_closed_central
            val = close(args.k, n)
            rows.append((n, args.k, mode, val, math.log(val)))
        else:
            if n < 1:
                raise UsageError("--mode asympt needs n >= 1")
            lv = asymptotics.multifold_asymptotic(genfun.make_gf(fam), args.k, n)
            val = math.exp(lv) if lv < 709.0 else None
            rows.append((n, args.k, mode, val, lv))
    params = {"family": fam, "k": args.k, "n": ",".join(str(n) for n in args.n), "mode": mode}
    return "conv", params, ("n", "k", "mode", "value", "ln_value"), rows


def cmd_rate(args):
    ens = args.ensemble
    if ens not in RATE_ENSEMBLES:
        raise UsageError(f"unknown ensemble {ens!r}; expected one of {', '.join(RATE_ENSEMBLES)}")
    if args.grid < 2:
        raise UsageError("--grid must be >= 2")
    if ens.startswith("from-gf:"):
        gf = genfun.make_gf(ens.split(":", 1)[1], args.truncation)
        rows = []
        for x in np.linspace(0.0, 1.0, args.grid):
            try:
                rows.append((float(x), ratefn.rate_at_x(gf, float(x))))
            except ValueError:
                continue  # below the reach of a truncated series
    else:
        rows = [(p.x, p.i_val) for p in ratefn.rate_curve(ens, args.grid)]
    params = {"ensemble": ens, "grid": args.grid}
    if ens == "from-gf:central_cube":
        params["truncation"] = args.truncation
    return "rate", params, ("x", "rate"), rows


def cmd_saddle(args):
    if args.kappa is not None:
        if args.k is not None or args.n is not None:
            raise UsageError("give either --kappa or --k with --n, not both")
        kappa = args.kappa
    else:
        if args.k is None or args.n is None:
            raise UsageError("give --kappa, or both --k and --n")
        if args.n < 1:
            raise UsageError("--n must be >= 1")
        kappa = args.k / args.n
    if not kappa > 0:
        raise UsageError("kappa must be positive")
    if args.source == "closed":
        if f"closed_{args.family}" not in genfun.CLOSED_SOURCES:
            raise UsageError(f"no closed form for {args.family}; use --source series")
        gf = genfun.closed_form(args.family)
    else:
        gf = genfun.series(args.family, args.truncation)
    sp = asymptotics.solve_saddle(gf, kappa)
    params = {"family": args.family, "source": args.source, "kappa": kappa}
    row = (kappa, sp.t_star, sp.v, sp.exp_rate, sp.residual(gf))
    return "saddle", params, ("kappa", "t_star", "v", "exp_rate", "residual"), [row]


def cmd_sample(args):
    try:
        cfg = ensembles.SampleConfig(args.ensemble, args.n, args.samples, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = ensembles.monte_carlo_stats(cfg, args.workers)
    total = res.histogram.total
    limit_pmf = {0: ensembles.dyck_limit_pmf, 3: ensembles.srwb3_limit_pmf}.get(cfg.walks)
    rows = []
    for size, count in sorted(res.histogram.counts.items()):
        p = count / total
        se = math.sqrt(p * (1.0 - p) / total)
        rows.append(("histogram", size, count, p, se, limit_pmf(size) if limit_pmf else None))
    for s in res.statistics:
        rows.append(("statistic", s.name, None, s.estimate, s.stderr, s.limit))
    params = {"ensemble": cfg.ensemble, "n": cfg.n, "samples": cfg.num_samples,
              "seed": cfg.seed, "rng": res.rng, "chain_size": ensembles.CHAIN_SIZE}
    return "sample", params, ("table", "key", "count", "value", "stderr", "limit"), rows


def cmd_verify(args, out):
    names = sorted(verify.SUITES) if args.suite == "all" else [args.suite]
    failed = 0
    out.write(f"{'crit':>4}  {'status':<6}  check  [detail]\n")
    for name in names:
        for c in verify.run_suite(name):
            status = "pass" if c.passed else "FAIL"
            out.write(f"{c.criterion:>4}  {status:<6}  {c.name}  [{c.detail}]\n")
            if not c.passed:
                failed += 1
                out.write(f"{'':>4}  {'':<6}  checks: {c.claim}\n")
    out.write(f"{failed} failed\n" if failed else "all checks passed\n")
    return EXIT_VERIFY if failed else 0


# -- parser ---------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="convasym",
                                description="Multifold convolutions, zero sets of random walks and their asymptotics.")
    sub = p.add_subparsers(dest="command", required=True)

    def data_cmd(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--output", "-o", help="write here instead of stdout")
        return sp

    c = data_cmd("conv", "multifold convolution M^(k)_n")
    c.add_argument("--family", choices=BUILTIN_FAMILIES, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--n", type=int, nargs="+", required=True)
    c.add_argument("--mode", choices=CONV_MODES, default="exact")

    r = data_cmd("rate", "large-deviation rate curve (x, I(x))")
    r.add_argument("--ensemble", required=True, metavar="{" + ",".join(RATE_ENSEMBLES) + "}")
    r.add_argument("--grid", type=int, default=101)
    r.add_argument("--truncation", type=int, default=2000, help="series length for from-gf without a closed form")

    s = data_cmd("saddle", "saddle point T_*(kappa) and the exponential rate")
    s.add_argument("--family", choices=BUILTIN_FAMILIES, required=True)
    s.add_argument("--kappa", type=float)
    s.add_argument("--k", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--source", choices=("closed", "series"), default=None,
                   help="default: closed form when available, else series")
    s.add_argument("--truncation", type=int, default=2000)

    m = data_cmd("sample", "Monte Carlo zero-set statistics")
    m.add_argument("--ensemble", required=True, help="dyck or srwb_<m>")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--samples", type=int, required=True)
    m.add_argument("--seed", type=int, required=True)
    m.add_argument("--workers", type=int, default=None,
                   help=f"thread count (default: {ensembles.THREADS_ENV} or all cores)")

    v = sub.add_parser("verify", help="run an acceptance suite")
    v.add_argument("--suite", choices=sorted(verify.SUITES) + ["all"], required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args, sys.stdout)
    if args.command == "saddle" and args.source is None:
        args.source = "closed" if f"closed_{args.family}" in genfun.CLOSED_SOURCES else "series"
    handler = {"conv": cmd_conv, "rate": cmd_rate, "saddle": cmd_saddle, "sample": cmd_sample}[args.command]
    try:
        record = handler(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    except asymptotics.SaddleAtRadius as exc:
        print(f"convasym: {exc}", file=sys.stderr)
        return EXIT_EDGE
    text = render(*record, fmt_name=args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
