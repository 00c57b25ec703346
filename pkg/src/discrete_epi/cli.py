"""Command-line entry point.

Exit codes: 0 clean, 1 usage or I/O error, 2 a proven inequality was
violated, 3 a counterexample candidate to a conjecture was found.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .beamsplitter import boxplus, boxplus_yj, build_kernel
from .entropy_power import EntropyKind, functional
from .errors import DiscreteEPIError, PmfFormatError
from .harness import ExperimentConfig, InequalityKind, run_clt, run_small_numbers_demo, search_counterexamples
from .husimi import check_scaled_convolution
from .pmf import TailPolicy, entropy, is_ulc, mean
from .serialization import atomic_write, dumps, format_float, pmf_to_csv, pmf_to_json, read_json, read_pmf
from .thinning import thin

EXIT_USAGE = 1

DEFAULT_CONFIG = {"version": 1, "trials": 200, "seed": 0}


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--tail-eps", type=float, default=1e-12, help="max truncated tail mass (default 1e-12)")
    g.add_argument("--max-cutoff", type=int, default=4096, help="hard cap on pmf support (default 4096)")
    g.add_argument("--renormalize", action="store_true", help="renormalise truncated outputs")
    g.add_argument("--seed", type=int, default=None, help="root seed for randomised commands")
    g.add_argument("--format", choices=("json", "csv"), default="json", help="output format")
    g.add_argument("--out", type=Path, default=None, help="output file (default: standard output)")
    return p


def _policy(args) -> TailPolicy:
    return TailPolicy(args.tail_eps, args.max_cutoff, args.renormalize)


def _emit(args, text: str, summary: str):
    if args.out is None:
        sys.stdout.write(text)
    else:
        atomic_write(args.out, text)
        print(f"{summary}; wrote {args.out}")


def _emit_pmf(args, x, label: str):
    text = pmf_to_csv(x) if args.format == "csv" else pmf_to_json(x) + "\n"
    _emit(args, text, f"{label}: cutoff {x.cutoff}, mean {format_float(mean(x))}, "
                      f"entropy {format_float(entropy(x))}")


def _cmd_thin(args) -> int:
    _emit_pmf(args, thin(read_pmf(args.inp), args.eta, _policy(args)), "thin")
    return 0


def _cmd_boxplus(args) -> int:
    x, y = read_pmf(args.x), read_pmf(args.y)
    op = boxplus_yj if args.yj else boxplus
    _emit_pmf(args, op(x, y, args.eta, _policy(args)), "boxplus-yj" if args.yj else "boxplus")
    return 0


def _cmd_kernel(args) -> int:
    kernel = build_kernel(args.eta, args.max_total)
    lines = ["n,m,p,prob"]
    lines += [f"{n},{m},{p},{format_float(v)}" for n, m, p, v in kernel.entries()]
    _emit(args, "\n".join(lines) + "\n", f"kernel: eta {args.eta}, max_total {args.max_total}")
    return 0


def _cmd_entropy_power(args) -> int:
    x = read_pmf(args.inp)
    fn = functional(args.kind)
    out = {"H": entropy(x), "V": fn.power(x)}
    if fn.kind is EntropyKind.POISSON:
        out["is_ulc"] = is_ulc(x)
    print(dumps(out))
    return 0


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _cmd_clt(args) -> int:
    base = read_pmf(args.inp)
    n_list = args.n_list if args.n_list else [2 ** k for k in range(args.powers + 1)]
    report = run_clt(base, n_list, _policy(args))
    if args.format == "csv":
        lines = ["n,entropy,tv_geometric,mean,mean_drift"]
        lines += [",".join([str(r.n)] + [format_float(v) for v in (r.entropy, r.tv_geometric, r.mean, r.mean_drift)])
                  for r in report.rows]
        text = "\n".join(lines) + "\n"
    else:
        text = "".join(dumps(vars(r)) + "\n" for r in report.rows)
    last = report.rows[-1]
    _emit(args, text, f"clt: n={last.n} entropy {format_float(last.entropy)} "
                      f"(limit {format_float(report.limit_entropy)}), TV {format_float(last.tv_geometric)}, "
                      f"power-of-2 drops {len(report.power_of_two_drops)}, "
                      f"other drops {len(report.general_drops)}")
    return report.exit_code


def _cmd_small_numbers(args) -> int:
    rows = run_small_numbers_demo(args.p, args.n_list, _policy(args))
    if args.format == "csv":
        text = "n,tv_poisson\n" + "".join(f"{n},{format_float(tv)}\n" for n, tv in rows)
    else:
        text = "".join(dumps({"n": n, "tv_poisson": tv}) + "\n" for n, tv in rows)
    _emit(args, text, f"demo-small-numbers: p={args.p}, final TV {format_float(rows[-1][1])}")
    return 0


def _load_config(args, kind=None) -> ExperimentConfig:
    obj = read_json(args.config) if args.config else dict(DEFAULT_CONFIG)
    if isinstance(obj, dict):
        obj = dict(obj)
        obj.setdefault("tail_policy", {"epsilon_tail": args.tail_eps, "max_cutoff": args.max_cutoff,
                                       "renormalize": args.renormalize})
        if args.seed is not None:
            obj["seed"] = args.seed
        if getattr(args, "trials", None) is not None:
            obj["trials"] = args.trials
        if getattr(args, "mode", None) is not None:
            obj["search_mode"] = args.mode
    return ExperimentConfig.from_dict(obj, kind_override=kind)


def _emit_report(args, report) -> int:
    out = args.out if args.out is not None else (Path(report.config.output) if report.config.output else None)
    text = report.to_csv() if args.format == "csv" else report.to_jsonl()
    if out is None:
        sys.stdout.write(text)
        print(report.summary_line(), file=sys.stderr)
    else:
        atomic_write(out, text)
        print(f"{report.summary_line()}; wrote {out}")
    return report.exit_code


def _cmd_epi_check(args) -> int:
    return _emit_report(args, search_counterexamples(_load_config(args, InequalityKind(args.ineq))))


def _cmd_search(args) -> int:
    return _emit_report(args, search_counterexamples(_load_config(args)))


def _cmd_husimi(args) -> int:
    x, y = read_pmf(args.x), read_pmf(args.y)
    d = check_scaled_convolution(x, y, args.eta, u_max=args.umax, step=args.step, policy=_policy(args))
    print(dumps({"discrepancy": d}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="discrete-epi", description="Beamsplitter scaled addition, thinning and discrete entropy-power inequality checks.", epilog="exit codes: 0 clean, 1 usage/IO error, 2 proven inequality violated, 3 conjecture counterexample candidate")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_, func):
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        p.set_defaults(func=func)
        return p

    p = add("thin", "binomial thinning T_eta of a pmf", _cmd_thin)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--in", dest="inp", type=Path, required=True, help="input pmf JSON")

    p = add("boxplus", "beamsplitter scaled addition of two pmfs (or thin-then-add with --yj)", _cmd_boxplus)
    p.add_argument("--eta", type=float, required=True, help="weight of --x")
    p.add_argument("--x", type=Path, required=True)
    p.add_argument("--y", type=Path, required=True)
    p.add_argument("--yj", action="store_true", help="use T_eta X + T_(1-eta) Y instead")

    p = add("kernel", "dump beamsplitter transition probabilities A(p | n, m) as CSV", _cmd_kernel)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--max-total", type=int, required=True, help="largest n + m")

    p = add("entropy-power", "entropy and entropy power (geometric, Poisson or exponential)", _cmd_entropy_power)
    p.add_argument("--kind", choices=("g", "p", "e"), required=True)
    p.add_argument("--in", dest="inp", type=Path, required=True)

    p = add("clt", "central limit run of equal-weight beamsplitter sums towards the geometric law", _cmd_clt)
    p.add_argument("--in", dest="inp", type=Path, required=True, help="base pmf JSON")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--n-list", type=_parse_int_list, help="ascending n values, e.g. 1,2,3,4")
    g.add_argument("--powers", type=int, default=6, help="use n = 2^0 .. 2^K (default K=6)")

    kinds = [k.value for k in InequalityKind]
    ineq_help = "; ".join(f"{k.value}: {k.description}" for k in InequalityKind)

    p = add("epi-check", "check one inequality kind on configured or random inputs", _cmd_epi_check)
    p.epilog = ineq_help
    p.add_argument("--ineq", choices=kinds, required=True)
    p.add_argument("--config", type=Path, help="experiment config JSON (version 1)")
    p.add_argument("--trials", type=int, help="override the number of random trials")

    p = add("search", "randomised counterexample search driven by a config", _cmd_search)
    p.epilog = ineq_help
    p.add_argument("--config", type=Path, help="experiment config JSON (version 1)")
    p.add_argument("--trials", type=int, help="override the number of random trials")
    p.add_argument("--mode", choices=("random", "perturbation-descent"), help="override search mode")

    p = add("husimi-check", "phase-space cross-check of the beamsplitter addition", _cmd_husimi)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--x", type=Path, required=True)
    p.add_argument("--y", type=Path, required=True)
    p.add_argument("--step", type=float, default=None, help="Cartesian grid spacing")
    p.add_argument("--umax", type=float, default=None, help="largest |r|^2 on the grid")

    p = add("demo-small-numbers", "law of small numbers: thinned binomial sums towards Poisson", _cmd_small_numbers)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--n-list", type=_parse_int_list, default=[1, 2, 4, 8, 16, 32, 64])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PmfFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DiscreteEPIError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
