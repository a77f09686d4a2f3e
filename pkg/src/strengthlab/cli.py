"""Command-line front end: ``strengthlab <subcommand> [flags]``.

Each subcommand parses a polynomial (text or JSON), calls one library
function and prints its JSON serialization.  Exit codes: 0 ok, 1 internal
error, 2 usage error, 3 budget or size cap.
"""
import argparse
import json
import sys

from . import _config
from .analytic import DEFAULT_BUDGET, bias_counts, gowers_norm, gowers_recursive, gowers_top_exact, rational_json
from .calculus import multilinearize
from .errors import ResourceError, StrengthLabError, UsageError
from .experiments import (
    DEFAULT_SCAN_BUDGET,
    GENERATOR,
    empirical_C,
    records_from_csv,
    records_to_csv,
    scan,
    verify_identities,
)
from .field import GF
from .poly import (
    delta,
    directional_derivative,
    evaluate,
    from_json_obj,
    homogeneous_part,
    parse,
    to_json_obj,
    value_table,
)
from .rank import DEFAULT_SEARCH_BUDGET, derivative_rank_profile, rank, rank_over_extension


def _shared():
    sh = argparse.ArgumentParser(add_help=False)
    sh.add_argument("-p", type=int, help="field characteristic")
    sh.add_argument("-s", type=int, default=1, help="extension degree of the base field (default 1)")
    sh.add_argument("-n", type=int, help="number of variables")
    sh.add_argument("-d", type=int, help="degree")
    src = sh.add_mutually_exclusive_group()
    src.add_argument("--poly", help="polynomial as text (e.g. '3*x1^2*x2 + x3') or JSON")
    src.add_argument("--file", help="read the input from a file")
    src.add_argument("--stdin", action="store_true", help="read the input from stdin")
    sh.add_argument("--csv", action="store_true", help="emit CSV (tables only)")
    sh.add_argument("--budget", type=int, help="enumeration budget")
    sh.add_argument("--threads", type=int, help="worker threads (default: STRENGTHLAB_THREADS or 1)")
    sh.add_argument("--seed", type=int, help="seed for sampling subcommands")
    return sh


def build_parser():
    sh = _shared()
    ap = argparse.ArgumentParser(prog="strengthlab", description="Rank, derivatives and Gowers norms over finite fields.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[sh], help=help_)

    add("eval", "evaluate at a point").add_argument("--point", required=True, help="comma-separated coordinates")
    add("delta", "difference P(x+t) - P(x)").add_argument("-t", required=True, help="shift vector")
    add("deriv", "directional derivative along t").add_argument("-t", required=True, help="direction vector")
    add("homog", "homogeneous part of degree d")
    add("multilin", "symmetric multilinear form of a homogeneous polynomial")
    add("bias", "residue tally and |E psi(P)|")
    g = add("gowers", "||psi(P)||_{U_m}^{2^m} by enumeration")
    g.add_argument("-m", type=int, required=True, help="norm order")
    g.add_argument("--route", choices=["direct", "recursive"], default="direct")
    add("gowers-exact", "exact U_d quantity from the top-degree form")
    r = add("rank", "rank with certificate or exhaustion record")
    r.add_argument("--r-max", type=int, help="stop the search above this rank")
    add("rank-ext", "rank with factors over an extension").add_argument(
        "--ext", type=int, default=2, help="extension degree searched (default 2)")
    add("profile", "rank of P_t over projective directions t")
    sc = add("scan", "scan homogeneous polynomials of degree d")
    sc.add_argument("--mode", choices=["exhaustive", "sample"], default="exhaustive")
    sc.add_argument("--samples", type=int, default=10_000)
    v = add("verify", "check the exact identities on random polynomials")
    v.add_argument("--trials", type=int, default=50)
    t = add("table", "empirical table from scan records (CSV via --file/--stdin, or a fresh scan)")
    t.add_argument("--mode", choices=["exhaustive", "sample"], default="exhaustive")
    t.add_argument("--samples", type=int, default=10_000)
    return ap


def _vector(text):
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise UsageError(f"bad vector {text!r}: expected comma-separated integers") from None


def _read_input(args):
    if args.poly is not None:
        return args.poly
    if args.file is not None:
        try:
            with open(args.file, encoding="utf-8") as fh:
                return fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc}") from None
    if args.stdin:
        return sys.stdin.read()
    raise UsageError("no input: give one of --poly, --file, --stdin")


def _polynomial(args):
    text = _read_input(args).strip()
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad polynomial JSON: {exc}") from None
        if args.d is None and "d" in obj:
            args.d = int(obj["d"])
        try:
            return from_json_obj(obj)
        except (KeyError, TypeError) as exc:
            raise UsageError(f"bad polynomial JSON: {exc}") from None
    if args.p is None or args.n is None:
        raise UsageError("text polynomials need -p and -n")
    return parse(text, args.p, args.n, args.s)


def _need(args, *names):
    missing = [f"-{k}" for k in names if getattr(args, k) is None]
    if missing:
        raise UsageError(f"{args.command} needs {' '.join(missing)}")


def _elem(v, fld):
    return v if fld.s == 1 else list(fld.digits(v))


def _emit(obj):
    sys.stdout.write(json.dumps(obj, ensure_ascii=False) + "\n")


def _cmd_eval(args):
    P = _polynomial(args)
    _emit({"value": _elem(evaluate(P, _vector(args.point)), P.field)})


def _cmd_delta(args):
    _emit(to_json_obj(delta(_polynomial(args), _vector(args.t))))


def _cmd_deriv(args):
    _emit(to_json_obj(directional_derivative(_polynomial(args), _vector(args.t))))


def _cmd_homog(args):
    P = _polynomial(args)
    _need(args, "d")
    _emit(to_json_obj(homogeneous_part(P, args.d)))


def _cmd_multilin(args):
    _emit(multilinearize(_polynomial(args), args.d).to_json_obj())


def _cmd_bias(args):
    ccv = bias_counts(value_table(_polynomial(args)))
    _emit({"counts": list(ccv.counts), "total": ccv.total, "bias": ccv.magnitude(), "error_bound": ccv.error_bound})


def _cmd_gowers(args):
    P = _polynomial(args)
    budget = args.budget or DEFAULT_BUDGET
    if args.route == "recursive":
        out = gowers_recursive(P, args.m, budget=budget)
    else:
        out = gowers_norm(value_table(P), args.m, budget=budget)
    _emit(out.to_json_obj())


def _cmd_gowers_exact(args):
    val = gowers_top_exact(_polynomial(args), d=args.d, budget=args.budget or DEFAULT_BUDGET)
    _emit(rational_json(val))


def _cmd_rank(args):
    P = _polynomial(args)
    budget = args.budget or DEFAULT_SEARCH_BUDGET
    _emit(rank(P, d=args.d, budget=budget, r_max=args.r_max).to_json_obj())


def _cmd_rank_ext(args):
    res = rank_over_extension(_polynomial(args), args.ext, d=args.d, budget=args.budget or DEFAULT_SEARCH_BUDGET)
    _emit(res.to_json_obj())


def _cmd_profile(args):
    prof = derivative_rank_profile(_polynomial(args), d=args.d, budget=args.budget or DEFAULT_SEARCH_BUDGET)
    _emit(prof.to_json_obj())


def _scan_records(args):
    _need(args, "p", "n", "d")
    if args.mode == "sample" and args.seed is None:
        raise UsageError("--seed is required for sample mode")
    return scan(args.p, args.n, args.d, mode=args.mode, budget=args.budget or DEFAULT_SCAN_BUDGET,
                seed=args.seed, samples=args.samples, threads=args.threads)


def _cmd_scan(args):
    records = _scan_records(args)
    if args.csv:
        sys.stdout.write(records_to_csv(records))
        return
    header = {"p": args.p, "n": args.n, "d": args.d, "mode": args.mode}
    if args.mode == "sample":
        header.update(seed=args.seed, samples=args.samples, generator=GENERATOR)
    _emit({"params": header, "records": [r.to_json_obj() for r in records]})


def _cmd_verify(args):
    _need(args, "p", "n", "d")
    if args.seed is None:
        raise UsageError("--seed is required for verify")
    _emit(verify_identities(args.p, args.n, args.d, args.trials, args.seed, budget=args.budget or DEFAULT_BUDGET))


def _cmd_table(args):
    if args.file is not None or args.stdin:
        records = records_from_csv(_read_input(args))
    else:
        records = _scan_records(args)
    table = empirical_C(records)
    if args.csv:
        sys.stdout.write(table.to_csv())
    else:
        _emit(table.to_json_obj())


COMMANDS = {
    "eval": _cmd_eval,
    "delta": _cmd_delta,
    "deriv": _cmd_deriv,
    "homog": _cmd_homog,
    "multilin": _cmd_multilin,
    "bias": _cmd_bias,
    "gowers": _cmd_gowers,
    "gowers-exact": _cmd_gowers_exact,
    "rank": _cmd_rank,
    "rank-ext": _cmd_rank_ext,
    "profile": _cmd_profile,
    "scan": _cmd_scan,
    "verify": _cmd_verify,
    "table": _cmd_table,
}


def run(argv=None):
    """Run one subcommand and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse reports usage problems itself
        return 0 if exc.code == 0 else 2
    try:
        if args.threads is not None:
            if args.threads < 1:
                raise UsageError("--threads must be >= 1")
            _config.set_threads(args.threads)
        if args.s != 1 and args.p is not None:
            GF(args.p, args.s)  # validate the field before any work
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except StrengthLabError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
