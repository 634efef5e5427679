import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from algebra.catalog import CATALOG_NAMES, catalog, from_spec
from algebra.cayley import CayleyTable, format_cayley, parse_cayley
from algebra.probes import structure_probe
from algebra.tuples import TupleCode, permutation_codes
from classes.checks import (
    block_parity_check,
    closure_checks,
    group_class_description,
    product_checks,
    u1_closure_experiment,
    unit_census,
)
from classes.convergence import convergence_report
from classes.decompose import ClassDecomposition, decompose, summarize
from cli.report import Report, render, to_plain
from config import Settings, load_settings
from constants import (
    EXIT_BUDGET,
    EXIT_CONSISTENCY,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VALIDATION,
    KIND_DIAGONAL,
    KIND_NEAR,
    KIND_TRANSVERSAL,
    LOG_FORMAT,
    TOOL_NAME,
    TOOL_VERSION,
    BudgetExceededError,
    ConsistencyError,
    InputValidationError,
    StructureError,
)
from counting.counts import METHODS, count_series, near_transversal_census, near_type_codes
from counting.predict import compare, existence_rule, predict
from db.transitions import load_or_build
from grouptools.commutator import GroupAnalysis
from grouptools.hall_paige import analyze_group, denes_hermann_check
from grouptools.powers import power_sets
from oracle.enumerate import enumerate_diagonals
from transition.matrix import TransitionMatrix
from transition.propagate import propagate_range

logger = logging.getLogger(__name__)

SIZE_SUFFIXES = {"K": 2**10, "M": 2**20, "G": 2**30}
DEFAULT_CONVERGENCE_DEPTH = 10


class UsageParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with status 64."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_size(text: str) -> int:
    text = text.strip().upper()
    factor = SIZE_SUFFIXES.get(text[-1:], 1)
    digits = text[:-1] if text[-1:] in SIZE_SUFFIXES else text
    try:
        return int(digits) * factor
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad memory size {text!r}")


def parse_range(text: str) -> Tuple[int, int]:
    """`A..B` (inclusive) or a single `A`."""
    low, separator, high = text.partition("..")
    try:
        bounds = (int(low), int(high) if separator else int(low))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; expected A..B")
    if bounds[0] < 0 or bounds[0] > bounds[1]:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return bounds


def parse_tuple(text: str, n: int) -> TupleCode:
    """A comma-separated literal such as `1,2,3`, or a canonical code."""
    if "," in text:
        return TupleCode.parse(text, n)
    try:
        return TupleCode.from_code(n, int(text))
    except ValueError:
        raise InputValidationError(f"bad tuple {text!r}; expected digits like 1,2,3 or a code")


def build_parser() -> UsageParser:
    common = UsageParser(add_help=False)
    output = common.add_mutually_exclusive_group()
    output.add_argument("--json", dest="tsv", action="store_false", help="JSON report (default)")
    output.add_argument("--tsv", dest="tsv", action="store_true", help="TSV report")
    output.set_defaults(tsv=False)
    common.add_argument("--budget-mem", type=parse_size, help="Memory budget, e.g. 512M or 4G")
    common.add_argument("--budget-time", type=float, help="Oracle wall-clock budget in seconds")
    common.add_argument("--allow-n7", action="store_true", help="Permit the full matrix at order 7")
    common.add_argument("--seed", type=int, help="Seed for random tables and sampled checks")
    common.add_argument("--threads", type=int, help="Worker threads for propagation")
    common.add_argument("--cache-dir", help="Directory for cached transition matrices")
    common.add_argument("--verbose", "-v", action="count", default=0)

    parser = UsageParser(prog=TOOL_NAME, description="Diagonals of iterated quasigroups")
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {TOOL_VERSION}")
    commands = parser.add_subparsers(dest="command", metavar="command")

    source_help = "Cayley table file, - for stdin, or a catalog entry such as cyclic:5"
    validate = commands.add_parser("validate", parents=[common], help="Check a Cayley table")
    validate.add_argument("source", help=source_help)

    analyze = commands.add_parser("analyze", parents=[common], help="Structure, G' and P^k sets")
    analyze.add_argument("source", help=source_help)
    analyze.add_argument("--k-max", type=int, help="Largest k for P^k (default 2n)")

    classes = commands.add_parser("classes", parents=[common], help="Classes, periods, units and checks")
    classes.add_argument("source", help=source_help)
    classes.add_argument("--k-max", type=int, help="Largest k for P^k in the product checks (default 2n)")

    for name, text in (
        ("count", "Exact counts"),
        ("predict", "Leading-order predictions"),
        ("compare", "Exact, predicted and oracle counts"),
    ):
        sub = commands.add_parser(name, parents=[common], help=text)
        sub.add_argument("source", help=source_help)
        sub.add_argument("--kind", required=True, choices=(KIND_TRANSVERSAL, KIND_NEAR, KIND_DIAGONAL))
        sub.add_argument("--d", required=True, type=parse_range, help="A..B")
        sub.add_argument("--u", help="Seed tuple for --kind diagonal")
        sub.add_argument("--v", help="Type tuple for --kind diagonal")
        sub.add_argument("--method", choices=METHODS, default="auto")

    emit = commands.add_parser("catalog", parents=[common], help="Print a built-in table")
    emit.add_argument("name", help=f"One of {', '.join(CATALOG_NAMES)}")
    emit.add_argument("params", nargs="*", type=int)

    experiment = commands.add_parser(
        "experiment", parents=[common], help="Block parity, closure of U_1 and convergence"
    )
    experiment.add_argument("source", help=source_help)
    experiment.add_argument("--d-max", type=int, default=DEFAULT_CONVERGENCE_DEPTH)
    return parser


def apply_overrides(settings: Settings, args: argparse.Namespace) -> Settings:
    updates: Dict[str, Any] = {}
    if args.budget_mem is not None:
        updates["memory_bytes"] = args.budget_mem
    if args.budget_time is not None:
        updates["oracle_seconds"] = args.budget_time
    if args.allow_n7:
        updates["allow_n7"] = True
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.threads is not None:
        if args.threads < 1:
            raise InputValidationError("--threads must be at least 1")
        updates["threads"] = args.threads
    if args.cache_dir is not None:
        updates["cache_dir"] = args.cache_dir
    if args.verbose:
        updates["log_level"] = "DEBUG" if args.verbose > 1 else "INFO"
    return settings.model_copy(update=updates)


def configure_logging(level: str) -> None:
    logging.basicConfig(level=level.upper(), format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger().setLevel(level.upper())


def load_table(source: str, seed: int = 0) -> CayleyTable:
    if source == "-":
        return parse_cayley(sys.stdin)
    path = Path(source)
    if path.is_file():
        try:
            text = path.read_text(encoding="utf-8")
        except UnicodeDecodeError as e:
            raise InputValidationError(f"{source} is not UTF-8 text: {e.reason}")
        return parse_cayley(text)
    if source.partition(":")[0] in CATALOG_NAMES:
        return from_spec(source, seed)
    raise InputValidationError(f"no such file or catalog entry: {source}")


def _group_analysis(G: CayleyTable) -> Optional[GroupAnalysis]:
    probe = structure_probe(G)
    return analyze_group(G) if probe.is_group else None


def _decomposition(G: CayleyTable, settings: Settings) -> Tuple[TransitionMatrix, ClassDecomposition]:
    T = load_or_build(G, settings)
    return T, decompose(T)


def _count_options(G: CayleyTable, settings: Settings, method: str) -> Dict[str, Any]:
    options: Dict[str, Any] = {
        "method": method,
        "threads": settings.threads,
        "orbit_max_order": settings.orbit_max_order,
    }
    if method == "full" or (method == "auto" and G.n > settings.orbit_max_order):
        options["T"] = load_or_build(G, settings)
    return options


def handle_validate(G: CayleyTable, settings: Settings, args: argparse.Namespace) -> Dict[str, Any]:
    return {"n": G.n, "valid": True}


def handle_analyze(G: CayleyTable, settings: Settings, args: argparse.Namespace) -> Dict[str, Any]:
    probe = structure_probe(G)
    payload: Dict[str, Any] = {"n": G.n, "probe": probe}
    if probe.is_loop:
        analysis = analyze_group(G)
        payload["group"] = analysis
        if probe.is_group:
            payload["denes_hermann"] = denes_hermann_check(G, analysis)
    try:
        payload["power_sets"] = power_sets(G, args.k_max, settings.power_splits)
    except BudgetExceededError as e:
        logger.warning(f"Skipping P^k sets: {str(e)}")
        payload["power_sets"] = {"skipped": str(e)}
    return payload


def handle_classes(G: CayleyTable, settings: Settings, args: argparse.Namespace) -> Dict[str, Any]:
    T, D = _decomposition(G, settings)
    identity = TupleCode.identity(G.n)
    payload: Dict[str, Any] = {
        "n": G.n,
        "classes": summarize(D, G),
        "closure": closure_checks(D, G, settings.seed),
        "census": unit_census(D, identity, 1),
        "near_census": near_transversal_census(D, G),
    }
    probe = structure_probe(G)
    analysis = analyze_group(G) if probe.is_loop else None
    if analysis is not None and analysis.is_group:
        payload["group_classes"] = group_class_description(D, G, analysis)
    try:
        profile = power_sets(G, args.k_max, settings.power_splits)
        payload["products"] = product_checks(D, G, profile, analysis)
    except BudgetExceededError as e:
        logger.warning(f"Skipping product checks: {str(e)}")
        payload["products"] = {"skipped": str(e)}
    return payload


def _oracle_type_codes(G: CayleyTable, kind: str) -> List[int]:
    if kind == KIND_TRANSVERSAL:
        return permutation_codes(G.n).tolist()
    return near_type_codes(G.n).tolist()


def _diagonal_tuples(G: CayleyTable, args: argparse.Namespace) -> Tuple[TupleCode, TupleCode]:
    if args.u is None or args.v is None:
        raise InputValidationError("--kind diagonal needs --u and --v")
    return parse_tuple(args.u, G.n), parse_tuple(args.v, G.n)


def _exact_rows(G: CayleyTable, settings: Settings, args: argparse.Namespace) -> List[Tuple[int, int]]:
    low, high = args.d
    if args.kind == KIND_DIAGONAL:
        U, V = _diagonal_tuples(G, args)
        T = load_or_build(G, settings)
        return [
            (vector.depth, vector.get(V))
            for vector in propagate_range(T, U, high, settings.threads)
            if vector.depth >= low
        ]
    if low < 1:
        raise InputValidationError("transversal and near counts need d >= 1")
    counts = count_series(G, args.kind, high, **_count_options(G, settings, args.method))
    return [(d, counts[d - 1]) for d in range(low, high + 1)]


def handle_count(G: CayleyTable, settings: Settings, args: argparse.Namespace) -> Dict[str, Any]:
    rows = [{"d": d, "exact": str(value)} for d, value in _exact_rows(G, settings, args)]
    payload: Dict[str, Any] = {"n": G.n, "kind": args.kind}
    if args.kind == KIND_DIAGONAL:
        U, V = _diagonal_tuples(G, args)
        payload.update({"u": str(U), "u_code": U.code, "v": str(V), "v_code": V.code})
    payload["rows"] = rows
    return payload


def _model_inputs(
    G: CayleyTable, settings: Settings, kind: str
) -> Tuple[Optional[TransitionMatrix], Optional[ClassDecomposition], Optional[GroupAnalysis]]:
    analysis = _group_analysis(G)
    if analysis is not None and kind != KIND_DIAGONAL:
        return None, None, analysis
    T, D = _decomposition(G, settings)
    return T, D, analysis


def handle_predict(G: CayleyTable, settings: Settings, args: argparse.Namespace) -> Dict[str, Any]:
    low, high = args.d
    T, D, analysis = _model_inputs(G, settings, args.kind)
    U = V = None
    payload: Dict[str, Any] = {"n": G.n, "kind": args.kind}
    if args.kind == KIND_DIAGONAL:
        U, V = _diagonal_tuples(G, args)
        payload.update({"u": str(U), "u_code": U.code, "v": str(V), "v_code": V.code})
    elif low < 1:
        raise InputValidationError("transversal and near predictions need d >= 1")
    else:
        payload["existence"] = existence_rule(
            G, D, analysis, transition=T, **_count_options(G, settings, "auto")
        )
    rows = []
    for d in range(low, high + 1):
        prediction = predict(G, args.kind, d, D, analysis, U, V)
        rows.append({"d": d, "predicted": prediction.predicted, "exists": prediction.exists})
    payload["rows"] = rows
    return payload


def _oracle_counts(
    G: CayleyTable, settings: Settings, args: argparse.Namespace
) -> Dict[int, int]:
    low, high = args.d
    factorial = math.factorial(G.n)
    if args.kind == KIND_DIAGONAL:
        seed, wanted = _diagonal_tuples(G, args)
        codes = [wanted.code]
    else:
        seed, codes = TupleCode.identity(G.n), _oracle_type_codes(G, args.kind)
    counts = {}
    for d in range(low, high + 1):
        if factorial**d > settings.oracle_budget:
            break
        result = enumerate_diagonals(
            G, seed, d, settings.oracle_budget, settings.oracle_seconds, workers=settings.threads
        )
        counts[d] = sum(result.counts.get(code, 0) for code in codes)
    return counts


def handle_compare(G: CayleyTable, settings: Settings, args: argparse.Namespace) -> Dict[str, Any]:
    T, D, analysis = _model_inputs(G, settings, args.kind)
    U = V = None
    options: Dict[str, Any] = {}
    if args.kind == KIND_DIAGONAL:
        U, V = _diagonal_tuples(G, args)
        options["T"] = T
    else:
        options = _count_options(G, settings, args.method)
    reports = compare(
        G, args.kind, args.d, D, analysis, U, V, oracle_counts=_oracle_counts(G, settings, args), **options
    )
    rows = [
        {
            "d": report.d,
            "exact": str(report.exact),
            "predicted": report.predicted,
            "relative_deviation": report.relative_deviation,
            "exists": report.exists,
            "oracle": None if report.oracle is None else str(report.oracle),
        }
        for report in reports
    ]
    admissible = [report.relative_deviation for report in reports if report.relative_deviation is not None]
    payload: Dict[str, Any] = {
        "n": G.n,
        "kind": args.kind,
        "deviation_nonincreasing": all(a >= b for a, b in zip(admissible, admissible[1:])),
        "rows": rows,
    }
    return payload


def handle_experiment(G: CayleyTable, settings: Settings, args: argparse.Namespace) -> Dict[str, Any]:
    T, D = _decomposition(G, settings)
    probe = structure_probe(G)
    payload: Dict[str, Any] = {"n": G.n}
    try:
        payload["block_parity"] = block_parity_check(D, G, T)
    except StructureError as e:
        payload["block_parity"] = {"skipped": str(e)}
    payload["u1_closure"] = u1_closure_experiment(D, G, settings.seed, is_group=probe.is_group)
    payload["convergence"] = convergence_report(
        T, D, TupleCode.identity(G.n), args.d_max, settings.threads
    )
    return payload


HANDLERS: Dict[str, Callable[[CayleyTable, Settings, argparse.Namespace], Dict[str, Any]]] = {
    "validate": handle_validate,
    "analyze": handle_analyze,
    "classes": handle_classes,
    "count": handle_count,
    "predict": handle_predict,
    "compare": handle_compare,
    "experiment": handle_experiment,
}


def run(args: argparse.Namespace) -> int:
    settings = apply_overrides(load_settings(), args)
    configure_logging(settings.log_level)
    if args.command == "catalog":
        spec = args.name
        G = catalog(spec, *args.params, seed=settings.seed) if args.params else from_spec(spec, settings.seed)
        sys.stdout.write(format_cayley(G))
        return EXIT_OK
    G = load_table(args.source, settings.seed)
    payload = HANDLERS[args.command](G, settings, args)
    report = Report(input_digest=G.digest, command=args.command, payload=to_plain(payload))
    sys.stdout.write(render(report, args.tsv))
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (None, 0) else int(e.code)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return run(args)
    except BudgetExceededError as e:
        logger.error(f"Budget exceeded: {str(e)}")
        sys.stderr.write(f"{TOOL_NAME}: budget exceeded: {e}\n")
        return EXIT_BUDGET
    except ConsistencyError as e:
        logger.error(f"Consistency check failed: {str(e)}")
        sys.stderr.write(f"{TOOL_NAME}: internal consistency check failed: {e}\n")
        return EXIT_CONSISTENCY
    except InputValidationError as e:
        logger.error(f"Invalid input: {str(e)}")
        sys.stderr.write(f"{TOOL_NAME}: {e}\n")
        return EXIT_VALIDATION
