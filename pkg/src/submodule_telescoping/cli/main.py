"""
Command-line front end:

    telescope telescope --expr "binomial(n,k)^7/(2*n+3*k)" --verify 60
    telescope verify --input term.toml
    telescope reduce --expr "binomial(n,k)^3" --f "k^4/(n-k+1)"
    telescope guess --expr "binomial(n,k)^3" --max-order 3 --max-degree 3
    telescope bench --quick

Exit codes: 0 success, 1 failed verification, 2 unsupported or malformed input,
3 exhausted search cap.
"""
import argparse
import json
import os
import sys
from dataclasses import dataclass
from dataclasses import replace

from colorama import Fore
from colorama import just_fix_windows_console
from dotenv import load_dotenv

from submodule_telescoping.cli.command import Command
from submodule_telescoping.cli.command import arg
from submodule_telescoping.cli.command import command
from submodule_telescoping.exact_algebra.expression import parse_rational
from submodule_telescoping.factor_engine.telescope import TelescopeOptions
from submodule_telescoping.factor_engine.telescope import TelescoperResult
from submodule_telescoping.factor_engine.telescope import telescope as run_telescope
from submodule_telescoping.hyperterm.document import TermDocument
from submodule_telescoping.hyperterm.document import expression_document
from submodule_telescoping.hyperterm.document import read_document
from submodule_telescoping.hyperterm.grammar import parse_term
from submodule_telescoping.hyperterm.support import KRange
from submodule_telescoping.hyperterm.term import ap_shift_reduce
from submodule_telescoping.hyperterm.term import certificates
from submodule_telescoping.ore_ops.text import print_op
from submodule_telescoping.reduction.context import ReductionContext
from submodule_telescoping.utils.errors import InvalidInput
from submodule_telescoping.utils.errors import ParseError
from submodule_telescoping.utils.errors import StageError
from submodule_telescoping.utils.errors import TelescopingError
from submodule_telescoping.utils.logging import fancy_print
from submodule_telescoping.utils.logging import log
from submodule_telescoping.verifier.checks import CheckResult
from submodule_telescoping.verifier.checks import VerificationReport
from submodule_telescoping.verifier.checks import check_annihilates
from submodule_telescoping.verifier.checks import check_certificate
from submodule_telescoping.verifier.checks import sum_sequence
from submodule_telescoping.verifier.checks import telescoper_certificate
from submodule_telescoping.verifier.checks import zero_sum_probe
from submodule_telescoping.verifier.guess import guess_recurrence
from submodule_telescoping.verifier.guess import required_window

DEFAULT_VERIFY_N = 30

BENCH_TERMS = [
    "binomial(n,k)^7/(2*n+3*k)",
    "binomial(3*n,3*k)^2*binomial(3*n,3*k+1)",
] + [f"binomial(n,k)^{s}" for s in range(1, 7)]


@dataclass(frozen=True)
class RunConfig:
    """
    Validated command-line settings.

    Attributes:
        subcommand (str): telescope | verify | reduce | guess | bench.
        expr (str | None): Inline term expression.
        input_path (str | None): Term document path.
        fmt (str): text | json.
    """

    subcommand: str
    expr: str | None = None
    input_path: str | None = None
    k_range: str | None = None
    degree_cap: int | None = None
    expanded: bool = False
    minimal: bool = False
    symmetry: bool = True
    certificate: bool = False
    verify: int | None = None
    guess: bool = False
    fmt: str = "text"
    out: str | None = None
    timings: bool = False
    verbose: int = 0
    f: str | None = None
    max_order: int = 4
    max_degree: int = 4
    quick: bool = False

    def options(self) -> TelescopeOptions:
        return TelescopeOptions(
            degree_cap=self.degree_cap,
            use_symmetry=self.symmetry,
            expanded=self.expanded,
            track_cert=self.certificate,
            verbose=self.verbose,
        )


def _env_int(name: str) -> int | None:
    value = os.getenv(name)
    if value in (None, ""):
        return None
    try:
        return int(value)
    except ValueError as err:
        raise InvalidInput(f"{name} must be an integer, got {value!r}") from err


def _emit(config: RunConfig, text: str) -> None:
    if config.out:
        with open(config.out, mode="w", encoding="utf-8") as file:
            file.write(text + "\n")
    else:
        print(text)


def _load(config: RunConfig) -> tuple[TermDocument, KRange, RunConfig]:
    """Reads the term; document options fill in flags that were not given."""
    if config.input_path:
        doc = read_document(config.input_path)
    elif config.expr:
        doc = expression_document(config.expr)
    else:
        raise InvalidInput("give a term with --expr or --input")
    k_range = KRange.parse(config.k_range) if config.k_range else doc.k_range
    flags = {}
    for key in ("minimal", "expanded", "certificate"):
        if doc.options.get(key, "").lower() in ("1", "true", "yes"):
            flags[key] = True
    if doc.options.get("symmetry", "").lower() in ("0", "false", "no"):
        flags["symmetry"] = False
    if "degree_cap" in doc.options and config.degree_cap is None:
        flags["degree_cap"] = int(doc.options["degree_cap"])
    return doc, k_range, replace(config, **flags)


def _result_text(result: TelescoperResult, config: RunConfig) -> str:
    lines = [f"R = {print_op(result.R)}", f"dim N = {result.dim}"]
    if result.automorphisms:
        lines.append(f"automorphisms: {', '.join(result.automorphisms)}")
    names = []
    for i, c in enumerate(result.components, start=1):
        names.append(f"L_{i}")
        flag = ", zero-sum" if c.zero_sum else ""
        lines.append(f"L_{i} [{'/'.join(c.labels) or 'N'}] dim {c.dim}, order {c.L.order}{flag}: {print_op(c.L)}")
    for c in result.dropped:
        lines.append(f"dropped [{'/'.join(c.labels)}] dim {c.dim}: zero projection")
    left = f"LCLM({', '.join(names)})" if len(names) > 1 else (names[0] if names else "1")
    lines.append(f"telescoper = {left} * R  (order {result.telescoper_order})")
    if config.minimal:
        lines.append(f"L_min = {print_op(result.L_min)}  (order {result.L_min.order})")
    if result.L_expanded is not None:
        lines.append(f"L_expanded = {print_op(result.L_expanded)}")
        sizes = result.sizes
        lines.append(
            f"sizes: factored {sizes['factored_bytes']} bytes, expanded {sizes['expanded_bytes']} bytes, "
            f"ratio {sizes['ratio']:.2f}"
        )
    if config.timings:
        for name, seconds in result.timings.items():
            lines.append(f"time {name}: {seconds:.3f}s")
    return "\n".join(lines)


def _verify(
    result: TelescoperResult, doc: TermDocument, k_range: KRange, config: RunConfig, n_max: int
) -> VerificationReport:
    report = VerificationReport()
    window = sum_sequence(doc.spec, k_range, 1, n_max)
    report.add(check_annihilates(result.L_min, window, "L_min annihilates a(n)"))
    report.add(check_annihilates(result.expand(), window, "L_left*R annihilates a(n)"))
    if config.certificate:
        op, cert = telescoper_certificate(result)
        report.add(check_certificate(op, cert, certificates(doc.spec)))
    if k_range.is_natural:
        for component in result.components:
            if component.zero_sum:
                report.add(zero_sum_probe(result, component, doc.spec, min(n_max, 20)))
    if config.guess:
        order = result.L_min.order
        degree = result.L_min.max_coefficient_degree()
        needed = required_window(order, degree)
        sums = window if len(window) >= needed else sum_sequence(doc.spec, k_range, 1, needed)
        guessed = guess_recurrence(sums, order, degree)
        if guessed is None:
            check = report.add(CheckResult("guessed recurrence", (1, len(sums)), False, {"guess": "none"}))
        else:
            check = report.add(check_annihilates(guessed, window, "guessed recurrence"))
        check.note = f"up to order {order}, degree {degree}"
        if guessed is not None and guessed.order < order:
            check.note += f"; smaller recurrence found post hoc (order {guessed.order})"
    return report


@command()
def telescope(config: RunConfig) -> int:
    """Computes the factored telescoper of a term and optionally checks it."""
    doc, k_range, config = _load(config)
    if config.verify:
        config = replace(config, expanded=True)
    result = run_telescope(doc.spec, config.options())
    report = _verify(result, doc, k_range, config, config.verify) if config.verify else None
    if config.fmt == "json":
        data = result.to_json()
        if config.certificate:
            op, cert = telescoper_certificate(result)
            data["certificate"] = {"operator": print_op(op), "cert": str(cert)}
        if report is not None:
            data["verification"] = report.to_json()
        _emit(config, json.dumps(data, indent=2))
    else:
        text = _result_text(result, config)
        if config.certificate:
            op, cert = telescoper_certificate(result)
            text += f"\ncertificate of {print_op(op)}:\n  {cert}"
        if report is not None:
            text += "\n" + report.to_table(color=config.out is None)
        _emit(config, text)
    return 0 if report is None or report.passed else 1


@command()
def verify(config: RunConfig) -> int:
    """Runs the pipeline and every verification check; exit code 1 on any failure."""
    n_max = config.verify or _env_int("TELESCOPE_VERIFY_N") or DEFAULT_VERIFY_N
    doc, k_range, config = _load(replace(config, expanded=True))
    result = run_telescope(doc.spec, config.options())
    report = _verify(result, doc, k_range, config, n_max)
    if config.fmt == "json":
        _emit(config, json.dumps(report.to_json(), indent=2))
    else:
        _emit(config, report.to_table(color=config.out is None))
    return 0 if report.passed else 1


@command(arg("--f", help="the rational coefficient f in f * H0"))
def reduce(config: RunConfig) -> int:
    """Prints the standard form of f * H0 modulo Delta_k of the term's module."""
    doc, _, config = _load(config)
    if not config.f:
        raise InvalidInput("reduce needs --f")
    _, h0 = ap_shift_reduce(certificates(doc.spec))
    ctx = ReductionContext(h0, config.degree_cap, config.verbose)
    form = ctx.std_form(parse_rational(config.f), track_cert=config.certificate)
    if config.fmt == "json":
        data = form.to_json()
        data["basis_degrees"] = list(ctx.basis().degrees)
        _emit(config, json.dumps(data, indent=2))
    else:
        lines = [
            f"H0 = {h0.spec}",
            f"basis: k^d for d in {list(ctx.basis().degrees)}",
            f"frac = {form.to_json()['frac']}",
            f"poly coords = [{', '.join(str(c) for c in form.coords)}]",
        ]
        if form.cert is not None:
            lines.append(f"cert = {form.to_json()['cert']}")
        _emit(config, "\n".join(lines))
    return 0


@command(
    arg("--max-order", type=int, default=4, help="largest order tried"),
    arg("--max-degree", type=int, default=4, help="largest coefficient degree tried"),
)
def guess(config: RunConfig) -> int:
    """Guesses a recurrence for the exact sums of a term."""
    doc, k_range, config = _load(config)
    needed = required_window(config.max_order, config.max_degree)
    window = sum_sequence(doc.spec, k_range, 1, max(needed, config.verify or 0))
    op = guess_recurrence(window, config.max_order, config.max_degree)
    caps = f"up to order {config.max_order}, degree {config.max_degree}"
    if config.fmt == "json":
        _emit(config, json.dumps({"operator": print_op(op) if op else None, "caps": caps}, indent=2))
    else:
        _emit(config, f"{print_op(op)}  ({caps})" if op else f"no recurrence found {caps}")
    return 0 if op else 1


@command(arg("--quick", action="store_true", help="only the small binomial powers"))
def bench(config: RunConfig) -> int:
    """Runs the pipeline on the built-in examples and reports orders, sizes and timings."""
    terms = BENCH_TERMS[2:6] if config.quick else BENCH_TERMS
    rows = []
    for text in terms:
        if config.verbose:
            fancy_print(f"BENCH: {text}")
        result = run_telescope(parse_term(text), replace(config, expanded=True).options())
        sizes = result.sizes
        rows.append(
            {
                "term": text,
                "dim": result.dim,
                "R": result.R.order,
                "components": [c.L.order for c in result.components],
                "telescoper": result.telescoper_order,
                "L_min": result.L_min.order,
                "sizes": sizes,
                "seconds": round(sum(result.timings.values()), 3),
                "timings": {name: round(t, 3) for name, t in result.timings.items()},
            }
        )
        log(f"{text}: {rows[-1]['seconds']}s", config.verbose, color=Fore.YELLOW)
    if config.fmt == "json":
        _emit(config, json.dumps(rows, indent=2))
    else:
        lines = []
        for row in rows:
            lines.append(
                f"{row['term']:<42} D={row['dim']:<3} R={row['R']} components={row['components']} "
                f"telescoper={row['telescoper']} L_min={row['L_min']} "
                f"ratio={row['sizes']['ratio']:.2f} time={row['seconds']}s"
            )
        _emit(config, "\n".join(lines))
    return 0


COMMANDS: dict[str, Command] = {c.name: c for c in (telescope, verify, reduce, guess, bench)}


SHARED_ARGUMENTS = (
    arg("--k-range", help="summation range: all | a..b with a, b affine in n"),
    arg("--degree-cap", type=int, help="cap for relation degrees and the right-factor order"),
    arg("--minimal", action="store_true", help="emit the minimal recurrence"),
    arg("--no-symmetry", action="store_true", help="skip the automorphism decomposition"),
    arg("--certificate", action="store_true", help="track and emit certificates"),
    arg("--verify", type=int, metavar="N", help="check against exact sums for n = 1..N"),
    arg("--guess", action="store_true", help="cross-check with a guessed recurrence"),
    arg("--format", choices=("text", "json"), help="output format"),
    arg("--out", help="write the output to a file"),
    arg("--timings", action="store_true", help="print stage timings"),
    arg("-v", "--verbose", action="count", default=0),
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="telescope", description="Submodule-based creative telescoping.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for cmd in COMMANDS.values():
        p = cmd.register(sub, SHARED_ARGUMENTS)
        source = p.add_mutually_exclusive_group()
        source.add_argument("--expr", help="the summand, e.g. 'binomial(n,k)^7/(2*n+3*k)'")
        source.add_argument("--input", help="a term document file")
        form = p.add_mutually_exclusive_group()
        form.add_argument("--factored", action="store_true", help="emit the factored telescoper (default)")
        form.add_argument("--expanded", action="store_true", help="also emit L_left * R multiplied out")
    return parser


def parse_config(argv: list[str] | None) -> RunConfig:
    """
    Parses and validates the arguments; flags win over environment variables.

    Raises:
        InvalidInput: On invalid environment values or flag combinations.
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    # a bare flag list means the telescope subcommand
    if argv and argv[0].startswith("-") and argv[0] not in ("-h", "--help"):
        argv.insert(0, "telescope")
    args = build_parser().parse_args(argv)
    fmt = args.format or os.getenv("TELESCOPE_FORMAT") or "text"
    if fmt not in ("text", "json"):
        raise InvalidInput(f"TELESCOPE_FORMAT must be text or json, got {fmt!r}")
    degree_cap = args.degree_cap if args.degree_cap is not None else _env_int("TELESCOPE_DEGREE_CAP")
    if degree_cap is not None and degree_cap < 1:
        raise InvalidInput("the degree cap must be positive")
    if args.verify is not None and args.verify < 1:
        raise InvalidInput("--verify needs N >= 1")
    return RunConfig(
        subcommand=args.subcommand,
        expr=args.expr,
        input_path=args.input,
        k_range=args.k_range,
        degree_cap=degree_cap,
        expanded=args.expanded,
        minimal=args.minimal,
        symmetry=not args.no_symmetry,
        certificate=args.certificate,
        verify=args.verify,
        guess=args.guess,
        fmt=fmt,
        out=args.out,
        timings=args.timings,
        verbose=args.verbose,
        f=getattr(args, "f", None),
        max_order=getattr(args, "max_order", 4),
        max_degree=getattr(args, "max_degree", 4),
        quick=getattr(args, "quick", False),
    )


def _error_json(err: TelescopingError) -> dict:
    cause = err.cause if isinstance(err, StageError) else err
    data = {"type": type(cause).__name__, "message": str(cause), "exit_code": err.exit_code}
    if isinstance(err, StageError):
        data["stage"] = err.stage
    if isinstance(cause, ParseError):
        data["position"] = cause.position
    return {"error": data}


def run(argv: list[str] | None = None) -> int:
    """
    Runs one subcommand.

    Args:
        argv (list[str] | None): Arguments without the program name; None reads sys.argv.

    Returns:
        int: The exit code.
    """
    fmt = "text"
    try:
        config = parse_config(argv)
        fmt = config.fmt
        return COMMANDS[config.subcommand].run(config)
    except TelescopingError as err:
        if fmt == "json":
            print(json.dumps(_error_json(err), indent=2))
        else:
            log(f"error: {err}", 1, color=Fore.RED)
        return err.exit_code


def main() -> None:
    just_fix_windows_console()
    load_dotenv()
    sys.exit(run())


if __name__ == "__main__":
    main()
