"""Command-line orchestration for braid Floer generator computations."""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from .braid_engine import (
    BraidWord,
    CompositionOrder,
    braid_automorphism,
    braid_permutation,
    closure_components,
    closure_is_knot,
    exponent_sum,
    format_braid_word,
    format_free_word,
    parse_braid_word,
)
from .config import (
    API_HOST,
    API_PORT,
    API_RELOAD,
    DEFAULT_CONVENTION,
    GOERITZ_5_2_PATH,
    GOERITZ_5_2_REDUCED_PATH,
    LOG_FORMAT,
    LOG_LEVEL,
    SolverConfig,
    load_solver_config,
)
from .errors import FloerInputError
from .fixtures import load_fixture
from .floer_fix_solver import (
    Backend,
    BackendAgreement,
    FixedPointReport,
    Mode,
    compare_backends,
    numeric_strict_search,
    report_to_dict,
    strict_fixed_points,
    twisted_fixed_points,
)
from .knot_invariants import (
    SymmetricIntMatrix,
    determinant,
    euler_consistency_check,
    goeritz_paths_agree,
    load_matrix,
    matrix_signature,
)
from .renderer import ReportRenderer
from ..services.seed_pool import SeedPool
from ..storage import ReportStorageError, dump_report, save_report

logger = logging.getLogger(__name__)

PAPER_FIXTURE = "paper-fixture"
CONVENTIONS = (PAPER_FIXTURE, "artin-rightmost", "artin-leftmost")
BACKENDS = ("slice", "numeric", "both")
COMMANDS = ("action", "fix", "signature", "check")


class ExitCode(IntEnum):
    OK = 0
    INCONSISTENT = 1
    INPUT_ERROR = 2
    DISAGREEMENT = 3


@dataclass
class RunRequest:
    """One resolved invocation, shared by the CLI and the HTTP routes.

    Exactly one of ``braid`` and ``fixture`` names the source (``signature``
    needs neither). Fixture sources always run under the paper-fixture
    convention.
    """

    command: str
    braid: Optional[str] = None
    strands: Optional[int] = None
    fixture: Optional[str] = None
    mode: Mode = Mode.STRICT
    backend: str = "slice"
    convention: Optional[str] = None
    config: SolverConfig = field(default_factory=SolverConfig)
    output: str = "text"
    pin: int = 2
    matrix: Optional[SymmetricIntMatrix] = None
    mu: Optional[int] = None
    signature: Optional[int] = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise FloerInputError(f"unknown command {self.command!r}")
        self.mode = Mode(self.mode)
        if self.backend not in BACKENDS:
            raise FloerInputError(f"backend must be one of {', '.join(BACKENDS)}")
        if self.output not in ("text", "json"):
            raise FloerInputError("output must be 'text' or 'json'")
        if self.command == "signature":
            if self.matrix is None:
                raise FloerInputError("signature needs a matrix")
            return
        if self.fixture is not None and self.braid is not None:
            raise FloerInputError("give either a braid word or --fixture, not both")
        if self.fixture is not None:
            if self.convention not in (None, PAPER_FIXTURE):
                logger.info("Fixture %s always runs under the paper-fixture convention", self.fixture)
            self.convention = PAPER_FIXTURE
        else:
            if self.braid is None:
                self.braid = ""
            if self.strands is None:
                raise FloerInputError("a braid word needs the strand count (-n)")
            self.convention = self.convention or DEFAULT_CONVENTION
            if self.convention == PAPER_FIXTURE:
                raise FloerInputError("the paper-fixture convention applies to --fixture sources only")
            if self.convention not in CONVENTIONS:
                raise FloerInputError(f"convention must be one of {', '.join(CONVENTIONS)}")
        if self.command == "check" and self.signature is None and self.matrix is None:
            raise FloerInputError("check needs --signature or a --matrix")

    @property
    def order(self) -> CompositionOrder:
        if self.convention == "artin-leftmost":
            return CompositionOrder.LEFTMOST_FIRST
        return CompositionOrder.RIGHTMOST_FIRST

    def source(self) -> Union[str, BraidWord]:
        if self.fixture is not None:
            return self.fixture
        return parse_braid_word(self.braid or "", int(self.strands))

    def describe_source(self) -> str:
        if self.fixture is not None:
            return self.fixture
        return f"{self.braid or '(identity)'} in B_{self.strands} ({self.convention})"


@dataclass
class CommandResult:
    command: str
    exit_code: ExitCode
    payload: Dict[str, Any]


# ---------- action ----------

def cmd_action(request: RunRequest) -> CommandResult:
    """Generator images under the braid action, or a fixture's recorded equations."""

    if request.fixture is not None:
        system = load_fixture(request.fixture)
        payload: Dict[str, Any] = {
            "fixture": True,
            "name": system.provenance.name,
            "strands": system.strands,
            "citation": system.provenance.citation,
            "provenance_notes": list(system.provenance.notes),
            "equations": [
                {"text": eq.describe(), "note": note}
                for eq, note in zip(system.equations, system.equation_notes)
            ],
        }
        return CommandResult("action", ExitCode.OK, payload)

    braid = request.source()
    phi = braid_automorphism(braid, request.order)
    permutation = braid_permutation(braid)
    payload = {
        "fixture": False,
        "braid": format_braid_word(braid),
        "strands": braid.strands,
        "convention": request.convention,
        "images": [format_free_word(image) for image in phi.images],
        "permutation": [permutation(i) for i in range(1, braid.strands + 1)],
        "cycles": [list(cycle) for cycle in permutation.cycles()],
        "components": closure_components(braid),
        "closure": "knot" if closure_is_knot(braid) else "link",
        "exponent_sum": exponent_sum(braid),
        "artin_property": phi.check_artin_property(),
    }
    return CommandResult("action", ExitCode.OK, payload)


# ---------- fix ----------

@dataclass
class FixOutcome:
    reports: List[FixedPointReport]
    agreement: Optional[BackendAgreement] = None

    @property
    def primary(self) -> FixedPointReport:
        return self.reports[0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "reports": [report_to_dict(r) for r in self.reports],
            "agreement": self.agreement.to_dict() if self.agreement else None,
        }


def _warn_convention(request: RunRequest) -> None:
    if request.fixture is None:
        logger.warning(
            "Raw braid input runs under the standard Artin action (%s); "
            "this differs from the recorded fixture systems",
            request.convention,
        )


def run_fix(request: RunRequest) -> FixOutcome:
    """Run the requested backend(s); with ``both`` the slice report comes first."""

    _warn_convention(request)
    source = request.source()
    reports: List[FixedPointReport] = []
    if request.backend in ("slice", "both"):
        if request.mode is Mode.STRICT:
            reports.append(strict_fixed_points(source, request.pin, request.config, request.order))
        else:
            reports.append(
                twisted_fixed_points(
                    source, request.config, request.pin, Backend.SLICE, order=request.order
                )
            )
    if request.backend in ("numeric", "both"):
        with SeedPool(request.config.workers) as pool:
            if request.mode is Mode.STRICT:
                numeric = numeric_strict_search(
                    source, request.config, request.pin, pool, request.order
                )
            else:
                numeric = twisted_fixed_points(
                    source, request.config, request.pin, Backend.NUMERIC, pool, request.order
                )
            logger.info("Seed pool: %s", pool.stats.to_dict())
        reports.append(numeric)
    agreement = compare_backends(reports[0], reports[1]) if len(reports) == 2 else None
    return FixOutcome(reports, agreement)


def cmd_fix(request: RunRequest) -> CommandResult:
    outcome = run_fix(request)
    code = ExitCode.OK
    if outcome.agreement is not None and not outcome.agreement.agree:
        code = ExitCode.DISAGREEMENT
    return CommandResult("fix", code, outcome.to_dict())


# ---------- signature / check ----------

def cmd_signature(request: RunRequest) -> CommandResult:
    matrix = request.matrix
    mu = request.mu or 0
    inertia = matrix_signature(matrix)
    payload = {
        "order": matrix.order,
        "matrix": matrix.to_lists(),
        "inertia": inertia.to_dict(),
        "mu": mu,
        "knot_signature": inertia.signature - mu,
        "determinant": determinant(matrix),
    }
    return CommandResult("signature", ExitCode.OK, payload)


def cmd_check(request: RunRequest) -> CommandResult:
    """Fixed-point count against σ/2: exit 0 iff parity and bound both hold."""

    outcome = run_fix(request)
    if request.signature is not None:
        signature = request.signature
    else:
        signature = matrix_signature(request.matrix).signature - (request.mu or 0)
    consistency = euler_consistency_check(outcome.primary, signature)
    if outcome.agreement is not None and not outcome.agreement.agree:
        code = ExitCode.DISAGREEMENT
    elif consistency.consistent:
        code = ExitCode.OK
    else:
        code = ExitCode.INCONSISTENT
    payload = {
        "source": request.describe_source(),
        "signature": signature,
        "consistency": consistency.to_dict(),
        "fix": outcome.to_dict(),
    }
    return CommandResult("check", code, payload)


def run_request(request: RunRequest) -> CommandResult:
    handlers = {
        "action": cmd_action,
        "fix": cmd_fix,
        "signature": cmd_signature,
        "check": cmd_check,
    }
    return handlers[request.command](request)


# ---------- repro ----------

@dataclass(frozen=True)
class ReproCheck:
    name: str
    expected: str
    actual: str

    @property
    def ok(self) -> bool:
        return self.expected == self.actual

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "expected": self.expected, "actual": self.actual, "ok": self.ok}


def _angle_set(report: FixedPointReport) -> str:
    record = [p.exact_angles[0] for p in report.solutions if p.exact_angles is not None]
    return "{" + ", ".join(str(Fraction(a)) for a in sorted(record)) + "}"


def cmd_repro(config: SolverConfig) -> CommandResult:
    """The four recorded numbers: 4_1 empty, 5_2 angles, Goeritz signature, Euler check."""

    checks: List[ReproCheck] = []

    fig8 = run_fix(RunRequest("fix", fixture="fig8-paper", backend="both", config=config))
    checks.append(ReproCheck("fig8-paper slice count", "0", str(fig8.reports[0].count)))
    checks.append(ReproCheck("fig8-paper numeric count", "0", str(fig8.reports[1].count)))

    five_two = run_fix(RunRequest("fix", fixture="5_2-paper", backend="both", config=config))
    checks.append(ReproCheck("5_2-paper angles (units of π)", "{1/5, 3/5, 1}", _angle_set(five_two.reports[0])))
    checks.append(
        ReproCheck("5_2-paper backend agreement", "True", str(five_two.agreement.agree))
    )

    goeritz, bundled_mu = load_matrix(GOERITZ_5_2_PATH)
    paths = goeritz_paths_agree(goeritz, bundled_mu or 0)
    checks.append(ReproCheck("5_2 Goeritz signature", "2", str(paths.unreduced_signature)))
    reduced, reduced_mu = load_matrix(GOERITZ_5_2_REDUCED_PATH)
    checks.append(
        ReproCheck(
            "5_2 reduced Goeritz signature, determinant",
            "2, 7",
            f"{matrix_signature(reduced).signature - (reduced_mu or 0)}, {determinant(reduced)}",
        )
    )

    for name, outcome, signature in (
        ("fig8-paper", fig8, 0),
        ("5_2-paper", five_two, paths.unreduced_signature),
    ):
        consistency = euler_consistency_check(outcome.reports[0], signature)
        checks.append(
            ReproCheck(f"{name} Euler consistency", "True", str(consistency.consistent))
        )

    passed = sum(1 for c in checks if c.ok)
    code = ExitCode.OK if passed == len(checks) else ExitCode.INCONSISTENT
    if code is not ExitCode.OK:
        logger.error("Reproduction deviates in %d of %d checks", len(checks) - passed, len(checks))
    payload = {"checks": [c.to_dict() for c in checks], "passed": passed}
    return CommandResult("repro", code, payload)


# ---------- CLI ----------

def configure_logging(level: Optional[str] = None) -> None:
    if not logging.getLogger().handlers:
        logging.basicConfig(level=(level or LOG_LEVEL), format=LOG_FORMAT)


def _add_source_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("braid", nargs="?", help="Braid word, e.g. \"s1 s2^-1\" or \"1 -2\"")
    parser.add_argument("-n", "--strands", type=int, help="Number of strands")
    parser.add_argument("--fixture", help="Bundled word system, e.g. fig8-paper or 5_2-paper")
    parser.add_argument(
        "--convention",
        choices=CONVENTIONS,
        help=f"Action convention for braid input (default: {DEFAULT_CONVENTION})",
    )


def _add_solver_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.STRICT.value)
    parser.add_argument("--backend", choices=BACKENDS, default="slice")
    parser.add_argument("--pin", type=int, default=2, help="Generator pinned to i by the gauge fix")
    parser.add_argument("--config", type=Path, help="Solver config JSON (default: FLOER_CONFIG_PATH)")
    parser.add_argument("--grid", type=int, help="Seeds per sphere dimension")
    parser.add_argument("--seed", type=int, help="RNG seed for the seed grid offsets")
    parser.add_argument("--workers", type=int, help="Seed-pool worker threads")


def _add_output_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", choices=("text", "json"), default="text")
    parser.add_argument("--save", metavar="NAME", help="Also save the JSON report under DATA_ROOT/reports")


def _add_matrix_args(parser: argparse.ArgumentParser, required: bool) -> None:
    parser.add_argument(
        "--matrix", type=Path, required=required, help="Matrix file (JSON or whitespace rows)"
    )
    parser.add_argument("--mu", type=int, help="Goeritz correction term μ (default: bundled or 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="braidfloer",
        description="Fixed points of braid actions on traceless SU(2) representations",
    )
    parser.add_argument("--log-level", help=f"Logging level (default: {LOG_LEVEL})")
    sub = parser.add_subparsers(dest="command", required=True)

    action = sub.add_parser("action", help="Images of the generators under the braid action")
    _add_source_args(action)
    _add_output_args(action)

    fix = sub.add_parser("fix", help="Fixed points (Floer chain generators)")
    _add_source_args(fix)
    _add_solver_args(fix)
    _add_output_args(fix)

    signature = sub.add_parser("signature", help="Inertia and knot signature of a Goeritz matrix")
    _add_matrix_args(signature, required=True)
    _add_output_args(signature)

    check = sub.add_parser("check", help="Euler-characteristic consistency of a fixed-point count")
    _add_source_args(check)
    _add_solver_args(check)
    _add_matrix_args(check, required=False)
    check.add_argument("--signature", type=int, help="Knot signature, instead of --matrix")
    _add_output_args(check)

    repro = sub.add_parser("repro", help="Re-derive the recorded 4_1 and 5_2 numbers")
    _add_solver_args(repro)
    _add_output_args(repro)

    serve = sub.add_parser("serve", help="Run the HTTP API")
    serve.add_argument("--host", default=API_HOST)
    serve.add_argument("--port", type=int, default=API_PORT)
    serve.add_argument("--reload", action="store_true", default=API_RELOAD)
    return parser


def _solver_config(args: argparse.Namespace) -> SolverConfig:
    return load_solver_config(
        getattr(args, "config", None),
        {
            "grid_per_dim": getattr(args, "grid", None),
            "rng_seed": getattr(args, "seed", None),
            "workers": getattr(args, "workers", None),
        },
    )


def request_from_args(args: argparse.Namespace) -> RunRequest:
    matrix = None
    mu = getattr(args, "mu", None)
    if getattr(args, "matrix", None) is not None:
        matrix, bundled_mu = load_matrix(args.matrix)
        if mu is None:
            mu = bundled_mu
    config = _solver_config(args) if args.command in ("fix", "check") else SolverConfig()
    return RunRequest(
        command=args.command,
        braid=getattr(args, "braid", None),
        strands=getattr(args, "strands", None),
        fixture=getattr(args, "fixture", None),
        mode=Mode(getattr(args, "mode", Mode.STRICT.value)),
        backend=getattr(args, "backend", "slice"),
        convention=getattr(args, "convention", None),
        config=config,
        output=args.output,
        pin=getattr(args, "pin", 2),
        matrix=matrix,
        mu=mu,
        signature=getattr(args, "signature", None),
    )


def emit(result: CommandResult, output: str, save: Optional[str] = None) -> str:
    if save:
        save_report(save, result.payload)
    if output == "json":
        return dump_report(result.payload)
    return ReportRenderer().render(result.command, result.payload)


def _serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("braidfloer.api:app", host=args.host, port=args.port, reload=args.reload)
    return ExitCode.OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Command-line interface; returns the process exit code."""

    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    try:
        if args.command == "serve":
            return _serve(args)
        if args.command == "repro":
            result = cmd_repro(_solver_config(args))
        else:
            result = run_request(request_from_args(args))
        sys.stdout.write(emit(result, args.output, args.save))
        return int(result.exit_code)
    except (FloerInputError, ReportStorageError) as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return int(ExitCode.INPUT_ERROR)
    except KeyboardInterrupt:
        logger.warning("Cancelled by user")
        return 130


if __name__ == "__main__":
    sys.exit(main())
