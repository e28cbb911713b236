"""Fixed points of a braid action on traceless SU(2) tuples.

Two backends produce the generator set:

* slice-exact: odd words on the i–j circle collapse to affine angle forms,
  turning σ(x_j) = x_j into integer congruences solved by Smith normal form;
* numeric: seeded Gauss–Newton on the full gauge-fixed variety.

Both quotient by the reflection left over after gauge fixing (conjugation by
i, θ ↦ −θ) and flag reducible points instead of dropping them.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .braid_engine import (
    BraidWord,
    CompositionOrder,
    braid_automorphism,
    closure_is_knot,
    format_braid_word,
)
from .config import FLOAT_DIGITS, SolverConfig
from .congruence import (
    AnglePoint,
    Congruence,
    CongruenceSystem,
    SolutionKind,
    SolutionSet,
    solve_congruences,
)
from .fixtures import Equation, Provenance, WordSystem, load_fixture
from .numeric_solver import NumericSearch, search, tuple_residual
from .slice_calculus import slice_evaluate
from .su2_quaternion import (
    QJ,
    Fingerprint,
    Quaternion,
    RepTuple,
    default_neighbor,
    fingerprint,
    rotation_k,
)
from ..services.seed_pool import SeedPool

logger = logging.getLogger(__name__)

Source = Union[str, BraidWord, WordSystem]


class Mode(str, Enum):
    STRICT = "strict"
    TWISTED = "twisted"


class Backend(str, Enum):
    SLICE = "slice-exact"
    NUMERIC = "numeric"


class TwistKind(str, Enum):
    ROTATION = "rotation"  # g = e^{ψk}: θ ↦ θ + 2ψ
    REFLECTION = "reflection"  # g = e^{ψk}·j: θ ↦ π + 2ψ − θ
    GENERAL = "general"  # off-slice numeric twist, any unit g


# ---------- Word systems and congruences ----------

def build_word_system(
    source: Source,
    order: CompositionOrder = CompositionOrder.RIGHTMOST_FIRST,
) -> WordSystem:
    """Fixture name → recorded system; braid → (image of x_j, x_j) per generator."""

    if isinstance(source, WordSystem):
        return source
    if isinstance(source, str):
        return load_fixture(source)
    order = CompositionOrder(order)
    if not closure_is_knot(source):
        logger.warning(
            "Closure of %s is a link, not a knot; fixed points are still computed",
            format_braid_word(source) or "the identity braid",
        )
    phi = braid_automorphism(source, order)
    equations = tuple(Equation(image, j) for j, image in enumerate(phi.images, start=1))
    provenance = Provenance(kind="artin", name=format_braid_word(source), order=order.value)
    return WordSystem(source.strands, equations, provenance)


def angle_names(strands: int, pin: int) -> Tuple[str, ...]:
    return tuple(f"θ{j}" for j in range(1, strands + 1) if j != pin)


def build_congruences(
    system: WordSystem,
    pin: int = 2,
    twist: Optional[TwistKind] = None,
) -> CongruenceSystem:
    """One congruence per equation, in units of π, with θ_pin = 0 removed.

    Rotation twist adds a shift s (g = e^{sπk/2}); reflection twist adds c with
    g = e^{(c−1)πk/2}·j and flips the sign of the right-hand angle.
    """

    n = system.strands
    keep = [j for j in range(1, n + 1) if j != pin]
    names = list(angle_names(n, pin))
    twist = TwistKind(twist) if twist is not None else None
    if twist is TwistKind.GENERAL:
        raise ValueError("general twists have no slice congruences")
    if twist is TwistKind.ROTATION:
        names.append("s")
    elif twist is TwistKind.REFLECTION:
        names.append("c")
    equations = []
    for eq in system.equations:
        form = slice_evaluate(eq.lhs, n)
        lhs = [form.coeffs[j - 1] for j in keep]
        rhs = [0] * len(keep)
        if eq.rhs != pin:
            rhs[keep.index(eq.rhs)] = -1 if twist is TwistKind.REFLECTION else 1
        if twist is not None:
            lhs.append(0)
            rhs.append(1)
        equations.append(Congruence(tuple(lhs), tuple(rhs), form.halfturns))
    return CongruenceSystem(tuple(names), tuple(equations), pin)


def describe_congruences(system: WordSystem, pin: int = 2) -> List[str]:
    """Human-readable congruences after eliminating the angles the system determines."""
    return build_congruences(system, pin).eliminated().describe()


# ---------- Reports ----------

@dataclass(frozen=True)
class TwistRecord:
    kind: TwistKind
    parameter: Optional[Fraction]  # s or c in units of π (slice-exact only)
    quaternion: Quaternion


@dataclass(frozen=True)
class FixedPoint:
    point: RepTuple
    residual: float
    fingerprint: Fingerprint
    irreducible: bool
    on_slice: bool
    exact_angles: Optional[AnglePoint] = None
    angles: Optional[Tuple[float, ...]] = None
    twists: Tuple[TwistRecord, ...] = ()
    members: int = 1


@dataclass(frozen=True)
class FixedPointReport:
    mode: Mode
    backend: Backend
    strands: int
    pin: int
    provenance: Provenance
    kind: SolutionKind
    raw_count: int
    solutions: Tuple[FixedPoint, ...]
    congruences: Tuple[str, ...] = ()
    family: Tuple[Tuple[int, ...], ...] = ()
    stats: Dict[str, Any] = field(default_factory=dict)

    @property
    def count(self) -> int:
        return len(self.solutions)

    @property
    def irreducible(self) -> Tuple[FixedPoint, ...]:
        return tuple(s for s in self.solutions if s.irreducible)

    @property
    def irreducible_count(self) -> int:
        return len(self.irreducible)

    @property
    def on_slice(self) -> Tuple[FixedPoint, ...]:
        return tuple(s for s in self.solutions if s.on_slice)


# ---------- Slice-exact backend ----------

def _reflect(point: Sequence[Fraction]) -> AnglePoint:
    return tuple((-Fraction(x)) % 2 for x in point)


def _record_order(strands: int, pin: int) -> List[int]:
    """0-based strand order used to pick reflection representatives, angle-of-record first."""

    record = default_neighbor(pin, strands) - 1
    return [record] + [j for j in range(strands) if j not in (record, pin - 1)]


def reflection_representative(angles: Sequence[Fraction], pin: int) -> AnglePoint:
    """Lexicographically smaller of φ and −φ, compared angle-of-record first."""

    order = _record_order(len(angles), pin)
    mirrored = _reflect(angles)
    key = tuple(Fraction(angles[j]) % 2 for j in order)
    mirrored_key = tuple(mirrored[j] for j in order)
    return tuple(Fraction(x) % 2 for x in angles) if key <= mirrored_key else mirrored


def exact_irreducible(angles: Sequence[Fraction]) -> bool:
    """On the slice a tuple is reducible exactly when all angles agree mod π."""
    return len({Fraction(a) % 1 for a in angles}) > 1


def _full_angles(point: Sequence[Fraction], strands: int, pin: int) -> AnglePoint:
    values = list(point[: strands - 1])
    values.insert(pin - 1, Fraction(0))
    return tuple(values)


def _twist_quaternion(kind: TwistKind, parameter: Fraction) -> Quaternion:
    if kind is TwistKind.ROTATION:
        return rotation_k(float(parameter) * math.pi / 2.0)
    return rotation_k(float(parameter - 1) * math.pi / 2.0) * QJ


def _slice_tuple(angles: Sequence[Fraction]) -> RepTuple:
    return RepTuple.from_angles([float(a) * math.pi for a in angles])


def _exact_branch(
    system: WordSystem, pin: int, twist: Optional[TwistKind]
) -> Tuple[CongruenceSystem, SolutionSet]:
    cs = build_congruences(system, pin, twist)
    solutions = solve_congruences(cs)
    for point in solutions.points:
        defects = cs.defects(point)
        if any(defects):
            raise ArithmeticError(f"congruence defect {defects} at {point}")
    return cs, solutions


def strict_fixed_points(
    source: Source,
    pin: int = 2,
    config: Optional[SolverConfig] = None,
    order: CompositionOrder = CompositionOrder.RIGHTMOST_FIRST,
) -> FixedPointReport:
    """Slice-exact fixed points with θ_pin = 0, quotiented by θ ↦ −θ."""

    system = build_word_system(source, order)
    cs, solutions = _exact_branch(system, pin, None)
    return _exact_report(system, pin, Mode.STRICT, [(None, cs, solutions)])


def _exact_report(
    system: WordSystem,
    pin: int,
    mode: Mode,
    branches: Sequence[Tuple[Optional[TwistKind], CongruenceSystem, SolutionSet]],
) -> FixedPointReport:
    n = system.strands
    kinds = {solutions.kind for _, _, solutions in branches}
    if SolutionKind.FAMILY in kinds:
        kind = SolutionKind.FAMILY
    elif kinds == {SolutionKind.EMPTY}:
        kind = SolutionKind.EMPTY
    else:
        kind = SolutionKind.FINITE

    raw: set = set()
    grouped: Dict[AnglePoint, List[TwistRecord]] = {}
    for twist, _, solutions in branches:
        for point in solutions.points:
            angles = _full_angles(point, n, pin)
            raw.add(angles)
            rep = reflection_representative(angles, pin)
            records = grouped.setdefault(rep, [])
            if twist is None:
                continue
            parameter = point[-1] if rep == angles else (-point[-1]) % 2
            if rep == angles and rep == _reflect(angles):
                parameter = min(point[-1], (-point[-1]) % 2)
            if any(r.kind is twist and r.parameter == parameter for r in records):
                continue
            records.append(TwistRecord(twist, parameter, _twist_quaternion(twist, parameter)))

    fixed: List[FixedPoint] = []
    for rep in sorted(grouped, key=lambda a: [a[j] for j in _record_order(n, pin)]):
        twists = tuple(sorted(grouped[rep], key=lambda r: (r.kind.value, r.parameter)))
        point = _slice_tuple(rep)
        residual = tuple_residual(system, point, twists[0].quaternion if twists else None)
        if residual > 1e-9:
            logger.warning("Slice point %s has numeric residual %.3g", rep, residual)
        fixed.append(
            FixedPoint(
                point=point,
                residual=residual,
                fingerprint=fingerprint(point),
                irreducible=exact_irreducible(rep),
                on_slice=True,
                exact_angles=rep,
                angles=tuple(float(a) for a in rep),
                twists=twists,
            )
        )

    family = tuple(d for _, _, solutions in branches for d in solutions.family)
    first_cs = branches[0][1]
    congruences: Tuple[str, ...] = ()
    if mode is Mode.STRICT:
        congruences = tuple(first_cs.eliminated().describe())
    else:
        congruences = tuple(line for _, cs, _ in branches for line in cs.describe())
    logger.info(
        "Slice-exact %s: %s, %d raw, %d representatives (%d irreducible)",
        mode.value,
        kind.value,
        len(raw),
        len(fixed),
        sum(1 for f in fixed if f.irreducible),
    )
    return FixedPointReport(
        mode=mode,
        backend=Backend.SLICE,
        strands=n,
        pin=pin,
        provenance=system.provenance,
        kind=kind,
        raw_count=len(raw),
        solutions=tuple(fixed),
        congruences=congruences,
        family=family,
    )


# ---------- Numeric backend ----------

def _numeric_report(system: WordSystem, pin: int, mode: Mode, found: NumericSearch) -> FixedPointReport:
    points = []
    for s in found.solutions:
        twists: Tuple[TwistRecord, ...] = ()
        if s.twist is not None:
            kind = TwistKind(s.twist_kind) if s.twist_kind else TwistKind.GENERAL
            twists = (TwistRecord(kind, None, s.twist),)
        points.append(
            FixedPoint(
                point=s.point,
                residual=s.residual,
                fingerprint=s.fingerprint,
                irreducible=s.irreducible,
                on_slice=s.on_slice,
                angles=s.angles,
                twists=twists,
                members=s.members,
            )
        )
    kind = SolutionKind.FINITE if points else SolutionKind.EMPTY
    stats = {
        "seeds": found.seeds,
        "grid": found.grid,
        "slice_grid": found.slice_grid,
        "accepted": found.accepted,
        "on_slice_classes": len(found.on_slice),
        "off_slice_classes": len(found.off_slice),
    }
    return FixedPointReport(
        mode=mode,
        backend=Backend.NUMERIC,
        strands=system.strands,
        pin=pin,
        provenance=system.provenance,
        kind=kind,
        raw_count=sum(s.members for s in found.solutions),
        solutions=tuple(points),
        stats=stats,
    )


def numeric_strict_search(
    source: Source,
    config: Optional[SolverConfig] = None,
    pin: int = 2,
    pool: Optional[SeedPool] = None,
    order: CompositionOrder = CompositionOrder.RIGHTMOST_FIRST,
) -> FixedPointReport:
    system = build_word_system(source, order)
    found = search(system, config or SolverConfig(), pin=pin, twisted=False, pool=pool)
    return _numeric_report(system, pin, Mode.STRICT, found)


def twisted_fixed_points(
    source: Source,
    config: Optional[SolverConfig] = None,
    pin: int = 2,
    backend: Backend = Backend.SLICE,
    pool: Optional[SeedPool] = None,
    order: CompositionOrder = CompositionOrder.RIGHTMOST_FIRST,
) -> FixedPointReport:
    """Tuples with σ(x_j) = g x_j g^-1 for a common unit quaternion g.

    On the slice both circle-preserving twists are solved and merged per tuple;
    numerically g joins the unknowns.
    """

    system = build_word_system(source, order)
    if Backend(backend) is Backend.NUMERIC:
        found = search(system, config or SolverConfig(), pin=pin, twisted=True, pool=pool)
        return _numeric_report(system, pin, Mode.TWISTED, found)
    branches = []
    for twist in (TwistKind.ROTATION, TwistKind.REFLECTION):
        cs, solutions = _exact_branch(system, pin, twist)
        branches.append((twist, cs, solutions))
    return _exact_report(system, pin, Mode.TWISTED, branches)


# ---------- Backend agreement ----------

@dataclass(frozen=True)
class BackendAgreement:
    comparable: bool
    agree: bool
    matched: int
    missing: Tuple[str, ...]
    unexpected: Tuple[str, ...]
    off_slice: int
    note: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "comparable": self.comparable,
            "agree": self.agree,
            "matched": self.matched,
            "missing": list(self.missing),
            "unexpected": list(self.unexpected),
            "off_slice_classes": self.off_slice,
            "note": self.note,
        }


def _label(point: FixedPoint) -> str:
    if point.exact_angles is not None:
        return "(" + ", ".join(format_pi(a) for a in point.exact_angles) + ")"
    if point.angles is not None:
        return "(" + ", ".join(f"{a:.6f}·π" for a in point.angles) + ")"
    return str(point.fingerprint.values)


def compare_backends(
    exact: FixedPointReport, numeric: FixedPointReport, tolerance: float = 1e-6
) -> BackendAgreement:
    """Match slice-exact representatives with on-slice numeric classes by fingerprint.

    Off-slice numeric classes lie outside what the congruences can see and are
    only counted.
    """

    off_slice = len(numeric.solutions) - len(numeric.on_slice)
    if exact.kind is SolutionKind.FAMILY:
        return BackendAgreement(
            comparable=False,
            agree=True,
            matched=0,
            missing=(),
            unexpected=(),
            off_slice=off_slice,
            note="slice solution set is positive-dimensional; not comparable",
        )
    found = list(numeric.on_slice)
    used = [False] * len(found)
    missing = []
    matched = 0
    for point in exact.solutions:
        hit = next(
            (
                i
                for i, candidate in enumerate(found)
                if not used[i] and point.fingerprint.distance(candidate.fingerprint) < tolerance
            ),
            None,
        )
        if hit is None:
            missing.append(_label(point))
        else:
            used[hit] = True
            matched += 1
    unexpected = tuple(_label(found[i]) for i, u in enumerate(used) if not u)
    agree = not missing and not unexpected
    if not agree:
        logger.warning(
            "Backends disagree: %d slice points missing numerically, %d unexpected numeric classes",
            len(missing),
            len(unexpected),
        )
    return BackendAgreement(True, agree, matched, tuple(missing), unexpected, off_slice)


# ---------- Serialization ----------

def format_pi(value: Fraction) -> str:
    """Exact angle as text: ``0``, ``π``, ``3/5·π``."""

    value = Fraction(value)
    if value == 0:
        return "0"
    if value == 1:
        return "π"
    if value.denominator == 1:
        return f"{value.numerator}·π"
    return f"{value.numerator}/{value.denominator}·π"


def round_float(value: float, digits: int = FLOAT_DIGITS) -> float:
    rounded = float(f"{value:.{digits}g}")
    return 0.0 if rounded == 0 else rounded


def _fraction_dict(value: Fraction) -> Dict[str, int]:
    return {"num": value.numerator, "den": value.denominator}


def _floats(values: Iterable[float]) -> List[float]:
    return [round_float(v) for v in values]


def fixed_point_to_dict(point: FixedPoint) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "tuple": [_floats(v) for v in point.point.to_json()],
        "residual": round_float(point.residual),
        "fingerprint": _floats(point.fingerprint.values),
        "irreducible": point.irreducible,
        "on_slice": point.on_slice,
        "members": point.members,
    }
    if point.exact_angles is not None:
        data["angles_exact"] = [_fraction_dict(a) for a in point.exact_angles]
        data["angles_text"] = [format_pi(a) for a in point.exact_angles]
    if point.angles is not None:
        data["angles"] = _floats(point.angles)
    if point.twists:
        data["twists"] = [
            {
                "kind": t.kind.value,
                "parameter": None if t.parameter is None else _fraction_dict(t.parameter),
                "quaternion": _floats(t.quaternion.as_tuple()),
            }
            for t in point.twists
        ]
    return data


def report_to_dict(report: FixedPointReport) -> Dict[str, Any]:
    return {
        "mode": report.mode.value,
        "backend": report.backend.value,
        "strands": report.strands,
        "pin": report.pin,
        "provenance": report.provenance.to_dict(),
        "kind": report.kind.value,
        "raw_count": report.raw_count,
        "count": report.count,
        "irreducible_count": report.irreducible_count,
        "solutions": [fixed_point_to_dict(p) for p in report.solutions],
        "congruences": list(report.congruences),
        "family": [list(d) for d in report.family],
        "stats": dict(report.stats),
    }


__all__ = [
    "Backend",
    "BackendAgreement",
    "FixedPoint",
    "FixedPointReport",
    "Mode",
    "TwistKind",
    "TwistRecord",
    "angle_names",
    "build_congruences",
    "build_word_system",
    "compare_backends",
    "describe_congruences",
    "exact_irreducible",
    "format_pi",
    "numeric_strict_search",
    "reflection_representative",
    "report_to_dict",
    "round_float",
    "strict_fixed_points",
    "twisted_fixed_points",
]
