"""Exact solving of linear congruences Σ a_ij φ_j ≡ b_i (mod 2) over real angles.

Angles are measured in units of π, so a congruence modulo 2π becomes one
modulo 2. A system U·A·V = D in Smith normal form decouples into d_i ψ_i ≡ (Ub)_i,
each nonzero d_i contributing |d_i| solutions; zero diagonal rows demand an
even right-hand side and zero columns leave a free direction.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Dict, List, Sequence, Tuple

from .slice_calculus import format_linear

logger = logging.getLogger(__name__)

IntMatrix = List[List[int]]
AnglePoint = Tuple[Fraction, ...]


def _identity(size: int) -> IntMatrix:
    return [[1 if r == c else 0 for c in range(size)] for r in range(size)]


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U·A·V = D diagonal, U and V unimodular, d_1 | d_2 | ..."""

    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    d = [list(map(int, row)) for row in matrix]
    u = _identity(rows)
    v = _identity(cols)

    def swap_rows(a: int, b: int) -> None:
        d[a], d[b] = d[b], d[a]
        u[a], u[b] = u[b], u[a]

    def swap_cols(a: int, b: int) -> None:
        for row in d:
            row[a], row[b] = row[b], row[a]
        for row in v:
            row[a], row[b] = row[b], row[a]

    def add_row(target: int, source: int, factor: int) -> None:
        d[target] = [x + factor * y for x, y in zip(d[target], d[source])]
        u[target] = [x + factor * y for x, y in zip(u[target], u[source])]

    def add_col(target: int, source: int, factor: int) -> None:
        for row in d:
            row[target] += factor * row[source]
        for row in v:
            row[target] += factor * row[source]

    for t in range(min(rows, cols)):
        while True:
            candidates = [
                (abs(d[r][c]), r, c)
                for r in range(t, rows)
                for c in range(t, cols)
                if d[r][c] != 0
            ]
            if not candidates:
                return u, d, v
            _, pr, pc = min(candidates)
            swap_rows(t, pr)
            swap_cols(t, pc)
            pivot = d[t][t]
            clean = True
            for r in range(t + 1, rows):
                if d[r][t]:
                    add_row(r, t, -(d[r][t] // pivot))
                    clean = clean and d[r][t] == 0
            for c in range(t + 1, cols):
                if d[t][c]:
                    add_col(c, t, -(d[t][c] // pivot))
                    clean = clean and d[t][c] == 0
            if not clean:
                continue
            offender = next(
                (r for r in range(t + 1, rows) for c in range(t + 1, cols) if d[r][c] % pivot),
                None,
            )
            if offender is None:
                break
            add_row(t, offender, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return u, d, v


@dataclass(frozen=True)
class Congruence:
    """Σ lhs_j φ_j + halfturns ≡ Σ rhs_j φ_j (mod 2), angles in units of π."""

    lhs: Tuple[int, ...]
    rhs: Tuple[int, ...]
    halfturns: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "halfturns", self.halfturns % 2)

    @property
    def row(self) -> Tuple[int, ...]:
        return tuple(a - b for a, b in zip(self.lhs, self.rhs))

    def defect(self, point: Sequence[Fraction]) -> Fraction:
        """Zero iff the point satisfies the congruence exactly."""
        value = sum((a * Fraction(p) for a, p in zip(self.row, point)), Fraction(0))
        return (value + self.halfturns) % 2

    def describe(self, names: Sequence[str]) -> str:
        left = format_linear(self.lhs, names, self.halfturns)
        right = format_linear(self.rhs, names)
        return f"{left} ≡ {right} (mod 2π)"


@dataclass(frozen=True)
class Substitution:
    """variable ≡ Σ coeffs_j φ_j + halfturns, over the system's variables."""

    variable: int
    coeffs: Tuple[int, ...]
    halfturns: int


@dataclass(frozen=True)
class CongruenceSystem:
    """Congruences over the named unknown angles; the pinned angle is already 0 and absent."""

    variables: Tuple[str, ...]
    equations: Tuple[Congruence, ...]
    pin: int

    @property
    def matrix(self) -> List[List[int]]:
        return [list(eq.row) for eq in self.equations]

    @property
    def rhs(self) -> List[int]:
        # Σ a·φ ≡ -halfturns ≡ halfturns (mod 2)
        return [eq.halfturns for eq in self.equations]

    def rows(self) -> List[Tuple[Tuple[int, ...], int]]:
        return [(eq.row, eq.halfturns) for eq in self.equations]

    def defects(self, point: Sequence[Fraction]) -> List[Fraction]:
        return [eq.defect(point) for eq in self.equations]

    def describe(self) -> List[str]:
        return [eq.describe(self.variables) for eq in self.equations]

    def eliminated(self) -> "EliminatedSystem":
        """Substitute away every angle fixed by an equation whose left side omits it.

        Later variables are eliminated first, so the lowest-index angle survives
        as the parameter.
        """

        size = len(self.variables)
        equations = list(self.equations)
        substitutions: List[Substitution] = []
        removed: List[int] = []
        while True:
            choice = None
            for position, eq in enumerate(equations):
                targets = [j for j, c in enumerate(eq.rhs) if c]
                if len(targets) != 1 or eq.rhs[targets[0]] != 1 or eq.lhs[targets[0]] != 0:
                    continue
                if choice is None or targets[0] > choice[1]:
                    choice = (position, targets[0])
            if choice is None:
                break
            position, var = choice
            source = equations.pop(position)
            sub = Substitution(var, source.lhs, source.halfturns % 2)
            equations = [_substitute(eq, sub) for eq in equations]
            substitutions = [_substitute_expression(s, sub) for s in substitutions]
            substitutions.append(sub)
            removed.append(var)

        keep = [j for j in range(size) if j not in removed]
        reduced = CongruenceSystem(
            variables=tuple(self.variables[j] for j in keep),
            equations=tuple(
                Congruence(
                    tuple(eq.lhs[j] for j in keep),
                    tuple(eq.rhs[j] for j in keep),
                    eq.halfturns,
                )
                for eq in equations
            ),
            pin=self.pin,
        )
        return EliminatedSystem(self, reduced, tuple(substitutions), tuple(keep))


def _substitute(eq: Congruence, sub: Substitution) -> Congruence:
    a, b = eq.lhs[sub.variable], eq.rhs[sub.variable]
    if a == 0 and b == 0:
        return eq
    lhs = [x + a * s for x, s in zip(eq.lhs, sub.coeffs)]
    rhs = [x + b * s for x, s in zip(eq.rhs, sub.coeffs)]
    lhs[sub.variable] = 0
    rhs[sub.variable] = 0
    # a rhs halfturn moves across with its sign flipped, which is the same mod 2
    return Congruence(tuple(lhs), tuple(rhs), eq.halfturns + (a - b) * sub.halfturns)


def _substitute_expression(expr: Substitution, sub: Substitution) -> Substitution:
    a = expr.coeffs[sub.variable]
    if a == 0:
        return expr
    coeffs = [x + a * s for x, s in zip(expr.coeffs, sub.coeffs)]
    coeffs[sub.variable] = 0
    return Substitution(expr.variable, tuple(coeffs), (expr.halfturns + a * sub.halfturns) % 2)


@dataclass(frozen=True)
class EliminatedSystem:
    original: CongruenceSystem
    reduced: CongruenceSystem
    substitutions: Tuple[Substitution, ...]
    kept: Tuple[int, ...]

    def expand(self, point: Sequence[Fraction]) -> AnglePoint:
        """Lift a solution of the reduced system back to all original variables."""

        full = [Fraction(0)] * len(self.original.variables)
        for j, value in zip(self.kept, point):
            full[j] = Fraction(value)
        for sub in self.substitutions:
            value = sum((c * full[j] for j, c in enumerate(sub.coeffs)), Fraction(0))
            full[sub.variable] = (value + sub.halfturns) % 2
        return tuple(full)

    def describe(self) -> List[str]:
        lines = self.reduced.describe()
        names = self.original.variables
        for sub in self.substitutions:
            lines.append(f"{names[sub.variable]} = {format_linear(sub.coeffs, names, sub.halfturns)}")
        return lines


class SolutionKind(str, Enum):
    FINITE = "finite"
    FAMILY = "family"
    EMPTY = "empty"


@dataclass(frozen=True)
class SolutionSet:
    kind: SolutionKind
    variables: Tuple[str, ...]
    points: Tuple[AnglePoint, ...] = ()
    family: Tuple[Tuple[int, ...], ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.points)


def _reduce_point(values: Sequence[Fraction]) -> AnglePoint:
    return tuple(Fraction(x) % 2 for x in values)


def solve_congruences(cs: CongruenceSystem) -> SolutionSet:
    """All angle vectors in [0, 2)^k solving the system; a family when underdetermined.

    For a family, ``points`` holds one particular solution per torsion class and
    ``family`` the integer directions of the free part.
    """

    cols = len(cs.variables)
    matrix = cs.matrix
    rhs = cs.rhs
    if cols == 0:
        if any(b % 2 for b in rhs):
            return SolutionSet(SolutionKind.EMPTY, cs.variables)
        return SolutionSet(SolutionKind.FINITE, cs.variables, ((),))

    if not matrix:
        direction = tuple(tuple(1 if r == c else 0 for r in range(cols)) for c in range(cols))
        zero = tuple(Fraction(0) for _ in range(cols))
        return SolutionSet(SolutionKind.FAMILY, cs.variables, (zero,), direction)

    u, d, v = smith_normal_form(matrix)
    ub = [sum(a * b for a, b in zip(row, rhs)) for row in u]
    rank = sum(1 for i in range(min(len(d), cols)) if d[i][i] != 0)

    for i in range(rank, len(d)):
        if ub[i] % 2:
            logger.debug("Congruence system inconsistent at invariant row %d", i)
            return SolutionSet(SolutionKind.EMPTY, cs.variables)

    choices = []
    for i in range(rank):
        di = d[i][i]
        choices.append([Fraction(ub[i] + 2 * k, di) for k in range(di)])
    free = cols - rank
    points = set()
    for psi_head in product(*choices):
        psi = list(psi_head) + [Fraction(0)] * free
        phi = [sum((v[r][c] * psi[c] for c in range(cols)), Fraction(0)) for r in range(cols)]
        points.add(_reduce_point(phi))
    ordered = tuple(sorted(points))

    if free:
        direction = tuple(tuple(v[r][c] for r in range(cols)) for c in range(rank, cols))
        return SolutionSet(SolutionKind.FAMILY, cs.variables, ordered, direction)
    return SolutionSet(SolutionKind.FINITE, cs.variables, ordered)


def exact_defects(cs: CongruenceSystem, solutions: SolutionSet) -> Dict[AnglePoint, List[Fraction]]:
    return {point: cs.defects(point) for point in solutions.points}
