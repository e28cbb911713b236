"""Exact inertia of symmetric integer matrices, Goeritz signatures and the Euler-characteristic check."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple, Union

from .errors import FloerInputError

logger = logging.getLogger(__name__)


class AsymmetricMatrixError(FloerInputError):
    """Raised when a matrix that must be symmetric is not."""


class MatrixFormatError(FloerInputError):
    """Raised when matrix text is ragged, empty or holds non-integers."""


class OddSignatureError(FloerInputError):
    """Raised when a knot signature is odd (knot signatures are even)."""


@dataclass(frozen=True)
class SymmetricIntMatrix:
    order: int
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.order or any(len(row) != self.order for row in self.entries):
            raise MatrixFormatError(f"expected a square matrix of order {self.order}")
        for r in range(self.order):
            for c in range(r + 1, self.order):
                if self.entries[r][c] != self.entries[c][r]:
                    raise AsymmetricMatrixError(
                        f"entry ({r + 1},{c + 1}) = {self.entries[r][c]} but "
                        f"({c + 1},{r + 1}) = {self.entries[c][r]}"
                    )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]]) -> "SymmetricIntMatrix":
        if not rows:
            raise MatrixFormatError("matrix has no rows")
        width = len(rows)
        parsed = []
        for position, row in enumerate(rows, start=1):
            if len(row) != width:
                raise MatrixFormatError(f"row {position} has {len(row)} entries, expected {width}")
            parsed.append(tuple(_as_int(value) for value in row))
        return cls(width, tuple(parsed))

    def to_lists(self) -> List[List[int]]:
        return [list(row) for row in self.entries]


def _as_int(value: Any) -> int:
    if isinstance(value, bool):
        raise MatrixFormatError(f"not an integer entry: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError:
            pass
    raise MatrixFormatError(f"not an integer entry: {value!r}")


@dataclass(frozen=True)
class SignatureResult:
    positives: int
    negatives: int
    zeros: int

    @property
    def order(self) -> int:
        return self.positives + self.negatives + self.zeros

    @property
    def signature(self) -> int:
        return self.positives - self.negatives

    def to_dict(self) -> dict:
        return {
            "positives": self.positives,
            "negatives": self.negatives,
            "zeros": self.zeros,
            "signature": self.signature,
        }


@dataclass(frozen=True)
class ConsistencyReport:
    generator_count: int
    half_signature: int
    parity_ok: bool
    bound_ok: bool

    @property
    def consistent(self) -> bool:
        return self.parity_ok and self.bound_ok

    def to_dict(self) -> dict:
        return {
            "generator_count": self.generator_count,
            "half_signature": self.half_signature,
            "parity_ok": self.parity_ok,
            "bound_ok": self.bound_ok,
            "consistent": self.consistent,
        }


MatrixLike = Union[SymmetricIntMatrix, Sequence[Sequence[int]]]


def _coerce(matrix: MatrixLike) -> SymmetricIntMatrix:
    if isinstance(matrix, SymmetricIntMatrix):
        return matrix
    return SymmetricIntMatrix.from_rows(matrix)


def matrix_signature(M: MatrixLike) -> SignatureResult:
    """Inertia by symmetric congruence elimination over the rationals.

    A nonzero diagonal entry is a 1×1 pivot; otherwise a nonzero off-diagonal
    a_ij with a_ii = a_jj = 0 spans a hyperbolic plane (one positive, one
    negative) and is eliminated as a 2×2 block.
    """

    matrix = _coerce(M)
    work = [[Fraction(x) for x in row] for row in matrix.entries]
    positives = negatives = zeros = 0
    while work:
        size = len(work)
        pivot = next((i for i in range(size) if work[i][i] != 0), None)
        if pivot is not None:
            a = work[pivot][pivot]
            if a > 0:
                positives += 1
            else:
                negatives += 1
            rest = [k for k in range(size) if k != pivot]
            work = [
                [work[k][l] - work[k][pivot] * work[pivot][l] / a for l in rest] for k in rest
            ]
            continue
        pair = next(
            ((i, j) for i in range(size) for j in range(i + 1, size) if work[i][j] != 0), None
        )
        if pair is None:
            zeros += size
            break
        i, j = pair
        b = work[i][j]
        positives += 1
        negatives += 1
        rest = [k for k in range(size) if k not in (i, j)]
        work = [
            [work[k][l] - (work[k][i] * work[j][l] + work[k][j] * work[i][l]) / b for l in rest]
            for k in rest
        ]
    return SignatureResult(positives, negatives, zeros)


def knot_signature_goeritz(G: MatrixLike, mu: int) -> int:
    """signature(G) − μ."""
    return matrix_signature(G).signature - int(mu)


def determinant(M: MatrixLike) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""

    matrix = _coerce(M) if not isinstance(M, SymmetricIntMatrix) else M
    a = [list(row) for row in matrix.entries]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    previous = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // previous
        previous = a[k][k]
    return sign * a[n - 1][n - 1]


def reduced_goeritz(G: MatrixLike, drop: Optional[int] = None) -> SymmetricIntMatrix:
    """Delete one row and the matching column (1-based; the last by default)."""

    matrix = _coerce(G)
    index = matrix.order if drop is None else drop
    if not 1 <= index <= matrix.order:
        raise MatrixFormatError(f"cannot drop row {index} from an order-{matrix.order} matrix")
    keep = [r for r in range(matrix.order) if r != index - 1]
    return SymmetricIntMatrix(
        len(keep), tuple(tuple(matrix.entries[r][c] for c in keep) for r in keep)
    )


def knot_determinant(G: MatrixLike) -> int:
    return abs(determinant(reduced_goeritz(G)))


@dataclass(frozen=True)
class GoeritzComparison:
    unreduced: SignatureResult
    reduced: SignatureResult
    mu: int
    determinant: int

    @property
    def unreduced_signature(self) -> int:
        return self.unreduced.signature - self.mu

    @property
    def reduced_signature(self) -> int:
        return self.reduced.signature - self.mu

    @property
    def agree(self) -> bool:
        return self.unreduced_signature == self.reduced_signature

    def to_dict(self) -> dict:
        return {
            "unreduced": self.unreduced.to_dict(),
            "reduced": self.reduced.to_dict(),
            "mu": self.mu,
            "knot_signature_unreduced": self.unreduced_signature,
            "knot_signature_reduced": self.reduced_signature,
            "determinant": self.determinant,
            "agree": self.agree,
        }


def goeritz_paths_agree(G: MatrixLike, mu: int) -> GoeritzComparison:
    """Signature of the unreduced and the reduced Goeritz matrix side by side."""

    matrix = _coerce(G)
    reduced = reduced_goeritz(matrix)
    comparison = GoeritzComparison(
        matrix_signature(matrix), matrix_signature(reduced), int(mu), abs(determinant(reduced))
    )
    if not comparison.agree:
        logger.warning(
            "Unreduced and reduced Goeritz signatures differ: %d vs %d",
            comparison.unreduced_signature,
            comparison.reduced_signature,
        )
    return comparison


def euler_consistency_check(report: Any, signature: int) -> ConsistencyReport:
    """Necessary conditions linking an unsigned generator count to σ/2.

    ``report`` is a fixed-point report (its ``count`` is used) or a plain count.
    Without Maslov gradings only parity and the lower bound can be checked.
    """

    if signature % 2:
        raise OddSignatureError(f"knot signatures are even, got {signature}")
    count = int(report) if isinstance(report, int) else int(report.count)
    half = signature // 2
    return ConsistencyReport(
        generator_count=count,
        half_signature=half,
        parity_ok=(count - half) % 2 == 0,
        bound_ok=count >= abs(half),
    )


# ---------- Input ----------

def parse_matrix_text(text: str) -> Tuple[SymmetricIntMatrix, Optional[int]]:
    """Parse a JSON array-of-arrays, a JSON object with ``matrix`` (and optional ``mu``),
    or whitespace/comma separated rows. Returns the matrix and any bundled μ."""

    stripped = (text or "").strip()
    if not stripped:
        raise MatrixFormatError("empty matrix input")
    if stripped[0] in "[{":
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise MatrixFormatError(f"matrix JSON is invalid: {exc}") from exc
        mu = None
        if isinstance(data, dict):
            if "matrix" not in data:
                raise MatrixFormatError("matrix JSON object needs a 'matrix' field")
            mu = data.get("mu")
            data = data["matrix"]
        if not isinstance(data, list) or not all(isinstance(row, list) for row in data):
            raise MatrixFormatError("matrix JSON must be an array of arrays")
        return SymmetricIntMatrix.from_rows(data), None if mu is None else _as_int(mu)
    rows = [line.replace(",", " ").split() for line in stripped.splitlines() if line.strip()]
    return SymmetricIntMatrix.from_rows(rows), None


def load_matrix(path: Union[str, Path]) -> Tuple[SymmetricIntMatrix, Optional[int]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MatrixFormatError(f"cannot read matrix file {path}: {exc}") from exc
    return parse_matrix_text(text)
