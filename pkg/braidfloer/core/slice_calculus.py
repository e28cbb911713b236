"""Closed-form evaluation of odd words on the binary dihedral slice.

With X_j = q(θ_j) = cos θ_j·i + sin θ_j·j the two identities

    q(a)·q(b) = -e^{(a-b)k}        e^{βk}·q(a) = q(a + β)

collapse any odd word to a single slice point q(Σ c_j θ_j + mπ). Letters
contribute their angle with alternating signs, an inverse letter is
q(θ + π), and every contracted pair contributes a factor -1, i.e. another π.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from .braid_engine import FreeWord, StrandMismatchError
from .errors import FloerInputError
from .su2_quaternion import Quaternion, slice_point


class EvenWordError(FloerInputError):
    """Raised when an even-length word is evaluated on the slice (its value is a rotation)."""


@dataclass(frozen=True)
class AffineAngleForm:
    """Slice value q(Σ coeffs_j θ_j + halfturns·π) of an odd word."""

    coeffs: Tuple[int, ...]
    halfturns: int
    length: int

    def __post_init__(self) -> None:
        if self.length % 2 == 0:
            raise EvenWordError(f"slice forms need odd words, got length {self.length}")
        object.__setattr__(self, "halfturns", self.halfturns % 2)

    @property
    def strands(self) -> int:
        return len(self.coeffs)

    def angle(self, thetas: Sequence[float]) -> float:
        """Angle in radians at the given θ values."""
        return sum(c * t for c, t in zip(self.coeffs, thetas)) + self.halfturns * math.pi

    def exact_angle(self, phis: Sequence[Fraction]) -> Fraction:
        """Angle in units of π, reduced into [0, 2)."""
        total = sum((c * Fraction(p) for c, p in zip(self.coeffs, phis)), Fraction(0))
        return (total + self.halfturns) % 2

    def describe(self, names: Sequence[str]) -> str:
        return format_linear(self.coeffs, names, self.halfturns)


def format_linear(coeffs: Sequence[int], names: Sequence[str], halfturns: int = 0) -> str:
    """Render Σ c·name (+ π) as text, e.g. ``4·θ1 + π``."""

    text = ""
    for c, name in zip(coeffs, names):
        if c == 0:
            continue
        term = name if abs(c) == 1 else f"{abs(c)}·{name}"
        if not text:
            text = f"-{term}" if c < 0 else term
        else:
            text += f" - {term}" if c < 0 else f" + {term}"
    if halfturns % 2:
        text = f"{text} + π" if text else "π"
    return text or "0"


def slice_evaluate(w: FreeWord, strands: int) -> AffineAngleForm:
    if w.strands != strands:
        raise StrandMismatchError(f"word in F_{w.strands} read with {strands} strands")
    length = len(w.letters)
    if length % 2 == 0:
        raise EvenWordError(
            f"word of even length {length} evaluates to a rotation, not a slice point"
        )
    coeffs = [0] * strands
    inverses = 0
    for position, (index, exponent) in enumerate(w.letters):
        coeffs[index - 1] += 1 if position % 2 == 0 else -1
        if exponent < 0:
            inverses += 1
    return AffineAngleForm(tuple(coeffs), inverses + (length - 1) // 2, length)


def slice_embed(form: AffineAngleForm, thetas: Sequence[float]) -> Quaternion:
    """The quaternion q(angle) the form predicts at ``thetas`` (radians)."""

    if len(thetas) != form.strands:
        raise StrandMismatchError(f"expected {form.strands} angles, got {len(thetas)}")
    return slice_point(form.angle(thetas))
