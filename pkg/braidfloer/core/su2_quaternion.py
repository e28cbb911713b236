"""SU(2) as unit quaternions: products, word evaluation, gauge fixing and conjugation invariants.

Dictionary with 2×2 complex matrices: i ↔ diag(i, -i), j ↔ [[0, 1], [-1, 0]],
k = ij. The slice point q(θ) = cos θ·i + sin θ·j is the matrix
[[i cos θ, sin θ], [-sin θ, -i cos θ]].

Scalar values are frozen dataclasses; the ``*_batch`` kernels work on numpy
arrays whose last axis holds (w, x, y, z) and back the numeric solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence, Tuple

import numpy as np

from .braid_engine import FreeWord, StrandMismatchError
from .errors import FloerInputError

NORM_DRIFT_LIMIT = 1e-9
UNIT_TOLERANCE = 1e-12
RENORMALIZE_EVERY = 16


class QuaternionNormError(FloerInputError):
    """Raised when a group element drifted off the unit sphere beyond tolerance."""


class DegenerateGaugeError(FloerInputError):
    """Raised when the pinned element cannot be rotated to i (NaN or zero vector)."""


@dataclass(frozen=True)
class Quaternion:
    w: float
    x: float
    y: float
    z: float

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        a, b = self, other
        return Quaternion(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return math.sqrt(self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z)

    def normalized(self) -> "Quaternion":
        n = self.norm()
        if n == 0.0 or not math.isfinite(n):
            raise QuaternionNormError("cannot normalize a zero or non-finite quaternion")
        return Quaternion(self.w / n, self.x / n, self.y / n, self.z / n)

    def trace(self) -> float:
        """Trace of the corresponding 2×2 matrix."""
        return 2.0 * self.w

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.w, self.x, self.y, self.z)

    def distance(self, other: "Quaternion") -> float:
        return math.sqrt(
            (self.w - other.w) ** 2 + (self.x - other.x) ** 2
            + (self.y - other.y) ** 2 + (self.z - other.z) ** 2
        )


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
QI = Quaternion(0.0, 1.0, 0.0, 0.0)
QJ = Quaternion(0.0, 0.0, 1.0, 0.0)
QK = Quaternion(0.0, 0.0, 0.0, 1.0)


def _check_unit(q: Quaternion) -> None:
    n = q.norm()
    if not math.isfinite(n) or abs(n - 1.0) > NORM_DRIFT_LIMIT:
        raise QuaternionNormError(f"quaternion norm {n!r} drifted beyond {NORM_DRIFT_LIMIT}")


def quat_mul(a: Quaternion, b: Quaternion) -> Quaternion:
    _check_unit(a)
    _check_unit(b)
    return a * b


def quat_inv(a: Quaternion) -> Quaternion:
    _check_unit(a)
    return a.conjugate()


def quat_conj(g: Quaternion, a: Quaternion) -> Quaternion:
    """g a g^-1."""
    _check_unit(g)
    _check_unit(a)
    return g * a * g.conjugate()


def slice_point(theta: float) -> Quaternion:
    """q(θ) = cos θ·i + sin θ·j."""
    return Quaternion(0.0, math.cos(theta), math.sin(theta), 0.0)


def rotation_k(phi: float) -> Quaternion:
    """e^{φk}; conjugation by it sends q(a) to q(a + 2φ)."""
    return Quaternion(math.cos(phi), 0.0, 0.0, math.sin(phi))


@dataclass(frozen=True)
class TracelessSU2:
    x: float
    y: float
    z: float

    @classmethod
    def from_vector(cls, x: float, y: float, z: float) -> "TracelessSU2":
        n = math.sqrt(x * x + y * y + z * z)
        if not math.isfinite(n) or abs(n - 1.0) > NORM_DRIFT_LIMIT:
            raise QuaternionNormError(f"traceless element has norm {n!r}")
        return cls(x / n, y / n, z / n)

    @classmethod
    def from_quaternion(cls, q: Quaternion) -> "TracelessSU2":
        if abs(q.w) > NORM_DRIFT_LIMIT:
            raise QuaternionNormError(f"element has trace {q.trace()!r}, expected 0")
        return cls.from_vector(q.x, q.y, q.z)

    @classmethod
    def at_angle(cls, theta: float) -> "TracelessSU2":
        return cls(math.cos(theta), math.sin(theta), 0.0)

    def quaternion(self) -> Quaternion:
        return Quaternion(0.0, self.x, self.y, self.z)

    def vector(self) -> Tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class RepTuple:
    strands: int
    elements: Tuple[TracelessSU2, ...]

    def __post_init__(self) -> None:
        if len(self.elements) != self.strands:
            raise StrandMismatchError(
                f"expected {self.strands} elements, got {len(self.elements)}"
            )

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[float]]) -> "RepTuple":
        elements = tuple(TracelessSU2.from_vector(*map(float, v)) for v in vectors)
        return cls(len(elements), elements)

    @classmethod
    def from_angles(cls, angles: Sequence[float]) -> "RepTuple":
        """Slice tuple X_j = q(θ_j)."""
        return cls(len(angles), tuple(TracelessSU2.at_angle(theta) for theta in angles))

    def element(self, index: int) -> TracelessSU2:
        return self.elements[index - 1]

    def as_array(self) -> np.ndarray:
        return np.array([e.vector() for e in self.elements], dtype=float)

    def conjugate_by(self, g: Quaternion) -> "RepTuple":
        moved = []
        for e in self.elements:
            q = g * e.quaternion() * g.conjugate()
            moved.append(TracelessSU2.from_vector(q.x, q.y, q.z))
        return RepTuple(self.strands, tuple(moved))

    def to_json(self) -> list:
        return [list(e.vector()) for e in self.elements]


@dataclass(frozen=True)
class Fingerprint:
    values: Tuple[float, ...]

    def distance(self, other: "Fingerprint") -> float:
        if len(self.values) != len(other.values):
            return math.inf
        return max((abs(a - b) for a, b in zip(self.values, other.values)), default=0.0)


# ---------- Word evaluation ----------

def evaluate_word(w: FreeWord, t: RepTuple) -> Quaternion:
    """Evaluate a free word on a tuple; renormalizes every 16 multiplications."""

    if w.strands != t.strands:
        raise StrandMismatchError(
            f"word in F_{w.strands} evaluated on a {t.strands}-tuple"
        )
    acc = ONE
    for step, (index, exponent) in enumerate(w.letters, start=1):
        q = t.elements[index - 1].quaternion()
        acc = acc * (q if exponent > 0 else -q)
        if step % RENORMALIZE_EVERY == 0:
            acc = acc.normalized()
    return acc


def is_irreducible(t: RepTuple, eps: float = 1e-9) -> bool:
    """True unless every pair of pure parts is parallel (image inside one U(1))."""

    vectors = t.as_array()
    for a, b in combinations(range(len(vectors)), 2):
        if np.linalg.norm(np.cross(vectors[a], vectors[b])) > eps:
            return True
    return False


def fingerprint(t: RepTuple) -> Fingerprint:
    """Traces of all single, pair and triple products; invariant under simultaneous conjugation."""

    quats = [e.quaternion() for e in t.elements]
    values = [q.trace() for q in quats]
    for a, b in combinations(range(len(quats)), 2):
        values.append((quats[a] * quats[b]).trace())
    for a, b, c in combinations(range(len(quats)), 3):
        values.append((quats[a] * quats[b] * quats[c]).trace())
    return Fingerprint(tuple(values))


def default_neighbor(pin: int, strands: int) -> int:
    """Lowest generator index other than the pinned one."""
    return 1 if pin != 1 else 2


def gauge_fix(
    t: RepTuple,
    pin: int,
    neighbor: Optional[int] = None,
    *,
    fallback: bool = False,
    eps: float = 1e-12,
) -> Tuple[RepTuple, Quaternion]:
    """Conjugate ``t`` so element ``pin`` is i and the neighbor sits on the i–j circle with y ≥ 0.

    Returns the conjugated tuple and the conjugating quaternion g. When the
    neighbor is parallel to the pinned element the circle step is skipped,
    unless ``fallback`` asks for the next non-parallel element instead.
    """

    if not 1 <= pin <= t.strands:
        raise StrandMismatchError(f"pin {pin} out of range for a {t.strands}-tuple")
    neighbor = neighbor if neighbor is not None else default_neighbor(pin, t.strands)
    moved, g = gauge_fix_batch(
        t.as_array()[None, :, :], pin - 1, neighbor - 1, fallback=fallback, eps=eps
    )
    elements = tuple(TracelessSU2(*map(float, v)) for v in moved[0])
    return RepTuple(t.strands, elements), Quaternion(*map(float, g[0]))


# ---------- Batched kernels ----------

def qmul_batch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        (
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ),
        axis=-1,
    )


def qconj_batch(a: np.ndarray) -> np.ndarray:
    return a * np.array([1.0, -1.0, -1.0, -1.0])


def normalize_batch(a: np.ndarray) -> np.ndarray:
    return a / np.linalg.norm(a, axis=-1, keepdims=True)


def pure_batch(v: np.ndarray) -> np.ndarray:
    """Embed 3-vectors as pure quaternions."""
    return np.concatenate((np.zeros(v.shape[:-1] + (1,)), v), axis=-1)


def rotate_batch(g: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Vector part of g (0, v) g^-1; ``g`` broadcasts against ``v``."""
    return qmul_batch(qmul_batch(g, pure_batch(v)), qconj_batch(g))[..., 1:]


def shortest_arc_batch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Unit quaternions rotating unit vectors a onto b (π about a perpendicular axis when antipodal)."""

    dot = np.sum(a * b, axis=-1)
    q = np.concatenate(((1.0 + dot)[..., None], np.cross(a, b)), axis=-1)
    antipodal = (1.0 + dot) < 1e-12
    if np.any(antipodal):
        helper = np.where(
            (np.abs(a[..., 1]) < 0.9)[..., None],
            np.array([0.0, 1.0, 0.0]),
            np.array([0.0, 0.0, 1.0]),
        )
        axis = np.cross(a, helper)
        axis = axis / np.linalg.norm(axis, axis=-1, keepdims=True)
        flipped = np.concatenate((np.zeros(axis.shape[:-1] + (1,)), axis), axis=-1)
        q = np.where(antipodal[..., None], flipped, q)
    return normalize_batch(q)


def gauge_fix_batch(
    vectors: np.ndarray,
    pin: int,
    neighbor: int,
    *,
    fallback: bool = False,
    eps: float = 1e-12,
) -> Tuple[np.ndarray, np.ndarray]:
    """Batched gauge fix on arrays of shape (B, n, 3); indices are 0-based.

    Returns the conjugated vectors and the conjugating quaternions (B, 4).
    """

    vectors = np.asarray(vectors, dtype=float)
    pinned = vectors[:, pin, :]
    norms = np.linalg.norm(pinned, axis=-1)
    if not np.all(np.isfinite(vectors)) or np.any(norms < 0.5):
        raise DegenerateGaugeError("pinned element is ill-defined")
    target = np.broadcast_to(np.array([1.0, 0.0, 0.0]), pinned.shape)
    first = shortest_arc_batch(pinned / norms[:, None], target)
    moved = rotate_batch(first[:, None, :], vectors)

    batch, strands = vectors.shape[0], vectors.shape[1]
    order = [neighbor]
    if fallback:
        order += [j for j in range(strands) if j not in (pin, neighbor)]
    y = np.zeros(batch)
    z = np.zeros(batch)
    chosen = np.zeros(batch, dtype=bool)
    for j in order:
        yj, zj = moved[:, j, 1], moved[:, j, 2]
        usable = ~chosen & (np.hypot(yj, zj) > eps)
        y = np.where(usable, yj, y)
        z = np.where(usable, zj, z)
        chosen |= usable
    # rotation about i by beta takes (y, z) to (hypot(y, z), 0)
    beta = np.where(chosen, -np.arctan2(z, y), 0.0)
    second = np.stack(
        (np.cos(beta / 2.0), np.sin(beta / 2.0), np.zeros(batch), np.zeros(batch)), axis=-1
    )
    g = normalize_batch(qmul_batch(second, first))
    moved = rotate_batch(second[:, None, :], moved)
    moved = moved / np.linalg.norm(moved, axis=-1, keepdims=True)
    moved[:, pin, :] = np.array([1.0, 0.0, 0.0])
    if not fallback:
        snap = chosen
        rho = np.hypot(moved[:, neighbor, 1], moved[:, neighbor, 2])
        moved[:, neighbor, 1] = np.where(snap, rho, moved[:, neighbor, 1])
        moved[:, neighbor, 2] = np.where(snap, 0.0, moved[:, neighbor, 2])
    return moved, g

