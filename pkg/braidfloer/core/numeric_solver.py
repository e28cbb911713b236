"""Numeric fixed-point search on the full traceless variety.

Seeds are laid on a gauge-fixed grid (pinned element = i, angle-of-record
element on the upper half of the i–j circle, remaining elements free on S²)
and refined by damped Gauss–Newton in local tangent charts. Residuals are
squared chordal distances |w_j(X) − g X_{r_j} g^{-1}|² summed over equations;
the Jacobian comes from prefix/suffix products of each word.

A second pass restricts every element to the i–j circle. Odd words map that
circle to itself, so the restricted iteration finds slice solutions directly,
and converged full-pass points lying within slice_tol of it are projected and
polished there as well. The full pass runs on the coarser full_grid_per_dim
grid; its seeds land in the same basins the slice pass already covers densely.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..services.seed_pool import SeedPool
from .config import SolverConfig
from .fixtures import WordSystem
from .su2_quaternion import (
    Fingerprint,
    Quaternion,
    RepTuple,
    TracelessSU2,
    default_neighbor,
    gauge_fix_batch,
    is_irreducible,
    normalize_batch,
    pure_batch,
    qconj_batch,
    qmul_batch,
    rotate_batch,
)

logger = logging.getLogger(__name__)

MAX_HALVINGS = 20
STALL_LIMIT = 3
PINV_RCOND = 1e-10
IRREDUCIBLE_EPS = 1e-6

_K = np.array([0.0, 0.0, 1.0])
_AXES = np.eye(3)


class Chart(str, Enum):
    PINNED = "pinned"
    ANGLE = "angle"
    SPHERE = "sphere"


class TwistChart(str, Enum):
    NONE = "none"
    FREE = "free"
    AXIAL = "axial"  # left multiplication by e^{εk}; keeps g in span(1, k) or span(i, j)


@dataclass(frozen=True)
class CompiledSystem:
    """Word system with 0-based generator indices and ±1.0 letter signs."""

    strands: int
    words: Tuple[Tuple[Tuple[int, float], ...], ...]
    targets: Tuple[int, ...]

    @classmethod
    def from_word_system(cls, system: WordSystem) -> "CompiledSystem":
        words = tuple(
            tuple((index - 1, 1.0 if exponent > 0 else -1.0) for index, exponent in eq.lhs.letters)
            for eq in system.equations
        )
        return cls(system.strands, words, tuple(eq.rhs - 1 for eq in system.equations))


@dataclass(frozen=True)
class NumericSolution:
    point: RepTuple
    residual: float
    fingerprint: Fingerprint
    irreducible: bool
    on_slice: bool
    angles: Optional[Tuple[float, ...]]  # units of π, on-slice only
    twist: Optional[Quaternion]
    twist_kind: Optional[str]
    members: int


@dataclass(frozen=True)
class NumericSearch:
    solutions: Tuple[NumericSolution, ...]
    seeds: int
    grid: int
    slice_grid: int
    accepted: int

    @property
    def on_slice(self) -> Tuple[NumericSolution, ...]:
        return tuple(s for s in self.solutions if s.on_slice)

    @property
    def off_slice(self) -> Tuple[NumericSolution, ...]:
        return tuple(s for s in self.solutions if not s.on_slice)


# ---------- Residual and Jacobian ----------

def _identity(batch: int) -> np.ndarray:
    one = np.zeros((batch, 4))
    one[:, 0] = 1.0
    return one


def _word_products(X: np.ndarray, word: Sequence[Tuple[int, float]]):
    factors = [sign * pure_batch(X[:, index, :]) for index, sign in word]
    prefix = [_identity(X.shape[0])]
    for f in factors:
        prefix.append(qmul_batch(prefix[-1], f))
    suffix = [_identity(X.shape[0])]
    for f in reversed(factors):
        suffix.append(qmul_batch(f, suffix[-1]))
    suffix.reverse()
    return prefix, suffix


def _targets(X: np.ndarray, g: Optional[np.ndarray], index: int) -> np.ndarray:
    target = X[:, index, :]
    return target if g is None else rotate_batch(g, target)


def residual_vector(system: CompiledSystem, X: np.ndarray, g: Optional[np.ndarray]) -> np.ndarray:
    blocks = []
    for word, target in zip(system.words, system.targets):
        prefix, _ = _word_products(X, word)
        blocks.append(prefix[-1] - pure_batch(_targets(X, g, target)))
    return np.concatenate(blocks, axis=1)


def residual_norm(system: CompiledSystem, X: np.ndarray, g: Optional[np.ndarray]) -> np.ndarray:
    r = residual_vector(system, X, g)
    return np.sum(r * r, axis=1)


Param = Tuple[str, int, np.ndarray]


def _params(X: np.ndarray, charts: Sequence[Chart], twist: TwistChart) -> List[Param]:
    params: List[Param] = []
    for index, chart in enumerate(charts):
        x = X[:, index, :]
        if chart is Chart.ANGLE:
            params.append(("element", index, np.cross(_K, x)))
        elif chart is Chart.SPHERE:
            helper = np.where(
                (np.abs(x[:, 2]) < 0.9)[:, None], _K, np.array([1.0, 0.0, 0.0])
            )
            t1 = np.cross(x, helper)
            t1 /= np.linalg.norm(t1, axis=1, keepdims=True)
            params.append(("element", index, t1))
            params.append(("element", index, np.cross(x, t1)))
    batch = X.shape[0]
    if twist is TwistChart.FREE:
        for axis in range(3):
            params.append(("twist", axis, np.broadcast_to(_AXES[axis], (batch, 3))))
    elif twist is TwistChart.AXIAL:
        params.append(("twist", 2, np.broadcast_to(_K, (batch, 3))))
    return params


def _jacobian(
    system: CompiledSystem, X: np.ndarray, g: Optional[np.ndarray], params: Sequence[Param]
) -> Tuple[np.ndarray, np.ndarray]:
    products = [_word_products(X, word) for word in system.words]
    targets = [_targets(X, g, t) for t in system.targets]
    residual = np.concatenate(
        [prefix[-1] - pure_batch(target) for (prefix, _), target in zip(products, targets)], axis=1
    )
    columns = []
    for kind, ref, vector in params:
        blocks = []
        for word, target_index, (prefix, suffix), target in zip(
            system.words, system.targets, products, targets
        ):
            d = np.zeros((X.shape[0], 4))
            if kind == "element":
                tangent = pure_batch(vector)
                for s, (index, sign) in enumerate(word):
                    if index == ref:
                        d += sign * qmul_batch(qmul_batch(prefix[s], tangent), suffix[s + 1])
                if target_index == ref:
                    moved = vector if g is None else rotate_batch(g, vector)
                    d -= pure_batch(moved)
            else:
                # d/dε of (1 + εa) T (1 − εa) is 2 a × T
                d -= pure_batch(2.0 * np.cross(vector, target))
            blocks.append(d)
        columns.append(np.concatenate(blocks, axis=1))
    return np.stack(columns, axis=-1), residual


def _apply_step(
    X: np.ndarray, g: Optional[np.ndarray], params: Sequence[Param], step: np.ndarray
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    moved = X.copy()
    delta = np.zeros((X.shape[0], 3))
    for column, (kind, ref, vector) in enumerate(params):
        if kind == "element":
            moved[:, ref, :] += step[:, column, None] * vector
        else:
            delta += step[:, column, None] * vector
    moved /= np.linalg.norm(moved, axis=-1, keepdims=True)
    if g is None:
        return moved, None
    left = np.concatenate((np.ones((X.shape[0], 1)), delta), axis=1)
    return moved, normalize_batch(qmul_batch(left, g))


def refine(
    system: CompiledSystem,
    X: np.ndarray,
    g: Optional[np.ndarray],
    charts: Sequence[Chart],
    twist: TwistChart,
    config: SolverConfig,
) -> Tuple[np.ndarray, Optional[np.ndarray], np.ndarray]:
    """Damped Gauss–Newton on a batch of seeds; returns final states and squared residuals.

    A step is halved up to MAX_HALVINGS times until the residual decreases; a
    seed that cannot improve, or whose step falls below newton_tol, stops. So
    does a seed still above prune_residual after prune_after iterations, and
    one whose residual falls by less than stall_ratio STALL_LIMIT times running.
    """

    X = np.array(X, dtype=float)
    g = None if g is None else np.array(g, dtype=float)
    R = residual_norm(system, X, g)
    active = np.ones(X.shape[0], dtype=bool)
    floor = config.newton_tol**2
    stalls = np.zeros(X.shape[0], dtype=int)

    for iteration in range(config.max_newton_iters):
        active &= R > floor
        if iteration == config.prune_after:
            active &= R < config.prune_residual
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        Xa = X[idx]
        ga = None if g is None else g[idx]
        params = _params(Xa, charts, twist)
        J, r = _jacobian(system, Xa, ga, params)
        step = -(np.linalg.pinv(J, rcond=PINV_RCOND) @ r[..., None])[..., 0]

        current = R[idx]
        improved = np.zeros(idx.size, dtype=bool)
        for halving in range(MAX_HALVINGS + 1):
            pending = np.nonzero(~improved)[0]
            if pending.size == 0:
                break
            subset = [(kind, ref, vector[pending]) for kind, ref, vector in params]
            trial_X, trial_g = _apply_step(
                Xa[pending],
                None if ga is None else ga[pending],
                subset,
                step[pending] * (0.5**halving),
            )
            trial_R = residual_norm(system, trial_X, trial_g)
            better = trial_R < current[pending]
            hits = pending[better]
            Xa[hits] = trial_X[better]
            if ga is not None:
                ga[hits] = trial_g[better]
            current[hits] = trial_R[better]
            improved[hits] = True

        slow = (current > config.accept_residual) & (current > (1.0 - config.stall_ratio) * R[idx])
        stalls[idx] = np.where(slow, stalls[idx] + 1, 0)
        X[idx] = Xa
        if g is not None:
            g[idx] = ga
        R[idx] = current
        tiny = np.linalg.norm(step, axis=1) < config.newton_tol
        active[idx[~improved | tiny]] = False
        active[stalls >= STALL_LIMIT] = False
    return X, g, R


# ---------- Twist initialization ----------

def davenport_twist(system: CompiledSystem, X: np.ndarray) -> np.ndarray:
    """Best rotation g carrying each X_{r_j} onto the vector part of w_j(X).

    The optimal quaternion is the top eigenvector of Davenport's 4×4 profile
    matrix; both orientations of its vector part are tried and the better kept.
    """

    batch = X.shape[0]
    sources = []
    images = []
    for word, target in zip(system.words, system.targets):
        prefix, _ = _word_products(X, word)
        sources.append(X[:, target, :])
        images.append(prefix[-1][:, 1:])
    a = np.stack(sources, axis=1)
    b = np.stack(images, axis=1)
    profile = np.einsum("bji,bjk->bik", b, a)
    sigma = np.trace(profile, axis1=1, axis2=2)
    s = profile + np.transpose(profile, (0, 2, 1))
    z = np.sum(np.cross(a, b), axis=1)
    k = np.zeros((batch, 4, 4))
    k[:, :3, :3] = s - sigma[:, None, None] * np.eye(3)
    k[:, :3, 3] = z
    k[:, 3, :3] = z
    k[:, 3, 3] = sigma
    _, vectors = np.linalg.eigh(k)
    top = vectors[:, :, -1]
    best = None
    best_loss = None
    for sign in (1.0, -1.0):
        candidate = normalize_batch(np.concatenate((top[:, 3:], sign * top[:, :3]), axis=1))
        moved = rotate_batch(candidate[:, None, :], a)
        loss = np.sum((moved - b) ** 2, axis=(1, 2))
        if best is None:
            best, best_loss = candidate, loss
        else:
            pick = loss < best_loss
            best = np.where(pick[:, None], candidate, best)
            best_loss = np.where(pick, loss, best_loss)
    return best


def project_twist(g: np.ndarray, branch: str) -> np.ndarray:
    """Nearest rotation-branch (span(1, k)) or reflection-branch (span(i, j)) quaternion."""

    mask = np.array([1.0, 0.0, 0.0, 1.0]) if branch == "rotation" else np.array([0.0, 1.0, 1.0, 0.0])
    fallback = np.array([1.0, 0.0, 0.0, 0.0]) if branch == "rotation" else np.array([0.0, 0.0, 1.0, 0.0])
    projected = g * mask
    norms = np.linalg.norm(projected, axis=1, keepdims=True)
    safe = np.where(norms > 1e-8, projected / np.maximum(norms, 1e-300), fallback)
    return safe


def twist_branch(g: np.ndarray) -> np.ndarray:
    """'rotation' where g is closer to span(1, k) than to span(i, j)."""
    rot = g[:, 0] ** 2 + g[:, 3] ** 2
    return np.where(rot >= 0.5, "rotation", "reflection")


# ---------- Seeds ----------

def grid_size(per_dim: int, dims: int, max_seeds: int) -> int:
    """Largest size ≤ per_dim with size**dims within the seed budget."""

    size = per_dim
    while size > 1 and size**dims > max_seeds:
        size -= 1
    if size < per_dim:
        logger.warning(
            "Seed budget %d exceeded by %d^%d; coarsening grid to %d per dimension",
            max_seeds,
            per_dim,
            dims,
            size,
        )
    return size


def sphere_grid(size: int, azimuth_offset: float = 0.0) -> np.ndarray:
    """size×size points on S²; the polar row nearest the equator sits exactly on z = 0."""

    polar = np.linspace(0.0, math.pi, size + 2)[1:-1]
    equator = int(np.argmin(np.abs(polar - math.pi / 2)))
    azimuth = np.linspace(0.0, 2.0 * math.pi, size, endpoint=False) + azimuth_offset
    P, A = np.meshgrid(polar, azimuth, indexing="ij")
    z = np.cos(P)
    z[equator, :] = 0.0
    s = np.sin(P)
    s[equator, :] = 1.0
    return np.stack((s * np.cos(A), s * np.sin(A), z), axis=-1).reshape(-1, 3)


def circle_points(angles: np.ndarray) -> np.ndarray:
    return np.stack((np.cos(angles), np.sin(angles), np.zeros_like(angles)), axis=-1)


def _product_seeds(strands: int, factors: Sequence[Tuple[int, np.ndarray]], pin: int) -> np.ndarray:
    """Cartesian product of per-element candidate lists; the pinned element is i."""

    sizes = [len(points) for _, points in factors]
    grids = np.indices(sizes).reshape(len(sizes), -1)
    count = grids.shape[1]
    X = np.zeros((count, strands, 3))
    X[:, pin, 0] = 1.0
    for (element, points), column in zip(factors, grids):
        X[:, element, :] = points[column]
    return X


def full_seeds(strands: int, pin: int, neighbor: int, config: SolverConfig) -> Tuple[np.ndarray, int]:
    others = [j for j in range(strands) if j not in (pin, neighbor)]
    dims = 1 + 2 * len(others)
    size = grid_size(min(config.grid_per_dim, config.full_grid_per_dim), dims, config.max_seeds)
    rng = np.random.default_rng(config.rng_seed)
    offset = float(rng.uniform(0.0, 2.0 * math.pi / max(size, 1)))
    record = circle_points(np.linspace(0.0, math.pi, size))
    sphere = sphere_grid(size, offset)
    factors = [(neighbor, record)] + [(element, sphere) for element in others]
    return _product_seeds(strands, factors, pin), size


def slice_seeds(strands: int, pin: int, neighbor: int, config: SolverConfig) -> Tuple[np.ndarray, int]:
    others = [j for j in range(strands) if j not in (pin, neighbor)]
    dims = 1 + len(others)
    size = grid_size(config.grid_per_dim, dims, config.max_seeds)
    record = circle_points(np.linspace(0.0, math.pi, size))
    circle = circle_points(np.linspace(0.0, 2.0 * math.pi, size, endpoint=False))
    factors = [(neighbor, record)] + [(element, circle) for element in others]
    return _product_seeds(strands, factors, pin), size


# ---------- Classification ----------

def fingerprint_batch(X: np.ndarray) -> np.ndarray:
    """Row-wise fingerprints, ordered like su2_quaternion.fingerprint."""

    n = X.shape[1]
    columns = [np.zeros(X.shape[0]) for _ in range(n)]
    for a, b in combinations(range(n), 2):
        columns.append(-2.0 * np.sum(X[:, a] * X[:, b], axis=1))
    for a, b, c in combinations(range(n), 3):
        columns.append(-2.0 * np.sum(np.cross(X[:, a], X[:, b]) * X[:, c], axis=1))
    return np.stack(columns, axis=1)


def cluster(fingerprints: np.ndarray, eps: float) -> np.ndarray:
    """Greedy class labels in input order; members lie within eps of the class opener."""

    labels = np.full(fingerprints.shape[0], -1)
    label = 0
    for i in range(fingerprints.shape[0]):
        if labels[i] >= 0:
            continue
        close = (labels < 0) & (np.max(np.abs(fingerprints - fingerprints[i]), axis=1) < eps)
        labels[close] = label
        label += 1
    return labels


def _slice_angles(row: np.ndarray) -> Tuple[float, ...]:
    angles = []
    for x, y, _ in row:
        phi = (math.atan2(y, x) / math.pi) % 2.0
        if phi > 2.0 - 1e-12:
            phi = 0.0
        angles.append(phi)
    return tuple(angles)


# ---------- Driver ----------

ChunkRunner = Callable[[Tuple[np.ndarray, Optional[np.ndarray]]], Tuple[np.ndarray, Optional[np.ndarray], np.ndarray]]


def _run_chunks(
    pool: SeedPool,
    runner: ChunkRunner,
    X: np.ndarray,
    g: Optional[np.ndarray],
    chunk_size: int,
) -> Tuple[np.ndarray, Optional[np.ndarray], np.ndarray]:
    if X.shape[0] == 0:
        return X, g, np.zeros(0)
    chunks = [
        (X[start : start + chunk_size], None if g is None else g[start : start + chunk_size])
        for start in range(0, X.shape[0], chunk_size)
    ]
    results = pool.map_chunks(runner, chunks)
    out_X = np.concatenate([r[0] for r in results])
    twists = [r[1] for r in results]
    if len({t is None for t in twists}) > 1:
        raise ValueError("Chunk runners disagree on whether a twist is returned")
    out_g = None if twists[0] is None else np.concatenate(twists)
    out_R = np.concatenate([r[2] for r in results])
    return out_X, out_g, out_R


def _conjugate_twist(h: np.ndarray, g: Optional[np.ndarray]) -> Optional[np.ndarray]:
    if g is None:
        return None
    return normalize_batch(qmul_batch(qmul_batch(h, g), qconj_batch(h)))


@dataclass
class _Batch:
    X: np.ndarray
    g: Optional[np.ndarray]
    R: np.ndarray

    @classmethod
    def empty(cls, strands: int, twisted: bool) -> "_Batch":
        return cls(np.zeros((0, strands, 3)), np.zeros((0, 4)) if twisted else None, np.zeros(0))

    def take(self, mask: np.ndarray) -> "_Batch":
        return _Batch(self.X[mask], None if self.g is None else self.g[mask], self.R[mask])

    def join(self, other: "_Batch") -> "_Batch":
        if (self.g is None) != (other.g is None):
            raise ValueError("Cannot join twisted and untwisted batches")
        g = None if self.g is None else np.concatenate((self.g, other.g))
        return _Batch(np.concatenate((self.X, other.X)), g, np.concatenate((self.R, other.R)))

    def gauge_fixed(self, pin: int, neighbor: int) -> "_Batch":
        if self.X.shape[0] == 0:
            return self
        X, h = gauge_fix_batch(self.X, pin, neighbor, fallback=True)
        return _Batch(X, _conjugate_twist(h, self.g), self.R)


def near_slice(X: np.ndarray, tol: float) -> np.ndarray:
    """Rows whose elements all sit within tol of the i–j circle."""
    if X.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    return np.max(np.abs(X[:, :, 2]), axis=1) < tol


def _snap_to_slice(batch: _Batch) -> _Batch:
    X = batch.X.copy()
    X[:, :, 2] = 0.0
    X /= np.linalg.norm(X, axis=-1, keepdims=True)
    g = batch.g
    if g is not None:
        rotation = (twist_branch(g) == "rotation")[:, None]
        g = np.where(rotation, project_twist(g, "rotation"), project_twist(g, "reflection"))
    return _Batch(X, g, batch.R)


def search(
    system: WordSystem,
    config: SolverConfig,
    *,
    pin: int = 2,
    twisted: bool = False,
    pool: Optional[SeedPool] = None,
) -> NumericSearch:
    """Seeded search for σ(x_j) = x_j (or g x_j g^-1 when twisted); deterministic in config."""

    compiled = CompiledSystem.from_word_system(system)
    n = compiled.strands
    p = pin - 1
    neighbor = default_neighbor(pin, n) - 1
    full_charts = [
        Chart.PINNED if j == p else Chart.ANGLE if j == neighbor else Chart.SPHERE for j in range(n)
    ]
    slice_charts = [Chart.PINNED if j == p else Chart.ANGLE for j in range(n)]
    full_twist = TwistChart.FREE if twisted else TwistChart.NONE
    slice_twist = TwistChart.AXIAL if twisted else TwistChart.NONE

    def run_full(chunk):
        X, _ = chunk
        g = davenport_twist(compiled, X) if twisted else None
        return refine(compiled, X, g, full_charts, full_twist, config)

    def run_slice(chunk):
        X, g = chunk
        return refine(compiled, X, g, slice_charts, slice_twist, config)

    def run(runner: ChunkRunner, X: np.ndarray, g: Optional[np.ndarray]) -> _Batch:
        return _Batch(*_run_chunks(pool, runner, X, g, config.chunk_size))

    own_pool = pool is None
    pool = pool or SeedPool(max_workers=config.workers)
    started = time.perf_counter()
    try:
        full_X, grid = full_seeds(n, p, neighbor, config)
        full = run(run_full, full_X, None)

        slice_X, slice_grid = slice_seeds(n, p, neighbor, config)
        slice_g = None
        if twisted:
            start_g = davenport_twist(compiled, slice_X)
            slice_g = np.concatenate(
                (project_twist(start_g, "rotation"), project_twist(start_g, "reflection"))
            )
            slice_X = np.concatenate((slice_X, slice_X))
        on_slice = run(run_slice, slice_X, slice_g)
        seeds = full_X.shape[0] + slice_X.shape[0]
        accepted = int(np.sum(full.R < config.accept_residual) + np.sum(on_slice.R < config.accept_residual))
        logger.info(
            "Refined %d seeds (grid %d, slice grid %d) in %.2fs",
            seeds,
            grid,
            slice_grid,
            time.perf_counter() - started,
        )

        on_slice = on_slice.take(on_slice.R < config.accept_residual)
        full = full.take(full.R < config.accept_residual).gauge_fixed(p, neighbor)
        near = near_slice(full.X, config.slice_tol)
        logger.debug(
            "%d of %d full-pass solutions lie within %g of the slice",
            int(near.sum()),
            near.size,
            config.slice_tol,
        )
        off_slice = full.take(~near)
        if near.any():
            snapped = _snap_to_slice(full.take(near))
            polished = run(run_slice, snapped.X, snapped.g)
            good = polished.R < config.accept_residual
            on_slice = on_slice.join(polished.take(good))
            # points that do not polish on the slice stay full-variety solutions
            off_slice = off_slice.join(full.take(near).take(~good))
    finally:
        if own_pool:
            pool.close()

    solutions: List[NumericSolution] = []
    for batch, flag in ((on_slice, True), (off_slice, False)):
        if batch.R.size == 0:
            continue
        batch = batch.gauge_fixed(p, neighbor)
        if flag:
            batch = _snap_to_slice(batch)
            batch = _Batch(batch.X, batch.g, residual_norm(compiled, batch.X, batch.g))
        solutions.extend(_collect(compiled, batch, flag, config))

    solutions.sort(key=lambda s: (not s.on_slice, s.angles or (), s.fingerprint.values))
    logger.info(
        "Numeric search: %d accepted, %d classes (%d on the slice)",
        accepted,
        len(solutions),
        sum(1 for s in solutions if s.on_slice),
    )
    return NumericSearch(tuple(solutions), seeds, grid, slice_grid, accepted)


def _collect(
    system: CompiledSystem,
    batch: _Batch,
    on_slice: bool,
    config: SolverConfig,
) -> List[NumericSolution]:
    X, g, R = batch.X, batch.g, batch.R
    prints = fingerprint_batch(X)
    labels = cluster(prints, config.dedupe_eps)
    out: List[NumericSolution] = []
    for label in range(int(labels.max()) + 1 if labels.size else 0):
        members = np.nonzero(labels == label)[0]
        best = members[np.argmin(R[members])]
        row = X[best]
        point = RepTuple(system.strands, tuple(TracelessSU2(*map(float, v)) for v in row))
        twist = None
        kind = None
        if g is not None:
            twist = Quaternion(*map(float, g[best]))
            if on_slice:
                kind = str(twist_branch(g[best][None, :])[0])
        out.append(
            NumericSolution(
                point=point,
                residual=float(residual_norm(system, row[None], None if g is None else g[best][None])[0]),
                fingerprint=Fingerprint(tuple(float(v) for v in prints[best])),
                irreducible=is_irreducible(point, IRREDUCIBLE_EPS),
                on_slice=on_slice,
                angles=_slice_angles(row) if on_slice else None,
                twist=twist,
                twist_kind=kind,
                members=int(members.size),
            )
        )
    return out


def tuple_residual(system: WordSystem, point: RepTuple, twist: Optional[Quaternion] = None) -> float:
    """Squared chordal residual of the fixed-point equations at one tuple."""

    compiled = CompiledSystem.from_word_system(system)
    X = point.as_array()[None]
    g = None if twist is None else np.array([twist.as_tuple()])
    return float(residual_norm(compiled, X, g)[0])
