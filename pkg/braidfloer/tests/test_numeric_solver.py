"""Numeric backend: seeds, Gauss–Newton refinement and agreement with the slice backend."""

import logging
import math
import random
import time

import numpy as np
import pytest

from braidfloer.core.braid_engine import BraidLetter, BraidWord, parse_braid_word
from braidfloer.core.config import SolverConfig
from braidfloer.core.fixtures import load_fixture
from braidfloer.core.floer_fix_solver import (
    Backend,
    compare_backends,
    numeric_strict_search,
    strict_fixed_points,
    twisted_fixed_points,
)
from braidfloer.core.numeric_solver import (
    Chart,
    CompiledSystem,
    TwistChart,
    _apply_step,
    _Batch,
    _jacobian,
    _params,
    _run_chunks,
    cluster,
    davenport_twist,
    fingerprint_batch,
    full_seeds,
    grid_size,
    near_slice,
    refine,
    residual_norm,
    residual_vector,
    search,
    sphere_grid,
)
from braidfloer.core.su2_quaternion import RepTuple, fingerprint
from braidfloer.services.seed_pool import SeedPool


def _slice_array(angles_in_pi):
    return RepTuple.from_angles([a * math.pi for a in angles_in_pi]).as_array()[None]


def test_grid_size_respects_budget(caplog) -> None:
    assert grid_size(48, 3, 48**3) == 48
    with caplog.at_level(logging.WARNING, logger="braidfloer.core.numeric_solver"):
        assert grid_size(48, 5, 48**3) == 10
    assert "coarsening" in caplog.text


def test_sphere_grid() -> None:
    points = sphere_grid(12)
    assert points.shape == (144, 3)
    assert np.allclose(np.linalg.norm(points, axis=1), 1.0)
    assert int(np.sum(points[:, 2] == 0.0)) == 12


def test_cluster_labels_in_input_order() -> None:
    prints = np.array([[0.0], [1e-8], [1.0], [1.0 + 1e-8], [0.0]])
    assert cluster(prints, 1e-6).tolist() == [0, 0, 1, 1, 0]


def test_fingerprint_batch_matches_scalar_fingerprint() -> None:
    rep = RepTuple.from_vectors([(1.0, 0.0, 0.0), (0.6, 0.8, 0.0), (0.0, 0.6, 0.8), (0.0, 0.0, 1.0)])
    batch = fingerprint_batch(rep.as_array()[None])[0]
    assert np.allclose(batch, fingerprint(rep).values, atol=1e-12)


def test_residual_vanishes_at_exact_solution() -> None:
    compiled = CompiledSystem.from_word_system(load_fixture("5_2-paper"))
    X = _slice_array([0.2, 0.0, 1.6])
    assert residual_norm(compiled, X, None)[0] < 1e-20
    assert residual_norm(compiled, _slice_array([0.3, 0.0, 1.6]), None)[0] > 1e-3


def test_davenport_on_identity_system_is_trivial() -> None:
    compiled = CompiledSystem(3, tuple(((j, 1.0),) for j in range(3)), (0, 1, 2))
    X = RepTuple.from_vectors([(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.6, 0.8)]).as_array()[None]
    g = davenport_twist(compiled, X)
    assert abs(abs(g[0, 0]) - 1.0) < 1e-9


def test_davenport_returns_unit_quaternions() -> None:
    compiled = CompiledSystem.from_word_system(load_fixture("5_2-paper"))
    X = RepTuple.from_vectors([(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.6, 0.8)]).as_array()[None]
    g = davenport_twist(compiled, X)
    assert np.isclose(np.linalg.norm(g[0]), 1.0)


@pytest.mark.parametrize("twist", [TwistChart.NONE, TwistChart.FREE, TwistChart.AXIAL])
def test_jacobian_matches_finite_differences(twist) -> None:
    compiled = CompiledSystem.from_word_system(load_fixture("5_2-paper"))
    rng = np.random.default_rng(7)
    X = rng.normal(size=(1, 3, 3))
    X /= np.linalg.norm(X, axis=-1, keepdims=True)
    X[0, 1] = (1.0, 0.0, 0.0)
    g = None
    if twist is not TwistChart.NONE:
        g = rng.normal(size=(1, 4))
        g /= np.linalg.norm(g)
    charts = [Chart.SPHERE, Chart.PINNED, Chart.SPHERE]
    params = _params(X, charts, twist)
    J, r = _jacobian(compiled, X, g, params)
    assert np.allclose(r, residual_vector(compiled, X, g))

    h = 1e-6
    for column in range(len(params)):
        step = np.zeros((1, len(params)))
        step[0, column] = h
        plus = residual_vector(compiled, *_apply_step(X, g, params, step))
        minus = residual_vector(compiled, *_apply_step(X, g, params, -step))
        assert np.allclose((plus - minus) / (2 * h), J[..., column], atol=1e-6)


def test_refine_converges_from_a_nearby_slice_seed() -> None:
    compiled = CompiledSystem.from_word_system(load_fixture("5_2-paper"))
    X = _slice_array([0.2 + 1e-3, 0.0, 1.6 - 1e-3])
    charts = [Chart.ANGLE, Chart.PINNED, Chart.ANGLE]
    out, g, R = refine(compiled, X, None, charts, TwistChart.NONE, SolverConfig())
    assert g is None
    assert R[0] < 1e-20
    assert np.allclose(out, _slice_array([0.2, 0.0, 1.6]), atol=1e-9)


def test_search_is_deterministic(small_config) -> None:
    system = load_fixture("5_2-paper")
    first = search(system, small_config)
    second = search(system, small_config)
    assert [s.fingerprint for s in first.solutions] == [s.fingerprint for s in second.solutions]
    assert first.seeds == second.seeds
    assert first.grid == 12


def test_numeric_five_two_matches_slice(small_config) -> None:
    exact = strict_fixed_points("5_2-paper")
    with SeedPool(2) as pool:
        numeric = numeric_strict_search("5_2-paper", small_config, pool=pool)
        assert pool.stats.completed > 0
    assert numeric.backend is Backend.NUMERIC
    on_slice = sorted(p.angles for p in numeric.on_slice)
    assert len(on_slice) == 3
    for found, expected in zip(on_slice, [(0.2, 0.0, 1.6), (0.6, 0.0, 0.8), (1.0, 0.0, 0.0)]):
        assert found == pytest.approx(expected, abs=1e-8)
    agreement = compare_backends(exact, numeric)
    assert agreement.comparable
    assert agreement.agree
    assert agreement.matched == 3


def test_numeric_figure_eight_is_empty(small_config) -> None:
    numeric = numeric_strict_search("fig8-paper", small_config)
    assert numeric.count == 0
    assert numeric.stats["accepted"] == 0
    assert compare_backends(strict_fixed_points("fig8-paper"), numeric).agree


def test_disagreement_is_reported(small_config) -> None:
    exact = strict_fixed_points("5_2-paper")
    empty = numeric_strict_search("fig8-paper", small_config)
    agreement = compare_backends(exact, empty)
    assert not agreement.agree
    assert len(agreement.missing) == 3
    assert agreement.to_dict()["missing"][0] == "(1/5·π, 0, 8/5·π)"


@pytest.mark.slow
def test_default_grid_reproduces_fixtures() -> None:
    config = SolverConfig()
    for name in ("fig8-paper", "5_2-paper"):
        exact = strict_fixed_points(name)
        assert compare_backends(exact, numeric_strict_search(name, config)).agree


@pytest.mark.slow
@pytest.mark.parametrize("name", ["fig8-paper", "5_2-paper", "s1 s2^-1 s1 s2^-1"])
def test_twisted_backends_agree(name, small_config) -> None:
    source = name if name.endswith("-paper") else parse_braid_word(name, 3)
    config = small_config.with_overrides(grid_per_dim=16)
    exact = twisted_fixed_points(source)
    numeric = twisted_fixed_points(source, config, backend=Backend.NUMERIC)
    agreement = compare_backends(exact, numeric)
    assert agreement.agree
    assert agreement.matched == exact.count
    assert all(p.twists for p in numeric.solutions)
    assert all(p.residual < config.accept_residual for p in numeric.solutions)


@pytest.mark.slow
@pytest.mark.parametrize(
    "text, strands",
    [("s1 s1 s1", 2), ("s1 s2^-1 s1 s2^-1", 3), ("s1 s1 s1 s2", 3), ("s1 s1 s1 s1 s1", 2)],
)
def test_artin_braids_agree_across_backends(text, strands) -> None:
    braid = parse_braid_word(text, strands)
    config = SolverConfig(grid_per_dim=16, workers=1)
    exact = strict_fixed_points(braid)
    assert compare_backends(exact, numeric_strict_search(braid, config)).agree


def _random_braids(count: int, seed: int = 20):
    rng = random.Random(seed)
    for _ in range(count):
        length = rng.randint(1, 8)
        letters = tuple(BraidLetter(rng.randint(1, 2), rng.choice((1, -1))) for _ in range(length))
        yield BraidWord(3, letters)


@pytest.mark.slow
@pytest.mark.parametrize("braid", list(_random_braids(20)), ids=str)
def test_random_three_strand_braids_agree(braid) -> None:
    config = SolverConfig(grid_per_dim=16, workers=1)
    exact = strict_fixed_points(braid)
    assert compare_backends(exact, numeric_strict_search(braid, config)).agree


def test_full_pass_uses_the_coarser_grid() -> None:
    X, size = full_seeds(3, 1, 0, SolverConfig())
    assert size == 16
    assert X.shape == (16**3, 3, 3)
    _, small = full_seeds(3, 1, 0, SolverConfig(grid_per_dim=12))
    assert small == 12


def _count_jacobians(monkeypatch):
    import braidfloer.core.numeric_solver as numeric_solver

    calls = []
    original = numeric_solver._jacobian

    def counting(*args):
        calls.append(1)
        return original(*args)

    monkeypatch.setattr(numeric_solver, "_jacobian", counting)
    return calls


def _far_seeds():
    X = np.concatenate([_slice_array([a, 0.0, b]) for a, b in ((0.5, 0.5), (0.9, 1.3), (0.1, 1.9))])
    return CompiledSystem.from_word_system(load_fixture("fig8-paper")), X


def test_refine_prunes_seeds_left_far_from_a_solution(monkeypatch) -> None:
    calls = _count_jacobians(monkeypatch)
    compiled, X = _far_seeds()
    config = SolverConfig(prune_after=2, prune_residual=1e-30)
    _, _, R = refine(compiled, X, None, [Chart.ANGLE, Chart.PINNED, Chart.ANGLE], TwistChart.NONE, config)
    assert len(calls) <= 2
    assert np.all(R > config.accept_residual)


def test_refine_stops_stalled_seeds(monkeypatch) -> None:
    calls = _count_jacobians(monkeypatch)
    compiled, X = _far_seeds()
    config = SolverConfig(stall_ratio=0.999999, prune_after=50, max_newton_iters=50)
    refine(compiled, X, None, [Chart.ANGLE, Chart.PINNED, Chart.ANGLE], TwistChart.NONE, config)
    assert len(calls) <= 3


def test_near_slice_uses_the_given_tolerance() -> None:
    X = np.concatenate([_slice_array([0.2, 0.0, 1.6])] * 2)
    X[1, 2] = (0.0, math.sqrt(1 - 1e-6), 1e-3)
    assert near_slice(X, 1e-4).tolist() == [True, False]
    assert near_slice(X, 1e-2).tolist() == [True, True]
    assert near_slice(X[:0], 1e-4).shape == (0,)


def test_search_logs_the_configured_slice_tolerance(caplog, small_config) -> None:
    config = small_config.with_overrides(slice_tol=0.25)
    with caplog.at_level(logging.DEBUG, logger="braidfloer.core.numeric_solver"):
        search(load_fixture("5_2-paper"), config)
    assert "within 0.25 of the slice" in caplog.text


def test_join_refuses_mixed_twists() -> None:
    plain = _Batch.empty(3, twisted=False)
    twisted = _Batch.empty(3, twisted=True)
    assert twisted.join(twisted).g.shape == (0, 4)
    with pytest.raises(ValueError):
        plain.join(twisted)


def test_run_chunks_keeps_twists_made_by_the_runner() -> None:
    X = np.concatenate([_slice_array([0.2, 0.0, 1.6])] * 5)

    def runner(chunk):
        part, _ = chunk
        g = np.tile([1.0, 0.0, 0.0, 0.0], (part.shape[0], 1))
        return part, g, np.zeros(part.shape[0])

    with SeedPool(1) as pool:
        _, g, R = _run_chunks(pool, runner, X, None, chunk_size=2)
    assert g.shape == (5, 4)
    assert R.shape == (5,)


def test_twisted_search_carries_twists_across_chunks() -> None:
    config = SolverConfig(grid_per_dim=6, workers=1, chunk_size=64)
    found = search(load_fixture("fig8-paper"), config, twisted=True)
    assert found.solutions
    for solution in found.solutions:
        assert solution.twist is not None
        assert solution.residual < config.accept_residual
    assert any(s.on_slice and s.twist_kind in ("rotation", "reflection") for s in found.solutions)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["fig8-paper", "5_2-paper"])
def test_default_strict_run_is_fast(name) -> None:
    started = time.perf_counter()
    exact = strict_fixed_points(name)
    numeric = numeric_strict_search(name, SolverConfig())
    assert compare_backends(exact, numeric).agree
    assert time.perf_counter() - started < 5.0
