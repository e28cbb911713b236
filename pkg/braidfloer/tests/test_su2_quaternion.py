"""Quaternion arithmetic, word evaluation and gauge fixing."""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from braidfloer.core.braid_engine import FreeWord, parse_free_word
from braidfloer.core.su2_quaternion import (
    QJ,
    DegenerateGaugeError,
    Quaternion,
    QuaternionNormError,
    RepTuple,
    TracelessSU2,
    default_neighbor,
    evaluate_word,
    fingerprint,
    gauge_fix,
    gauge_fix_batch,
    is_irreducible,
    quat_conj,
    quat_inv,
    quat_mul,
    rotation_k,
    slice_point,
)

from .strategies import angles, odd_free_words, unit_quaternions, unit_vectors


def _matrix(q: Quaternion) -> np.ndarray:
    return np.array(
        [[q.w + 1j * q.x, q.y + 1j * q.z], [-q.y + 1j * q.z, q.w - 1j * q.x]], dtype=complex
    )


def _close(a: Quaternion, b: Quaternion, tol: float = 1e-10) -> bool:
    return a.distance(b) < tol


@settings(max_examples=300, deadline=None)
@given(unit_quaternions(), unit_quaternions())
def test_product_matches_matrix_product(a, b) -> None:
    assert np.allclose(_matrix(a * b), _matrix(a) @ _matrix(b), atol=1e-12)


def test_basis_matches_matrix_dictionary() -> None:
    assert np.allclose(_matrix(Quaternion(0, 1, 0, 0)), np.diag([1j, -1j]))
    assert np.allclose(_matrix(QJ), np.array([[0, 1], [-1, 0]]))
    ij = Quaternion(0, 1, 0, 0) * QJ
    assert ij == Quaternion(0, 0, 0, 1)


@settings(max_examples=300, deadline=None)
@given(angles, angles)
def test_slice_products_are_rotations_about_k(a, b) -> None:
    product = slice_point(a) * slice_point(b)
    assert _close(product, -rotation_k(a - b))


@settings(max_examples=300, deadline=None)
@given(angles, angles)
def test_rotation_about_k_shifts_slice_angle(theta, phi) -> None:
    assert _close(quat_conj(rotation_k(phi), slice_point(theta)), slice_point(theta + 2 * phi))


@settings(max_examples=100, deadline=None)
@given(angles)
def test_conjugation_by_j_reflects_slice_angle(theta) -> None:
    assert _close(quat_conj(QJ, slice_point(theta)), slice_point(math.pi - theta))


def test_unit_checks() -> None:
    with pytest.raises(QuaternionNormError):
        quat_mul(Quaternion(2.0, 0.0, 0.0, 0.0), Quaternion(1.0, 0.0, 0.0, 0.0))
    with pytest.raises(QuaternionNormError):
        TracelessSU2.from_vector(1.0 + 1e-6, 0.0, 0.0)
    snapped = TracelessSU2.from_vector(1.0 + 1e-12, 0.0, 0.0)
    assert snapped.x == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(QuaternionNormError):
        TracelessSU2.from_quaternion(Quaternion(0.5, 0.0, 0.0, math.sqrt(0.75)))


@settings(max_examples=1000, deadline=None)
@given(st.lists(unit_vectors(), min_size=3, max_size=3), odd_free_words(strands=3))
def test_word_evaluation_matches_matrices(vectors, word) -> None:
    rep = RepTuple.from_vectors(vectors)
    expected = np.eye(2, dtype=complex)
    for index, exponent in word.letters:
        m = _matrix(rep.element(index).quaternion())
        expected = expected @ (m if exponent > 0 else np.linalg.inv(m))
    assert np.allclose(_matrix(evaluate_word(word, rep)), expected, atol=1e-10)


def test_long_words_stay_on_the_sphere() -> None:
    rep = RepTuple.from_angles([0.3, 1.1, 2.9])
    word = parse_free_word(" ".join(["x1 x2 x3^-1"] * 67), 3)
    value = evaluate_word(word, rep)
    assert value.norm() == pytest.approx(1.0, abs=1e-12)


def test_empty_word_is_one() -> None:
    rep = RepTuple.from_angles([0.0, 1.0])
    assert evaluate_word(FreeWord(2), rep) == Quaternion(1.0, 0.0, 0.0, 0.0)


@settings(max_examples=1000, deadline=None)
@given(st.lists(unit_vectors(), min_size=2, max_size=5), unit_quaternions())
def test_fingerprint_is_conjugation_invariant(vectors, g) -> None:
    rep = RepTuple.from_vectors(vectors)
    assert fingerprint(rep).distance(fingerprint(rep.conjugate_by(g))) < 1e-10


def test_fingerprint_length() -> None:
    rep = RepTuple.from_angles([0.0, 1.0, 2.0, 3.0])
    assert len(fingerprint(rep).values) == 4 + 6 + 4


@settings(max_examples=1000, deadline=None)
@given(st.lists(unit_vectors(), min_size=3, max_size=5), st.data())
def test_gauge_fix_puts_pin_at_i_and_neighbor_on_circle(vectors, data) -> None:
    rep = RepTuple.from_vectors(vectors)
    pin = data.draw(st.integers(1, rep.strands))
    fixed, g = gauge_fix(rep, pin)
    neighbor = default_neighbor(pin, rep.strands)
    assert fixed.element(pin).vector() == (1.0, 0.0, 0.0)
    assert abs(fixed.element(neighbor).z) < 1e-9
    assert fixed.element(neighbor).y >= -1e-12
    assert g.norm() == pytest.approx(1.0, abs=1e-12)
    moved = rep.conjugate_by(g)
    assert np.allclose(moved.as_array(), fixed.as_array(), atol=1e-9)
    assert fingerprint(rep).distance(fingerprint(fixed)) < 1e-9


@settings(max_examples=1000, deadline=None)
@given(st.lists(unit_vectors(), min_size=3, max_size=3), odd_free_words(strands=3), unit_quaternions())
def test_word_evaluation_is_conjugation_covariant(vectors, word, g) -> None:
    rep = RepTuple.from_vectors(vectors)
    moved = evaluate_word(word, rep.conjugate_by(g))
    assert _close(moved, quat_conj(g, evaluate_word(word, rep)), tol=1e-9)


def test_conjugating_the_pin_by_the_angle_of_record_doubles_it() -> None:
    theta = math.pi / 7
    rep = RepTuple.from_angles([theta, 0.0, 2 * theta])
    assert _close(evaluate_word(parse_free_word("x1 x2 x1^-1", 3), rep), slice_point(2 * theta))
    word = parse_free_word("x1 x2 x3^-1 x2^-1 x1^-1", 3)
    value = evaluate_word(word, rep)
    assert _close(value, -slice_point(4 * theta))
    m = _matrix(value)
    assert m[0, 0] == pytest.approx(-1j * math.cos(4 * theta))
    assert m[0, 1] == pytest.approx(-math.sin(4 * theta))


@settings(max_examples=1000, deadline=None)
@given(st.lists(unit_vectors(), min_size=3, max_size=5), st.data())
def test_gauge_fix_is_idempotent(vectors, data) -> None:
    rep = RepTuple.from_vectors(vectors)
    pin = data.draw(st.integers(1, rep.strands))
    neighbor = default_neighbor(pin, rep.strands)
    pinned = np.array(rep.element(pin).vector())
    assume(np.linalg.norm(np.cross(pinned, rep.element(neighbor).vector())) > 1e-6)
    fixed, _ = gauge_fix(rep, pin)
    again, g = gauge_fix(fixed, pin)
    assert np.allclose(again.as_array(), fixed.as_array(), atol=1e-9)
    assert abs(abs(g.w) - 1.0) < 1e-9
    assert fingerprint(again).distance(fingerprint(rep)) < 1e-9


@settings(max_examples=300, deadline=None)
@given(unit_quaternions())
def test_gauge_fix_recovers_the_slice_normal_form(g) -> None:
    theta = math.pi / 7
    rep = RepTuple.from_angles([theta, 0.0, 2 * theta])
    fixed, _ = gauge_fix(rep.conjugate_by(g), 2)
    assert np.allclose(fixed.as_array(), rep.as_array(), atol=1e-9)


def test_gauge_fix_handles_antipodal_pin() -> None:
    rep = RepTuple.from_vectors([(-1.0, 0.0, 0.0), (0.0, 0.0, 1.0)])
    fixed, _ = gauge_fix(rep, 1)
    assert np.allclose(fixed.element(1).vector(), (1.0, 0.0, 0.0))
    assert np.allclose(fixed.element(2).vector(), (0.0, 1.0, 0.0), atol=1e-12)


def test_gauge_fix_fallback_uses_next_element() -> None:
    rep = RepTuple.from_vectors([(1.0, 0.0, 0.0), (-1.0, 0.0, 0.0), (0.0, 0.0, 1.0)])
    fixed, _ = gauge_fix(rep, 1, fallback=True)
    assert np.allclose(fixed.element(3).vector(), (0.0, 1.0, 0.0), atol=1e-12)


def test_degenerate_gauge_rejected() -> None:
    with pytest.raises(DegenerateGaugeError):
        gauge_fix_batch(np.full((1, 3, 3), np.nan), 0, 1)
    with pytest.raises(DegenerateGaugeError):
        gauge_fix_batch(np.zeros((1, 3, 3)), 0, 1)


def test_irreducibility() -> None:
    assert not is_irreducible(RepTuple.from_angles([0.0, 0.0, 0.0]))
    assert not is_irreducible(RepTuple.from_angles([0.0, math.pi, 0.0]))
    assert is_irreducible(RepTuple.from_angles([0.0, 1.0, 0.0]))


@settings(max_examples=200)
@given(unit_quaternions())
def test_quat_inv_is_a_two_sided_inverse(q) -> None:
    one = Quaternion(1.0, 0.0, 0.0, 0.0)
    assert _close(quat_mul(q, quat_inv(q)), one)
    assert _close(quat_mul(quat_inv(q), q), one)


def test_inverse_of_pure_quaternion_is_its_negation() -> None:
    q = slice_point(0.7)
    assert _close(quat_inv(q), -q)
    with pytest.raises(QuaternionNormError):
        quat_inv(Quaternion(2.0, 0.0, 0.0, 0.0))


def test_default_neighbor_is_the_lowest_other_index() -> None:
    assert default_neighbor(2, 3) == 1
    assert default_neighbor(3, 4) == 1
    assert default_neighbor(1, 3) == 2
