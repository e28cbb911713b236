"""Exact inertia, Goeritz signatures and the Euler-characteristic check."""

import json

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from braidfloer.core.config import GOERITZ_5_2_PATH, GOERITZ_5_2_REDUCED_PATH
from braidfloer.core.floer_fix_solver import strict_fixed_points
from braidfloer.core.knot_invariants import (
    AsymmetricMatrixError,
    MatrixFormatError,
    OddSignatureError,
    SymmetricIntMatrix,
    determinant,
    euler_consistency_check,
    goeritz_paths_agree,
    knot_determinant,
    knot_signature_goeritz,
    load_matrix,
    matrix_signature,
    parse_matrix_text,
    reduced_goeritz,
)

from .strategies import symmetric_matrices

GOERITZ_5_2 = [[4, -3, -1], [-3, 4, -1], [-1, -1, 2]]


def test_five_two_goeritz() -> None:
    inertia = matrix_signature(GOERITZ_5_2)
    assert (inertia.positives, inertia.negatives, inertia.zeros) == (2, 0, 1)
    assert inertia.signature == 2
    assert knot_signature_goeritz(GOERITZ_5_2, 0) == 2


def test_reduced_five_two_goeritz() -> None:
    reduced = reduced_goeritz(GOERITZ_5_2)
    assert reduced.to_lists() == [[4, -3], [-3, 4]]
    inertia = matrix_signature(reduced)
    assert (inertia.positives, inertia.negatives, inertia.zeros) == (2, 0, 0)
    assert determinant(reduced) == 7
    assert knot_determinant(GOERITZ_5_2) == 7


def test_goeritz_paths_agree() -> None:
    comparison = goeritz_paths_agree(GOERITZ_5_2, 0)
    assert comparison.agree
    assert comparison.unreduced_signature == comparison.reduced_signature == 2
    assert comparison.to_dict()["determinant"] == 7


def test_hyperbolic_block() -> None:
    inertia = matrix_signature([[0, 1], [1, 0]])
    assert (inertia.positives, inertia.negatives, inertia.zeros) == (1, 1, 0)
    assert matrix_signature([[0, 0], [0, 0]]).zeros == 2
    assert matrix_signature([[0, 2, 0], [2, 0, 0], [0, 0, -3]]).signature == -1


@settings(max_examples=300, deadline=None)
@given(symmetric_matrices())
def test_inertia_matches_eigenvalues(rows) -> None:
    inertia = matrix_signature(rows)
    eigen = np.linalg.eigvalsh(np.array(rows, dtype=float))
    rank = int(sympy.Matrix(rows).rank())
    assert inertia.order == len(rows)
    assert inertia.zeros == len(rows) - rank
    assert inertia.positives == int(np.sum(eigen > 1e-7))
    assert inertia.negatives == int(np.sum(eigen < -1e-7))


unimodular = st.integers(2, 4).flatmap(
    lambda n: st.lists(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(-2, 2)),
        max_size=6,
    ).map(lambda ops: (n, ops))
)


def _elementary(n, ops):
    p = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
    for target, source, factor in ops:
        if target != source:
            p[target] = [a + factor * b for a, b in zip(p[target], p[source])]
    return p


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_congruence_preserves_inertia(data) -> None:
    n, ops = data.draw(unimodular)
    rows = data.draw(symmetric_matrices(max_order=n, bound=4).filter(lambda m: len(m) == n))
    p = sympy.Matrix(_elementary(n, ops))
    moved = (p * sympy.Matrix(rows) * p.T).tolist()
    assert matrix_signature(rows) == matrix_signature([[int(x) for x in r] for r in moved])


@settings(max_examples=200, deadline=None)
@given(symmetric_matrices(max_order=5, bound=6))
def test_bareiss_matches_sympy(rows) -> None:
    assert determinant(rows) == int(sympy.Matrix(rows).det())


def test_asymmetric_and_ragged_matrices() -> None:
    with pytest.raises(AsymmetricMatrixError):
        matrix_signature([[1, 2], [3, 1]])
    with pytest.raises(MatrixFormatError):
        SymmetricIntMatrix.from_rows([[1, 2], [2]])
    with pytest.raises(MatrixFormatError):
        SymmetricIntMatrix.from_rows([[1.5]])
    with pytest.raises(MatrixFormatError):
        SymmetricIntMatrix.from_rows([])
    with pytest.raises(MatrixFormatError):
        reduced_goeritz(GOERITZ_5_2, drop=4)


@pytest.mark.parametrize(
    "text",
    [
        "[[4, -3], [-3, 4]]",
        '{"matrix": [[4, -3], [-3, 4]]}',
        "4 -3\n-3 4\n",
        "4, -3\n\n-3, 4",
    ],
)
def test_parse_matrix_text_variants(text) -> None:
    matrix, mu = parse_matrix_text(text)
    assert matrix.to_lists() == [[4, -3], [-3, 4]]
    assert mu is None


def test_parse_matrix_text_with_mu() -> None:
    matrix, mu = parse_matrix_text(json.dumps({"matrix": [[2]], "mu": 1}))
    assert matrix.order == 1
    assert mu == 1


@pytest.mark.parametrize("text", ["", "[[1, 2]", '{"rows": []}', "1 x\nx 1", "[1, 2]"])
def test_parse_matrix_text_rejects(text) -> None:
    with pytest.raises(MatrixFormatError):
        parse_matrix_text(text)


def test_bundled_goeritz_files() -> None:
    matrix, mu = load_matrix(GOERITZ_5_2_PATH)
    assert matrix.to_lists() == GOERITZ_5_2
    assert mu == 0
    reduced, _ = load_matrix(GOERITZ_5_2_REDUCED_PATH)
    assert determinant(reduced) == 7


def test_missing_matrix_file(tmp_path) -> None:
    with pytest.raises(MatrixFormatError):
        load_matrix(tmp_path / "absent.json")


def test_euler_check_on_five_two() -> None:
    report = euler_consistency_check(strict_fixed_points("5_2-paper"), 2)
    assert report.generator_count == 3
    assert report.half_signature == 1
    assert report.parity_ok and report.bound_ok and report.consistent
    assert report.to_dict()["consistent"] is True


def test_euler_check_on_figure_eight() -> None:
    assert euler_consistency_check(strict_fixed_points("fig8-paper"), 0).consistent


def test_euler_check_failures() -> None:
    parity = euler_consistency_check(2, 2)
    assert not parity.parity_ok and parity.bound_ok
    bound = euler_consistency_check(1, -6)
    assert bound.parity_ok and not bound.bound_ok
    with pytest.raises(OddSignatureError):
        euler_consistency_check(3, 1)
