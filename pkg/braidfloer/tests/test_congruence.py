"""Smith normal form and exact congruence solving."""

from fractions import Fraction
from itertools import combinations, product
from math import gcd

import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from braidfloer.core.congruence import (
    Congruence,
    CongruenceSystem,
    SolutionKind,
    exact_defects,
    smith_normal_form,
    solve_congruences,
)
from braidfloer.core.fixtures import load_fixture
from braidfloer.core.floer_fix_solver import build_congruences


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def _determinantal_divisor(matrix, k: int) -> int:
    rows, cols = len(matrix), len(matrix[0])
    m = sympy.Matrix(matrix)
    value = 0
    for r in combinations(range(rows), k):
        for c in combinations(range(cols), k):
            value = gcd(value, int(m.extract(list(r), list(c)).det()))
    return value


integer_matrices = st.integers(1, 3).flatmap(
    lambda rows: st.integers(1, 3).flatmap(
        lambda cols: st.lists(
            st.lists(st.integers(-6, 6), min_size=cols, max_size=cols),
            min_size=rows,
            max_size=rows,
        )
    )
)


@settings(max_examples=300, deadline=None)
@given(integer_matrices)
def test_smith_normal_form_properties(matrix) -> None:
    u, d, v = smith_normal_form(matrix)
    assert _matmul(_matmul(u, matrix), v) == d
    assert abs(sympy.Matrix(u).det()) == 1
    assert abs(sympy.Matrix(v).det()) == 1

    rows, cols = len(matrix), len(matrix[0])
    for i in range(rows):
        for j in range(cols):
            if i != j:
                assert d[i][j] == 0
    diagonal = [d[i][i] for i in range(min(rows, cols))]
    assert all(x >= 0 for x in diagonal)
    for a, b in zip(diagonal, diagonal[1:]):
        assert (a == 0 and b == 0) or (a != 0 and b % a == 0)

    running = 1
    for k, x in enumerate(diagonal, start=1):
        running *= x
        assert running == _determinantal_divisor(matrix, k)


def _single(lhs, rhs, halfturns, names=("φ",)) -> CongruenceSystem:
    return CongruenceSystem(names, (Congruence(lhs, rhs, halfturns),), pin=1)


def test_five_phi_plus_pi_has_five_solutions() -> None:
    solutions = solve_congruences(_single((5,), (0,), 1))
    assert solutions.kind is SolutionKind.FINITE
    assert list(solutions.points) == [
        (Fraction(1, 5),),
        (Fraction(3, 5),),
        (Fraction(1),),
        (Fraction(7, 5),),
        (Fraction(9, 5),),
    ]


def test_contradictory_system_is_empty() -> None:
    cs = CongruenceSystem(
        ("φ",), (Congruence((1,), (0,), 0), Congruence((1,), (0,), 1)), pin=1
    )
    assert solve_congruences(cs).kind is SolutionKind.EMPTY
    assert solve_congruences(_single((0,), (0,), 1)).kind is SolutionKind.EMPTY


def test_underdetermined_system_is_a_family() -> None:
    cs = _single((1, 0), (0, 1), 0, names=("φ1", "φ2"))
    solutions = solve_congruences(cs)
    assert solutions.kind is SolutionKind.FAMILY
    assert solutions.points == ((Fraction(0), Fraction(0)),)
    assert len(solutions.family) == 1
    direction = solutions.family[0]
    assert any(direction)
    assert sum(a * b for a, b in zip(cs.equations[0].row, direction)) == 0


def test_no_equations_is_a_full_family() -> None:
    solutions = solve_congruences(CongruenceSystem(("φ1", "φ2"), (), pin=1))
    assert solutions.kind is SolutionKind.FAMILY
    assert len(solutions.family) == 2


def test_no_variables() -> None:
    assert solve_congruences(CongruenceSystem((), (Congruence((), (), 0),), pin=1)).kind is SolutionKind.FINITE
    assert solve_congruences(CongruenceSystem((), (Congruence((), (), 1),), pin=1)).kind is SolutionKind.EMPTY


square_systems = st.tuples(
    st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=2, max_size=2),
    st.lists(st.integers(0, 1), min_size=2, max_size=2),
)


@settings(max_examples=100, deadline=None)
@given(square_systems)
def test_square_systems_match_grid_search(system) -> None:
    matrix, rhs = system
    det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    assume(det != 0)
    cs = CongruenceSystem(
        ("φ1", "φ2"),
        tuple(Congruence(tuple(row), (0, 0), b) for row, b in zip(matrix, rhs)),
        pin=1,
    )
    solutions = solve_congruences(cs)
    assert solutions.kind is SolutionKind.FINITE
    assert len(solutions) == abs(det)
    assert all(not any(d) for d in exact_defects(cs, solutions).values())

    steps = [Fraction(k, abs(det)) for k in range(2 * abs(det))]
    grid = {p for p in product(steps, repeat=2) if not any(cs.defects(p))}
    assert grid == set(solutions.points)


def test_figure_eight_congruences() -> None:
    cs = build_congruences(load_fixture("fig8-paper"), pin=2)
    assert cs.variables == ("θ1", "θ3")
    assert cs.rows() == [((1, 1), 1), ((3, 0), 0), ((2, -1), 0)]
    eliminated = cs.eliminated()
    assert eliminated.describe() == [
        "4·θ1 + π ≡ θ1 (mod 2π)",
        "3·θ1 ≡ 0 (mod 2π)",
        "θ3 = 2·θ1",
    ]
    assert eliminated.expand((Fraction(1, 3),)) == (Fraction(1, 3), Fraction(2, 3))
    assert solve_congruences(cs).kind is SolutionKind.EMPTY


def test_five_two_congruences() -> None:
    cs = build_congruences(load_fixture("5_2-paper"), pin=2)
    assert cs.rows() == [((-1, 2), 1), ((2, 1), 0), ((3, -1), 1)]
    eliminated = cs.eliminated()
    assert eliminated.describe() == [
        "6·θ1 + π ≡ θ1 (mod 2π)",
        "5·θ1 + π ≡ 0 (mod 2π)",
        "θ3 = 3·θ1 + π",
    ]
    assert eliminated.expand((Fraction(1, 5),)) == (Fraction(1, 5), Fraction(8, 5))
    assert len(solve_congruences(cs)) == 5
