import json

import pytest

from braidfloer.core.fixtures import (
    FixtureFormatError,
    UnknownFixtureError,
    available_fixtures,
    load_fixture,
    parse_fixture,
)


def test_bundled_word_systems_are_listed() -> None:
    assert available_fixtures() == ["5_2-paper", "fig8-paper"]


def test_load_figure_eight() -> None:
    system = load_fixture("fig8-paper")
    assert system.strands == 3
    assert system.is_fixture
    assert system.describe() == [
        "x1 x2 x3^-1 x2^-1 x1^-1 = x1",
        "x1 x2^-1 x1 x2 x1^-1 = x2",
        "x1 x2 x1^-1 = x3",
    ]
    assert system.provenance.citation
    assert system.equation_notes[2] == "X_1 X_2 X_1^-1 = X_3"


def test_unknown_fixture_names_the_available_ones() -> None:
    with pytest.raises(UnknownFixtureError, match="fig8-paper"):
        load_fixture("trefoil")


def test_goeritz_files_are_not_word_systems() -> None:
    with pytest.raises(UnknownFixtureError):
        load_fixture("goeritz-5_2")


def _fixture(**overrides):
    data = {
        "kind": "word-system",
        "strands": 2,
        "citation": "test",
        "provenance": "hand written",
        "equations": [{"lhs": [[1, 1]], "rhs": 1}, {"lhs": [[2, 1]], "rhs": 2}],
    }
    data.update(overrides)
    return data


def test_parse_reduces_unreduced_words() -> None:
    system = parse_fixture(
        _fixture(equations=[{"lhs": [[1, 1], [2, 1], [2, -1]], "rhs": 1}]), "scratch"
    )
    assert system.describe() == ["x1 = x1"]


@pytest.mark.parametrize(
    "overrides",
    [
        {"strands": 1},
        {"equations": []},
        {"equations": [{"lhs": [[3, 1]], "rhs": 1}]},
        {"equations": [{"lhs": [[1, 2]], "rhs": 1}]},
        {"equations": [{"rhs": 1}]},
    ],
)
def test_malformed_fixtures(overrides) -> None:
    with pytest.raises(FixtureFormatError):
        parse_fixture(_fixture(**overrides), "broken")


def test_missing_citation() -> None:
    data = _fixture()
    del data["citation"]
    with pytest.raises(FixtureFormatError):
        parse_fixture(data, "broken")


def test_custom_directory(tmp_path) -> None:
    (tmp_path / "pair.json").write_text(json.dumps(_fixture()), encoding="utf-8")
    (tmp_path / "junk.json").write_text("not json", encoding="utf-8")
    assert available_fixtures(tmp_path) == ["pair"]
    assert load_fixture("pair", tmp_path).strands == 2
