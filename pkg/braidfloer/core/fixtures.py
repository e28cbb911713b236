"""Word systems σ(x_j) = x_{rhs}: bundled recorded fixtures and their JSON loader."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from .braid_engine import FreeWord, StrandRangeError, format_free_word, free_reduce
from .config import FIXTURES_DIR
from .errors import FloerInputError

logger = logging.getLogger(__name__)


class UnknownFixtureError(FloerInputError):
    """Raised when a fixture name has no bundled file."""


class FixtureFormatError(FloerInputError):
    """Raised when a fixture file does not follow the fixture schema."""


@dataclass(frozen=True)
class Equation:
    lhs: FreeWord
    rhs: int

    def describe(self) -> str:
        return f"{format_free_word(self.lhs)} = x{self.rhs}"


@dataclass(frozen=True)
class Provenance:
    kind: str  # "artin" or "fixture"
    name: str
    order: Optional[str] = None
    citation: Optional[str] = None
    notes: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind, "name": self.name}
        if self.order is not None:
            data["order"] = self.order
        if self.citation is not None:
            data["citation"] = self.citation
        if self.notes:
            data["notes"] = list(self.notes)
        return data


@dataclass(frozen=True)
class WordSystem:
    """Fixed-point equations lhs_j = x_{rhs_j}; fixtures carry no Artin-property guarantee."""

    strands: int
    equations: Tuple[Equation, ...]
    provenance: Provenance
    equation_notes: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        for eq in self.equations:
            if eq.lhs.strands != self.strands:
                raise FixtureFormatError("equation word lives in a different free group")
            if not 1 <= eq.rhs <= self.strands:
                raise StrandRangeError(f"right-hand generator x{eq.rhs} out of range")

    @property
    def is_fixture(self) -> bool:
        return self.provenance.kind == "fixture"

    def describe(self) -> List[str]:
        return [eq.describe() for eq in self.equations]


def available_fixtures(directory: Optional[Path] = None) -> List[str]:
    root = directory or FIXTURES_DIR
    return sorted(
        path.stem
        for path in root.glob("*.json")
        if _peek_kind(path) == "word-system"
    )


def _peek_kind(path: Path) -> Optional[str]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError):
        return None
    return data.get("kind") if isinstance(data, dict) else None


def load_fixture(name: str, directory: Optional[Path] = None) -> WordSystem:
    root = directory or FIXTURES_DIR
    path = root / f"{name}.json"
    if not path.is_file() or _peek_kind(path) != "word-system":
        known = ", ".join(available_fixtures(root)) or "none"
        raise UnknownFixtureError(f"unknown fixture {name!r} (available: {known})")
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    logger.debug("Loaded fixture %s from %s", name, path)
    return parse_fixture(data, name)


def parse_fixture(data: Dict[str, Any], name: str) -> WordSystem:
    try:
        strands = int(data["strands"])
        raw_equations = data["equations"]
        citation = str(data["citation"])
        provenance_text = str(data["provenance"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FixtureFormatError(f"fixture {name!r} is missing a required field: {exc}") from exc
    if strands < 2 or not isinstance(raw_equations, list) or not raw_equations:
        raise FixtureFormatError(f"fixture {name!r} needs strands >= 2 and a non-empty equation list")

    equations: List[Equation] = []
    notes: List[str] = []
    for position, entry in enumerate(raw_equations, start=1):
        try:
            letters = tuple((int(i), int(e)) for i, e in entry["lhs"])
            rhs = int(entry["rhs"])
        except (KeyError, TypeError, ValueError) as exc:
            raise FixtureFormatError(f"fixture {name!r} equation {position} is malformed") from exc
        try:
            word = FreeWord(strands, letters)
        except FloerInputError as exc:
            raise FixtureFormatError(f"fixture {name!r} equation {position}: {exc}") from exc
        if not word.is_reduced:
            logger.info("Fixture %s equation %d is not reduced; reducing", name, position)
            word = free_reduce(word)
        equations.append(Equation(word, rhs))
        notes.append(str(entry.get("note", "")))

    provenance = Provenance(
        kind="fixture",
        name=name,
        citation=citation,
        notes=(provenance_text,),
    )
    return WordSystem(strands, tuple(equations), provenance, tuple(notes))
