"""Braid words and their Artin action on the free group F_n.

Free words are stored letter by letter as ``(generator index, exponent)`` pairs
with exponents in ``{+1, -1}``. Every operation in this module returns freely
reduced words.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import FloerInputError

Letter = Tuple[int, int]


class BraidSyntaxError(FloerInputError):
    """Raised when braid text does not match the braid grammar."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


class StrandRangeError(FloerInputError):
    """Raised when a generator index does not fit the strand count."""

    def __init__(self, message: str, position: Optional[int] = None) -> None:
        detail = message if position is None else f"{message} (at position {position})"
        super().__init__(detail)
        self.position = position


class StrandMismatchError(FloerInputError):
    """Raised when words or automorphisms on different strand counts are combined."""


class CompositionOrder(str, Enum):
    RIGHTMOST_FIRST = "rightmost-first"
    LEFTMOST_FIRST = "leftmost-first"


@dataclass(frozen=True)
class BraidLetter:
    index: int
    sign: int

    def inverse(self) -> "BraidLetter":
        return BraidLetter(self.index, -self.sign)


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: Tuple[BraidLetter, ...] = ()

    def __post_init__(self) -> None:
        if self.strands < 2:
            raise StrandRangeError(f"a braid needs at least 2 strands, got {self.strands}")
        for letter in self.letters:
            if letter.sign not in (1, -1):
                raise StrandRangeError(f"braid letter sign must be +1 or -1, got {letter.sign}")
            if not 1 <= letter.index <= self.strands - 1:
                raise StrandRangeError(
                    f"generator s{letter.index} out of range for {self.strands} strands"
                )

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_braid_word(self)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(letter.inverse() for letter in reversed(self.letters)))

    def concat(self, other: "BraidWord") -> "BraidWord":
        if other.strands != self.strands:
            raise StrandMismatchError(
                f"cannot concatenate braids on {self.strands} and {other.strands} strands"
            )
        return BraidWord(self.strands, self.letters + other.letters)


@dataclass(frozen=True)
class FreeWord:
    strands: int
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        for index, exponent in self.letters:
            if exponent not in (1, -1):
                raise FloerInputError(f"free-word exponent must be +1 or -1, got {exponent}")
            if not 1 <= index <= self.strands:
                raise StrandRangeError(f"generator x{index} out of range for F_{self.strands}")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_free_word(self)

    @classmethod
    def generator(cls, index: int, strands: int) -> "FreeWord":
        return cls(strands, ((index, 1),))

    @property
    def is_reduced(self) -> bool:
        return all(
            not (a[0] == b[0] and a[1] == -b[1]) for a, b in zip(self.letters, self.letters[1:])
        )

    def inverse(self) -> "FreeWord":
        return FreeWord(self.strands, tuple((i, -e) for i, e in reversed(self.letters)))

    def concat(self, other: "FreeWord") -> "FreeWord":
        if other.strands != self.strands:
            raise StrandMismatchError(
                f"cannot multiply words in F_{self.strands} and F_{other.strands}"
            )
        return FreeWord(self.strands, _reduce_letters(self.letters + other.letters))

    def conjugated_generator(self) -> Optional[int]:
        """Return l when this reduced word is u x_l u^-1, otherwise None."""

        letters = _reduce_letters(self.letters)
        size = len(letters)
        if size % 2 == 0:
            return None
        middle = letters[size // 2]
        if middle[1] != 1:
            return None
        for offset in range(size // 2):
            left = letters[offset]
            right = letters[size - 1 - offset]
            if left[0] != right[0] or left[1] != -right[1]:
                return None
        return middle[0]

    def is_conjugate_of_generator(self) -> bool:
        return self.conjugated_generator() is not None


@dataclass(frozen=True)
class ArtinAutomorphism:
    strands: int
    images: Tuple[FreeWord, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.strands:
            raise StrandMismatchError(
                f"expected {self.strands} generator images, got {len(self.images)}"
            )
        for image in self.images:
            if image.strands != self.strands:
                raise StrandMismatchError("generator image lives in a different free group")

    @classmethod
    def identity(cls, strands: int) -> "ArtinAutomorphism":
        return cls(strands, tuple(FreeWord.generator(j, strands) for j in range(1, strands + 1)))

    def image(self, index: int) -> FreeWord:
        return self.images[index - 1]

    def __call__(self, word: FreeWord) -> FreeWord:
        return apply_to_word(self, word)

    def compose(self, other: "ArtinAutomorphism") -> "ArtinAutomorphism":
        """Return self ∘ other, i.e. x ↦ self(other(x))."""

        if other.strands != self.strands:
            raise StrandMismatchError(
                f"cannot compose automorphisms of F_{self.strands} and F_{other.strands}"
            )
        return ArtinAutomorphism(self.strands, tuple(apply_to_word(self, image) for image in other.images))

    def is_identity(self) -> bool:
        return self == ArtinAutomorphism.identity(self.strands)

    def check_artin_property(self) -> bool:
        """True when every image is a conjugate of a generator and the images multiply to x_1…x_n."""

        if not all(image.is_conjugate_of_generator() for image in self.images):
            return False
        product = FreeWord(self.strands)
        for image in self.images:
            product = product.concat(image)
        expected = tuple((j, 1) for j in range(1, self.strands + 1))
        return product.letters == expected


@dataclass(frozen=True)
class Permutation:
    strands: int
    mapping: Tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.mapping) != list(range(1, self.strands + 1)):
            raise FloerInputError(f"not a permutation of 1..{self.strands}: {self.mapping}")

    def __call__(self, point: int) -> int:
        return self.mapping[point - 1]

    def cycles(self) -> List[Tuple[int, ...]]:
        seen = set()
        found: List[Tuple[int, ...]] = []
        for start in range(1, self.strands + 1):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            current = self(start)
            while current != start:
                cycle.append(current)
                seen.add(current)
                current = self(current)
            found.append(tuple(cycle))
        return found

    def is_single_cycle(self) -> bool:
        return len(self.cycles()) == 1


# ---------- Parsing and printing ----------

_TOKEN = re.compile(r"\S+")
_BRAID_ITEM = re.compile(r"(?:[sS](?P<s>\d+)|(?P<neg>-)?(?P<n>\d+))(?:\^(?P<exp>[+-]?\d+))?")
_FREE_ITEM = re.compile(r"[xX](?P<n>\d+)(?:\^(?P<exp>[+-]?\d+))?")


def parse_braid_word(text: str, strands: int) -> BraidWord:
    """Parse whitespace-separated braid items such as ``s1 s2^-1``, ``-2`` or ``2^-1``."""

    if strands < 2:
        raise StrandRangeError(f"a braid needs at least 2 strands, got {strands}")
    letters: List[BraidLetter] = []
    for token in _TOKEN.finditer(text or ""):
        match = _BRAID_ITEM.fullmatch(token.group())
        if match is None:
            raise BraidSyntaxError(f"unexpected braid item {token.group()!r}", token.start())
        index = int(match.group("s") or match.group("n"))
        sign = -1 if match.group("neg") else 1
        exponent = int(match.group("exp")) if match.group("exp") is not None else 1
        if not 1 <= index <= strands - 1:
            raise StrandRangeError(
                f"generator s{index} out of range for {strands} strands", token.start()
            )
        step = BraidLetter(index, sign if exponent > 0 else -sign)
        letters.extend([step] * abs(exponent))
    return BraidWord(strands, tuple(letters))


def format_braid_word(word: BraidWord) -> str:
    return " ".join(
        f"s{letter.index}" if letter.sign > 0 else f"s{letter.index}^-1" for letter in word.letters
    )


def parse_free_word(text: str, strands: int) -> FreeWord:
    """Parse ``x1 x2^-1 x3`` style text (``x1^2`` expands to two letters) and reduce it."""

    letters: List[Letter] = []
    for token in _TOKEN.finditer(text or ""):
        match = _FREE_ITEM.fullmatch(token.group())
        if match is None:
            raise BraidSyntaxError(f"unexpected free-group item {token.group()!r}", token.start())
        index = int(match.group("n"))
        if not 1 <= index <= strands:
            raise StrandRangeError(f"generator x{index} out of range for F_{strands}", token.start())
        exponent = int(match.group("exp")) if match.group("exp") is not None else 1
        step = (index, 1 if exponent > 0 else -1)
        letters.extend([step] * abs(exponent))
    return free_reduce(FreeWord(strands, tuple(letters)))


def format_free_word(word: FreeWord) -> str:
    if not word.letters:
        return "1"
    return " ".join(f"x{i}" if e > 0 else f"x{i}^-1" for i, e in word.letters)


# ---------- Free group arithmetic ----------

def _reduce_letters(letters: Iterable[Letter]) -> Tuple[Letter, ...]:
    stack: List[Letter] = []
    for index, exponent in letters:
        if stack and stack[-1][0] == index and stack[-1][1] == -exponent:
            stack.pop()
        else:
            stack.append((index, exponent))
    return tuple(stack)


def free_reduce(word: FreeWord) -> FreeWord:
    return FreeWord(word.strands, _reduce_letters(word.letters))


def apply_to_word(phi: ArtinAutomorphism, w: FreeWord) -> FreeWord:
    """Substitute the generator images of ``phi`` into ``w`` and freely reduce."""

    if phi.strands != w.strands:
        raise StrandMismatchError(
            f"automorphism of F_{phi.strands} applied to a word in F_{w.strands}"
        )
    inverses = [image.inverse() for image in phi.images]
    stack: List[Letter] = []
    for index, exponent in w.letters:
        source = phi.images[index - 1] if exponent > 0 else inverses[index - 1]
        for letter in source.letters:
            if stack and stack[-1][0] == letter[0] and stack[-1][1] == -letter[1]:
                stack.pop()
            else:
                stack.append(letter)
    return FreeWord(phi.strands, tuple(stack))


def _word(strands: int, letters: Sequence[Letter]) -> FreeWord:
    return FreeWord(strands, tuple(letters))


def generator_automorphism(k: int, sign: int, strands: int) -> ArtinAutomorphism:
    """Artin automorphism of σ_k (sign=+1) or σ_k^-1 (sign=-1)."""

    if not 1 <= k <= strands - 1:
        raise StrandRangeError(f"generator s{k} out of range for {strands} strands")
    if sign not in (1, -1):
        raise FloerInputError(f"generator sign must be +1 or -1, got {sign}")
    images = list(ArtinAutomorphism.identity(strands).images)
    if sign > 0:
        images[k - 1] = _word(strands, [(k, 1), (k + 1, 1), (k, -1)])
        images[k] = _word(strands, [(k, 1)])
    else:
        # σ_k(x_{k+1}) = x_k gives σ_k^-1(x_k) = x_{k+1}; applying σ_k^-1 to
        # σ_k(x_k) = x_k x_{k+1} x_k^-1 then forces x_{k+1} ↦ x_{k+1}^-1 x_k x_{k+1}.
        images[k - 1] = _word(strands, [(k + 1, 1)])
        images[k] = _word(strands, [(k + 1, -1), (k, 1), (k + 1, 1)])
    return ArtinAutomorphism(strands, tuple(images))


def braid_automorphism(
    braid: BraidWord,
    order: CompositionOrder = CompositionOrder.RIGHTMOST_FIRST,
) -> ArtinAutomorphism:
    """Fold the generator automorphisms of ``braid`` in the requested application order.

    Rightmost-first reads ``s1 s2^-1`` as s1(s2^-1(x)); leftmost-first applies s1 first.
    """

    order = CompositionOrder(order)
    result = ArtinAutomorphism.identity(braid.strands)
    for letter in braid.letters:
        step = generator_automorphism(letter.index, letter.sign, braid.strands)
        if order is CompositionOrder.RIGHTMOST_FIRST:
            result = result.compose(step)
        else:
            result = step.compose(result)
    return result


# ---------- Braid bookkeeping ----------

def braid_permutation(braid: BraidWord) -> Permutation:
    """Track where each strand ends up; σ_k swaps the strands at positions k and k+1."""

    position = list(range(1, braid.strands + 1))
    for letter in braid.letters:
        k = letter.index
        for strand, where in enumerate(position):
            if where == k:
                position[strand] = k + 1
            elif where == k + 1:
                position[strand] = k
    return Permutation(braid.strands, tuple(position))


def closure_components(braid: BraidWord) -> int:
    return len(braid_permutation(braid).cycles())


def closure_is_knot(braid: BraidWord) -> bool:
    return braid_permutation(braid).is_single_cycle()


def exponent_sum(braid: BraidWord) -> int:
    return sum(letter.sign for letter in braid.letters)
