"""Braid words, homogeneity, and the classical invariants of their closures.

A braid word on b strands is a sequence of generator letters sigma_j^{+-1},
1 <= j <= b-1, read left to right as crossings from bottom to top.  The word
is *homogeneous* when each generator index occurs with a single sign and
every index occurs at least once; those are the inputs the fibration
construction accepts.

The invariants computed here (Euler characteristic, component count, genus)
come from the Seifert algorithm on the closure diagram and from strand
tracking.  They are deliberately independent of the fibration machinery so
they can serve as oracles for it.
"""

from __future__ import annotations

from dataclasses import dataclass


class BraidError(ValueError):
    """Base class for braid input errors."""


class MalformedToken(BraidError):
    """A word token is not a nonzero signed integer."""


class IndexOutOfRange(BraidError):
    """A letter index exceeds the declared strand count."""


class MixedSign(BraidError):
    """Some generator occurs with both signs."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"generator {index} occurs with both signs")


class MissingGenerator(BraidError):
    """Some generator in 1..b-1 never occurs."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"generator {index} never occurs")


class NotHomogeneous(BraidError):
    """The word is not homogeneous (wraps MixedSign/MissingGenerator)."""


@dataclass(frozen=True)
class BraidWord:
    """A braid word: strand count plus signed generator letters.

    ``letters`` holds pairs ``(j, sign)`` with ``1 <= j <= strands - 1`` and
    ``sign`` in ``{+1, -1}``.
    """

    strands: int
    letters: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.strands < 1:
            raise BraidError(f"strand count must be >= 1, got {self.strands}")
        for j, sign in self.letters:
            if sign not in (1, -1):
                raise BraidError(f"letter sign must be +-1, got {sign}")
            if not 1 <= j <= self.strands - 1:
                raise IndexOutOfRange(
                    f"letter index {j} out of range for {self.strands} strands"
                )

    @property
    def length(self) -> int:
        return len(self.letters)

    def format(self) -> str:
        """Canonical text form: signed decimal integers, single spaces."""
        return " ".join(str(j * sign) for j, sign in self.letters)


@dataclass(frozen=True)
class HomogeneitySignature:
    """The sign s_j carried by each generator of a homogeneous word."""

    signs: tuple[int, ...]

    def sign(self, j: int) -> int:
        return self.signs[j - 1]


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1, .., n}, stored as the tuple of images."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise BraidError(f"not a permutation of 1..{n}: {self.images}")

    @property
    def size(self) -> int:
        return len(self.images)

    def apply(self, i: int) -> int:
        return self.images[i - 1]

    def cycles(self) -> list[tuple[int, ...]]:
        """Cycle decomposition, each cycle starting at its smallest element."""
        seen: set[int] = set()
        out = []
        for start in range(1, self.size + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            k = self.apply(start)
            while k != start:
                cyc.append(k)
                seen.add(k)
                k = self.apply(k)
            out.append(tuple(cyc))
        return out

    def cycle_count(self) -> int:
        return len(self.cycles())


@dataclass(frozen=True)
class ClassicalInvariants:
    """Seifert-algorithm invariants of the braid closure.

    chi is the Euler characteristic of the Bennequin surface (b disks and c
    bands), components the number of link components, genus the surface
    genus, defined since the surface is connected for homogeneous words.
    """

    chi: int
    components: int
    genus: int


def parse_braid_word(text: str, strands: int | None = None) -> BraidWord:
    """Parse whitespace-separated signed integers into a BraidWord.

    Token ``k`` stands for sigma_{|k|} with the sign of k.  When ``strands``
    is omitted it is inferred as max|k| + 1 (1 for the empty word).
    """
    letters: list[tuple[int, int]] = []
    for tok in text.split():
        try:
            k = int(tok)
        except ValueError:
            raise MalformedToken(f"not an integer token: {tok!r}") from None
        if k == 0:
            raise MalformedToken("zero is not a valid letter")
        letters.append((abs(k), 1 if k > 0 else -1))
    if strands is None:
        strands = max((j for j, _ in letters), default=0) + 1
    for j, _ in letters:
        if j > strands - 1:
            raise IndexOutOfRange(
                f"letter index {j} out of range for {strands} strands"
            )
    return BraidWord(strands, tuple(letters))


def homogeneity_signature(word: BraidWord) -> HomogeneitySignature:
    """Return (s_1, .., s_{b-1}), or raise MixedSign / MissingGenerator.

    The signature is empty for b = 1 (the vacuous homogeneous case).
    """
    signs: dict[int, int] = {}
    for j, sign in word.letters:
        prev = signs.setdefault(j, sign)
        if prev != sign:
            raise MixedSign(j)
    for j in range(1, word.strands):
        if j not in signs:
            raise MissingGenerator(j)
    return HomogeneitySignature(tuple(signs[j] for j in range(1, word.strands)))


def is_homogeneous(word: BraidWord) -> bool:
    try:
        homogeneity_signature(word)
    except BraidError:
        return False
    return True


def underlying_permutation(word: BraidWord) -> Permutation:
    """Product of the transpositions (j, j+1), applied in word order."""
    images = list(range(1, word.strands + 1))
    for j, _ in word.letters:
        images[j - 1], images[j] = images[j], images[j - 1]
    return Permutation(tuple(images))


def first_occurrences(word: BraidWord) -> tuple[bool, ...]:
    """Flag each letter as the first occurrence of its generator."""
    seen: set[int] = set()
    flags = []
    for j, _ in word.letters:
        flags.append(j not in seen)
        seen.add(j)
    return tuple(flags)


def classical_invariants(word: BraidWord) -> ClassicalInvariants:
    """Seifert-algorithm invariants: chi = b - c, components, genus.

    Requires homogeneity (raises NotHomogeneous otherwise): that is what
    guarantees the Bennequin surface is connected, so genus is defined.
    """
    try:
        homogeneity_signature(word)
    except BraidError as exc:
        raise NotHomogeneous(str(exc)) from exc
    b = word.strands
    c = word.length
    chi = b - c
    components = underlying_permutation(word).cycle_count()
    genus2 = 2 - components - chi
    assert genus2 % 2 == 0 and genus2 >= 0
    return ClassicalInvariants(chi=chi, components=components, genus=genus2 // 2)
