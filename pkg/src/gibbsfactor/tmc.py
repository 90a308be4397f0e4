"""Finite-alphabet topological Markov chains: alphabets, words, periodic points.

Everything downstream (measures, factor maps, potentials) sits on top of a
0/1 incidence matrix over a finite ordered alphabet.  Symbols are handled as
integer indices internally; labels only appear at the API boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import AdmissibilityError, ModelError


class Alphabet:
    """Ordered finite alphabet with distinct hashable labels."""

    def __init__(self, labels: Sequence[str]):
        labels = [str(x) for x in labels]
        if len(labels) == 0:
            raise ModelError("alphabet must not be empty")
        if len(set(labels)) != len(labels):
            raise ModelError("alphabet labels must be distinct")
        self.labels = tuple(labels)
        self._index = {lab: i for i, lab in enumerate(labels)}

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise ModelError(f"unknown symbol label {label!r}") from None

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def __repr__(self) -> str:
        return f"Alphabet({list(self.labels)!r})"


@dataclass(frozen=True)
class PrimitivityResult:
    primitive: bool
    exponent: Optional[int]
    # zero pattern (boolean array, True where the entry is still zero) of the
    # power at the search bound, for non-primitive matrices
    failure_pattern: Optional[np.ndarray]


def pattern_primitivity(mat: np.ndarray) -> PrimitivityResult:
    """Least m with (pattern of mat)^m strictly positive, searched up to the
    Wielandt bound (size-1)^2 + 1.

    Works on the zero pattern only, so it applies to any square nonnegative
    matrix.
    """
    pattern = np.asarray(mat) != 0
    size = pattern.shape[0]
    if pattern.shape != (size, size):
        raise ModelError("primitivity check needs a square matrix")
    bound = (size - 1) ** 2 + 1
    power = pattern.copy()
    for m in range(1, bound + 1):
        if power.all():
            return PrimitivityResult(True, m, None)
        power = (power.astype(np.uint8) @ pattern.astype(np.uint8)) > 0
    return PrimitivityResult(False, None, ~power)


class Tmc:
    """Topological Markov chain: alphabet plus a 0/1 incidence matrix.

    Every row and every column must contain at least one 1, so every symbol
    extends forward and backward.
    """

    def __init__(self, alphabet: Alphabet, incidence, primitivity_exponent: Optional[int] = None):
        incidence = np.asarray(incidence)
        n = alphabet.size
        if incidence.shape != (n, n):
            raise ModelError(
                f"incidence shape {incidence.shape} does not match alphabet size {n}"
            )
        if not np.isin(incidence, (0, 1)).all():
            raise ModelError("incidence entries must be 0 or 1")
        incidence = incidence.astype(np.int8)
        if (incidence.sum(axis=1) == 0).any():
            row = int(np.argmax(incidence.sum(axis=1) == 0))
            raise ModelError(f"symbol {alphabet.labels[row]!r} has no successor")
        if (incidence.sum(axis=0) == 0).any():
            col = int(np.argmax(incidence.sum(axis=0) == 0))
            raise ModelError(f"symbol {alphabet.labels[col]!r} has no predecessor")
        self.alphabet = alphabet
        self.incidence = incidence
        self.primitivity_exponent = primitivity_exponent

    @property
    def size(self) -> int:
        return self.alphabet.size

    def allows(self, a: int, b: int) -> bool:
        return self.incidence[a, b] == 1

    def successors(self, a: int) -> tuple[int, ...]:
        return tuple(int(j) for j in np.flatnonzero(self.incidence[a]))

    def word(self, labels: Sequence[str]) -> "Word":
        return Word(self, tuple(self.alphabet.index(x) for x in labels))

    def __repr__(self) -> str:
        return f"Tmc(size={self.size})"


def check_primitivity(tmc: Tmc) -> PrimitivityResult:
    """Primitivity of the chain's incidence matrix; caches the exponent."""
    result = pattern_primitivity(tmc.incidence)
    if result.primitive:
        tmc.primitivity_exponent = result.exponent
    return result


class Word:
    """Admissible finite word over a chain, stored as symbol indices."""

    __slots__ = ("tmc", "symbols")

    def __init__(self, tmc: Tmc, symbols: Sequence[int]):
        symbols = tuple(int(s) for s in symbols)
        if len(symbols) == 0:
            raise AdmissibilityError("words must be nonempty")
        n = tmc.size
        for s in symbols:
            if not 0 <= s < n:
                raise AdmissibilityError(f"symbol index {s} out of range")
        for a, b in zip(symbols, symbols[1:]):
            if not tmc.allows(a, b):
                raise AdmissibilityError(
                    f"transition {tmc.alphabet.labels[a]!r} -> "
                    f"{tmc.alphabet.labels[b]!r} is not allowed"
                )
        self.tmc = tmc
        self.symbols = symbols

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.tmc.alphabet.labels[s] for s in self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Word)
            and self.tmc is other.tmc
            and self.symbols == other.symbols
        )

    def __hash__(self) -> int:
        return hash((id(self.tmc), self.symbols))

    def __repr__(self) -> str:
        return "Word(" + "".join(self.labels) + ")"


class PeriodicPoint:
    """Periodic point given by one period of symbols.

    The period word must be cyclically admissible and primitive (not a power
    of a shorter word).  Rotations are distinct points; positivity checks on
    one-period matrix products are phase dependent, so each rotation matters.
    """

    __slots__ = ("tmc", "symbols")

    def __init__(self, tmc: Tmc, symbols: Sequence[int]):
        word = Word(tmc, symbols)
        symbols = word.symbols
        if not tmc.allows(symbols[-1], symbols[0]):
            raise AdmissibilityError("period word does not close up cyclically")
        p = len(symbols)
        for q in range(1, p):
            if p % q == 0 and symbols == symbols[q:] + symbols[:q]:
                raise AdmissibilityError("period word is a power of a shorter word")
        self.tmc = tmc
        self.symbols = symbols

    @property
    def period(self) -> int:
        return len(self.symbols)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.tmc.alphabet.labels[s] for s in self.symbols)

    def symbol_at(self, i: int) -> int:
        return self.symbols[i % len(self.symbols)]

    def canonical_rotation(self) -> tuple[int, ...]:
        """Lexicographically least rotation; identifies the orbit."""
        p = len(self.symbols)
        return min(self.symbols[k:] + self.symbols[:k] for k in range(p))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PeriodicPoint)
            and self.tmc is other.tmc
            and self.symbols == other.symbols
        )

    def __hash__(self) -> int:
        return hash((id(self.tmc), self.symbols, "periodic"))

    def __repr__(self) -> str:
        return "PeriodicPoint((" + "".join(self.labels) + ")^inf)"


def enumerate_words(tmc: Tmc, n: int) -> list[Word]:
    """All admissible words of length n, in lexicographic order of indices.

    The count always equals 1^T M^(n-1) 1.
    """
    if n < 1:
        raise AdmissibilityError("word length must be >= 1")
    words: list[Word] = []
    out: list[int] = []

    def extend():
        if len(out) == n:
            w = Word.__new__(Word)
            w.tmc = tmc
            w.symbols = tuple(out)
            words.append(w)
            return
        if not out:
            candidates = range(tmc.size)
        else:
            candidates = tmc.successors(out[-1])
        for s in candidates:
            out.append(s)
            extend()
            out.pop()

    extend()
    return words


def enumerate_periodic(tmc: Tmc, p_max: int) -> list[PeriodicPoint]:
    """All periodic points of period <= p_max.

    Every cyclically admissible primitive word contributes one point per
    rotation; rotations are listed as distinct points.
    """
    if p_max < 1:
        raise AdmissibilityError("maximal period must be >= 1")
    points: list[PeriodicPoint] = []
    for p in range(1, p_max + 1):
        for word in enumerate_words(tmc, p):
            symbols = word.symbols
            if not tmc.allows(symbols[-1], symbols[0]):
                continue
            if any(
                p % q == 0 and symbols == symbols[q:] + symbols[:q]
                for q in range(1, p)
            ):
                continue
            pt = PeriodicPoint.__new__(PeriodicPoint)
            pt.tmc = tmc
            pt.symbols = symbols
            points.append(pt)
    return points


def sequence_metric(prefix_a: Sequence, prefix_b: Sequence, factor_size: int, *, equal: bool = False) -> float:
    """Distance exp(-j / (2 (#B + 1))) where j is the first disagreement.

    ``equal=True`` declares the two sequences equal and returns 0.0.  If the
    prefixes agree on their whole common length without that declaration the
    first disagreement cannot be located and an error is raised.
    """
    if factor_size < 2:
        raise ModelError("factor alphabet size must be >= 2")
    if equal:
        return 0.0
    common = min(len(prefix_a), len(prefix_b))
    for j in range(common):
        if prefix_a[j] != prefix_b[j]:
            return math.exp(-j / (2.0 * (factor_size + 1)))
    raise AdmissibilityError(
        "prefixes agree on their common length; distance undetermined "
        "(pass equal=True for equal sequences or supply longer prefixes)"
    )
