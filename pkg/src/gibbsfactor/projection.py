"""One-block factor maps and the induced measure on the image shift.

A projection collapses the source alphabet onto a strictly smaller target
alphabet.  Pushing a stationary Markov measure through it produces a hidden
Markov measure: cylinder weights are computed by sandwiching products of
weighted fiber matrices between a row of ones and the marginal vector of the
last symbol.  The two hypotheses checked here (row-allowability of every
fiber block, and positivity of one-period products over short cycles) are
what later certify that this induced measure admits a regular potential.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import AdmissibilityError, ModelError
from .markov import MarkovModel, cylinder_measure, derive_potential
from .projective import SimplexPoint
from .tmc import (
    Alphabet,
    PeriodicPoint,
    Tmc,
    Word,
    enumerate_periodic,
    pattern_primitivity,
)


class Projection:
    """Onto map from source symbols to a strictly smaller target alphabet."""

    def __init__(self, source: Alphabet, target: Alphabet, mapping: Sequence[int]):
        mapping = tuple(int(m) for m in mapping)
        if len(mapping) != source.size:
            raise ModelError("projection must assign every source symbol")
        if any(not 0 <= m < target.size for m in mapping):
            raise ModelError("projection maps outside the target alphabet")
        if set(mapping) != set(range(target.size)):
            raise ModelError("projection must be onto the target alphabet")
        if not source.size > target.size:
            raise ModelError("source alphabet must be strictly larger than the target")
        if not target.size > 1:
            raise ModelError("target alphabet must have at least two symbols")
        self.source = source
        self.target = target
        self.mapping = mapping
        fibers: list[list[int]] = [[] for _ in range(target.size)]
        for a, b in enumerate(mapping):
            fibers[b].append(a)
        self.fibers = tuple(tuple(f) for f in fibers)

    @classmethod
    def from_labels(cls, source: Alphabet, label_map: dict) -> "Projection":
        """Build from {source label: target label}; target ordered by first use."""
        target_labels: list[str] = []
        for lab in source.labels:
            if lab not in label_map:
                raise ModelError(f"projection missing source symbol {lab!r}")
            t = str(label_map[lab])
            if t not in target_labels:
                target_labels.append(t)
        target = Alphabet(target_labels)
        mapping = [target.index(str(label_map[lab])) for lab in source.labels]
        return cls(source, target, mapping)

    def __repr__(self) -> str:
        pairs = ", ".join(
            f"{s}->{self.target.labels[m]}"
            for s, m in zip(self.source.labels, self.mapping)
        )
        return f"Projection({pairs})"


class FactorSystem:
    """Everything derived from (model, projection) that later stages consume.

    fiber_incidence[(b, b')] is the 0/1 block of the source incidence over
    fiber(b) x fiber(b'); fiber_weight[(b, b')] is the same block with each
    allowed entry replaced by exp(phi) = mu[a] P(a, a') / mu[a'].  Both exist
    exactly for the pairs allowed by the induced incidence.  fiber_marginal[b]
    restricts the stationary vector to fiber(b).
    """

    def __init__(self, model: MarkovModel, projection: Projection):
        if projection.source != model.tmc.alphabet:
            raise ModelError("projection source alphabet differs from the model's")
        self.model = model
        self.projection = projection
        phi = derive_potential(model).values
        m = model.tmc.incidence
        nb = projection.target.size
        induced = np.zeros((nb, nb), dtype=np.int8)
        self.fiber_incidence: dict[tuple[int, int], np.ndarray] = {}
        self.fiber_weight: dict[tuple[int, int], np.ndarray] = {}
        for b in range(nb):
            for b2 in range(nb):
                block = m[np.ix_(projection.fibers[b], projection.fibers[b2])]
                if block.any():
                    induced[b, b2] = 1
                    weight = np.where(
                        block == 1,
                        np.exp(phi[np.ix_(projection.fibers[b], projection.fibers[b2])]),
                        0.0,
                    )
                    self.fiber_incidence[(b, b2)] = block
                    self.fiber_weight[(b, b2)] = weight
        self.factor_tmc = Tmc(projection.target, induced)
        self.fiber_marginal = tuple(
            model.stationary[list(projection.fibers[b])] for b in range(nb)
        )

    @property
    def target_size(self) -> int:
        return self.projection.target.size

    def weight(self, b: int, b2: int) -> np.ndarray:
        try:
            return self.fiber_weight[(b, b2)]
        except KeyError:
            raise AdmissibilityError(
                f"factor transition {self.projection.target.labels[b]!r} -> "
                f"{self.projection.target.labels[b2]!r} is not allowed"
            ) from None

    def marginal_hat(self, b: int) -> SimplexPoint:
        return SimplexPoint(self.fiber_marginal[b], fiber=b)

    def factor_word(self, labels: Sequence[str]) -> Word:
        return self.factor_tmc.word(labels)

    def word_product(self, symbols: Sequence[int]) -> np.ndarray:
        """Product of fiber weight matrices along a factor word (length >= 2)."""
        out = self.fiber_weight[(symbols[0], symbols[1])]
        for a, b in zip(symbols[1:], symbols[2:]):
            out = out @ self.fiber_weight[(a, b)]
        return out


def build_factor_system(model: MarkovModel, projection: Projection) -> FactorSystem:
    return FactorSystem(model, projection)


@dataclass(frozen=True)
class H1Report:
    passed: bool
    # (b label, b' label, offending source row label)
    failures: tuple[tuple[str, str, str], ...]


def check_h1(fs: FactorSystem) -> H1Report:
    """Row-allowability of every fiber block allowed by the induced incidence."""
    failures = []
    target = fs.projection.target.labels
    source = fs.projection.source.labels
    for (b, b2), block in sorted(fs.fiber_incidence.items()):
        rows_without = np.flatnonzero(~(block == 1).any(axis=1))
        for r in rows_without:
            failures.append((target[b], target[b2], source[fs.projection.fibers[b][r]]))
    return H1Report(passed=not failures, failures=tuple(failures))


@dataclass(frozen=True)
class H2Witness:
    point: PeriodicPoint
    product: np.ndarray
    zero_pattern: np.ndarray
    positive: bool


@dataclass(frozen=True)
class H2Report:
    # orbit-level verdict: every cycle of period <= target size has at least
    # one rotation whose one-period product is strictly positive
    passed: bool
    # stricter flag: every rotation's own product is positive (positivity of
    # these products is genuinely phase dependent)
    pointwise: bool
    witnesses: tuple[H2Witness, ...]
    # canonical rotations of orbits with no positive rotation at all
    orbit_failures: tuple[tuple[str, ...], ...]
    warnings: tuple[str, ...] = field(default=())


def one_period_product(fs: FactorSystem, point: PeriodicPoint) -> np.ndarray:
    """Product of fiber weight matrices once around the period, cyclically."""
    symbols = point.symbols + (point.symbols[0],)
    return fs.word_product(symbols)


def check_h2(fs: FactorSystem) -> H2Report:
    """Positivity of one-period fiber products over all short periodic points.

    Checks every periodic point of the induced chain with period up to the
    target alphabet size.  The verdict is per orbit (some rotation positive);
    per-rotation products and zero patterns are all reported because later
    certification needs to know exactly which phases are usable.
    """
    warnings = []
    prim = pattern_primitivity(fs.factor_tmc.incidence)
    if not prim.primitive:
        warnings.append("induced incidence is not primitive")
    witnesses = []
    orbits: dict[tuple[int, ...], bool] = {}
    for point in enumerate_periodic(fs.factor_tmc, fs.target_size):
        product = one_period_product(fs, point)
        positive = bool((product > 0).all())
        witnesses.append(
            H2Witness(
                point=point,
                product=product,
                zero_pattern=product == 0,
                positive=positive,
            )
        )
        key = point.canonical_rotation()
        orbits[key] = orbits.get(key, False) or positive
    labels = fs.projection.target.labels
    orbit_failures = tuple(
        tuple(labels[s] for s in key) for key, ok in sorted(orbits.items()) if not ok
    )
    return H2Report(
        passed=not orbit_failures,
        pointwise=all(w.positive for w in witnesses),
        witnesses=tuple(witnesses),
        orbit_failures=orbit_failures,
        warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class TopologicalMarkovVerdict:
    status: str  # markov_certified | markov_refuted | undecided_at_depth
    witness: Optional[Word]
    depth: int


def check_topological_markov(fs: FactorSystem, depth: int = 12) -> TopologicalMarkovVerdict:
    """Is the image subshift exactly the chain of the induced incidence?

    Row-allowable fiber blocks force every finite word of the induced chain
    to lift, which settles the question.  Otherwise search words up to the
    given length for one with empty preimage (tracked by a reachable-fiber
    set); finding one refutes equality, exhausting the depth leaves it open.
    """
    if check_h1(fs).passed:
        return TopologicalMarkovVerdict("markov_certified", None, depth)
    m = fs.model.tmc.incidence
    fibers = fs.projection.fibers
    succ = {b: fs.factor_tmc.successors(b) for b in range(fs.target_size)}

    def search(prefix: list[int], reach: tuple[int, ...]) -> Optional[tuple[int, ...]]:
        if len(prefix) >= depth:
            return None
        for b2 in succ[prefix[-1]]:
            nxt = tuple(
                a2 for a2 in fibers[b2] if any(m[a, a2] for a in reach)
            )
            if not nxt:
                return tuple(prefix) + (b2,)
            hit = search(prefix + [b2], nxt)
            if hit is not None:
                return hit
        return None

    for b in range(fs.target_size):
        hit = search([b], fibers[b])
        if hit is not None:
            witness = Word(fs.factor_tmc, hit)
            return TopologicalMarkovVerdict("markov_refuted", witness, depth)
    return TopologicalMarkovVerdict("undecided_at_depth", None, depth)


def _as_factor_symbols(fs: FactorSystem, word) -> tuple[int, ...]:
    if isinstance(word, Word):
        if word.tmc is not fs.factor_tmc:
            raise AdmissibilityError("word does not belong to this factor chain")
        return word.symbols
    return Word(fs.factor_tmc, word).symbols


def log_nu_cylinder(fs: FactorSystem, word) -> float:
    """log nu[w] via backward vector accumulation with l1 rescaling.

    Each step multiplies by one fiber weight matrix and renormalizes, keeping
    the running vector on the simplex; the scale is accumulated in log space.
    Returns -inf when the word has no preimage (possible only when some fiber
    block has an all-zero row).
    """
    symbols = _as_factor_symbols(fs, word)
    v = fs.fiber_marginal[symbols[-1]]
    total = math.log(v.sum())
    v = v / v.sum()
    for i in range(len(symbols) - 2, -1, -1):
        v = fs.weight(symbols[i], symbols[i + 1]) @ v
        scale = v.sum()
        if scale <= 0.0:
            return -math.inf
        total += math.log(scale)
        v = v / scale
    return total


def nu_cylinder(fs: FactorSystem, word) -> float:
    """Induced measure of the cylinder of an admissible factor word."""
    return float(math.exp(log_nu_cylinder(fs, word)))


def preimage_words(fs: FactorSystem, word) -> list[Word]:
    """All admissible source words projecting letter-by-letter onto the word."""
    symbols = _as_factor_symbols(fs, word)
    m = fs.model.tmc.incidence
    fibers = fs.projection.fibers
    found: list[Word] = []
    path: list[int] = []

    def extend(i: int):
        if i == len(symbols):
            found.append(Word(fs.model.tmc, tuple(path)))
            return
        for a in fibers[symbols[i]]:
            if path and not m[path[-1], a]:
                continue
            path.append(a)
            extend(i + 1)
            path.pop()

    extend(0)
    return found


def nu_preimage_sum(fs: FactorSystem, word) -> float:
    """Induced measure by brute-force enumeration of preimage cylinders.

    Independent oracle for nu_cylinder: sums exact source cylinder measures
    over every preimage word, with compensated summation.
    """
    return math.fsum(
        cylinder_measure(fs.model, u) for u in preimage_words(fs, word)
    )
