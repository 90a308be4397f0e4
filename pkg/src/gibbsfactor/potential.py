"""Induced potential of a factored Markov measure, with certified errors.

The potential at a point b of the image shift is the limit of
psi_n(b) = log(nu[b(0..n)] / nu[b(1..n)]).  Equivalently, with x_(1:n) the
normalized backward product of fiber weight matrices applied to the marginal
of b(n), psi_n(b) = log(1^T W_{b(0)b(1)} x_(1:n)).  Positivity of repeated
blocks makes the backward maps Birkhoff contractions, which yields explicit
geometric error radii.  Everything here is phase aware: one-period products
can be positive at one rotation of a cycle and degenerate at another, so no
step assumes otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    AdmissibilityError,
    CertificationError,
    EvaluationRefused,
    ModelError,
)
from .projection import FactorSystem, log_nu_cylinder
from .projective import (
    SimplexPoint,
    apply_normalized,
    contraction_coefficient,
    is_row_allowable,
    projective_distance,
)
from .tmc import Word, enumerate_words, pattern_primitivity

DEFAULT_TARGET_ERROR = 1e-10
# additive allowance for accumulated floating-point error in iterative values
FLOAT_NOISE_FLOOR = 1e-13


class PointSpec:
    """Eventually periodic point: finite preperiod followed by a cycled period.

    Stored in canonical form: the period is reduced to its primitive root and
    any preperiod suffix that merely repeats the tail is absorbed into a
    rotation, so equal points compare equal.
    """

    __slots__ = ("preperiod", "period")

    def __init__(self, fs: FactorSystem, preperiod: Sequence[int], period: Sequence[int]):
        preperiod = tuple(int(s) for s in preperiod)
        period = tuple(int(s) for s in period)
        if not period:
            raise AdmissibilityError("period must be nonempty")
        tmc = fs.factor_tmc
        Word(tmc, period)
        if not tmc.allows(period[-1], period[0]):
            raise AdmissibilityError("period does not close up cyclically")
        if preperiod:
            Word(tmc, preperiod)
            if not tmc.allows(preperiod[-1], period[0]):
                raise AdmissibilityError("preperiod does not connect to the period")
        # canonical form: primitive period root, then absorb repeating suffix
        p = len(period)
        for q in range(1, p):
            if p % q == 0 and period == period[q:] + period[:q]:
                period = period[:q]
                break
        while preperiod and preperiod[-1] == period[-1]:
            preperiod = preperiod[:-1]
            period = period[-1:] + period[:-1]
        self.preperiod = preperiod
        self.period = period

    @classmethod
    def from_labels(cls, fs: FactorSystem, preperiod: Sequence[str], period: Sequence[str]) -> "PointSpec":
        alph = fs.projection.target
        return cls(
            fs,
            tuple(alph.index(x) for x in preperiod),
            tuple(alph.index(x) for x in period),
        )

    def symbol_at(self, i: int) -> int:
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def symbols(self, n: int) -> tuple[int, ...]:
        """First n symbols of the point."""
        return tuple(self.symbol_at(i) for i in range(n))

    def shifted(self, fs: FactorSystem, j: int = 1) -> "PointSpec":
        """The point with the first j symbols dropped."""
        if j < 0:
            raise AdmissibilityError("shift must be nonnegative")
        pre = self.preperiod
        per = self.period
        drop = min(j, len(pre))
        pre = pre[drop:]
        j -= drop
        if j:
            r = j % len(per)
            per = per[r:] + per[:r]
        return PointSpec(fs, pre, per)

    def key(self) -> tuple:
        return (self.preperiod, self.period)

    def __eq__(self, other) -> bool:
        return isinstance(other, PointSpec) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        pre = "".join(str(s) for s in self.preperiod)
        per = "".join(str(s) for s in self.period)
        return f"PointSpec({pre!r} + ({per!r})^inf)"


@dataclass(frozen=True)
class PotentialEvaluation:
    """Outcome of a potential evaluation at one point.

    mode is one of "certified" (radius from uniform constants), "adaptive"
    (radius from the point's own tail contraction; certified=False when no
    strictly positive tail window exists) or "diverged" (no value; at least
    two subsequence cluster values reported).
    """

    value: Optional[float]
    error_radius: float
    terms_used: int
    mode: str
    certified: bool
    clusters: tuple[float, ...] = ()
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class UniformConstants:
    """Global certification constants of a factor system.

    tau is the worst Birkhoff coefficient over strictly positive repeated
    blocks, window the smallest length W such that every admissible W-word
    contains such a block, gap = 2W the bound on distances between usable
    block ends, theta = tau**(1/gap) the per-symbol decay, c1 = tau**-3,
    d_const the worst projective distance between a fiber marginal and a
    short-block image, c_total = 2 d c1 / (1-theta) the variation constant
    and k_gibbs = d c1 / ((1-tau)(1-theta)) the Gibbs-ratio constant.
    """

    tau: float
    theta: float
    c1: float
    d_const: float
    c_total: float
    k_gibbs: float
    window: int
    gap: int

    @property
    def eq_radius_constant(self) -> float:
        """Prefactor of the certified radius (d_const c1 / (1 - tau))."""
        return self.d_const * self.c1 / (1.0 - self.tau)

    @property
    def holder_exponent(self) -> float:
        """Exponent with respect to the exp(-j/(2(#B+1))) sequence metric.

        Equals log(1/tau) when certification succeeded at the pigeonhole
        window W = #B + 1; a larger window scales it by (#B+1)/W.
        """
        # gap = 2 W and the metric scale is 2 (#B_plus_1); see uniform_constants
        return math.log(1.0 / self.tau) * (self._metric_scale / self.gap)

    # filled by uniform_constants: 2 (#B + 1), the metric normalization
    _metric_scale: int = 0


@dataclass(frozen=True)
class PerronData:
    """Dominant eigendata of a primitive nonnegative matrix.

    right is l1-normalized (and equals d_hat), left is scaled so that
    left . right = 1.  residual is the larger of the two relative
    eigen-equation residuals; second_modulus estimates |lambda_2| by
    deflated power iteration.
    """

    rho: float
    right: np.ndarray
    left: np.ndarray
    d_hat: np.ndarray
    second_modulus: float
    residual: float
    iterations: int


def _power_vector(matrix: np.ndarray, tol: float, max_iter: int) -> tuple[np.ndarray, float, int]:
    n = matrix.shape[0]
    v = np.full(n, 1.0 / n)
    rho = 1.0
    for k in range(1, max_iter + 1):
        w = matrix @ v
        rho = w.sum()
        if rho <= 0:
            raise ModelError("power iteration collapsed; matrix is not primitive")
        w = w / rho
        if np.abs(w - v).sum() <= tol:
            return w, rho, k
        v = w
    return v, rho, max_iter


def perron_data(matrix, tol: float = 1e-13, max_iter: int = 100000) -> PerronData:
    """Power iteration for the dominant eigenvalue pair of a primitive matrix."""
    t = np.asarray(matrix, dtype=float)
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise ModelError("Perron data needs a square matrix")
    if (t < 0).any():
        raise ModelError("Perron data needs a nonnegative matrix")
    if not pattern_primitivity(t).primitive:
        raise ModelError("Perron data needs a primitive matrix")
    right, rho_r, it_r = _power_vector(t, tol, max_iter)
    left, rho_l, it_l = _power_vector(t.T, tol, max_iter)
    rho = rho_r
    left = left / (left @ right)
    res_r = np.abs(t @ right - rho * right).sum() / (rho * right.sum())
    res_l = np.abs(left @ t - rho * left).sum() / (rho * np.abs(left).sum())
    # |lambda_2| from deflated power iteration, reporting only
    deflated = t - rho * np.outer(right, left)
    u = np.zeros(t.shape[0])
    u[0] = 1.0
    u = u - right * (left @ u)
    second = 0.0
    norm = np.abs(u).sum()
    if norm > 1e-14:
        u /= norm
        for _ in range(60):
            w = deflated @ u
            growth = np.abs(w).sum()
            if growth < 1e-250:
                second = 0.0
                break
            second = growth
            u = w / growth
    return PerronData(
        rho=rho,
        right=right,
        left=left,
        d_hat=right,
        second_modulus=second,
        residual=float(max(res_r, res_l)),
        iterations=max(it_r, it_l),
    )


def _check_point_rows(fs: FactorSystem, point: PointSpec) -> None:
    """Refuse evaluation when a step matrix along the point has a zero row."""
    distinct = len(point.preperiod) + len(point.period)
    for i in range(distinct):
        w = fs.weight(point.symbol_at(i), point.symbol_at(i + 1))
        ok, row = is_row_allowable(w)
        if not ok:
            labels = fs.projection.target.labels
            raise EvaluationRefused(
                f"step {labels[point.symbol_at(i)]}->{labels[point.symbol_at(i + 1)]} "
                f"at position {i} has an all-zero fiber row; potential undefined "
                "along this point",
                window=(i, i + 1),
            )


def _psi_backward(fs: FactorSystem, point: PointSpec, n: int) -> float:
    """psi_n via the normalized backward vector iteration (single n)."""
    x = fs.fiber_marginal[point.symbol_at(n)]
    x = x / x.sum()
    for i in range(n - 1, 0, -1):
        x = fs.weight(point.symbol_at(i), point.symbol_at(i + 1)) @ x
        x = x / x.sum()
    first = fs.weight(point.symbol_at(0), point.symbol_at(1))
    return float(np.log((first @ x).sum()))


def _psi_sequence(fs: FactorSystem, point: PointSpec, n_hi: int) -> np.ndarray:
    """psi_1 .. psi_n_hi via forward row accumulation with rescaling.

    Independent of the backward route; the two agree to rounding, which the
    tests use as a consistency check.
    """
    out = np.empty(n_hi)
    u = np.ones(len(fs.fiber_marginal[point.symbol_at(0)]))
    u = u @ fs.weight(point.symbol_at(0), point.symbol_at(1))
    u_log = math.log(u.sum())
    u = u / u.sum()
    w = np.ones(len(fs.fiber_marginal[point.symbol_at(1)]))
    w_log = 0.0
    for n in range(1, n_hi + 1):
        mu = fs.fiber_marginal[point.symbol_at(n)]
        out[n - 1] = (u_log + math.log(u @ mu)) - (w_log + math.log(w @ mu))
        if n < n_hi:
            step = fs.weight(point.symbol_at(n), point.symbol_at(n + 1))
            u = u @ step
            s = u.sum()
            u_log += math.log(s)
            u = u / s
            w = w @ step
            s = w.sum()
            w_log += math.log(s)
            w = w / s
    return out


def markov_approx(fs: FactorSystem, word) -> float:
    """Finite-range approximation log(nu[w] / nu[w(1:)]) for len(w) >= 2."""
    if isinstance(word, Word):
        symbols = word.symbols
    else:
        symbols = Word(fs.factor_tmc, word).symbols
    if len(symbols) < 2:
        raise AdmissibilityError("the approximation needs a word of length >= 2")
    return log_nu_cylinder(fs, symbols) - log_nu_cylinder(fs, symbols[1:])


def _window_product(fs: FactorSystem, point: PointSpec, start: int, length: int) -> np.ndarray:
    symbols = tuple(point.symbol_at(i) for i in range(start, start + length + 1))
    return fs.word_product(symbols)


def _cluster_values(values: Sequence[float], gap: float = 1e-6, spread: float = 1e-9) -> Optional[list[float]]:
    """Group values into clusters; None when the grouping is ambiguous."""
    vals = sorted(values)
    clusters: list[list[float]] = [[vals[0]]]
    for v in vals[1:]:
        if v - clusters[-1][-1] > gap:
            clusters.append([v])
        else:
            clusters[-1].append(v)
    if any(c[-1] - c[0] > spread for c in clusters):
        return None
    return [math.fsum(c) / len(c) for c in clusters]


def evaluate(
    fs: FactorSystem,
    point: PointSpec,
    target_error: float = DEFAULT_TARGET_ERROR,
    constants: Optional[UniformConstants] = None,
    n_max: int = 500000,
) -> PotentialEvaluation:
    """Potential at an eventually periodic point.

    With uniform constants the depth is chosen so the certified radius
    (d_const c1 / (1-tau)) theta^n falls below target_error.  Without them
    the point's own tail is used: a strictly positive window spanning whole
    periods gives an a-posteriori contraction bound; when no such window
    exists the value sequence is examined for stabilizing subsequences and
    either reported uncertified or declared divergent with its cluster
    values.
    """
    if target_error <= 0:
        raise ModelError("target error must be positive")
    _check_point_rows(fs, point)
    t0 = len(point.preperiod)
    q = len(point.period)

    if constants is not None:
        prefactor = constants.eq_radius_constant
        # below this depth the closed-form radius need not dominate the
        # window-counting bound W tau^(n/W - 2) d / (1 - tau); stay above it
        floor = constants.gap + 2
        if constants.window * constants.tau > 1.0:
            floor = max(
                floor,
                math.ceil(
                    2.0
                    * constants.window
                    * math.log(constants.window * constants.tau)
                    / math.log(1.0 / constants.tau)
                ),
            )
        n = max(2, t0 + 2, floor)
        if prefactor > target_error:
            n = max(
                n,
                math.ceil(
                    math.log(target_error / prefactor) / math.log(constants.theta)
                ),
            )
        n = min(n, n_max)
        value = _psi_backward(fs, point, n)
        return PotentialEvaluation(
            value=value,
            error_radius=prefactor * constants.theta**n,
            terms_used=n,
            mode="certified",
            certified=True,
        )

    # adaptive: look for a tail phase whose whole-period window becomes
    # strictly positive after pattern-primitivity many repetitions
    base = max(1, t0)
    anchor = None
    for r in range(q):
        one_period = _window_product(fs, point, base + r, q)
        prim = pattern_primitivity(one_period)
        if prim.primitive:
            anchor = (base + r, prim.exponent)
            break

    if anchor is not None:
        a0, m0 = anchor
        big_q = m0 * q
        window = _window_product(fs, point, a0, big_q)
        tau_q = contraction_coefficient(window).tau
        fiber = point.symbol_at(a0)
        mu_hat = fs.marginal_hat(fiber)
        image = apply_normalized(window, mu_hat, out_fiber=fiber)
        a_star = projective_distance(mu_hat, image)
        # radius after k whole windows past the anchor: tau_q^k a*/(1-tau_q)
        k = 0
        radius = a_star / (1.0 - tau_q) if a_star > 0 else 0.0
        while radius > target_error and (a0 + (k + 1) * big_q) <= n_max:
            k += 1
            radius = tau_q**k * a_star / (1.0 - tau_q)
        n = max(2, a0 + k * big_q)
        value = _psi_backward(fs, point, n)
        return PotentialEvaluation(
            value=value,
            error_radius=max(radius, FLOAT_NOISE_FLOOR),
            terms_used=n,
            mode="adaptive",
            certified=False,
            notes=(
                f"tail window of {big_q} steps is strictly positive "
                f"(contraction {tau_q:.6g})",
            ),
        )

    # no positive tail window: inspect the value sequence itself
    n_scan = max(150, t0 + 30 * q, 12 * q)
    n_scan = min(n_scan, n_max)
    values = _psi_sequence(fs, point, n_scan)
    samples = 5
    for m in [q * k for k in range(1, 7)]:
        if m * samples * 2 > n_scan - t0:
            break
        stable = True
        residue_values = []
        for r in range(m):
            sub = values[t0 + r :: m][-samples:]
            if len(sub) < samples or sub.max() - sub.min() > 1e-9:
                stable = False
                break
            residue_values.append(float(sub[-1]))
        if not stable:
            continue
        clusters = _cluster_values(residue_values)
        if clusters is None:
            continue
        if len(clusters) >= 2:
            return PotentialEvaluation(
                value=None,
                error_radius=math.inf,
                terms_used=n_scan,
                mode="diverged",
                certified=False,
                clusters=tuple(clusters),
                notes=(
                    f"subsequences mod {m} stabilize to {len(clusters)} "
                    "distinct values",
                ),
            )
        spread = float(values[-2 * m :].max() - values[-2 * m :].min())
        return PotentialEvaluation(
            value=float(values[-1]),
            error_radius=max(spread, FLOAT_NOISE_FLOOR),
            terms_used=n_scan,
            mode="adaptive",
            certified=False,
            notes=(
                "no strictly positive tail window; observed convergence is "
                "uncertified",
            ),
        )
    return PotentialEvaluation(
        value=float(values[-1]),
        error_radius=math.inf,
        terms_used=n_scan,
        mode="adaptive",
        certified=False,
        notes=("value sequence did not stabilize within the scan depth",),
    )


def factorization_sequence(prefix, factor_size: int) -> tuple[tuple[int, int], ...]:
    """Repeated-symbol pairs (m_k, l_k) from consecutive windows of length
    factor_size + 1.

    Window k covers positions [k (W), k (W) + W - 1] with W = factor_size + 1;
    by pigeonhole each window repeats a symbol, and the first repeat (smallest
    l, then smallest m) is chosen, so k W <= l_k < (k + 1) W and the pairs
    strictly interleave.
    """
    if isinstance(prefix, Word):
        prefix = prefix.symbols
    w = factor_size + 1
    n = len(prefix)
    if n < w:
        raise AdmissibilityError(
            f"prefix of length {n} is shorter than one window ({w})"
        )
    pairs: list[tuple[int, int]] = []
    k = 0
    while (k + 1) * w <= n:
        start = k * w
        found = None
        for l in range(start + 1, start + w):
            for m in range(start, l):
                if prefix[m] == prefix[l]:
                    found = (m, l)
                    break
            if found:
                break
        if found is None:
            raise AdmissibilityError(
                f"window at {start} has no repeated symbol; prefix uses more "
                f"than {factor_size} symbols"
            )
        pairs.append(found)
        k += 1
    return tuple(pairs)


def uniform_constants(fs: FactorSystem, max_window: Optional[int] = None) -> UniformConstants:
    """Certification constants valid at every point of the image shift.

    Requires row-allowable fiber blocks and orbit-level positivity of short
    cycle products.  Certification then searches for the smallest window
    length W (starting at the pigeonhole value #B + 1) such that every
    admissible W-word contains a repeated-symbol block with strictly positive
    product; tau is the worst Birkhoff coefficient over all such positive
    blocks and all other constants follow the closed formulas.
    """
    from .projection import check_h1, check_h2  # local to avoid cycle at import

    h1 = check_h1(fs)
    if not h1.passed:
        raise CertificationError(
            f"fiber blocks have all-zero rows: {h1.failures[:3]}"
        )
    h2 = check_h2(fs)
    if not h2.passed:
        raise CertificationError(
            f"cycles without a positive rotation: {h2.orbit_failures}"
        )
    nb = fs.target_size
    if max_window is None:
        max_window = 3 * (nb + 1)
    block_tau: dict[tuple[int, ...], float] = {}
    chosen_w = None
    for w_len in range(nb + 1, max_window + 1):
        all_good = True
        for word in enumerate_words(fs.factor_tmc, w_len):
            symbols = word.symbols
            word_good = False
            for l in range(1, w_len):
                for m in range(l):
                    if symbols[m] != symbols[l]:
                        continue
                    block = symbols[m : l + 1]
                    if block not in block_tau:
                        product = fs.word_product(block)
                        if (product > 0).all():
                            block_tau[block] = contraction_coefficient(product).tau
                        else:
                            block_tau[block] = 1.0
                    if block_tau[block] < 1.0:
                        word_good = True
            if not word_good:
                all_good = False
                break
        if all_good:
            chosen_w = w_len
            break
    if chosen_w is None:
        raise CertificationError(
            f"no window length up to {max_window} guarantees a positive "
            "repeated block in every admissible word"
        )
    tau = max(t for t in block_tau.values() if t < 1.0)
    # rank-one blocks contract instantly (tau ~ 0); keep tau away from zero
    # so the c1 = tau**-3 prefactor stays finite
    tau = max(tau, 1e-12)
    s = 2 * chosen_w
    theta = tau ** (1.0 / s)
    c1 = tau**-3
    d_const = 0.0
    for length in range(2, s + 1):
        for word in enumerate_words(fs.factor_tmc, length):
            symbols = word.symbols
            x = fs.marginal_hat(symbols[-1])
            for i in range(len(symbols) - 2, -1, -1):
                x = apply_normalized(
                    fs.weight(symbols[i], symbols[i + 1]), x, out_fiber=symbols[i]
                )
            d_const = max(d_const, projective_distance(fs.marginal_hat(symbols[0]), x))
    c_total = 2.0 * d_const * c1 / (1.0 - theta)
    k_gibbs = d_const * c1 / ((1.0 - tau) * (1.0 - theta))
    return UniformConstants(
        tau=tau,
        theta=theta,
        c1=c1,
        d_const=d_const,
        c_total=c_total,
        k_gibbs=k_gibbs,
        window=chosen_w,
        gap=s,
        _metric_scale=2 * (nb + 1),
    )


def periodic_potential(
    fs: FactorSystem, point: PointSpec, target_error: float = DEFAULT_TARGET_ERROR
) -> tuple[PotentialEvaluation, Optional[PerronData]]:
    """Potential at a purely periodic point through dominant eigendata.

    For period p and one-period product T (cyclically, from the point's own
    phase), psi = log rho(T) - log |M_(1:p) d_hat|_1, which reduces to
    log rho for fixed points.  The error radius combines the min/max
    eigenvalue inclusion with an a-posteriori bound on the eigenvector.
    Refuses when T is not pattern primitive and falls back to the iterative
    evaluator (which may report divergence).
    """
    if point.preperiod:
        raise AdmissibilityError("the eigendata route needs a purely periodic point")
    _check_point_rows(fs, point)
    p = len(point.period)
    t = _window_product(fs, point, 0, p)
    prim = pattern_primitivity(t)
    if not prim.primitive:
        fallback = evaluate(fs, point, target_error=target_error)
        fallback = PotentialEvaluation(
            value=fallback.value,
            error_radius=fallback.error_radius,
            terms_used=fallback.terms_used,
            mode=fallback.mode,
            certified=fallback.certified,
            clusters=fallback.clusters,
            notes=fallback.notes
            + ("one-period product is not primitive; eigendata route refused",),
        )
        return fallback, None
    pd = perron_data(t)
    ratios = (t @ pd.d_hat) / pd.d_hat
    inclusion = math.log(ratios.max() / ratios.min())
    if p == 1:
        tail = 1.0
        vector_term = 0.0
    else:
        rest = fs.word_product(point.period[1:] + (point.period[0],))
        tail = float((rest @ pd.d_hat).sum())
        power = np.linalg.matrix_power(t, prim.exponent)
        tau_m = contraction_coefficient(power).tau
        x = SimplexPoint(pd.d_hat, fiber=point.symbol_at(0))
        gap = projective_distance(
            apply_normalized(power, x, out_fiber=point.symbol_at(0)), x
        )
        vector_term = gap / (1.0 - tau_m)
    value = math.log(pd.rho) - math.log(tail)
    radius = inclusion + vector_term + FLOAT_NOISE_FLOOR
    return (
        PotentialEvaluation(
            value=value,
            error_radius=radius,
            terms_used=pd.iterations,
            mode="certified",
            certified=True,
            notes=("dominant eigendata at a periodic point",),
        ),
        pd,
    )


def _greedy_cycle_walk(fs: FactorSystem, start: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Greedy lexicographic walk from start until a symbol repeats.

    Returns (transient, cycle): the walk is start, ..., then cycles.
    """
    tmc = fs.factor_tmc
    walk = [start]
    seen = {start: 0}
    while True:
        nxt = tmc.successors(walk[-1])[0]
        if nxt in seen:
            i = seen[nxt]
            return tuple(walk[:i]), tuple(walk[i:])
        seen[nxt] = len(walk)
        walk.append(nxt)


def _shortest_return_path(fs: FactorSystem, src: int, dst: int, max_len: int) -> Optional[tuple[int, ...]]:
    """Shortest path src -> dst of length in [1, max_len]; lexicographic ties."""
    tmc = fs.factor_tmc
    frontier: list[tuple[int, ...]] = [(src,)]
    for _ in range(max_len):
        nxt: list[tuple[int, ...]] = []
        for path in frontier:
            for s in tmc.successors(path[-1]):
                if s == dst:
                    return path + (s,)
                nxt.append(path + (s,))
        frontier = nxt
    return None


def canonical_extension(fs: FactorSystem, symbols: Sequence[int]) -> PointSpec:
    """Deterministic eventually periodic point with the given prefix.

    Prefers the periodic completion through the shortest admissible return
    path from the last symbol to the first (at most #B steps); otherwise
    extends greedily into the lexicographically first reachable cycle.
    """
    symbols = tuple(int(s) for s in symbols)
    Word(fs.factor_tmc, symbols)
    path = _shortest_return_path(fs, symbols[-1], symbols[0], fs.target_size)
    if path is not None:
        return PointSpec(fs, (), symbols + path[1:-1])
    transient, cycle = _greedy_cycle_walk(fs, symbols[-1])
    return PointSpec(fs, symbols[:-1] + transient, cycle)


def tail_completions(fs: FactorSystem, symbols: Sequence[int], count: int = 2) -> list[PointSpec]:
    """Up to count distinct eventually periodic points sharing the prefix.

    Explores admissible continuations of bounded depth in lexicographic
    order and closes each into a cycle greedily, deduplicating the results.
    """
    symbols = tuple(int(s) for s in symbols)
    Word(fs.factor_tmc, symbols)
    tmc = fs.factor_tmc
    depth = fs.target_size + 1
    out: list[PointSpec] = []

    def close(path: tuple[int, ...]) -> PointSpec:
        transient, cycle = _greedy_cycle_walk(fs, path[-1])
        return PointSpec(fs, path[:-1] + transient, cycle)

    def walk(path: tuple[int, ...], d: int) -> bool:
        if d == depth:
            pt = close(path)
            if pt not in out:
                out.append(pt)
            return len(out) >= count
        for s in tmc.successors(path[-1]):
            if walk(path + (s,), d + 1):
                return True
        return False

    walk(symbols, 0)
    return out


@dataclass(frozen=True)
class HolderReport:
    """Sampled variation table of the potential.

    var[n] is the largest observed |psi(b) - psi(b')| over sampled pairs
    agreeing on at least the first n + 1 symbols (cumulative over deeper
    levels, hence nonincreasing).  bound[n] is c_total theta^n plus twice the
    worst evaluation radius.
    """

    var: tuple[float, ...]
    level_spread: tuple[float, ...]
    bound: tuple[float, ...]
    bound_ok: bool
    fitted_rate: Optional[float]
    theta: float
    exponent: float
    max_eval_radius: float


def holder_variation(
    fs: FactorSystem,
    constants: UniformConstants,
    n_max: int,
    target_error: float = 1e-11,
) -> HolderReport:
    """Sample var_n psi over all words of each length up to n_max."""
    cache: dict[tuple, PotentialEvaluation] = {}

    def psi(point: PointSpec) -> PotentialEvaluation:
        k = point.key()
        if k not in cache:
            cache[k] = evaluate(fs, point, target_error=target_error, constants=constants)
        return cache[k]

    level = []
    max_radius = 0.0
    for n in range(n_max + 1):
        worst = 0.0
        for word in enumerate_words(fs.factor_tmc, n + 1):
            pts = tail_completions(fs, word.symbols, count=2)
            if len(pts) < 2:
                continue
            ev = [psi(p) for p in pts]
            max_radius = max(max_radius, *(e.error_radius for e in ev))
            worst = max(worst, abs(ev[0].value - ev[1].value))
        level.append(worst)
    var = list(level)
    for n in range(n_max - 1, -1, -1):
        var[n] = max(var[n], var[n + 1])
    bound = [
        constants.c_total * constants.theta**n + 2.0 * max_radius
        for n in range(n_max + 1)
    ]
    bound_ok = all(v <= b for v, b in zip(var, bound))
    floor = max(100.0 * max_radius, 1e-12)
    pts = [(n, math.log(v)) for n, v in enumerate(var) if v > floor]
    fitted = None
    if len(pts) >= 3:
        xs = np.array([p[0] for p in pts])
        ys = np.array([p[1] for p in pts])
        slope = np.polyfit(xs, ys, 1)[0]
        fitted = float(np.exp(slope))
    return HolderReport(
        var=tuple(var),
        level_spread=tuple(level),
        bound=tuple(bound),
        bound_ok=bound_ok,
        fitted_rate=fitted,
        theta=constants.theta,
        exponent=constants.holder_exponent,
        max_eval_radius=max_radius,
    )


@dataclass(frozen=True)
class ObstructionReport:
    """Finite-range obstruction for a two-fiber full-shift factor.

    A potential of finite range forces at least one of: the two diagonal
    fiber blocks share their positive eigenvector; some fiber block has rank
    one; the all-ones vector is a left eigenvector of every block.  All three
    false excludes finite range.
    """

    shared_eigenvector: bool
    rank_one_block: bool
    ones_left_eigenvector: bool
    excluded: bool
    details: dict = field(default_factory=dict)


OBSTRUCTION_TOL = 1e-10


def finite_range_obstruction(fs: FactorSystem) -> ObstructionReport:
    """Test the three finite-range conditions on a 2+2 full-shift factor."""
    if fs.target_size != 2:
        raise ModelError("obstruction test needs a two-symbol factor alphabet")
    if any(len(f) != 2 for f in fs.projection.fibers):
        raise ModelError("obstruction test needs two source symbols per fiber")
    if not (fs.model.tmc.incidence == 1).all():
        raise ModelError("obstruction test needs a full-shift source")
    blocks = {key: fs.fiber_weight[key] for key in [(0, 0), (0, 1), (1, 0), (1, 1)]}
    v00 = perron_data(blocks[(0, 0)]).d_hat
    v11 = perron_data(blocks[(1, 1)]).d_hat
    shared = bool(np.abs(v00 - v11).max() <= OBSTRUCTION_TOL)
    dets = {
        key: float(np.linalg.det(b)) / float(np.abs(b).max() ** 2)
        for key, b in blocks.items()
    }
    rank_one = bool(any(abs(d) <= OBSTRUCTION_TOL for d in dets.values()))
    ones_left = True
    col_gaps = {}
    for key, b in blocks.items():
        sums = b.sum(axis=0)
        gap = float(np.abs(sums - sums.mean()).max() / sums.max())
        col_gaps[key] = gap
        if gap > OBSTRUCTION_TOL:
            ones_left = False
    return ObstructionReport(
        shared_eigenvector=shared,
        rank_one_block=rank_one,
        ones_left_eigenvector=ones_left,
        excluded=not (shared or rank_one or ones_left),
        details={
            "eigenvector_gap": float(np.abs(v00 - v11).max()),
            "relative_determinants": dets,
            "column_sum_gaps": col_gaps,
        },
    )
