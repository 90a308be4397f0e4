"""Hilbert projective metric on positive simplices and Birkhoff contraction.

The metric between strictly positive l1-normalized vectors is
delta(x, y) = log(max_i x_i/y_i) - log(min_i x_i/y_i).  A nonnegative
row-allowable matrix T acts on the simplex by x -> Tx / |Tx|_1 without
expanding delta.  For strictly positive T the action is a strict contraction
with explicit coefficient tau(T) = (1 - sqrt(Phi)) / (1 + sqrt(Phi)), where
Phi is the minimal cross-ratio of entries over index quadruples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Optional

import numpy as np

from .errors import FiberMismatchError, ModelError

# coordinates this small cannot be trusted in ratio computations
MIN_COORDINATE = 1e-300


class SimplexPoint:
    """Strictly positive probability vector tagged with the fiber it lives on."""

    __slots__ = ("coords", "fiber")

    def __init__(self, coords, fiber: Optional[Hashable] = None):
        coords = np.asarray(coords, dtype=float)
        if coords.ndim != 1 or coords.size == 0:
            raise ModelError("simplex point needs a nonempty 1-d coordinate array")
        if (coords <= 0).any():
            raise ModelError("simplex point coordinates must be strictly positive")
        total = coords.sum()
        if not np.isfinite(total):
            raise ModelError("simplex point coordinates must be finite")
        self.coords = coords / total
        self.fiber = fiber

    def __len__(self) -> int:
        return self.coords.size

    def __repr__(self) -> str:
        return f"SimplexPoint({self.coords!r}, fiber={self.fiber!r})"


def projective_distance(x: SimplexPoint, y: SimplexPoint) -> float:
    """delta(x, y); 0 exactly on proportional inputs."""
    if x.fiber != y.fiber or len(x) != len(y):
        raise FiberMismatchError(
            f"cannot compare points on fibers {x.fiber!r} and {y.fiber!r}"
        )
    if (x.coords < MIN_COORDINATE).any() or (y.coords < MIN_COORDINATE).any():
        raise ModelError("coordinates below 1e-300; distance would be unreliable")
    ratio = np.log(x.coords) - np.log(y.coords)
    return float(ratio.max() - ratio.min())


def is_row_allowable(matrix: np.ndarray) -> tuple[bool, Optional[int]]:
    """True when every row has a positive entry; else first offending row."""
    matrix = np.asarray(matrix)
    if (matrix < 0).any():
        raise ModelError("row allowability is defined for nonnegative matrices")
    row_ok = (matrix > 0).any(axis=1)
    if row_ok.all():
        return True, None
    return False, int(np.argmax(~row_ok))


def apply_normalized(matrix: np.ndarray, x: SimplexPoint, out_fiber: Optional[Hashable] = None) -> SimplexPoint:
    """Normalized action x -> Tx / |Tx|_1 for a row-allowable T.

    Rows index the target fiber, columns the source fiber.  Refuses matrices
    with an all-zero row: those push points onto the simplex boundary where
    the metric degenerates.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[1] != len(x):
        raise ModelError(
            f"matrix shape {matrix.shape} does not act on a point of size {len(x)}"
        )
    ok, bad_row = is_row_allowable(matrix)
    if not ok:
        raise ModelError(f"matrix row {bad_row} is identically zero; action refused")
    image = matrix @ x.coords
    return SimplexPoint(image, fiber=out_fiber)


@dataclass(frozen=True)
class ContractionCoefficient:
    tau: float
    phi: float


def contraction_coefficient(matrix: np.ndarray) -> ContractionCoefficient:
    """Birkhoff coefficient of a nonnegative matrix.

    For a strictly positive matrix, Phi is the minimum over quadruples
    (e, f, e', f') of T(e',e) T(f',f) / (T(e',f) T(f',e)), evaluated in log
    space, and tau = (1 - sqrt(Phi)) / (1 + sqrt(Phi)) < 1.  Any zero entry
    gives Phi = 0 and tau = 1 (no contraction guarantee).
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2:
        raise ModelError("contraction coefficient needs a matrix")
    if (matrix < 0).any():
        raise ModelError("contraction coefficient is defined for nonnegative matrices")
    if (matrix == 0).any():
        return ContractionCoefficient(tau=1.0, phi=0.0)
    logs = np.log(matrix)
    # log cross-ratio over all quadruples: rows e',f' and columns e,f
    cross = (
        logs[:, None, :, None]
        + logs[None, :, None, :]
        - logs[:, None, None, :]
        - logs[None, :, :, None]
    )
    phi = float(np.exp(cross.min()))
    root = np.sqrt(phi)
    tau = (1.0 - root) / (1.0 + root)
    return ContractionCoefficient(tau=tau, phi=phi)
