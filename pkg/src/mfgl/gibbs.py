"""Exact finite-state Gibbs machinery: measures, tilts, covariances, distances.

All densities are constructed in log space with a max shift, since the
smoothed-cutoff Hamiltonians produce weights spanning hundreds of e-folds.
Measures are immutable after construction and indexed by the package-wide
vertex encoding (bit i set iff coordinate i equals +1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .boolfn import (
    DimensionMismatch,
    FourierExpansion,
    _check_cap,
    gradient_tables,
    vertex_values,
)
from . import transport

PROB_TOL = 1e-12


def _linear_vertex_values(theta: np.ndarray) -> np.ndarray:
    """<theta, c(v)> for every vertex v, by per-bit accumulation."""
    n = theta.size
    out = np.zeros(1 << n)
    idx = np.arange(1 << n)
    for i in range(n):
        out += np.where((idx >> i) & 1, theta[i], -theta[i])
    return out


@dataclass(frozen=True)
class DenseMeasure:
    """Explicit probability vector over the 2^n vertices.

    ``log_norm`` records the log of the normalizing constant used at
    construction (log sum of the raw weights).
    """

    n: int
    probs: np.ndarray
    log_norm: float = 0.0

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.shape != (1 << self.n,):
            raise ValueError(f"need 2^{self.n} probabilities, got shape {probs.shape}")
        if np.any(probs < -PROB_TOL) or not np.all(np.isfinite(probs)):
            raise ValueError("probabilities must be finite and nonnegative")
        if abs(float(probs.sum()) - 1.0) > PROB_TOL:
            raise ValueError("probabilities must sum to one")
        probs = np.maximum(probs, 0.0)
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)

    @staticmethod
    def from_log_weights(n: int, log_weights: np.ndarray) -> "DenseMeasure":
        logw = np.asarray(log_weights, dtype=np.float64)
        if logw.shape != (1 << n,):
            raise ValueError(f"need 2^{n} log weights")
        if np.any(np.isnan(logw)) or np.any(logw == np.inf):
            raise ValueError("log weights must be < +inf and not NaN")
        m = float(np.max(logw))
        if m == -np.inf:
            raise ValueError("all weights vanish")
        with np.errstate(under="ignore"):
            w = np.exp(logw - m)
        total = float(w.sum())
        return DenseMeasure(n=n, probs=w / total, log_norm=m + float(np.log(total)))

    @staticmethod
    def point_mass(n: int, vertex: int) -> "DenseMeasure":
        probs = np.zeros(1 << n)
        probs[vertex] = 1.0
        return DenseMeasure(n=n, probs=probs)


@dataclass(frozen=True)
class ProductMeasure:
    """Product law on the hypercube identified by its mean vector.

    Coordinate i equals +1 with probability (1 + mean_i)/2, independently.
    """

    mean: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        if mean.ndim != 1 or mean.size == 0:
            raise ValueError("mean must be a nonempty vector")
        if np.any(np.abs(mean) > 1.0 + PROB_TOL) or not np.all(np.isfinite(mean)):
            raise ValueError("mean entries must lie in [-1, 1]")
        mean = np.clip(mean, -1.0, 1.0)
        mean.flags.writeable = False
        object.__setattr__(self, "mean", mean)

    @property
    def n(self) -> int:
        return self.mean.size


TiltVector = np.ndarray


def theta_in_tilt_support(theta: np.ndarray, eps: float) -> bool:
    """Whether theta lies in the ball of radius eps*sqrt(n) meeting [-1/4,1/4]^n."""
    theta = np.asarray(theta, dtype=np.float64)
    n = theta.size
    return bool(
        np.linalg.norm(theta) <= eps * np.sqrt(n) + 1e-12
        and np.abs(theta).max(initial=0.0) <= 0.25 + 1e-12
    )


def gibbs_measure(f: FourierExpansion, max_n: int | None = None) -> DenseMeasure:
    """Measure with probabilities proportional to exp(f(v))."""
    values = vertex_values(f, max_n)
    if not np.all(np.isfinite(values)):
        raise ValueError("Hamiltonian evaluates to non-finite values")
    return DenseMeasure.from_log_weights(f.n, values)


def densify(pm: ProductMeasure) -> DenseMeasure:
    """Explicit 2^n probability vector of a product law (unit normalizer)."""
    n = pm.n
    _check_cap(n, None, "product densification")
    probs = np.ones(1 << n)
    idx = np.arange(1 << n)
    for i in range(n):
        up = (1.0 + pm.mean[i]) / 2.0
        probs *= np.where((idx >> i) & 1, up, 1.0 - up)
    return DenseMeasure(n=n, probs=probs)


def tilt(nu: DenseMeasure, theta) -> DenseMeasure:
    """Exponential reweighting of nu by exp(<theta, v>), renormalized."""
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape != (nu.n,):
        raise DimensionMismatch(f"theta has shape {theta.shape}, expected ({nu.n},)")
    with np.errstate(divide="ignore"):
        logw = np.log(nu.probs) + _linear_vertex_values(theta)
    out = DenseMeasure.from_log_weights(nu.n, logw)
    return DenseMeasure(n=nu.n, probs=out.probs, log_norm=nu.log_norm + out.log_norm)


def mean(measure: DenseMeasure | ProductMeasure) -> np.ndarray:
    """Coordinatewise expectation of the +-1 coordinates."""
    if isinstance(measure, ProductMeasure):
        return measure.mean.copy()
    idx = np.arange(1 << measure.n)
    out = np.empty(measure.n)
    for i in range(measure.n):
        out[i] = 2.0 * float(measure.probs[(idx >> i) & 1 == 1].sum()) - 1.0
    return out


def gradient_field(f: FourierExpansion, theta=None, max_n: int | None = None) -> np.ndarray:
    """Per-vertex effective gradient table, shape (2^n, n).

    Tilting a Gibbs law by theta shifts its gradient field additively, so the
    effective field of tilt(gibbs(f), theta) is grad f + theta.
    """
    table = gradient_tables(f, max_n).T.copy()
    if theta is not None:
        theta = np.asarray(theta, dtype=np.float64)
        if theta.shape != (f.n,):
            raise DimensionMismatch(f"theta has shape {theta.shape}, expected ({f.n},)")
        table += theta
    return table


def tanh_covariance(nu: DenseMeasure, field: np.ndarray) -> tuple[np.ndarray, float]:
    """Covariance matrix of tanh(field(V)) under V ~ nu, plus its trace.

    ``field`` is the per-vertex effective gradient table (2^n, n); the caller
    supplies it because a tilted measure's field is the base field shifted
    by theta, which the probability vector alone does not expose.
    """
    field = np.asarray(field, dtype=np.float64)
    if field.shape != (1 << nu.n, nu.n):
        raise DimensionMismatch(f"field has shape {field.shape}, expected {(1 << nu.n, nu.n)}")
    t = np.tanh(field)
    w = nu.probs
    center = w @ t
    cov = (t * w[:, None]).T @ t - np.outer(center, center)
    cov = (cov + cov.T) / 2.0
    return cov, float(np.trace(cov))


def product_approx(nu: DenseMeasure, field: np.ndarray) -> ProductMeasure:
    """Product law centered at the nu-average of tanh(field).

    For the measure's own effective field this center coincides with the
    mean of nu (conditioning on the other coordinates makes each coordinate
    a tanh of its local field), and the product law is within
    sqrt(n tr H(nu)) of nu in Wasserstein distance.
    """
    field = np.asarray(field, dtype=np.float64)
    if field.shape != (1 << nu.n, nu.n):
        raise DimensionMismatch(f"field has shape {field.shape}, expected {(1 << nu.n, nu.n)}")
    return ProductMeasure(nu.probs @ np.tanh(field))


def _check_pair(nu1: DenseMeasure, nu2: DenseMeasure) -> None:
    if nu1.n != nu2.n:
        raise DimensionMismatch(f"dimension mismatch: {nu1.n} vs {nu2.n}")


def w1_exact(nu1: DenseMeasure, nu2: DenseMeasure,
             max_states: int | None = None) -> float:
    """Exact Wasserstein-1 distance, ground cost half the coordinate one-norm.

    Solved as a certified min-cost flow; see ``w1_result`` for the full
    solver output and ``w1_upper_bound_greedy`` for the flagged fallback
    above the state cap.
    """
    return w1_result(nu1, nu2, max_states=max_states).value


def w1_result(nu1: DenseMeasure, nu2: DenseMeasure,
              max_states: int | None = None) -> transport.TransportResult:
    _check_pair(nu1, nu2)
    result = transport.solve_w1(nu1.probs, nu2.probs, nu1.n, max_states=max_states)
    if not result.certified:
        raise RuntimeError("transport dual certificate failed")
    return result


def w1_upper_bound_greedy(nu1: DenseMeasure, nu2: DenseMeasure) -> transport.TransportResult:
    """Greedy feasible transport: a flagged upper bound, usable above the cap."""
    _check_pair(nu1, nu2)
    return transport.w1_greedy_upper_bound(nu1.probs, nu2.probs, nu1.n)


def tv(nu1: DenseMeasure, nu2: DenseMeasure) -> float:
    """Total variation distance, half the one-norm of the difference."""
    _check_pair(nu1, nu2)
    return 0.5 * float(np.abs(nu1.probs - nu2.probs).sum())
