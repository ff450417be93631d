"""Hamiltonian catalog, scalar cutoff shapes, and composition parameters.

The catalog covers linear fields, pairwise-interaction (Ising-type) models,
the Curie-Weiss ferromagnet, triangle counting on graphs, raw sparse
expansions, and smoothed-cutoff compositions.  Quadratic-form convention:
``ising`` places coefficient A_ij on each *unordered* pair {i,j}, so its
discrete gradient field is exactly A x + mu and the closed-form complexity
bounds below are valid for the function actually built.  ``curie_weiss``
encodes the ordered double sum (beta/n) sum_{i != j} x_i x_j literally,
i.e. pair coefficient 2*beta/n; the two conventions differ by that factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .boolfn import (
    FourierExpansion,
    _check_cap,
    compose,
    vertex_values,
)


class InvalidSpec(ValueError):
    """Hamiltonian specification violates its invariants."""


# ---------------------------------------------------------------------------
# Scalar shapes
# ---------------------------------------------------------------------------


class ScalarShape:
    """A scalar map with analytic first and second derivatives.

    ``d1_bound`` / ``d2_bound`` are global sup bounds on |h'| and |h''|
    (``None`` when unbounded); the composition-parameter formulas consume
    them directly, so shapes never fall back to numeric differentiation.
    """

    name = "shape"
    d1_bound: Optional[float] = None
    d2_bound: Optional[float] = None

    def value(self, x):
        raise NotImplementedError

    def deriv1(self, x):
        raise NotImplementedError

    def deriv2(self, x):
        raise NotImplementedError

    def evaluate(self, x):
        return self.value(x), self.deriv1(x), self.deriv2(x)


class CutoffShape(ScalarShape):
    """Monotone ramp: 2x+1 below -1, -x^2 on [-1,0], 0 above 0.

    |h'| <= 2 and |h''| <= 2 everywhere; value and first derivative agree
    one-sidedly at both knots.  At the knots the second derivative takes the
    left branch at -1 and the right branch at 0.
    """

    name = "cutoff"
    d1_bound = 2.0
    d2_bound = 2.0

    def value(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.where(x <= -1.0, 2.0 * x + 1.0, np.where(x < 0.0, -x * x, 0.0))

    def deriv1(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.where(x <= -1.0, 2.0, np.where(x < 0.0, -2.0 * x, 0.0))

    def deriv2(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.where(x <= -1.0, 0.0, np.where(x < 0.0, -2.0, 0.0))


class CubicQuinticShape(ScalarShape):
    """Cubic-quintic core with quadratic wings; h'(0) = 0, |h''| bounded.

    h(x) = 3/4 x^3 - 1/4 x^5 for |x| < 1, +-x^2/2 outside.  Continuously
    differentiable at +-1 but the first derivative (|h'| = |x| on the wings)
    is unbounded, so only the second-derivative bound is available.
    """

    name = "cubic_quintic"
    d1_bound = None
    d2_bound = math.sqrt(27.0 / 10.0)

    def value(self, x):
        x = np.asarray(x, dtype=np.float64)
        core = 0.75 * x**3 - 0.25 * x**5
        return np.where(x >= 1.0, 0.5 * x * x, np.where(x <= -1.0, -0.5 * x * x, core))

    def deriv1(self, x):
        x = np.asarray(x, dtype=np.float64)
        core = 2.25 * x * x - 1.25 * x**4
        return np.where(x >= 1.0, x, np.where(x <= -1.0, -x, core))

    def deriv2(self, x):
        x = np.asarray(x, dtype=np.float64)
        core = 4.5 * x - 5.0 * x**3
        return np.where(x >= 1.0, 1.0, np.where(x <= -1.0, -1.0, core))


class AffineShape(ScalarShape):
    name = "affine"

    def __init__(self, a: float, b: float = 0.0):
        self.a = float(a)
        self.b = float(b)
        self.d1_bound = abs(self.a)
        self.d2_bound = 0.0

    def value(self, x):
        return self.a * np.asarray(x, dtype=np.float64) + self.b

    def deriv1(self, x):
        return np.full_like(np.asarray(x, dtype=np.float64), self.a)

    def deriv2(self, x):
        return np.zeros_like(np.asarray(x, dtype=np.float64))


class ScaledCutoffShape(ScalarShape):
    """psi(x) = n * h((x/n - t)/delta) for the cutoff ramp h.

    |psi'| <= 2/delta and |psi''| <= 2/(n delta^2); psi <= 0 everywhere and
    vanishes for x >= t*n.
    """

    name = "scaled_cutoff"

    def __init__(self, n: int, t: float, delta: float):
        if delta <= 0:
            raise InvalidSpec("delta must be positive")
        self.n = int(n)
        self.t = float(t)
        self.delta = float(delta)
        self._h = CutoffShape()
        self.d1_bound = 2.0 / self.delta
        self.d2_bound = 2.0 / (self.n * self.delta**2)

    def _u(self, x):
        return (np.asarray(x, dtype=np.float64) / self.n - self.t) / self.delta

    def value(self, x):
        return self.n * self._h.value(self._u(x))

    def deriv1(self, x):
        return self._h.deriv1(self._u(x)) / self.delta

    def deriv2(self, x):
        return self._h.deriv2(self._u(x)) / (self.n * self.delta**2)


class CustomShape(ScalarShape):
    """User-supplied value/derivative callables with explicit sup bounds."""

    name = "custom"

    def __init__(self, value_fn: Callable, deriv1_fn: Callable, deriv2_fn: Callable,
                 d1_bound: Optional[float] = None, d2_bound: Optional[float] = None):
        self._v, self._d1, self._d2 = value_fn, deriv1_fn, deriv2_fn
        self.d1_bound = d1_bound
        self.d2_bound = d2_bound

    def value(self, x):
        return np.asarray(self._v(np.asarray(x, dtype=np.float64)), dtype=np.float64)

    def deriv1(self, x):
        return np.asarray(self._d1(np.asarray(x, dtype=np.float64)), dtype=np.float64)

    def deriv2(self, x):
        return np.asarray(self._d2(np.asarray(x, dtype=np.float64)), dtype=np.float64)


def cutoff_shape_eval(h: ScalarShape, x) -> tuple:
    """(value, first derivative, second derivative) of a shape at x."""
    v, d1, d2 = h.evaluate(x)
    if np.ndim(x) == 0:
        return float(v), float(d1), float(d2)
    return v, d1, d2


# ---------------------------------------------------------------------------
# Complexity parameters
# ---------------------------------------------------------------------------

PROVENANCE = ("exact", "monte_carlo", "closed_form_bound")


@dataclass(frozen=True)
class ComplexityParams:
    """The (D, L1, L2) triple with the unit floors already applied.

    L1 = max(1, sup |partial_i f|) and L2 = max(1, gradient one-norm
    Lipschitz ratio); D is the Gaussian width of the gradient cloud.  Each
    field records how it was obtained.
    """

    d: float
    l1: float
    l2: float
    d_stderr: Optional[float] = None
    d_provenance: str = "exact"
    l1_provenance: str = "exact"
    l2_provenance: str = "exact"

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("gradient complexity must be nonnegative")
        if self.l1 < 1.0 or self.l2 < 1.0:
            raise ValueError("L1 and L2 carry a floor of 1")
        for p in (self.d_provenance, self.l1_provenance, self.l2_provenance):
            if p not in PROVENANCE:
                raise ValueError(f"unknown provenance {p!r}")

    @staticmethod
    def from_raw(d: float, lip: float, grad_ratio: float, **kw) -> "ComplexityParams":
        return ComplexityParams(d=float(d), l1=max(1.0, float(lip)),
                                l2=max(1.0, float(grad_ratio)), **kw)


@dataclass(frozen=True)
class CompositionParams:
    """Parameters of h∘f from derivative bounds of h and the base triple."""

    d: float
    l1: float
    l2: float
    l3: float


def composition_params(b1: float, b2: float, base: ComplexityParams, n: int) -> CompositionParams:
    """(D~, L1~, L2~, L3~) for a composition with |h'| <= b1, |h''| <= b2.

    D~ = b1 D + b2 L1^2 n, L1~ = max(1, b1 L1),
    L2~ = max(1, b1 L2 + 3 b2 L1^2 n), L3~ = 2 b2 L1^2 n^(3/2).
    """
    if b1 < 0 or b2 < 0:
        raise ValueError("derivative bounds must be nonnegative")
    if n <= 0:
        raise ValueError("n must be positive")
    quad = b2 * base.l1**2 * n
    return CompositionParams(
        d=b1 * base.d + quad,
        l1=max(1.0, b1 * base.l1),
        l2=max(1.0, b1 * base.l2 + 3.0 * quad),
        l3=2.0 * b2 * base.l1**2 * n**1.5,
    )


# ---------------------------------------------------------------------------
# Hamiltonian specs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearSpec:
    theta: tuple

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=np.float64)
        if theta.ndim != 1 or theta.size == 0 or not np.all(np.isfinite(theta)):
            raise InvalidSpec("linear field must be a finite nonempty vector")
        object.__setattr__(self, "theta", tuple(theta.tolist()))

    @property
    def n(self) -> int:
        return len(self.theta)


@dataclass(frozen=True)
class IsingSpec:
    """Pairwise couplings A (symmetric, zero diagonal) plus external field mu.

    The built expansion is sum_{i<j} A_ij x_i x_j + <mu, x>, whose gradient
    field is exactly A x + mu.
    """

    coupling: tuple
    field: tuple

    def __post_init__(self):
        a = np.asarray(self.coupling, dtype=np.float64)
        mu = np.asarray(self.field, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidSpec("coupling must be a square matrix")
        if mu.shape != (a.shape[0],):
            raise InvalidSpec("field length must match the coupling size")
        if not np.allclose(a, a.T, rtol=0, atol=0):
            raise InvalidSpec("coupling must be symmetric")
        if np.any(np.diag(a) != 0.0):
            raise InvalidSpec("coupling must have a zero diagonal")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(mu))):
            raise InvalidSpec("non-finite entries")
        object.__setattr__(self, "coupling", tuple(map(tuple, a.tolist())))
        object.__setattr__(self, "field", tuple(mu.tolist()))

    @property
    def n(self) -> int:
        return len(self.field)

    def matrices(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array(self.coupling), np.array(self.field)


@dataclass(frozen=True)
class CurieWeissSpec:
    beta: float
    n: int

    def __post_init__(self):
        if self.beta <= 0:
            raise InvalidSpec("beta must be positive")
        if self.n < 2:
            raise InvalidSpec("need at least two sites")


@dataclass(frozen=True)
class TriangleCountSpec:
    beta: float
    num_vertices: int

    def __post_init__(self):
        if self.num_vertices < 3:
            raise InvalidSpec("need at least three graph vertices")

    @property
    def n(self) -> int:
        return self.num_vertices * (self.num_vertices - 1) // 2


@dataclass(frozen=True)
class SparseFourierSpec:
    n: int
    terms: tuple  # ((sorted index tuple, coeff), ...)

    def __post_init__(self):
        norm = []
        for subset, coeff in self.terms:
            subset = tuple(sorted(int(i) for i in subset))
            if len(set(subset)) != len(subset):
                raise InvalidSpec("repeated index in subset")
            if subset and (subset[0] < 0 or subset[-1] >= self.n):
                raise InvalidSpec("subset index out of range")
            norm.append((subset, float(coeff)))
        object.__setattr__(self, "terms", tuple(norm))


@dataclass(frozen=True)
class SmoothedCutoffSpec:
    inner: "HamiltonianSpec"
    t: float
    delta: float

    def __post_init__(self):
        if self.delta <= 0:
            raise InvalidSpec("delta must be positive")


HamiltonianSpec = Union[
    LinearSpec, IsingSpec, CurieWeissSpec, TriangleCountSpec, SparseFourierSpec, SmoothedCutoffSpec
]


def edge_index_map(num_vertices: int) -> dict[tuple[int, int], int]:
    """Graph edge {i<j} -> coordinate index, in lexicographic order."""
    pairs = [(i, j) for i in range(num_vertices) for j in range(i + 1, num_vertices)]
    return {p: k for k, p in enumerate(pairs)}


def curie_weiss_interaction_matrix(beta: float, n: int) -> np.ndarray:
    """Interaction matrix with off-diagonal beta/n and zero diagonal.

    ``ising`` built from this matrix has gradient field A x, the form under
    which the classical magnetization analysis (constant solutions of
    x = tanh(beta x) up to the (n-1)/n finite-size factor) and the
    width bound beta*sqrt(n) are stated.  The literal ``curie_weiss``
    Hamiltonian corresponds to twice this matrix.
    """
    a = np.full((n, n), beta / n)
    np.fill_diagonal(a, 0.0)
    return a


@dataclass(frozen=True)
class BuiltHamiltonian:
    spec: HamiltonianSpec
    expansion: FourierExpansion
    gradient: Optional[Callable] = None  # batched closed form, X (..., n) -> (..., n)


def build_hamiltonian(spec: HamiltonianSpec, max_n: int | None = None) -> BuiltHamiltonian:
    """Realize a spec as a sparse expansion plus an optional closed-form gradient."""
    if isinstance(spec, LinearSpec):
        theta = np.array(spec.theta)
        exp = FourierExpansion.from_terms(spec.n, [((i,), theta[i]) for i in range(spec.n)])
        return BuiltHamiltonian(spec, exp, lambda x: np.broadcast_to(
            theta, np.asarray(x, dtype=np.float64).shape).copy())

    if isinstance(spec, IsingSpec):
        a, mu = spec.matrices()
        n = spec.n
        terms = [((i, j), a[i, j]) for i in range(n) for j in range(i + 1, n) if a[i, j] != 0.0]
        terms += [((i,), mu[i]) for i in range(n) if mu[i] != 0.0]
        exp = FourierExpansion.from_terms(n, terms)
        return BuiltHamiltonian(spec, exp, lambda x: np.asarray(x, dtype=np.float64) @ a + mu)

    if isinstance(spec, CurieWeissSpec):
        beta, n = spec.beta, spec.n
        c = 2.0 * beta / n  # ordered double sum counts each pair twice
        exp = FourierExpansion.from_terms(
            n, [((i, j), c) for i in range(n) for j in range(i + 1, n)])

        def cw_gradient(x):
            x = np.asarray(x, dtype=np.float64)
            s = x.sum(axis=-1, keepdims=True)
            return c * (s - x)

        return BuiltHamiltonian(spec, exp, cw_gradient)

    if isinstance(spec, TriangleCountSpec):
        nv = spec.num_vertices
        edges = edge_index_map(nv)
        coeff = 6.0 * spec.beta / nv  # pairwise-distinct ordered triples: 3! per triangle
        terms = []
        for i in range(nv):
            for j in range(i + 1, nv):
                for k in range(j + 1, nv):
                    terms.append(((edges[(i, j)], edges[(j, k)], edges[(i, k)]), coeff))
        return BuiltHamiltonian(spec, FourierExpansion.from_terms(spec.n, terms))

    if isinstance(spec, SparseFourierSpec):
        return BuiltHamiltonian(spec, FourierExpansion.from_terms(spec.n, spec.terms))

    if isinstance(spec, SmoothedCutoffSpec):
        inner = build_hamiltonian(spec.inner, max_n)
        n = inner.expansion.n
        _check_cap(n, max_n, "smoothed cutoff")
        psi = ScaledCutoffShape(n, spec.t, spec.delta)
        return BuiltHamiltonian(spec, compose(inner.expansion, psi, max_n))

    raise InvalidSpec(f"unknown Hamiltonian spec {type(spec).__name__}")


def ising_complexity_bounds(a: np.ndarray, mu: np.ndarray) -> ComplexityParams:
    """Closed-form parameter bounds for the pairwise model with gradient A x + mu.

    D <= sqrt(n tr A^2) + sqrt(n) mu_max, L1 <= mu_max + max_i sum_j |A_ij|,
    L2 <= max_i sum_j |A_ij|, with the unit floors applied.
    """
    spec = IsingSpec(tuple(map(tuple, np.asarray(a, dtype=np.float64).tolist())),
                     tuple(np.asarray(mu, dtype=np.float64).tolist()))
    a, mu = spec.matrices()
    n = spec.n
    mu_max = float(np.abs(mu).max()) if n else 0.0
    row_sum = float(np.abs(a).sum(axis=1).max())
    d = math.sqrt(n * float((a * a).sum())) + math.sqrt(n) * mu_max
    return ComplexityParams.from_raw(
        d, mu_max + row_sum, row_sum,
        d_provenance="closed_form_bound",
        l1_provenance="closed_form_bound",
        l2_provenance="closed_form_bound",
    )


# ---------------------------------------------------------------------------
# Smoothed cutoff weights
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmoothedCutoff:
    """Smoothed-cutoff Hamiltonian g = psi∘f together with its weight table.

    ``phi`` is 0 strictly below the (t - delta_prime) n level, exp(g) on the
    middle band, and exactly 1 at or above t n; ``log_phi`` carries the same
    table in log space (-inf where phi = 0) since g can reach hundreds of
    negative e-folds.
    """

    g: FourierExpansion
    psi: ScaledCutoffShape
    delta_prime: float
    f_values: np.ndarray
    g_values: np.ndarray
    phi: np.ndarray
    log_phi: np.ndarray
    zero_mask: np.ndarray
    mid_mask: np.ndarray
    top_mask: np.ndarray


DELTA_PRIME_FACTOR = (math.log(4.0) + 1.0) / 2.0


def smoothed_cutoff_weights(f: FourierExpansion, t: float, delta: float,
                            max_n: int | None = None) -> SmoothedCutoff:
    """Build (g, phi, delta') for threshold level t and smoothing width delta.

    Weights are relative to the uniform base measure.  A biased coin base
    would add a per-coordinate log-weight sum to g; that is a deliberate
    extension point, not implemented here.
    """
    if delta <= 0:
        raise InvalidSpec("delta must be positive")
    _check_cap(f.n, max_n, "smoothed cutoff")
    n = f.n
    delta_prime = DELTA_PRIME_FACTOR * delta
    psi = ScaledCutoffShape(n, t, delta)
    fvals = vertex_values(f, max_n)
    gvals = np.asarray(psi.value(fvals), dtype=np.float64)
    zero = fvals < (t - delta_prime) * n
    top = fvals >= t * n
    mid = ~zero & ~top
    log_phi = np.where(zero, -np.inf, gvals)
    with np.errstate(under="ignore"):
        phi = np.where(zero, 0.0, np.exp(gvals))
    g = compose(f, psi, max_n)
    return SmoothedCutoff(g=g, psi=psi, delta_prime=delta_prime,
                          f_values=fvals, g_values=gvals, phi=phi, log_phi=log_phi,
                          zero_mask=zero, mid_mask=mid, top_mask=top)
