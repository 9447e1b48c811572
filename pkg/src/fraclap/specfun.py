"""Special functions behind the fractional operators.

Gamma, the Gauss hypergeometric function on its integral-representation
domain, the symmetric-weight Jacobi polynomial family on (0, 1), and the
weighted inner product they are orthogonal under.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as sps

from .errors import DomainError, ShapeError
from .grids import GridFunction, Interval, graded_mesh

__all__ = [
    "gamma_fn",
    "gauss_2f1",
    "JacobiBasis",
    "jacobi_basis",
    "jacobi_coeff",
    "jacobi_eval",
    "WeightedMeasure",
    "weighted_measure",
    "weighted_inner",
]


def gamma_fn(z):
    """Euler Gamma for positive real arguments.

    Negative arguments are rejected; nothing in this package needs the
    reflection to the left half line.
    """
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0.0):
        raise DomainError("gamma_fn requires z > 0")
    out = sps.gamma(z)
    return float(out) if out.ndim == 0 else out


_SERIES_MAX_TERMS = 1000


def _2f1_series(a, b, c, z):
    total = 1.0
    term = 1.0
    for k in range(_SERIES_MAX_TERMS):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total
    return total


def _2f1_integral(a, b, c, z, n_nodes=96):
    # Gauss-Jacobi nodes absorb the endpoint weight t**(b-1) (1-t)**(c-b-1)
    # exactly, leaving the analytic factor (1 - z t)**(-a).
    t, w = sps.roots_jacobi(n_nodes, c - b - 1.0, b - 1.0)
    t = 0.5 * (t + 1.0)
    w = w * 0.5 ** (c - 1.0)
    vals = (1.0 - z * t) ** (-a)
    integral = float(w @ vals)
    return integral * sps.gamma(c) / (sps.gamma(b) * sps.gamma(c - b))


def gauss_2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric 2F1(a, b; c; z) for 0 < b < c and z < 1.

    Power series for |z| <= 0.5, weighted quadrature of the Euler integral
    representation otherwise.  Accuracy degrades as z -> 1- when c - a - b
    is small or negative; callers near that edge should work with the
    endpoint limit directly.
    """
    a, b, c, z = float(a), float(b), float(c), float(z)
    if not (0.0 < b < c):
        raise DomainError(f"gauss_2f1 requires 0 < b < c, got b={b}, c={c}")
    if not z < 1.0:
        raise DomainError(f"gauss_2f1 requires z < 1, got z={z}")
    if abs(z) <= 0.5:
        return _2f1_series(a, b, c, z)
    return _2f1_integral(a, b, c, z)


# -- Jacobi polynomials on (0, 1) with the symmetric weight -----------------

def jacobi_coeff(n: int, k: int, alpha: float) -> float:
    """Monomial coefficient k of the degree-n symmetric-weight Jacobi
    polynomial, computed in log-Gamma space with sign tracking so large n
    cannot overflow."""
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if not (isinstance(n, (int, np.integer)) and isinstance(k, (int, np.integer))):
        raise DomainError("n and k must be integers")
    if n < 0 or k < 0 or k > n:
        raise DomainError(f"need 0 <= k <= n, got n={n}, k={k}")
    s = alpha / 2.0
    log_num = sps.gammaln(n + s + 1.0) + sps.gammaln(n + k + alpha + 1.0)
    log_den = (
        sps.gammaln(k + 1.0)
        + sps.gammaln(n - k + 1.0)
        + sps.gammaln(n + alpha + 1.0)
        + sps.gammaln(k + s + 1.0)
    )
    sign = -1.0 if (n + k) % 2 else 1.0
    return sign * float(np.exp(log_num - log_den))


@dataclass(frozen=True)
class JacobiBasis:
    """Coefficient table of the symmetric-weight Jacobi polynomials.

    Row n of ``coeffs`` holds the monomial coefficients of the degree-n
    polynomial; entries beyond column n are zero.
    """

    alpha: float
    max_degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs.flags.writeable = False


def jacobi_basis(alpha: float, max_degree: int) -> JacobiBasis:
    if max_degree < 0:
        raise DomainError("max_degree must be >= 0")
    table = np.zeros((max_degree + 1, max_degree + 1))
    for n in range(max_degree + 1):
        for k in range(n + 1):
            table[n, k] = jacobi_coeff(n, k, alpha)
    return JacobiBasis(float(alpha), int(max_degree), table)


def jacobi_eval(basis: JacobiBasis, n: int, x):
    """Horner evaluation of the degree-n basis polynomial at x in [0, 1]."""
    if n < 0 or n > basis.max_degree:
        raise DomainError(f"degree {n} outside basis range 0..{basis.max_degree}")
    x = np.asarray(x, dtype=float)
    row = basis.coeffs[n]
    out = np.zeros_like(x)
    for k in range(n, -1, -1):
        out = out * x + row[k]
    return float(out) if out.ndim == 0 else out


# -- weighted inner product --------------------------------------------------

_GL4_NODES, _GL4_WEIGHTS = np.polynomial.legendre.leggauss(4)


@dataclass(frozen=True)
class WeightedMeasure:
    """The measure rho(x) dx on (0, 1) with rho = x**(alpha/2) (1-x)**(alpha/2),
    realized by composite Gauss cells on a mesh graded toward both endpoints."""

    alpha: float
    n_nodes: int
    grading: float
    cell_mesh: np.ndarray
    nodes: np.ndarray
    node_weights: np.ndarray

    def __post_init__(self):
        for arr in (self.cell_mesh, self.nodes, self.node_weights):
            arr.flags.writeable = False

    def weight(self, x):
        x = np.asarray(x, dtype=float)
        s = self.alpha / 2.0
        return np.where((x > 0) & (x < 1), x ** s * (1.0 - x) ** s, 0.0)


def weighted_measure(alpha: float, n_nodes: int = 2048, grading: float | None = None) -> WeightedMeasure:
    """Build the quadrature descriptor: composite 4-point Gauss cells on a
    both-ends graded mesh of (0, 1) with n_nodes total quadrature nodes."""
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    per_cell = 4
    n_cells = max(2, n_nodes // per_cell)
    if grading is None:
        grading = max(2.0, 2.0 / alpha)
    cell_mesh = graded_mesh(Interval(0.0, 1.0), n_cells, grading=grading, side="both")
    lo, hi = cell_mesh[:-1], cell_mesh[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = (mid[:, None] + half[:, None] * _GL4_NODES[None, :]).ravel()
    weights = (half[:, None] * _GL4_WEIGHTS[None, :]).ravel()
    return WeightedMeasure(float(alpha), nodes.size, float(grading), cell_mesh, nodes, weights)


def weighted_inner(f: GridFunction, g: GridFunction, w: WeightedMeasure) -> float:
    """Approximate the rho-weighted inner product of f and g on (0, 1).

    When f and g are sampled exactly at the measure's quadrature nodes the
    rule is applied directly; when they share some other mesh they are
    interpolated linearly onto the nodes.  Mismatched meshes are rejected.
    """
    if f.mesh.shape != g.mesh.shape or not np.array_equal(f.mesh, g.mesh):
        raise ShapeError("weighted_inner needs f and g on the same mesh")
    rho = w.weight(w.nodes)
    if f.mesh.size == w.nodes.size and np.allclose(f.mesh, w.nodes, rtol=0, atol=1e-14):
        fv, gv = f.values, g.values
    else:
        fv = np.interp(w.nodes, f.mesh, f.values)
        gv = np.interp(w.nodes, g.mesh, g.values)
    return float(np.sum(w.node_weights * rho * fv * gv))


def weighted_norm(f: GridFunction, w: WeightedMeasure) -> float:
    return float(np.sqrt(max(weighted_inner(f, f, w), 0.0)))
