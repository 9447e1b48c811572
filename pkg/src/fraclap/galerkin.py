"""Weak-form solvers for the p = 2 energy family.

The bilinear form

    a(u, v) = int (1-theta) D_left u D_left v + theta D_right u D_right v
              + lambda u v dx

is assembled over piecewise-linear hats (or polynomial bubbles) whose
one-sided fractional derivatives are available in closed form per mesh
segment.  Dirichlet problems constrain the trace-side endpoint values,
Neumann problems leave all admissible degrees of freedom unconstrained,
and the Riesz solver replaces the one-sided derivatives by their mean.

Hats that touch an endpoint where the active derivative direction is
singular (alpha * p >= 1) fall outside the energy space and are dropped
from the system automatically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as sla
from scipy import special as sps

from .errors import (
    AssemblyError,
    CoercivityError,
    DomainError,
    ExpectedKernelError,
    NormGateError,
    ShapeError,
)
from .grids import FracParams, GridFunction, Interval, default_grading, graded_mesh
from .spaces import SpaceKind, SpaceTag, riesz_norm_check, select_space
from . import fracops

__all__ = [
    "Basis",
    "hat_basis",
    "bubble_basis",
    "AssemblyQuadrature",
    "assembly_quadrature",
    "hat_value_matrix",
    "hat_deriv_matrix",
    "GalerkinSystem",
    "assemble",
    "SolveReport",
    "solve_dirichlet",
    "solve_neumann",
    "solve_riesz",
    "energy_of",
    "save_solution_csv",
    "save_matrix_coordinate",
]


# -- bases -------------------------------------------------------------------

@dataclass(frozen=True)
class Basis:
    """A finite-dimensional trial space with its constraint bookkeeping.

    ``active`` lists mesh nodes whose hats belong to the energy space;
    ``free`` indexes (into active) the unconstrained degrees of freedom.
    For the bubble kind, ``poly`` holds monomial coefficients in the
    normalized coordinate and the mesh is only a sampling backbone.
    """

    kind: str
    iv: Interval
    mesh: np.ndarray
    tag: SpaceTag
    active: np.ndarray
    free: np.ndarray
    poly: np.ndarray | None = None

    def __post_init__(self):
        self.mesh.flags.writeable = False

    @property
    def n_dof(self) -> int:
        return len(self.free)

    @property
    def n_active(self) -> int:
        return len(self.active)


def _endpoint_hat_admissible(tag: SpaceTag, end: int) -> bool:
    """Whether the hat touching this endpoint has finite energy.

    A hat with a nonzero endpoint value has a one-sided derivative blowing
    up like dist**(-alpha) whenever that side differentiates from this
    endpoint, which leaves L^p exactly when alpha * p < 1.
    """
    params = tag.params
    singular = params.alpha * params.p >= 1.0
    if tag.kind is SpaceKind.RIESZ:
        return not singular
    if end == 0 and tag.uses_left:
        return not singular
    if end == 1 and tag.uses_right:
        return not singular
    return True


def hat_basis(iv: Interval, n_cells: int, tag: SpaceTag, grading: float | None = None,
              mesh=None) -> Basis:
    """Piecewise-linear hats on a mesh graded toward both endpoints."""
    if mesh is None:
        if grading is None:
            grading = default_grading(tag.params.alpha)
        mesh = graded_mesh(iv, n_cells, grading=grading, side="both")
    mesh = np.asarray(mesh, dtype=float)
    n_nodes = mesh.size
    keep = np.ones(n_nodes, dtype=bool)
    if tag.kind is SpaceKind.RIESZ:
        keep[0] = keep[-1] = False  # conforming zero-trace subspace
    else:
        if not _endpoint_hat_admissible(tag, 0):
            keep[0] = False
        if not _endpoint_hat_admissible(tag, 1):
            keep[-1] = False
    active = np.nonzero(keep)[0]
    con_a, con_b = tag.constrained_ends
    free_mask = np.ones(active.size, dtype=bool)
    if con_a and active[0] == 0:
        free_mask[0] = False
    if con_b and active[-1] == n_nodes - 1:
        free_mask[-1] = False
    free = np.nonzero(free_mask)[0]
    return Basis("hat", iv, mesh, tag, active, free)


def bubble_basis(iv: Interval, n_dof: int, tag: SpaceTag, n_sample: int = 512) -> Basis:
    """Polynomial bubbles s**(k+1) (1-s) in the normalized coordinate,
    vanishing at both endpoints; conforming in every space."""
    if n_dof < 1:
        raise DomainError("need at least one bubble")
    deg = n_dof + 1
    poly = np.zeros((n_dof, deg + 1))
    for k in range(n_dof):
        # s^(k+1) - s^(k+2)
        poly[k, k + 1] = 1.0
        poly[k, k + 2] = -1.0
    mesh = graded_mesh(iv, n_sample, grading=default_grading(tag.params.alpha), side="both")
    active = np.arange(n_dof)
    free = np.arange(n_dof)
    return Basis("bubble", iv, mesh, tag, active, free, poly=poly)


# -- quadrature ---------------------------------------------------------------

@dataclass(frozen=True)
class AssemblyQuadrature:
    x: np.ndarray
    w: np.ndarray
    cell_of: np.ndarray  # owning mesh cell per quadrature point

    def __post_init__(self):
        for arr in (self.x, self.w, self.cell_of):
            arr.flags.writeable = False


def assembly_quadrature(mesh, n_gl: int = 7, k_geo: int = 5, ratio: float = 0.1
                        ) -> AssemblyQuadrature:
    """Per-cell composite Gauss rule, geometrically refined toward both cell
    ends where the hat fractional derivatives have their kinks."""
    mesh = np.asarray(mesh, dtype=float)
    gl_x, gl_w = np.polynomial.legendre.leggauss(n_gl)
    r = ratio ** np.arange(k_geo - 1, -1, -1)  # ascending: r^(K-1) .. 1
    cuts = np.concatenate([[0.0], 0.5 * r, 1.0 - 0.5 * r[::-1][1:], [1.0]])
    seg_lo, seg_hi = cuts[:-1], cuts[1:]
    lo, hi = mesh[:-1], mesh[1:]
    h = (hi - lo)[:, None]
    s_lo = lo[:, None] + h * seg_lo[None, :]
    s_hi = lo[:, None] + h * seg_hi[None, :]
    half = 0.5 * (s_hi - s_lo)
    mid = 0.5 * (s_hi + s_lo)
    x = (mid[..., None] + half[..., None] * gl_x).ravel()
    w = (half[..., None] * gl_w).ravel()
    cell_of = np.repeat(np.arange(lo.size), seg_lo.size * n_gl)
    return AssemblyQuadrature(x, w, cell_of)


# -- basis function evaluation -------------------------------------------------

def hat_value_matrix(basis: Basis, x: np.ndarray) -> np.ndarray:
    """Values of every basis function at x, shape (len(x), n_active)."""
    x = np.asarray(x, dtype=float)
    if basis.kind == "bubble":
        s = (x - basis.iv.a) / basis.iv.length
        powers = np.vander(s, basis.poly.shape[1], increasing=True)
        return powers @ basis.poly.T
    mesh = basis.mesh
    n = mesh.size
    idx = np.clip(np.searchsorted(mesh, x, side="right") - 1, 0, n - 2)
    t = (x - mesh[idx]) / (mesh[idx + 1] - mesh[idx])
    out = np.zeros((x.size, n))
    rows = np.arange(x.size)
    out[rows, idx] = 1.0 - t
    out[rows, idx + 1] = t
    return out[:, basis.active]


def _hat_deriv_full(mesh, alpha, side, x):
    """Closed-form one-sided fractional derivatives of all hats at x."""
    x = np.asarray(x, dtype=float)
    n = mesh.size
    h = np.diff(mesh)
    inv_g1 = float(sps.rgamma(1.0 - alpha))
    inv_g2 = float(sps.rgamma(2.0 - alpha))
    if side == "left":
        P = np.maximum(x[:, None] - mesh[None, :], 0.0) ** (1.0 - alpha)
        psi = (P[:, :-1] - P[:, 1:]) * inv_g2  # (nx, n_cells)
    else:
        P = np.maximum(mesh[None, :] - x[:, None], 0.0) ** (1.0 - alpha)
        psi = (P[:, :-1] - P[:, 1:]) * inv_g2
    out = np.zeros((x.size, n))
    out[:, :-1] -= psi / h
    out[:, 1:] += psi / h
    if side == "left":
        out[:, 0] += fracops._pow_dist(x - mesh[0], -alpha) * inv_g1
    else:
        out[:, -1] += fracops._pow_dist(mesh[-1] - x, -alpha) * inv_g1
    return out


def hat_deriv_matrix(basis: Basis, alpha: float, side: str, x: np.ndarray) -> np.ndarray:
    """One-sided fractional derivative of every basis function at x."""
    if side not in ("left", "right"):
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    x = np.asarray(x, dtype=float)
    if basis.kind == "bubble":
        return _bubble_deriv_matrix(basis, alpha, side, x)
    return _hat_deriv_full(basis.mesh, alpha, side, x)[:, basis.active]


def _bubble_deriv_matrix(basis: Basis, alpha: float, side: str, x: np.ndarray) -> np.ndarray:
    iv = basis.iv
    L = iv.length
    deg = basis.poly.shape[1]
    if side == "left":
        coeffs = basis.poly
        s = (x - iv.a) / L
    else:
        # re-expand each polynomial in powers of (1 - s)
        m = np.arange(deg)
        T = np.zeros((deg, deg))
        for j in range(deg):
            for k in range(j + 1):
                T[k, j] = sps.comb(j, k) * (-1.0) ** k
        coeffs = basis.poly @ T.T
        s = (iv.b - x) / L
    out = np.zeros((x.size, basis.poly.shape[0]))
    for m in range(deg):
        col = coeffs[:, m]
        if not np.any(col):
            continue
        coef = float(sps.gamma(m + 1.0) * sps.rgamma(m + 1.0 - alpha))
        out += np.outer(fracops._pow_dist(s, m - alpha), col * coef)
    return out * L ** (-alpha)


# -- assembly ------------------------------------------------------------------

@dataclass
class GalerkinSystem:
    """Assembled weighted stiffness (including the mass term when lambda = 1),
    load vector, and the space bookkeeping needed to solve."""

    stiffness: np.ndarray
    load: np.ndarray
    params: FracParams
    tag: SpaceTag
    basis: Basis
    quad: AssemblyQuadrature
    mass: np.ndarray = field(repr=False, default=None)

    @property
    def n_dof(self) -> int:
        return self.basis.n_dof


def _exact_boundary_block(mesh, alpha, side):
    """Exact stiffness contributions of the first (left) or last (right)
    cell for the endpoint hat, where the integrand is a pure power and
    graded Gauss cells lose accuracy.  Returns ((i, j, value), ...) in
    full-node indices."""
    inv_g1 = float(sps.rgamma(1.0 - alpha))
    inv_g2 = float(sps.rgamma(2.0 - alpha))
    if side == "left":
        h = mesh[1] - mesh[0]
        i0, i1 = 0, 1
    else:
        h = mesh[-1] - mesh[-2]
        i0, i1 = mesh.size - 1, mesh.size - 2
    s_own = -1.0 / h   # slope of the endpoint hat on its cell
    s_nb = 1.0 / h     # slope of the neighbor hat
    # D(hat_end) = dist**(-alpha) inv_g1 + s_own dist**(1-alpha) inv_g2
    # D(hat_nb)  = s_nb dist**(1-alpha) inv_g2           (on this cell)
    t1 = h ** (1.0 - 2.0 * alpha) / (1.0 - 2.0 * alpha) * inv_g1 ** 2
    t2 = h ** (2.0 - 2.0 * alpha) / (2.0 - 2.0 * alpha) * inv_g1 * inv_g2
    t3 = h ** (3.0 - 2.0 * alpha) / (3.0 - 2.0 * alpha) * inv_g2 ** 2
    own_own = t1 + 2.0 * s_own * t2 + s_own ** 2 * t3
    own_nb = s_nb * (t2 + s_own * t3)
    nb_nb = s_nb ** 2 * t3
    return ((i0, i0, own_own), (i0, i1, own_nb), (i1, i1, nb_nb))


def _one_sided_stiffness(basis: Basis, alpha: float, side: str,
                         quad: AssemblyQuadrature) -> np.ndarray:
    D = hat_deriv_matrix(basis, alpha, side, quad.x)
    if basis.kind == "hat":
        end_node = 0 if side == "left" else basis.mesh.size - 1
        end_cell = 0 if side == "left" else basis.mesh.size - 2
        include_end = end_node in basis.active
        if include_end:
            # replace the end-cell quadrature by the exact pure-power block
            w = np.where(quad.cell_of == end_cell, 0.0, quad.w)
            D = np.where(np.isfinite(D), D, 0.0)
            S_full = np.zeros((basis.mesh.size, basis.mesh.size))
            S_act = (D.T * w) @ D
            S_full[np.ix_(basis.active, basis.active)] = S_act
            for i, j, val in _exact_boundary_block(basis.mesh, alpha, side):
                S_full[i, j] += val
                if i != j:
                    S_full[j, i] += val
            return S_full[np.ix_(basis.active, basis.active)]
    return (D.T * quad.w) @ D


def _mass_matrix(basis: Basis, quad: AssemblyQuadrature) -> np.ndarray:
    V = hat_value_matrix(basis, quad.x)
    return (V.T * quad.w) @ V


def _load_vector(basis: Basis, f, quad: AssemblyQuadrature) -> np.ndarray:
    """F_j = int f phi_j dx; grid functions use exact moments for tagged
    endpoint powers, callables are evaluated at the quadrature points."""
    if f is None:
        return np.zeros(basis.n_active)
    if isinstance(f, np.ndarray):
        if f.shape != (basis.n_active,):
            raise ShapeError("functional vector length must match the active basis size")
        return f.astype(float)
    if isinstance(f, GridFunction):
        if basis.kind == "hat":
            fb = GridFunction(basis.mesh, f.interpolate(basis.mesh), f.singular_exponents)
            mesh = basis.mesh
            rem = fb.remainder_values()
            # exact piecewise-linear mass action on the remainder
            h = np.diff(mesh)
            F = np.zeros(mesh.size)
            F[:-1] += h / 6.0 * (2.0 * rem[:-1] + rem[1:])
            F[1:] += h / 6.0 * (rem[:-1] + 2.0 * rem[1:])
            a, b = mesh[0], mesh[-1]
            for end, c, e in fb.singular_parts():
                if e <= -1.0:
                    raise DomainError(f"source exponent {e} <= -1 is not integrable")
                dist = (mesh - a) if end == 0 else (b - mesh)[::-1]
                d0, d1 = dist[:-1], dist[1:]
                with np.errstate(divide="ignore", invalid="ignore"):
                    m0 = (d1 ** (e + 1.0) - d0 ** (e + 1.0)) / (e + 1.0)
                    m1 = (d1 ** (e + 2.0) - d0 ** (e + 2.0)) / (e + 2.0) - d0 * m0
                m0[0] = d1[0] ** (e + 1.0) / (e + 1.0)
                m1[0] = d1[0] ** (e + 2.0) / (e + 2.0)
                hh = d1 - d0
                contrib_lo = c * (m0 - m1 / hh)   # weight of the lower-node hat
                contrib_hi = c * (m1 / hh)
                Fp = np.zeros(mesh.size)
                Fp[:-1] += contrib_lo
                Fp[1:] += contrib_hi
                if end == 1:
                    Fp = Fp[::-1]
                F += Fp
            return F[basis.active]
        fq = f.interpolate(quad.x)
        V = hat_value_matrix(basis, quad.x)
        return V.T @ (quad.w * fq)
    if callable(f):
        fq = np.asarray(f(quad.x), dtype=float)
        V = hat_value_matrix(basis, quad.x)
        return V.T @ (quad.w * fq)
    raise DomainError("source must be a GridFunction, callable, or load vector")


def assemble(params: FracParams, basis: Basis, f=None) -> GalerkinSystem:
    """Assemble the weighted bilinear form and load for the p = 2 family."""
    if abs(params.p - 2.0) > 1e-12:
        raise DomainError("the Galerkin path is the p = 2 specialization; "
                          "use the energy minimizer for other p")
    quad = assembly_quadrature(basis.mesh)
    theta, lam = params.theta, params.lam
    n = basis.n_active
    A = np.zeros((n, n))
    if theta < 1.0:
        A += (1.0 - theta) * _one_sided_stiffness(basis, params.alpha, "left", quad)
    if theta > 0.0:
        A += theta * _one_sided_stiffness(basis, params.alpha, "right", quad)
    M = _mass_matrix(basis, quad)
    if lam == 1:
        A += M
    asym = np.max(np.abs(A - A.T)) / max(np.max(np.abs(A)), 1e-300)
    if asym > 1e-10:
        raise AssemblyError(f"stiffness asymmetry {asym:.2e} exceeds tolerance")
    A = 0.5 * (A + A.T)
    F = _load_vector(basis, f, quad)
    return GalerkinSystem(A, F, params, basis.tag, basis, quad, mass=M)


# -- solvers -------------------------------------------------------------------

@dataclass(frozen=True)
class SolveReport:
    solution: GridFunction
    energy: float
    weak_residual: float
    condition_estimate: float
    coefficients: np.ndarray = None

    def __post_init__(self):
        if self.coefficients is not None:
            self.coefficients.flags.writeable = False


def _solution_grid(basis: Basis, coeffs_active: np.ndarray) -> GridFunction:
    if basis.kind == "bubble":
        vals = hat_value_matrix(basis, basis.mesh) @ coeffs_active
        return GridFunction(basis.mesh, vals)
    vals = np.zeros(basis.mesh.size)
    vals[basis.active] = coeffs_active
    return GridFunction(basis.mesh, vals)


def _finish(system: GalerkinSystem, u_act: np.ndarray, free: np.ndarray) -> SolveReport:
    A, F = system.stiffness, system.load
    res = A @ u_act - F
    weak_residual = float(np.max(np.abs(res[free]))) if len(free) else 0.0
    Aff = A[np.ix_(free, free)]
    cond = float(np.linalg.cond(Aff)) if len(free) else 0.0
    energy = float(0.5 * u_act @ A @ u_act - F @ u_act)
    return SolveReport(_solution_grid(system.basis, u_act), energy, weak_residual,
                       cond, u_act.copy())


def solve_dirichlet(system: GalerkinSystem, g_left: float = 0.0,
                    g_right: float = 0.0) -> SolveReport:
    """Solve with essential boundary data on the active trace sides.

    Data on a side whose trace condition is switched off by theta is
    ignored; for the symmetric space only homogeneous data is meaningful
    (its members vanish at both endpoints).
    """
    basis, tag = system.basis, system.tag
    con_a, con_b = tag.constrained_ends
    if not (con_a or con_b):
        raise DomainError("system was assembled without Dirichlet constraints; "
                          "use solve_neumann")
    if con_a and con_b and (g_left != 0.0 or g_right != 0.0):
        raise DomainError("two-sided spaces admit only homogeneous Dirichlet data")
    mesh, iv = basis.mesh, basis.iv
    nodes = mesh[basis.active]
    lift = np.zeros(basis.n_active)
    if con_b and not con_a and g_right != 0.0:
        lift = g_right * (nodes - iv.a) / iv.length
    elif con_a and not con_b and g_left != 0.0:
        lift = g_left * (iv.b - nodes) / iv.length
    free = basis.free
    A, F = system.stiffness, system.load
    rhs = (F - A @ lift)[free]
    Aff = A[np.ix_(free, free)]
    try:
        c, low = sla.cho_factor(Aff)
    except np.linalg.LinAlgError as exc:
        raise CoercivityError(f"constrained stiffness not positive definite: {exc}")
    u_free = sla.cho_solve((c, low), rhs)
    u_act = lift.copy()
    u_act[free] += u_free
    return _finish(system, u_act, free)


def solve_neumann(system: GalerkinSystem, deflate: bool | None = None) -> SolveReport:
    """Solve with all admissible degrees of freedom unconstrained, so the
    homogeneous natural boundary conditions emerge from the variational
    structure rather than being imposed.

    No compatibility condition on the source is required.  With lambda = 0
    the one-sided energy space is the kernel-free subspace; if the
    assembled operator nevertheless exposes a near-null direction it is
    projected out when ``deflate`` is enabled (the default for lambda = 0).
    """
    basis, tag, params = system.basis, system.tag, system.params
    if any(tag.constrained_ends):
        raise DomainError("system carries Dirichlet constraints; use solve_dirichlet")
    free = basis.free
    A, F = system.stiffness, system.load
    Aff = A[np.ix_(free, free)]
    if deflate is None:
        deflate = params.lam == 0
    if not deflate:
        cond = np.linalg.cond(Aff)
        if cond > 1e12:
            raise ExpectedKernelError(
                "assembled operator is numerically singular (condition "
                f"{cond:.2e}); the lambda = 0 energy lives in the kernel-free "
                "subspace, re-solve with deflate=True")
        u_free = sla.solve(Aff, F[free], assume_a="sym")
    else:
        evals, evecs = sla.eigh(Aff)
        keep = evals > 1e-12 * evals[-1]
        coef = (evecs.T @ F[free])[keep] / evals[keep]
        u_free = evecs[:, keep] @ coef
    u_act = np.zeros(basis.n_active)
    u_act[free] = u_free
    return _finish(system, u_act, free)


def solve_riesz(alpha: float, lam: float, f, basis: Basis, p: float = 2.0) -> SolveReport:
    """Galerkin solve for the Riesz energy: the stiffness pairs the mean of
    the two one-sided derivatives of the basis functions.

    With lambda = 0 the seminorm must itself be a norm, which holds exactly
    when (2 - alpha) p > 2; otherwise the solve is rejected.
    """
    if lam not in (0, 1, 0.0, 1.0):
        raise DomainError("lambda switch must be 0 or 1")
    if lam == 0 and not riesz_norm_check(alpha, p):
        raise NormGateError(
            f"the Riesz seminorm is not a norm at alpha={alpha}, p={p}: "
            f"(2 - alpha) p = {(2 - alpha) * p:g} <= 2")
    if abs(p - 2.0) > 1e-12:
        raise DomainError("the Galerkin path is the p = 2 specialization")
    quad = assembly_quadrature(basis.mesh)
    Dm = hat_deriv_matrix(basis, alpha, "left", quad.x)
    Dp = hat_deriv_matrix(basis, alpha, "right", quad.x)
    Dz = 0.5 * (Dm + Dp)
    A = (Dz.T * quad.w) @ Dz
    M = _mass_matrix(basis, quad)
    if lam == 1:
        A = A + M
    A = 0.5 * (A + A.T)
    F = _load_vector(basis, f, quad)
    params = FracParams(alpha=alpha, p=2.0, theta=0.5, lam=lam)
    tag = SpaceTag(SpaceKind.RIESZ, params)
    system = GalerkinSystem(A, F, params, tag, basis, quad, mass=M)
    free = basis.free
    Aff = A[np.ix_(free, free)]
    try:
        c, low = sla.cho_factor(Aff)
    except np.linalg.LinAlgError as exc:
        raise CoercivityError(f"Riesz system not positive definite: {exc}")
    u_free = sla.cho_solve((c, low), F[free])
    u_act = np.zeros(basis.n_active)
    u_act[free] = u_free
    return _finish(system, u_act, free)


# -- energy --------------------------------------------------------------------

def energy_of(u: GridFunction, params: FracParams, f=None) -> float:
    """E(u) = int [(1-theta)|D_left u|^2 + theta|D_right u|^2 + lambda u^2]/2
    - f u dx, evaluated with the assembly quadrature of u's mesh."""
    quad = assembly_quadrature(u.mesh)
    theta, lam = params.theta, params.lam
    total = 0.0
    if theta < 1.0:
        d = fracops.rl_derivative(u, params.alpha, "left", x_eval=quad.x)
        total += 0.5 * (1.0 - theta) * float(quad.w @ d ** 2)
    if theta > 0.0:
        d = fracops.rl_derivative(u, params.alpha, "right", x_eval=quad.x)
        total += 0.5 * theta * float(quad.w @ d ** 2)
    if lam == 1:
        total += 0.5 * fracops.lp_integral(u, 2.0)
    if f is not None:
        if isinstance(f, GridFunction):
            fb = GridFunction(u.mesh, f.interpolate(u.mesh), f.singular_exponents)
            finite_u = GridFunction(u.mesh, np.where(np.isfinite(u.values), u.values, 0.0))
            total -= fracops.inner_l2(fb, finite_u)
        elif callable(f):
            uq = np.interp(quad.x, u.mesh, np.where(np.isfinite(u.values), u.values, 0.0))
            total -= float(quad.w @ (np.asarray(f(quad.x), dtype=float) * uq))
        else:
            raise DomainError("source must be a GridFunction or callable")
    return total


# -- exports -------------------------------------------------------------------

def save_solution_csv(report: SolveReport, path) -> None:
    from .grids import write_csv
    write_csv(report.solution, path)


def save_matrix_coordinate(system: GalerkinSystem, path) -> None:
    """Row col value text dump of the assembled stiffness."""
    A = system.stiffness
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i in range(A.shape[0]):
            for j in range(A.shape[1]):
                if A[i, j] != 0.0:
                    fh.write(f"{i} {j} {A[i, j]:.17g}\n")
