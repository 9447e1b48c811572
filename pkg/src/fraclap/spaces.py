"""Fractional Sobolev space bookkeeping.

The (theta, lambda) pair selects which one-sided derivatives enter the
energy and whether a zero-order term is present, and thereby which space a
problem is posed in:

    theta = 0,      lambda = 0  -> left space with vanishing kernel part
    0 < theta < 1,  lambda = 0  -> symmetric space
    theta = 0,      lambda = 1  -> left space
    theta = 1,      lambda = 0  -> right space with vanishing kernel part
    0 < theta < 1,  lambda = 1  -> symmetric space
    theta = 1,      lambda = 1  -> right space

Traces are one-sided: the left-space trace reads the value at b (left-space
functions may be singular at a), the right-space trace reads at a.  Zero
trace variants exist only when alpha * p > 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import AssemblyError, DomainError, TraceSingularError, TraceUndefinedError
from .fracops import _power_limit, lp_integral, riesz_weak_derivative, rl_derivative
from .grids import FracParams, GridFunction, Interval

__all__ = [
    "SpaceKind",
    "SpaceTag",
    "NormReport",
    "select_space",
    "compute_norm",
    "trace",
    "poincare_constant",
    "riesz_norm_check",
]


class SpaceKind(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    SYMMETRIC = "symmetric"
    RIESZ = "riesz"
    LEFT_REGULAR = "left_regular"          # vanishing singular kernel part
    RIGHT_REGULAR = "right_regular"
    LEFT_ZERO_TRACE = "left_zero_trace"
    RIGHT_ZERO_TRACE = "right_zero_trace"
    SYM_ZERO_TRACE = "sym_zero_trace"


_ZERO_TRACE_KINDS = {SpaceKind.LEFT_ZERO_TRACE, SpaceKind.RIGHT_ZERO_TRACE,
                     SpaceKind.SYM_ZERO_TRACE}
_LEFT_KINDS = {SpaceKind.LEFT, SpaceKind.LEFT_REGULAR, SpaceKind.LEFT_ZERO_TRACE}
_RIGHT_KINDS = {SpaceKind.RIGHT, SpaceKind.RIGHT_REGULAR, SpaceKind.RIGHT_ZERO_TRACE}
_SYM_KINDS = {SpaceKind.SYMMETRIC, SpaceKind.SYM_ZERO_TRACE}


@dataclass(frozen=True)
class SpaceTag:
    kind: SpaceKind
    params: FracParams

    def __post_init__(self):
        if self.kind in _ZERO_TRACE_KINDS and not self.params.traces_exist:
            raise TraceUndefinedError(
                f"zero-trace space needs alpha*p > 1, got alpha*p = "
                f"{self.params.alpha * self.params.p:g}")

    @property
    def uses_left(self) -> bool:
        return self.kind in _LEFT_KINDS or self.kind in _SYM_KINDS or self.kind is SpaceKind.RIESZ

    @property
    def uses_right(self) -> bool:
        return self.kind in _RIGHT_KINDS or self.kind in _SYM_KINDS or self.kind is SpaceKind.RIESZ

    @property
    def constrained_ends(self) -> tuple[bool, bool]:
        """(at a, at b) Dirichlet constraints implied by the zero-trace kind."""
        if self.kind is SpaceKind.LEFT_ZERO_TRACE:
            return (False, True)       # left trace reads at b
        if self.kind is SpaceKind.RIGHT_ZERO_TRACE:
            return (True, False)
        if self.kind is SpaceKind.SYM_ZERO_TRACE:
            return (True, True)
        return (False, False)


def select_space(params: FracParams, zero_trace: bool = False) -> SpaceTag:
    """Map (theta, lambda) to the space the energy is naturally posed in,
    promoting to the zero-trace variant when requested."""
    theta, lam = params.theta, params.lam
    if zero_trace and not params.traces_exist:
        raise TraceUndefinedError(
            f"zero-trace space needs alpha*p > 1, got alpha*p = {params.alpha * params.p:g}")
    if 0.0 < theta < 1.0:
        kind = SpaceKind.SYM_ZERO_TRACE if zero_trace else SpaceKind.SYMMETRIC
    elif theta == 0.0:
        if zero_trace:
            kind = SpaceKind.LEFT_ZERO_TRACE
        else:
            kind = SpaceKind.LEFT if lam == 1 else SpaceKind.LEFT_REGULAR
    else:
        if zero_trace:
            kind = SpaceKind.RIGHT_ZERO_TRACE
        else:
            kind = SpaceKind.RIGHT if lam == 1 else SpaceKind.RIGHT_REGULAR
    return SpaceTag(kind, params)


@dataclass(frozen=True)
class NormReport:
    """Ingredients of a fractional Sobolev norm, assembled per space kind.

    ``total`` combines the pieces with the p-sum convention; the symmetric
    norm sums both one-sided norms, counting the Lp part in each.
    """

    lp_part: float
    left_seminorm: float
    right_seminorm: float
    riesz_seminorm: float
    total: float


def compute_norm(u: GridFunction, tag: SpaceTag) -> NormReport:
    p = tag.params.p
    alpha = tag.params.alpha
    lp_p = lp_integral(u, p)
    left = right = riesz = 0.0
    if tag.kind is SpaceKind.RIESZ:
        riesz = lp_integral(riesz_weak_derivative(u, alpha), p)
        total_p = lp_p + riesz
    else:
        if tag.uses_left:
            left = lp_integral(rl_derivative(u, alpha, "left"), p)
        if tag.uses_right:
            right = lp_integral(rl_derivative(u, alpha, "right"), p)
        if tag.kind in _SYM_KINDS:
            total_p = 2.0 * lp_p + left + right
        else:
            total_p = lp_p + left + right
    inv = 1.0 / p
    return NormReport(
        lp_part=lp_p ** inv,
        left_seminorm=left ** inv,
        right_seminorm=right ** inv,
        riesz_seminorm=riesz ** inv,
        total=total_p ** inv,
    )


def trace(u: GridFunction, side: str, params: FracParams | None = None) -> float:
    """One-sided trace: the 'left' trace evaluates at b, the 'right' trace
    at a, by power-aware extrapolation over the last three mesh cells.

    With params given, rejects regimes where the trace does not exist
    (alpha*p <= 1).  A negative singular exponent at the read endpoint is a
    hard error; disagreeing extrapolants raise through the returned spread
    check of the caller (the value itself is still the best extrapolant).
    """
    if params is not None and not params.traces_exist:
        raise TraceUndefinedError(
            f"trace needs alpha*p > 1, got alpha*p = {params.alpha * params.p:g}")
    if side == "left":
        end = 1
    elif side == "right":
        end = 0
    else:
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    e = u.singular_exponents[end]
    if e is not None and e < 0:
        raise TraceSingularError(f"function is singular at the read endpoint (exponent {e})")
    if end == 1:
        r = u.mesh[-1] - u.mesh[-4:-1][::-1]
        v = u.values[-4:-1][::-1]
        endpoint_value = u.values[-1]
    else:
        r = u.mesh[1:4] - u.mesh[0]
        v = u.values[1:4]
        endpoint_value = u.values[0]
    if np.isfinite(endpoint_value) and e is None:
        return float(endpoint_value)
    hint = e if e is not None else 1.0
    value, _spread = _power_limit(r, v, hint_q=hint)
    return float(value)


def riesz_norm_check(alpha: float, p: float) -> bool:
    """Whether the Riesz seminorm is a norm: (2 - alpha) p > 2.

    Gates the lambda = 0 Riesz solve; when false the seminorm has the
    two-dimensional kernel and cannot induce a norm.
    """
    if not 0.0 < alpha < 1.0 or not p > 1.0:
        return False
    return (2.0 - alpha) * p > 2.0


def poincare_constant(tag: SpaceTag, n_basis: int, iv: Interval = Interval(0.0, 1.0),
                      max_iter: int = 400) -> float:
    """Numerical estimate of the smallest C with ||u||_Lp <= C |u|_seminorm
    over an n_basis-dimensional trial space of the tagged space.

    For p = 2 this is a generalized symmetric eigenproblem; for other p a
    normalized ascent on the Rayleigh quotient.
    """
    from . import galerkin  # deferred: galerkin builds on spaces

    if tag.kind in (SpaceKind.LEFT, SpaceKind.RIGHT, SpaceKind.RIESZ):
        raise DomainError("Poincare bound needs a zero-trace, kernel-free, or symmetric tag")
    basis = galerkin.hat_basis(iv, n_basis + 2, tag)
    quad = galerkin.assembly_quadrature(basis.mesh)
    alpha = tag.params.alpha
    mats = []
    if tag.uses_left:
        mats.append(galerkin.hat_deriv_matrix(basis, alpha, "left", quad.x))
    if tag.uses_right:
        mats.append(galerkin.hat_deriv_matrix(basis, alpha, "right", quad.x))
    V = galerkin.hat_value_matrix(basis, quad.x)
    free = basis.free_indices
    W = quad.w
    K = sum((B[:, free].T * W) @ B[:, free] for B in mats)
    M = (V[:, free].T * W) @ V[:, free]
    K = 0.5 * (K + K.T)
    M = 0.5 * (M + M.T)
    p = tag.params.p
    if abs(p - 2.0) < 1e-12:
        from scipy.linalg import eigh
        try:
            mu = eigh(M, K, eigvals_only=True)
        except np.linalg.LinAlgError as exc:
            raise AssemblyError(str(exc))
        mu_max = float(np.max(mu))
        if not np.isfinite(mu_max) or mu_max <= 0:
            raise AssemblyError("generalized eigenproblem returned no positive ratio")
        return float(np.sqrt(mu_max))
    # general p: maximize ||u||_p / |u|_p by normalized subgradient ascent
    rng = np.random.default_rng(1234)
    c = rng.standard_normal(len(free))
    c /= np.linalg.norm(c)

    def ratio_and_grad(c):
        uq = V[:, free] @ c
        dq = [B[:, free] @ c for B in mats]
        num = float(W @ np.abs(uq) ** p)
        den = float(sum(W @ np.abs(d) ** p for d in dq))
        g_num = p * (V[:, free].T @ (W * np.abs(uq) ** (p - 1) * np.sign(uq)))
        g_den = p * sum(B[:, free].T @ (W * np.abs(d) ** (p - 1) * np.sign(d))
                        for B, d in zip(mats, dq))
        ratio = (num / den) ** (1.0 / p)
        grad = g_num / den - num * g_den / den ** 2
        return ratio, grad

    best, _ = ratio_and_grad(c)
    step = 0.5
    for _ in range(max_iter):
        ratio, grad = ratio_and_grad(c)
        trial = c + step * grad / max(np.linalg.norm(grad), 1e-300)
        trial /= np.linalg.norm(trial)
        new_ratio, _ = ratio_and_grad(trial)
        if new_ratio > ratio:
            c = trial
            best = max(best, new_ratio)
        else:
            step *= 0.5
            if step < 1e-10:
                break
    return float(best)
