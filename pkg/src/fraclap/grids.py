"""Meshes, sampled functions, and CSV round-tripping.

Everything downstream operates on :class:`GridFunction`: a real function
sampled on a strictly increasing mesh spanning a finite interval, with
optional bookkeeping for known power-law behavior at either endpoint.
A singular exponent ``e`` recorded at an endpoint means the function
behaves like ``c * dist**e + d`` near that endpoint, where ``dist`` is the
distance to the endpoint.  Operators exploit the exponent to integrate and
differentiate the singular part in closed form instead of trusting the
piecewise-linear interpolant there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ShapeError

__all__ = [
    "Interval",
    "FracParams",
    "GridFunction",
    "grid_function",
    "from_callable",
    "uniform_mesh",
    "graded_mesh",
    "default_grading",
    "read_csv",
    "write_csv",
]


@dataclass(frozen=True)
class Interval:
    """A finite open interval (a, b)."""

    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (np.isfinite(a) and np.isfinite(b) and a < b):
            raise DomainError(f"interval needs finite a < b, got ({self.a}, {self.b})")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self) -> float:
        return self.b - self.a

    def reflect(self, x):
        """Mirror points through the midpoint: x -> a + b - x."""
        return self.a + self.b - np.asarray(x, dtype=float)


@dataclass(frozen=True)
class FracParams:
    """The parameter tuple (alpha, p, theta, lambda) selecting space, energy, and problem.

    ``lam`` is the zero-order-term switch and must be 0 or 1.  ``theta``
    weights left versus right differentiation in the energy density.
    """

    alpha: float
    p: float = 2.0
    theta: float = 0.0
    lam: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.p > 1.0:
            raise DomainError(f"p must exceed 1, got {self.p}")
        if not 0.0 <= self.theta <= 1.0:
            raise DomainError(f"theta must lie in [0, 1], got {self.theta}")
        if self.lam not in (0, 1, 0.0, 1.0):
            raise DomainError(f"lambda switch must be 0 or 1, got {self.lam}")

    @property
    def traces_exist(self) -> bool:
        return self.alpha * self.p > 1.0


def _combine_exponents(ea, eb):
    if ea is None:
        return eb
    if eb is None:
        return ea
    return min(ea, eb)


@dataclass(frozen=True)
class GridFunction:
    """A function sampled on a strictly increasing mesh over [a, b].

    ``singular_exponents`` is a pair ``(e_a, e_b)`` of optional endpoint
    exponents.  Non-finite values are permitted only at an endpoint whose
    recorded exponent is negative.
    """

    mesh: np.ndarray
    values: np.ndarray
    singular_exponents: tuple = (None, None)

    def __post_init__(self):
        mesh = np.ascontiguousarray(self.mesh, dtype=float)
        values = np.ascontiguousarray(self.values, dtype=float)
        if mesh.ndim != 1 or mesh.shape != values.shape:
            raise ShapeError("mesh and values must be 1-d arrays of equal length")
        if mesh.size < 2:
            raise ShapeError("need at least two mesh nodes")
        if not np.all(np.diff(mesh) > 0):
            raise ShapeError("mesh must be strictly increasing")
        ea, eb = self.singular_exponents
        ea = None if ea is None else float(ea)
        eb = None if eb is None else float(eb)
        if not np.all(np.isfinite(values[1:-1])):
            raise DomainError("values must be finite at interior nodes")
        if not np.isfinite(values[0]) and not (ea is not None and ea < 0):
            raise DomainError("non-finite left endpoint value without a negative exponent tag")
        if not np.isfinite(values[-1]) and not (eb is not None and eb < 0):
            raise DomainError("non-finite right endpoint value without a negative exponent tag")
        mesh.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "mesh", mesh)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "singular_exponents", (ea, eb))

    # -- basic geometry -------------------------------------------------
    @property
    def interval(self) -> Interval:
        return Interval(self.mesh[0], self.mesh[-1])

    @property
    def n(self) -> int:
        return self.mesh.size

    # -- algebra ---------------------------------------------------------
    def _check_same_mesh(self, other: "GridFunction"):
        if self.mesh.shape != other.mesh.shape or not np.array_equal(self.mesh, other.mesh):
            raise ShapeError("grid functions live on different meshes")

    def __add__(self, other):
        if not isinstance(other, GridFunction):
            return NotImplemented
        self._check_same_mesh(other)
        ea = _combine_exponents(self.singular_exponents[0], other.singular_exponents[0])
        eb = _combine_exponents(self.singular_exponents[1], other.singular_exponents[1])
        with np.errstate(invalid="ignore"):
            vals = self.values + other.values
        # inf + (-inf) at a tagged endpoint is simply "still singular there"
        if not np.isfinite(vals[0]) and ea is not None and ea < 0:
            vals[0] = np.nan if np.isnan(vals[0]) else vals[0]
        return GridFunction(self.mesh, vals, (ea, eb))

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, scalar):
        if isinstance(scalar, GridFunction):
            return NotImplemented
        c = float(scalar)
        exps = self.singular_exponents if c != 0.0 else (None, None)
        if c == 0.0:
            vals = np.zeros_like(self.values)
        else:
            with np.errstate(invalid="ignore"):
                vals = c * self.values
        return GridFunction(self.mesh, vals, exps)

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1.0)

    # -- endpoint power models -------------------------------------------
    def endpoint_model(self, end: int):
        """Fit c*dist**e + d through the two nodes nearest a tagged endpoint.

        Returns (c, d); end is 0 for the left endpoint, 1 for the right.
        Returns (0.0, value-at-endpoint) when the endpoint carries no tag.
        """
        e = self.singular_exponents[end]
        if e is None:
            v = self.values[0 if end == 0 else -1]
            return 0.0, float(v)
        if self.n < 3:
            raise ShapeError("endpoint model fit needs at least three nodes")
        if end == 0:
            r1, r2 = self.mesh[1] - self.mesh[0], self.mesh[2] - self.mesh[0]
            v1, v2 = self.values[1], self.values[2]
        else:
            r1, r2 = self.mesh[-1] - self.mesh[-2], self.mesh[-1] - self.mesh[-3]
            v1, v2 = self.values[-2], self.values[-3]
        w1, w2 = r1 ** e, r2 ** e
        c = (v1 - v2) / (w1 - w2)
        d = v1 - c * w1
        return float(c), float(d)

    def singular_parts(self):
        """[(end, coefficient, exponent)] for each tagged endpoint with c != 0."""
        parts = []
        for end in (0, 1):
            e = self.singular_exponents[end]
            if e is None:
                continue
            c, _ = self.endpoint_model(end)
            if c != 0.0:
                parts.append((end, c, e))
        return parts

    def remainder_values(self) -> np.ndarray:
        """Samples of the function minus its fitted endpoint power parts.

        The returned array is finite everywhere; tagged endpoint nodes hold
        the fitted additive constants.
        """
        vals = self.values.copy()
        a, b = self.mesh[0], self.mesh[-1]
        fits = {}
        for end in (0, 1):
            if self.singular_exponents[end] is not None:
                fits[end] = self.endpoint_model(end)
        for end, (c, d) in fits.items():
            e = self.singular_exponents[end]
            dist = (self.mesh - a) if end == 0 else (b - self.mesh)
            idx = 0 if end == 0 else -1
            with np.errstate(divide="ignore"):
                pw = np.where(dist > 0, dist ** e, 0.0)
            vals = vals - c * pw
            vals[idx] = d
        # subtracting one end's model perturbs the other end's pinned constant
        if 0 in fits and 1 in fits:
            ca, _ = fits[0]
            cb, _ = fits[1]
            ea, eb = self.singular_exponents
            vals[0] -= cb * (b - a) ** eb
            vals[-1] -= ca * (b - a) ** ea
        if not np.all(np.isfinite(vals)):
            raise DomainError("singular-part subtraction left non-finite samples")
        return vals

    def interpolate(self, x) -> np.ndarray:
        """Evaluate at arbitrary points: endpoint power models plus a
        piecewise-linear remainder."""
        x = np.asarray(x, dtype=float)
        rem = self.remainder_values()
        out = np.interp(x, self.mesh, rem)
        a, b = self.mesh[0], self.mesh[-1]
        for end, c, e in self.singular_parts():
            dist = (x - a) if end == 0 else (b - x)
            with np.errstate(divide="ignore"):
                out = out + c * np.where(dist > 0, dist ** e, np.inf if e < 0 else 0.0)
        return out

    def reflected(self) -> "GridFunction":
        """The mirror image x -> a + b - x on the reflected mesh."""
        iv = self.interval
        mesh = (iv.a + iv.b) - self.mesh[::-1]
        # pin endpoints exactly to dodge roundoff in a + b - x
        mesh = mesh.copy()
        mesh[0], mesh[-1] = iv.a, iv.b
        ea, eb = self.singular_exponents
        return GridFunction(mesh, self.values[::-1].copy(), (eb, ea))


def grid_function(mesh, values, singular_exponents=(None, None)) -> GridFunction:
    return GridFunction(np.asarray(mesh, float), np.asarray(values, float), singular_exponents)


def from_callable(fn, mesh, singular_exponents=(None, None)) -> GridFunction:
    """Sample a callable on a mesh, tolerating non-finite tagged endpoints."""
    mesh = np.asarray(mesh, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.asarray(fn(mesh), dtype=float)
    if vals.shape != mesh.shape:
        vals = np.broadcast_to(vals, mesh.shape).astype(float)
    return GridFunction(mesh, vals, singular_exponents)


# -- meshes ----------------------------------------------------------------

def uniform_mesh(iv: Interval, n: int) -> np.ndarray:
    """n cells, n + 1 equally spaced nodes."""
    if n < 2:
        raise DomainError("need at least two cells")
    return np.linspace(iv.a, iv.b, n + 1)


def default_grading(alpha: float) -> float:
    """Grading exponent that restores second-order accuracy against
    endpoint behavior like dist**(alpha/2 - 1)."""
    return max(2.0, 2.0 / alpha)


def graded_mesh(iv: Interval, n: int, grading: float | None = None, side: str = "both",
                alpha: float | None = None) -> np.ndarray:
    """Power-law graded mesh with n cells.

    side selects which endpoint(s) attract nodes; "both" grades
    symmetrically toward the two endpoints.  When grading is omitted it is
    derived from alpha via :func:`default_grading`.
    """
    if grading is None:
        if alpha is None:
            raise DomainError("give either a grading exponent or alpha")
        grading = default_grading(alpha)
    if grading < 1.0:
        raise DomainError("grading exponent must be >= 1")
    if n < 2:
        raise DomainError("need at least two cells")
    # cap the exponent so the smallest cells stay representable near the
    # endpoints; beyond that resolution stronger grading buys nothing
    scale = max(abs(iv.a), abs(iv.b), iv.length) / iv.length
    min_rel = 64.0 * np.finfo(float).eps * scale
    t_first = 1.0 / n if side != "both" else 2.0 / n
    cap = np.log(min_rel) / np.log(t_first)
    if cap >= 1.0:
        grading = min(grading, cap)
    t = np.linspace(0.0, 1.0, n + 1)
    if side == "left":
        s = t ** grading
    elif side == "right":
        s = 1.0 - (1.0 - t) ** grading
    elif side == "both":
        s = np.where(t <= 0.5, 0.5 * (2.0 * t) ** grading, 1.0 - 0.5 * (2.0 * (1.0 - t)) ** grading)
    else:
        raise DomainError(f"unknown side {side!r}")
    mesh = iv.a + iv.length * s
    mesh[0], mesh[-1] = iv.a, iv.b
    if not np.all(np.diff(mesh) > 0):
        raise DomainError("grading too strong for this mesh size at double precision")
    return mesh


# -- CSV -------------------------------------------------------------------

def write_csv(gf: GridFunction, path) -> None:
    """Two columns x,value with a header row; 17 significant digits."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("x,value\n")
        for x, v in zip(gf.mesh, gf.values):
            fh.write(f"{x:.17g},{v:.17g}\n")


def read_csv(path, singular_exponents=(None, None)) -> GridFunction:
    data = np.genfromtxt(path, delimiter=",", skip_header=1, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ShapeError(f"{path}: expected two columns x,value")
    return GridFunction(data[:, 0], data[:, 1], singular_exponents)
