"""Uniform grids, sampled scalar fields, and an analytic field catalog.

The catalog fields know their own exact derivative jets, so every velocity
formula can be exercised with zero discretization error before finite
differences enter the picture.  Units are abstract reals throughout; the
docstrings state dimensions (field, length, time) but nothing is enforced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .jets import Jet1, Jet2, JetField

Array = np.ndarray

#: Minimum points per axis; interior 4th-order stencils need five.
MIN_EXTENT = 5


@dataclass(frozen=True)
class Grid:
    """Uniform rectilinear grid in N spatial dimensions.

    The point at index ``i`` along axis ``a`` sits at
    ``origin[a] + i * spacing[a]``.
    """

    shape: tuple
    spacing: tuple
    origin: tuple

    def __post_init__(self):
        shape = tuple(int(n) for n in np.atleast_1d(self.shape))
        spacing = tuple(float(s) for s in np.atleast_1d(self.spacing))
        origin = tuple(float(o) for o in np.atleast_1d(self.origin))
        if len(shape) < 1:
            raise ValueError("grid must have at least one axis")
        if len(spacing) != len(shape) or len(origin) != len(shape):
            raise ValueError("shape, spacing and origin must have equal length")
        if any(n < MIN_EXTENT for n in shape):
            raise ValueError(f"every axis needs at least {MIN_EXTENT} points, got {shape}")
        if any(not (s > 0.0) or not math.isfinite(s) for s in spacing):
            raise ValueError(f"spacings must be strictly positive, got {spacing}")
        if any(not math.isfinite(o) for o in origin):
            raise ValueError("origin must be finite")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "origin", origin)

    @property
    def dim(self) -> int:
        return len(self.shape)

    @property
    def npoints(self) -> int:
        return int(np.prod(self.shape))

    def axis_coordinates(self, axis: int) -> Array:
        """Coordinates of the grid points along one axis."""
        return self.origin[axis] + self.spacing[axis] * np.arange(self.shape[axis])

    def point(self, index) -> Array:
        """Coordinates of the grid point at a (possibly fractional) index."""
        idx = np.asarray(index, dtype=float)
        return np.asarray(self.origin) + idx * np.asarray(self.spacing)

    def points(self) -> Array:
        """All grid point coordinates, shape ``(*shape, dim)``."""
        axes = [self.axis_coordinates(a) for a in range(self.dim)]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)

    def index_of(self, x) -> Array:
        """Fractional index of a point (inverse of :meth:`point`)."""
        x = np.asarray(x, dtype=float)
        return (x - np.asarray(self.origin)) / np.asarray(self.spacing)

    def contains(self, x) -> bool:
        idx = self.index_of(x)
        return bool(np.all(idx >= 0) and np.all(idx <= np.asarray(self.shape) - 1))


def canonical_time_axis(times) -> tuple:
    """Validate strictly increasing, uniform time stamps; return (t0, dt, count).

    Single-frame inputs get dt = 0.  Stamps may deviate from exact uniformity
    by at most 1e-9 * dt; they are canonicalized to ``t0 + m * dt``.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 1:
        raise ValueError("times must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(times)):
        raise ValueError("times must be finite")
    if times.size == 1:
        return float(times[0]), 0.0, 1
    if not np.all(np.diff(times) > 0):
        raise ValueError("times must be strictly increasing")
    dt = (times[-1] - times[0]) / (times.size - 1)
    canonical = times[0] + dt * np.arange(times.size)
    if np.max(np.abs(times - canonical)) > 1e-9 * dt:
        raise ValueError("time stamps must be uniformly spaced")
    return float(times[0]), float(dt), int(times.size)


def make_grid(dim: int, shape, spacing, origin) -> Grid:
    """Validated grid constructor; ``dim`` is cross-checked against the extents."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    shape = tuple(np.atleast_1d(shape))
    spacing = np.atleast_1d(spacing)
    origin = np.atleast_1d(origin)
    if spacing.size == 1:
        spacing = np.repeat(spacing, dim)
    if origin.size == 1:
        origin = np.repeat(origin, dim)
    if len(shape) != dim:
        raise ValueError(f"dim={dim} but shape has {len(shape)} axes")
    return Grid(shape, tuple(spacing), tuple(origin))


@dataclass(frozen=True)
class SampledField:
    """Scalar field values on a grid at M uniformly spaced time frames.

    Time stamps are canonical: frame ``m`` is at ``t0 + m * dt``.  Use
    :meth:`from_times` to build from an explicit stamp list (uniformity is
    validated and the stamps are canonicalized).
    """

    grid: Grid
    t0: float
    dt: float
    values: Array

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=float)
        if values.ndim != self.grid.dim + 1 or values.shape[1:] != self.grid.shape:
            raise ValueError(
                f"values must have shape (M, {', '.join(map(str, self.grid.shape))}), got {values.shape}"
            )
        if values.shape[0] < 1:
            raise ValueError("need at least one time frame")
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        t0 = float(self.t0)
        dt = float(self.dt)
        if not (math.isfinite(t0) and math.isfinite(dt)):
            raise ValueError("t0 and dt must be finite")
        if values.shape[0] > 1 and not dt > 0.0:
            raise ValueError("dt must be positive for multi-frame fields")
        if values.shape[0] == 1 and dt < 0.0:
            raise ValueError("dt must be non-negative")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "t0", t0)
        object.__setattr__(self, "dt", dt)

    @classmethod
    def from_times(cls, grid: Grid, times, values) -> "SampledField":
        t0, dt, _ = canonical_time_axis(times)
        return cls(grid, t0, dt, values)

    @property
    def frames(self) -> int:
        return self.values.shape[0]

    @property
    def times(self) -> Array:
        return self.t0 + self.dt * np.arange(self.frames)

    def time(self, frame: int) -> float:
        if not 0 <= frame < self.frames:
            raise IndexError(f"frame {frame} out of range [0, {self.frames})")
        return self.t0 + self.dt * frame


# --------------------------------------------------------------------------
# Analytic catalog


class AnalyticField:
    """Base class for closed-form space-time fields with exact jets.

    Subclasses implement :meth:`value` (vectorized over a trailing coordinate
    axis) and :meth:`jet_arrays`; everything else derives from those.
    """

    kind = "abstract"

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def value(self, points, t: float) -> Array:
        """Field value at points of shape ``(..., dim)``; returns ``(...)``."""
        raise NotImplementedError

    def jet_arrays(self, points, t: float):
        """Exact jets at many points.

        Returns ``(psi, dpsi_dt, grad, hessian, time_mixed)`` with shapes
        ``(...)``, ``(...)``, ``(..., N)``, ``(..., N, N)``, ``(..., N)``.
        """
        raise NotImplementedError

    def jet2(self, point, t: float) -> Jet2:
        """Exact second-order jet at a single point."""
        p = np.asarray(point, dtype=float)
        if p.shape != (self.dim,):
            raise ValueError(f"point must have shape ({self.dim},), got {p.shape}")
        if not np.all(np.isfinite(p)):
            raise ValueError("point must be finite")
        psi, pt, g, h, tm = self.jet_arrays(p[None, :], t)
        return Jet2(Jet1(psi[0], pt[0], g[0]), h[0], tm[0])

    def _check_points(self, points) -> Array:
        pts = np.asarray(points, dtype=float)
        if pts.shape[-1] != self.dim:
            raise ValueError(f"points must have trailing dimension {self.dim}, got {pts.shape}")
        return pts


@dataclass(frozen=True)
class PlaneWave(AnalyticField):
    """Sinusoidal plane wave ``A * sin(k . x - omega * t + phase)``."""

    wave_vector: tuple
    angular_frequency: float
    amplitude: float = 1.0
    phase: float = 0.0

    kind = "plane-wave"

    def __post_init__(self):
        k = tuple(float(v) for v in np.atleast_1d(self.wave_vector))
        object.__setattr__(self, "wave_vector", k)
        for name in ("angular_frequency", "amplitude", "phase"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not all(math.isfinite(v) for v in (*k, self.angular_frequency, self.amplitude, self.phase)):
            raise ValueError("plane wave parameters must be finite")
        if not np.linalg.norm(k) > 0:
            raise ValueError("plane wave needs a nonzero wave vector")

    @property
    def dim(self) -> int:
        return len(self.wave_vector)

    def _theta(self, points, t):
        return points @ np.asarray(self.wave_vector) - self.angular_frequency * t + self.phase

    def value(self, points, t):
        pts = self._check_points(points)
        return self.amplitude * np.sin(self._theta(pts, t))

    def jet_arrays(self, points, t):
        pts = self._check_points(points)
        k = np.asarray(self.wave_vector)
        w = self.angular_frequency
        theta = self._theta(pts, t)
        s = self.amplitude * np.sin(theta)
        c = self.amplitude * np.cos(theta)
        grad = c[..., None] * k
        hess = -s[..., None, None] * np.outer(k, k)
        tmix = s[..., None] * (w * k)
        return s, -w * c, grad, hess, tmix


def _gaussian_jets(u: Array, sigma: float, amplitude: float, velocity: Array):
    """Jets of ``A * exp(-|u|^2 / sigma^2)`` where ``u = x - center - c t``."""
    s2 = sigma * sigma
    q = np.sum(u * u, axis=-1) / s2
    psi = amplitude * np.exp(-q)
    grad = (-2.0 / s2) * u * psi[..., None]
    uc = u @ velocity
    dpsi_dt = (2.0 / s2) * uc * psi
    n = u.shape[-1]
    eye = np.eye(n)
    hess = psi[..., None, None] * (
        (4.0 / (s2 * s2)) * u[..., :, None] * u[..., None, :] - (2.0 / s2) * eye
    )
    tmix = (2.0 / s2) * psi[..., None] * (velocity - (2.0 / s2) * uc[..., None] * u)
    return psi, dpsi_dt, grad, hess, tmix


@dataclass(frozen=True)
class TranslatingGaussian(AnalyticField):
    """Gaussian bump translating rigidly: ``A * exp(-|x - x0 - c t|^2 / sigma^2)``."""

    velocity: tuple
    sigma: float
    center: tuple = None
    amplitude: float = 1.0

    kind = "translating-gaussian"

    def __post_init__(self):
        c = tuple(float(v) for v in np.atleast_1d(self.velocity))
        center = self.center
        if center is None:
            center = (0.0,) * len(c)
        center = tuple(float(v) for v in np.atleast_1d(center))
        if len(center) != len(c):
            raise ValueError("center and velocity must have equal length")
        object.__setattr__(self, "velocity", c)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "amplitude", float(self.amplitude))
        if not all(math.isfinite(v) for v in (*c, *center, self.sigma, self.amplitude)):
            raise ValueError("gaussian parameters must be finite")
        if not self.sigma > 0:
            raise ValueError("sigma must be strictly positive")

    @property
    def dim(self) -> int:
        return len(self.velocity)

    def _offset(self, points, t):
        return points - np.asarray(self.center) - np.asarray(self.velocity) * t

    def value(self, points, t):
        pts = self._check_points(points)
        u = self._offset(pts, t)
        return self.amplitude * np.exp(-np.sum(u * u, axis=-1) / self.sigma**2)

    def jet_arrays(self, points, t):
        pts = self._check_points(points)
        u = self._offset(pts, t)
        return _gaussian_jets(u, self.sigma, self.amplitude, np.asarray(self.velocity))


@dataclass(frozen=True)
class StaticGaussian(AnalyticField):
    """Time-independent Gaussian bump ``A * exp(-|x - x0|^2 / sigma^2)``."""

    sigma: float
    center: tuple = (0.0, 0.0)
    amplitude: float = 1.0

    kind = "static-gaussian"

    def __post_init__(self):
        center = tuple(float(v) for v in np.atleast_1d(self.center))
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "amplitude", float(self.amplitude))
        if not all(math.isfinite(v) for v in (*center, self.sigma, self.amplitude)):
            raise ValueError("gaussian parameters must be finite")
        if not self.sigma > 0:
            raise ValueError("sigma must be strictly positive")

    @property
    def dim(self) -> int:
        return len(self.center)

    def value(self, points, t):
        pts = self._check_points(points)
        u = pts - np.asarray(self.center)
        return self.amplitude * np.exp(-np.sum(u * u, axis=-1) / self.sigma**2)

    def jet_arrays(self, points, t):
        pts = self._check_points(points)
        u = pts - np.asarray(self.center)
        return _gaussian_jets(u, self.sigma, self.amplitude, np.zeros(self.dim))


@dataclass(frozen=True)
class ExpandingGaussianRing(AnalyticField):
    """Radially expanding Gaussian shell around a center point.

    ``A * exp(-(r - r0 - v t)^2 / w^2)`` with ``r = |x - x0|``.  The profile
    is not a rigid translation; locally it translates along the radial ray,
    which makes it a useful non-advective test case.  Derivatives are
    undefined at the center (``r = 0`` is a cusp of ``r``).
    """

    speed: float
    width: float
    radius0: float = 1.0
    center: tuple = (0.0, 0.0)
    amplitude: float = 1.0

    kind = "expanding-gaussian-ring"

    def __post_init__(self):
        center = tuple(float(v) for v in np.atleast_1d(self.center))
        object.__setattr__(self, "center", center)
        for name in ("speed", "width", "radius0", "amplitude"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not all(
            math.isfinite(v)
            for v in (*center, self.speed, self.width, self.radius0, self.amplitude)
        ):
            raise ValueError("ring parameters must be finite")
        if not self.width > 0:
            raise ValueError("width must be strictly positive")

    @property
    def dim(self) -> int:
        return len(self.center)

    def value(self, points, t):
        pts = self._check_points(points)
        r = np.linalg.norm(pts - np.asarray(self.center), axis=-1)
        rho = r - self.radius0 - self.speed * t
        return self.amplitude * np.exp(-(rho * rho) / self.width**2)

    def jet_arrays(self, points, t):
        pts = self._check_points(points)
        d = pts - np.asarray(self.center)
        r = np.linalg.norm(d, axis=-1)
        if np.any(r == 0):
            raise ValueError("ring jets are undefined at the center point")
        w2 = self.width**2
        v = self.speed
        rho = r - self.radius0 - v * t
        psi = self.amplitude * np.exp(-(rho * rho) / w2)
        rhat = d / r[..., None]
        p = -2.0 * rho / w2
        grad = psi[..., None] * p[..., None] * rhat
        dpsi_dt = -v * p * psi
        eye = np.eye(self.dim)
        proj = rhat[..., :, None] * rhat[..., None, :]
        hess = psi[..., None, None] * (
            (p * p - 2.0 / w2)[..., None, None] * proj
            + (p / r)[..., None, None] * (eye - proj)
        )
        tmix = (2.0 * v / w2) * psi[..., None] * (1.0 - 2.0 * rho * rho / w2)[..., None] * rhat
        return psi, dpsi_dt, grad, hess, tmix


def _power_derivative(x: Array, exponent: int, order: int) -> Array:
    """Elementwise d^order/dx^order of x**exponent."""
    if exponent < order:
        return np.zeros_like(x)
    coeff = 1.0
    for j in range(order):
        coeff *= exponent - j
    return coeff * x ** (exponent - order)


@dataclass(frozen=True)
class Polynomial(AnalyticField):
    """Multivariate polynomial in space and time.

    ``terms`` is a sequence of ``(coefficient, spatial_exponents, time_exponent)``
    triples; e.g. ``(3.0, (1, 1), 0)`` is the monomial ``3 x y``.
    """

    terms: tuple

    kind = "polynomial"

    def __post_init__(self):
        norm = []
        dim = None
        for term in self.terms:
            coeff, exps, et = term
            exps = tuple(int(e) for e in exps)
            if dim is None:
                dim = len(exps)
            elif len(exps) != dim:
                raise ValueError("all terms must share the spatial dimension")
            if any(e < 0 for e in exps) or int(et) < 0:
                raise ValueError("exponents must be non-negative")
            if not math.isfinite(float(coeff)):
                raise ValueError("coefficients must be finite")
            norm.append((float(coeff), exps, int(et)))
        if not norm:
            raise ValueError("polynomial needs at least one term")
        object.__setattr__(self, "terms", tuple(norm))

    @property
    def dim(self) -> int:
        return len(self.terms[0][1])

    def _term_value(self, pts, t, exps, et, dx: dict, dt_order: int) -> Array:
        out = np.ones(pts.shape[:-1])
        for a in range(self.dim):
            out = out * _power_derivative(pts[..., a], exps[a], dx.get(a, 0))
        return out * _power_derivative(np.asarray(float(t)), et, dt_order)

    def value(self, points, t):
        pts = self._check_points(points)
        out = np.zeros(pts.shape[:-1])
        for coeff, exps, et in self.terms:
            out = out + coeff * self._term_value(pts, t, exps, et, {}, 0)
        return out

    def jet_arrays(self, points, t):
        pts = self._check_points(points)
        base = pts.shape[:-1]
        n = self.dim
        psi = np.zeros(base)
        dpsi_dt = np.zeros(base)
        grad = np.zeros(base + (n,))
        hess = np.zeros(base + (n, n))
        tmix = np.zeros(base + (n,))
        for coeff, exps, et in self.terms:
            psi += coeff * self._term_value(pts, t, exps, et, {}, 0)
            dpsi_dt += coeff * self._term_value(pts, t, exps, et, {}, 1)
            for i in range(n):
                grad[..., i] += coeff * self._term_value(pts, t, exps, et, {i: 1}, 0)
                tmix[..., i] += coeff * self._term_value(pts, t, exps, et, {i: 1}, 1)
                hess[..., i, i] += coeff * self._term_value(pts, t, exps, et, {i: 2}, 0)
                for j in range(i + 1, n):
                    mixed = coeff * self._term_value(pts, t, exps, et, {i: 1, j: 1}, 0)
                    hess[..., i, j] += mixed
                    hess[..., j, i] += mixed
        return psi, dpsi_dt, grad, hess, tmix


FIELD_KINDS = {
    PlaneWave.kind: PlaneWave,
    TranslatingGaussian.kind: TranslatingGaussian,
    StaticGaussian.kind: StaticGaussian,
    ExpandingGaussianRing.kind: ExpandingGaussianRing,
    Polynomial.kind: Polynomial,
}


def make_field(kind: str, **params) -> AnalyticField:
    """Instantiate a catalog field by kind name; raises on unknown kinds."""
    try:
        cls = FIELD_KINDS[kind]
    except KeyError:
        raise ValueError(
            f"unknown field kind {kind!r}; known kinds: {sorted(FIELD_KINDS)}"
        ) from None
    return cls(**params)


def sample(field: AnalyticField, grid: Grid, times) -> SampledField:
    """Evaluate an analytic field on a grid at the given time frames."""
    if field.dim != grid.dim:
        raise ValueError(f"field dim {field.dim} != grid dim {grid.dim}")
    t0, dt, m = canonical_time_axis(np.atleast_1d(times))
    pts = grid.points()
    values = np.stack([field.value(pts, t0 + dt * k) for k in range(m)])
    return SampledField(grid, t0, dt, values)


def analytic_jet2(field: AnalyticField, point, t: float) -> Jet2:
    """Exact second-order jet of a catalog field at one point."""
    return field.jet2(point, t)


def analytic_jet_field(field: AnalyticField, grid: Grid, t: float) -> JetField:
    """Exact jets at every grid point (all points valid)."""
    if field.dim != grid.dim:
        raise ValueError(f"field dim {field.dim} != grid dim {grid.dim}")
    psi, dpsi_dt, grad, hess, tmix = field.jet_arrays(grid.points(), t)
    valid = np.ones(grid.shape, dtype=bool)
    return JetField(grid, float(t), None, psi, dpsi_dt, grad, hess, tmix, valid)
