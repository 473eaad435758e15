"""Local wave velocities of order zero and one, in any spatial dimension.

Order zero tracks a fixed field value: component ``i`` is
``-(1/N) * psi_t / psi_xi``, and the N-tuple of reciprocals
``-N * psi_xi / psi_t`` is the primary representation (it stays finite
whenever ``psi_t != 0`` and transforms linearly under coordinate changes).

Order one tracks a fixed spatial gradient (a peak, trough or saddle): the
components solve ``H v = -d/dt grad(psi)`` with ``H`` the spatial Hessian.
Dedicated Cramer forms exist for N = 2 and N = 3; the general route is a
pivoted dense solve.  A singular Hessian is an expected regime and yields
``valid=False`` rather than an exception.

The contraction of the order-zero reciprocals with the order-one components
is a dimensionless scalar, invariant under linear coordinate changes; it
equals N for any rigidly translating profile.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import Grid
from .jets import Jet2, JetField

Array = np.ndarray

#: Scale-invariant singularity threshold: the Hessian counts as singular
#: when |det H| <= EPS_SINGULAR * ||H||_F ** N.
EPS_SINGULAR = 1e-10


class StationaryDegenerateError(ValueError):
    """Raised when psi_t = 0 and grad psi = 0: no attribute motion is defined."""


class UndefinedContractionError(ValueError):
    """Raised when the contraction scalar has no defined value."""


@dataclass(frozen=True)
class ZeroOrderVelocity:
    """Order-zero velocity: reciprocal covector plus per-component view.

    ``components[i]`` is ±inf exactly where ``reciprocal[i]`` is 0 (the
    gradient component vanishes while the field still changes in time).
    When ``psi_t = 0`` the reciprocals are not finite and only the
    components (all zero on axes with nonzero gradient) are meaningful.
    """

    reciprocal: Array
    components: Array

    def __post_init__(self):
        w = np.asarray(self.reciprocal, dtype=float)
        v = np.asarray(self.components, dtype=float)
        if w.ndim != 1 or v.shape != w.shape:
            raise ValueError("reciprocal and components must be equal-length vectors")
        object.__setattr__(self, "reciprocal", w)
        object.__setattr__(self, "components", v)

    @property
    def dim(self) -> int:
        return self.reciprocal.shape[0]


@dataclass(frozen=True)
class FirstOrderVelocity:
    """Order-one (peak) velocity with validity flag and conditioning diagnostic.

    When ``valid`` is False the components are NaN sentinels and must not be
    consumed; ``hessian_condition`` is ``||H||_F**N / |det H|``.
    """

    components: Array
    valid: bool
    hessian_condition: float

    def __post_init__(self):
        v = np.asarray(self.components, dtype=float)
        if v.ndim != 1:
            raise ValueError("components must be a vector")
        object.__setattr__(self, "components", v)
        object.__setattr__(self, "valid", bool(self.valid))
        object.__setattr__(self, "hessian_condition", float(self.hessian_condition))

    @property
    def dim(self) -> int:
        return self.components.shape[0]


@dataclass(frozen=True)
class AttributeSpec:
    """The traced attribute: a fixed field value or a fixed spatial gradient."""

    kind: str
    level: float = None
    gradient_targets: tuple = None

    LEVEL_SET = "level-set"
    GRADIENT_SET = "gradient-set"

    def __post_init__(self):
        if self.kind == self.LEVEL_SET:
            if self.level is None or self.gradient_targets is not None:
                raise ValueError("level-set attribute needs a level and no gradient targets")
            object.__setattr__(self, "level", float(self.level))
        elif self.kind == self.GRADIENT_SET:
            if self.gradient_targets is None or self.level is not None:
                raise ValueError("gradient-set attribute needs gradient targets and no level")
            targets = tuple(float(c) for c in np.atleast_1d(self.gradient_targets))
            object.__setattr__(self, "gradient_targets", targets)
        else:
            raise ValueError(f"unknown attribute kind {self.kind!r}")

    @classmethod
    def level_set(cls, level: float) -> "AttributeSpec":
        return cls(cls.LEVEL_SET, level=level)

    @classmethod
    def gradient_set(cls, targets) -> "AttributeSpec":
        return cls(cls.GRADIENT_SET, gradient_targets=targets)


# --------------------------------------------------------------------------
# pointwise operations


def zero_order_velocity(jet, dim: int = None) -> ZeroOrderVelocity:
    """Order-zero velocity from a first-order jet (Jet1 or Jet2).

    Raises :class:`StationaryDegenerateError` when both psi_t and the whole
    gradient vanish (the traced-value condition is vacuous there).  On axes
    where only the gradient component vanishes the component is ±inf with
    the sign of ``-psi_t`` (the reciprocal is 0 and is the meaningful
    representation).  Axes where both psi_t and the gradient component are
    zero get NaN in both representations.
    """
    g = np.asarray(jet.grad, dtype=float)
    pt = float(jet.dpsi_dt)
    n = g.shape[0]
    if dim is not None and dim != n:
        raise ValueError(f"jet has dimension {n}, expected {dim}")
    if pt == 0.0 and np.all(g == 0.0):
        raise StationaryDegenerateError(
            "psi_t = 0 and grad psi = 0: no attribute velocity is defined"
        )
    with np.errstate(divide="ignore", invalid="ignore"):
        reciprocal = -(n * g) / pt
    components = np.empty(n)
    nz = g != 0.0
    components[nz] = -(pt / n) / g[nz]
    components[~nz] = np.copysign(np.inf, -pt) if pt != 0.0 else np.nan
    return ZeroOrderVelocity(reciprocal, components)


def _conditioning(det: float, frob: float, n: int, eps_singular: float):
    threshold = eps_singular * frob**n
    valid = abs(det) > threshold
    cond = frob**n / abs(det) if det != 0.0 else np.inf
    return valid, cond


def first_order_velocity_2d(jet: Jet2, eps_singular: float = EPS_SINGULAR) -> FirstOrderVelocity:
    """Order-one velocity in 2-D via the closed Cramer form."""
    if jet.dim != 2:
        raise ValueError(f"expected a 2-d jet, got dimension {jet.dim}")
    h = jet.hessian
    b = jet.time_mixed
    det = h[0, 0] * h[1, 1] - h[0, 1] * h[0, 1]
    frob = float(np.sqrt(np.sum(h * h)))
    valid, cond = _conditioning(det, frob, 2, eps_singular)
    if not valid:
        return FirstOrderVelocity(np.full(2, np.nan), False, cond)
    vx = (h[0, 1] * b[1] - h[1, 1] * b[0]) / det
    vy = (h[0, 1] * b[0] - h[0, 0] * b[1]) / det
    return FirstOrderVelocity(np.array([vx, vy]), True, cond)


def _det3(m: Array) -> float:
    return (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


def first_order_velocity_3d(jet: Jet2, eps_singular: float = EPS_SINGULAR) -> FirstOrderVelocity:
    """Order-one velocity in 3-D via the four explicit determinants."""
    if jet.dim != 3:
        raise ValueError(f"expected a 3-d jet, got dimension {jet.dim}")
    h = jet.hessian
    b = jet.time_mixed
    det = _det3(h)
    frob = float(np.sqrt(np.sum(h * h)))
    valid, cond = _conditioning(det, frob, 3, eps_singular)
    if not valid:
        return FirstOrderVelocity(np.full(3, np.nan), False, cond)
    comps = np.empty(3)
    for axis in range(3):
        m = h.copy()
        m[:, axis] = -b
        comps[axis] = _det3(m) / det
    return FirstOrderVelocity(comps, True, cond)


def first_order_velocity_nd(jet: Jet2, eps_singular: float = EPS_SINGULAR) -> FirstOrderVelocity:
    """Order-one velocity in any dimension via a pivoted dense solve."""
    n = jet.dim
    h = jet.hessian
    b = jet.time_mixed
    frob = float(np.sqrt(np.sum(h * h)))
    if n == 1:
        det = float(h[0, 0])
        valid, cond = _conditioning(det, frob, 1, eps_singular)
        if not valid:
            return FirstOrderVelocity(np.full(1, np.nan), False, cond)
        return FirstOrderVelocity(np.array([-b[0] / det]), True, cond)
    det = float(np.linalg.det(h))
    valid, cond = _conditioning(det, frob, n, eps_singular)
    if not valid:
        return FirstOrderVelocity(np.full(n, np.nan), False, cond)
    try:
        comps = np.linalg.solve(h, -b)
    except np.linalg.LinAlgError:
        return FirstOrderVelocity(np.full(n, np.nan), False, np.inf)
    return FirstOrderVelocity(comps, True, cond)


def contraction_scalar(v0: ZeroOrderVelocity, v1: FirstOrderVelocity) -> float:
    """Dimensionless pairing of order-zero reciprocals with order-one components."""
    if v0.dim != v1.dim:
        raise ValueError(f"dimension mismatch: {v0.dim} vs {v1.dim}")
    if not v1.valid:
        raise UndefinedContractionError("order-one velocity is invalid (singular Hessian)")
    if not np.all(np.isfinite(v0.reciprocal)):
        raise UndefinedContractionError(
            "reciprocal velocities are undefined (psi_t = 0 at the source jet)"
        )
    return float(v0.reciprocal @ v1.components)


# --------------------------------------------------------------------------
# grid-level maps


@dataclass
class ZeroOrderVelocityField:
    """Order-zero velocities at every valid grid point."""

    grid: Grid
    reciprocal: Array
    components: Array
    valid: Array

    @property
    def dim(self) -> int:
        return self.grid.dim


@dataclass
class FirstOrderVelocityField:
    """Order-one velocities at every valid grid point."""

    grid: Grid
    components: Array
    valid: Array
    hessian_condition: Array

    @property
    def dim(self) -> int:
        return self.grid.dim


def zero_order_velocity_field(jets: JetField) -> ZeroOrderVelocityField:
    """Map the order-zero formula over a jet field.

    Stationary-degenerate points (psi_t = 0 with a fully vanishing gradient)
    are marked invalid instead of raising.
    """
    n = jets.dim
    pt = jets.dpsi_dt
    g = jets.grad
    degenerate = (pt == 0.0) & np.all(g == 0.0, axis=-1)
    valid = jets.valid & ~degenerate
    with np.errstate(divide="ignore", invalid="ignore"):
        reciprocal = -(n * g) / pt[..., None]
        components = np.where(
            g != 0.0,
            -(pt[..., None] / n) / g,
            np.where(pt[..., None] != 0.0, np.copysign(np.inf, -pt)[..., None], np.nan),
        )
    reciprocal[~valid] = np.nan
    components[~valid] = np.nan
    return ZeroOrderVelocityField(jets.grid, reciprocal, components, valid)


def first_order_velocity_field(
    jets: JetField, eps_singular: float = EPS_SINGULAR
) -> FirstOrderVelocityField:
    """Map the order-one solve over a jet field (batched, pivoted).

    Singular-Hessian points are marked invalid, never silently zeroed.
    """
    n = jets.dim
    h = jets.hessian
    b = jets.time_mixed
    frob = np.sqrt(np.sum(h * h, axis=(-2, -1)))
    safe_h = np.where(jets.valid[..., None, None], h, np.eye(n))
    with np.errstate(invalid="ignore", divide="ignore"):
        det = np.linalg.det(safe_h)
        det = np.where(jets.valid, det, np.nan)
        valid = jets.valid & (np.abs(det) > eps_singular * frob**n)
        cond = np.where(valid, frob**n / np.abs(det), np.inf)
    solve_h = np.where(valid[..., None, None], h, np.eye(n))
    rhs = np.where(valid[..., None], -b, 0.0)
    comps = np.linalg.solve(solve_h, rhs[..., None])[..., 0]
    comps[~valid] = np.nan
    return FirstOrderVelocityField(jets.grid, comps, valid, cond)


def velocity_field(jets: JetField, order: int, eps_singular: float = EPS_SINGULAR):
    """Pointwise velocity map of the requested order over a jet field."""
    if order == 0:
        return zero_order_velocity_field(jets)
    if order == 1:
        return first_order_velocity_field(jets, eps_singular)
    raise ValueError(f"order must be 0 or 1, got {order}")


def contraction_scalar_field(v0: ZeroOrderVelocityField, v1: FirstOrderVelocityField):
    """Contraction scalar at every point where both velocities are defined.

    Returns ``(values, valid)``; points with nonfinite reciprocals (psi_t = 0)
    or invalid order-one velocity are masked out.
    """
    if v0.dim != v1.dim:
        raise ValueError(f"dimension mismatch: {v0.dim} vs {v1.dim}")
    valid = v0.valid & v1.valid & np.all(np.isfinite(v0.reciprocal), axis=-1)
    with np.errstate(invalid="ignore"):
        vals = np.sum(v0.reciprocal * v1.components, axis=-1)
    vals = np.where(valid, vals, np.nan)
    return vals, valid
