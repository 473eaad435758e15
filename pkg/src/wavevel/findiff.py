"""Finite-difference jets on uniform grids with controlled accuracy order.

Interior points always use the classical central stencils; near boundaries
the behaviour is a policy choice: ``one-sided`` switches to offset stencils
of the same accuracy order, ``shrink-to-valid`` marks the point invalid
instead.  Mixed derivatives are compositions of one-dimensional stencils,
which keeps them symmetric by construction and preserves the order.

The pointwise (:func:`fd_jet2_at`) and grid-level (:func:`fd_jet_field`)
paths share one tap table and accumulate in the same order, so they produce
bit-identical values.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fields import SampledField
from .jets import Jet1, Jet2, JetField

Array = np.ndarray

BOUNDARY_ONE_SIDED = "one-sided"
BOUNDARY_SHRINK = "shrink-to-valid"


class InsufficientFramesError(ValueError):
    """Raised when a field has too few time frames for the requested order."""


@dataclass(frozen=True)
class StencilSpec:
    """Accuracy order (2 or 4) and boundary policy for derivative stencils."""

    order: int = 4
    boundary: str = BOUNDARY_SHRINK

    def __post_init__(self):
        if self.order not in (2, 4):
            raise ValueError(f"order must be 2 or 4, got {self.order}")
        if self.boundary not in (BOUNDARY_ONE_SIDED, BOUNDARY_SHRINK):
            raise ValueError(f"unknown boundary policy {self.boundary!r}")

    @property
    def half_width(self) -> int:
        return self.order // 2

    @property
    def min_frames(self) -> int:
        return self.order + 1


DEFAULT_STENCIL = StencilSpec()

# Classical central-difference coefficients, offsets ascending.
_CENTRAL = {
    (1, 2): ((-1, -0.5), (1, 0.5)),
    (1, 4): ((-2, 1.0 / 12.0), (-1, -2.0 / 3.0), (1, 2.0 / 3.0), (2, -1.0 / 12.0)),
    (2, 2): ((-1, 1.0), (0, -2.0), (1, 1.0)),
    (2, 4): ((-2, -1.0 / 12.0), (-1, 4.0 / 3.0), (0, -5.0 / 2.0), (1, 4.0 / 3.0), (2, -1.0 / 12.0)),
}


def fornberg_weights(nodes, x0: float, deriv: int) -> Array:
    """Finite-difference weights of the ``deriv``-th derivative at ``x0``.

    Classic recursive computation on arbitrary distinct nodes; exact on
    polynomials up to degree ``len(nodes) - 1``.
    """
    alpha = np.asarray(nodes, dtype=float)
    n = alpha.size - 1
    m = deriv
    c = np.zeros((n + 1, m + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = alpha[0] - x0
    for i in range(1, n + 1):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = alpha[i] - x0
        for j in range(i):
            c3 = alpha[i] - alpha[j]
            c2 = c2 * c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, m]


@lru_cache(maxsize=None)
def _taps_cached(deriv: int, order: int, d_low: int, d_high: int, h: float, boundary: str):
    hw = order // 2
    scale = h**deriv
    if d_low >= hw and d_high >= hw:
        return tuple((off, coeff / scale) for off, coeff in _CENTRAL[(deriv, order)])
    if boundary == BOUNDARY_SHRINK:
        return None
    nw = deriv + order
    if d_low + d_high + 1 < nw:
        raise ValueError(
            f"axis too short for one-sided order-{order} derivative-{deriv} stencil "
            f"({nw} points needed)"
        )
    # window of nw contiguous offsets, as centered as the boundary allows
    a = max(-d_low, min(-(nw - 1) // 2, d_high - (nw - 1)))
    offsets = np.arange(a, a + nw)
    weights = fornberg_weights(offsets * h, 0.0, deriv)
    return tuple((int(off), float(w)) for off, w in zip(offsets, weights))


def stencil_taps(deriv: int, order: int, pos: int, n: int, h: float, boundary: str):
    """Taps ``((offset, coeff), ...)`` for a derivative at index ``pos`` of an
    ``n``-point axis with spacing ``h``; None when the policy declines.
    """
    if not 0 <= pos < n:
        raise IndexError(f"position {pos} out of range [0, {n})")
    cap = deriv + order  # distances beyond one window look alike
    return _taps_cached(deriv, order, min(pos, cap), min(n - 1 - pos, cap), float(h), boundary)


def _apply_taps_pointwise(values: Array, index: tuple, axis: int, taps) -> float:
    acc = 0.0
    idx = list(index)
    for off, coeff in taps:
        idx[axis] = index[axis] + off
        acc = acc + coeff * values[tuple(idx)]
    return float(acc)


def diff_along_axis(arr: Array, axis: int, h: float, deriv: int, spec: StencilSpec):
    """Differentiate a full array along one axis.

    Returns ``(out, valid)`` where ``valid`` is a per-index boolean along the
    axis; under ``shrink-to-valid`` the edge bands are NaN and flagged False.
    """
    a = np.moveaxis(np.asarray(arr, dtype=float), axis, 0)
    n = a.shape[0]
    hw = spec.half_width
    if n < 2 * hw + 1:
        raise ValueError(f"axis needs at least {2 * hw + 1} points for order {spec.order}")
    out = np.full_like(a, np.nan)
    valid = np.ones(n, dtype=bool)

    central = stencil_taps(deriv, spec.order, hw, n, h, spec.boundary)
    interior = slice(hw, n - hw)
    acc = np.zeros_like(a[interior])
    for off, coeff in central:
        acc = acc + coeff * a[hw + off : n - hw + off]  # end >= 1, never wraps
    out[interior] = acc

    for pos in list(range(hw)) + list(range(n - hw, n)):
        taps = stencil_taps(deriv, spec.order, pos, n, h, spec.boundary)
        if taps is None:
            valid[pos] = False
            continue
        acc_b = np.zeros_like(a[pos])
        for off, coeff in taps:
            acc_b = acc_b + coeff * a[pos + off]
        out[pos] = acc_b
    return np.moveaxis(out, 0, axis), valid


def _time_taps(field: SampledField, frame: int, spec: StencilSpec):
    m = field.frames
    if not 0 <= frame < m:
        raise IndexError(f"frame {frame} out of range [0, {m})")
    if m < spec.min_frames:
        raise InsufficientFramesError(
            f"order-{spec.order} time derivatives need at least {spec.min_frames} frames, got {m}"
        )
    return stencil_taps(1, spec.order, frame, m, field.dt, spec.boundary)


def fd_jet2_at(
    field: SampledField,
    frame: int,
    index,
    spec: StencilSpec = DEFAULT_STENCIL,
    time_derivatives: bool = True,
) -> Jet2 | None:
    """Finite-difference second-order jet at one grid point.

    Returns None when the ``shrink-to-valid`` policy cannot meet the
    requested order at this point (spatially or in time).  With
    ``time_derivatives=False`` the time entries are set to zero and no frame
    window is needed; use this for purely spatial work on few-frame data.
    """
    grid = field.grid
    n = grid.dim
    idx = tuple(int(i) for i in index)
    if len(idx) != n:
        raise ValueError(f"index must have {n} entries, got {len(idx)}")
    for a in range(n):
        if not 0 <= idx[a] < grid.shape[a]:
            raise IndexError(f"index {idx} out of range for shape {grid.shape}")

    ttaps = None
    if time_derivatives:
        ttaps = _time_taps(field, frame, spec)
        if ttaps is None:
            return None
    elif not 0 <= frame < field.frames:
        raise IndexError(f"frame {frame} out of range [0, {field.frames})")

    staps_1 = []
    staps_2 = []
    for a in range(n):
        t1 = stencil_taps(1, spec.order, idx[a], grid.shape[a], grid.spacing[a], spec.boundary)
        t2 = stencil_taps(2, spec.order, idx[a], grid.shape[a], grid.spacing[a], spec.boundary)
        if t1 is None or t2 is None:
            return None
        staps_1.append(t1)
        staps_2.append(t2)

    cur = field.values[frame]
    psi = float(cur[idx])
    grad = np.empty(n)
    hess = np.zeros((n, n))
    for a in range(n):
        grad[a] = _apply_taps_pointwise(cur, idx, a, staps_1[a])
        hess[a, a] = _apply_taps_pointwise(cur, idx, a, staps_2[a])
    for a in range(n):
        for b in range(a + 1, n):
            # outer taps along the lower axis, inner along the higher one,
            # matching the composition order of the grid-level path
            acc = 0.0
            work = list(idx)
            for off_a, ca in staps_1[a]:
                work[a] = idx[a] + off_a
                inner = 0.0
                for off_b, cb in staps_1[b]:
                    work[b] = idx[b] + off_b
                    inner = inner + cb * cur[tuple(work)]
                work[b] = idx[b]
                acc = acc + ca * inner
            hess[a, b] = acc
            hess[b, a] = acc

    if time_derivatives:
        dpsi_dt = 0.0
        for off_t, ct in ttaps:
            dpsi_dt = dpsi_dt + ct * field.values[frame + off_t][idx]
        tmix = np.empty(n)
        for a in range(n):
            acc = 0.0
            work = list(idx)
            for off_a, ca in staps_1[a]:
                work[a] = idx[a] + off_a
                widx = tuple(work)
                inner = 0.0
                for off_t, ct in ttaps:
                    inner = inner + ct * field.values[frame + off_t][widx]
                acc = acc + ca * inner
            tmix[a] = acc
        dpsi_dt = float(dpsi_dt)
    else:
        dpsi_dt = 0.0
        tmix = np.zeros(n)

    return Jet2(Jet1(psi, dpsi_dt, grad), hess, tmix)


def fd_jet_field(
    field: SampledField,
    frame: int,
    spec: StencilSpec = DEFAULT_STENCIL,
    time_derivatives: bool = True,
) -> JetField:
    """Finite-difference jets at every grid point of one frame.

    Equivalent to applying :func:`fd_jet2_at` at each point (bit-identical
    values), with the validity mask collecting the points where the boundary
    policy could not meet the order.
    """
    grid = field.grid
    n = grid.dim
    shape = grid.shape

    ttaps = None
    time_valid = True
    if time_derivatives:
        ttaps = _time_taps(field, frame, spec)
        time_valid = ttaps is not None
    elif not 0 <= frame < field.frames:
        raise IndexError(f"frame {frame} out of range [0, {field.frames})")

    cur = field.values[frame]
    psi = cur.copy()
    grad = np.empty(shape + (n,))
    hess = np.empty(shape + (n, n))
    tmix = np.full(shape + (n,), np.nan)
    dpsi_dt = np.full(shape, np.nan)

    axis_valid = []
    d1 = {}
    for a in range(n):
        grad[..., a], v1 = diff_along_axis(cur, a, grid.spacing[a], 1, spec)
        hess[..., a, a], v2 = diff_along_axis(cur, a, grid.spacing[a], 2, spec)
        d1[a] = grad[..., a]
        axis_valid.append(v1 & v2)
    for a in range(n):
        for b in range(a + 1, n):
            mixed, _ = diff_along_axis(d1[b], a, grid.spacing[a], 1, spec)
            hess[..., a, b] = mixed
            hess[..., b, a] = mixed

    if time_derivatives and time_valid:
        acc = np.zeros(shape)
        for off, coeff in ttaps:
            acc = acc + coeff * field.values[frame + off]
        dpsi_dt = acc
        for a in range(n):
            tmix[..., a], _ = diff_along_axis(dpsi_dt, a, grid.spacing[a], 1, spec)
    elif not time_derivatives:
        dpsi_dt = np.zeros(shape)
        tmix = np.zeros(shape + (n,))

    valid = np.full(shape, time_valid)
    for a in range(n):
        idx_shape = [1] * n
        idx_shape[a] = shape[a]
        valid &= axis_valid[a].reshape(idx_shape)

    bad = ~valid
    if np.any(bad):
        grad[bad] = np.nan
        hess[bad] = np.nan
        tmix[bad] = np.nan
        dpsi_dt = np.where(bad, np.nan, dpsi_dt)

    return JetField(grid, field.time(frame), frame, psi, dpsi_dt, grad, hess, tmix, valid)
