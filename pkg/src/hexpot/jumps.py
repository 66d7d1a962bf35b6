"""Boundary jump constants of the layer potentials.

A density integrated against one of the kernels produces a potential whose
derivative traces are discontinuous across the boundary.  The mismatch
between the one-sided interior limit and the principal-value integral is a
constant multiple of the local density value; those constants drive the
normalization of the boundary system, so this module provides them twice:

* :func:`analytic_jump_table` evaluates the closed forms, which reduce to
  partial-fraction sums over the characteristic roots;
* :func:`calibrate_jumps` reproduces each constant numerically, by
  Richardson-extrapolating one-sided traces along a ladder of interior
  offsets and subtracting a high-order principal value.

The two routes share no quadrature logic, so their agreement (enforced to
1e-4 relative) is a genuine cross-check of kernel, trace and quadrature
code alike.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CalibrationMismatch
from .geometry import BoundaryCurve
from .kernels import KernelContext, TraceBlocks
from .quadrature import punctured_rule

_WID_WEIGHTS = {
    0: lambda nu, c: nu,
    1: lambda nu, c: nu**2,
    3: lambda nu, c: nu**2 - c.a2 * nu,
    5: lambda nu, c: c.a1 * nu - c.a0,
}


def _trace_sum(ctx: KernelContext, wid: int, m: int) -> complex:
    """The partial-fraction sum ``(1/(4 pi lam^4)) sum_k w_k kappa_k^(2m)/d_k``."""
    nu = np.array(ctx.roots.nu)
    w = _WID_WEIGHTS[wid](nu, ctx.coeffs)
    kap = np.array(ctx.kappa)
    return complex(
        np.sum(w * kap ** (2 * m) / np.array(ctx.roots.denoms)) / (4.0 * np.pi * ctx.lam**4)
    )


def analytic_jump_table(ctx: KernelContext) -> np.ndarray:
    """Closed-form jump constants, rows = traces, columns = kernels.

    Entry ``(i, j)`` is the one-sided-interior limit minus the principal
    value of trace ``i`` (value, normal derivative, normal derivative of
    the bilaplacian) of the potential with kernel ``j`` (``P0``, ``P1``,
    ``P2``), per unit local density.  The value row vanishes identically;
    the others are ``pi`` times partial-fraction sums.  In closed form the
    nonzero entries are

        J[1] = (0,  1/(4 lam^4),  1/(4 lam^4) - a0/(6 lam^4))
        J[2] = (1/(4 a0),  0,  -a2/(4 a0) + a2/6)
    """
    J = np.zeros((3, 3), dtype=complex)
    c2 = ctx.c2
    J[1, 0] = np.pi * _trace_sum(ctx, 0, 0)
    J[1, 1] = np.pi * _trace_sum(ctx, 1, 0)
    J[1, 2] = np.pi * (_trace_sum(ctx, 3, 0) - c2 * _trace_sum(ctx, 5, 1))
    J[2, 0] = np.pi * _trace_sum(ctx, 0, 2)
    J[2, 1] = np.pi * _trace_sum(ctx, 1, 2)
    J[2, 2] = np.pi * (_trace_sum(ctx, 3, 2) - c2 * _trace_sum(ctx, 5, 3))
    return J


def _graded_panel_nodes(
    t0: float, d: float, order: int = 16, ratio: float = 2.0, coarse: float = 0.4
) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on ``[t0 - pi, t0 + pi]`` graded toward ``t0``.

    Panel widths shrink geometrically toward the near-singular parameter
    ``t0`` until they reach the scale of the interior offset ``d``, which
    keeps the integrand panelwise analytic with bounded derivative growth.
    """
    edges = [np.pi]
    while edges[-1] > max(d, 1e-13):
        edges.append(edges[-1] / ratio)
    edges.append(0.0)
    gx, gw = np.polynomial.legendre.leggauss(order)
    nodes, weights = [], []
    for hi, lo in zip(edges[:-1], edges[1:]):
        width = hi - lo
        splits = max(1, int(np.ceil(width / coarse)))
        sub = np.linspace(lo, hi, splits + 1)
        for a, b in zip(sub[:-1], sub[1:]):
            mid, half = 0.5 * (a + b), 0.5 * (b - a)
            for sign in (-1.0, 1.0):
                nodes.append(t0 + sign * (mid + half * gx))
                weights.append(half * gw)
    return np.concatenate(nodes), np.concatenate(weights)


_RICHARDSON_POWERS = 4


def _richardson_limit(d: np.ndarray, values: np.ndarray) -> complex:
    """Extrapolate ``values(d) -> d = 0`` with a log-augmented power basis.

    The one-sided traces approach their limits with an error expansion in
    ``{d^p, d^p ln d}``; fitting ``1, d ln d, d, d^2 ln d, ...`` by least
    squares and reading the constant term removes those terms through
    order ``d^4``.
    """
    cols = [np.ones_like(d)]
    for p in range(1, _RICHARDSON_POWERS + 1):
        cols.append(d**p * np.log(d))
        cols.append(d**p)
    A = np.stack(cols, axis=1)
    coef, *_ = np.linalg.lstsq(A, values, rcond=None)
    return complex(coef[0])


@dataclass(frozen=True)
class JumpCalibration:
    """Result of the numerical jump calibration."""

    analytic: np.ndarray
    extrapolated: np.ndarray
    max_mismatch: float


def calibrate_jumps(
    ctx: KernelContext,
    curve: BoundaryCurve,
    t0: float = 0.37,
    n_fine: int = 8192,
    stencil: int = 8,
    d0: float = 0.02,
    n_ladder: int = 10,
    tol: float = 1e-4,
) -> JumpCalibration:
    """Reproduce the jump table numerically and compare with the closed forms.

    At the boundary point ``t0`` a smooth bump density with unit peak is
    integrated against each kernel.  One-sided traces are computed at
    interior offsets ``d0 * 2^-k`` along the inward normal with graded
    panel quadrature, extrapolated to the boundary, and the principal
    value (punctured corrected trapezoid on a grid aligned with ``t0``) is
    subtracted.  Entries must match the analytic table to ``tol``
    relative (zero entries to ``tol * 1e-2`` absolute, measured against
    the table's scale); otherwise :class:`CalibrationMismatch` is raised.
    """
    analytic = analytic_jump_table(ctx)

    x0 = curve.position(np.array([t0]))[0]
    nrm0 = curve.inward_normal(np.array([t0]))[0]

    def density(t: np.ndarray) -> np.ndarray:
        return np.exp(-((np.sin((t - t0) / 2.0) / 0.25) ** 2))

    ladder = d0 * 2.0 ** (-np.arange(n_ladder))
    one_sided = np.zeros((n_ladder, 3, 3), dtype=complex)
    for idx, d in enumerate(ladder):
        t_q, w_q = _graded_panel_nodes(t0, float(d))
        y = curve.position(t_q)
        ny = curve.inward_normal(t_q)
        speed = curve.speed(t_q)
        f = density(t_q) * speed * w_q
        target = (x0 + d * nrm0)[None, :]
        tb = TraceBlocks(ctx, target, nrm0[None, :], y, ny)
        for row in range(3):
            for col in range(3):
                one_sided[idx, row, col] = complex((tb.block(row, col) @ f)[0])

    # principal value on a fine periodic grid whose node 0 sits at t0
    t_pv = t0 + 2.0 * np.pi * np.arange(n_fine) / n_fine
    w_pv = punctured_rule(n_fine, stencil, i_target=0)
    y = curve.position(t_pv)
    ny = curve.inward_normal(t_pv)
    f_pv = density(t_pv) * curve.speed(t_pv) * w_pv
    mask = np.ones((1, n_fine), dtype=bool)
    mask[0, 0] = False
    tb_pv = TraceBlocks(ctx, x0[None, :], nrm0[None, :], y, ny, mask=mask)

    extrapolated = np.zeros((3, 3), dtype=complex)
    for row in range(3):
        for col in range(3):
            pv = complex((tb_pv.block(row, col) @ f_pv)[0])
            limit = _richardson_limit(ladder, one_sided[:, row, col])
            extrapolated[row, col] = limit - pv

    scale = float(np.max(np.abs(analytic)))
    mism = np.zeros((3, 3))
    for row in range(3):
        for col in range(3):
            ref = abs(analytic[row, col])
            diff = abs(extrapolated[row, col] - analytic[row, col])
            mism[row, col] = diff / ref if ref > 1e-8 * scale else diff / (1e-2 * scale)
    worst = float(np.max(mism))
    if worst > tol:
        i, j = np.unravel_index(int(np.argmax(mism)), mism.shape)
        raise CalibrationMismatch(
            f"jump entry ({i}, {j}) extrapolates to {extrapolated[i, j]:.8g} "
            f"but the closed form gives {analytic[i, j]:.8g} "
            f"(mismatch measure {worst:.3e} > {tol:.1e})"
        )
    return JumpCalibration(analytic=analytic, extrapolated=extrapolated, max_mismatch=worst)
