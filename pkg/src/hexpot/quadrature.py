"""Periodic quadrature rules for weakly singular boundary integrals.

The workhorse is a punctured trapezoid rule on an equispaced periodic grid
with a short symmetric correction stencil around the excluded node.  The
correction weights are chosen so that the rule is exact for integrands of
the form ``p(u) + q(u) * ln(4 sin^2(s/2))`` with ``u = (2 sin(s/2))^2`` and
polynomials ``p``, ``q`` up to a stencil-dependent degree.  That class is
exactly what the boundary kernels here look like near the diagonal, so the
rule converges at high order even though every kernel carries a log.

The exact log moments of the periodic grid are computed from a zeta-function
series rather than by numerical cancellation; see :func:`log_moment_defect`.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial

import numpy as np
from scipy.special import zeta


def _u_power_series(q: int, terms: int) -> np.ndarray:
    """Taylor coefficients of ``(2 sin(s/2))^(2q)`` in powers of ``s^2``.

    Returns ``a`` with ``(2 sin(s/2))^(2q) = sum_p a[p] * s^(2q + 2p)``.
    """
    # (2 sin(s/2))^2 = s^2 * sum_i g[i] s^(2i) with g from the sine series
    g = np.array([2.0 * (-1) ** (i + 1) / factorial(2 * i) for i in range(1, terms + 2)])
    acc = np.array([1.0])
    for _ in range(q):
        acc = np.convolve(acc, g)[: terms + 1]
    out = np.zeros(terms + 1)
    out[: len(acc)] = acc
    return out


def log_moment_defect(n: int, q: int, jextra: int = 24) -> float:
    """Defect of the punctured trapezoid rule on a logarithmic moment.

    Computes ``integral(f) - h * sum_{j != 0} f(s_j)`` over one period for
    ``f(s) = (2 sin(s/2))^(2q) * ln(4 sin^2(s/2))`` on an ``n``-point grid
    with spacing ``h = 2 pi / n``; this is exactly the total weight the
    correction stencil has to supply.

    For ``q = 0`` the defect is ``-2 h ln n`` exactly.  For ``q >= 1`` the
    trapezoid sum is expanded through the Hurwitz-zeta tails of the log,
    which gives an absolutely convergent series in ``n^-2``:

        defect = 2 h * sum_{j >= q} zeta(2j+1) n^(-2j) (-1)^j a[j-q] (2j)!

    where ``a`` are the coefficients from :func:`_u_power_series`.  This
    avoids the catastrophic cancellation that a direct sum-minus-integral
    evaluation suffers at large ``n``.
    """
    h = 2.0 * np.pi / n
    if q == 0:
        return -2.0 * h * np.log(n)
    a = _u_power_series(q, jextra)
    total = 0.0
    for p in range(jextra + 1):
        j = q + p
        total += zeta(2 * j + 1) * n ** (-2.0 * j) * (-1) ** j * a[p] * factorial(2 * j)
    return 2.0 * h * total


@lru_cache(maxsize=None)
def log_correction_weights(n: int, stencil: int) -> np.ndarray:
    """Symmetric correction weights for the punctured periodic trapezoid.

    The returned array ``gamma`` has length ``stencil``; the corrected rule
    adds ``h * gamma[k-1]`` to the two nodes at distance ``k`` grid steps
    from the punctured node.  Weights are chosen so the rule integrates
    ``u^q`` for ``q <= (stencil-2)//2`` and ``u^q ln(4 sin^2(s/2))`` for
    ``q <= stencil - 2 - (stencil-2)//2`` exactly, where
    ``u = (2 sin(s/2))^2``.

    The moment system is solved in the scaled variable ``u / h^2`` to keep
    it well conditioned for large stencils.
    """
    if stencil < 2:
        raise ValueError("stencil must be at least 2")
    if n <= 2 * stencil:
        raise ValueError(f"grid of {n} nodes is too small for a stencil of {stencil}")
    h = 2.0 * np.pi / n
    q_plain = (stencil - 2) // 2
    q_log = stencil - 2 - q_plain
    s = h * np.arange(1, stencil + 1)
    us = (2.0 * np.sin(s / 2.0)) ** 2 / h**2
    lg = np.log(4.0 * np.sin(s / 2.0) ** 2)

    rows = [np.ones(stencil)]
    rhs = [0.5]  # the punctured node would have carried weight h; split h/2 per side
    for q in range(1, q_plain + 1):
        rows.append(us**q)
        rhs.append(0.0)
    for q in range(q_log + 1):
        rows.append(2.0 * us**q * lg)
        rhs.append(log_moment_defect(n, q) / (h * h ** (2 * q)))
    return np.linalg.solve(np.array(rows), np.array(rhs))


def punctured_rule(n: int, stencil: int, i_target: int = 0) -> np.ndarray:
    """Full weight vector of the corrected punctured trapezoid rule.

    ``i_target`` is the grid index of the (excluded) singular node.  The
    weight there is zero and the ``2 * stencil`` neighbours carry the
    corrections from :func:`log_correction_weights` on top of the plain
    trapezoid weight ``h``.
    """
    h = 2.0 * np.pi / n
    gamma = log_correction_weights(n, stencil)
    w = np.full(n, h)
    w[i_target] = 0.0
    for k in range(1, stencil + 1):
        w[(i_target + k) % n] += h * gamma[k - 1]
        w[(i_target - k) % n] += h * gamma[k - 1]
    return w


def trig_interp_matrix(t_fine: np.ndarray, n_coarse: int) -> np.ndarray:
    """Trigonometric interpolation from an ``n_coarse`` equispaced grid.

    Returns the matrix ``T`` with ``T[i, j] = tau(t_fine[i] - 2 pi j / n)``
    where ``tau`` is the even-``n`` cardinal function

        tau(x) = (1/n) [ 1 + 2 sum_{0<m<n/2} cos(m x) + cos((n/2) x) ]
               = sin(n x / 2) / (n tan(x / 2)).

    ``T @ v`` evaluates the band-limited interpolant of nodal values ``v``
    at the points ``t_fine``.  Interpolation is exact for trigonometric
    polynomials of degree below ``n/2`` plus the pure ``cos((n/2) t)`` mode.
    """
    if n_coarse % 2 != 0:
        raise ValueError("coarse grid size must be even")
    t_fine = np.asarray(t_fine, dtype=float)
    tj = 2.0 * np.pi * np.arange(n_coarse) / n_coarse
    x = t_fine[:, None] - tj[None, :]
    # closed form with a safe fallback where x is a multiple of 2 pi
    small = np.isclose(np.mod(x + np.pi, 2.0 * np.pi) - np.pi, 0.0, atol=1e-12)
    xs = np.where(small, 1.0, x)  # dummy to keep tan() off the zero
    T = np.sin(n_coarse * xs / 2.0) / (n_coarse * np.tan(xs / 2.0))
    T[small] = 1.0
    return T


def lowmode_projector(n: int, m_cut: int) -> np.ndarray:
    """Orthogonal projector onto Fourier modes ``|m| <= m_cut`` on the grid.

    Acts on nodal values over the ``n``-point equispaced periodic grid.
    ``m_cut = 0`` projects onto constants; ``m_cut >= n // 2`` is the
    identity.
    """
    if m_cut >= n // 2:
        return np.eye(n)
    tj = 2.0 * np.pi * np.arange(n) / n
    x = tj[:, None] - tj[None, :]
    P = np.full((n, n), 1.0 / n)
    for m in range(1, m_cut + 1):
        P += (2.0 / n) * np.cos(m * x)
    return P
