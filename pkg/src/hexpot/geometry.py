"""Smooth closed boundary curves and their quadrature nodes.

Curves are parametrized over ``[0, 2 pi)`` counterclockwise; normals point
into the enclosed domain.  The built-in families (circle, ellipse, smooth
star) are validated at construction time: a parametrization whose speed
degenerates raises :class:`IrregularCurve` and a self-crossing trace raises
:class:`SelfIntersection`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, IrregularCurve, SelfIntersection

Vec2Fun = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class BoundaryCurve:
    """A closed parametrized curve with analytic position and velocity."""

    kind: str
    params: dict
    position: Vec2Fun = field(repr=False)
    velocity: Vec2Fun = field(repr=False)

    def speed(self, t: np.ndarray) -> np.ndarray:
        v = self.velocity(np.asarray(t, dtype=float))
        return np.linalg.norm(v, axis=-1)

    def inward_normal(self, t: np.ndarray) -> np.ndarray:
        """Unit normal pointing into the enclosed region (ccw orientation)."""
        v = self.velocity(np.asarray(t, dtype=float))
        tang = v / np.linalg.norm(v, axis=-1, keepdims=True)
        return np.stack([-tang[..., 1], tang[..., 0]], axis=-1)

    def length(self, n: int = 4096) -> float:
        """Arc length via the periodic trapezoid rule (spectrally accurate)."""
        t = 2.0 * np.pi * np.arange(n) / n
        return float(np.sum(self.speed(t)) * 2.0 * np.pi / n)


def _winding_angle(poly: np.ndarray, y: np.ndarray) -> float:
    """Total signed angle of the closed polygon ``poly`` around ``y``."""
    d = poly - y[None, :]
    d2 = np.roll(d, -1, axis=0)
    cross = d[:, 0] * d2[:, 1] - d[:, 1] * d2[:, 0]
    dot = d[:, 0] * d2[:, 0] + d[:, 1] * d2[:, 1]
    return float(np.sum(np.arctan2(cross, dot)))


def _validate_curve(curve: BoundaryCurve, m: int = 2048) -> None:
    t = 2.0 * np.pi * np.arange(m) / m
    x = curve.position(t)
    v = curve.velocity(t)
    speed = np.linalg.norm(v, axis=-1)
    diam = float(np.max(x[:, 0]) - np.min(x[:, 0]) + np.max(x[:, 1]) - np.min(x[:, 1]))
    if diam <= 0 or not np.all(np.isfinite(x)) or not np.all(np.isfinite(v)):
        raise IrregularCurve("curve evaluation produced nonfinite points")
    if np.min(speed) < 1e-3 * np.mean(speed):
        raise IrregularCurve(
            f"parametrization speed degenerates (min/mean = "
            f"{np.min(speed) / np.mean(speed):.2e}); the curve has a cusp"
        )
    # closedness of the parametrization
    gap = np.linalg.norm(curve.position(np.array([0.0])) - curve.position(np.array([2.0 * np.pi])))
    if gap > 1e-9 * diam:
        raise IrregularCurve("curve is not closed over [0, 2 pi]")
    # orientation must be counterclockwise for the inward-normal convention
    area2 = float(np.sum(x[:, 0] * np.roll(x[:, 1], -1) - np.roll(x[:, 0], -1) * x[:, 1]))
    if area2 <= 0:
        raise IrregularCurve("curve must be oriented counterclockwise")
    # self-intersection: parameter-distant points must stay spatially separated
    sep = m // 16
    d2 = np.sum((x[:, None, :] - x[None, :, :]) ** 2, axis=-1)
    idx = np.arange(m)
    circ = np.minimum(np.abs(idx[:, None] - idx[None, :]), m - np.abs(idx[:, None] - idx[None, :]))
    far = circ >= sep
    if np.sqrt(np.min(d2[far])) < 1e-3 * diam:
        raise SelfIntersection("parameter-distant points nearly coincide")


def make_curve(kind: str, params: dict | None = None) -> BoundaryCurve:
    """Construct a validated boundary curve.

    Supported kinds and parameters:

    * ``"circle"``: ``radius`` (default 1.0)
    * ``"ellipse"``: semi-axes ``a``, ``b``
    * ``"smooth_star"``: ``base_radius`` (default 1.0), ``amplitude``,
      ``harmonics`` so that ``r(t) = base_radius + amplitude * cos(harmonics * t)``

    Raises :class:`IrregularCurve` or :class:`SelfIntersection` when the
    parameters degenerate (for a star, amplitude equal to the base radius
    pinches a cusp and larger amplitudes self-intersect).
    """
    params = dict(params or {})
    if kind == "circle":
        radius = float(params.get("radius", 1.0))
        if radius <= 0:
            raise DomainError("circle radius must be positive")

        def pos(t, radius=radius):
            t = np.asarray(t, dtype=float)
            return radius * np.stack([np.cos(t), np.sin(t)], axis=-1)

        def vel(t, radius=radius):
            t = np.asarray(t, dtype=float)
            return radius * np.stack([-np.sin(t), np.cos(t)], axis=-1)

        curve = BoundaryCurve("circle", {"radius": radius}, pos, vel)
    elif kind == "ellipse":
        try:
            a, b = float(params["a"]), float(params["b"])
        except KeyError as exc:
            raise DomainError("ellipse needs semi-axes 'a' and 'b'") from exc
        if a <= 0 or b <= 0:
            raise DomainError("ellipse semi-axes must be positive")

        def pos(t, a=a, b=b):
            t = np.asarray(t, dtype=float)
            return np.stack([a * np.cos(t), b * np.sin(t)], axis=-1)

        def vel(t, a=a, b=b):
            t = np.asarray(t, dtype=float)
            return np.stack([-a * np.sin(t), b * np.cos(t)], axis=-1)

        curve = BoundaryCurve("ellipse", {"a": a, "b": b}, pos, vel)
    elif kind == "smooth_star":
        base = float(params.get("base_radius", 1.0))
        try:
            amp = float(params["amplitude"])
            harm = int(params["harmonics"])
        except KeyError as exc:
            raise DomainError("smooth_star needs 'amplitude' and 'harmonics'") from exc
        if base <= 0 or harm < 1:
            raise DomainError("smooth_star needs base_radius > 0 and harmonics >= 1")

        def pos(t, base=base, amp=amp, harm=harm):
            t = np.asarray(t, dtype=float)
            r = base + amp * np.cos(harm * t)
            return np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)

        def vel(t, base=base, amp=amp, harm=harm):
            t = np.asarray(t, dtype=float)
            r = base + amp * np.cos(harm * t)
            dr = -amp * harm * np.sin(harm * t)
            return np.stack(
                [dr * np.cos(t) - r * np.sin(t), dr * np.sin(t) + r * np.cos(t)], axis=-1
            )

        curve = BoundaryCurve(
            "smooth_star", {"base_radius": base, "amplitude": amp, "harmonics": harm}, pos, vel
        )
    else:
        raise DomainError(f"unknown curve kind {kind!r}")

    _validate_curve(curve)
    return curve


@dataclass(frozen=True)
class QuadratureNodes:
    """Equispaced-parameter quadrature data on a boundary curve.

    ``weights`` are arc-length trapezoid weights, so plain weighted sums
    integrate smooth functions over the curve.  Grids with node counts
    related by doubling are nested (both start at parameter 0).
    """

    curve: BoundaryCurve = field(repr=False)
    params: np.ndarray = field(repr=False)
    points: np.ndarray = field(repr=False)
    normals: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.params)

    @property
    def spacing(self) -> float:
        """Mean arc-length distance between consecutive nodes."""
        return float(np.sum(self.weights)) / self.n

    def min_distance(self, x: np.ndarray, refine: int = 8) -> np.ndarray:
        """Approximate distance from points ``x`` (shape (..., 2)) to the curve."""
        m = max(refine * self.n, 1024)
        t = 2.0 * np.pi * np.arange(m) / m
        bdry = self.curve.position(t)
        x = np.asarray(x, dtype=float)
        d = np.linalg.norm(x[..., None, :] - bdry, axis=-1)
        return np.min(d, axis=-1)


def encloses(curve: BoundaryCurve, points: np.ndarray, m: int = 2048) -> np.ndarray:
    """Boolean mask of which ``points`` (shape ``(..., 2)``) lie inside the curve."""
    t = 2.0 * np.pi * np.arange(m) / m
    poly = curve.position(t)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.array([abs(_winding_angle(poly, p) - 2.0 * np.pi) < 1e-6 for p in pts])
    return out if np.asarray(points).ndim > 1 else out[0]


def sample_nodes(curve: BoundaryCurve, n: int) -> QuadratureNodes:
    """Sample ``n`` equispaced-parameter nodes with weights and inward normals.

    Requires ``n >= 8`` and even.  A spot winding test confirms that points
    nudged along the stored normals land inside the curve.
    """
    if n < 8 or n % 2 != 0:
        raise DomainError("node count must be even and at least 8")
    t = 2.0 * np.pi * np.arange(n) / n
    pts = curve.position(t)
    v = curve.velocity(t)
    speed = np.linalg.norm(v, axis=-1)
    normals = curve.inward_normal(t)
    weights = 2.0 * np.pi / n * speed

    eps = 0.05 * float(np.sum(weights)) / n
    for j in range(0, n, max(1, n // 16)):
        probe = pts[j] + eps * normals[j]
        if abs(_winding_angle(pts, probe) - 2.0 * np.pi) > 1e-6:
            raise IrregularCurve(f"normal at node {j} does not point into the domain")
    return QuadratureNodes(curve=curve, params=t, points=pts, normals=normals, weights=weights)


def lyapunov_exponent(
    curve: BoundaryCurve, n: int = 1024, warn_below: float = 0.5
) -> float:
    """Fitted Hölder exponent of the unit normal field, clipped to ``(0, 1]``.

    Measures the sup modulus of continuity ``w(d) = sup_t |n(t+d) - n(t)|``
    over dyadic parameter lags and fits the log-log slope across the lags
    where ``w`` is small.  A circle gives 1.0 (the normal turns at unit
    rate); curves whose normal field is genuinely rougher fit a smaller
    exponent over the sampled range.  This is a diagnostic of the resolved
    normal field, not an asymptotic regularity claim.

    An exponent below ``warn_below`` emits a warning (never an error): the
    kernels and quadrature assume a Hölder-continuous normal, and a low fit
    says that assumption is barely resolved.
    """
    t = 2.0 * np.pi * np.arange(n) / n
    nrm = curve.inward_normal(t)
    lags: list[float] = []
    mods: list[float] = []
    lag = 1
    while lag <= n // 8:
        w = float(np.max(np.linalg.norm(np.roll(nrm, -lag, axis=0) - nrm, axis=-1)))
        if w > 0:
            lags.append(lag * 2.0 * np.pi / n)
            mods.append(w)
        lag *= 2
    lags_a = np.array(lags)
    mods_a = np.array(mods)
    keep = mods_a < 0.8
    if np.count_nonzero(keep) < 3:
        keep = np.ones_like(mods_a, dtype=bool)
    slope = float(np.polyfit(np.log(lags_a[keep]), np.log(mods_a[keep]), 1)[0])
    out = float(np.clip(slope, 1e-6, 1.0))
    if out < warn_below:
        warnings.warn(
            f"normal field fits Hölder exponent {out:.3f} < {warn_below}; "
            "the boundary is barely a Lyapunov line at this resolution",
            stacklevel=2,
        )
    return out
