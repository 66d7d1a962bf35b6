"""Boundary data families for the three-trace boundary value problem.

Data objects produce the three boundary traces (value, normal derivative,
normal derivative after two Laplacians) sampled at curve parameters for a
given spectral parameter.  Three families cover the use cases:

* :class:`ZeroData`: the trivial triple, for null tests.
* :class:`TrigData`: trigonometric polynomials in the parameter with a
  rational spectral amplitude that decays as the parameter grows and has
  its poles on the imaginary axis, safely outside the admissible sector.
* :class:`ManufacturedData`: exact traces of potentials generated by
  planted smooth densities, computed on demand with a fine corrected
  quadrature.  Solving with these as input should recover the planted
  densities, which is the strongest self-test the solver has.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .geometry import BoundaryCurve
from .kernels import KernelContext, TraceBlocks, make_context
from .quadrature import punctured_rule
from .spectral import Coefficients


class BoundaryData:
    """Interface: ``traces(t, lam)`` returns the ``(3, len(t))`` trace samples."""

    def traces(self, t: np.ndarray, lam: complex) -> np.ndarray:
        raise NotImplementedError

    def check_smoothness(self, lam: complex, n: int = 256, tail_tol: float = 1e-6) -> float:
        """Warn when the data's Fourier tail is too fat for spectral accuracy.

        Returns the worst relative energy in the top octave of modes over
        the three traces; emits a ``UserWarning`` when it exceeds
        ``tail_tol``, since rough data degrades every downstream
        convergence claim.
        """
        t = 2.0 * np.pi * np.arange(n) / n
        tr = self.traces(t, lam)
        worst = 0.0
        for row in range(3):
            spec = np.abs(np.fft.fft(tr[row])) ** 2
            total = float(np.sum(spec[1:]))
            if total == 0.0:
                continue
            octave = float(np.sum(spec[n // 4 : 3 * n // 4 + 1]))
            worst = max(worst, octave / total)
        if worst > tail_tol:
            warnings.warn(
                f"boundary data has {worst:.2e} of its energy in the top "
                "Fourier octave; expect degraded convergence",
                stacklevel=2,
            )
        return worst


class ZeroData(BoundaryData):
    """Identically zero traces."""

    def traces(self, t: np.ndarray, lam: complex) -> np.ndarray:
        return np.zeros((3, len(np.asarray(t))), dtype=complex)


def _eval_trig(modes: Sequence[Sequence[float]], t: np.ndarray) -> np.ndarray:
    out = np.zeros(len(t), dtype=complex)
    for mode in modes:
        m = int(mode[0])
        c = complex(mode[1], mode[2] if len(mode) > 2 else 0.0)
        s = complex(mode[3], mode[4] if len(mode) > 4 else 0.0) if len(mode) > 3 else 0.0
        out += c * np.cos(m * t) + s * np.sin(m * t)
    return out


@dataclass
class TrigData(BoundaryData):
    """Trigonometric-polynomial traces with a decaying rational amplitude.

    Each trace is ``amp(lam) * sum_m (c_m cos(m t) + s_m sin(m t))`` where
    ``amp(lam) = pole^2 / (pole^2 + lam^2)``.  The amplitude's poles sit at
    ``lam = +- i pole``, outside the admissible sector, and the decay at
    large ``|lam|`` matches the regime where the boundary problem has a
    bounded solution.  ``modes`` holds one list per trace; every entry is
    ``[m, re_c, im_c]`` or ``[m, re_c, im_c, re_s, im_s]``.
    """

    modes: tuple[Sequence, Sequence, Sequence]
    pole: float = 10.0

    def amplitude(self, lam: complex) -> complex:
        return self.pole**2 / (self.pole**2 + complex(lam) ** 2)

    def traces(self, t: np.ndarray, lam: complex) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        amp = self.amplitude(lam)
        return np.stack([amp * _eval_trig(m, t) for m in self.modes])


def default_trig_data() -> TrigData:
    """A mildly anisotropic reference instance of the trig family."""
    return TrigData(
        modes=(
            [[0, 0.3, 0.0], [1, 1.0, 0.2], [2, 0.0, 0.0, 0.5, 0.0]],
            [[1, 0.0, 0.0, 1.0, -0.3], [3, 0.4, 0.0]],
            [[0, 0.5, 0.0], [2, 0.8, 0.1]],
        )
    )


@dataclass
class ManufacturedData(BoundaryData):
    """Exact traces of potentials planted by known smooth densities.

    ``densities`` are three callables of the curve parameter.  For a given
    spectral parameter the traces are computed at the requested points by
    integrating the planted densities against the trace kernels on a fine
    periodic grid with the corrected punctured rule (diagonal jumps
    added), so the data is accurate to the quadrature's high order on a
    grid ``oversample`` times finer than any grid the solver will use.

    Instances cache per-``lam`` fine-grid data; the planted densities stay
    available for recovery comparisons.
    """

    curve: BoundaryCurve
    coeffs: Coefficients
    densities: tuple[Callable, Callable, Callable]
    n_fine: int = 8192
    stencil: int = 8
    sector_radius: float | None = None
    sector_delta: float | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def density_samples(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.stack([np.asarray(f(t), dtype=complex) for f in self.densities])

    def traces(self, t: np.ndarray, lam: complex) -> np.ndarray:
        from .jumps import analytic_jump_table  # local import, cheap closed forms

        t = np.asarray(t, dtype=float)
        key = complex(lam)
        if key not in self._cache:
            ctx = make_context(self.coeffs, lam, self.sector_radius, self.sector_delta)
            self._cache[key] = (ctx, analytic_jump_table(ctx))
        ctx, jumps = self._cache[key]

        n_fine = self.n_fine
        out = np.zeros((3, len(t)), dtype=complex)
        mu_t = self.density_samples(t)
        # one shifted fine grid per target keeps the corrected rule centered
        for i, t0 in enumerate(t):
            tf = t0 + 2.0 * np.pi * np.arange(n_fine) / n_fine
            w = punctured_rule(n_fine, self.stencil, i_target=0)
            y = self.curve.position(tf)
            ny = self.curve.inward_normal(tf)
            x0 = self.curve.position(np.array([t0]))
            nx0 = self.curve.inward_normal(np.array([t0]))
            mask = np.ones((1, n_fine), dtype=bool)
            mask[0, 0] = False
            tb = TraceBlocks(ctx, x0, nx0, y, ny, mask=mask)
            mu_f = self.density_samples(tf)
            scale = self.curve.speed(tf) * w
            for row in range(3):
                acc = 0.0 + 0.0j
                for col in range(3):
                    acc += complex((tb.block(row, col) @ (scale * mu_f[col]))[0])
                    acc += jumps[row, col] * mu_t[col, i]
                out[row, i] = acc
        return out

    def context(self, lam: complex) -> KernelContext:
        self.traces(np.array([0.0]), lam)  # populate cache
        return self._cache[complex(lam)][0]
