"""Characteristic cubic of the sixth-order operator and the spectral sector.

The differential operator factors through the cubic

    p(nu) = nu^3 - a2 * nu^2 + a1 * nu - a0,

whose three roots set the decay scales ``kappa_k = lam / sqrt(-nu_k)`` of
the radial kernels.  Everything downstream assumes the roots are distinct,
nonzero, and laid out with exactly one root on the imaginary axis and the
other two in the open left half plane; :func:`solve_characteristic_cubic`
enforces that layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonDistinctRoots, SectorConditionViolated, ZeroRoot

DEFAULT_SECTOR_RADIUS = 1.0
DEFAULT_SECTOR_DELTA = np.pi / 16.0


@dataclass(frozen=True)
class Coefficients:
    """Coefficients ``(a0, a1, a2)`` of the characteristic cubic.

    In terms of the roots: ``a2`` is their sum, ``a1`` the sum of pairwise
    products and ``a0`` the product.
    """

    a0: complex
    a1: complex
    a2: complex

    def __post_init__(self) -> None:
        if self.a0 == 0:
            raise ZeroRoot("a0 = 0 forces a zero characteristic root")

    def poly(self, nu: complex) -> complex:
        return ((nu - self.a2) * nu + self.a1) * nu - self.a0

    def dpoly(self, nu: complex) -> complex:
        return (3.0 * nu - 2.0 * self.a2) * nu + self.a1


def canonical_coefficients() -> Coefficients:
    """The reference coefficient triple with roots ``{i, -1, -2}``."""
    return Coefficients(a0=2j, a1=2 - 3j, a2=-3 + 1j)


def sqrt_neg_branch(nu: complex) -> complex:
    """Principal square root of ``-nu``, guaranteed ``Re >= 0``.

    For roots in the closed left half plane (the admissible layout) the
    result has strictly positive real part; purely imaginary ``nu`` lands
    on the diagonals, e.g. ``nu = i`` gives ``exp(-i pi / 4)``.
    """
    if nu == 0:
        raise ZeroRoot("square-root scale of a zero root is undefined")
    return complex(np.sqrt(complex(-nu)))


@dataclass(frozen=True)
class CharacteristicRoots:
    """Distinct roots of the characteristic cubic with cached derived data.

    ``nu`` is ordered so that ``nu[0]`` is the root on the imaginary axis.
    ``denoms[k]`` is the product of ``nu[k] - nu[s]`` over ``s != k`` (the
    partial-fraction denominators) and ``sqrt_neg[k]`` the branch-corrected
    ``sqrt(-nu[k])``.
    """

    nu: tuple[complex, complex, complex]
    denoms: tuple[complex, complex, complex] = field(init=False)
    sqrt_neg: tuple[complex, complex, complex] = field(init=False)

    def __post_init__(self) -> None:
        nu = self.nu
        if len(nu) != 3:
            raise ValueError("expected exactly three roots")
        scale = max(abs(v) for v in nu)
        if scale == 0.0 or min(abs(v) for v in nu) < 1e-14 * scale:
            raise ZeroRoot("characteristic roots must be nonzero")
        den = []
        for k in range(3):
            d = 1.0 + 0.0j
            for s in range(3):
                if s != k:
                    d *= nu[k] - nu[s]
            if d == 0:
                raise NonDistinctRoots("repeated characteristic root")
            den.append(d)
        object.__setattr__(self, "denoms", tuple(den))
        object.__setattr__(self, "sqrt_neg", tuple(sqrt_neg_branch(v) for v in nu))

    def coefficients(self) -> Coefficients:
        """Recover the cubic coefficients from the roots (Vieta)."""
        n1, n2, n3 = self.nu
        return Coefficients(a0=n1 * n2 * n3, a1=n1 * n2 + n1 * n3 + n2 * n3, a2=n1 + n2 + n3)


def solve_characteristic_cubic(
    coeffs: Coefficients,
    tol_zero: float = 1e-10,
    tol_sep: float = 1e-8,
) -> CharacteristicRoots:
    """Solve the characteristic cubic and validate the admissible layout.

    Roots come from the companion-matrix eigenvalues polished by two Newton
    steps, then are checked for separation (``tol_sep``, relative to the
    largest root) and for the sector layout: exactly one root within
    ``tol_zero`` of the imaginary axis, the remaining two strictly in the
    left half plane.  The imaginary-axis root is listed first; the others
    follow in order of descending real part.

    Raises
    ------
    NonDistinctRoots
        If the cubic discriminant (nearly) vanishes or any two computed
        roots are closer than the separation tolerance.  The discriminant
        check runs first: a genuinely repeated root makes ``np.roots``
        return a cluster spread by the cube root of machine epsilon, wide
        enough to slip past any pairwise tolerance.
    SectorConditionViolated
        If the half-plane layout fails.
    """
    a0, a1, a2 = coeffs.a0, coeffs.a1, coeffs.a2
    disc = (
        18.0 * a2 * a1 * a0 - 4.0 * a2**3 * a0 + a2**2 * a1**2 - 4.0 * a1**3 - 27.0 * a0**2
    )
    root_scale = max(abs(a2), abs(a1) ** 0.5, abs(a0) ** (1.0 / 3.0), 1e-30)
    if abs(disc) <= 1e-10 * root_scale**6:
        raise NonDistinctRoots(
            f"characteristic cubic has a (near-)repeated root: discriminant {disc:.3e}"
        )

    raw = np.roots([1.0, -coeffs.a2, coeffs.a1, -coeffs.a0])
    polished = []
    for nu in raw:
        nu = complex(nu)
        for _ in range(2):
            dp = coeffs.dpoly(nu)
            if dp != 0:
                nu = nu - coeffs.poly(nu) / dp
        polished.append(nu)

    scale = max(abs(v) for v in polished)
    for i in range(3):
        for j in range(i + 1, 3):
            if abs(polished[i] - polished[j]) < tol_sep * scale:
                raise NonDistinctRoots(
                    f"roots {polished[i]:.6g} and {polished[j]:.6g} are not separated"
                )

    on_axis = [v for v in polished if abs(v.real) <= tol_zero * max(abs(v), 1.0)]
    off_axis = [v for v in polished if abs(v.real) > tol_zero * max(abs(v), 1.0)]
    if len(on_axis) != 1:
        raise SectorConditionViolated(
            f"expected exactly one root on the imaginary axis, found {len(on_axis)}"
        )
    if any(v.real >= 0 for v in off_axis):
        raise SectorConditionViolated("off-axis roots must lie in the open left half plane")

    ordered = (on_axis[0], *sorted(off_axis, key=lambda v: -v.real))
    roots = CharacteristicRoots(nu=ordered)

    # Vieta residuals as a cheap a posteriori sanity check on the polish.
    rec = roots.coefficients()
    ref = max(abs(coeffs.a0), abs(coeffs.a1), abs(coeffs.a2), 1.0)
    err = max(abs(rec.a0 - coeffs.a0), abs(rec.a1 - coeffs.a1), abs(rec.a2 - coeffs.a2))
    if err > 1e-10 * ref:
        raise NonDistinctRoots(f"root polish failed Vieta check ({err:.3e} relative)")
    return roots


@dataclass(frozen=True)
class SpectralParameter:
    """A spectral parameter ``lam`` together with its admissible sector.

    The sector is ``|lam| > radius`` and ``-pi/4 + delta <= arg lam < pi/4``.
    """

    lam: complex
    radius: float = DEFAULT_SECTOR_RADIUS
    delta: float = DEFAULT_SECTOR_DELTA

    def in_sector(self) -> bool:
        if abs(self.lam) <= self.radius:
            return False
        ang = np.angle(complex(self.lam))
        return -np.pi / 4.0 + self.delta <= ang < np.pi / 4.0

    def require_in_sector(self) -> "SpectralParameter":
        if not self.in_sector():
            raise SectorConditionViolated(
                f"lam = {self.lam:.6g} is outside the admissible sector "
                f"(|lam| > {self.radius}, arg in [-pi/4 + {self.delta:.4f}, pi/4))"
            )
        return self


def scaled_argument(
    p: SpectralParameter, roots: CharacteristicRoots, k: int, r: float
) -> complex:
    """The Bessel argument ``kappa_k * r`` with ``kappa_k = lam / sqrt(-nu_k)``.

    For ``lam`` in the sector the result always has positive real part,
    which keeps the modified Bessel evaluations on their principal domain.
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    z = p.lam / roots.sqrt_neg[k] * r
    if r > 0 and z.real <= 0:
        raise SectorConditionViolated(
            f"scaled argument {z:.6g} has nonpositive real part; "
            "lam is outside the sector for this root"
        )
    return z
