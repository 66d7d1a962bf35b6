"""Scikit-learn style front end for the boundary value solver.

``BoundaryValueSolver`` follows the estimator protocol: constructor
arguments are stored verbatim, ``fit`` runs the solve and stores fitted
state under trailing-underscore attributes, ``predict`` evaluates the
field at points.  ``get_params`` / ``set_params`` / ``clone`` work as
usual, so the solver can sit inside parameter sweeps or grid searches.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils import check_array
from sklearn.utils.validation import check_is_fitted

from .data import BoundaryData, default_trig_data
from .geometry import make_curve
from .solver import solve_bvp
from .spectral import Coefficients


class BoundaryValueSolver(BaseEstimator):
    """Solve the sixth-order boundary problem and evaluate its field.

    Parameters mirror :func:`hexpot.solver.solve_bvp`; the default
    coefficient triple has characteristic roots ``{i, -1, -2}``.

    The object passed to ``fit`` is the boundary data (any
    :class:`hexpot.data.BoundaryData`); ``None`` selects the built-in
    trigonometric reference data.  ``predict`` takes an ``(n, 2)`` array
    of interior points and returns the complex field values.
    """

    def __init__(
        self,
        a0: complex = 2j,
        a1: complex = 2 - 3j,
        a2: complex = -3 + 1j,
        curve_kind: str = "ellipse",
        curve_params: dict | None = None,
        n_nodes: int = 128,
        lam: complex = 16.0,
        method: str = "neumann",
        oversample: int = 8,
        stencil: int = 8,
        lowmode_cutoff: int | None = None,
        tol: float = 1e-10,
        max_iter: int = 200,
        sector_radius: float | None = None,
        sector_delta: float | None = None,
    ):
        self.a0 = a0
        self.a1 = a1
        self.a2 = a2
        self.curve_kind = curve_kind
        self.curve_params = curve_params
        self.n_nodes = n_nodes
        self.lam = lam
        self.method = method
        self.oversample = oversample
        self.stencil = stencil
        self.lowmode_cutoff = lowmode_cutoff
        self.tol = tol
        self.max_iter = max_iter
        self.sector_radius = sector_radius
        self.sector_delta = sector_delta

    def fit(self, X: BoundaryData | None = None, y=None):
        """Solve the boundary problem for the given data; ignores ``y``."""
        if X is None:
            X = default_trig_data()
        if not isinstance(X, BoundaryData):
            raise TypeError("fit expects boundary data (a BoundaryData instance) or None")
        params = self.curve_params
        if params is None:
            params = {"a": 2.0, "b": 1.0} if self.curve_kind == "ellipse" else {}
        curve = make_curve(self.curve_kind, params)
        coeffs = Coefficients(a0=self.a0, a1=self.a1, a2=self.a2)
        self.solution_ = solve_bvp(
            coeffs,
            curve,
            self.n_nodes,
            self.lam,
            X,
            method=self.method,
            oversample=self.oversample,
            stencil=self.stencil,
            lowmode_cutoff=self.lowmode_cutoff,
            tol=self.tol,
            max_iter=self.max_iter,
            sector_radius=self.sector_radius,
            sector_delta=self.sector_delta,
        )
        self.diagnostics_ = dict(self.solution_.diagnostics)
        self.n_features_in_ = 2
        return self

    def predict(self, X) -> np.ndarray:
        """Complex field values at interior points ``X`` of shape ``(n, 2)``."""
        check_is_fitted(self, "solution_")
        X = check_array(X, dtype=float)
        if X.shape[1] != 2:
            raise ValueError(f"expected points with 2 coordinates, got {X.shape[1]}")
        return np.asarray(self.solution_.evaluate(X))
