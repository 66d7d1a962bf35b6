"""Boundary data families: traces, amplitudes, smoothness checks."""

import warnings

import numpy as np
import pytest

from hexpot.data import ManufacturedData, TrigData, ZeroData, default_trig_data
from hexpot.geometry import make_curve
from hexpot.spectral import canonical_coefficients


def test_zero_data():
    t = np.linspace(0.0, 2.0 * np.pi, 17)
    tr = ZeroData().traces(t, 16.0)
    assert tr.shape == (3, 17)
    assert tr.dtype == complex
    assert np.all(tr == 0)


def test_trig_amplitude_decays():
    data = default_trig_data()
    amps = [abs(data.amplitude(lam)) for lam in (8.0, 16.0, 32.0, 64.0)]
    assert amps == sorted(amps, reverse=True)
    # rational in lam^2 with poles at +-10i, so lam = 10 halves it exactly
    assert data.amplitude(10.0) == pytest.approx(0.5)


def test_trig_traces_match_hand_evaluation():
    data = TrigData(modes=([[1, 2.0, 0.0]], [[0, 1.0, 0.0]], [[2, 0.0, 0.0, 3.0, 0.0]]))
    t = np.array([0.0, 0.7, 2.0])
    lam = 16.0
    amp = data.amplitude(lam)
    tr = data.traces(t, lam)
    np.testing.assert_allclose(tr[0], amp * 2.0 * np.cos(t), rtol=1e-15)
    np.testing.assert_allclose(tr[1], amp * np.ones(3), rtol=1e-15)
    np.testing.assert_allclose(tr[2], amp * 3.0 * np.sin(2.0 * t), rtol=1e-15)


def test_smoothness_quiet_for_trig_polynomials():
    data = default_trig_data()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        worst = data.check_smoothness(16.0)
    assert worst < 1e-12
    assert not caught


def test_smoothness_warns_on_fat_tail():
    rough = TrigData(modes=([[20, 1.0, 0.0]], [[1, 1.0, 0.0]], [[0, 1.0, 0.0]]))
    with pytest.warns(UserWarning, match="Fourier octave"):
        worst = rough.check_smoothness(16.0, n=64)
    assert worst > 0.5


def test_smoothness_zero_data_is_silent():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert ZeroData().check_smoothness(16.0) == 0.0
    assert not caught


@pytest.fixture(scope="module")
def manufactured():
    curve = make_curve("circle", {"radius": 1.2})
    densities = (
        lambda t: np.cos(t),
        lambda t: 0.5 * np.sin(2.0 * t),
        lambda t: 0.25 + 0.1 * np.cos(3.0 * t),
    )
    return ManufacturedData(
        curve=curve, coeffs=canonical_coefficients(), densities=densities, n_fine=512
    )


def test_manufactured_density_samples(manufactured):
    t = np.array([0.0, np.pi / 2])
    mu = manufactured.density_samples(t)
    assert mu.shape == (3, 2)
    assert mu[0, 0] == 1.0
    assert mu[1, 1] == pytest.approx(0.5 * np.sin(np.pi))
    assert mu[2, 0] == pytest.approx(0.35)


def test_manufactured_traces_linear_in_densities(manufactured):
    t = np.array([0.3, 2.1])
    lam = 12.0
    doubled = ManufacturedData(
        curve=manufactured.curve,
        coeffs=manufactured.coeffs,
        densities=tuple(
            (lambda f: (lambda s: 2.0 * f(s)))(f) for f in manufactured.densities
        ),
        n_fine=512,
    )
    tr = manufactured.traces(t, lam)
    tr2 = doubled.traces(t, lam)
    assert tr.shape == (3, 2)
    assert np.all(np.isfinite(tr))
    np.testing.assert_allclose(tr2, 2.0 * tr, rtol=1e-12)


def test_manufactured_context_cached(manufactured):
    lam = 12.0
    ctx = manufactured.context(lam)
    assert ctx.lam == lam
    assert manufactured.context(lam) is ctx
