"""Boundary curves, node sampling, and the normal-field regularity check."""

import numpy as np
import pytest
from scipy.special import ellipe

from hexpot.errors import DomainError, IrregularCurve, SelfIntersection
from hexpot.geometry import (
    BoundaryCurve,
    encloses,
    lyapunov_exponent,
    make_curve,
    sample_nodes,
)

# perimeter of the (a=2, b=1) ellipse, frozen from 4 a E(1 - b^2/a^2)
ELLIPSE_2_1_LENGTH = 9.688448220547675


def test_circle_length():
    curve = make_curve("circle", {"radius": 1.0})
    assert curve.length() == pytest.approx(2 * np.pi, rel=1e-12)
    nodes = sample_nodes(curve, 64)
    assert float(np.sum(nodes.weights)) == pytest.approx(2 * np.pi, rel=1e-12)


def test_ellipse_length_against_elliptic_integral():
    curve = make_curve("ellipse", {"a": 2.0, "b": 1.0})
    oracle = 4 * 2.0 * ellipe(1 - 0.25)  # complete elliptic integral route
    assert oracle == pytest.approx(ELLIPSE_2_1_LENGTH, rel=1e-14)
    assert curve.length() == pytest.approx(ELLIPSE_2_1_LENGTH, rel=1e-12)
    nodes = sample_nodes(curve, 64)
    assert float(np.sum(nodes.weights)) == pytest.approx(ELLIPSE_2_1_LENGTH, rel=1e-12)


def test_circle_nodes_at_n8():
    nodes = sample_nodes(make_curve("circle", {"radius": 1.0}), 8)
    want = np.stack(
        [np.cos(np.pi * np.arange(8) / 4), np.sin(np.pi * np.arange(8) / 4)], axis=-1
    )
    assert np.allclose(nodes.points, want, atol=1e-15)
    assert np.allclose(nodes.normals, -nodes.points, atol=1e-15)
    assert np.allclose(nodes.weights, 2 * np.pi / 8, atol=1e-15)


def test_node_nesting_is_exact():
    curve = make_curve("ellipse", {"a": 2.0, "b": 1.0})
    coarse = sample_nodes(curve, 256)
    fine = sample_nodes(curve, 512)
    assert np.array_equal(fine.points[::2], coarse.points)
    assert np.array_equal(fine.params[::2], coarse.params)


@pytest.mark.parametrize(
    "kind,params",
    [
        ("circle", {"radius": 1.0}),
        ("ellipse", {"a": 2.0, "b": 1.0}),
        ("smooth_star", {"amplitude": 0.3, "harmonics": 5}),
    ],
)
def test_winding_integral_is_two_pi(kind, params):
    """Discrete angular integral around an interior point: 2 pi to 1e-8 at N=256."""
    nodes = sample_nodes(make_curve(kind, params), 256)
    y = np.array([0.05, -0.02])
    h = 2 * np.pi / nodes.n
    speed = nodes.weights / h
    tangent = np.stack([nodes.normals[:, 1], -nodes.normals[:, 0]], axis=-1)
    v = speed[:, None] * tangent
    rel = nodes.points - y
    integrand = (rel[:, 0] * v[:, 1] - rel[:, 1] * v[:, 0]) / np.sum(rel * rel, axis=-1)
    assert h * float(np.sum(integrand)) == pytest.approx(2 * np.pi, abs=1e-8)


def test_normals_unit_orthogonal_inward():
    curve = make_curve("smooth_star", {"amplitude": 0.3, "harmonics": 5})
    nodes = sample_nodes(curve, 128)
    t = nodes.params
    v = curve.velocity(t)
    dots = np.einsum("ij,ij->i", nodes.normals, v) / np.linalg.norm(v, axis=-1)
    assert np.max(np.abs(dots)) <= 1e-12
    assert np.allclose(np.linalg.norm(nodes.normals, axis=-1), 1.0, atol=1e-12)
    probes = nodes.points + 0.02 * nodes.normals
    assert encloses(curve, probes).all()


def test_star_with_cusp_rejected():
    # amplitude equal to the base radius pinches r = r' = 0 simultaneously
    with pytest.raises(IrregularCurve):
        make_curve("smooth_star", {"amplitude": 1.0, "harmonics": 5})
    with pytest.raises(IrregularCurve):
        make_curve("smooth_star", {"amplitude": 1.0, "harmonics": 1})


def test_star_overdriven_self_intersects():
    with pytest.raises(SelfIntersection):
        make_curve("smooth_star", {"amplitude": 1.3, "harmonics": 5})


def test_star_below_cusp_is_fine():
    curve = make_curve("smooth_star", {"amplitude": 0.9, "harmonics": 5})
    assert curve.length() > 0


def test_make_curve_rejects_bad_input():
    with pytest.raises(DomainError):
        make_curve("square", {})
    with pytest.raises(DomainError):
        make_curve("circle", {"radius": -2.0})
    with pytest.raises(DomainError):
        make_curve("ellipse", {"a": 2.0})
    with pytest.raises(DomainError):
        make_curve("smooth_star", {"amplitude": 0.3, "harmonics": 0})


def test_sample_nodes_size_validation():
    curve = make_curve("circle", {"radius": 1.0})
    with pytest.raises(DomainError):
        sample_nodes(curve, 15)
    with pytest.raises(DomainError):
        sample_nodes(curve, 4)


def test_encloses():
    curve = make_curve("ellipse", {"a": 2.0, "b": 1.0})
    pts = np.array([[0.0, 0.0], [1.5, 0.0], [0.0, 0.9], [2.5, 0.0], [0.0, -1.5]])
    assert list(encloses(curve, pts)) == [True, True, True, False, False]
    assert encloses(curve, np.array([0.1, 0.1]))


def test_min_distance():
    nodes = sample_nodes(make_curve("circle", {"radius": 1.0}), 64)
    assert nodes.min_distance(np.array([0.0, 0.0])) == pytest.approx(1.0, abs=1e-12)
    assert nodes.min_distance(np.array([[1.5, 0.0], [0.25, 0.0]])) == pytest.approx(
        [0.5, 0.75], abs=1e-4
    )


def _weierstrass_curve(alpha: float, beta: float = 0.5, kmax: int = 9, n_fft: int = 8192):
    """A closed curve whose tangent angle has a planted Hölder exponent."""

    def theta(t):
        t = np.asarray(t, dtype=float)
        w = np.zeros_like(t)
        for k in range(1, kmax + 1):
            w += 2.0 ** (-alpha * k) * np.cos(2.0**k * t)
        return t + beta * w

    tf = 2 * np.pi * np.arange(n_fft) / n_fft
    vf = np.exp(1j * theta(tf))
    c = vf.mean()  # removing the mean velocity closes the curve

    def velocity(t):
        v = np.exp(1j * theta(np.asarray(t, dtype=float))) - c
        return np.stack([v.real, v.imag], axis=-1)

    vhat = np.fft.fft(vf - c) / n_fft
    m = np.fft.fftfreq(n_fft, d=1.0 / n_fft)
    phat = np.zeros_like(vhat)
    phat[m != 0] = vhat[m != 0] / (1j * m[m != 0])

    def position(t):
        t = np.asarray(t, dtype=float)
        ph = np.exp(1j * np.outer(np.atleast_1d(t), m)) @ phat
        out = np.stack([ph.real, ph.imag], axis=-1)
        return out if np.asarray(t).ndim else out[0]

    return BoundaryCurve(
        kind="custom", params={"alpha": alpha}, position=position, velocity=velocity
    )


def test_lyapunov_exponent_smooth_curves():
    assert lyapunov_exponent(make_curve("circle", {"radius": 1.0})) >= 0.97
    assert lyapunov_exponent(make_curve("ellipse", {"a": 2.0, "b": 1.0})) >= 0.97


def test_lyapunov_exponent_recovers_planted_roughness():
    got = lyapunov_exponent(_weierstrass_curve(0.6))
    assert 0.45 <= got <= 0.75  # planted exponent 0.6, fit noise allowed
    assert got < 0.9


def test_lyapunov_warns_when_rough():
    with pytest.warns(UserWarning, match="Lyapunov"):
        lyapunov_exponent(_weierstrass_curve(0.4))
