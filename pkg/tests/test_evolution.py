import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import abpackets as ab


def analytic_gaussian(x, s, t, m=1.0):
    """Freely spread Gaussian with initial position spread s."""
    z = s * (1 + 1j * t / (2 * m * s * s))
    return (2 * math.pi) ** -0.25 * z ** -0.5 * np.exp(-x**2 / (4 * s * z))


@pytest.fixture(scope="module")
def gauss():
    g = ab.Grid.covering(-40, 40, 0.5 / 16)
    return ab.gaussian(g, 0.5)


@pytest.fixture(scope="module")
def packets():
    d, a, sigma = 1.0, 0.5, 0.4
    grid = ab.Grid.covering(-(d + a), d + a, sigma / 32, margin=5 * sigma, length=200 * d)

    def build(alpha):
        return ab.smooth_edges(ab.make_two_packet(d, a, alpha), sigma, grid)
    return build


def test_zero_time_is_identity(packets):
    w = packets(0.4)
    np.testing.assert_allclose(ab.free_evolve(w, ab.PropagationSpec(0.0)).samples, w.samples,
                               atol=1e-12)


@pytest.mark.parametrize("t", [0.3, 1.0, 4.0])
def test_gaussian_spreading_matches_analytic(gauss, t):
    e = ab.free_evolve(gauss, t)
    assert np.max(np.abs(e.samples - analytic_gaussian(gauss.x, 0.5, t))) <= 1e-8
    rho = np.abs(e.samples) ** 2
    width = math.sqrt(np.sum(gauss.x**2 * rho) * gauss.dx)
    assert width == pytest.approx(math.sqrt(0.25 + (t / 1.0) ** 2), abs=1e-8)


def test_heavier_particle_spreads_slower(gauss):
    light = ab.free_evolve(gauss, ab.PropagationSpec(2.0, mass=1.0))
    heavy = ab.free_evolve(gauss, ab.PropagationSpec(2.0, mass=4.0))
    np.testing.assert_allclose(heavy.samples, ab.free_evolve(gauss, 0.5).samples, atol=1e-12)
    assert np.abs(heavy.samples).max() > np.abs(light.samples).max()
    with pytest.raises(ValueError):
        ab.PropagationSpec(1.0, mass=0.0)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.0, 0.7), st.floats(0.0, 2 * math.pi))
def test_unitary_and_momentum_preserving(packets, t, alpha):
    w = packets(alpha)
    e = ab.free_evolve(w, t)
    assert abs(e.norm() - 1) <= 1e-9
    before = ab.fft_momentum_density(w).density
    after = ab.fft_momentum_density(e).density
    assert np.max(np.abs(after - before)) <= 1e-9


def test_composition(packets):
    w = packets(math.pi / 4)
    e12 = ab.free_evolve(ab.free_evolve(w, 0.1), 0.25)
    e3 = ab.free_evolve(w, 0.35)
    assert np.max(np.abs(e12.samples - e3.samples)) <= 1e-10


def test_time_reversal(packets):
    w = packets(1.3)
    back = ab.free_evolve(ab.free_evolve(w, 0.2), -0.2)
    assert np.max(np.abs(back.samples - w.samples)) <= 1e-12


def test_phase_invisible_at_start(packets):
    r0 = ab.position_density(packets(0.0))
    rp = ab.position_density(packets(math.pi))
    assert ab.l1_distance(r0, rp) < 1e-12


def test_phase_visible_after_overlap(packets):
    w0, wp = packets(0.0), packets(math.pi)
    t = 1.5 * ab.overlap_time(*ab.split_at(w0, 0.0), t_start=0.01)
    d0 = ab.position_density(ab.free_evolve(w0, t))
    dp = ab.position_density(ab.free_evolve(wp, t))
    assert ab.l1_distance(d0, dp) > 0.05
    assert d0.integral() == pytest.approx(1, abs=1e-6)


def test_alpha_pi_moves_central_fringe(packets):
    # symmetric packets: alpha = 0 has a bright centre, alpha = pi a node
    w0, wp = packets(0.0), packets(math.pi)
    t = 0.6
    r0 = np.abs(ab.free_evolve(w0, t).samples) ** 2
    rp = np.abs(ab.free_evolve(wp, t).samples) ** 2
    centre = np.argmin(np.abs(w0.x))
    assert rp[centre] < 1e-3 * r0[centre]


def test_far_field_fringe_shift_half_period():
    # Gaussian pair: the alpha = pi pattern is the alpha = 0 pattern shifted
    # by half a fringe, spacing 2 pi t / D
    D, s, t = 10.0, 0.1, 30.0
    g = ab.Grid.covering(-1500, 1500, s / 8)
    left = ab.gaussian(g, s, center=-D / 2).samples
    right = ab.gaussian(g, s, center=D / 2).samples

    def pattern(alpha):
        w = ab.SampledWave(g.x0, g.dx, left + np.exp(1j * alpha) * right).normalized()
        return np.abs(ab.free_evolve(w, t).samples) ** 2
    r0, rp = pattern(0.0), pattern(math.pi)
    fringe = 2 * math.pi * t / D
    centre = np.abs(g.x) < fringe / 2
    assert abs(g.x[centre][np.argmax(r0[centre])]) <= g.dx
    # node between samples: nearest one sits dx/2 away, (pi dx / 2 fringe)^2 ~ 1e-6
    assert rp[centre].min() < 1e-5 * r0[centre].max()
    side = (g.x > 0) & (g.x < fringe)
    assert abs(g.x[side][np.argmax(rp[side])] - fringe / 2) < 0.01 * fringe


def test_aliasing_rejected(packets):
    with pytest.raises(ab.AliasingError):
        ab.free_evolve(packets(0.0), 200.0)


def test_unresolved_band_rejected():
    w = ab.make_tophat(1.0)
    s = ab.sample(w, ab.grid_for(w, 1 / 64, length=32))
    with pytest.raises(ab.ResolutionError):
        ab.free_evolve(s, 0.1)


def test_split_and_overlap_fraction(packets):
    w = packets(0.7)
    left, right = ab.split_at(w, 0.0)
    assert left.norm() == pytest.approx(1) and right.norm() == pytest.approx(1)
    assert ab.overlap_fraction(left, right) == 0.0
    assert ab.overlap_fraction(left, left) == pytest.approx(1)


def test_overlap_time_brackets_threshold(packets):
    left, right = ab.split_at(packets(0.0), 0.0)
    t = ab.overlap_time(left, right, threshold=0.1, t_start=0.01, rtol=1e-4)
    assert ab.overlap_fraction(ab.free_evolve(left, t), ab.free_evolve(right, t)) >= 0.1
    early = 0.99 * t
    assert ab.overlap_fraction(ab.free_evolve(left, early), ab.free_evolve(right, early)) < 0.1
