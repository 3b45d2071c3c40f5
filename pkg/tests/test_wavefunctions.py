import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

import abpackets as ab


def quad_norm(w):
    """Norm by adaptive quadrature over each segment: an oracle independent
    of the closed-form segment weights."""
    total = 0.0
    for s in w.segments:
        val, _ = quad(lambda x: abs(complex(ab.evaluate(w, x))) ** 2, s.start, s.end,
                      epsabs=1e-14, epsrel=1e-13)
        total += val
    return total


# --------------------------------------------------------------------------
# constructors


@pytest.mark.parametrize("d, amplitude", [(1.0, 1.0), (2 * math.pi, 1 / math.sqrt(2 * math.pi))])
def test_tophat_amplitude(d, amplitude):
    w = ab.make_tophat(d)
    assert w.segments[0].amplitude == pytest.approx(amplitude, rel=1e-15)
    assert abs(quad_norm(w) - 1) <= 1e-12


def test_tophat_rejects_nonpositive_length():
    with pytest.raises(ValueError):
        ab.make_tophat(0.0)
    with pytest.raises(ValueError):
        ab.make_tophat(-1.0)


def test_two_packet_zero_phase_is_real_and_mirror_symmetric():
    w = ab.make_two_packet(2.0, 0.3, 0.0)
    x = np.linspace(-3, 3, 1001)
    vals = ab.evaluate(w, x)
    assert np.all(vals.imag == 0)
    # half-open intervals: compare interior points only
    inner = np.abs(np.abs(x) - 0.3) > 1e-9
    inner &= np.abs(np.abs(x) - 2.3) > 1e-9
    np.testing.assert_array_equal(vals[inner], ab.evaluate(w, -x)[inner])


def test_two_packet_layout(narrow_gap):
    d, a, D = narrow_gap
    w = ab.make_two_packet(d, a, math.pi / 2)
    left, right = w.segments
    assert left.start == pytest.approx(-(d + a)) and left.end == pytest.approx(-a)
    assert right.start == pytest.approx(a) and right.end == pytest.approx(a + d)
    assert right.start + d / 2 - (left.start + d / 2) == pytest.approx(D)
    assert right.amplitude / left.amplitude == pytest.approx(1j)
    assert abs(quad_norm(w) - 1) <= 1e-12


@pytest.mark.parametrize("a", [0.0, -0.1])
def test_two_packet_rejects_nonpositive_gap(a):
    with pytest.raises(ValueError):
        ab.make_two_packet(1.0, a)


def test_comb_single_packet_is_tophat():
    w = ab.make_comb(1, 1.7, 0.2, alpha=0.9)
    t = ab.make_tophat(1.7)
    assert w.segments[0].start == t.segments[0].start
    assert w.segments[0].width == t.segments[0].width
    assert abs(w.segments[0].amplitude) == pytest.approx(abs(t.segments[0].amplitude), rel=1e-15)


def test_comb_layout_and_phases():
    w = ab.make_comb(4, 1.0, 0.1, alpha=0.3)
    assert [s.start for s in w.segments] == pytest.approx([0.0, 1.1, 2.2, 3.3])
    phases = [np.angle(s.amplitude) for s in w.segments]
    assert phases == pytest.approx([0.0, 0.3, 0.6, 0.9], abs=1e-15)
    assert abs(quad_norm(w) - 1) <= 1e-12


def test_comb_geometry_fills_length():
    d, eps = ab.comb_geometry(200, 20 * math.pi, 0.01)
    assert 200 * (d + eps) == pytest.approx(20 * math.pi, rel=1e-14)
    assert eps / (d + eps) == pytest.approx(0.01, rel=1e-12)


@pytest.mark.parametrize("N", [0, -3, 2.5])
def test_comb_rejects_bad_count(N):
    with pytest.raises(ValueError):
        ab.make_comb(N, 1.0, 0.1)


def test_boosted_tophat_norm_and_phase():
    w = ab.make_boosted_tophat(20 * math.pi, 1.0)
    assert abs(quad_norm(w) - 1) <= 1e-12
    assert complex(ab.evaluate(w, 1.0)) == pytest.approx(np.exp(1j) / math.sqrt(20 * math.pi))


def test_piecewise_rejects_overlap_and_bad_norm():
    with pytest.raises(ValueError):
        ab.PiecewiseWave((ab.Segment(0, 1, 1 / math.sqrt(2)), ab.Segment(0.5, 1, 1 / math.sqrt(2))))
    with pytest.raises(ValueError):
        ab.PiecewiseWave((ab.Segment(0, 1, 0.5),))
    w = ab.PiecewiseWave.normalized([ab.Segment(0, 1, 3.0), ab.Segment(2, 2, 1.0)])
    assert w.norm() == pytest.approx(1, abs=1e-15)


# --------------------------------------------------------------------------
# phase programs


def test_zero_program_is_identity():
    w = ab.make_comb(5, 1.0, 0.2, 0.4)
    assert ab.apply_phase_program(w, ab.PhaseProgram.zeros(5)) == w


def test_relative_program_builds_two_packet():
    base = ab.make_two_packet(1.0, 0.2, 0.0)
    w = ab.apply_phase_program(base, ab.PhaseProgram.relative(0.8))
    ref = ab.make_two_packet(1.0, 0.2, 0.8)
    for s, r in zip(w.segments, ref.segments):
        assert s.amplitude == pytest.approx(r.amplitude, abs=1e-16)


def test_staircase_program_builds_boosted_comb():
    base = ab.make_comb(7, 1.0, 0.1)
    w = ab.apply_phase_program(base, ab.PhaseProgram.staircase(7, 0.35))
    ref = ab.make_comb(7, 1.0, 0.1, 0.35)
    for s, r in zip(w.segments, ref.segments):
        assert s.amplitude == pytest.approx(r.amplitude, abs=1e-15)


def test_program_length_mismatch_rejected():
    with pytest.raises(ValueError):
        ab.apply_phase_program(ab.make_comb(3, 1.0, 0.1), ab.PhaseProgram.zeros(4))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=4, max_size=4),
       st.lists(st.floats(-10, 10), min_size=4, max_size=4))
def test_programs_compose_additively(p1, p2):
    w = ab.make_comb(4, 0.8, 0.3)
    a, b = ab.PhaseProgram(tuple(p1)), ab.PhaseProgram(tuple(p2))
    twice = ab.apply_phase_program(ab.apply_phase_program(w, a), b)
    once = ab.apply_phase_program(w, a + b)
    for s, r in zip(twice.segments, once.segments):
        assert s.amplitude == pytest.approx(r.amplitude, abs=1e-14)
    x = np.linspace(-0.5, 5, 777)
    np.testing.assert_allclose(np.abs(ab.evaluate(once, x)), np.abs(ab.evaluate(w, x)), atol=1e-15)


# --------------------------------------------------------------------------
# sampling


def test_sample_tophat_is_constant_block():
    w = ab.make_tophat(1.0)
    s = ab.sample(w, ab.Grid.covering(-1, 2, 0.01))
    inside = (s.x > 0) & (s.x <= 1)
    assert np.ptp(np.abs(s.samples[inside])) < 1e-14
    assert np.all(s.samples[~inside] == 0)
    assert s.norm() == pytest.approx(1, abs=1e-14)


def test_sample_alpha_pi_negates_second_block():
    d, a = 1.0, 0.25
    grid = ab.Grid.covering(-(d + a), d + a, 0.01, margin=0.1)
    s0 = ab.sample(ab.make_two_packet(d, a, 0.0), grid)
    sp = ab.sample(ab.make_two_packet(d, a, math.pi), grid)
    right = s0.x > 0
    np.testing.assert_allclose(sp.samples[right], -s0.samples[right], atol=1e-15)
    np.testing.assert_allclose(sp.samples[~right], s0.samples[~right], atol=0)


def test_sample_norm_error_shrinks_linearly_with_dx():
    # edges deliberately off the grid: the raw discrete norm misses O(dx)
    w = ab.make_two_packet(1.0, 0.2137)
    errors = []
    for dx in (1e-2, 1e-3, 1e-4):
        s = ab.sample(w, ab.grid_for(w, dx, margin=0.1, align=False), normalize=False)
        errors.append(abs(s.norm() - 1))
    assert errors[0] <= 4 * 1e-2 * 0.5  # four edges, |psi|^2 = 1/(2d)
    for coarse, fine in zip(errors, errors[1:]):
        assert fine <= coarse / 10 * 1.5 + 1e-15


def test_aligned_grid_samples_exactly():
    w = ab.make_two_packet(2 * math.pi, 0.02 * math.pi)
    g = ab.grid_for(w, 2 * math.pi / 256)
    s = ab.sample(w, g, normalize=False)
    assert abs(s.norm() - 1) <= 1e-12
    assert s.piecewise_constant and s.feature == pytest.approx(2 * math.pi)


def test_sample_rejects_non_covering_grid():
    with pytest.raises(ValueError):
        ab.sample(ab.make_tophat(1.0), ab.Grid(0.25, 0.01, 10))


def test_aligned_step_incommensurate_returns_none():
    assert ab.aligned_step([0.0, 1.0, math.sqrt(2)], 0.1) is None
    step = ab.aligned_step([0.0, 0.3, 1.2], 0.1)
    assert step == pytest.approx(0.1)


# --------------------------------------------------------------------------
# edge smoothing


def test_smoothing_at_grid_step_matches_plain_samples():
    # a ramp one cell wide touches only the edge points, which sit on cell
    # boundaries, so the cell-centre samples coincide with the raw samples
    w = ab.make_two_packet(1.0, 0.25, 0.7)
    dx = 1 / 64
    grid = ab.Grid.covering(-1.25, 1.25, dx, margin=10 * dx)
    np.testing.assert_allclose(ab.smooth_edges(w, dx, grid).samples,
                               ab.sample(w, grid).samples, atol=1e-14)


def test_smoothed_packets_stay_disjoint():
    d, a, sigma = 1.0, 0.2, 0.3
    grid = ab.Grid.covering(-(d + a), d + a, sigma / 64, margin=5 * sigma)
    s = ab.smooth_edges(ab.make_two_packet(d, a, 1.0), sigma, grid)
    gap = np.abs(s.x) < a - sigma / 2
    assert gap.any() and np.all(s.samples[gap] == 0)
    assert s.norm() == pytest.approx(1, abs=1e-14)


def test_smoothed_second_moment_matches_kinetic_integral():
    # <p^2> = integral |psi'|^2; each raised-cosine ramp of width sigma on
    # amplitude A contributes A^2 pi^2 / (8 sigma), and the continuum norm
    # fixes A^2 = 1 / (2 (d - sigma/4)).
    d, a, sigma = 1.0, 0.5, 0.2
    grid = ab.Grid.covering(-(d + a), d + a, sigma / 256, margin=5 * sigma)
    w = ab.smooth_edges(ab.make_two_packet(d, a, 1.0), sigma, grid)
    exact = math.pi**2 / (2 * sigma) / (2 * (d - sigma / 4))
    value, tail = ab.moment(w, 2, full_output=True)
    assert abs(value - exact) <= tail
    assert abs(value - exact) / exact < 1e-7


@pytest.mark.parametrize("sigma", [0.5, 0.9])
def test_smoothing_too_wide_rejected(sigma):
    w = ab.make_tophat(1.0)
    with pytest.raises(ValueError):
        ab.smooth_edges(w, sigma, ab.Grid.covering(-10, 10, 0.01))


def test_smoothing_needs_margin():
    w = ab.make_tophat(1.0)
    with pytest.raises(ValueError):
        ab.smooth_edges(w, 0.1, ab.Grid.covering(0, 1, 0.001, margin=0.2))


def test_gaussian_normalized():
    g = ab.Grid.covering(-20, 20, 0.05)
    w = ab.gaussian(g, 1.5, center=0.3, momentum=2.0)
    assert w.norm() == pytest.approx(1, abs=1e-14)
    x = w.x
    rho = np.abs(w.samples) ** 2
    mean = np.sum(x * rho) * w.dx
    assert mean == pytest.approx(0.3, abs=1e-12)
    assert math.sqrt(np.sum((x - mean) ** 2 * rho) * w.dx) == pytest.approx(1.5, rel=1e-12)
