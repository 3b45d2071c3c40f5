"""Momentum-space analysis of wavepacket superpositions.

Fourier convention: ``psi~(p) = (2 pi)^(-1/2) * integral psi(x) exp(-i p x) dx``.

Closed forms are used wherever the wave is piecewise constant; the FFT
routines act on :class:`~abpackets.wavefunctions.SampledWave` and serve as
an independent numerical check of every closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid
from scipy.special import sici

from .errors import DivergentMomentError, ResolutionError
from .wavefunctions import PiecewiseWave, SampledWave

SQRT_2PI = math.sqrt(2.0 * math.pi)
MAX_MOMENT_ORDER = 4


def sinc(x):
    """Unnormalized ``sin(x) / x`` with ``sinc(0) = 1``."""
    return np.sinc(np.asarray(x) / np.pi)


@dataclass(frozen=True, eq=False)
class DensityCurve:
    """Probability density sampled on a uniform, ascending grid.

    Used for momentum densities (``p`` holds momenta) and, by
    :func:`abpackets.evolution.position_density`, for position densities
    (``p`` then holds positions).
    """

    p: np.ndarray
    density: np.ndarray
    dp: float

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        rho = np.array(self.density, dtype=float)
        if p.shape != rho.shape or p.ndim != 1 or p.size < 3:
            raise ValueError("p and density must be matching 1-D arrays of length >= 3")
        if np.any(rho < 0):
            raise ValueError(f"density has negative entries (min {rho.min()!r})")
        steps = np.diff(p)
        if not np.allclose(steps, self.dp, rtol=1e-9, atol=0):
            raise ValueError("grid must be uniform with spacing dp")
        p.setflags(write=False)
        rho.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "density", rho)
        object.__setattr__(self, "dp", float(self.dp))

    def integral(self) -> float:
        return float(trapezoid(self.density, dx=self.dp))

    def mass_between(self, lo: float, hi: float) -> float:
        """Trapezoidal mass on the grid points inside ``[lo, hi]``."""
        sel = (self.p >= lo) & (self.p <= hi)
        if sel.sum() < 2:
            return 0.0
        return float(trapezoid(self.density[sel], dx=self.dp))

    def restrict(self, lo: float, hi: float) -> "DensityCurve":
        sel = (self.p >= lo) & (self.p <= hi)
        return DensityCurve(self.p[sel], self.density[sel], self.dp)


@dataclass(frozen=True)
class ModularSample:
    """``<psi| exp(-i p b) |psi>`` at shift ``b``."""

    b: float
    value: complex

    def __post_init__(self):
        if abs(self.value) > 1 + 1e-12:
            raise ValueError(f"modular expectation exceeds one in magnitude: {self.value!r}")


# --------------------------------------------------------------------------
# closed forms for piecewise waves


def _segment_arrays(w: PiecewiseWave):
    segs = w.segments
    return (np.array([s.start for s in segs]), np.array([s.end for s in segs]),
            np.array([s.amplitude for s in segs]), np.array([s.rate for s in segs]))


def _exp_integral(lo, hi, q):
    """``integral_lo^hi exp(i q x) dx``, stable as ``q -> 0``."""
    width = hi - lo
    return width * np.exp(0.5j * q * (lo + hi)) * sinc(0.5 * q * width)


def momentum_amplitude(w: PiecewiseWave, p):
    """Exact momentum amplitude of a piecewise wave at momenta ``p``."""
    p_arr = np.asarray(p, dtype=float)
    out = np.zeros(p_arr.shape, dtype=complex)
    for s in w.segments:
        out += s.amplitude * _exp_integral(s.start, s.end, s.rate - p_arr)
    out /= SQRT_2PI
    return out if out.ndim else complex(out)


def momentum_density(w: PiecewiseWave, p):
    """``|momentum_amplitude(w, p)|**2``."""
    return np.abs(momentum_amplitude(w, p)) ** 2


def analytic_density_single(d: float, p):
    """Momentum density of one top-hat of length ``d``."""
    return d / (2 * np.pi) * sinc(0.5 * np.asarray(p) * d) ** 2


def analytic_density_two_packet(d: float, D: float, alpha: float, p):
    """Momentum density of two top-hats of length ``d``, centers ``D`` apart,
    relative phase ``alpha``: ``(d/pi) cos^2((p D - alpha)/2) sinc^2(p d/2)``.
    """
    if D < d:
        raise ValueError(f"center separation D={D} smaller than packet length d={d}")
    p = np.asarray(p, dtype=float)
    return d / np.pi * np.cos(0.5 * (p * D - alpha)) ** 2 * sinc(0.5 * p * d) ** 2


def two_packet_amplitude(d: float, a: float, alpha: float, p):
    """Closed-form momentum amplitude of :func:`~abpackets.wavefunctions.make_two_packet`.

    ``sqrt(d/pi) exp(i alpha/2) cos((p D - alpha)/2) sinc(p d/2)`` with ``D = d + 2a``.
    """
    p = np.asarray(p, dtype=float)
    D = d + 2 * a
    return (math.sqrt(d / math.pi) * np.exp(0.5j * alpha)
            * np.cos(0.5 * (p * D - alpha)) * sinc(0.5 * p * d))


def analytic_density_boosted_tophat(L: float, p0: float, p):
    """``(L / 2 pi) sinc^2((p - p0) L / 2)``; ``p0 = 0`` is the plain top-hat."""
    if not L > 0:
        raise ValueError(f"length must be positive, got {L}")
    return L / (2 * np.pi) * sinc(0.5 * (np.asarray(p, dtype=float) - p0) * L) ** 2


def sinc2_mass(L: float, p0: float, lo: float, hi: float) -> float:
    """Exact probability of ``analytic_density_boosted_tophat`` in ``[lo, hi]``."""
    def G(t):
        # integral_0^t sinc^2, odd in t
        if t == 0:
            return 0.0
        si, _ = sici(2 * abs(t))
        return math.copysign(si - math.sin(t) ** 2 / abs(t), t)
    t1, t2 = 0.5 * (lo - p0) * L, 0.5 * (hi - p0) * L
    return (G(t2) - G(t1)) / math.pi


def band_mass(w: PiecewiseWave, pmax: float) -> float:
    """Exact probability that ``|p| <= pmax`` for a wave without linear phase rates.

    Writing the amplitude as a sum over packet edges ``y_j`` with signed
    weights ``B_j`` gives ``|psi~|^2 = |sum_j B_j exp(-i p y_j)|^2 / (2 pi p^2)``,
    whose band integral reduces to sine integrals.
    """
    if any(s.rate for s in w.segments):
        raise ValueError("band_mass needs segments without linear phase rates")
    if not pmax > 0:
        raise ValueError("pmax must be positive")
    starts, ends, amps, _ = _segment_arrays(w)
    y = np.concatenate([starts, ends])
    B = np.concatenate([-amps, amps])
    delta = np.abs(y[:, None] - y[None, :])
    weight = np.real(B[:, None] * np.conj(B[None, :]))
    si, _ = sici(pmax * delta)
    F = delta * si - (1.0 - np.cos(pmax * delta)) / pmax
    return float(-np.sum(weight * F) / math.pi)


def _pairwise_overlap(a_arrays, b_arrays) -> complex:
    sa, ea, aa, ra = a_arrays
    sb, eb, ab, rb = b_arrays
    lo = np.maximum(sa[:, None], sb[None, :])
    hi = np.minimum(ea[:, None], eb[None, :])
    hit = hi > lo
    if not hit.any():
        return 0j
    q = (rb[None, :] - ra[:, None])[hit]
    coeff = (np.conj(aa)[:, None] * ab[None, :])[hit]
    return complex(np.sum(coeff * _exp_integral(lo[hit], hi[hit], q)))


def overlap(a, b) -> complex:
    """Scalar product ``<a|b>`` (conjugate-linear in ``a``).

    Piecewise waves are integrated exactly over segment intersections;
    sampled waves must share a grid.
    """
    if isinstance(a, PiecewiseWave) and isinstance(b, PiecewiseWave):
        return _pairwise_overlap(_segment_arrays(a), _segment_arrays(b))
    if isinstance(a, SampledWave) and isinstance(b, SampledWave):
        if a.n != b.n or not math.isclose(a.dx, b.dx, rel_tol=1e-12) or \
                not math.isclose(a.x0, b.x0, rel_tol=1e-12, abs_tol=1e-12 * a.dx):
            raise ValueError("sampled waves live on incompatible grids")
        return complex(np.vdot(a.samples, b.samples) * a.dx)
    raise TypeError("overlap needs two PiecewiseWave or two SampledWave arguments")


def boosted_overlap_closed_form(N: int, l: float, d: float, p0: float) -> complex:
    """``<exp(i p0 x) Theta(x|N l) | boosted comb>`` for the staircase phase ``p0 l``.

    Equals ``sqrt(N / (L d)) (exp(-i p0 d) - 1) / (-i p0)`` with ``L = N l``;
    evaluated as ``sqrt(N d / L) exp(-i p0 d / 2) sinc(p0 d / 2)``, which has
    the limit ``sqrt(d / l)`` at ``p0 = 0``.
    """
    if not (0 < d <= l):
        raise ValueError(f"need 0 < d <= l, got d={d}, l={l}")
    if N < 1:
        raise ValueError("N must be at least 1")
    L = N * l
    return complex(math.sqrt(N * d / L) * np.exp(-0.5j * p0 * d) * sinc(0.5 * p0 * d))


def modular_expectation(w, b: float) -> ModularSample:
    """``<psi| exp(-i p b) |psi> = integral conj(psi(x)) psi(x - b) dx``.

    Exact for piecewise waves.  For sampled waves it is evaluated in momentum
    space, which equals the periodic autocorrelation on the grid; the wave
    must leave at least ``|b|`` of empty domain to avoid wrap-around.
    """
    if isinstance(w, PiecewiseWave):
        s, e, amp, rate = _segment_arrays(w)
        shifted = (s + b, e + b, amp * np.exp(-1j * rate * b), rate)
        return ModularSample(b, _pairwise_overlap((s, e, amp, rate), shifted))
    if isinstance(w, SampledWave):
        occupied = np.flatnonzero(np.abs(w.samples) > 1e-12 * np.abs(w.samples).max())
        extent = (occupied[-1] - occupied[0] + 1) * w.dx
        if abs(b) > w.n * w.dx - extent:
            raise ValueError(
                f"shift {b} wraps around the periodic domain (length {w.n * w.dx}, "
                f"wave extent {extent})"
            )
        p, amp = fft_momentum_amplitude(w, zero_order_hold=False)
        dp = p[1] - p[0]
        value = complex(np.sum(np.abs(amp) ** 2 * np.exp(-1j * p * b)) * dp)
        return ModularSample(b, value)
    raise TypeError(f"unsupported wave type {type(w).__name__}")


# --------------------------------------------------------------------------
# FFT oracle


def _check_resolution(w: SampledWave, hold: bool):
    if w.feature is not None:
        need = w.feature / 64 if hold else w.feature / 4
        if w.dx > need * (1 + 1e-9):
            raise ResolutionError(
                f"grid step {w.dx:.4g} does not resolve the shortest feature "
                f"{w.feature:.4g}; need dx <= {need:.4g}"
            )
        return
    spec = np.abs(np.fft.fft(w.samples)) ** 2
    k = np.abs(np.fft.fftfreq(w.n))
    frac = spec[k > 0.375].sum() / spec.sum()
    if frac > 1e-10:
        raise ResolutionError(
            f"{frac:.3g} of the spectral power sits in the top quarter of the band; "
            f"refine the grid (dx = {w.dx:.4g})"
        )


def fft_momentum_amplitude(w: SampledWave, zero_order_hold: bool | None = None,
                           check_resolution: bool = False):
    """Momentum amplitude of sampled data on the conjugate FFT grid.

    Returns ``(p, amplitude)`` with ``p`` ascending.  With
    ``zero_order_hold`` (default: ``w.piecewise_constant``) the samples are
    treated as constant over their cells and the exact transform of that
    step function is returned; otherwise they are point samples of a smooth
    function and the plain DFT (spectrally accurate) is used.
    """
    hold = w.piecewise_constant if zero_order_hold is None else zero_order_hold
    if check_resolution:
        _check_resolution(w, hold)
    n, dx = w.n, w.dx
    p = 2 * np.pi * np.fft.fftfreq(n, dx)
    amp = np.fft.fft(w.samples) * (dx / SQRT_2PI) * np.exp(-1j * p * w.x0)
    if hold:
        amp = amp * sinc(0.5 * p * dx)
    return np.fft.fftshift(p), np.fft.fftshift(amp)


def fft_momentum_density(w: SampledWave, zero_order_hold: bool | None = None,
                         check_resolution: bool = True) -> DensityCurve:
    """FFT estimate of the momentum density.

    Without the zero-order hold, ``sum(density) * dp`` equals the discrete
    norm of ``w`` exactly (discrete Parseval).  With it the curve is the
    exact in-band density of the cellwise-constant function, whose
    out-of-band tail is not folded back, so its sum falls short of one by
    that tail.
    """
    p, amp = fft_momentum_amplitude(w, zero_order_hold, check_resolution)
    return DensityCurve(p, np.abs(amp) ** 2, 2 * np.pi / (w.n * w.dx))


def moment(w: SampledWave, n: int, full_output: bool = False):
    """``<p^n>`` from the FFT momentum density, for ``0 <= n <= 4``.

    With ``full_output`` returns ``(value, tail)`` where ``tail`` bounds the
    contribution of ``|p|`` beyond the grid's band, extrapolating the
    ``|p|^-6`` decay of a raised-cosine-smoothed wave from the mid band.
    """
    if int(n) != n or not 0 <= n <= MAX_MOMENT_ORDER:
        raise ValueError(f"moment order must be an integer in [0, {MAX_MOMENT_ORDER}], got {n}")
    n = int(n)
    if w.piecewise_constant and n >= 2:
        raise DivergentMomentError(
            f"<p^{n}> diverges for a wave with jump discontinuities (density ~ 1/p^2); "
            f"smooth the edges first"
        )
    curve = fft_momentum_density(w, zero_order_hold=False, check_resolution=False)
    p, rho = curve.p, curve.density
    value = float(np.sum(p**n * rho) * curve.dp)
    if not full_output:
        return value
    pmax = np.abs(p).max()
    window = (np.abs(p) >= pmax / 8) & (np.abs(p) <= pmax / 4)
    envelope = float(np.max(rho[window] * np.abs(p[window]) ** 6)) if window.any() else 0.0
    tail = 2 * envelope * pmax ** (n - 5) / (5 - n)
    return value, tail


def l1_distance(c1: DensityCurve, c2: DensityCurve) -> float:
    """``integral |c1 - c2|`` for curves on the same grid."""
    if c1.p.shape != c2.p.shape or not np.allclose(c1.p, c2.p, rtol=0, atol=1e-9 * c1.dp):
        raise ValueError("curves are on different grids")
    return float(np.sum(np.abs(c1.density - c2.density)) * c1.dp)


def peak_location(c: DensityCurve, tie_rtol: float = 1e-12) -> float:
    """Location of the global maximum, refined by a parabola through the
    discrete argmax and its neighbours.

    Equal maxima (within ``tie_rtol``) go to the smallest ``|p|``, and to
    positive ``p`` if still tied.
    """
    rho = c.density
    top = rho.max()
    cand = np.flatnonzero(rho >= top * (1 - tie_rtol))
    order = sorted(cand, key=lambda i: (abs(c.p[i]), -c.p[i]))
    i = order[0]
    if i == 0 or i == rho.size - 1:
        raise ValueError("curve has no interior maximum (monotone over the grid)")
    y0, y1, y2 = rho[i - 1], rho[i], rho[i + 1]
    denom = y0 - 2 * y1 + y2
    shift = 0.0 if denom == 0 else 0.5 * (y0 - y2) / denom
    return float(c.p[i] + shift * c.dp)


def density_curve(w: PiecewiseWave, p) -> DensityCurve:
    """Exact momentum density of ``w`` on the uniform grid ``p``."""
    p = np.asarray(p, dtype=float)
    return DensityCurve(p, momentum_density(w, p), float(p[1] - p[0]))
