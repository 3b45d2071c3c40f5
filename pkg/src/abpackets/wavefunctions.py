"""Piecewise-constant wavepacket superpositions and their sampled forms.

Units are natural throughout (hbar = 1, m = 1), so positions and momenta are
plain dimensionless floats.

A :class:`PiecewiseWave` is an exact description of a superposition of
top-hat packets.  Each packet is a :class:`Segment` occupying the half-open
interval ``(start, start + width]`` with a constant complex amplitude,
optionally times a linear phase ``exp(i * rate * x)`` (used for the boosted
top-hat ``exp(i p0 x) Theta(x|L)``).  A :class:`SampledWave` holds complex
samples on a uniform grid and is what the FFT routines and the free
propagator consume.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

NORM_TOL = 1e-12
_EDGE_TOL = 1e-12


@dataclass(frozen=True)
class Segment:
    """One constant-amplitude packet on ``(start, start + width]``."""

    start: float
    width: float
    amplitude: complex
    rate: float = 0.0

    def __post_init__(self):
        if not (self.width > 0 and math.isfinite(self.width)):
            raise ValueError(f"segment width must be positive and finite, got {self.width}")
        if not math.isfinite(self.start):
            raise ValueError(f"segment start must be finite, got {self.start}")
        object.__setattr__(self, "amplitude", complex(self.amplitude))
        object.__setattr__(self, "rate", float(self.rate))

    @property
    def end(self) -> float:
        return self.start + self.width

    @property
    def weight(self) -> float:
        """Probability carried by this segment."""
        return abs(self.amplitude) ** 2 * self.width

    def scaled(self, factor: complex) -> "Segment":
        return Segment(self.start, self.width, self.amplitude * factor, self.rate)


@dataclass(frozen=True)
class PiecewiseWave:
    """Normalized superposition of disjoint, ascending segments."""

    segments: tuple[Segment, ...]

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ValueError("a wave needs at least one segment")
        object.__setattr__(self, "segments", segs)
        for left, right in zip(segs, segs[1:]):
            # touching packets (zero gap) are allowed: intervals are half-open
            scale = max(1.0, abs(left.end), abs(right.start))
            if left.end > right.start + _EDGE_TOL * scale:
                raise ValueError(
                    f"segments overlap or are unsorted: ({left.start}, {left.end}] "
                    f"and ({right.start}, {right.end}]"
                )
        norm = self.norm()
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"wave is not normalized: norm = {norm!r}")

    @classmethod
    def normalized(cls, segments: Iterable[Segment]) -> "PiecewiseWave":
        """Build a wave after rescaling ``segments`` to unit norm."""
        segs = tuple(segments)
        total = sum(s.weight for s in segs)
        if total <= 0:
            raise ValueError("cannot normalize a wave with zero norm")
        factor = 1.0 / math.sqrt(total)
        return cls(tuple(s.scaled(factor) for s in segs))

    def __len__(self) -> int:
        return len(self.segments)

    @property
    def packet_count(self) -> int:
        return len(self.segments)

    def norm(self) -> float:
        return math.fsum(s.weight for s in self.segments)

    @property
    def support(self) -> tuple[float, float]:
        return self.segments[0].start, self.segments[-1].end

    @property
    def edges(self) -> np.ndarray:
        return np.array([e for s in self.segments for e in (s.start, s.end)])

    @property
    def min_width(self) -> float:
        return min(s.width for s in self.segments)

    def gaps(self) -> np.ndarray:
        """Distances between consecutive packets (empty for one packet)."""
        return np.array([b.start - a.end for a, b in zip(self.segments, self.segments[1:])])

    def __call__(self, x) -> np.ndarray:
        return evaluate(self, x)


@dataclass(frozen=True)
class PhaseProgram:
    """Per-packet phases (radians) imprinted by a solenoid array, in spatial order."""

    phases: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))

    @classmethod
    def zeros(cls, n: int) -> "PhaseProgram":
        return cls((0.0,) * n)

    @classmethod
    def relative(cls, alpha: float) -> "PhaseProgram":
        """Two packets, phase ``alpha`` on the right-hand one."""
        return cls((0.0, alpha))

    @classmethod
    def staircase(cls, n: int, step: float) -> "PhaseProgram":
        """Phase ``k * step`` on the k-th of ``n`` packets."""
        return cls(tuple(k * step for k in range(n)))

    def __len__(self) -> int:
        return len(self.phases)

    def __add__(self, other: "PhaseProgram") -> "PhaseProgram":
        if len(self) != len(other):
            raise ValueError("phase programs of different lengths cannot be composed")
        return PhaseProgram(tuple(a + b for a, b in zip(self.phases, other.phases)))


@dataclass(frozen=True)
class Grid:
    """Uniform sampling grid; sample ``j`` sits at the center of cell ``j``.

    Cell ``j`` is ``(x0 + (j - 1/2) dx, x0 + (j + 1/2) dx]``.
    """

    x0: float
    dx: float
    n: int

    def __post_init__(self):
        if not self.dx > 0:
            raise ValueError(f"grid step must be positive, got {self.dx}")
        if self.n < 2:
            raise ValueError("grid needs at least two points")

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def lo(self) -> float:
        """Left edge of the first cell."""
        return self.x0 - 0.5 * self.dx

    @property
    def hi(self) -> float:
        """Right edge of the last cell."""
        return self.x0 + (self.n - 0.5) * self.dx

    @property
    def length(self) -> float:
        return self.n * self.dx

    @classmethod
    def covering(cls, lo: float, hi: float, dx: float, margin: float = 0.0,
                 length: float | None = None) -> "Grid":
        """Grid with cell edges on integer multiples of ``dx`` spanning ``[lo, hi]``.

        ``margin`` is added on both sides.  If ``length`` is given the grid is
        widened symmetrically to at least that total length.
        """
        first = math.floor((lo - margin) / dx + 1e-9)
        last = math.ceil((hi + margin) / dx - 1e-9)
        n = last - first
        if length is not None and n * dx < length:
            extra = math.ceil(length / dx) - n
            first -= extra // 2
            n += extra
        if n % 2:
            n += 1
        return cls((first + 0.5) * dx, dx, int(n))


def aligned_step(edges: Sequence[float], dx_max: float, max_refine: int = 64,
                 tol: float = 1e-7) -> float | None:
    """Largest step ``<= dx_max`` that puts every edge on a multiple of the step.

    Candidates are ``ref / k`` with ``ref`` the smallest nonzero edge, tried
    down to ``dx_max / max_refine``.  Returns ``None`` when none fits
    (incommensurate lengths); ``tol`` is measured in cells.
    """
    e = np.asarray(edges, dtype=float)
    nonzero = np.abs(e[np.abs(e) > 1e-14])
    if nonzero.size == 0:
        return dx_max
    ref = float(nonzero.min())
    k0 = max(1, math.ceil(ref / dx_max - 1e-12))
    for k in range(k0, k0 * max_refine + 1):
        step = ref / k
        q = e / step
        if np.all(np.abs(q - np.round(q)) < tol):
            return step
    return None


@dataclass(frozen=True, eq=False)
class SampledWave:
    """Complex samples ``samples[j]`` of a wave at ``x0 + j * dx``.

    ``piecewise_constant`` marks samples that stand for a function which is
    constant on each grid cell (what :func:`sample` produces); the FFT
    oracle then applies the exact zero-order-hold transform.  ``feature`` is
    the shortest length scale present (segment width or smoothing width),
    used for resolution checks.
    """

    x0: float
    dx: float
    samples: np.ndarray
    piecewise_constant: bool = False
    feature: float | None = None

    def __post_init__(self):
        if not self.dx > 0:
            raise ValueError(f"grid step must be positive, got {self.dx}")
        arr = np.array(self.samples, dtype=complex)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("samples must be a 1-D array with at least two entries")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def grid(self) -> Grid:
        return Grid(self.x0, self.dx, self.n)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2) * self.dx)

    def normalized(self) -> "SampledWave":
        return self.replace(samples=self.samples / math.sqrt(self.norm()))

    def replace(self, **changes) -> "SampledWave":
        kw = dict(x0=self.x0, dx=self.dx, samples=self.samples,
                  piecewise_constant=self.piecewise_constant, feature=self.feature)
        kw.update(changes)
        return SampledWave(**kw)


# --------------------------------------------------------------------------
# constructors


def make_tophat(d: float) -> PiecewiseWave:
    """Normalized top-hat of length ``d`` on ``(0, d]``."""
    if not d > 0:
        raise ValueError(f"top-hat length must be positive, got {d}")
    return PiecewiseWave((Segment(0.0, d, 1.0 / math.sqrt(d)),))


def make_two_packet(d: float, a: float, alpha: float = 0.0) -> PiecewiseWave:
    """Two top-hats of length ``d`` on ``[-(d+a), -a]`` and ``[a, a+d]``.

    The right-hand packet carries the relative phase ``exp(i alpha)``.
    """
    if not d > 0:
        raise ValueError(f"packet length must be positive, got {d}")
    if not a > 0:
        raise ValueError(f"half-gap a must be positive, got {a}")
    amp = 1.0 / math.sqrt(2.0 * d)
    return PiecewiseWave((
        Segment(-(d + a), d, amp),
        Segment(a, d, amp * np.exp(1j * alpha)),
    ))


def make_comb(N: int, d: float, eps: float, alpha: float = 0.0) -> PiecewiseWave:
    """``N`` top-hats of length ``d`` with period ``l = d + eps``.

    Packet ``n`` starts at ``n * l`` and carries phase ``exp(i n alpha)``;
    ``alpha = 0`` gives the unboosted comb, ``alpha = p0 * l`` the boosted one.
    """
    if int(N) != N or N < 1:
        raise ValueError(f"packet count must be a positive integer, got {N}")
    if not d > 0:
        raise ValueError(f"packet length must be positive, got {d}")
    if eps < 0:
        raise ValueError(f"gap must be non-negative, got {eps}")
    N = int(N)
    period = d + eps
    amp = 1.0 / math.sqrt(N * d)
    return PiecewiseWave(tuple(
        Segment(n * period, d, amp * np.exp(1j * n * alpha)) for n in range(N)
    ))


def comb_geometry(N: int, L: float, xi: float) -> tuple[float, float]:
    """Packet length and gap ``(d, eps)`` for ``N`` periods filling length ``L``."""
    if not 0 <= xi < 1:
        raise ValueError(f"gap fraction must lie in [0, 1), got {xi}")
    period = L / N
    return period * (1.0 - xi), period * xi


def make_boosted_tophat(L: float, p0: float) -> PiecewiseWave:
    """``exp(i p0 x) Theta(x|L)``: a top-hat of length ``L`` boosted to momentum ``p0``."""
    if not L > 0:
        raise ValueError(f"top-hat length must be positive, got {L}")
    return PiecewiseWave((Segment(0.0, L, 1.0 / math.sqrt(L), rate=p0),))


def apply_phase_program(w: PiecewiseWave, prog: PhaseProgram) -> PiecewiseWave:
    """Multiply packet ``k`` by ``exp(i * prog.phases[k])``."""
    if len(prog) != w.packet_count:
        raise ValueError(
            f"phase program has {len(prog)} entries but the wave has {w.packet_count} packets"
        )
    return PiecewiseWave(tuple(
        s.scaled(np.exp(1j * phi)) for s, phi in zip(w.segments, prog.phases)
    ))


def evaluate(w: PiecewiseWave, x) -> np.ndarray:
    """Values of ``w`` at positions ``x`` (half-open support convention)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=complex)
    for s in w.segments:
        inside = (x > s.start) & (x <= s.end)
        if s.rate:
            out[inside] = s.amplitude * np.exp(1j * s.rate * x[inside])
        else:
            out[inside] = s.amplitude
    return out


# --------------------------------------------------------------------------
# sampling


def grid_for(w: PiecewiseWave, dx: float, margin: float = 0.0,
             length: float | None = None, align: bool = True) -> Grid:
    """Grid covering ``w``; with ``align`` the step is shrunk so that every
    packet edge falls on a cell boundary (when the geometry allows it)."""
    if align:
        step = aligned_step(w.edges, dx)
        if step is not None:
            dx = step
    lo, hi = w.support
    return Grid.covering(lo, hi, dx, margin=margin, length=length)


def sample(w: PiecewiseWave, grid: Grid, normalize: bool = True) -> SampledWave:
    """Midpoint samples of ``w`` on ``grid``.

    With ``normalize`` the discrete norm is rescaled to one.  When packet
    edges are not on cell boundaries the raw discrete norm differs from one
    by at most ``dx`` times the largest squared amplitude per edge.
    """
    lo, hi = w.support
    if grid.lo > lo + _EDGE_TOL * max(1.0, abs(lo)) or grid.hi < hi - _EDGE_TOL * max(1.0, abs(hi)):
        raise ValueError(
            f"grid ({grid.lo}, {grid.hi}] does not cover the wave support ({lo}, {hi}]"
        )
    psi = evaluate(w, grid.x)
    out = SampledWave(grid.x0, grid.dx, psi,
                      piecewise_constant=all(s.rate == 0 for s in w.segments),
                      feature=w.min_width)
    if normalize:
        if out.norm() == 0:
            raise ValueError("grid too coarse: no sample falls inside the wave")
        out = out.normalized()
    return out


def raised_cosine_step(u, sigma: float) -> np.ndarray:
    """0 for ``u <= -sigma/2``, 1 for ``u >= sigma/2``, raised cosine between."""
    t = np.clip((np.asarray(u, dtype=float) + 0.5 * sigma) / sigma, 0.0, 1.0)
    return 0.5 * (1.0 - np.cos(np.pi * t))


def smooth_edges(w: PiecewiseWave, sigma: float, grid: Grid) -> SampledWave:
    """Sample ``w`` with each packet edge replaced by a raised-cosine ramp.

    The ramp has total width ``sigma`` and is centered on the original edge,
    so a smoothed packet occupies ``(start - sigma/2, end + sigma/2)``.
    Packets stay disjoint as long as ``sigma`` is smaller than every gap.
    The result is C^1, which keeps momentum moments up to the fourth finite.
    """
    if not sigma > 0:
        raise ValueError(f"smoothing width must be positive, got {sigma}")
    if sigma >= 0.5 * w.min_width:
        raise ValueError(
            f"smoothing width {sigma} too large for the narrowest packet "
            f"(width {w.min_width}); need sigma < width / 2"
        )
    lo, hi = w.support
    margin = 5.0 * sigma
    tol = _EDGE_TOL * max(1.0, abs(lo), abs(hi))
    if grid.lo > lo - margin + tol or grid.hi < hi + margin - tol:
        raise ValueError(
            f"grid ({grid.lo}, {grid.hi}] must extend 5*sigma = {margin} beyond "
            f"the wave support ({lo}, {hi}]"
        )
    x = grid.x
    psi = np.zeros(grid.n, dtype=complex)
    for s in w.segments:
        env = raised_cosine_step(x - s.start, sigma) * raised_cosine_step(s.end - x, sigma)
        touched = env > 0
        val = s.amplitude * env[touched]
        if s.rate:
            val = val * np.exp(1j * s.rate * x[touched])
        psi[touched] += val
    out = SampledWave(grid.x0, grid.dx, psi, piecewise_constant=False, feature=sigma)
    return out.normalized()


def gaussian(grid: Grid, width: float, center: float = 0.0, momentum: float = 0.0) -> SampledWave:
    """Sampled Gaussian with position standard deviation ``width``.

    ``psi(x) = (2 pi width^2)^(-1/4) exp(-(x-center)^2 / (4 width^2) + i momentum x)``;
    its momentum density is Gaussian with standard deviation ``1 / (2 width)``.
    """
    if not width > 0:
        raise ValueError(f"Gaussian width must be positive, got {width}")
    x = grid.x
    psi = (2 * np.pi * width**2) ** -0.25 * np.exp(
        -((x - center) ** 2) / (4 * width**2) + 1j * momentum * x
    )
    return SampledWave(grid.x0, grid.dx, psi, feature=width).normalized()
