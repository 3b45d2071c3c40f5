"""Free Schrodinger propagation on a periodic grid.

The propagator is applied exactly in momentum space,
``psi~(p, t) = exp(-i p^2 t / (2 m)) psi~(p, 0)``, so there is no time-step
error; the only approximations are the grid band limit and the periodic
domain, both of which are checked.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AliasingError, ResolutionError
from .spectral import DensityCurve
from .wavefunctions import SampledWave

EDGE_FRACTION = 1 / 16


@dataclass(frozen=True)
class PropagationSpec:
    t: float
    mass: float = 1.0

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")


def _edge_mass(psi: np.ndarray, dx: float) -> float:
    k = max(1, int(psi.size * EDGE_FRACTION))
    dens = np.abs(psi) ** 2
    return float((dens[:k].sum() + dens[-k:].sum()) * dx)


def free_evolve(w: SampledWave, spec: PropagationSpec, tol: float = 1e-8) -> SampledWave:
    """Propagate ``w`` freely for time ``spec.t``.

    Raises :class:`ResolutionError` if more than ``tol`` of the momentum
    probability sits in the outer eighth of the band, and
    :class:`AliasingError` if more than ``tol`` of the evolved probability
    sits within 1/16 of the domain length of either edge.
    """
    if isinstance(spec, (int, float)):
        spec = PropagationSpec(float(spec))
    n, dx = w.n, w.dx
    amp = np.fft.fft(w.samples)
    p = 2 * np.pi * np.fft.fftfreq(n, dx)
    power = np.abs(amp) ** 2
    outer = power[np.abs(p) > 0.875 * np.pi / dx].sum() / power.sum()
    if outer > tol:
        raise ResolutionError(
            f"{outer:.3g} of the momentum probability lies near the band edge "
            f"|p| = {np.pi / dx:.4g}; refine dx or smooth the wave"
        )
    psi = np.fft.ifft(amp * np.exp(-0.5j * p**2 * spec.t / spec.mass))
    edge = _edge_mass(psi, dx)
    if edge > tol:
        raise AliasingError(
            f"evolved wave has probability {edge:.3g} near the edges of the "
            f"periodic domain of length {n * dx:.4g} at t = {spec.t}; enlarge the domain"
        )
    return w.replace(samples=psi, piecewise_constant=False)


def position_density(w: SampledWave) -> DensityCurve:
    """``|psi(x)|^2`` on the wave's grid (the curve's ``p`` field holds positions)."""
    return DensityCurve(w.x, np.abs(w.samples) ** 2, w.dx)


def split_at(w: SampledWave, cut: float) -> tuple[SampledWave, SampledWave]:
    """Parts of ``w`` left and right of ``cut``, each renormalized."""
    left = np.where(w.x < cut, w.samples, 0)
    right = np.where(w.x >= cut, w.samples, 0)
    return (w.replace(samples=left).normalized(), w.replace(samples=right).normalized())


def overlap_fraction(a: SampledWave, b: SampledWave) -> float:
    """``integral min(|a|^2, |b|^2) dx``: 0 for disjoint, 1 for identical densities."""
    return float(np.sum(np.minimum(np.abs(a.samples) ** 2, np.abs(b.samples) ** 2)) * a.dx)


def overlap_time(left: SampledWave, right: SampledWave, threshold: float = 0.1,
                 mass: float = 1.0, t_start: float = 1.0, rtol: float = 1e-3) -> float:
    """Earliest time at which freely evolving ``left`` and ``right`` share
    ``threshold`` of their probability (``overlap_fraction``).

    Found by doubling from ``t_start`` and then bisecting to relative
    precision ``rtol``.
    """
    def frac(t):
        return overlap_fraction(free_evolve(left, PropagationSpec(t, mass)),
                                free_evolve(right, PropagationSpec(t, mass)))

    if frac(0.0) >= threshold:
        return 0.0
    lo, hi = 0.0, t_start
    while frac(hi) < threshold:
        lo, hi = hi, 2 * hi
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if frac(mid) >= threshold:
            hi = mid
        else:
            lo = mid
    return hi
