"""Boosting a comb of packets with a staircase of phases.

N packets fill a length L.  Giving packet n the phase n * p0 * l (l = L/N)
imitates multiplying by exp(i p0 x), so the momentum distribution should
move from 0 to p0.  The approximation improves as the staircase steps
shrink and as the gaps between packets close.

    python3 demos/staircase_boost.py
"""
import math

import numpy as np
from scipy.integrate import quad

import abpackets as ab

L, p0 = 20 * math.pi, 1.0
window = 2 * (2 * math.pi / L)
print(f"L = {L:.3f}, target momentum p0 = {p0}, wavelength {2 * math.pi / p0:.3f}")
print(f"probability counted in [p0 - {window:.3f}, p0 + {window:.3f}]\n")

print("   N    xi    l/lambda   |<target|comb>|   mass in window")
for N in (10, 20, 40, 80, 100, 200):
    for xi in (0.0, 0.02):
        d, eps = ab.comb_geometry(N, L, xi)
        l = L / N
        comb = ab.make_comb(N, d, eps, p0 * l)
        target = ab.make_boosted_tophat(L, p0)
        ov = abs(ab.overlap(target, comb))
        mass = quad(lambda p: float(ab.momentum_density(comb, p)), p0 - window, p0 + window,
                    limit=400)[0]
        print(f" {N:4d}  {xi:4.2f}   {l * p0 / (2 * math.pi):7.3f}     {ov:.5f}          {mass:.4f}")

# The overlap has a closed form that only depends on the packet length.
N, xi = 200, 0.01
d, eps = ab.comb_geometry(N, L, xi)
closed = ab.boosted_overlap_closed_form(N, L / N, d, p0)
print(f"\nclosed-form overlap for N = {N}, xi = {xi}: {abs(closed):.6f} "
      f"(gap-only limit sqrt(1 - xi) = {math.sqrt(1 - xi):.6f})")

# Where the boosted comb puts its probability.
p = np.linspace(-1, 3, 4001)
curve = ab.density_curve(ab.make_comb(N, d, eps, p0 * L / N), p)
print(f"peak of the boosted comb: p = {ab.peak_location(curve):.4f}")
