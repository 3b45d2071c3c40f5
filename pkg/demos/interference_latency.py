"""When does the phase show up in position space?

At t = 0 the position density cannot know about a relative phase between
separated packets.  Under free evolution the packets spread, overlap, and
interfere, and from then on the phase is visible in where the particle is
found.  The momentum density stays fixed throughout.

    python3 demos/interference_latency.py
"""
import math

import numpy as np

import abpackets as ab

d, a, sigma = 1.0, 0.5, 0.4
grid = ab.Grid.covering(-(d + a), d + a, sigma / 32, margin=5 * sigma, length=200 * d)
w0 = ab.smooth_edges(ab.make_two_packet(d, a, 0.0), sigma, grid)
wp = ab.smooth_edges(ab.make_two_packet(d, a, math.pi), sigma, grid)

t_cross = ab.overlap_time(*ab.split_at(w0, 0.0), t_start=0.01)
print(f"the packets share 10% of their probability at t = {t_cross:.4f}\n")

print("    t/t_cross   L1(rho_0, rho_pi)   norm - 1     max |d rho(p)|")
rho_p = ab.fft_momentum_density(wp).density
for frac in (0.0, 0.25, 0.5, 1.0, 1.5, 2.5):
    t = frac * t_cross
    e0, ep = ab.free_evolve(w0, t), ab.free_evolve(wp, t)
    l1 = ab.l1_distance(ab.position_density(e0), ab.position_density(ep))
    drift = np.max(np.abs(ab.fft_momentum_density(ep).density - rho_p))
    print(f"    {frac:8.2f}    {l1:14.3e}     {ep.norm() - 1:+.1e}     {drift:.1e}")

# Centre of the pattern: bright for alpha = 0, dark for alpha = pi.
t = 1.5 * t_cross
centre = np.argmin(np.abs(grid.x))
r0 = abs(ab.free_evolve(w0, t).samples[centre]) ** 2
rp = abs(ab.free_evolve(wp, t).samples[centre]) ** 2
print(f"\ndensity at x = 0, t = {t:.3f}: alpha = 0 -> {r0:.4f}, alpha = pi -> {rp:.2e}")
