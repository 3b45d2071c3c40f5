"""Same moments, different distribution.

Relative phases between packets that do not overlap leave every moment
<p^n> unchanged, yet the momentum distribution changes a lot.  What does
see the phase is the modular quantity <exp(-i p b)>, once the shift b is
long enough to carry one packet onto another.

The packets get smooth raised-cosine edges so that <p^n> exists up to n = 4.

    python3 demos/moments_vs_modular.py
"""
import math

import numpy as np

import abpackets as ab

d, a, sigma = 2 * math.pi, 0.01 * 2 * math.pi, 0.05
D = d + 2 * a
grid = ab.Grid.covering(-(d + a), d + a, sigma / 256, margin=5 * sigma)
alphas = (0.0, math.pi / 4, math.pi / 2, math.pi)
states = [ab.smooth_edges(ab.make_two_packet(d, a, al), sigma, grid) for al in alphas]

print("moments of the smoothed two-packet state")
print(" alpha/pi" + "".join(f"{'<p^' + str(n) + '>':>16}" for n in range(1, 5)))
for al, w in zip(alphas, states):
    print(f"  {al / math.pi:5.2f} " + "".join(f" {ab.moment(w, n):>15.9g}" for n in range(1, 5)))

ref = ab.fft_momentum_density(states[0])
print("\nL1 distance of the momentum density from alpha = 0:")
for al, w in zip(alphas[1:], states[1:]):
    print(f"  alpha = {al / math.pi:.2f} pi: {ab.l1_distance(ref, ab.fft_momentum_density(w)):.4f}")

print("\nmodular momentum <exp(-i p b)> of the sharp-edged state")
print("      b/D     alpha = 0            alpha = pi/2")
for b in (0.0, a, 1.9 * a, 0.5 * D, D):
    v0 = ab.modular_expectation(ab.make_two_packet(d, a, 0.0), b).value
    v1 = ab.modular_expectation(ab.make_two_packet(d, a, math.pi / 2), b).value
    print(f"  {b / D:7.4f}   {v0.real:+.4f}{v0.imag:+.4f}i   {v1.real:+.4f}{v1.imag:+.4f}i")
print("\nfor b < 2a the packets do not reach each other and the value ignores alpha;")
print("at b = D one packet lands on the other and the value is exp(-i alpha)/2.")
