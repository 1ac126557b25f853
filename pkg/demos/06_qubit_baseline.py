"""The qubit c-maybe gate and the d=2 unitary observable produce the same channel.

The c-maybe gate monitors with strength 1 - sin(theta); the general
construction with phases (theta, -theta) monitors with 1 - cos(theta). Shifting
the angle by pi/2 maps one onto the other.
"""

import numpy as np

from qmon import channel_mismatch, compare_with_general_T, random_density

states = [random_density(2, seed=k) for k in range(10)]
print(f"{'theta':>7} {'eps c-maybe':>12} {'eps T':>8} {'channel gap':>12}")
for theta in np.linspace(0, np.pi / 2, 7):
    eps_c, eps_t = compare_with_general_T(theta)
    print(f"{theta:7.4f} {eps_c:12.6f} {eps_t:8.6f} {channel_mismatch(theta, states):12.1e}")
