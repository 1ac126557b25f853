"""Build a unitary observable T from phases and inspect its structure.

T = sum_k alpha_k Z X^k is unitary whenever the phases sum to zero. Its powers
T^j encode a d-outcome measurement, and the vacuum overlaps <0|T^j^dagger T^i|0>
have a closed form that we compare against dense matrix products.
"""

import numpy as np

from qmon import PhaseVector, alphas_from_phases, build_T, overlap_matrix, povm_from_T
from qmon.weyl import clock_Z, omega, shift_X

np.set_printoptions(precision=4, suppress=True)

phases = PhaseVector.from_free([0.9, -0.4, 1.3])
t = build_T(phases)
print("phases:", np.round(phases.as_array(), 4))
print("alpha_k:", np.round(alphas_from_phases(phases), 4))
print("unitarity residual:", np.abs(t.matrix @ t.matrix.conj().T - np.eye(4)).max())

# the closed-form overlaps against brute force
closed = overlap_matrix(phases)
dense = np.array([[(t.power(j).conj().T @ t.power(i))[0, 0] for j in range(4)] for i in range(4)])
print("closed form vs dense, max deviation:", np.abs(closed - dense).max())

# T's eigenprojectors form a projective measurement
effects = povm_from_T(t)
print("POVM completeness residual:", np.abs(sum(effects) - np.eye(4)).max())

# the qutrit phases (2pi/3, -2pi/3, 0) give T = omega Z X^2
t3 = build_T(PhaseVector((2 * np.pi / 3, -2 * np.pi / 3, 0.0)))
print("qutrit T == omega Z X^2:", np.allclose(t3.matrix, omega(3) * clock_Z(3) @ shift_X(3, 2)))
