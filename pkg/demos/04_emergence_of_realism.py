"""Each environment qudit weakly records the observable; together they dephase it.

After n interactions the system sees a monitoring of strength 1 - eta^n, so its
distance to the fully dephased state decays geometrically.
"""

import numpy as np

from qmon import (
    EnvironmentModel,
    analytic_phases,
    distance_to_realism,
    pointer_states,
    random_density,
    solve_phases,
)

rho = random_density(3, seed=1)
phases = solve_phases(3, 0.7, seed=0).phases
print(f"{'n':>3} {'distance':>12} {'bound 3*0.7^n':>14}")
for n in (0, 1, 2, 5, 10, 20, 50, 100):
    dist = distance_to_realism(rho, EnvironmentModel(phases, n))
    print(f"{n:3d} {dist:12.3e} {3 * 0.7**n:14.3e}")

# the noiseless qutrit case: one qudit is already a perfect record
perfect = analytic_phases(3, 2 * np.pi / 3)
e = pointer_states(perfect)
print("\npointer-state overlaps |<e_i|e_j>|:")
print(np.round(np.abs(e.conj() @ e.T), 12))
print("distance after one perfect interaction:", distance_to_realism(rho, EnvironmentModel(perfect, 1)))
