"""Redundant records: how much a fragment of the environment knows about the system.

I(S : F_m) rises with the fragment size m and saturates once a few qudits hold
the record. The structured backend evaluates large environments cheaply; the
dense backend provides a check on small ones.
"""

import numpy as np

from qmon import EnvironmentModel, ket_to_density, mutual_info_profile, solve_phases

rho = ket_to_density(np.ones(3))
phases = solve_phases(3, 0.4, seed=2).phases

small = EnvironmentModel(phases, n=4)
dense = mutual_info_profile(rho, small, backend="dense")
structured = mutual_info_profile(rho, small, backend="structured")
print("backend agreement:", np.max(np.abs(np.subtract(dense.mutual_info, structured.mutual_info))))

big = mutual_info_profile(rho, EnvironmentModel(phases, n=40), m_max=6)
print(big.to_csv())
print("irreality left after 40 qudits:", big.irreality_after)
