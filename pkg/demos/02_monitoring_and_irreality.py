"""Monitoring an observable erodes irreality.

A partial measurement of strength eps interpolates between doing nothing and a
full dephasing. Irreality S(dephase(rho)) - S(rho) measures how far the state is
from having a definite value of the observable.
"""

import numpy as np

from qmon import (
    accessible_info,
    decompose_irreality,
    dephase,
    irreality,
    monitor,
    monitor_repeated,
    random_density,
    von_neumann_entropy,
)

rho = random_density(4, seed=7)
layout = [2, 2]
base = irreality(rho, layout=layout)

# entropy produced by monitoring is at least eps times the initial irreality
print(f"{'eps':>5} {'irreality':>10} {'entropy gain':>13} {'eps * irreality':>16}")
for eps in np.linspace(0, 1, 6):
    out = monitor(rho, eps, layout)
    gain = von_neumann_entropy(out) - von_neumann_entropy(rho)
    print(f"{eps:5.1f} {irreality(out, layout=layout):10.5f} {gain:13.5f} {eps * base:16.5f}")

coherence, discord = decompose_irreality(rho, layout=layout)
print(f"\nirreality {base:.6f} = coherence {coherence:.6f} + discord {discord:.6f}")

# accessible information lost by the system is the entropy it gains
out = monitor(rho, 0.3, layout)
print("information lost:", accessible_info(rho) - accessible_info(out))
print("entropy gained:  ", von_neumann_entropy(out) - von_neumann_entropy(rho))

# three weak monitorings equal one stronger monitoring
three = monitor_repeated(rho, 0.2, 3, layout)
once = monitor(rho, 1 - 0.8**3, layout)
print("repeated vs single monitoring:", np.abs(three - once).max())
print("fully dephased irreality:", irreality(dephase(rho, layout=layout), layout=layout))
