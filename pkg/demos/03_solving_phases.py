"""Find phases whose interaction monitors the system with a chosen noise level.

For d >= 4 no closed form is needed: a least-squares multistart search solves
the constraint system for any target noise eta in [0, 1].
"""

import time

import numpy as np

from qmon import analytic_phases, eta_from_phases, is_solution, solve_phases

for theta in (0.0, np.pi / 3, 2 * np.pi / 3):
    p = analytic_phases(3, theta)
    print(f"qutrit theta={theta:.4f}: eta={eta_from_phases(p):.6f}, solves system: {is_solution(p)}")

start = time.perf_counter()
print(f"\n{'d':>2} {'target':>6} {'residual':>10} {'restarts':>8}")
for d in (4, 5, 6, 7):
    for target in (0.0, 0.25, 0.5, 0.75):
        r = solve_phases(d, target, seed=0)
        print(f"{d:2d} {target:6.2f} {r.residual_norm:10.1e} {r.restarts:8d}")
print(f"sweep took {time.perf_counter() - start:.2f} s")
print("\nreport for d=5, eta=0.3:")
print(solve_phases(5, 0.3, seed=3).to_json(indent=2))
