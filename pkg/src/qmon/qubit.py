"""
Qubit reference model: the c-maybe gate ``|0><0| (x) 1 + |1><1| (x) sigma_theta``
with ``sigma_theta = cos(theta) sigma_x + sin(theta) sigma_z``.

Kept apart from the general construction so the two can be cross-checked:
the c-maybe gate monitors with strength ``1 - sin(theta)``, the d = 2 unitary
observable from phases ``(theta, -theta)`` with ``1 - cos(theta)``.
"""

import numpy as np

from .darwinism import EnvironmentModel, evolve_dense
from .monitoring import ObservableBasis
from .operators import apply_local, check_density, partial_trace, tensor, trace_distance
from .phases import analytic_phases

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def sigma_theta(theta: float) -> np.ndarray:
    return np.cos(theta) * SIGMA_X + np.sin(theta) * SIGMA_Z


def c_maybe(theta: float) -> np.ndarray:
    """The 4x4 c-maybe gate on (system qubit, environment qubit)."""
    p0 = np.diag([1, 0]).astype(complex)
    p1 = np.diag([0, 1]).astype(complex)
    return tensor([p0, np.eye(2)]) + tensor([p1, sigma_theta(theta)])


def monitored_by_cmaybe(rho_ab, theta: float, basis: ObservableBasis | None = None) -> np.ndarray:
    """System state after a c-maybe interaction with a fresh environment qubit.

    ``rho_ab`` lives on a qubit A times an optional bystander B of dimension
    ``dim(rho_ab) / 2``. The gate is controlled in the eigenbasis of ``basis``.
    """
    rho = check_density(rho_ab)
    if rho.shape[0] % 2:
        raise ValueError("system A must be a qubit")
    d_b = rho.shape[0] // 2
    if basis is None:
        basis = ObservableBasis.computational(2)
    elif basis.d != 2:
        raise ValueError("system A must be a qubit")
    a0, a1 = basis.projectors
    gate = tensor([a0, np.eye(2)]) + tensor([a1, sigma_theta(theta)])
    env = np.diag([1, 0]).astype(complex)
    layout = (2, d_b, 2)
    out = apply_local(tensor([rho, env]), layout, [0, 2], gate)
    return partial_trace(out, layout, [0, 1])


def compare_with_general_T(theta: float) -> tuple[float, float]:
    """Monitoring strengths ``(1 - sin theta, 1 - cos theta)`` of the c-maybe gate and
    of the d = 2 phase construction at the same angle."""
    return 1.0 - np.sin(theta), 1.0 - np.cos(theta)


def cmaybe_vacuum_overlap(theta: float, i: int, j: int) -> complex:
    """``<0|sigma_theta^i sigma_theta^j|0>`` evaluated densely."""
    s = sigma_theta(theta)
    return complex((np.linalg.matrix_power(s, i) @ np.linalg.matrix_power(s, j))[0, 0])


def channel_mismatch(theta: float, states) -> float:
    """Largest trace distance, over ``states``, between the c-maybe channel at
    ``theta`` and the d = 2 phase construction at ``pi/2 - theta``.

    The phase-construction side runs through the dense environment evolution.
    """
    worst = 0.0
    for rho in states:
        rho = check_density(rho)
        d_b = rho.shape[0] // 2
        model = EnvironmentModel(analytic_phases(2, np.pi / 2 - theta), n=1, d_B=d_b)
        general = partial_trace(evolve_dense(rho, model), model.layout(), [0, 1])
        worst = max(worst, trace_distance(monitored_by_cmaybe(rho, theta), general))
    return worst
