"""
Unitary observables ``T = sum_k alpha_k Z X^k`` parametrized by phases.

The coefficients are the discrete Fourier transform of the phase factors,
``alpha_k = (1/d) sum_l omega**(lk) exp(i phi_l)``. With zero total phase the
resulting ``T`` is unitary with ``T**d = 1``, so its powers are the generalized
observables of a projective d-outcome measurement.
"""

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .operators import as_operator
from .weyl import clock_Z, root_phase, shift_X

PHASE_SUM_TOL = 1e-10
UNITARITY_TOL = 1e-8
POVM_TOL = 1e-9


def wrap_angle(x):
    """Map angles to the canonical branch (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2 * np.pi)


@dataclass(frozen=True)
class PhaseVector:
    """The d phases ``phi_0 .. phi_{d-1}`` defining a unitary observable.

    Phases are stored on the canonical branch (-pi, pi]. Their sum must vanish
    modulo ``2 pi``; every quantity built from them depends on the phases only
    through ``exp(i phi)``.
    """

    phases: tuple

    def __post_init__(self):
        phi = np.asarray(self.phases, dtype=float).ravel()
        if phi.size < 2:
            raise ValueError("a PhaseVector needs at least 2 phases")
        if not np.all(np.isfinite(phi)):
            raise ValueError("phases must be finite")
        if abs(float(wrap_angle(phi.sum()))) > PHASE_SUM_TOL:
            raise ValueError(f"phases must sum to zero, got {phi.sum():.3g}")
        object.__setattr__(self, "phases", tuple(float(x) for x in wrap_angle(phi)))

    @classmethod
    def from_free(cls, free: Sequence[float]) -> "PhaseVector":
        """Build from ``d-1`` free phases; the last is minus their sum."""
        free = np.asarray(free, dtype=float).ravel()
        return cls(tuple(free) + (-float(free.sum()),))

    @classmethod
    def zeros(cls, d: int) -> "PhaseVector":
        return cls((0.0,) * int(d))

    @property
    def d(self) -> int:
        return len(self.phases)

    def as_array(self) -> np.ndarray:
        return np.array(self.phases)

    def to_json(self) -> str:
        return json.dumps(list(self.phases))

    @classmethod
    def from_json(cls, text: str) -> "PhaseVector":
        return cls(tuple(json.loads(text)))


def alphas_from_phases(p: PhaseVector) -> np.ndarray:
    """Fourier coefficients ``alpha_k`` of the phase factors (unit 2-norm)."""
    d = p.d
    l, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return (root_phase(d, l * k) * np.exp(1j * p.as_array())[:, None]).sum(axis=0) / d


@dataclass(frozen=True)
class UnitaryObservable:
    phases: PhaseVector
    matrix: np.ndarray = field(repr=False)

    @property
    def d(self) -> int:
        return self.phases.d

    def power(self, j: int) -> np.ndarray:
        """``T**j`` with ``j`` reduced mod d first (valid since ``T**d = 1``)."""
        return np.linalg.matrix_power(self.matrix, int(j) % self.d)

    def povm(self) -> list:
        return povm_from_T(self)


def build_T(p: PhaseVector) -> UnitaryObservable:
    """Assemble ``T = sum_k alpha_k Z X^k``.

    Raises
    ------
    ValueError
        If the assembled matrix fails unitarity by more than ``UNITARITY_TOL``.
    """
    d = p.d
    alpha = alphas_from_phases(p)
    z = clock_Z(d)
    t = sum(alpha[k] * (z @ shift_X(d, k)) for k in range(d))
    resid = np.max(np.abs(t @ t.conj().T - np.eye(d)))
    if resid > UNITARITY_TOL:
        raise ValueError(f"T is not unitary (residual {resid:.3g})")
    return UnitaryObservable(p, t)


def vacuum_overlap(p: PhaseVector, i: int, j: int) -> complex:
    """Closed form of ``<0|(T^j)^dagger T^i|0>``.

    Equals ``(1/d) sum_q exp(i sum_{m < [i-j]_d} phi_{[q+m]_d})`` and is exactly 1
    when ``i = j mod d``.
    """
    d = p.d
    r = (int(i) - int(j)) % d
    if r == 0:
        return 1.0 + 0j
    phi = p.as_array()
    q = np.arange(d)[:, None]
    m = np.arange(r)[None, :]
    window = phi[(q + m) % d].sum(axis=1)
    return complex(np.mean(np.exp(1j * window)))


def overlap_matrix(p: PhaseVector) -> np.ndarray:
    """``c[i, j] = <0|(T^j)^dagger T^i|0>`` for all ``0 <= i, j < d``."""
    d = p.d
    by_diff = np.array([vacuum_overlap(p, r, 0) for r in range(d)])
    i, j = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return by_diff[(i - j) % d]


def _check_povm(effects, tol=POVM_TOL) -> list:
    effects = [as_operator(m) for m in effects]
    if len(effects) < 2:
        raise ValueError("a measurement needs at least 2 outcomes")
    dim = effects[0].shape[0]
    for a, m in enumerate(effects):
        if m.shape != (dim, dim):
            raise ValueError("effects have inconsistent dimensions")
        if np.max(np.abs(m - m.conj().T)) > tol:
            raise ValueError(f"effect {a} is not Hermitian")
        if np.linalg.eigvalsh((m + m.conj().T) / 2)[0] < -tol:
            raise ValueError(f"effect {a} is not positive semidefinite")
    if np.max(np.abs(sum(effects) - np.eye(dim))) > tol:
        raise ValueError("effects do not sum to the identity")
    return effects


def generalized_observables(effects) -> list:
    """Discrete Fourier transform ``T^(i) = sum_a omega**(ia) M_a`` of a POVM."""
    effects = _check_povm(effects)
    d = len(effects)
    return [sum(root_phase(d, i * a) * m for a, m in enumerate(effects)) for i in range(d)]


def povm_from_generalized(observables) -> list:
    """Inverse transform ``M_a = (1/d) sum_i omega**(-ia) T^(i)``; validated as a POVM."""
    ts = [as_operator(t) for t in observables]
    d = len(ts)
    effects = [sum(root_phase(d, -i * a) * t for i, t in enumerate(ts)) / d for a in range(d)]
    return _check_povm(effects)


def povm_from_T(t) -> list:
    """Recover the projective measurement whose unitary observable is ``t``.

    ``t`` may be a :class:`UnitaryObservable` or a unitary matrix with
    ``t**d = 1``; the generalized observables are then its powers.
    """
    if isinstance(t, UnitaryObservable):
        powers = [t.power(i) for i in range(t.d)]
    else:
        t = as_operator(t)
        powers = [np.linalg.matrix_power(t, i) for i in range(t.shape[0])]
    return povm_from_generalized(powers)
