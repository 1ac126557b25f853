"""
Channels on the monitored system and the realism quantifiers built on them.

The observable ``A`` acts on the first factor of a layout; every other factor
is a spectator (B, possibly environment). ``dephase`` is the non-selective
projective measurement of ``A`` and ``monitor`` the convex interpolation
``(1 - eps) rho + eps dephase(rho)``.
"""

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .operators import (
    InvalidStateError,
    as_operator,
    check_density,
    check_layout,
    partial_trace,
    von_neumann_entropy,
)

log = logging.getLogger(__name__)

BASIS_TOL = 1e-10
NEGATIVE_TOL = 1e-9


@dataclass(frozen=True)
class ObservableBasis:
    """Rank-1 eigenprojectors ``A_a = |w_a><w_a|`` of the monitored observable.

    ``vectors`` holds the eigenvectors ``w_a`` as columns. ``labels`` (the
    eigenvalues ``a``) are carried along but never enter a channel.
    """

    vectors: np.ndarray = field(repr=False)
    labels: tuple | None = None

    def __post_init__(self):
        w = as_operator(self.vectors)
        if np.max(np.abs(w.conj().T @ w - np.eye(w.shape[0]))) > BASIS_TOL:
            raise ValueError("basis vectors are not orthonormal")
        if self.labels is not None and len(self.labels) != w.shape[0]:
            raise ValueError("one label per projector required")
        object.__setattr__(self, "vectors", w)

    @classmethod
    def computational(cls, d: int) -> "ObservableBasis":
        return cls(np.eye(int(d), dtype=complex))

    @classmethod
    def from_projectors(cls, projectors: Sequence, labels=None) -> "ObservableBasis":
        """Accept explicit rank-1 orthogonal projectors summing to the identity."""
        projectors = [as_operator(p) for p in projectors]
        d = projectors[0].shape[0]
        if len(projectors) != d:
            raise ValueError("need one rank-1 projector per dimension")
        for a, pa in enumerate(projectors):
            for b, pb in enumerate(projectors):
                target = pa if a == b else np.zeros_like(pa)
                if np.max(np.abs(pa @ pb - target)) > BASIS_TOL:
                    raise ValueError("projectors are not orthogonal and idempotent")
        if np.max(np.abs(sum(projectors) - np.eye(d))) > BASIS_TOL:
            raise ValueError("projectors do not sum to the identity")
        cols = []
        for pa in projectors:
            evals, evecs = np.linalg.eigh(pa)
            cols.append(evecs[:, -1])
        return cls(np.array(cols).T, labels)

    @property
    def d(self) -> int:
        return self.vectors.shape[0]

    @property
    def projectors(self) -> list:
        return [np.outer(w, w.conj()) for w in self.vectors.T]


@dataclass(frozen=True)
class MonitoringSpec:
    basis: ObservableBasis
    epsilon: float

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"monitoring strength must lie in [0, 1], got {self.epsilon}")


def _resolve(state, basis, layout):
    state = as_operator(state)
    dims = check_layout(layout if layout is not None else [state.shape[0]], state.shape[0])
    if basis is None:
        basis = ObservableBasis.computational(dims[0])
    if basis.d != dims[0]:
        raise ValueError(f"basis dimension {basis.d} does not match subsystem A ({dims[0]})")
    return state, basis, dims


def block_scale(state, coeff, basis=None, layout=None) -> np.ndarray:
    """``sum_ij coeff[i, j] P_i state P_j`` with ``P_i = A_i (x) 1``.

    The common kernel of dephasing, monitoring and the environment-induced
    channels.
    """
    state, basis, dims = _resolve(state, basis, layout)
    d_a, rest = dims[0], state.shape[0] // dims[0]
    w = basis.vectors
    t = state.reshape(d_a, rest, d_a, rest)
    t = np.einsum("ai,arbs,bj->irjs", w.conj(), t, w)
    t = t * np.asarray(coeff)[:, None, :, None]
    t = np.einsum("ai,irjs,bj->arbs", w, t, w.conj())
    return t.reshape(state.shape)


def dephase(state, basis: ObservableBasis | None = None, layout=None) -> np.ndarray:
    """Non-selective projective measurement ``sum_a (A_a (x) 1) rho (A_a (x) 1)``."""
    state, basis, dims = _resolve(state, basis, layout)
    return block_scale(state, np.eye(basis.d), basis, dims)


def _spec(spec_or_eps, basis) -> MonitoringSpec:
    if isinstance(spec_or_eps, MonitoringSpec):
        return spec_or_eps
    return MonitoringSpec(basis, float(spec_or_eps))


def monitor(state, spec, layout=None, basis: ObservableBasis | None = None) -> np.ndarray:
    """Monitoring map ``(1 - eps) rho + eps dephase(rho)``.

    ``spec`` is a :class:`MonitoringSpec` or a bare strength ``eps`` (with
    ``basis`` defaulting to the computational basis).
    """
    state, basis, dims = _resolve(state, getattr(spec, "basis", basis), layout)
    spec = _spec(spec, basis)
    eps = spec.epsilon
    return (1 - eps) * state + eps * dephase(state, spec.basis, dims)


def effective_strength(epsilon: float, n: int) -> float:
    """Strength ``1 - (1 - eps)**n`` of n repeated monitorings."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return 1.0 - (1.0 - epsilon) ** n


def monitor_repeated(state, spec, n: int, layout=None, basis=None) -> np.ndarray:
    """Compose the monitoring map with itself ``n`` times."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    out = as_operator(state)
    for _ in range(n):
        out = monitor(out, spec, layout, basis)
    return out


def _clamp(value: float, what: str) -> float:
    if value < -NEGATIVE_TOL:
        raise InvalidStateError(f"{what} = {value:.3g} is negative beyond rounding")
    if value < 0:
        log.debug("clamping %s = %.3g to 0", what, value)
        return 0.0
    return value


def irreality(state, basis: ObservableBasis | None = None, layout=None) -> float:
    """Irreality of ``A`` for ``state``: ``S(dephase(rho)) - S(rho)`` in bits."""
    state, basis, dims = _resolve(state, basis, layout)
    check_density(state)
    value = von_neumann_entropy(dephase(state, basis, dims)) - von_neumann_entropy(state)
    return _clamp(value, "irreality")


def mutual_information(state, layout, partition) -> float:
    """``S(rho_X) + S(rho_Y) - S(rho_XY)`` for the factor groups ``partition = (X, Y)``.

    Factors in neither group are traced out first.
    """
    state = check_density(state)
    dims = check_layout(layout, state.shape[0])
    try:
        left, right = (sorted(set(int(i) for i in g)) for g in partition)
    except (TypeError, ValueError):
        raise ValueError(f"partition must be two groups of factor indices, got {partition!r}")
    if not left or not right or set(left) & set(right):
        raise ValueError(f"partition groups must be nonempty and disjoint, got {partition!r}")
    if min(left + right) < 0 or max(left + right) >= len(dims):
        raise ValueError(f"partition {partition!r} out of range for layout {dims}")
    both = sorted(left + right)
    s_l = von_neumann_entropy(partial_trace(state, dims, left))
    s_r = von_neumann_entropy(partial_trace(state, dims, right))
    s_lr = von_neumann_entropy(partial_trace(state, dims, both))
    return _clamp(s_l + s_r - s_lr, "mutual information")


def decompose_irreality(state, basis: ObservableBasis | None = None, layout=None):
    """Split irreality of a bipartite (A, B) state into local coherence and a
    non-optimized discord.

    Returns
    -------
    coherence : float
        Irreality of the reduced state ``Tr_B rho``.
    discord_like : float
        ``I_AB(rho) - I_AB(dephase(rho))``.
    """
    state, basis, dims = _resolve(state, basis, layout)
    if len(dims) != 2:
        raise ValueError(f"decomposition needs a bipartite layout, got {dims}")
    rho_a = partial_trace(state, dims, [0])
    coherence = irreality(rho_a, basis)
    split = ([0], [1])
    discord = mutual_information(state, dims, split) - mutual_information(
        dephase(state, basis, dims), dims, split
    )
    return coherence, _clamp(discord, "discord")


def accessible_info(state) -> float:
    """Accessible information ``log2 d - S(rho)`` in bits."""
    state = check_density(state)
    return float(np.log2(state.shape[0])) - von_neumann_entropy(state)
