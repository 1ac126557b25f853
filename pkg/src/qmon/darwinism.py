"""
System-environment dynamics of the noisy-CNOT monitoring model.

The system S = A (x) B interacts in turn with environment qudits E_1 .. E_n,
each prepared in |0>, through ``U_SE_k = sum_j P_j (x) T^j``. Two backends
produce the resulting states:

* dense: the global density matrix is evolved gate by gate. Exact but limited
  by a total-dimension cap (``QMON_DIM_CAP``, default 4096).
* structured: the closed form
  ``sum_ij P_i rho P_j c_ij^(n-m) (x) (T^i|0><0|T^j^dagger)^(x)m``
  with ``c_ij = <0|(T^j)^dagger T^i|0>``, which only touches the kept fragment.
"""

import csv
import io
import json
import os
from dataclasses import asdict, dataclass

import numpy as np

from .monitoring import (
    ObservableBasis,
    block_scale,
    dephase,
    irreality,
    mutual_information,
)
from .observable import PhaseVector, build_T, overlap_matrix
from .operators import (
    apply_local,
    check_density,
    partial_trace,
    tensor,
    trace_distance,
    von_neumann_entropy,
)
from .phases import eta_from_phases

DEFAULT_DIM_CAP = 4096
UNITARITY_TOL = 1e-9


class DimensionCapError(ValueError):
    """Dense evolution would exceed the configured total dimension."""


def dim_cap() -> int:
    return int(os.environ.get("QMON_DIM_CAP", DEFAULT_DIM_CAP))


@dataclass(frozen=True)
class EnvironmentModel:
    """``n`` environment qudits sharing one phase vector, plus a bystander B."""

    phases: PhaseVector
    n: int
    d_B: int = 1
    basis: ObservableBasis | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"n must be >= 0, got {self.n}")
        if self.d_B < 1:
            raise ValueError(f"d_B must be >= 1, got {self.d_B}")
        if self.basis is None:
            object.__setattr__(self, "basis", ObservableBasis.computational(self.d))
        elif self.basis.d != self.d:
            raise ValueError("observable basis and environment qudits must share d")

    @property
    def d(self) -> int:
        return self.phases.d

    @property
    def system_layout(self) -> tuple:
        return (self.d, self.d_B)

    def layout(self, m: int | None = None) -> tuple:
        """Layout of S plus the first ``m`` environment qudits (default all n)."""
        m = self.n if m is None else m
        return (self.d, self.d_B) + (self.d,) * m

    def eta(self) -> float:
        return eta_from_phases(self.phases)


@dataclass
class FragmentProfile:
    m_values: list
    mutual_info: list
    irreality_after: float
    effective_epsilon: float

    def rows(self):
        for m, mi in zip(self.m_values, self.mutual_info):
            yield {"m": m, "mutual_info_bits": mi, "irreality_bits": self.irreality_after}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["m", "mutual_info_bits", "irreality_bits"])
        for row in self.rows():
            writer.writerow([row["m"], f"{row['mutual_info_bits']:.12g}", f"{row['irreality_bits']:.12g}"])
        return buf.getvalue()

    def to_json(self, **kw) -> str:
        return json.dumps(asdict(self), **kw)


def _check_system(rho_ab, model: EnvironmentModel) -> np.ndarray:
    rho = check_density(rho_ab)
    if rho.shape[0] != model.d * model.d_B:
        raise ValueError(
            f"system state has dimension {rho.shape[0]}, model expects {model.d} x {model.d_B}"
        )
    return rho


def _controlled_T(model: EnvironmentModel) -> np.ndarray:
    """``sum_j A_j (x) T^j`` on A (x) E_k only."""
    t = build_T(model.phases)
    return sum(tensor([a, t.power(j)]) for j, a in enumerate(model.basis.projectors))


def noisy_cnot(phases: PhaseVector, basis: ObservableBasis | None = None, d_B: int = 1) -> np.ndarray:
    """Interaction ``U = sum_j (A_j (x) 1_B) (x) T^j`` on A (x) B (x) E_i."""
    basis = ObservableBasis.computational(phases.d) if basis is None else basis
    t = build_T(phases)
    u = sum(tensor([a, np.eye(d_B), t.power(j)]) for j, a in enumerate(basis.projectors))
    resid = np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0])))
    if resid > UNITARITY_TOL:
        raise ValueError(f"noisy CNOT is not unitary (residual {resid:.3g})")
    return u


def _vacuum(d: int) -> np.ndarray:
    v = np.zeros((d, d), dtype=complex)
    v[0, 0] = 1
    return v


def evolve_dense(rho_ab, model: EnvironmentModel, cap: int | None = None) -> np.ndarray:
    """Global state after ``U_SE_n ... U_SE_1`` acting on ``rho_AB (x) |0><0|^(x)n``.

    Raises
    ------
    DimensionCapError
        If ``d * d_B * d**n`` exceeds ``cap`` (default :func:`dim_cap`).
    """
    rho = _check_system(rho_ab, model)
    cap = dim_cap() if cap is None else cap
    total = model.d * model.d_B * model.d ** model.n
    if total > cap:
        raise DimensionCapError(
            f"dense evolution needs dimension {total} > cap {cap}; use the structured backend"
        )
    if model.n == 0:
        return rho.copy()
    omega = tensor([rho] + [_vacuum(model.d)] * model.n)
    gate = _controlled_T(model)
    layout = model.layout()
    for k in range(model.n):
        omega = apply_local(omega, layout, [0, 2 + k], gate)
    return omega


def reduced_state_structured(rho_ab, model: EnvironmentModel, m: int, cap: int | None = None) -> np.ndarray:
    """State of S and the fragment F_m (first ``m`` environment qudits)."""
    rho = _check_system(rho_ab, model)
    if not 0 <= m <= model.n:
        raise ValueError(f"fragment size m={m} outside 0..{model.n}")
    d, d_b = model.d, model.d_B
    cap = dim_cap() if cap is None else cap
    if d * d_b * d**m > cap:
        raise DimensionCapError(f"fragment state dimension {d * d_b * d**m} exceeds cap {cap}")
    c = overlap_matrix(model.phases) ** (model.n - m)
    if m == 0:
        return block_scale(rho, c, model.basis, model.system_layout)

    t = build_T(model.phases)
    pointers = np.array([t.power(i)[:, 0] for i in range(d)])
    records = pointers
    for _ in range(m - 1):
        records = np.einsum("if,ig->ifg", records, pointers).reshape(d, -1)
    w = model.basis.vectors
    blocks = np.einsum("ai,arbs,bj->ijrs", w.conj(), rho.reshape(d, d_b, d, d_b), w)
    out = np.einsum("ai,if,ijrs,ij,bj,jg->arfbsg", w, records, blocks, c, w.conj(), records.conj(), optimize=True)
    dim = d * d_b * d**m
    return out.reshape(dim, dim)


def system_state_after(rho_ab, model: EnvironmentModel) -> np.ndarray:
    """Reduced state of S after all ``n`` interactions (environment traced out).

    Uses ``sum_ij c_ij**n P_i rho P_j`` directly, so the cost does not grow
    with ``n``.
    """
    return reduced_state_structured(rho_ab, model, 0)


def _fragment_states(rho, model, m_max, backend, cap):
    cap = dim_cap() if cap is None else cap
    if backend == "auto":
        backend = "dense" if model.d * model.d_B * model.d**model.n <= cap else "structured"
    if backend == "dense":
        omega = evolve_dense(rho, model, cap)
        layout = model.layout()
        for m in range(m_max + 1):
            yield m, partial_trace(omega, layout, range(2 + m))
    elif backend == "structured":
        for m in range(m_max + 1):
            yield m, reduced_state_structured(rho, model, m, cap)
    else:
        raise ValueError(f"unknown backend {backend!r}")


def mutual_info_profile(
    rho_ab, model: EnvironmentModel, m_max: int | None = None, backend: str = "structured", cap: int | None = None
) -> FragmentProfile:
    """Mutual information ``I(S : F_m)`` for ``m = 0 .. m_max``."""
    rho = _check_system(rho_ab, model)
    m_max = model.n if m_max is None else m_max
    if not 0 <= m_max <= model.n:
        raise ValueError(f"m_max={m_max} outside 0..{model.n}")
    info = []
    for m, state in _fragment_states(rho, model, m_max, backend, cap):
        if m == 0:
            info.append(0.0)
            continue
        layout = model.layout(m)
        info.append(mutual_information(state, layout, ([0, 1], range(2, 2 + m))))
    after = system_state_after(rho, model)
    eta = float(np.mean(np.cos(model.phases.as_array())))
    return FragmentProfile(
        m_values=list(range(m_max + 1)),
        mutual_info=info,
        irreality_after=irreality(after, model.basis, model.system_layout),
        effective_epsilon=1.0 - eta**model.n,
    )


def info_flow_check(rho_ab, model: EnvironmentModel, cap: int | None = None):
    """Both sides of the information-flow balance for one dense evolution.

    Returns
    -------
    delta_irreality : float
        Irreality lost by the system, ``I_A(rho) - I_A(Tr_E Omega')``.
    delta_info : float
        Gain of ``I(S:E) + I_E``, where ``I_E = log2 d_E - S(rho_E)``.
    """
    rho = _check_system(rho_ab, model)
    if model.n < 1:
        raise ValueError("information flow needs at least one environment qudit")
    layout = model.layout()
    sys_keep, env_keep = [0, 1], list(range(2, 2 + model.n))
    log_de = model.n * np.log2(model.d)

    def budget(omega):
        env = partial_trace(omega, layout, env_keep)
        i_se = mutual_information(omega, layout, (sys_keep, env_keep))
        return i_se + log_de - von_neumann_entropy(env)

    before = tensor([rho] + [_vacuum(model.d)] * model.n)
    after = evolve_dense(rho, model, cap)
    reduced = partial_trace(after, layout, sys_keep)
    slayout = model.system_layout
    delta_irr = irreality(rho, model.basis, slayout) - irreality(reduced, model.basis, slayout)
    return delta_irr, budget(after) - budget(before)


def pointer_states(phases: PhaseVector) -> np.ndarray:
    """Environment records ``T^i|0>`` as rows, ``i = 0 .. d-1``."""
    t = build_T(phases)
    return np.array([t.power(i)[:, 0] for i in range(phases.d)])


def distance_to_realism(rho_ab, model: EnvironmentModel) -> float:
    """Trace distance between the monitored system state and ``dephase(rho)``."""
    rho = _check_system(rho_ab, model)
    after = system_state_after(rho, model)
    return trace_distance(after, dephase(rho, model.basis, model.system_layout))
