"""
Constraint system on the phases of ``T`` and its solutions.

For the noisy-CNOT interaction to induce a monitoring map, every vacuum
overlap ``<0|T^r|0>`` with ``r != 0 mod d`` must equal the same real noise
level ``eta``. In terms of the cyclic window sums
``s_p(q) = sum_{m=0}^{p} phi_{[q+m]_d}`` this reads::

    sum_q sin s_p(q) = 0                      p = 0 .. d-2
    sum_q cos s_p(q) = sum_q cos s_0(q)       p = 1 .. d-2

and then ``eta = (1/d) sum_q cos phi_q``.
"""

import json
import logging
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import least_squares

from .observable import PhaseVector, wrap_angle
from .operators import make_rng

log = logging.getLogger(__name__)

ETA_TOL = 1e-9
RESIDUAL_TOL = 1e-10
SOLVER_ETA_TOL = 1e-8


def _window_sums(phi: np.ndarray) -> np.ndarray:
    """``s[p, q] = sum_{m=0}^{p} phi[(q+m) % d]`` for ``p = 0 .. d-2``."""
    d = phi.size
    q = np.arange(d)
    rows = [phi[(q[:, None] + np.arange(p + 1)[None, :]) % d].sum(axis=1) for p in range(d - 1)]
    return np.array(rows)


def _window_masks(d: int) -> np.ndarray:
    """``mask[p, q, l] = 1`` when phase ``l`` lies in window ``(p, q)``."""
    mask = np.zeros((d - 1, d, d))
    for p in range(d - 1):
        for q in range(d):
            mask[p, q, (q + np.arange(p + 1)) % d] = 1
    return mask


def _constraint_terms(phi: np.ndarray) -> np.ndarray:
    s = _window_sums(phi)
    sines = np.sin(s).sum(axis=1)
    cosines = np.cos(s).sum(axis=1)
    return np.concatenate([sines, cosines[1:] - cosines[0]])


def residuals(p) -> np.ndarray:
    """Residual vector of the constraint system, all zero iff ``p`` solves it.

    Layout: ``[phase sum (mod 2 pi); d-1 sine sums; d-2 cosine differences]``,
    ``2d - 2`` entries in total. Accepts a :class:`PhaseVector` or a raw
    array of ``d`` phases.
    """
    phi = p.as_array() if isinstance(p, PhaseVector) else np.asarray(p, dtype=float)
    if phi.size < 2:
        raise ValueError("need d >= 2 phases")
    return np.concatenate([[float(wrap_angle(phi.sum()))], _constraint_terms(phi)])


def is_solution(p: PhaseVector, tol: float = RESIDUAL_TOL) -> bool:
    return bool(np.linalg.norm(residuals(p)) <= tol)


def eta_from_phases(p) -> float:
    """Noise level ``eta = (1/d) sum_q cos phi_q``.

    The value only describes the induced monitoring when ``p`` satisfies the
    constraint system (see :func:`is_solution`); otherwise it is nominal.

    Raises
    ------
    ValueError
        If ``eta`` is negative beyond rounding tolerance.
    """
    phi = p.as_array() if isinstance(p, PhaseVector) else np.asarray(p, dtype=float)
    eta = float(np.mean(np.cos(phi)))
    if eta < -ETA_TOL:
        raise ValueError(f"noise level eta = {eta:.6g} is negative")
    return min(max(eta, 0.0), 1.0)


def analytic_phases(d: int, theta: float) -> PhaseVector:
    """Solution family ``phi_0 = theta, phi_1 = -theta, phi_k = 0`` for k >= 2.

    Its noise level is ``(d - 2 + 2 cos theta) / d``.
    """
    d = int(d)
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    phi = np.zeros(d)
    phi[0], phi[1] = theta, -theta
    return PhaseVector(tuple(phi))


@dataclass
class SolverReport:
    """Outcome of :func:`solve_phases`. ``success`` is False when no solution
    was found within the restart budget; that is not a proof of non-existence."""

    d: int
    target_eta: float
    phases: PhaseVector
    residual_norm: float
    achieved_eta: float
    iterations: int
    restarts: int
    seed: int
    success: bool

    def to_dict(self) -> dict:
        out = asdict(self)
        out["phases"] = list(self.phases.phases)
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _solver_fun(free, target):
    phi = np.append(free, -free.sum())
    return np.append(_constraint_terms(phi), np.mean(np.cos(phi)) - target)


def _solver_jac(free, target, masks):
    d = free.size + 1
    phi = np.append(free, -free.sum())
    s = _window_sums(phi)
    # d/dphi_l of sum_q f(s_pq) = sum_q f'(s_pq) * mask[p, q, l]
    dsin = np.einsum("pq,pql->pl", np.cos(s), masks)
    dcos = -np.einsum("pq,pql->pl", np.sin(s), masks)
    full = np.vstack([dsin, dcos[1:] - dcos[0], -np.sin(phi)[None, :] / d])
    return full[:, :-1] - full[:, [-1]]


def solve_phases(
    d: int,
    target_eta: float,
    seed: int = 0,
    tol: float = RESIDUAL_TOL,
    eta_tol: float = SOLVER_ETA_TOL,
    max_restarts: int = 50,
) -> SolverReport:
    """Find phases whose unitary observable monitors with noise ``target_eta``.

    Minimizes the squared constraint residuals plus ``(eta - target)**2`` over
    the ``d-1`` free phases (the last phase closes the zero sum) with a
    Levenberg-Marquardt least-squares descent, restarting from uniform random
    phases drawn from a Philox stream seeded by ``seed``.
    """
    d = int(d)
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if not 0.0 <= target_eta <= 1.0:
        raise ValueError(f"target eta must lie in [0, 1], got {target_eta}")
    if tol <= 0 or eta_tol <= 0:
        raise ValueError("tolerances must be positive")

    if target_eta == 1.0:
        # all-zero phases are the unique eta = 1 solution
        p = PhaseVector.zeros(d)
        return SolverReport(d, 1.0, p, 0.0, 1.0, 0, 0, seed, True)

    rng = make_rng(seed)
    masks = _window_masks(d)
    best = None
    nfev = 0
    for restart in range(1, max_restarts + 1):
        x0 = rng.uniform(-np.pi, np.pi, d - 1)
        sol = least_squares(
            lambda x: _solver_fun(x, target_eta), x0,
            jac=lambda x: _solver_jac(x, target_eta, masks),
            method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000,
        )
        nfev += sol.nfev
        p = PhaseVector.from_free(sol.x)
        res = float(np.linalg.norm(residuals(p)))
        eta = float(np.mean(np.cos(p.as_array())))
        err = abs(eta - target_eta)
        if best is None or res + err < best[0]:
            best = (res + err, p, res, eta)
        if res <= tol and err <= eta_tol:
            log.debug("d=%d eta=%g solved after %d restarts", d, target_eta, restart)
            return SolverReport(d, target_eta, p, res, eta, nfev, restart, seed, True)

    _, p, res, eta = best
    log.info("no solution for d=%d eta=%g within %d restarts", d, target_eta, max_restarts)
    return SolverReport(d, target_eta, p, res, eta, nfev, max_restarts, seed, False)
