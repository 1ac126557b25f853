"""
Dense operator utilities.

Operators are plain square ``numpy`` arrays of complex amplitudes. A layout is
an ordered sequence of subsystem dimensions; the leftmost factor is the
slowest-varying tensor index (system A first, then B, then E_1 ... E_n).

All entropies are in bits.
"""

import logging
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

log = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-9
TRACE_TOL = 1e-9
EIGEN_CLAMP_TOL = 1e-10


class InvalidStateError(ValueError):
    """Raised when an operator is not a valid density matrix."""


def as_operator(a) -> np.ndarray:
    """Return ``a`` as a square complex matrix with finite entries."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"operator must be a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("operator has non-finite entries")
    return a


def check_layout(layout: Sequence[int], dim: int | None = None) -> tuple[int, ...]:
    dims = tuple(int(x) for x in layout)
    if len(dims) == 0 or any(x < 1 for x in dims):
        raise ValueError(f"invalid layout {layout!r}")
    if dim is not None and int(np.prod(dims)) != dim:
        raise ValueError(f"layout {dims} does not match operator dimension {dim}")
    return dims


def check_density(rho, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate ``rho`` as a density matrix and return it as an array.

    Raises
    ------
    InvalidStateError
        If ``rho`` is not Hermitian, not unit trace, or has eigenvalues below
        ``-EIGEN_CLAMP_TOL``.
    """
    rho = as_operator(rho)
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise InvalidStateError("state is not Hermitian")
    if abs(np.trace(rho) - 1) > TRACE_TOL:
        raise InvalidStateError(f"state trace is {np.trace(rho).real:.3g}, expected 1")
    evals = np.linalg.eigvalsh(rho)
    if evals[0] < -EIGEN_CLAMP_TOL:
        raise InvalidStateError(f"state has negative eigenvalue {evals[0]:.3g}")
    return rho


def ket_to_density(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def basis_projector(d: int, k: int) -> np.ndarray:
    p = np.zeros((d, d), dtype=complex)
    p[k, k] = 1
    return p


def tensor(factors: Iterable) -> np.ndarray:
    """Kronecker product of ``factors``, leftmost factor most significant."""
    factors = [as_operator(f) for f in factors]
    if not factors:
        raise ValueError("tensor of an empty factor list")
    return reduce(np.kron, factors)


def partial_trace(state, layout: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every factor of ``layout`` not listed in ``keep``.

    Kept factors stay in their original relative order.

    Parameters
    ----------
    state : array_like
        Operator on the full space.
    layout : sequence of int
        Subsystem dimensions.
    keep : iterable of int
        Indices of the factors to keep.

    Returns
    -------
    numpy.ndarray
        Operator on the kept factors.
    """
    state = as_operator(state)
    dims = check_layout(layout, state.shape[0])
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep set is empty")
    if keep[0] < 0 or keep[-1] >= len(dims):
        raise ValueError(f"keep indices {keep} out of range for layout {dims}")
    drop = [i for i in range(len(dims)) if i not in keep]
    nf = len(dims)
    dk = int(np.prod([dims[i] for i in keep]))
    dt = int(np.prod([dims[i] for i in drop])) if drop else 1
    t = state.reshape(dims + dims)
    t = t.transpose(keep + drop + [nf + i for i in keep] + [nf + i for i in drop])
    t = t.reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def apply_local(state, layout: Sequence[int], targets: Sequence[int], op) -> np.ndarray:
    """Return ``op_T state op_T^dagger`` where ``op`` acts on factors ``targets``.

    ``op`` is ordered like ``targets`` (first target most significant). The
    full-space matrix is never formed.
    """
    state = as_operator(state)
    dims = check_layout(layout, state.shape[0])
    targets = [int(t) for t in targets]
    if len(set(targets)) != len(targets):
        raise ValueError("repeated target factor")
    op = np.asarray(op, dtype=complex)
    tdims = tuple(dims[i] for i in targets)
    k, nf = len(targets), len(dims)
    if op.shape != (int(np.prod(tdims)),) * 2:
        raise ValueError(f"operator shape {op.shape} does not match targets {tdims}")
    g = op.reshape(tdims * 2)
    t = state.reshape(dims + dims)
    t = np.tensordot(g, t, axes=(list(range(k, 2 * k)), targets))
    t = np.moveaxis(t, list(range(k)), targets)
    bra = [nf + i for i in targets]
    t = np.tensordot(t, g.conj(), axes=(bra, list(range(k, 2 * k))))
    t = np.moveaxis(t, list(range(2 * nf - k, 2 * nf)), bra)
    return t.reshape(state.shape)


def _spectrum(rho) -> np.ndarray:
    """Eigenvalues of a density matrix with rounding negatives clamped to zero."""
    rho = check_density(rho)
    evals = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    return np.clip(evals, 0.0, None)


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy ``-Tr(rho log2 rho)`` in bits (``0 log 0 = 0``)."""
    p = _spectrum(rho)
    p = p[p > 0]
    return float(max(0.0, -np.sum(p * np.log2(p))))


def trace_distance(a, b) -> float:
    """Half the trace norm of ``a - b``, from the eigenvalues of the difference."""
    a, b = as_operator(a), as_operator(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    if np.max(np.abs(diff - diff.conj().T), initial=0.0) > HERMITIAN_TOL:
        raise ValueError("trace_distance expects Hermitian operators")
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh((diff + diff.conj().T) / 2))))


def make_rng(seed) -> np.random.Generator:
    """Counter-based (Philox) generator from an integer seed; generators pass through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(seed))


def random_density(dim: int, rank: int | None = None, seed=None) -> np.ndarray:
    """Random density matrix ``G G^dagger / Tr(G G^dagger)``.

    ``G`` is a ``dim x rank`` complex Gaussian matrix, so the result has the
    requested rank almost surely. ``seed`` may be an int or a
    ``numpy.random.Generator``; the same int always yields the same matrix.
    """
    rank = dim if rank is None else int(rank)
    if dim < 1 or not 1 <= rank <= dim:
        raise ValueError(f"rank must satisfy 1 <= rank <= dim, got rank={rank}, dim={dim}")
    rng = make_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar-random unitary via QR of a complex Gaussian matrix."""
    rng = make_rng(seed)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def operator_to_json(a) -> list:
    """Serialize an operator as a list of rows of ``[re, im]`` pairs."""
    a = as_operator(a)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def operator_from_json(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValueError("expected a list of rows of [re, im] pairs")
    return as_operator(arr[..., 0] + 1j * arr[..., 1])
