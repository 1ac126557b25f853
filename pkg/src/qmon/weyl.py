"""
Heisenberg-Weyl clock and shift operators for a single qudit.

Entries are evaluated from the exact angle ``2 pi l k / d`` rather than by
repeated multiplication of ``omega`` so unitarity residuals stay at rounding
level for large ``d``.
"""

import numpy as np


def _check_dim(d) -> int:
    d = int(d)
    if d < 2:
        raise ValueError(f"qudit dimension must be >= 2, got {d}")
    return d


def root_phase(d: int, k) -> np.ndarray:
    """``omega**k`` for integer (array) ``k``, with the exponent reduced mod d first."""
    k = np.mod(np.asarray(k), d)
    return np.exp(2j * np.pi * k / d)


def omega(d: int) -> complex:
    """Primitive d-th root of unity ``exp(2 pi i / d)``."""
    d = _check_dim(d)
    return complex(root_phase(d, 1))


def clock_Z(d: int, power: int = 1) -> np.ndarray:
    """Clock operator ``Z**power = sum_k omega**(power k) |k><k|``."""
    d = _check_dim(d)
    return np.diag(root_phase(d, power * np.arange(d)))


def shift_X(d: int, power: int = 1) -> np.ndarray:
    """Shift operator ``X**power = sum_k |k + power mod d><k|``."""
    d = _check_dim(d)
    x = np.zeros((d, d), dtype=complex)
    k = np.arange(d)
    x[(k + power) % d, k] = 1
    return x


def fourier_V(d: int) -> np.ndarray:
    """Unitary ``V = d**-1/2 sum_ij omega**(ij) |i><j|``.

    Conjugation swaps the clock and shift: ``V^dagger Z V = X`` and
    ``V^dagger X V = Z^-1``.
    """
    d = _check_dim(d)
    i, j = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return root_phase(d, i * j) / np.sqrt(d)


def root_sum(d: int, a: int, b: int) -> complex:
    """``sum_k omega**((a-b)k)``; equals ``d`` when ``a = b mod d`` and 0 otherwise."""
    d = _check_dim(d)
    return complex(np.sum(root_phase(d, (a - b) * np.arange(d))))
