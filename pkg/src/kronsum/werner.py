"""Werner states, partial transpose and the single-copy NPT test."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix import as_matrix, matrix_from_dict, matrix_to_dict
from .spectrum import eigvalsh_desc

__all__ = ["WernerState", "werner", "swap_operator", "partial_transpose", "is_npt", "min_pt_eigenvalue"]

NPT_TOL = 1e-12


def swap_operator(d) -> np.ndarray:
    """``sum_ij E_ij (x) E_ji``, the flip of the two tensor factors."""
    S = np.zeros((d * d, d * d), dtype=np.complex128)
    i, j = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    S[(i * d + j).ravel(), (j * d + i).ravel()] = 1.0
    return S


@dataclass(frozen=True, eq=False)
class WernerState:
    d: int
    alpha: float
    rho: np.ndarray

    def to_dict(self):
        out = matrix_to_dict(self.rho)
        out.update({"d": self.d, "alpha": self.alpha})
        return out

    @classmethod
    def from_dict(cls, obj):
        state = werner(int(obj["d"]), float(obj["alpha"]))
        rho = matrix_from_dict(obj)
        if not np.allclose(rho, state.rho, atol=1e-12, rtol=0):
            raise ValueError("stored matrix does not match the Werner formula")
        return state


def werner(d, alpha) -> WernerState:
    """Unit-trace Werner state ``(I + alpha * SWAP) / (d^2 + alpha d)``."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if not -1.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [-1, 1], got {alpha}")
    rho = (np.eye(d * d) + alpha * swap_operator(d)) / (d * d + alpha * d)
    rho.setflags(write=False)
    return WernerState(d, float(alpha), rho)


def partial_transpose(rho, d_A, d_B) -> np.ndarray:
    """Transpose the first tensor factor: block ``(i, j)`` moves to ``(j, i)``."""
    rho = as_matrix(rho, "rho")
    n = d_A * d_B
    if rho.shape != (n, n):
        raise ValueError(f"rho has shape {rho.shape}, expected ({n}, {n}) for d_A={d_A}, d_B={d_B}")
    return rho.reshape(d_A, d_B, d_A, d_B).transpose(2, 1, 0, 3).reshape(n, n)


def min_pt_eigenvalue(state: WernerState) -> float:
    return float(eigvalsh_desc(partial_transpose(state.rho, state.d, state.d))[-1])


def is_npt(state: WernerState) -> bool:
    """True when the partial transpose has an eigenvalue below ``-1e-12``."""
    return min_pt_eigenvalue(state) < -NPT_TOL
