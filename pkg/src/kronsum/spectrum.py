"""Squared singular values of the Kronecker sum and the top-two objective."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import EigensolverError, NotHermitianError
from .matrix import ConstrainedPair, as_matrix, build_x_unchecked

__all__ = [
    "CLAMP_TOL",
    "HERMITIAN_TOL",
    "SpectrumReport",
    "HSplit",
    "eigvalsh_desc",
    "objective",
    "objective_unchecked",
    "objective_value",
    "h_split",
    "top_two_sum",
    "check_hermitian",
]

CLAMP_TOL = 1e-12
HERMITIAN_TOL = 1e-10


def check_hermitian(M, tol=HERMITIAN_TOL, name="matrix"):
    M = as_matrix(M, name)
    if M.shape[0] != M.shape[1]:
        raise NotHermitianError(f"{name} is not square: {M.shape}")
    err = np.max(np.abs(M - M.conj().T))
    if err > tol:
        raise NotHermitianError(f"{name} is not Hermitian (max |M - M^H| = {err:.3g})")
    return M


def eigvalsh_desc(M) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix in non-increasing order.

    Ties keep the solver's index order (stable sort).
    """
    try:
        w = np.linalg.eigvalsh(M)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"Hermitian eigensolver failed: {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise EigensolverError("Hermitian eigensolver returned non-finite eigenvalues")
    order = np.argsort(-w, kind="stable")
    return w[order]


def _canonical_x(A, B):
    # (A, B) and (B, A) give permutation-similar X; solving on one fixed
    # ordering makes the reported spectrum bit-identical under swap-factors.
    A = np.ascontiguousarray(A, dtype=np.complex128)
    B = np.ascontiguousarray(B, dtype=np.complex128)
    if A.tobytes() > B.tobytes():
        A, B = B, A
    return build_x_unchecked(A, B)


def _gram_spectrum(X) -> np.ndarray:
    G = X.conj().T @ X
    # enforce exact Hermitian symmetry before the solve
    G = 0.5 * (G + G.conj().T)
    w = eigvalsh_desc(G)
    if w[-1] < -CLAMP_TOL:
        raise EigensolverError(f"X^H X has a negative eigenvalue {w[-1]:.3g}")
    return np.clip(w, 0.0, None)


@dataclass(frozen=True)
class SpectrumReport:
    """Squared singular values of ``X`` (descending) and the objective."""

    singular_values_sq: tuple
    objective: float
    trace_check: float

    @classmethod
    def from_values(cls, values) -> "SpectrumReport":
        values = tuple(float(v) for v in values)
        top = values[0] + (values[1] if len(values) > 1 else 0.0)
        return cls(values, top, float(np.sum(values)))

    def to_dict(self) -> dict:
        return {
            "sigma_sq": list(self.singular_values_sq),
            "objective": self.objective,
            "trace_check": self.trace_check,
        }

    @classmethod
    def from_dict(cls, obj) -> "SpectrumReport":
        report = cls.from_values(obj["sigma_sq"])
        if abs(report.objective - float(obj["objective"])) > 1e-12:
            raise ValueError("objective does not match sigma_sq")
        return report


def objective(pair: ConstrainedPair) -> SpectrumReport:
    """Full spectrum of ``X^H X`` and ``sigma_1^2 + sigma_2^2`` for a feasible pair."""
    pair.validate()
    return SpectrumReport.from_values(_gram_spectrum(_canonical_x(pair.A, pair.B)))


def objective_unchecked(A, B) -> SpectrumReport:
    """Same as :func:`objective` without the feasibility check."""
    return SpectrumReport.from_values(_gram_spectrum(_canonical_x(A, B)))


def objective_value(A, B) -> float:
    """Fast path returning only ``sigma_1^2 + sigma_2^2`` (no validation)."""
    d = A.shape[0]
    I = np.eye(d)
    X = (A[:, None, :, None] * I[None, :, None, :] + I[:, None, :, None] * B[None, :, None, :]).reshape(d * d, d * d)
    w = np.linalg.eigvalsh(X.conj().T @ X)
    return float(w[-1] + w[-2])


@dataclass(frozen=True, eq=False)
class HSplit:
    """``X^H X = H1 + H2`` with ``H1`` the "diagonal" part and ``H2`` the cross terms."""

    H1: np.ndarray
    H2: np.ndarray


def h_split(pair: ConstrainedPair) -> HSplit:
    """``H1 = A^H A (x) I + I (x) B^H B`` and ``H2 = A^H (x) B + A (x) B^H``."""
    pair.validate()
    A, B = pair.A, pair.B
    I = np.eye(pair.d, dtype=np.complex128)
    AH, BH = A.conj().T, B.conj().T
    H1 = np.kron(AH @ A, I) + np.kron(I, BH @ B)
    H2 = np.kron(AH, B) + np.kron(A, BH)
    return HSplit(H1, H2)


def top_two_sum(M) -> float:
    """Sum of the two largest eigenvalues of a Hermitian matrix."""
    M = check_hermitian(M)
    w = eigvalsh_desc(0.5 * (M + M.conj().T))
    if w.size < 2:
        raise ValueError("need at least a 2x2 matrix")
    return float(w[0] + w[1])
