"""Dense complex matrices, Kronecker sums and the trace/norm constraint set.

Matrices are plain ``numpy`` ``complex128`` arrays. A feasible pair ``(A, B)``
of ``d x d`` matrices satisfies::

    tr A = tr B = 0,    tr(A^H A) + tr(B^H B) = 1/d

and defines the Kronecker sum ``X = A (x) I + I (x) B``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import linalg

from .exceptions import (
    ConstraintViolation,
    DegenerateInputError,
    NotUnitaryError,
)

__all__ = [
    "EPS_TRACE",
    "EPS_NORM",
    "EPS_UNITARY",
    "as_matrix",
    "matrix_to_dict",
    "matrix_from_dict",
    "ConstrainedPair",
    "SymmetryOp",
    "kron",
    "build_x",
    "build_x_unchecked",
    "apply_symmetry",
    "project_to_constraints",
    "project_arrays",
    "random_feasible_pair",
    "schur_canonical",
]

EPS_TRACE = 1e-10
EPS_NORM = 1e-10
EPS_UNITARY = 1e-10


def as_matrix(M, name="matrix"):
    """Validate ``M`` and return it as a 2-D ``complex128`` array."""
    arr = np.asarray(M, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def _square(M, name):
    arr = as_matrix(M, name)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    return arr


def _frozen(arr):
    arr = np.array(arr, dtype=np.complex128, copy=True)
    arr.setflags(write=False)
    return arr


def matrix_to_dict(M) -> dict:
    """Serialize to ``{"rows", "cols", "entries": [[re, im], ...]}`` (row-major)."""
    arr = as_matrix(M)
    flat = arr.ravel(order="C")
    return {
        "rows": int(arr.shape[0]),
        "cols": int(arr.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_dict(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    entries = obj["entries"]
    if rows <= 0 or cols <= 0:
        raise ValueError("rows and cols must be positive")
    if len(entries) != rows * cols:
        raise ValueError(
            f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(entries)}"
        )
    flat = np.array([complex(re, im) for re, im in entries], dtype=np.complex128)
    return as_matrix(flat.reshape(rows, cols))


def residuals(A, B):
    """Return ``(|tr A|, |tr B|, |tr A^H A + tr B^H B - 1/d|)``."""
    d = A.shape[0]
    norm = np.vdot(A, A).real + np.vdot(B, B).real
    return (float(abs(np.trace(A))), float(abs(np.trace(B))), float(abs(norm - 1.0 / d)))


@dataclass(frozen=True, eq=False)
class ConstrainedPair:
    """A pair ``(A, B)`` of ``d x d`` matrices satisfying the constraints.

    Construction validates the constraints at ``EPS_TRACE`` / ``EPS_NORM``;
    use :meth:`unchecked` to skip that for exploratory work.
    """

    A: np.ndarray
    B: np.ndarray
    d: int = field(init=False)
    checked: bool = True

    def __post_init__(self):
        A = _square(self.A, "A")
        B = _square(self.B, "B")
        if A.shape != B.shape:
            raise ValueError(f"A and B must have the same shape, got {A.shape} and {B.shape}")
        d = A.shape[0]
        object.__setattr__(self, "A", _frozen(A))
        object.__setattr__(self, "B", _frozen(B))
        object.__setattr__(self, "d", d)
        if self.checked:
            if d < 3:
                raise ValueError(f"d must be >= 3, got {d}")
            self.validate()

    @classmethod
    def unchecked(cls, A, B) -> "ConstrainedPair":
        """Build a pair without checking the constraints (or ``d >= 3``)."""
        return cls(A, B, checked=False)

    @property
    def residuals(self):
        return residuals(self.A, self.B)

    def is_feasible(self, eps_trace=EPS_TRACE, eps_norm=EPS_NORM) -> bool:
        ta, tb, nr = self.residuals
        return ta <= eps_trace and tb <= eps_trace and nr <= eps_norm

    def validate(self, eps_trace=EPS_TRACE, eps_norm=EPS_NORM):
        if not self.is_feasible(eps_trace, eps_norm):
            ta, tb, nr = self.residuals
            raise ConstraintViolation(
                f"constraint residuals too large: |tr A|={ta:.3g}, |tr B|={tb:.3g}, "
                f"norm={nr:.3g}",
                residuals=(ta, tb, nr),
            )
        return self

    def to_dict(self) -> dict:
        return {"d": self.d, "A": matrix_to_dict(self.A), "B": matrix_to_dict(self.B)}

    @classmethod
    def from_dict(cls, obj: dict, checked=True) -> "ConstrainedPair":
        pair = cls(matrix_from_dict(obj["A"]), matrix_from_dict(obj["B"]), checked=checked)
        if "d" in obj and int(obj["d"]) != pair.d:
            raise ValueError(f"declared d={obj['d']} does not match matrix size {pair.d}")
        return pair

    def __repr__(self):
        return f"ConstrainedPair(d={self.d}, residuals={self.residuals})"


def kron(A, B) -> np.ndarray:
    """Kronecker product ``A (x) B``."""
    return np.kron(as_matrix(A, "A"), as_matrix(B, "B"))


def build_x_unchecked(A, B) -> np.ndarray:
    """``A (x) I + I (x) B`` for any two square matrices of the same size."""
    A = _square(A, "A")
    B = _square(B, "B")
    I = np.eye(A.shape[0], dtype=np.complex128)
    return np.kron(A, I) + np.kron(I, B)


def build_x(pair: ConstrainedPair) -> np.ndarray:
    """Kronecker sum of a feasible pair; raises ``ConstraintViolation`` otherwise."""
    pair.validate()
    return build_x_unchecked(pair.A, pair.B)


SYMMETRY_KINDS = ("transpose", "conjugate", "adjoint", "local-unitary", "swap-factors")


@dataclass(frozen=True, eq=False)
class SymmetryOp:
    """One of the transformations that leave the objective unchanged.

    ``local-unitary`` maps ``(A, B)`` to ``(U A U^H, V B V^H)``.
    """

    kind: str
    U: Optional[np.ndarray] = None
    V: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in SYMMETRY_KINDS:
            raise ValueError(f"unknown symmetry kind {self.kind!r}; expected one of {SYMMETRY_KINDS}")
        if self.kind == "local-unitary":
            if self.U is None or self.V is None:
                raise ValueError("local-unitary requires both U and V")
            for name in ("U", "V"):
                M = _square(getattr(self, name), name)
                err = np.linalg.norm(M.conj().T @ M - np.eye(M.shape[0]))
                if err > EPS_UNITARY:
                    raise NotUnitaryError(f"{name} is not unitary: ||{name}^H {name} - I|| = {err:.3g}")
                object.__setattr__(self, name, _frozen(M))

    @classmethod
    def local_unitary(cls, U, V):
        return cls("local-unitary", U, V)


def apply_symmetry(pair: ConstrainedPair, op: SymmetryOp) -> ConstrainedPair:
    A, B = pair.A, pair.B
    if op.kind == "transpose":
        A2, B2 = A.T, B.T
    elif op.kind == "conjugate":
        A2, B2 = A.conj(), B.conj()
    elif op.kind == "adjoint":
        A2, B2 = A.conj().T, B.conj().T
    elif op.kind == "swap-factors":
        # I (x) A + B (x) I is the Kronecker sum of (B, A)
        A2, B2 = B, A
    else:
        if op.U.shape != A.shape or op.V.shape != B.shape:
            raise ValueError("U and V must match the pair dimension")
        A2 = op.U @ A @ op.U.conj().T
        B2 = op.V @ B @ op.V.conj().T
    return ConstrainedPair(A2, B2, checked=pair.checked)


def project_arrays(A, B):
    """Array-level core of :func:`project_to_constraints` (no validation)."""
    d = A.shape[0]
    A0 = A.copy()
    B0 = B.copy()
    idx = np.diag_indices(d)
    A0[idx] -= np.trace(A) / d
    B0[idx] -= np.trace(B) / d
    norm = np.vdot(A0, A0).real + np.vdot(B0, B0).real
    scale = np.vdot(A, A).real + np.vdot(B, B).real
    if norm <= 1e-28 * max(scale, 1.0):
        raise DegenerateInputError("both matrices are scalar multiples of I; cannot normalize")
    s = 1.0 / np.sqrt(d * norm)
    return A0 * s, B0 * s


def project_to_constraints(A, B) -> ConstrainedPair:
    """Map ``(A, B)`` onto the feasible set.

    Removes the trace of each matrix, then rescales both by one common
    positive factor so the squared Frobenius norms sum to ``1/d``.
    """
    A = _square(A, "A")
    B = _square(B, "B")
    if A.shape != B.shape:
        raise ValueError(f"A and B must have the same shape, got {A.shape} and {B.shape}")
    return ConstrainedPair(*project_arrays(A, B))


def random_feasible_pair(d, rng=None) -> ConstrainedPair:
    """Gaussian pair projected onto the constraint set."""
    rng = np.random.default_rng(rng)
    shape = (2, d, d)
    Z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return project_to_constraints(Z[0], Z[1])


def random_unitary(d, rng=None) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    rng = np.random.default_rng(rng)
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph


def schur_canonical(pair: ConstrainedPair):
    """Return ``(pair', op)`` with ``A``, ``B`` upper-triangular.

    ``op`` is the local-unitary :class:`SymmetryOp` mapping ``pair`` to
    ``pair'``; the objective is unchanged.
    """
    TA, ZA = linalg.schur(pair.A, output="complex")
    TB, ZB = linalg.schur(pair.B, output="complex")
    op = SymmetryOp.local_unitary(ZA.conj().T, ZB.conj().T)
    return apply_symmetry(pair, op), op
