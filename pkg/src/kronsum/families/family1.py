"""Family 1: ``d = 4`` pairs with the 2x2 anti-diagonal block pattern.

``A`` always has the pattern::

    [[0,  a1, 0,  0 ],
     [a2, 0,  0,  0 ],
     [0,  0,  0,  a3],
     [0,  0,  a4, 0 ]]

and ``B`` has either the same pattern or is ``diag(b1, ..., b4)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import ConstraintViolation
from ..matrix import EPS_NORM, EPS_TRACE, ConstrainedPair
from ._quadratic import psd_quadratic_roots

__all__ = [
    "Family1Spec",
    "antidiagonal_blocks",
    "family1_matrices",
    "family1_eigs_closed_form",
    "family1_blocks",
    "family1_blocks_eigs",
    "random_family1_spec",
]


def antidiagonal_blocks(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    M = np.zeros((4, 4), dtype=complex)
    M[0, 1], M[1, 0], M[2, 3], M[3, 2] = v
    return M


@dataclass(frozen=True)
class Family1Spec:
    a: tuple
    b: tuple
    b_is_diagonal: bool = False

    def __post_init__(self):
        a = tuple(complex(z) for z in self.a)
        b = tuple(complex(z) for z in self.b)
        if len(a) != 4 or len(b) != 4:
            raise ValueError("family 1 needs exactly 4 entries in a and in b")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        norm = sum(abs(z) ** 2 for z in a + b)
        if abs(norm - 0.25) > EPS_NORM:
            raise ConstraintViolation(f"norm residual {abs(norm - 0.25):.3g} exceeds tolerance")
        if self.b_is_diagonal and abs(sum(b)) > EPS_TRACE:
            raise ConstraintViolation(f"diagonal B has trace {abs(sum(b)):.3g}")

    def to_dict(self):
        return {
            "family": "family1",
            "a": [[z.real, z.imag] for z in self.a],
            "b": [[z.real, z.imag] for z in self.b],
            "b_is_diagonal": self.b_is_diagonal,
        }

    @classmethod
    def from_dict(cls, obj):
        return cls(
            [complex(*z) for z in obj["a"]],
            [complex(*z) for z in obj["b"]],
            bool(obj.get("b_is_diagonal", False)),
        )


def family1_matrices(spec: Family1Spec) -> ConstrainedPair:
    A = antidiagonal_blocks(spec.a)
    B = np.diag(spec.b) if spec.b_is_diagonal else antidiagonal_blocks(spec.b)
    return ConstrainedPair(A, B)


def _block_quadratic_roots(p1, p2, b):
    """Roots of the four quadratics of one 8x8 block (A entries ``p1``, ``p2``)."""
    b1, b2, b3, b4 = b
    A1, A2 = abs(p1) ** 2, abs(p2) ** 2
    B = [abs(z) ** 2 for z in b]
    cc = np.conj
    # (rows of |a1|^2 + |b_k|^2, rows of |a2|^2 + |b_l|^2, coupling)
    terms = [
        (A1 + B[1], A2 + B[0], abs(p1 * cc(b1) + cc(p2) * b2) ** 2),
        (A1 + B[0], A2 + B[1], abs(p1 * cc(b2) + cc(p2) * b1) ** 2),
        (A1 + B[3], A2 + B[2], abs(p1 * cc(b3) + cc(p2) * b4) ** 2),
        (A1 + B[2], A2 + B[3], abs(p1 * cc(b4) + cc(p2) * b3) ** 2),
    ]
    out = []
    for p, q, c in terms:
        big, small = psd_quadratic_roots(p, q, c)
        out += [float(big), float(small)]
    return out


def family1_eigs_closed_form(spec: Family1Spec) -> np.ndarray:
    """All 16 eigenvalues of ``X^H X`` (descending) for anti-diagonal ``B``.

    ``X^H X`` splits into two 8x8 blocks; each characteristic polynomial
    factors into four quadratics. The second block is the first with
    ``(a1, a2)`` replaced by ``(a3, a4)``.
    """
    if spec.b_is_diagonal:
        raise ValueError("closed form applies to anti-diagonal B; use family1_blocks")
    a = spec.a
    roots = _block_quadratic_roots(a[0], a[1], spec.b) + _block_quadratic_roots(a[2], a[3], spec.b)
    return np.sort(np.array(roots))[::-1]


def _block(p_hi, p_lo, bj):
    # rows: |p_lo|^2 + |bj|^2 then |p_hi|^2 + |bj|^2
    off = np.conj(bj) * p_hi + np.conj(p_lo) * bj
    return np.array(
        [[abs(p_lo) ** 2 + abs(bj) ** 2, off], [np.conj(off), abs(p_hi) ** 2 + abs(bj) ** 2]],
        dtype=complex,
    )


def family1_blocks(spec: Family1Spec):
    """The eight 2x2 Hermitian blocks ``Y_1..Y_4, Z_1..Z_4`` for diagonal ``B``.

    ``Y_j`` uses ``(a1, a2)`` and ``Z_j`` uses ``(a3, a4)``; together their
    eigenvalues are the spectrum of ``X^H X``.
    """
    if not spec.b_is_diagonal:
        raise ValueError("block form applies to diagonal B; use family1_eigs_closed_form")
    a1, a2, a3, a4 = spec.a
    Y = [_block(a1, a2, bj) for bj in spec.b]
    Z = [_block(a3, a4, bj) for bj in spec.b]
    return Y + Z


def family1_blocks_eigs(spec: Family1Spec) -> np.ndarray:
    """Eigenvalues of all eight blocks, descending."""
    out = []
    for M in family1_blocks(spec):
        big, small = psd_quadratic_roots(M[0, 0].real, M[1, 1].real, abs(M[0, 1]) ** 2)
        out += [float(big), float(small)]
    return np.sort(np.array(out))[::-1]


def random_family1_spec(rng=None, b_is_diagonal=False) -> Family1Spec:
    rng = np.random.default_rng(rng)
    z = rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4))
    if b_is_diagonal:
        z[1] -= z[1].mean()
    z /= np.sqrt(4 * np.sum(np.abs(z) ** 2))
    return Family1Spec(z[0], z[1], b_is_diagonal)
