"""Family 2: ``A = D_A P_A``, ``B = D_B P_B`` with fixed-point-free permutations.

Permutations are 0-based tuples internally: ``A[k, sigma[k]] = a[k]`` and
``B[k, tau[k]] = b[k]``. JSON uses 1-based value arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import ConstraintViolation
from ..matrix import EPS_NORM, ConstrainedPair
from ._quadratic import psd_quadratic_roots

__all__ = [
    "Family2Spec",
    "check_derangement",
    "cyclic_shift",
    "random_derangement",
    "family2_matrices",
    "rank1_pair",
    "family2_rank1_eigs",
    "family2_lambda1_bound",
    "random_family2_spec",
    "random_rank1_instance",
]


def check_derangement(perm, d, name="permutation"):
    perm = tuple(int(k) for k in perm)
    if len(perm) != d or sorted(perm) != list(range(d)):
        raise ValueError(f"{name} is not a permutation of 0..{d - 1}: {perm}")
    fixed = [k for k in range(d) if perm[k] == k]
    if fixed:
        raise ValueError(f"{name} has fixed points {fixed}")
    return perm


def cyclic_shift(d):
    return tuple((k + 1) % d for k in range(d))


def random_derangement(d, rng=None):
    rng = np.random.default_rng(rng)
    while True:
        p = rng.permutation(d)
        if not np.any(p == np.arange(d)):
            return tuple(int(k) for k in p)


@dataclass(frozen=True)
class Family2Spec:
    d: int
    a: tuple
    b: tuple
    sigma: tuple
    tau: tuple

    def __post_init__(self):
        if self.d < 4:
            raise ValueError(f"family 2 needs d >= 4, got {self.d}")
        a = tuple(complex(z) for z in self.a)
        b = tuple(complex(z) for z in self.b)
        if len(a) != self.d or len(b) != self.d:
            raise ValueError(f"a and b need {self.d} entries each")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "sigma", check_derangement(self.sigma, self.d, "sigma"))
        object.__setattr__(self, "tau", check_derangement(self.tau, self.d, "tau"))
        norm = sum(abs(z) ** 2 for z in a + b)
        if abs(norm - 1.0 / self.d) > EPS_NORM:
            raise ConstraintViolation(f"norm residual {abs(norm - 1.0 / self.d):.3g} exceeds tolerance")

    def to_dict(self):
        return {
            "family": "family2",
            "d": self.d,
            "a": [[z.real, z.imag] for z in self.a],
            "b": [[z.real, z.imag] for z in self.b],
            "sigma": [k + 1 for k in self.sigma],
            "tau": [k + 1 for k in self.tau],
        }

    @classmethod
    def from_dict(cls, obj):
        return cls(
            int(obj["d"]),
            [complex(*z) for z in obj["a"]],
            [complex(*z) for z in obj["b"]],
            [k - 1 for k in obj["sigma"]],
            [k - 1 for k in obj["tau"]],
        )


def _perm_matrix_fill(values, perm):
    d = len(perm)
    M = np.zeros((d, d), dtype=complex)
    M[np.arange(d), list(perm)] = values
    return M


def family2_matrices(spec: Family2Spec) -> ConstrainedPair:
    return ConstrainedPair(_perm_matrix_fill(spec.a, spec.sigma), _perm_matrix_fill(spec.b, spec.tau))


def rank1_pair(d, a, b, tau, checked=True) -> ConstrainedPair:
    """Pair with ``A = a E_12`` and ``B[k, tau[k]] = b[k]``."""
    tau = check_derangement(tau, d, "tau")
    A = np.zeros((d, d), dtype=complex)
    A[0, 1] = a
    return ConstrainedPair(A, _perm_matrix_fill(b, tau), checked=checked)


def family2_rank1_eigs(d, a, b, tau) -> np.ndarray:
    """All ``d^2`` eigenvalues of ``X^H X`` (descending) for rank-one ``A``.

    ``A`` carries its single entry ``a`` at position (1, 2). The spectrum is
    each ``|b_j|^2`` with multiplicity ``d - 2`` plus the roots of
    ``x^2 - (|a|^2 + |b_j|^2 + |b_i|^2) x + |b_j|^2 |b_i|^2`` with
    ``i = tau^{-1}(j)``.
    """
    tau = check_derangement(tau, d, "tau")
    b = np.asarray(b, dtype=complex)
    if b.shape != (d,):
        raise ValueError(f"b must have {d} entries")
    norm = abs(a) ** 2 + np.sum(np.abs(b) ** 2)
    if abs(norm - 1.0 / d) > EPS_NORM:
        raise ConstraintViolation(f"norm residual {abs(norm - 1.0 / d):.3g} exceeds tolerance")
    bb = np.abs(b) ** 2
    tinv = np.argsort(tau)
    partner = bb[tinv]
    aa = abs(a) ** 2
    big, small = psd_quadratic_roots(bb, aa + partner, aa * bb, product=bb * partner)
    vals = np.concatenate([np.repeat(bb, d - 2), big, small])
    return np.sort(vals)[::-1]


def family2_lambda1_bound(spec: Family2Spec) -> float:
    """Row-sum bound on ``lambda_1(X^H X)``.

    Row ``(i, j)`` of ``X^H X`` has diagonal ``|a_{s(i)}|^2 + |b_{t(j)}|^2`` and
    two off-diagonal entries of modulus ``|a_{s(i)}||b_j|`` and
    ``|a_i||b_{t(j)}|`` (``s``, ``t`` the inverse permutations).
    """
    a = np.abs(np.asarray(spec.a))
    b = np.abs(np.asarray(spec.b))
    sinv = np.argsort(spec.sigma)
    tinv = np.argsort(spec.tau)
    asi = a[sinv][:, None]
    bti = b[tinv][None, :]
    rows = asi**2 + bti**2 + asi * b[None, :] + a[:, None] * bti
    return float(rows.max())


def random_family2_spec(d, rng=None, sigma=None, tau=None) -> Family2Spec:
    rng = np.random.default_rng(rng)
    sigma = random_derangement(d, rng) if sigma is None else sigma
    tau = random_derangement(d, rng) if tau is None else tau
    z = rng.standard_normal((2, d)) + 1j * rng.standard_normal((2, d))
    z /= np.sqrt(d * np.sum(np.abs(z) ** 2))
    return Family2Spec(d, z[0], z[1], sigma, tau)


def random_rank1_instance(d, rng=None):
    """Random ``(a, b, tau)`` with ``|a|^2 + sum |b_j|^2 = 1/d``."""
    rng = np.random.default_rng(rng)
    tau = random_derangement(d, rng)
    z = rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1)
    z /= np.sqrt(d * np.sum(np.abs(z) ** 2))
    return complex(z[0]), z[1:], tau
