"""Eigenvalue localization: Gershgorin discs, Brauer ovals of Cassini, Weyl bound.

Regions are kept symbolic (centers, radii, product bounds) and queried on
demand. All inequalities are treated as closed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .matrix import as_matrix
from .spectrum import check_hermitian, eigvalsh_desc

__all__ = [
    "DiscRegion",
    "CassiniRegion",
    "gershgorin",
    "gershgorin_magnitude_bound",
    "brauer",
    "brauer_real_upper_bound",
    "weyl_pair_bound",
    "membership",
    "region_from_dict",
]


def _offdiag_row_sums(M):
    A = np.abs(M)
    return A.sum(axis=1) - np.diag(A)


@dataclass(frozen=True)
class DiscRegion:
    centers: tuple
    radii: tuple

    def __post_init__(self):
        if len(self.centers) != len(self.radii):
            raise ValueError("centers and radii must have the same length")
        if any(r < 0 for r in self.radii):
            raise ValueError("radii must be non-negative")

    def contains(self, s, inflate=0.0) -> bool:
        c = np.asarray(self.centers, dtype=complex)
        r = np.asarray(self.radii, dtype=float)
        return bool(np.any(np.abs(s - c) <= r + inflate))

    def contains_many(self, s, inflate=0.0) -> np.ndarray:
        """Vectorized membership for an array of points."""
        s = np.asarray(s, dtype=complex)
        c = np.asarray(self.centers, dtype=complex)
        r = np.asarray(self.radii, dtype=float)
        return np.any(np.abs(s[..., None] - c) <= r + inflate, axis=-1)

    def bounding_box(self):
        c = np.asarray(self.centers, dtype=complex)
        r = np.asarray(self.radii, dtype=float)
        return (
            float(np.min(c.real - r)),
            float(np.max(c.real + r)),
            float(np.min(c.imag - r)),
            float(np.max(c.imag + r)),
        )

    def to_dict(self) -> dict:
        return {
            "kind": "discs",
            "centers": [[float(z.real), float(z.imag)] for z in map(complex, self.centers)],
            "radii": [float(r) for r in self.radii],
        }


@dataclass(frozen=True)
class CassiniRegion:
    """Union of ovals ``|s - c_i| |s - c_j| <= bound`` over row pairs ``(i, j)``."""

    pairs: tuple

    def __post_init__(self):
        if any(bound < 0 for _, _, bound in self.pairs):
            raise ValueError("product bounds must be non-negative")

    def _arrays(self):
        ci = np.array([p[0] for p in self.pairs], dtype=complex)
        cj = np.array([p[1] for p in self.pairs], dtype=complex)
        b = np.array([p[2] for p in self.pairs], dtype=float)
        return ci, cj, b

    def contains(self, s, inflate=0.0) -> bool:
        ci, cj, b = self._arrays()
        return bool(np.any(np.abs(s - ci) * np.abs(s - cj) <= b + inflate))

    def contains_many(self, s, inflate=0.0) -> np.ndarray:
        s = np.asarray(s, dtype=complex)[..., None]
        ci, cj, b = self._arrays()
        return np.any(np.abs(s - ci) * np.abs(s - cj) <= b + inflate, axis=-1)

    def to_dict(self) -> dict:
        return {
            "kind": "cassini",
            "pairs": [
                {
                    "center_i": [float(complex(a).real), float(complex(a).imag)],
                    "center_j": [float(complex(c).real), float(complex(c).imag)],
                    "product_bound": float(b),
                }
                for a, c, b in self.pairs
            ],
        }


def region_from_dict(obj):
    kind = obj.get("kind")
    if kind == "discs":
        return DiscRegion(
            tuple(complex(re, im) for re, im in obj["centers"]),
            tuple(float(r) for r in obj["radii"]),
        )
    if kind == "cassini":
        return CassiniRegion(
            tuple(
                (complex(*p["center_i"]), complex(*p["center_j"]), float(p["product_bound"]))
                for p in obj["pairs"]
            )
        )
    raise ValueError(f"unknown region kind {kind!r}")


def _square(M):
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix must be square, got {M.shape}")
    return M


def gershgorin(M) -> DiscRegion:
    """One disc per row: center ``M[i, i]``, radius the off-diagonal absolute row sum."""
    M = _square(M)
    return DiscRegion(tuple(complex(z) for z in np.diag(M)), tuple(float(r) for r in _offdiag_row_sums(M)))


def gershgorin_magnitude_bound(M) -> float:
    """Largest absolute row sum; bounds the modulus of every eigenvalue."""
    M = _square(M)
    return float(np.max(np.abs(M).sum(axis=1)))


def brauer(M) -> CassiniRegion:
    """One Cassini oval per unordered row pair."""
    M = _square(M)
    n = M.shape[0]
    if n < 2:
        raise ValueError("Brauer ovals need n >= 2")
    diag = np.diag(M)
    R = _offdiag_row_sums(M)
    return CassiniRegion(
        tuple((complex(diag[i]), complex(diag[j]), float(R[i] * R[j])) for i, j in combinations(range(n), 2))
    )


def brauer_real_upper_bound(region: CassiniRegion) -> float:
    """Largest real point of the region, assuming real centers.

    For a Hermitian matrix this bounds its largest eigenvalue. On the real
    axis right of both centers the oval is ``(s - c_i)(s - c_j) <= b``, whose
    largest root is ``m + sqrt(h^2 + b)`` with ``m``, ``h`` the midpoint and
    half-gap of the centers. With zero diagonal this is ``sqrt(b)``.
    """
    ci, cj, b = region._arrays()
    m = 0.5 * (ci.real + cj.real)
    h = 0.5 * (ci.real - cj.real)
    return float(np.max(m + np.sqrt(h * h + b)))


def weyl_pair_bound(H1, H2, use_brauer=False) -> float:
    """Upper bound ``lambda_2(H1) + lambda_1(H2)`` on ``lambda_2(H1 + H2)``.

    With ``use_brauer=True`` the exact ``lambda_1(H2)`` is replaced by the
    Brauer bound :func:`brauer_real_upper_bound`, which is what a proof by
    hand would use.
    """
    H1 = check_hermitian(H1, name="H1")
    H2 = check_hermitian(H2, name="H2")
    if H1.shape != H2.shape:
        raise ValueError(f"size mismatch: {H1.shape} vs {H2.shape}")
    if H1.shape[0] < 2:
        raise ValueError("need at least 2x2 matrices")
    l2 = eigvalsh_desc(H1)[1]
    if use_brauer:
        l1 = brauer_real_upper_bound(brauer(H2))
    else:
        l1 = eigvalsh_desc(H2)[0]
    return float(l2 + l1)


def membership(region, s, inflate=0.0) -> bool:
    """True iff ``s`` lies in the region (bounds optionally inflated)."""
    return region.contains(complex(s), inflate)
