"""Normal pairs: ``A``, ``B`` diagonal with eigenvalues ``a``, ``b``.

For normal ``A`` and ``B`` the Kronecker sum is normal with eigenvalues
``a_i + b_j``, so the objective is the sum of the two largest values of
``|a_i + b_j|^2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..exceptions import ConstraintViolation
from ..matrix import EPS_NORM, EPS_TRACE, ConstrainedPair

__all__ = [
    "NormalSpec",
    "normal_objective",
    "normal_pair",
    "pp_ab_maximum",
    "pp_ab_maximizer",
    "pp_ab_value",
    "d3_saturating_spec",
    "d4_saturating_spec",
    "random_normal_spec",
]


def _complex_tuple(v):
    return tuple(complex(z) for z in np.asarray(v, dtype=complex).ravel())


def _c2l(v):
    return [[z.real, z.imag] for z in v]


@dataclass(frozen=True)
class NormalSpec:
    d: int
    a: tuple
    b: tuple

    def __post_init__(self):
        a, b = _complex_tuple(self.a), _complex_tuple(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if self.d < 3:
            raise ValueError(f"d must be >= 3, got {self.d}")
        if len(a) != self.d or len(b) != self.d:
            raise ValueError(f"a and b need {self.d} entries each")
        ta, tb = abs(sum(a)), abs(sum(b))
        norm = sum(abs(z) ** 2 for z in a + b)
        if ta > EPS_TRACE or tb > EPS_TRACE or abs(norm - 1.0 / self.d) > EPS_NORM:
            raise ConstraintViolation(
                f"infeasible normal spec: |sum a|={ta:.3g}, |sum b|={tb:.3g}, "
                f"norm residual={abs(norm - 1.0 / self.d):.3g}",
                residuals=(ta, tb, abs(norm - 1.0 / self.d)),
            )

    def to_dict(self):
        return {"family": "normal", "d": self.d, "a": _c2l(self.a), "b": _c2l(self.b)}

    @classmethod
    def from_dict(cls, obj):
        return cls(int(obj["d"]), [complex(*z) for z in obj["a"]], [complex(*z) for z in obj["b"]])


def normal_objective(spec: NormalSpec) -> float:
    """Max over ``(i, j) != (k, l)`` of ``|a_i + b_j|^2 + |a_k + b_l|^2``."""
    a = np.asarray(spec.a)
    b = np.asarray(spec.b)
    vals = np.abs(a[:, None] + b[None, :]).ravel() ** 2
    top = np.partition(vals, vals.size - 2)[-2:]
    return float(top.sum())


def normal_pair(spec: NormalSpec) -> ConstrainedPair:
    return ConstrainedPair(np.diag(spec.a), np.diag(spec.b))


def pp_ab_maximum(d, exact=False):
    """``(3d - 4) / d^2``, the maximum of ``|a_1+b_1|^2 + |a_1+b_2|^2``."""
    if d < 3:
        raise ValueError(f"d must be >= 3, got {d}")
    value = Fraction(3 * d - 4, d * d)
    return value if exact else float(value)


def pp_ab_value(spec: NormalSpec) -> float:
    a, b = spec.a, spec.b
    return abs(a[0] + b[0]) ** 2 + abs(a[0] + b[1]) ** 2


def pp_ab_maximizer(d) -> NormalSpec:
    """A spec attaining :func:`pp_ab_maximum`.

    Takes ``a = alpha (1, -1/(d-1), ...)`` and ``b = beta (1, 1, -2/(d-2), ...)``;
    under the norm constraint ``p alpha^2 + q beta^2 = 1/d`` the sum
    ``2 (alpha + beta)^2`` is largest for ``alpha : beta = 1/p : 1/q``.
    """
    if d < 3:
        raise ValueError(f"d must be >= 3, got {d}")
    p = d / (d - 1)
    q = 2 * d / (d - 2)
    t = np.sqrt((1.0 / d) / (1.0 / p + 1.0 / q))
    alpha, beta = t / p, t / q
    a = np.full(d, -alpha / (d - 1))
    a[0] = alpha
    b = np.full(d, -2 * beta / (d - 2))
    b[:2] = beta
    # remove rounding drift so the NormalSpec validates at tight tolerance
    a -= a.mean()
    b -= b.mean()
    return NormalSpec(d, a, b)


def d3_saturating_spec() -> NormalSpec:
    """The ``d = 3`` pair with objective ``5/9 > 1/2``."""
    s = 3 * np.sqrt(10)
    return NormalSpec(3, np.array([4, -2, -2]) / s, np.array([1, 1, -2]) / s)


def d4_saturating_spec() -> NormalSpec:
    """``a = b = (1/4, -1/4, 0, 0)``; objective exactly ``1/2``."""
    v = np.array([0.25, -0.25, 0.0, 0.0])
    return NormalSpec(4, v, v)


def random_normal_spec(d, rng=None, real=False) -> NormalSpec:
    """Gaussian eigenvalues, centered and rescaled onto the constraint sphere."""
    rng = np.random.default_rng(rng)
    z = rng.standard_normal((2, d))
    if not real:
        z = z + 1j * rng.standard_normal((2, d))
    z = z - z.mean(axis=1, keepdims=True)
    z /= np.sqrt(d * np.sum(np.abs(z) ** 2))
    return NormalSpec(d, z[0], z[1])
