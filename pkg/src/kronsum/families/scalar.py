"""Scalar inequalities and low-dimensional maximizations behind the family bounds.

The two grid maximizers (:func:`case5_grid_max`, :func:`maximize_d5_objective`)
scan a dense grid and then refine the best grid point with one bounded
scalar maximization per axis.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy import optimize

from ..exceptions import ConstraintViolation

__all__ = [
    "basic_inequality_gap",
    "scalar_inequality_check",
    "family1_case5_bound",
    "case5_b1_cap",
    "case5_f1",
    "case5_f2",
    "case5_envelope",
    "case5_x_range",
    "case5_grid_max",
    "family2_d5_objective",
    "maximize_d5_objective",
    "GridMaximum",
]

DEFAULT_GRID = 400


@dataclass(frozen=True)
class GridMaximum:
    value: float
    argmax: dict
    grid_value: float
    grid_points: int

    def to_dict(self):
        return asdict(self)


def basic_inequality_gap(a, b, x, y):
    """``(a + b)(a x^2 + b y^2) - a b (x + y)^2``; non-negative for ``a, b >= 0``."""
    return (a + b) * (a * x * x + b * y * y) - a * b * (x + y) ** 2


def scalar_inequality_check(a1, a2, b1, b2, tol=1e-10):
    """Left-hand side of the two-radical inequality (at most 1/2).

    Requires non-negative arguments with ``a1^2 + a2^2 + b1^2 + b2^2 = 1/4``.
    """
    vals = np.array([a1, a2, b1, b2], dtype=float)
    if np.any(vals < 0):
        raise ConstraintViolation("arguments must be non-negative")
    if abs(np.sum(vals**2) - 0.25) > tol:
        raise ConstraintViolation(f"a1^2 + a2^2 + b1^2 + b2^2 = {np.sum(vals**2)!r}, expected 1/4")
    diff = (a1 * a1 - a2 * a2) ** 2
    s = (a1 + a2) ** 2
    return float(np.sqrt(diff + 4 * b1 * b1 * s) + np.sqrt(diff + 4 * b2 * b2 * s))


def case5_b1_cap(a_mag):
    """Largest admissible ``|b_1|^2`` given ``|a_1..a_4|``: ``3/16 - 3/4 sum |a_j|^2``."""
    return 3.0 / 16.0 - 0.75 * float(np.sum(np.asarray(a_mag, dtype=float) ** 2))


def family1_case5_bound(a_mag, b1_sq, tol=1e-12):
    """Upper bound on ``lambda + mu`` when the two eigenvalues come from ``Y_1`` and ``Z_1``.

    ``a_mag`` are ``|a_1|..|a_4|``; the bound increases with ``b1_sq``.
    """
    a1, a2, a3, a4 = (float(v) for v in a_mag)
    if min(a1, a2, a3, a4) < 0 or b1_sq < 0:
        raise ConstraintViolation("magnitudes must be non-negative")
    if b1_sq > case5_b1_cap(a_mag) + tol:
        raise ConstraintViolation(
            f"|b1|^2 = {b1_sq!r} exceeds the admissible cap {case5_b1_cap(a_mag)!r}"
        )
    r1 = np.sqrt((a1 * a1 - a2 * a2) ** 2 + 4 * b1_sq * (a1 + a2) ** 2)
    r2 = np.sqrt((a3 * a3 - a4 * a4) ** 2 + 4 * b1_sq * (a3 + a4) ** 2)
    return 0.5 * (a1 * a1 + a2 * a2 + a3 * a3 + a4 * a4 + 4 * b1_sq + r1 + r2)


# |a1| = x cos(phi) cos(g), |a2| = x cos(phi) sin(g),
# |a3| = x sin(phi) cos(h), |a4| = x sin(phi) sin(h), b1 at its cap.


def case5_f1(phi, x, g):
    s = np.sin(2 * g)
    c = np.cos(2 * phi)
    x2 = x * x
    return 3 - 10 * x2 + 2 * x2 * c + (3 - 12 * x2) * s + (-2 * x2 - 2 * x2 * c) * s * s


def case5_f2(phi, x, h):
    s = np.sin(2 * h)
    c = np.cos(2 * phi)
    x2 = x * x
    return 3 - 10 * x2 - 2 * x2 * c + (3 - 12 * x2) * s + (-2 * x2 + 2 * x2 * c) * s * s


def _sqrt0(v):
    # f1, f2 are sums of squares in exact arithmetic; clip rounding noise
    return np.sqrt(np.maximum(v, 0.0))


def case5_envelope(x, phi, g, h):
    """The case-5 bound in angular coordinates, ``b_1`` at its cap."""
    return (
        3
        - 8 * x * x
        + 2 * x * np.cos(phi) * _sqrt0(case5_f1(phi, x, g))
        + 2 * x * np.sin(phi) * _sqrt0(case5_f2(phi, x, h))
    ) / 8


def _x_switch(phi, trig):
    return 1.0 / np.sqrt(4 + (8.0 / 3.0) * trig(phi) ** 2)


CASE5_SUBCASES = ("all", "5.1", "5.2", "5.3", "5.2-5.3")


def case5_x_range(phi, subcase="all"):
    """``(lo, hi)`` bounds on ``x`` for a subcase, as functions of ``phi``.

    The subcases split ``[0, 1/2]`` at the points where the unconstrained
    maximizers of ``f1`` (in ``g``) and ``f2`` (in ``h``) reach
    ``sin 2g = 1`` and ``sin 2h = 1``.
    """
    lo_g = _x_switch(phi, np.cos)
    lo_h = _x_switch(phi, np.sin)
    zero = np.zeros_like(np.asarray(phi, dtype=float))
    half = zero + 0.5
    ranges = {
        "all": (zero, half),
        "5.1": (zero, lo_g),
        "5.2": (lo_g, lo_h),
        "5.3": (lo_h, half),
        "5.2-5.3": (lo_g, half),
    }
    if subcase not in ranges:
        raise ValueError(f"unknown subcase {subcase!r}; expected one of {CASE5_SUBCASES}")
    return ranges[subcase]


def _bounded_max(func, lo, hi):
    res = optimize.minimize_scalar(lambda t: -func(t), bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-12})
    return float(res.x), float(-res.fun)


def case5_grid_max(n=DEFAULT_GRID, subcase="all", chunk=16) -> GridMaximum:
    """Maximize the case-5 envelope over ``phi in [0, pi/4]``, ``g, h in [0, pi/2]``.

    ``x`` is scanned over the subcase range through ``x = lo + t (hi - lo)``
    with ``t in [0, 1]``. The envelope separates into a ``g`` part and an
    ``h`` part, so each ``(t, phi)`` cell takes the grid maximum over ``g``
    and ``h`` independently.
    """
    t = np.linspace(0.0, 1.0, n)
    phi = np.linspace(0.0, np.pi / 4, n)
    ang = np.linspace(0.0, np.pi / 2, n)
    s = np.sin(2 * ang)
    lo, hi = case5_x_range(phi, subcase)

    best = -np.inf
    best_idx = None
    for start in range(0, n, chunk):
        tt = t[start:start + chunk, None]
        X = lo[None, :] + tt * (hi - lo)[None, :]
        X2 = (X * X)[..., None]
        c = np.cos(2 * phi)[None, :, None]
        lin = (3 - 12 * X2) * s
        f1 = 3 - 10 * X2 + 2 * X2 * c + lin + (-2 * X2 - 2 * X2 * c) * s * s
        f2 = 3 - 10 * X2 - 2 * X2 * c + lin + (-2 * X2 + 2 * X2 * c) * s * s
        i1 = f1.argmax(axis=-1)
        i2 = f2.argmax(axis=-1)
        F1 = _sqrt0(np.take_along_axis(f1, i1[..., None], -1)[..., 0])
        F2 = _sqrt0(np.take_along_axis(f2, i2[..., None], -1)[..., 0])
        val = (3 - 8 * X * X + 2 * X * np.cos(phi) * F1 + 2 * X * np.sin(phi) * F2) / 8
        k = np.unravel_index(np.argmax(val), val.shape)
        if val[k] > best:
            best = float(val[k])
            best_idx = (start + k[0], k[1], int(i1[k]), int(i2[k]))

    point = np.array([t[best_idx[0]], phi[best_idx[1]], ang[best_idx[2]], ang[best_idx[3]]])

    def value(p):
        tt, ph, g, h = p
        lo_, hi_ = case5_x_range(ph, subcase)
        return float(case5_envelope(lo_ + tt * (hi_ - lo_), ph, g, h))

    bounds = [(0.0, 1.0), (0.0, np.pi / 4), (0.0, np.pi / 2), (0.0, np.pi / 2)]
    steps = [t[1] - t[0], phi[1] - phi[0], ang[1] - ang[0], ang[1] - ang[0]]
    refined = value(point)
    for axis in range(4):
        lo_a = max(bounds[axis][0], point[axis] - steps[axis])
        hi_a = min(bounds[axis][1], point[axis] + steps[axis])

        def along(v, axis=axis):
            p = point.copy()
            p[axis] = v
            return value(p)

        v, f = _bounded_max(along, lo_a, hi_a)
        if f > refined:
            point[axis] = v
            refined = f

    tt, ph, g, h = point
    lo_, hi_ = case5_x_range(ph, subcase)
    argmax = {"x": float(lo_ + tt * (hi_ - lo_)), "phi": float(ph), "g": float(g), "h": float(h)}
    return GridMaximum(value=max(refined, best), argmax=argmax, grid_value=best, grid_points=n)


def family2_d5_objective(x1, x2, d=5, tol=1e-14):
    """Reduced two-variable bound ``f(x1, x2)`` for family 2.

    ``f = 1/d + x1^2 - x2^2 + 2 (x1 + x2) sqrt(1/(2d) - (x1^2 + x2^2)/2)``,
    defined for ``x1^2 + x2^2 <= 1/d``.
    """
    rad = 1.0 / (2 * d) - 0.5 * (np.asarray(x1) ** 2 + np.asarray(x2) ** 2)
    if np.any(rad < -tol):
        raise ConstraintViolation("x1^2 + x2^2 exceeds 1/d (negative radicand)")
    out = 1.0 / d + np.asarray(x1) ** 2 - np.asarray(x2) ** 2 + 2 * (np.asarray(x1) + np.asarray(x2)) * np.sqrt(
        np.maximum(rad, 0.0)
    )
    return float(out) if np.ndim(out) == 0 else out


def maximize_d5_objective(d=5, n=DEFAULT_GRID) -> GridMaximum:
    """Grid-plus-refine maximum of :func:`family2_d5_objective` over
    ``x1, x2 >= 0``, ``x1^2 + x2^2 <= 1/d`` (no ordering constraint on x1, x2)."""
    r = 1.0 / np.sqrt(d)
    grid = np.linspace(0.0, r, n)
    X1, X2 = np.meshgrid(grid, grid, indexing="ij")
    feasible = X1**2 + X2**2 <= 1.0 / d
    vals = np.full(X1.shape, -np.inf)
    vals[feasible] = family2_d5_objective(X1[feasible], X2[feasible], d)
    i, j = np.unravel_index(np.argmax(vals), vals.shape)
    grid_value = float(vals[i, j])
    point = [float(grid[i]), float(grid[j])]
    best = grid_value
    step = grid[1] - grid[0]
    for axis in range(2):
        other = point[1 - axis]
        cap = np.sqrt(max(1.0 / d - other * other, 0.0))
        lo, hi = max(0.0, point[axis] - step), min(cap, point[axis] + step)
        if hi <= lo:
            continue

        def along(v, axis=axis, other=other):
            return family2_d5_objective(v, other, d) if axis == 0 else family2_d5_objective(other, v, d)

        v, f = _bounded_max(along, lo, hi)
        if f > best:
            point[axis] = v
            best = f
    return GridMaximum(value=best, argmax={"x1": point[0], "x2": point[1]}, grid_value=grid_value, grid_points=n)
