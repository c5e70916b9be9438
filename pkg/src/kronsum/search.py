"""Derivative-free maximization of ``sigma_1^2 + sigma_2^2`` over feasible pairs.

Each restart draws a Gaussian start, projects it onto the constraint set and
runs a coordinate pattern search: every real parameter is nudged by
``+step`` then ``-step``; the first improving move (after re-projection) is
accepted. A sweep with no accepted move shrinks the step. Restarts use
independent RNG streams spawned from the master seed, so results are
reproducible and restarts could run in any order.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .exceptions import InvalidFamilyError
from .families.family2 import check_derangement, cyclic_shift
from .matrix import ConstrainedPair, build_x_unchecked, project_to_constraints
from .spectrum import objective

__all__ = [
    "FAMILIES",
    "SearchConfig",
    "SearchResult",
    "Certificate",
    "maximize",
    "certify",
    "parametrization",
]

log = logging.getLogger(__name__)

FAMILIES = (None, "normal", "family1", "family2")
CONJECTURED_BOUND = 0.5


@dataclass(frozen=True)
class SearchConfig:
    d: int
    family: Optional[str] = None
    restarts: int = 50
    max_iters: int = 5000
    step_init: float = 0.05
    step_shrink: float = 0.5
    seed: int = 0
    tol_stall: float = 1e-9
    b_is_diagonal: bool = False
    sigma: Optional[tuple] = None
    tau: Optional[tuple] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidFamilyError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.d < 3:
            raise InvalidFamilyError(f"d must be >= 3, got {self.d}")
        if self.family == "family1" and self.d != 4:
            raise InvalidFamilyError("family1 requires d = 4")
        if self.family == "family2":
            if self.d < 4:
                raise InvalidFamilyError("family2 requires d >= 4")
            sigma = cyclic_shift(self.d) if self.sigma is None else self.sigma
            tau = cyclic_shift(self.d) if self.tau is None else self.tau
            object.__setattr__(self, "sigma", check_derangement(sigma, self.d, "sigma"))
            object.__setattr__(self, "tau", check_derangement(tau, self.d, "tau"))
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not 0 < self.step_shrink < 1:
            raise ValueError("step_shrink must be in (0, 1)")
        if self.step_init <= 0 or self.tol_stall <= 0:
            raise ValueError("step_init and tol_stall must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def to_dict(self):
        out = asdict(self)
        for key in ("sigma", "tau"):
            if out[key] is not None:
                out[key] = [k + 1 for k in out[key]]
        return out

    @classmethod
    def from_dict(cls, obj):
        obj = dict(obj)
        for key in ("sigma", "tau"):
            if obj.get(key) is not None:
                obj[key] = tuple(k - 1 for k in obj[key])
        return cls(**obj)


class _Parametrization:
    """Real parameter vector <-> ``(A, B)`` for one family.

    Every family places its free complex entries at fixed positions of the
    flattened ``A`` and ``B``; parameters are interleaved ``(re, im)`` pairs,
    ``A``'s entries first. Zero-pattern entries are never touched, so the
    family structure is preserved exactly.
    """

    def __init__(self, config: SearchConfig):
        self.d = d = config.d
        rows = np.arange(d)
        if config.family is None:
            pos_a = pos_b = np.arange(d * d)
        elif config.family == "normal":
            pos_a = pos_b = rows * d + rows
        elif config.family == "family1":
            pos_a = np.array([1, 4, 11, 14])
            pos_b = rows * d + rows if config.b_is_diagonal else pos_a
        else:
            pos_a = rows * d + np.asarray(config.sigma)
            pos_b = rows * d + np.asarray(config.tau)
        self.pos_a, self.pos_b = pos_a, pos_b
        self.size = 2 * (pos_a.size + pos_b.size)

    def matrices(self, theta):
        """``(A, B)`` stacks for a ``(..., size)`` array of parameter vectors."""
        theta = np.asarray(theta, dtype=float)
        z = theta[..., 0::2] + 1j * theta[..., 1::2]
        na = self.pos_a.size
        batch = theta.shape[:-1]
        A = np.zeros(batch + (self.d * self.d,), dtype=complex)
        B = np.zeros(batch + (self.d * self.d,), dtype=complex)
        A[..., self.pos_a] = z[..., :na]
        B[..., self.pos_b] = z[..., na:]
        shape = batch + (self.d, self.d)
        return A.reshape(shape), B.reshape(shape)

    def vector(self, A, B):
        d = self.d
        batch = A.shape[:-2]
        z = np.concatenate(
            [A.reshape(batch + (d * d,))[..., self.pos_a], B.reshape(batch + (d * d,))[..., self.pos_b]],
            axis=-1,
        )
        theta = np.empty(batch + (self.size,))
        theta[..., 0::2] = z.real
        theta[..., 1::2] = z.imag
        return theta


def parametrization(config: SearchConfig):
    return _Parametrization(config)


def _project_batch(A, B):
    """Batched :func:`project_arrays`; degenerate rows come back as NaN."""
    d = A.shape[-1]
    idx = np.arange(d)
    tA = np.trace(A, axis1=-2, axis2=-1) / d
    tB = np.trace(B, axis1=-2, axis2=-1) / d
    A = A.copy()
    B = B.copy()
    A[..., idx, idx] -= tA[..., None]
    B[..., idx, idx] -= tB[..., None]
    norm = np.sum(np.abs(A) ** 2, axis=(-2, -1)) + np.sum(np.abs(B) ** 2, axis=(-2, -1))
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(norm > 1e-28, 1.0 / np.sqrt(d * norm), np.nan)
    return A * s[..., None, None], B * s[..., None, None]


def _objective_batch(A, B):
    d = A.shape[-1]
    I = np.eye(d)
    batch = A.shape[:-2]
    X = (
        A[..., :, None, :, None] * I[None, :, None, :] + I[:, None, :, None] * B[..., None, :, None, :]
    ).reshape(batch + (d * d, d * d))
    G = np.conj(np.swapaxes(X, -1, -2)) @ X
    w = np.linalg.eigvalsh(G)
    return w[..., -1] + w[..., -2]


_CHUNK = 16


@dataclass
class _RestartOutcome:
    best: float
    theta: np.ndarray
    iterations: int
    trajectory: list


def _run_restart(param: _Parametrization, config: SearchConfig, rng) -> _RestartOutcome:
    while True:
        A, B = _project_batch(*param.matrices(rng.standard_normal(param.size)))
        if np.all(np.isfinite(A)):
            break
    theta = param.vector(A, B)
    best = float(_objective_batch(A, B))
    trajectory = [best]
    step = config.step_init
    iters = 0
    n = param.size
    # candidate order within a sweep: (k, +), (k, -), (k+1, +), ...
    moves = np.repeat(np.arange(n), 2)
    signs = np.tile([1.0, -1.0], n)
    while step >= config.tol_stall and iters < config.max_iters:
        iters += 1
        improved = False
        first = 0
        while first < 2 * n:
            # all remaining candidates of the sweep share the current theta,
            # so evaluating them together and taking the first improvement
            # reproduces the sequential first-improvement rule
            k, sg = moves[first:first + _CHUNK], signs[first:first + _CHUNK]
            cand = np.repeat(theta[None, :], k.size, axis=0)
            cand[np.arange(k.size), k] += sg * step
            cA, cB = _project_batch(*param.matrices(cand))
            vals = _objective_batch(np.nan_to_num(cA), np.nan_to_num(cB))
            ok = np.isfinite(cA).all(axis=(-2, -1)) & (vals > best)
            hits = np.flatnonzero(ok)
            if hits.size == 0:
                first += k.size
                continue
            j = hits[0]
            best = float(vals[j])
            theta = param.vector(cA[j], cB[j])
            trajectory.append(best)
            improved = True
            # the sequential rule moves on to the next coordinate after a hit
            first += j + 1 + (1 if signs[first + j] > 0 else 0)
        if not improved:
            step *= config.step_shrink
    return _RestartOutcome(best, theta, iters, trajectory)


@dataclass
class SearchResult:
    best_objective: float
    best_pair: ConstrainedPair
    per_restart_best: list
    iterations_used: int
    seed: int
    constraint_residuals: tuple
    config: SearchConfig
    best_restart: int = 0
    trajectories: list = field(default_factory=list, repr=False)

    def to_dict(self, include_trajectories=False):
        out = {
            "best_objective": self.best_objective,
            "best_pair": self.best_pair.to_dict(),
            "best_restart": self.best_restart,
            "per_restart_best": list(self.per_restart_best),
            "iterations_used": self.iterations_used,
            "seed": self.seed,
            "constraint_residuals": {
                "trace_A": self.constraint_residuals[0],
                "trace_B": self.constraint_residuals[1],
                "norm": self.constraint_residuals[2],
            },
            "config": self.config.to_dict(),
        }
        if include_trajectories:
            out["trajectories"] = [list(t) for t in self.trajectories]
        return out

    @classmethod
    def from_dict(cls, obj):
        res = obj["constraint_residuals"]
        return cls(
            best_objective=float(obj["best_objective"]),
            best_pair=ConstrainedPair.from_dict(obj["best_pair"]),
            per_restart_best=list(obj["per_restart_best"]),
            iterations_used=int(obj["iterations_used"]),
            seed=int(obj["seed"]),
            constraint_residuals=(res["trace_A"], res["trace_B"], res["norm"]),
            config=SearchConfig.from_dict(obj["config"]),
            best_restart=int(obj.get("best_restart", 0)),
            trajectories=obj.get("trajectories", []),
        )


def maximize(config: SearchConfig, on_restart=None) -> SearchResult:
    """Run ``config.restarts`` pattern searches and keep the best.

    ``on_restart(index, best_objective)`` is called after each restart.
    Ties between restarts go to the lower index.
    """
    param = _Parametrization(config)
    streams = np.random.SeedSequence(config.seed).spawn(config.restarts)
    outcomes = []
    for idx, ss in enumerate(streams):
        out = _run_restart(param, config, np.random.default_rng(ss))
        log.debug("restart %d: best %.15g after %d sweeps", idx, out.best, out.iterations)
        outcomes.append(out)
        if on_restart is not None:
            on_restart(idx, out.best)
    best_idx = max(range(len(outcomes)), key=lambda i: (outcomes[i].best, -i))
    best = outcomes[best_idx]
    pair = project_to_constraints(*param.matrices(best.theta))
    return SearchResult(
        best_objective=objective(pair).objective,
        best_pair=pair,
        per_restart_best=[o.best for o in outcomes],
        iterations_used=sum(o.iterations for o in outcomes),
        seed=config.seed,
        constraint_residuals=pair.residuals,
        config=config,
        best_restart=best_idx,
        trajectories=[o.trajectory for o in outcomes],
    )


VERDICTS = ("SUPPORTS", "SATURATES", "VIOLATES")


@dataclass(frozen=True)
class Certificate:
    verdict: str
    objective: float
    objective_svd: float
    reported_objective: Optional[float]
    constraint_residuals: tuple
    feasible: bool
    pair: Optional[dict] = None

    def to_dict(self):
        out = asdict(self)
        out["constraint_residuals"] = list(self.constraint_residuals)
        return out


def certify(result, tol=1e-9, saturation_tol=1e-6) -> Certificate:
    """Recompute the objective of a result's pair from scratch and classify it.

    ``VIOLATES`` (objective above ``1/2 + tol``) is only issued when an
    independent SVD of ``X`` agrees; ``SATURATES`` means within
    ``saturation_tol`` of ``1/2``; otherwise ``SUPPORTS``. Violating and
    saturating pairs are serialized in the certificate.
    """
    if isinstance(result, SearchResult):
        pair, reported = result.best_pair, result.best_objective
    else:
        pair, reported = result, None
    fresh = ConstrainedPair.unchecked(np.array(pair.A), np.array(pair.B))
    resid = fresh.residuals
    feasible = fresh.is_feasible(1e-9, 1e-9)
    X = build_x_unchecked(fresh.A, fresh.B)
    eig_obj = objective(fresh).objective if fresh.is_feasible() else _eig_objective(X)
    s = np.linalg.svd(X, compute_uv=False)
    svd_obj = float(s[0] ** 2 + s[1] ** 2)
    if eig_obj > CONJECTURED_BOUND + tol and svd_obj > CONJECTURED_BOUND + tol:
        verdict = "VIOLATES"
    elif abs(eig_obj - CONJECTURED_BOUND) <= saturation_tol:
        verdict = "SATURATES"
    else:
        verdict = "SUPPORTS"
    keep = fresh.to_dict() if verdict != "SUPPORTS" else None
    return Certificate(verdict, eig_obj, svd_obj, reported, resid, feasible, keep)


def _eig_objective(X):
    w = np.linalg.eigvalsh(X.conj().T @ X)
    return float(w[-1] + w[-2])
