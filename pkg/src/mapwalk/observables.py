"""Site-occupation statistics of a walk: distribution, m.s.d., entropy, PR.

The central object is the site probability distribution p_l(t) for a
walker released from site 0, averaged uniformly over the M coin basis
states:

    p_l(t) = (1/M) sum_{a,b} |<l, a| E^t |0, b>|^2

which coincides with the projector-trace form (1/M) tr(P_l E^{-t} P_0 E^t)
for every coin shipped here.  Three summary statistics condense p_l(t):

- ``msd``: second moment sum_l p_l d_l^2 with d_l = min(l, L-l), the
  minimal cyclic distance from site 0.
- ``site_entropy``: Shannon entropy in base L, normalized to [0, 1].
- ``participation_ratio``: 1/(L sum_l p_l^2), the occupied fraction of
  sites, in [1/L, 1].

``run_time_series`` produces all three at every time step in a single
pass over the evolution.  The M coin-state evolutions are batched into
one stacked matrix product per step; the reduction order is fixed, so
repeated runs are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .coins import coin_matrix
from .walk import WalkConfig, MomentumBlockSet, build_momentum_blocks, _apply_blocks, momentum_to_site

__all__ = [
    "SiteDistribution",
    "WalkTimeSeries",
    "site_probabilities",
    "msd",
    "site_entropy",
    "participation_ratio",
    "run_time_series",
    "trace_site_probabilities",
]

_NORM_TOL = 1e-10

#: Probabilities below this are treated as exact zeros in the entropy sum.
_ENTROPY_FLOOR = 1e-300


@dataclass(frozen=True)
class SiteDistribution:
    """Probability of finding the walker at each lattice site at one time."""

    L: int
    probs: NDArray[np.float64]
    time: int = 0

    def __post_init__(self) -> None:
        if self.probs.shape != (self.L,):
            raise ValueError(f"probs shape {self.probs.shape} != ({self.L},)")
        if np.any(self.probs < 0.0) or np.any(self.probs > 1.0 + _NORM_TOL):
            raise ValueError("probabilities must lie in [0, 1]")
        total = float(self.probs.sum())
        if abs(total - 1.0) > _NORM_TOL:
            raise ValueError(f"distribution sums to {total!r}, expected 1 within {_NORM_TOL}")


@dataclass(frozen=True)
class WalkTimeSeries:
    """Summary statistics per time step, with optional retained distributions."""

    times: NDArray[np.int64]
    msd: NDArray[np.float64]
    entropy: NDArray[np.float64]
    pr: NDArray[np.float64]
    distributions: list[SiteDistribution] | None = field(default=None)

    def __post_init__(self) -> None:
        n = len(self.times)
        for name in ("msd", "entropy", "pr"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"series {name} length != len(times)")
        if self.distributions is not None and len(self.distributions) != n:
            raise ValueError("distributions length != len(times)")


def msd(dist: SiteDistribution) -> float:
    """Mean squared displacement about site 0, cyclic minimal distance."""
    d = np.minimum(np.arange(dist.L), dist.L - np.arange(dist.L))
    return float(np.sum(dist.probs * d.astype(float) ** 2))


def site_entropy(dist: SiteDistribution) -> float:
    """Shannon entropy of the distribution in base L, in [0, 1]."""
    p = dist.probs
    mask = p > _ENTROPY_FLOOR
    return float(-np.sum(p[mask] * np.log(p[mask])) / math.log(dist.L))


def participation_ratio(dist: SiteDistribution) -> float:
    """Occupied fraction of sites: 1/(L sum p^2), in [1/L, 1]."""
    return float(1.0 / (dist.L * np.sum(dist.probs**2)))


def _initial_bundle(L: int, M: int) -> NDArray[np.complex128]:
    """Momentum representation of the M site-basis states |0, b>, stacked.

    Shape (L, M, M): axis 0 is lattice momentum, axis 1 the coin row,
    axis 2 indexes which initial coin state the column belongs to.
    """
    return np.broadcast_to(np.eye(M, dtype=np.complex128) / np.sqrt(L), (L, M, M)).copy()


def _bundle_site_probs(psi: NDArray[np.complex128]) -> NDArray[np.float64]:
    """Coin-averaged site probabilities of a stacked momentum bundle."""
    amps = momentum_to_site(psi)  # (L, M, M), axis 0 now the site index
    M = amps.shape[2]
    return (np.abs(amps) ** 2).reshape(amps.shape[0], -1).sum(axis=1) / M


def site_probabilities(blocks: MomentumBlockSet, t: int) -> SiteDistribution:
    """Distribution p_l(t) from block evolution of the M coin-basis starts."""
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    psi = _initial_bundle(blocks.L, blocks.M)
    for _ in range(t):
        psi = _apply_blocks(blocks.blocks, psi)
    return SiteDistribution(L=blocks.L, probs=_bundle_site_probs(psi), time=t)


def run_time_series(config: WalkConfig, t_max: int,
                    keep_distributions: bool = False,
                    U: NDArray[np.complex128] | None = None) -> WalkTimeSeries:
    """All three observables at every time 0..t_max in one evolution pass.

    The coin matrix is built from ``config.coin`` unless an explicit
    ``U`` is supplied (it must match the coin dimension).
    """
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    if U is None:
        U = coin_matrix(config.coin)
    blocks = build_momentum_blocks(config, U)
    psi = _initial_bundle(config.L, config.M)
    times = np.arange(t_max + 1, dtype=np.int64)
    out_msd = np.empty(t_max + 1)
    out_ent = np.empty(t_max + 1)
    out_pr = np.empty(t_max + 1)
    dists: list[SiteDistribution] | None = [] if keep_distributions else None
    for t in range(t_max + 1):
        if t > 0:
            psi = _apply_blocks(blocks.blocks, psi)
        dist = SiteDistribution(L=config.L, probs=_bundle_site_probs(psi), time=t)
        out_msd[t] = msd(dist)
        out_ent[t] = site_entropy(dist)
        out_pr[t] = participation_ratio(dist)
        if dists is not None:
            dists.append(dist)
    return WalkTimeSeries(times=times, msd=out_msd, entropy=out_ent, pr=out_pr,
                          distributions=dists)


def trace_site_probabilities(E: NDArray[np.complex128], L: int, M: int,
                             t: int) -> NDArray[np.float64]:
    """Oracle: p_l(t) = (1/M) tr(P_l E^{-t} P_0 E^t) by dense matrix algebra.

    Deliberately independent of the block evolution path: builds the
    projector matrices explicitly and uses matrix powers.
    """
    dim = L * M
    if E.shape != (dim, dim):
        raise ValueError(f"operator shape {E.shape} != {(dim, dim)}")
    Et = np.linalg.matrix_power(E, t)
    P0 = np.zeros((dim, dim), dtype=np.complex128)
    P0[:M, :M] = np.eye(M)
    core = Et.conj().T @ P0 @ Et
    probs = np.empty(L)
    for l in range(L):
        Pl = np.zeros((dim, dim), dtype=np.complex128)
        Pl[l * M:(l + 1) * M, l * M:(l + 1) * M] = np.eye(M)
        probs[l] = np.real(np.trace(Pl @ core)) / M
    return probs
