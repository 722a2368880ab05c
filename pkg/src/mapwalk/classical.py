"""Deterministic classical multi-map walks over point ensembles.

The phase space is a ring of L identical unit cells.  One walk step
applies the intra-cell map to every point and then shifts each point to
a neighbouring cell according to which half of the cell it landed in:
the upper half (partition coordinate >= threshold) moves one cell to the
left, the lower half one cell to the right.  The partition coordinate is
p for the horizontal splicing (the default) and q for the vertical one.

Because the cell maps are measure preserving, a uniform filling of one
cell turns the baker multi-map into an unbiased Bernoulli walk, while
the rotation multi-map returns every point to its start after exactly
four steps.  No boundary phase appears anywhere in this module: the
phase is a purely quantum parameter.

Evolution is vectorized over the ensemble and bitwise deterministic for
a fixed seed; points are independent, so ensembles may also be split
across workers with per-worker sub-seeds without changing any result.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from numpy.typing import NDArray

from .cellmaps import rotation_map, baker_map, harper_map
from .coins import CoinSpec
from .observables import (SiteDistribution, WalkTimeSeries, msd, site_entropy,
                          participation_ratio)

__all__ = [
    "CellMap",
    "CellPartition",
    "PhaseEnsemble",
    "classical_counterpart",
    "multi_map_step",
    "classical_site_distribution",
    "phase_portrait",
    "classical_msd_series",
]

MAP_KINDS = ("rotation", "baker", "harper")


@dataclass(frozen=True)
class CellMap:
    """Intra-cell dynamics selector: rotation, baker, or harper(g, tau)."""

    kind: str
    g: float = 0.0
    tau: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in MAP_KINDS:
            raise ValueError(f"unknown map kind {self.kind!r}; expected one of {MAP_KINDS}")
        if self.g < 0:
            raise ValueError(f"g must be >= 0, got {self.g}")
        if self.tau <= 0:
            raise ValueError(f"tau must be > 0, got {self.tau}")

    def apply(self, q: NDArray[np.float64], p: NDArray[np.float64]):
        if self.kind == "rotation":
            return rotation_map(q, p)
        if self.kind == "baker":
            return baker_map(q, p)
        return harper_map(q, p, self.g, self.tau)


@dataclass(frozen=True)
class CellPartition:
    """Half-cell splicing rule deciding the shift direction.

    ``orientation="horizontal"`` tests the p coordinate (top part left,
    bottom part right), ``"vertical"`` tests q.  The threshold intervals
    are half open: a point exactly on the threshold belongs to the upper
    half and shifts left, mirroring the baker map's branch at q = 1/2.
    """

    orientation: str = "horizontal"
    threshold: float = 0.5

    def __post_init__(self) -> None:
        if self.orientation not in ("horizontal", "vertical"):
            raise ValueError(f"unknown orientation {self.orientation!r}")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must lie in (0, 1), got {self.threshold}")


def classical_counterpart(coin: CoinSpec) -> CellMap:
    """Classical cell map underlying a quantum coin.

    The boundary phase of the coin has no classical counterpart, so it
    simply cannot be carried over.
    """
    if coin.kind == "dft":
        return CellMap("rotation")
    if coin.kind == "baker":
        return CellMap("baker")
    return CellMap("harper", g=coin.g, tau=coin.tau)


@dataclass(frozen=True)
class PhaseEnsemble:
    """A set of phase-space points (cell, q, p) on the L-cell ring."""

    cells: NDArray[np.int64]
    q: NDArray[np.float64]
    p: NDArray[np.float64]
    L: int
    rng_seed: int = 0
    time: int = 0

    def __post_init__(self) -> None:
        n = len(self.cells)
        if len(self.q) != n or len(self.p) != n:
            raise ValueError("cells, q, p must have equal lengths")
        if n == 0:
            raise ValueError("ensemble must contain at least one point")
        if self.L < 2:
            raise ValueError(f"lattice size L must be >= 2, got {self.L}")
        if not (np.all((self.q >= 0.0) & (self.q < 1.0))
                and np.all((self.p >= 0.0) & (self.p < 1.0))):
            raise ValueError("q and p must lie on the unit torus [0, 1)")
        if not np.all((self.cells >= 0) & (self.cells < self.L)):
            raise ValueError("cell indices must lie in 0..L-1")

    def __len__(self) -> int:
        return len(self.cells)

    @classmethod
    def uniform_fill(cls, L: int, n_points: int, seed: int = 0,
                     cell: int = 0) -> "PhaseEnsemble":
        """Seeded uniform random filling of a single cell."""
        rng = np.random.default_rng(seed)
        return cls(cells=np.full(n_points, cell % L, dtype=np.int64),
                   q=rng.random(n_points), p=rng.random(n_points),
                   L=L, rng_seed=seed)

    @classmethod
    def grid_fill(cls, L: int, side: int, cell: int = 0) -> "PhaseEnsemble":
        """Midpoint grid filling (side x side) of a single cell.

        With a power-of-two side this aligns with the baker map's dyadic
        partitions, making the multi-baker walk exactly binomial.
        """
        centers = (np.arange(side) + 0.5) / side
        qq, pp = np.meshgrid(centers, centers, indexing="ij")
        n = side * side
        return cls(cells=np.full(n, cell % L, dtype=np.int64),
                   q=qq.reshape(n), p=pp.reshape(n), L=L, rng_seed=0)


def multi_map_step(ens: PhaseEnsemble, cell_map: CellMap,
                   partition: CellPartition = CellPartition()) -> PhaseEnsemble:
    """One multi-map step: intra-cell dynamics, then the half-cell shift."""
    q, p = cell_map.apply(ens.q, ens.p)
    coord = p if partition.orientation == "horizontal" else q
    shift = np.where(coord >= partition.threshold, -1, 1)
    cells = (ens.cells + shift) % ens.L
    return replace(ens, cells=cells, q=np.asarray(q), p=np.asarray(p),
                   time=ens.time + 1)


def classical_site_distribution(ens: PhaseEnsemble) -> SiteDistribution:
    """Fraction of ensemble points per cell, normalized by construction."""
    counts = np.bincount(ens.cells, minlength=ens.L)
    return SiteDistribution(L=ens.L, probs=counts / len(ens), time=ens.time)


def phase_portrait(cell_map: CellMap, n_trajectories: int, n_steps: int,
                   seed: int = 0) -> NDArray[np.float64]:
    """Orbits of seeded random initial conditions on the unit torus.

    Returns an (n_trajectories * n_steps, 2) array of visited (q, p)
    points, the initial condition included, deterministic for a fixed
    seed.  Suitable for scatter plotting.
    """
    if n_trajectories < 1 or n_steps < 1:
        raise ValueError("n_trajectories and n_steps must be positive")
    rng = np.random.default_rng(seed)
    q = rng.random(n_trajectories)
    p = rng.random(n_trajectories)
    out = np.empty((n_steps, n_trajectories, 2))
    for t in range(n_steps):
        out[t, :, 0] = q
        out[t, :, 1] = p
        if t < n_steps - 1:
            q, p = cell_map.apply(q, p)
    return out.reshape(n_steps * n_trajectories, 2)


def classical_msd_series(cell_map: CellMap, partition: CellPartition, L: int,
                         t_max: int, n_points: int = 100_000, seed: int = 0,
                         grid_side: int | None = None,
                         keep_distributions: bool = False) -> WalkTimeSeries:
    """Observable time series for the multi-map walk started in cell 0.

    The initial ensemble is a seeded uniform fill of cell 0, or an exact
    midpoint grid when ``grid_side`` is given.  Statistics reuse the same
    formulas as the quantum series.
    """
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    if grid_side is not None:
        ens = PhaseEnsemble.grid_fill(L, grid_side)
    else:
        ens = PhaseEnsemble.uniform_fill(L, n_points, seed=seed)
    times = np.arange(t_max + 1, dtype=np.int64)
    out_msd = np.empty(t_max + 1)
    out_ent = np.empty(t_max + 1)
    out_pr = np.empty(t_max + 1)
    dists: list[SiteDistribution] | None = [] if keep_distributions else None
    for t in range(t_max + 1):
        if t > 0:
            ens = multi_map_step(ens, cell_map, partition)
        dist = classical_site_distribution(ens)
        out_msd[t] = msd(dist)
        out_ent[t] = site_entropy(dist)
        out_pr[t] = participation_ratio(dist)
        if dists is not None:
            dists.append(dist)
    return WalkTimeSeries(times=times, msd=out_msd, entropy=out_ent, pr=out_pr,
                          distributions=dists)
