"""Exponentially twisted pair-sampling distributions over a distance matrix.

Sampling an ordered pair of points with probability proportional to
exp(lambda * d(x, y)) tilts the uniform distribution toward short distances
(lambda < 0) or long ones (lambda > 0).  The induced covariance between
points generalizes the cohesion matrix and gives a resolution knob for the
clustering algorithms: the twist parameter is solved from a target average
pair distance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrices import CohesionMatrix, DistanceMatrix, _as_square, _check_symmetric
from .partitions import Partition


@dataclass(frozen=True)
class SampledGraph:
    """A distance matrix with its twisted joint/marginal pair distribution."""

    distance: DistanceMatrix
    lam: float
    joint: np.ndarray
    marginal: np.ndarray

    @property
    def n(self) -> int:
        return self.distance.n


@dataclass(frozen=True)
class CovarianceMatrixLambda:
    """Pointwise covariance g(x,y) = p(x,y) - p(x)p(y) of a sampled graph."""

    g: np.ndarray
    lam: float

    def __post_init__(self):
        arr = _as_square(self.g, "covariance matrix")
        _check_symmetric(arr, "covariance matrix")
        arr.setflags(write=False)
        object.__setattr__(self, "g", arr)

    @property
    def n(self) -> int:
        return self.g.shape[0]


def twist(dist: DistanceMatrix, lam: float) -> SampledGraph:
    """Build the exponentially twisted distribution p(x,y) ~ exp(lam * d(x,y)).

    Exponentials are max-shifted before normalization, so any finite lam is
    safe even when lam * d reaches thousands.
    """
    lam = float(lam)
    if not np.isfinite(lam):
        raise ValueError("twist parameter must be finite")
    w = lam * dist.d
    joint = np.exp(w - w.max())
    joint /= joint.sum()
    return SampledGraph(distance=dist, lam=lam, joint=joint, marginal=joint.sum(axis=1))


def average_distance(sg: SampledGraph) -> float:
    """Expected distance of a sampled pair under the twisted distribution."""
    return float((sg.distance.d * sg.joint).sum())


def solve_lambda(dist: DistanceMatrix, target_dbar: float, tol: float = 1e-6) -> float:
    """Find lam with average_distance(twist(dist, lam)) within tol of the target.

    The average distance is strictly increasing in lam, sweeping the open
    interval (min distance, max distance), so bracketing by doubling outward
    from 0 followed by bisection always converges.  Constant (all-zero)
    matrices attain only their single value; other targets are rejected.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    target = float(target_dbar)
    d = dist.d
    dmax = float(d.max())
    dmin = float(d.min())
    if dmax == dmin:
        if abs(target - dmax) <= tol:
            return 0.0
        raise ValueError(f"constant distance matrix attains only dbar={dmax}, not {target}")
    if not (dmin < target < dmax):
        raise ValueError(f"target average distance {target} outside attainable open interval ({dmin}, {dmax})")

    budget = 200

    def dbar(lam: float) -> float:
        return average_distance(twist(dist, lam))

    f0 = dbar(0.0) - target
    if abs(f0) <= tol:
        return 0.0
    # bracket by doubling outward in the direction of the target
    step = 1.0 / dmax
    lo, hi = (None, 0.0) if f0 > 0 else (0.0, None)
    lam = -step if f0 > 0 else step
    for _ in range(budget):
        budget -= 1
        f = dbar(lam) - target
        if abs(f) <= tol:
            return lam
        if f0 > 0:
            if f < 0:
                lo = lam
                break
            hi = lam
        else:
            if f > 0:
                hi = lam
                break
            lo = lam
        lam *= 2.0
    if lo is None or hi is None:
        raise ValueError(f"could not bracket target average distance {target}")
    for _ in range(budget):
        mid = 0.5 * (lo + hi)
        f = dbar(mid) - target
        if abs(f) <= tol:
            return mid
        if f > 0:
            hi = mid
        else:
            lo = mid
    raise ValueError(f"bisection did not reach tolerance {tol} within the iteration budget")


def _indices(s, n: int) -> np.ndarray:
    idx = np.asarray(sorted(s) if isinstance(s, (set, frozenset)) else s, dtype=int)
    if idx.ndim != 1:
        raise ValueError("node set must be one-dimensional")
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise ValueError(f"node index out of range for n={n}")
    return idx


def centrality(sg: SampledGraph, s) -> float:
    """Total marginal probability mass of a node set."""
    return float(sg.marginal[_indices(s, sg.n)].sum())


def relative_centrality(sg: SampledGraph, s1, s2) -> float:
    """Conditional probability that one endpoint lands in s1 given the other is in s2."""
    i1 = _indices(s1, sg.n)
    i2 = _indices(s2, sg.n)
    mass = sg.marginal[i2].sum()
    if mass <= 0.0:
        raise ValueError("conditioning set has zero probability mass")
    return float(sg.joint[np.ix_(i1, i2)].sum() / mass)


def community_strength(sg: SampledGraph, s) -> float:
    """Relative self-centrality minus centrality; nonnegative for a community."""
    return relative_centrality(sg, s, s) - centrality(sg, s)


def covariance_matrix(sg: SampledGraph) -> CovarianceMatrixLambda:
    """Covariance g(x,y) = p(x,y) - p(x)p(y); entries sum to zero."""
    g = sg.joint - np.outer(sg.marginal, sg.marginal)
    g = 0.5 * (g + g.T)
    return CovarianceMatrixLambda(g=g, lam=sg.lam)


def modularity(g: CovarianceMatrixLambda | CohesionMatrix | np.ndarray, p: Partition) -> float:
    """Sum of within-cluster values, Q = sum_k g(S_k, S_k)."""
    arr = g.g if hasattr(g, "g") else np.asarray(g, dtype=float)
    return float(sum(arr[np.ix_(c, c)].sum() for c in p.clusters))
