"""Distance, similarity and cohesion matrices and the conversions between them.

A semi-metric is a pairwise distance that is nonnegative, zero on the
diagonal and symmetric; the triangle inequality is not required.  Every
semi-metric has a dual "cohesion" matrix obtained by double-centering and
negating the distances, and the mapping is invertible.  Raw similarity
matrices can be shifted into valid cohesion matrices, and semi-metrics can
be repaired into metrics by taking shortest paths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ATOL = 1e-9  # ingestion tolerance for symmetry / sign checks


def _as_square(a, name: str) -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be a square 2-D matrix, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ValueError(f"{name} is empty: n must be at least 1")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def _check_symmetric(arr: np.ndarray, name: str) -> None:
    if not np.allclose(arr, arr.T, rtol=0.0, atol=ATOL):
        worst = np.abs(arr - arr.T).max()
        raise ValueError(f"{name} is not symmetric (max asymmetry {worst:.3e})")


def _clean_tiny_negatives(arr: np.ndarray) -> None:
    # rounding residue only; genuine violations stay and fail validation
    mask = (arr < 0.0) & (arr >= -ATOL)
    arr[mask] = 0.0


def symmetric_array(m) -> np.ndarray:
    """Extract the validated symmetric ndarray from any of the matrix types."""
    for attr in ("g", "s", "d"):
        if hasattr(m, attr):
            return getattr(m, attr)
    arr = _as_square(m, "matrix")
    _check_symmetric(arr, "matrix")
    return arr


@dataclass(frozen=True)
class DistanceMatrix:
    """n x n semi-metric distances: nonnegative, zero diagonal, symmetric."""

    d: np.ndarray

    def __post_init__(self):
        arr = _as_square(self.d, "distance matrix")
        _check_symmetric(arr, "distance matrix")
        if arr.min() < -ATOL:
            raise ValueError(f"distance matrix has negative entries (min {arr.min():.3e})")
        if np.abs(np.diag(arr)).max() > ATOL:
            raise ValueError("distance matrix has nonzero diagonal entries")
        arr.setflags(write=False)
        object.__setattr__(self, "d", arr)

    @property
    def n(self) -> int:
        return self.d.shape[0]


@dataclass(frozen=True)
class CohesionMatrix:
    """Symmetric cohesion/covariance values; the common input to the clusterers.

    ``kind`` records the provenance: "induced" matrices additionally have
    zero row sums, "covariance" and "raw-similarity" only symmetry.
    """

    g: np.ndarray
    kind: str = "induced"

    def __post_init__(self):
        if self.kind not in ("induced", "covariance", "raw-similarity"):
            raise ValueError(f"unknown cohesion kind {self.kind!r}")
        arr = _as_square(self.g, "cohesion matrix")
        _check_symmetric(arr, "cohesion matrix")
        if self.kind == "induced":
            worst = np.abs(arr.sum(axis=1)).max()
            if worst > ATOL * max(1.0, np.abs(arr).max()) * arr.shape[0]:
                raise ValueError(f"induced cohesion rows must sum to 0 (max |row sum| {worst:.3e})")
        arr.setflags(write=False)
        object.__setattr__(self, "g", arr)

    @property
    def n(self) -> int:
        return self.g.shape[0]


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric similarity values of arbitrary sign."""

    s: np.ndarray

    def __post_init__(self):
        arr = _as_square(self.s, "similarity matrix")
        _check_symmetric(arr, "similarity matrix")
        arr.setflags(write=False)
        object.__setattr__(self, "s", arr)

    @property
    def n(self) -> int:
        return self.s.shape[0]


def _dual_assemble(gdiag: np.ndarray, d: np.ndarray) -> np.ndarray:
    # Off-diagonal cohesion is written as (g(x,x)+g(y,y))/2 - d(x,y) with the
    # same operation order that cohesion_to_distance later uses, so converting
    # back to distances cancels bit-exactly instead of to within an ulp.
    g = 0.5 * (gdiag[:, None] + gdiag[None, :]) - d
    np.fill_diagonal(g, gdiag)
    return g


def induce_cohesion(dist: DistanceMatrix) -> CohesionMatrix:
    """Double-center and negate a semi-metric into its dual cohesion matrix.

    g(x, y) = mean_z d(z, y) + mean_z d(x, z) - mean over all pairs - d(x, y).
    Rows of the result sum to zero.
    """
    d = dist.d
    n = dist.n
    gdiag = (2.0 * n * d.sum(axis=1) - d.sum()) / (n * n)
    return CohesionMatrix(g=_dual_assemble(gdiag, d), kind="induced")


def cohesion_to_distance(coh: CohesionMatrix) -> DistanceMatrix:
    """Invert the duality: d(x, y) = (g(x,x) + g(y,y)) / 2 - g(x, y)."""
    g = coh.g
    diag = np.diag(g)
    d = 0.5 * (diag[:, None] + diag[None, :]) - g
    np.fill_diagonal(d, 0.0)
    _clean_tiny_negatives(d)
    return DistanceMatrix(d=d)


def minimal_sigma(sim: SimilarityMatrix) -> float:
    """Smallest diagonal shift making a similarity a valid cohesion source."""
    s = sim.s
    if sim.n == 1:
        return 0.0
    gap = s - 0.5 * (np.diag(s)[:, None] + np.diag(s)[None, :])
    np.fill_diagonal(gap, -np.inf)
    return float(gap.max())


def similarity_to_cohesion(sim: SimilarityMatrix, sigma: float | None = None) -> CohesionMatrix:
    """Shift and center a raw similarity into a cohesion matrix.

    g~(x, y) = s(x, y) - mean_z s(x, z) - mean_z s(y, z) + overall mean
    + sigma * delta(x, y) - sigma / n.  ``sigma`` defaults to the smallest
    value that keeps the dual distances nonnegative, clamped below at 0.
    """
    s = sim.s
    n = sim.n
    sig_min = minimal_sigma(sim)
    if sigma is None:
        sigma = max(sig_min, 0.0)
    else:
        sigma = float(sigma)
        if not np.isfinite(sigma):
            raise ValueError("sigma must be finite")
        if sigma < sig_min - 1e-12:
            raise ValueError(f"sigma {sigma} is below the minimal valid value {sig_min}")
    # dual distance first: the centering terms cancel algebraically, leaving
    # d(x, y) = (s(x,x)+s(y,y))/2 - s(x,y) + sigma off the diagonal
    diag_s = np.diag(s)
    d = 0.5 * (diag_s[:, None] + diag_s[None, :]) - s + sigma
    np.fill_diagonal(d, 0.0)
    _clean_tiny_negatives(d)
    gdiag = (n * n * diag_s - 2.0 * n * s.sum(axis=1) + s.sum() + (n * n - n) * sigma) / (n * n)
    return CohesionMatrix(g=_dual_assemble(gdiag, d), kind="induced")


def metric_closure(dist: DistanceMatrix) -> DistanceMatrix:
    """Replace each distance by the shortest-path distance over the complete graph.

    Dense Floyd-Warshall, repeated until a full pass makes no change so the
    triangle inequality holds exactly in floating point.
    """
    d = dist.d.copy()
    n = dist.n
    while True:
        before = d.copy()
        for k in range(n):
            np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
        if np.array_equal(d, before):
            break
    return DistanceMatrix(d=d)
