"""Per-frequency Vandermonde systems for sub-lattice dynamical sampling.

For ``Lambda = m Z + {0, ..., L-1}`` and a frequency ``omega`` the samples of
``A^s f`` on the offset-``c`` coset are tied to the ``m`` aliased values of
``f_hat`` by one row of the stacked matrix

    B[(c, s), j] = exp(+i 2 pi c j / m) * node_j ** s,
    node_j = a_hat((omega + j) / m).

On a periodic model of period ``P = m M`` with bin ``k`` (``omega = k/M``)::

    B @ F[k + r M]_r == m * exp(-i 2 pi c omega / m) * DFT_M[(A^s f)(m j + c)](k)

which fixes every sign and conjugation used below.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .signals import FrequencyGrid, Kernel, symbol

__all__ = [
    "NodeVector",
    "StackedSystem",
    "MultiplicityReport",
    "SeparationReport",
    "Verdict",
    "SupInverseNorm",
    "nodes",
    "node_matrix",
    "build_system",
    "stacked_matrices",
    "multiplicity",
    "completeness_check",
    "gautschi_bound",
    "inverse_norm",
    "sup_inverse_norm",
    "refine_sup_inverse_norm",
    "node_separation",
    "diagnostics",
    "cluster_nodes",
    "default_cluster_tol",
]

RANK_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class NodeVector:
    omega: float
    values: np.ndarray

    @property
    def m(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class StackedSystem:
    """``(N L) x m`` matrix; blocks by offset ``c``, rows in a block by ``s``."""

    matrix: np.ndarray
    omega: float
    m: int
    L: int
    N: int
    nodes: np.ndarray

    def block(self, c: int) -> np.ndarray:
        return self.matrix[c * self.N : (c + 1) * self.N]


def node_matrix(kernel: Kernel, m: int, omegas) -> np.ndarray:
    """Nodes for many frequencies at once, shape ``(len(omegas), m)``."""
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    xi = (omegas[:, None] + np.arange(m)[None, :]) / m
    return symbol(kernel, xi)


def nodes(kernel: Kernel, m: int, omega: float) -> NodeVector:
    """``a_hat((omega + j) / m)`` for ``j = 0, ..., m-1``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return NodeVector(float(omega), node_matrix(kernel, m, [omega])[0])


def _check_dims(m, L, N):
    if m < 1 or N < 1 or not 1 <= L <= m:
        raise ValueError(f"invalid dimensions m={m}, L={L}, N={N}")


def _phase(m: int, L: int) -> np.ndarray:
    c = np.arange(L)[:, None]
    j = np.arange(m)[None, :]
    return np.exp(2j * np.pi * np.mod(c * j, m) / m)


def stacked_matrices(node_rows: np.ndarray, L: int, N: int) -> np.ndarray:
    """Stacked systems for a batch of node vectors, shape ``(B, N L, m)``."""
    node_rows = np.atleast_2d(node_rows)
    m = node_rows.shape[1]
    powers = node_rows[:, None, :] ** np.arange(N)[None, :, None]  # (B, N, m)
    ph = _phase(m, L)  # (L, m)
    out = ph[None, :, None, :] * powers[:, None, :, :]  # (B, L, N, m)
    return out.reshape(node_rows.shape[0], L * N, m)


def build_system(kernel: Kernel, m: int, L: int, N: int, omega: float) -> StackedSystem:
    _check_dims(m, L, N)
    nv = nodes(kernel, m, omega)
    mat = stacked_matrices(nv.values, L, N)[0]
    mat.flags.writeable = False
    return StackedSystem(mat, float(omega), m, L, N, nv.values)


# -- multiplicity -----------------------------------------------------------


def default_cluster_tol(node_values: np.ndarray) -> float:
    return 1e-9 * (1.0 + float(np.max(np.abs(node_values))))


def cluster_nodes(values: np.ndarray, tol: float) -> list[list[int]]:
    """Connected components of the graph ``|x_i - x_j| <= tol``."""
    m = len(values)
    close = np.abs(values[:, None] - values[None, :]) <= tol
    seen = np.zeros(m, dtype=bool)
    clusters = []
    for i in range(m):
        if seen[i]:
            continue
        stack, comp = [i], []
        seen[i] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in np.flatnonzero(close[u] & ~seen):
                seen[v] = True
                stack.append(int(v))
        clusters.append(sorted(comp))
    return clusters


@dataclass(frozen=True)
class MultiplicityReport:
    """Node clusters per grid point; ``clusters[i]`` lists index groups at ``omegas[i]``."""

    omegas: np.ndarray
    clusters: tuple
    n_max: int
    tol: float
    argmax: int

    def cluster_sizes(self, i: int) -> list[int]:
        return sorted((len(c) for c in self.clusters[i]), reverse=True)


def multiplicity(kernel: Kernel, m: int, grid: FrequencyGrid, tol: float | None = None) -> MultiplicityReport:
    """Coincidence structure of the nodes over ``grid``.

    ``tol=None`` uses ``1e-9 * (1 + max |node|)`` on the whole grid.
    """
    om = grid.points
    nm = node_matrix(kernel, m, om)
    if tol is None:
        tol = default_cluster_tol(nm)
    if tol <= 0:
        raise ValueError("tol must be positive")
    clusters = []
    sizes = np.empty(len(om), dtype=int)
    for i in range(len(om)):
        cl = cluster_nodes(nm[i], tol)
        clusters.append(tuple(tuple(c) for c in cl))
        sizes[i] = max(len(c) for c in cl)
    k = int(np.argmax(sizes))
    return MultiplicityReport(om, tuple(clusters), int(sizes[k]), float(tol), k)


# -- completeness -----------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    verdict: str  # PASS | MARGINAL | FAIL
    reason: str
    m: int
    L: int
    N: int
    n_max: int
    sigma_min: float | None = None
    witness_omega: float | None = None
    witness_nodes: tuple[int, ...] | None = None
    rank_tol: float | None = None

    @property
    def nl(self) -> int:
        return self.N * self.L

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "reason": self.reason,
            "witness_omega": self.witness_omega,
            "witness_nodes": list(self.witness_nodes) if self.witness_nodes is not None else None,
            "n_max": self.n_max,
            "nl": self.nl,
            "m": self.m,
            "L": self.L,
            "N": self.N,
            "sigma_min": self.sigma_min,
            "rank_tol": self.rank_tol,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _batch_singular_values(kernel: Kernel, m: int, L: int, N: int, omegas: np.ndarray) -> np.ndarray:
    mats = stacked_matrices(node_matrix(kernel, m, omegas), L, N)
    return np.linalg.svd(mats, compute_uv=False)  # (B, min(NL, m)), descending


def completeness_check(
    kernel: Kernel,
    m: int,
    L: int,
    N: int,
    grid: FrequencyGrid,
    rank_tol: float | None = None,
    cluster_tol: float | None = None,
) -> Verdict:
    """Necessary conditions ``NL >= m`` and ``L >= max multiplicity``, then a rank sweep.

    ``rank_tol`` is an absolute threshold on the smallest singular value over
    the grid; ``None`` means ``1e-8`` times the largest singular value seen.
    """
    _check_dims(m, L, N)
    mult = multiplicity(kernel, m, grid, cluster_tol)
    if N * L < m:
        return Verdict("FAIL", f"NL={N * L} < m={m}", m, L, N, mult.n_max)
    if mult.n_max > L:
        i = mult.argmax
        big = max(mult.clusters[i], key=len)
        return Verdict(
            "FAIL",
            f"node multiplicity {mult.n_max} > L={L}",
            m,
            L,
            N,
            mult.n_max,
            witness_omega=float(mult.omegas[i]),
            witness_nodes=tuple(big),
        )
    sv = _batch_singular_values(kernel, m, L, N, grid.points)
    smin = sv[:, -1] if sv.shape[1] == m else np.zeros(len(sv))
    k = int(np.argmin(smin))
    tol = RANK_RTOL * float(sv[:, 0].max()) if rank_tol is None else float(rank_tol)
    verdict = "PASS" if smin[k] > tol else "MARGINAL"
    reason = f"min sigma_min={smin[k]:.6g} {'>' if verdict == 'PASS' else '<='} tol={tol:.3g}"
    return Verdict(
        verdict, reason, m, L, N, mult.n_max, float(smin[k]), witness_omega=float(grid.points[k]), rank_tol=tol
    )


# -- inverse norms ----------------------------------------------------------


def gautschi_bound(nv: NodeVector | np.ndarray) -> float:
    """``sqrt(m) max_i prod_{j != i} (1 + |x_j|) / |x_j - x_i|`` (inf if nodes coincide)."""
    x = np.asarray(nv.values if isinstance(nv, NodeVector) else nv, dtype=np.complex128)
    m = len(x)
    if m == 1:
        return 1.0
    diff = np.abs(x[None, :] - x[:, None])
    off = ~np.eye(m, dtype=bool)
    if np.any(diff[off] == 0):
        return float("inf")
    with np.errstate(over="ignore"):
        ratios = np.where(off, (1.0 + np.abs(x))[None, :] / np.where(off, diff, 1.0), 1.0)
        return float(np.sqrt(m) * np.max(np.prod(ratios, axis=1)))


def _inverse_norm_from_sv(sv: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    smin, smax = sv[..., -1], sv[..., 0]
    floor = max(shape) * np.finfo(float).eps * smax
    with np.errstate(divide="ignore"):
        return np.where(smin <= floor, np.inf, 1.0 / smin)


def inverse_norm(system: StackedSystem | np.ndarray) -> float:
    """``1 / sigma_min``; ``inf`` when the matrix is numerically rank deficient."""
    mat = np.asarray(system.matrix if isinstance(system, StackedSystem) else system)
    rows, cols = mat.shape
    if rows < cols:
        raise ValueError(f"under-determined system ({rows} x {cols})")
    sv = np.linalg.svd(mat, compute_uv=False)
    return float(_inverse_norm_from_sv(sv, mat.shape))


def sup_inverse_norm(kernel: Kernel, m: int, N: int, grid: FrequencyGrid) -> float:
    """Grid maximum of the inverse norm of the ``L = 1`` system.

    A lower estimate of the supremum over the circle; see
    :func:`refine_sup_inverse_norm` for a refinement run.
    """
    if N < m:
        raise ValueError(f"need N >= m for L = 1, got N={N}, m={m}")
    sv = _batch_singular_values(kernel, m, 1, N, grid.points)
    return float(np.max(_inverse_norm_from_sv(sv, (N, m))))


@dataclass(frozen=True)
class SupInverseNorm:
    value: float
    grid_sizes: tuple[int, ...]
    history: tuple[float, ...]
    converged: bool
    lipschitz: float


def refine_sup_inverse_norm(
    kernel: Kernel,
    m: int,
    N: int,
    grid: FrequencyGrid,
    rtol: float = 1e-6,
    max_M: int = 1 << 16,
) -> SupInverseNorm:
    """Double the grid until successive maxima agree to ``rtol``."""
    sizes, hist = [grid.M], [sup_inverse_norm(kernel, m, N, grid)]
    converged = False
    while grid.M * 2 <= max_M:
        grid = grid.refine(2)
        val = sup_inverse_norm(kernel, m, N, grid)
        sizes.append(grid.M)
        hist.append(val)
        prev = hist[-2]
        if np.isinf(val) and np.isinf(prev):
            converged = True
            break
        if np.isfinite(val) and abs(val - prev) <= rtol * abs(val):
            converged = True
            break
    return SupInverseNorm(hist[-1], tuple(sizes), tuple(hist), converged, kernel.lipschitz)


# -- separation ---------------------------------------------------------------


@dataclass(frozen=True)
class SeparationReport:
    c: float
    omega: float
    i: int
    j: int


def node_separation(kernel: Kernel, m: int, grid: FrequencyGrid) -> SeparationReport:
    """Smallest pairwise node distance over the grid, with its location."""
    if m < 2:
        raise ValueError("node separation needs m >= 2")
    nm = node_matrix(kernel, m, grid.points)
    iu, ju = np.triu_indices(m, 1)
    d = np.abs(nm[:, iu] - nm[:, ju])
    flat = int(np.argmin(d))
    w, p = np.unravel_index(flat, d.shape)
    return SeparationReport(float(d[w, p]), float(grid.points[w]), int(iu[p]), int(ju[p]))


def diagnostics(kernel: Kernel, m: int, L: int, N: int, grid: FrequencyGrid, cluster_tol: float | None = None):
    """Per-frequency rows ``(omega, sigma_min, sigma_max, gautschi_bound, max_cluster)``."""
    _check_dims(m, L, N)
    om = grid.points
    nm = node_matrix(kernel, m, om)
    sv = np.linalg.svd(stacked_matrices(nm, L, N), compute_uv=False)
    tol = default_cluster_tol(nm) if cluster_tol is None else cluster_tol
    rows = []
    for i, w in enumerate(om):
        smin = float(sv[i, -1]) if sv.shape[1] == m else 0.0
        big = max(len(c) for c in cluster_nodes(nm[i], tol))
        rows.append((float(w), smin, float(sv[i, 0]), gautschi_bound(nm[i]), big))
    return rows
