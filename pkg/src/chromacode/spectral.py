"""Normalized-adjacency spectra, Rayleigh quotients, and the Cheeger sandwich.

The dense path (symmetric tridiagonalization + iterative diagonalization via
LAPACK) is the source of truth up to DENSE_CAP vertices; above that a
power iteration on the all-ones-deflated operator takes over. Disconnected
graphs and 0-regular graphs report lambda2 = 1 by convention.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from . import graphs
from .errors import NoConvergence, TooLarge, ZeroDegree, ZeroVector
from .graphs import RegularGraph

DENSE_CAP = 4096
ITER_TOL = 1e-7
ITER_MAX = 200_000


@dataclass(frozen=True)
class Spectrum:
    """All eigenvalues of the normalized adjacency, descending, with solver metadata."""

    eigenvalues: tuple[float, ...]
    method: str
    residual: float

    @property
    def lambda2(self) -> float:
        return self.eigenvalues[1]

    @property
    def lambda_min(self) -> float:
        return self.eigenvalues[-1]


def normalized_adjacency(G: RegularGraph) -> np.ndarray:
    """Dense normalized adjacency: 1/d on edges, 0 elsewhere."""
    if G.d == 0:
        raise ZeroDegree("0-regular graph has no normalized adjacency")
    A = np.zeros((G.n, G.n))
    u, v = G.edge_arrays()
    A[u, v] = 1.0 / G.d
    A[v, u] = 1.0 / G.d
    return A


def is_connected(G: RegularGraph) -> bool:
    if G.n <= 1:
        return True
    if G.d == 0:
        return False
    seen = bytearray(G.n)
    seen[0] = 1
    queue = deque([0])
    count = 1
    while queue:
        v = queue.popleft()
        for u in G.adjacency[v]:
            if not seen[u]:
                seen[u] = 1
                count += 1
                queue.append(u)
    return count == G.n


def full_spectrum(G: RegularGraph, dense_cap: int = DENSE_CAP) -> Spectrum:
    """All n eigenvalues via the dense symmetric solver, plus the max residual
    |A x - lambda x|_inf over the reported eigenpairs."""
    if G.d == 0:
        raise ZeroDegree("use lambda2() for the d=0 convention")
    if G.n > dense_cap:
        raise TooLarge(f"n={G.n} exceeds dense cap {dense_cap}")
    A = normalized_adjacency(G)
    vals, vecs = np.linalg.eigh(A)
    vals = vals[::-1]
    # negative-stride views fall off the BLAS fast path in the matmul below
    vecs = np.ascontiguousarray(vecs[:, ::-1])
    residual = float(np.max(np.abs(A @ vecs - vecs * vals)))
    return Spectrum(tuple(float(x) for x in vals), "dense", residual)


def _matvec(G: RegularGraph):
    flat = np.fromiter(
        (u for nbrs in G.adjacency for u in nbrs), dtype=np.int64, count=G.n * G.d
    )
    ptr = np.arange(0, G.n * G.d + 1, G.d)
    inv_d = 1.0 / G.d

    def mv(x: np.ndarray) -> np.ndarray:
        return np.add.reduceat(x[flat], ptr[:-1]) * inv_d

    return mv


def _power_iteration(mv, n: int, tol: float, maxit: int, deflate_ones: bool) -> float:
    """Largest eigenvalue of (A+I)/2 (optionally on the 1-perp subspace),
    mapped back to an eigenvalue of A."""
    rng = np.random.default_rng(0xC0DE)
    x = rng.standard_normal(n)
    if deflate_ones:
        x -= x.mean()
    x /= np.linalg.norm(x)
    prev = None
    streak = 0
    for _ in range(maxit):
        y = 0.5 * (mv(x) + x)
        if deflate_ones:
            y -= y.mean()
        r = float(x @ y)
        lam = 2.0 * r - 1.0
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return -1.0
        x = y / ny
        if prev is not None and abs(lam - prev) < 0.5 * tol:
            streak += 1
            if streak >= 3:
                return lam
        else:
            streak = 0
        prev = lam
    raise NoConvergence(f"power iteration did not converge in {maxit} steps")


def lambda2(
    G: RegularGraph,
    tol: float = ITER_TOL,
    dense_cap: int = DENSE_CAP,
    maxit: int = ITER_MAX,
) -> float:
    """Second-largest normalized eigenvalue (with multiplicity).

    Returns exactly 1.0 for 0-regular or disconnected graphs.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if G.d == 0:
        return 1.0
    if not is_connected(G):
        return 1.0
    if G.n <= dense_cap:
        return full_spectrum(G, dense_cap=dense_cap).eigenvalues[1]
    return _power_iteration(_matvec(G), G.n, tol, maxit, deflate_ones=True)


def lambda_min(
    G: RegularGraph,
    tol: float = ITER_TOL,
    dense_cap: int = DENSE_CAP,
    maxit: int = ITER_MAX,
) -> float:
    """Smallest normalized eigenvalue, via the negated-shifted operator above the dense cap."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if G.d == 0:
        raise ZeroDegree("lambda_min undefined for 0-regular graphs")
    if G.n <= dense_cap:
        return full_spectrum(G, dense_cap=dense_cap).eigenvalues[-1]
    mv = _matvec(G)

    def neg_mv(x: np.ndarray) -> np.ndarray:
        return -mv(x)

    # largest eigenvalue of -A is -lambda_min; no deflation needed
    return -_power_iteration(neg_mv, G.n, tol, maxit, deflate_ones=False)


def rayleigh_quotient(G: RegularGraph, x) -> float:
    """<x, Ax> / <x, x> for the normalized adjacency."""
    if G.d == 0:
        raise ZeroDegree("Rayleigh quotient undefined for 0-regular graphs")
    vec = np.asarray(x, dtype=float)
    if vec.shape != (G.n,):
        raise ValueError(f"vector length {vec.shape} does not match n={G.n}")
    denom = float(vec @ vec)
    if denom == 0.0:
        raise ZeroVector("Rayleigh quotient of the zero vector")
    u, v = G.edge_arrays()
    num = 2.0 * float(vec[u] @ vec[v]) / G.d
    return num / denom


@dataclass(frozen=True)
class CheegerResult:
    lower: float
    h: float
    upper: float
    ok: bool


def cheeger_check(G: RegularGraph, tol: float = 1e-9) -> CheegerResult:
    """Exact h(G) against the spectral sandwich d(1-l2)/2 <= h <= d sqrt(2(1-l2))."""
    h, _ = graphs.edge_expansion_exact(G)
    lam2 = lambda2(G)
    gap = max(0.0, 1.0 - lam2)
    lower = G.d * gap / 2.0
    upper = G.d * (2.0 * gap) ** 0.5
    ok = (lower <= h + tol) and (h <= upper + tol)
    return CheegerResult(lower, h, upper, ok)
