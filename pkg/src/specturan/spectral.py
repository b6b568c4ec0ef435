"""Adjacency spectra: the two largest eigenvalues and the Perron vector.

Two paths share one contract.  Up to DENSE_CAP vertices each component is
solved by a dense symmetric eigensolver (machine precision, so equality
checks at 1e-8 never argue with the solver).  Above the cap a shifted power
iteration handles the large sparse shapes that arise from split graphs; the
shift by +1 keeps bipartite components from oscillating.

Disconnected graphs are solved per component.  The reported Perron vector
is supported on a component achieving the spectral radius (ties broken by
lowest component index) and is exactly zero elsewhere; lambda2 is the
second largest eigenvalue of the whole graph, with multiplicity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix

from .graph_core import Graph, GraphError, _bits

__all__ = [
    "SpectralResult",
    "spectral_radius",
    "rayleigh",
    "two_level_vector",
    "DENSE_CAP",
    "DEFAULT_TOL",
]

DENSE_CAP = 128
DEFAULT_TOL = 1e-10
MAX_ITER = 1_000_000


@dataclass(frozen=True)
class SpectralResult:
    lambda1: float
    lambda2: float
    perron: np.ndarray  # unit, nonnegative, zero off the winning component
    residual: float     # max-norm of A x - lambda1 x
    method: str         # "dense-exact" | "iterative"


def _dense_component(g: Graph, verts: list[int]):
    """Full spectrum and Perron vector of one connected component."""
    k = len(verts)
    pos = {v: i for i, v in enumerate(verts)}
    a = np.zeros((k, k))
    for v in verts:
        for u in _bits(g.adj[v]):
            a[pos[v], pos[u]] = 1.0
    w, vecs = np.linalg.eigh(a)
    vec = vecs[:, -1]
    if vec.sum() < 0:
        vec = -vec
    vec = np.maximum(vec, 0.0)
    vec /= np.linalg.norm(vec)
    return list(w), float(w[-1]), vec


def _component_csr(g: Graph, verts: list[int]):
    pos = {v: i for i, v in enumerate(verts)}
    rows, cols = [], []
    for v in verts:
        for u in _bits(g.adj[v]):
            rows.append(pos[v])
            cols.append(pos[u])
    k = len(verts)
    data = np.ones(len(rows))
    return csr_matrix((data, (rows, cols)), shape=(k, k))


def _power_lambda1(a, tol: float):
    """Largest eigenvalue and eigenvector of a connected component.

    Iterates (A + I) x from the degree vector; deterministic for a fixed
    input.  Stops at the requested residual, at the float64 floor (no
    improvement across a window), or at the iteration cap; the achieved
    residual is always reported back.  Returns (lambda, vector, residual,
    iterations).
    """
    degs = np.asarray(a.sum(axis=1)).ravel()
    x = degs / np.linalg.norm(degs)
    best_res = math.inf
    best = (0.0, x)
    stall = 0
    for it in range(1, MAX_ITER + 1):
        y = a @ x
        lam = float(x @ y)
        res = float(np.max(np.abs(y - lam * x)))
        if res < best_res:
            best_res, best, stall = res, (lam, x), 0
        else:
            stall += 1
        if res <= tol or stall >= 200:
            break
        # shift by the current estimate + 1: keeps the iteration matrix
        # positive definite even when lambda_min is close to -lambda_1
        z = y + (max(lam, 0.0) + 1.0) * x
        x = z / np.linalg.norm(z)
    lam, x = best
    x = np.maximum(x, 0.0)
    x /= np.linalg.norm(x)
    return lam, x, best_res, it


def _power_lambda2(a, perron: np.ndarray, lam1: float, tol: float,
                   cap: int = 1500):
    """Second largest (signed) eigenvalue via deflated shifted iteration.

    Iterates (A + lam1 I) on the complement of the Perron direction, which
    keeps the signed order of eigenvalues.  Best effort with a modest
    iteration cap: convergence slows when the second and third eigenvalues
    nearly tie, and no caller needs tight lambda2 above the dense cap.
    """
    n = len(perron)
    x = np.arange(1.0, n + 1.0)
    x -= (perron @ x) * perron
    nx = np.linalg.norm(x)
    if nx < 1e-12:
        return -lam1
    x /= nx
    lam2 = 0.0
    target = max(tol, 1e-11)
    for _ in range(cap):
        y = a @ x
        lam2 = float(x @ y)
        r = y - (perron @ y) * perron - lam2 * x
        if float(np.max(np.abs(r))) <= target:
            break
        z = y + lam1 * x
        z -= (perron @ z) * perron
        nz = np.linalg.norm(z)
        if nz < 1e-14:
            break
        x = z / nz
    return lam2


def spectral_radius(g: Graph, tol: float = DEFAULT_TOL,
                    method: str | None = None) -> SpectralResult:
    """Largest two adjacency eigenvalues and the unit Perron vector.

    ``method`` forces "dense-exact" or "iterative"; by default components
    up to DENSE_CAP vertices use the dense path.
    """
    if tol <= 0:
        raise GraphError(f"tolerance must be positive, got {tol}")
    if g.n == 0:
        raise GraphError("spectral radius of the empty (0-vertex) graph is undefined")
    if g.m == 0:
        p = np.full(g.n, 1.0 / math.sqrt(g.n))
        return SpectralResult(0.0, 0.0, p, 0.0, "dense-exact")

    comps = [list(_bits(mask)) for mask in g.components()]
    use_dense = method != "iterative" and (
        method == "dense-exact" or all(len(c) <= DENSE_CAP for c in comps)
    )

    best = None  # (lam1, -index, verts, vec)
    if use_dense:
        eigs: list[float] = []
        for idx, verts in enumerate(comps):
            if len(verts) == 1:
                eigs.append(0.0)
                cand = (0.0, -idx, verts, np.array([1.0]))
            else:
                w, lam, vec = _dense_component(g, verts)
                eigs.extend(w)
                cand = (lam, -idx, verts, vec)
            if best is None or (cand[0], cand[1]) > (best[0], best[1]):
                best = cand
        eigs.sort(reverse=True)
        lam1 = eigs[0]
        lam2 = eigs[1] if len(eigs) > 1 else 0.0
        tag = "dense-exact"
    else:
        per_comp = []  # (lam1, lam2_or_None, verts, vec, csr_or_None)
        for verts in comps:
            if len(verts) == 1:
                per_comp.append((0.0, None, verts, np.array([1.0]), None))
            elif len(verts) <= DENSE_CAP and method != "iterative":
                w, lam, vec = _dense_component(g, verts)
                l2 = float(w[-2]) if len(w) > 1 else None
                per_comp.append((lam, l2, verts, vec, None))
            else:
                a = _component_csr(g, verts)
                lam, vec, _res, _it = _power_lambda1(a, tol)
                per_comp.append((lam, None, verts, vec, a))
        widx = 0
        for i in range(1, len(per_comp)):
            if per_comp[i][0] > per_comp[widx][0]:
                widx = i
        lam1, w_l2, verts, vec, a = per_comp[widx]
        if w_l2 is None and len(verts) > 1:
            if a is None:
                a = _component_csr(g, verts)
            w_l2 = _power_lambda2(a, vec, lam1, tol)
        others = [pc[0] for i, pc in enumerate(per_comp) if i != widx]
        cands = [x for x in (w_l2, max(others) if others else None) if x is not None]
        lam2 = max(cands) if cands else 0.0
        best = (lam1, -widx, verts, vec)
        tag = "iterative"

    lam1, _, verts, vec = best
    perron = np.zeros(g.n)
    perron[verts] = vec
    nrm = np.linalg.norm(perron)
    if abs(nrm - 1.0) > 1e-13:
        perron /= nrm
    residual = 0.0
    for v in range(g.n):
        s = 0.0
        for u in _bits(g.adj[v]):
            s += perron[u]
        residual = max(residual, abs(s - lam1 * perron[v]))
    return SpectralResult(float(lam1), float(lam2), perron, float(residual), tag)


def rayleigh(g: Graph, x) -> float:
    """Quadratic form 2 * sum_{uv in E} x_u x_v for a unit vector x.

    Equals the spectral radius when x is the Perron vector; a lower bound
    for any other unit vector.
    """
    x = np.asarray(x, dtype=float)
    if len(x) != g.n:
        raise GraphError(f"vector length {len(x)} != order {g.n}")
    if abs(float(np.linalg.norm(x)) - 1.0) > 1e-9:
        raise GraphError("rayleigh requires a unit vector")
    total = 0.0
    for u, v in g.edges():
        total += x[u] * x[v]
    return 2.0 * total


def two_level_vector(a_verts, c_verts, n: int | None = None) -> np.ndarray:
    """Unit vector with value 1/sqrt(2|A|) on A and 1/sqrt(2|C|) on C."""
    a_verts = sorted(a_verts)
    c_verts = sorted(c_verts)
    if not a_verts or not c_verts:
        raise GraphError("two_level_vector requires nonempty parts")
    if set(a_verts) & set(c_verts):
        raise GraphError("two_level_vector parts must be disjoint")
    if n is None:
        n = max(a_verts + c_verts) + 1
    x = np.zeros(n)
    x[a_verts] = 1.0 / math.sqrt(2 * len(a_verts))
    x[c_verts] = 1.0 / math.sqrt(2 * len(c_verts))
    return x
