"""Deterministic multistart machinery shared by norms, radii, and probes.

Work items are keyed by (seed, index) through numpy SeedSequence spawning, and
results are merged by an associative max, so outcomes are identical for any
thread count or schedule.  The thread cap comes from BOLLOBAS_LAB_THREADS.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .spaces import INF, unit_phase


def thread_count() -> int:
    raw = os.environ.get("BOLLOBAS_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_batches(worker, n_batches: int):
    """worker(batch_index) -> result; merged in batch order regardless of the
    execution schedule."""
    threads = thread_count()
    if threads == 1 or n_batches == 1:
        return [worker(i) for i in range(n_batches)]
    with ThreadPoolExecutor(max_workers=min(threads, n_batches)) as pool:
        return list(pool.map(worker, range(n_batches)))


def spawn_rngs(seed: int, count: int):
    return [np.random.Generator(np.random.PCG64(s))
            for s in np.random.SeedSequence(seed).spawn(count)]


def random_unit_rows(rng, count, dim, p, complex_field) -> np.ndarray:
    if complex_field:
        X = rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim))
    else:
        X = rng.normal(size=(count, dim))
    return normalize_rows(X, p)


def row_norms(X: np.ndarray, p: float) -> np.ndarray:
    A = np.abs(X)
    if p == INF:
        return A.max(axis=1)
    if p == 1:
        return A.sum(axis=1)
    if p == 2:
        return np.sqrt((A * A).sum(axis=1))
    m = A.max(axis=1)
    m[m == 0] = 1.0
    return m * ((A / m[:, None]) ** p).sum(axis=1) ** (1.0 / p)


def normalize_rows(X: np.ndarray, p: float) -> np.ndarray:
    n = row_norms(X, p)
    n[n == 0] = 1.0
    return X / n[:, None]


def dual_align_rows(Y: np.ndarray, q: float) -> np.ndarray:
    """Rows u with ||u||_q' = 1 and <u, y> = ||y||_q (bilinear pairing)."""
    A = np.abs(Y)
    ph = np.conj(unit_phase(Y))
    if q == 1:
        return ph
    if q == INF:
        U = np.zeros_like(Y)
        idx = A.argmax(axis=1)
        rows = np.arange(Y.shape[0])
        U[rows, idx] = ph[rows, idx]
        return U
    n = row_norms(Y, q)
    n[n == 0] = 1.0
    return ph * (A / n[:, None]) ** (q - 1.0)


def primal_align_rows(W: np.ndarray, p: float) -> np.ndarray:
    """Rows x with ||x||_p = 1 maximizing Re <w, x> for each row w."""
    A = np.abs(W)
    ph = np.conj(unit_phase(W))
    if p == INF:
        X = ph.copy()
        X[A == 0] = 1.0
        return X
    if p == 1:
        X = np.zeros_like(W)
        idx = A.argmax(axis=1)
        rows = np.arange(W.shape[0])
        X[rows, idx] = ph[rows, idx]
        return X
    q = p / (p - 1.0)
    return normalize_rows(ph * A ** (q - 1.0), p)


def boyd_ascent(M: np.ndarray, p: float, q: float, X0: np.ndarray,
                iters: int = 300, tol: float = 1e-12):
    """Nonlinear power iteration for ||M||_{lp -> lq}, batched over rows of X0.

    Returns (best_value, best_x).  Monotone per restart; the merge takes the
    best row, ties broken by the lowest row index.
    """
    X = normalize_rows(X0.astype(complex if np.iscomplexobj(M) or
                                 np.iscomplexobj(X0) else float), p)
    vals = row_norms(X @ M.T, q)
    for _ in range(iters):
        Y = X @ M.T
        U = dual_align_rows(Y, q)
        W = U @ M
        Xn = primal_align_rows(W, p)
        new_vals = row_norms(Xn @ M.T, q)
        improved = new_vals > vals + tol
        if not improved.any():
            X, vals = Xn, np.maximum(new_vals, vals)
            break
        X = np.where(improved[:, None], Xn, X)
        vals = np.maximum(new_vals, vals)
    k = int(vals.argmax())
    return float(vals[k]), X[k]


def dual_align_vec(y: np.ndarray, space) -> np.ndarray:
    """u with ||u||_{dual} = 1 and <u, y> = ||y|| for a Space or SumSpace."""
    from .spaces import SumSpace
    if isinstance(space, SumSpace):
        blocks = space.split(y)
        profile = np.array([c.norm(b) for c, b in zip(space.components, blocks)])
        w = dual_align_rows(profile[None, :].astype(float), space.outer_p)[0]
        out = []
        for c, b, wi in zip(space.components, blocks, w):
            if c.norm(b) == 0 or wi == 0:
                out.append(np.zeros(c.dim, dtype=c.dtype))
            else:
                out.append(wi.real * dual_align_vec(b, c))
        return space.join(out)
    return dual_align_rows(y[None, :], space.p)[0]


def primal_align_vec(w: np.ndarray, space) -> np.ndarray:
    """Unit x maximizing Re <w, x> for a Space or SumSpace."""
    from .spaces import SumSpace
    if isinstance(space, SumSpace):
        blocks = space.split(w)
        aligned = [primal_align_vec(b, c)
                   for c, b in zip(space.components, blocks)]
        gains = np.array([max(np.real((b * a).sum()), 0.0)
                          for b, a in zip(blocks, aligned)])
        t = primal_align_rows(gains[None, :].astype(float), space.outer_p)[0]
        return space.join([ti.real * a for ti, a in zip(t, aligned)])
    return primal_align_rows(w[None, :], space.p)[0]


def generic_power_ascent(M: np.ndarray, dom, cod, x0: np.ndarray,
                         iters: int = 300, tol: float = 1e-13):
    """Monotone norm ascent x <- argmax Re <M^T dual_align(Mx), .> for
    arbitrary Space/SumSpace geometries.  Returns (value, x)."""
    n = dom.norm(x0)
    x = x0 / (n if n > 0 else 1.0)
    val = cod.norm(M @ x)
    for _ in range(iters):
        y = M @ x
        u = dual_align_vec(y, cod)
        w = u @ M
        xn = primal_align_vec(w, dom)
        vn = cod.norm(M @ xn)
        if vn <= val + tol:
            if vn > val:
                x, val = xn, vn
            break
        x, val = xn, vn
    return float(val), x


def golden_max(f, lo: float, hi: float, tol: float = 1e-12, iters: int = 200):
    """Golden-section maximization of a unimodal scalar function."""
    invphi = (np.sqrt(5.0) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if b - a < tol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    xm = (a + b) / 2
    return xm, f(xm)
