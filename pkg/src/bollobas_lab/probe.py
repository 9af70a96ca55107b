"""Adversarial, budgeted estimation of the stability modulus eta(eps, T).

The probe maximizes the value (||Tx|| or |<x*, Tx>|) over inputs that are
certifiably at least eps away from the attaining set, and reports

    eta_hat = 1 - best feasible value

which is an upper bound on the true modulus witnessed by a concrete point.
Feasibility is a hard filter through exact/lower-bound distance oracles, so
reported witnesses are valid by construction.  Absence of good witnesses is
only budget-relative; the report never claims a lower bound beyond that.

Restart batches are keyed by (seed, batch index) and merged by max, so
results are byte-identical for any BOLLOBAS_LAB_THREADS setting.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._search import run_batches, spawn_rngs
from .errors import GeometryError, HeuristicRefusalError, NotNormalizedError
from .norm_attainment import (NormingSetDescriptor, NormResult, norming_set,
                              operator_norm)
from .numerical_radius import (NuResult, NuStatesDescriptor,
                               best_state_functional, nu_attaining_states,
                               numerical_radius)
from .operators import Diagonal, OperatorExpr, Scale, to_matrix
from .spaces import INF, StatePair, SumSpace, pair

NORM_TOL = 1e-6
FEAS_TOL = 1e-12


@dataclass
class ProbeBudget:
    restarts: int = 256
    iters: int = 2000

    def describe(self):
        return {"restarts": self.restarts, "iters": self.iters}


@dataclass
class ProbeReport:
    mode: str
    epsilon: float
    eta_hat: float
    sentinel: bool
    best_value: float
    witness: object = None
    witness_distance: float = float("nan")
    seed: int = 0
    budget: ProbeBudget = field(default_factory=ProbeBudget)

    def csv_row(self, dim: int) -> str:
        def fmt(v):
            if v != v:
                return ""
            if v == float("inf"):
                return "inf"
            return repr(float(v))
        slack = "" if self.sentinel or self.best_value == -float("inf") \
            else fmt(1.0 - self.best_value)
        return ",".join([str(dim), fmt(self.epsilon), fmt(self.eta_hat),
                         slack, fmt(self.witness_distance), str(self.seed)])

    def describe(self) -> dict:
        return {"mode": self.mode, "epsilon": self.epsilon,
                "eta_hat": self.eta_hat, "sentinel": self.sentinel,
                "best_value": self.best_value,
                "witness_distance": self.witness_distance,
                "seed": self.seed, "budget": self.budget.describe()}


CSV_HEADER = "dim,epsilon,eta_hat,slack,distance,seed"


def _resolve_norm(T, norm_result, norming, assume_norm_one):
    nr = norm_result if norm_result is not None else operator_norm(T)
    if not nr.is_certified():
        raise HeuristicRefusalError("probe refused: heuristic norm")
    if not assume_norm_one and abs(nr.value - 1.0) > NORM_TOL:
        raise NotNormalizedError(f"probe needs ||T|| = 1, got {nr.value}")
    desc = norming if norming is not None else norming_set(T, nr)
    return nr, desc


def _random_start(rng, space):
    from .norm_attainment import _random_sum_unit
    return _random_sum_unit(rng, space)


def _pullback(value_of, dist_of, x_hi, x_lo, eps, space, steps: int = 30):
    """Binary search along the normalized segment between a feasible anchor
    x_lo and an infeasible high-value point x_hi; returns the best feasible
    point found."""
    best = None
    lo, hi = 0.0, 1.0
    for _ in range(steps):
        t = (lo + hi) / 2.0
        cand = (1 - t) * x_hi + t * x_lo
        n = space.norm(cand)
        if n == 0:
            lo, hi = t, hi
            continue
        cand = cand / n
        if dist_of(cand) >= eps - FEAS_TOL:
            v = value_of(cand)
            if best is None or v > best[0]:
                best = (v, cand)
            hi = t
        else:
            lo = t
    return best


def _diag_norm_seeds(T, desc, eps):
    """Profile-optimal feasible seeds for diagonal operators: they realize
    the exact truncated modulus, which keeps eta_hat tight and monotone."""
    inner = T
    scale = 1.0
    while isinstance(inner, Scale):
        scale *= abs(inner.scalar)
        inner = inner.child
    if not isinstance(inner, Diagonal):
        return []
    alphas = inner.alphas() * scale
    mods = np.abs(alphas)
    top = mods.max()
    J = mods >= top * (1 - 1e-12)
    if J.all():
        return []
    space = inner.domain
    p = space.p
    off_idx = int(np.argmax(np.where(J, -1.0, mods)))
    j_idx = int(np.argmax(J))
    seeds = []
    if p == INF:
        x = np.zeros(space.dim, dtype=space.dtype)
        x[j_idx] = max(0.0, 1.0 - eps)
        x[off_idx] = 1.0
        seeds.append(x)
    else:
        lo, hi = 0.0, 1.0
        for _ in range(80):
            A = (lo + hi) / 2.0
            d = ((1 - A) ** p + max(0.0, 1 - A ** p)) ** (1.0 / p)
            if d >= eps:
                lo = A
            else:
                hi = A
        A = lo
        x = np.zeros(space.dim, dtype=space.dtype)
        x[j_idx] = A
        x[off_idx] = max(0.0, 1 - A ** p) ** (1.0 / p)
        seeds.append(x)
    return seeds


def _boundary_seeds(space, dist_of, eps, base_points, rng, max_dirs: int = 48):
    """Walk from attaining-set base points toward coordinate directions and
    bisect onto the feasibility boundary dist = eps; these seeds sit exactly
    where the constrained maximum lives."""
    seeds = []
    dirs = []
    d = space.dim
    idx = list(range(d)) if d <= max_dirs else \
        sorted(rng.choice(d, size=max_dirs, replace=False).tolist())
    for k in idx:
        e = np.zeros(d, dtype=space.dtype)
        e[k] = 1.0
        dirs.append(e)
        if not space.is_complex:
            dirs.append(-e)
    for base in base_points:
        base = np.asarray(base, dtype=space.dtype)
        for dvec in dirs:
            if dist_of(dvec) < eps - FEAS_TOL:
                continue
            lo, hi = 0.0, 1.0
            ok = False
            for _ in range(40):
                t = (lo + hi) / 2.0
                cand = (1 - t) * base + t * dvec
                n = space.norm(cand)
                if n == 0:
                    lo = t
                    continue
                cand = cand / n
                if dist_of(cand) >= eps - FEAS_TOL:
                    hi = t
                    ok = True
                else:
                    lo = t
            if ok:
                t = hi
                cand = (1 - t) * base + t * dvec
                cand = cand / space.norm(cand)
                if dist_of(cand) >= eps - FEAS_TOL:
                    seeds.append(cand)
    return seeds


def eta_probe_norm(T: OperatorExpr, eps: float,
                   budget: Optional[ProbeBudget] = None, seed: int = 0,
                   norm_result: Optional[NormResult] = None,
                   norming: Optional[NormingSetDescriptor] = None,
                   extra_seeds=(), assume_norm_one: bool = False) -> ProbeReport:
    budget = budget or ProbeBudget()
    nr, desc = _resolve_norm(T, norm_result, norming, assume_norm_one)
    space = T.domain
    cod = T.codomain
    M = to_matrix(T)

    def value_of(x):
        return cod.norm(M @ x)

    def dist_of(x):
        return desc.distance(x)

    candidates = []   # (value, distance, x)
    max_dist_seen = 0.0

    def consider(x, store=True):
        nonlocal max_dist_seen
        d = dist_of(x)
        max_dist_seen = max(max_dist_seen, d)
        if d >= eps - FEAS_TOL:
            v = value_of(x)
            if store:
                candidates.append((v, d, x))
            return True, d
        return False, d

    for s in _diag_norm_seeds(T, desc, eps):
        consider(s)
    for s in extra_seeds:
        consider(np.asarray(s, dtype=space.dtype))
    seed_rng = np.random.Generator(np.random.PCG64(seed))
    if not desc.is_empty and not isinstance(space, SumSpace):
        try:
            bases = desc.sample(seed_rng, 2)
        except Exception:
            bases = []
        for s in _boundary_seeds(space, dist_of, eps, bases, seed_rng):
            consider(s)

    n_batches = max(1, budget.restarts // 16)
    rngs = spawn_rngs(seed, n_batches)
    iters = max(10, budget.iters // 100)

    def worker(b):
        rng = rngs[b]
        best = None
        local_max_dist = 0.0
        anchor = None
        for _ in range(min(16, budget.restarts)):
            x = _random_start(rng, space)
            feas, d = consider(x, store=False)
            local_max_dist = max(local_max_dist, d)
            if feas:
                v = value_of(x)
                if best is None or v > best[0]:
                    best = (v, d, x)
                anchor = x
            # ascent toward the unconstrained maximum, tracking feasibility
            from ._search import generic_power_ascent
            for _ in range(iters):
                _v, xn = generic_power_ascent(M, space, cod, x, iters=3)
                if np.allclose(xn, x):
                    break
                x = xn
                feas, d = consider(x, store=False)
                local_max_dist = max(local_max_dist, d)
                if feas:
                    v = value_of(x)
                    if best is None or v > best[0]:
                        best = (v, d, x)
                    anchor = x
                elif anchor is not None:
                    pb = _pullback(value_of, dist_of, x, anchor, eps, space)
                    if pb is not None and (best is None or pb[0] > best[0]):
                        best = (pb[0], dist_of(pb[1]), pb[1])
                    break
        return best, local_max_dist

    results = run_batches(worker, n_batches)
    for best, local_max in results:
        max_dist_seen = max(max_dist_seen, local_max)
        if best is not None:
            candidates.append(best)

    return _finalize("norm", eps, candidates, max_dist_seen, seed, budget)


def _finalize(mode, eps, candidates, max_dist_seen, seed, budget):
    if not candidates:
        sentinel = max_dist_seen < eps - FEAS_TOL
        return ProbeReport(mode=mode, epsilon=eps, eta_hat=float("inf"),
                           sentinel=sentinel, best_value=-float("inf"),
                           witness=None, seed=seed, budget=budget)
    vbest, dbest, xbest = max(candidates, key=lambda c: c[0])
    return ProbeReport(mode=mode, epsilon=eps,
                       eta_hat=max(0.0, 1.0 - vbest), sentinel=False,
                       best_value=vbest, witness=xbest,
                       witness_distance=dbest, seed=seed, budget=budget)


# ---------------------------------------------------------------------------
# numerical-radius probe
# ---------------------------------------------------------------------------

def aligned_state_functional(x, y, space):
    """x* supporting x with <x*, y> realizing face_sup(y, x, space); exact for
    flat spaces and two-block sums of flat blocks."""
    if not isinstance(space, SumSpace):
        _v, xs = best_state_functional(y, x, space)
        return xs
    blocks_x = space.split(x)
    blocks_y = space.split(y)
    norms = np.array([c.norm(b) for c, b in zip(space.components, blocks_x)])
    op = space.outer_p
    if op == INF:
        best, best_i, best_xs = -1.0, None, None
        for i, (c, bx, by, a) in enumerate(zip(space.components, blocks_x,
                                               blocks_y, norms)):
            if abs(a - 1.0) <= 1e-9:
                v, xs = best_state_functional(by, bx, c)
                if v > best:
                    best, best_i, best_xs = v, i, xs
        out = [np.zeros(c.dim, dtype=space.dtype) for c in space.components]
        if best_i is not None:
            out[best_i] = best_xs
        return space.join(out)
    weights = np.ones_like(norms) if op == 1 else norms ** (op - 1.0)
    # fixed centers first, then align free blocks to the total's phase
    parts, centers = [], []
    for c, bx, by, a, w in zip(space.components, blocks_x, blocks_y,
                               norms, weights):
        if a == 0:
            parts.append(None)
            centers.append(0j)
        else:
            v, xs = best_state_functional(by, bx / a, c)
            xs = w * xs
            parts.append(xs)
            centers.append(complex((xs * by).sum()))
    total = sum(centers)
    psi = total / abs(total) if total != 0 else 1.0
    out = []
    for c, by, a, prt in zip(space.components, blocks_y, norms, parts):
        if prt is not None:
            out.append(prt)
        elif op == 1 and c.norm(by) > 0:
            from ._search import dual_align_vec
            out.append(psi * dual_align_vec(by, c))
        else:
            out.append(np.zeros(c.dim, dtype=space.dtype))
    return space.join(out)


def _resolve_nu(T, nu_result, attaining):
    nr = nu_result if nu_result is not None else numerical_radius(T)
    if not nr.is_certified():
        raise HeuristicRefusalError("probe refused: heuristic radius")
    if abs(nr.value - 1.0) > NORM_TOL:
        raise NotNormalizedError(f"probe needs nu(T) = 1, got {nr.value}")
    desc = attaining if attaining is not None else nu_attaining_states(T, nr)
    return nr, desc


def eta_probe_nu(T: OperatorExpr, eps: float,
                 budget: Optional[ProbeBudget] = None, seed: int = 0,
                 nu_result: Optional[NuResult] = None,
                 attaining: Optional[NuStatesDescriptor] = None,
                 extra_seeds=()) -> ProbeReport:
    """extra_seeds: iterable of (x, xstar) pairs or bare x vectors."""
    budget = budget or ProbeBudget()
    nr, desc = _resolve_nu(T, nu_result, attaining)
    space = T.domain
    M = to_matrix(T)

    def pair_value(x, xs):
        return abs(pair(xs, M @ x))

    def state_for(x):
        return aligned_state_functional(x, M @ x, space)

    candidates = []
    max_dist_seen = 0.0

    def consider_pair(x, xs):
        nonlocal max_dist_seen
        dx, dxs = desc.pair_distance(x, xs)
        d = max(dx, dxs)
        max_dist_seen = max(max_dist_seen, d)
        if d >= eps - FEAS_TOL:
            v = pair_value(x, xs)
            candidates.append((v, d, StatePair(x, xs, space)))
            return True
        return False

    for s in extra_seeds:
        if isinstance(s, StatePair):
            consider_pair(s.x, s.xstar)
        elif isinstance(s, tuple) and len(s) == 2:
            consider_pair(np.asarray(s[0]), np.asarray(s[1]))
        else:
            x = np.asarray(s)
            consider_pair(x, state_for(x))
    for s in _diag_nu_seeds(T, eps):
        consider_pair(*s)
    seed_rng = np.random.Generator(np.random.PCG64(seed))
    if not desc.is_empty and not isinstance(space, SumSpace):
        def dist_of_state(x):
            dx, dxs = desc.pair_distance(x, state_for(x))
            return max(dx, dxs)
        try:
            bases = [sp.x for sp in desc.sample(seed_rng, 2)]
        except Exception:
            bases = []
        for s in _boundary_seeds(space, dist_of_state, eps, bases, seed_rng):
            consider_pair(s, state_for(s))

    n_batches = max(1, budget.restarts // 16)
    rngs = spawn_rngs(seed, n_batches)
    iters = max(10, budget.iters // 100)

    def worker(b):
        rng = rngs[b]
        found = []
        local_max = 0.0
        for _ in range(min(16, budget.restarts)):
            x = _random_start(rng, space)
            step = 0.4
            xs = state_for(x)
            val = pair_value(x, xs)
            for _ in range(iters):
                moved = False
                for _ in range(3):
                    dvec = rng.normal(size=space.dim) + \
                        (1j * rng.normal(size=space.dim)
                         if space.is_complex else 0.0)
                    cand = x + step * dvec
                    n = space.norm(cand)
                    if n == 0:
                        continue
                    cand = cand / n
                    cs = state_for(cand)
                    cv = pair_value(cand, cs)
                    if cv > val + 1e-14:
                        x, xs, val, moved = cand, cs, cv, True
                if not moved:
                    step *= 0.5
                    if step < 1e-7:
                        break
            dx, dxs = desc.pair_distance(x, xs)
            d = max(dx, dxs)
            local_max = max(local_max, d)
            if d >= eps - FEAS_TOL:
                found.append((val, d, StatePair(x, xs, space)))
        return found, local_max

    results = run_batches(worker, n_batches)
    for found, local_max in results:
        max_dist_seen = max(max_dist_seen, local_max)
        candidates.extend(found)

    return _finalize("nu", eps, candidates, max_dist_seen, seed, budget)


def _diag_nu_seeds(T, eps):
    """Profile-optimal feasible state seeds for diagonal operators."""
    inner = T
    scale = 1.0
    while isinstance(inner, Scale):
        scale *= abs(inner.scalar)
        inner = inner.child
    if not isinstance(inner, Diagonal):
        return []
    alphas = inner.alphas() * scale
    mods = np.abs(alphas)
    top = mods.max()
    J = mods >= top * (1 - 1e-12)
    if J.all():
        return []
    space = inner.domain
    p = space.p
    off_idx = int(np.argmax(np.where(J, -1.0, mods)))
    j_idx = int(np.argmax(J))
    from .membership import _group_cap
    m = _group_cap(p, eps)
    seeds = []
    x = np.zeros(space.dim, dtype=space.dtype)
    xs = np.zeros(space.dim, dtype=space.dtype)
    if p == INF:
        x[j_idx] = 1.0
        x[off_idx] = 1.0
        xs[j_idx] = m
        xs[off_idx] = 1.0 - m
    elif p == 1:
        x[j_idx] = m
        x[off_idx] = 1.0 - m
        xs[j_idx] = 1.0
        xs[off_idx] = 1.0
    else:
        q = p / (p - 1.0)
        x[j_idx] = m ** (1.0 / p)
        x[off_idx] = (1.0 - m) ** (1.0 / p)
        xs[j_idx] = m ** (1.0 / q)
        xs[off_idx] = (1.0 - m) ** (1.0 / q)
    seeds.append((x, xs))
    return seeds


# ---------------------------------------------------------------------------
# validation of closed-form eta candidates
# ---------------------------------------------------------------------------

@dataclass
class ValidationRow:
    epsilon: float
    eta_value: float
    found_value: float
    found_distance: float
    sentinel: bool
    violated: bool


@dataclass
class ValidationReport:
    mode: str
    rows: list
    passed: bool
    violating_witness: object = None

    def describe(self) -> dict:
        return {"mode": self.mode, "passed": self.passed,
                "rows": [{"epsilon": r.epsilon, "eta": r.eta_value,
                          "found_value": r.found_value,
                          "found_distance": r.found_distance,
                          "sentinel": r.sentinel, "violated": r.violated}
                         for r in self.rows]}


def validate_eta(T: OperatorExpr, eta_fn, eps_grid, mode: str = "norm",
                 budget: Optional[ProbeBudget] = None, seed: int = 0,
                 tol: float = 1e-9, **probe_kwargs) -> ValidationReport:
    """Assert adversarially that no input beats the candidate modulus: for
    each eps, the probe must find no point with value > 1 - eta_fn(eps) at
    distance >= eps.  A found violator fails the report (and is itself
    re-validated against the independent value oracle)."""
    rows = []
    witness = None
    for eps in eps_grid:
        if mode == "norm":
            rep = eta_probe_norm(T, eps, budget=budget, seed=seed,
                                 **probe_kwargs)
        elif mode == "nu":
            rep = eta_probe_nu(T, eps, budget=budget, seed=seed,
                               **probe_kwargs)
        else:
            raise GeometryError("mode must be 'norm' or 'nu'")
        level = float(eta_fn(eps))
        violated = (not rep.sentinel) and \
            rep.best_value > 1.0 - level + tol
        if violated and witness is None:
            witness = rep.witness
        rows.append(ValidationRow(eps, level, rep.best_value,
                                  rep.witness_distance, rep.sentinel,
                                  violated))
    return ValidationReport(mode=mode, rows=rows,
                            passed=not any(r.violated for r in rows),
                            violating_witness=witness)
