"""Operator norms with structure-aware exactness, norming-point descriptors,
and distance-to-norming-set oracles.

Certainty labels are load-bearing: downstream consumers (probes, membership
falsification) refuse to build certified objects out of heuristic values.

exact       -- closed form or structural reduction; trusted to round-off.
enumerated  -- finite extreme-point enumeration (plus local phase polish in
               the complex sup-norm case); trusted at the documented budget.
heuristic   -- multistart ascent; a certified lower bound only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._search import (boyd_ascent, generic_power_ascent, golden_max,
                      primal_align_rows, random_unit_rows, run_batches,
                      spawn_rngs)
from .errors import GeometryError, HeuristicRefusalError
from .operators import (Adjoint, Delift, Dense, Diagonal, DirectSum, Lift,
                        OperatorExpr, RankOne, Scale, to_matrix)
from .spaces import INF, Space, SumSpace, lp_norm, unit_phase

SIGN_ENUM_MAX_DIM = 20
PHASE_GRID = 64
PHASE_ENUM_MAX_DIM = 4


@dataclass
class NormResult:
    value: float
    certainty: str                      # exact | enumerated | heuristic
    witness: Optional[np.ndarray] = None
    method: str = ""

    @property
    def lower_bound(self) -> float:
        return self.value

    def is_certified(self) -> bool:
        return self.certainty in ("exact", "enumerated")

    def describe(self) -> dict:
        return {"value": self.value, "certainty": self.certainty,
                "method": self.method,
                "witness": None if self.witness is None else
                [float(np.real(w)) if np.imag(w) == 0 else
                 [float(np.real(w)), float(np.imag(w))] for w in self.witness]}


# ---------------------------------------------------------------------------
# operator norm
# ---------------------------------------------------------------------------

def operator_norm(T: OperatorExpr, restarts: int = 64, iters: int = 400,
                  seed: int = 0) -> NormResult:
    if isinstance(T, Scale):
        inner = operator_norm(T.child, restarts, iters, seed)
        return NormResult(abs(T.scalar) * inner.value, inner.certainty,
                          inner.witness, f"scale*{inner.method}")
    if isinstance(T, Diagonal):
        alphas = T.alphas()
        mods = np.abs(alphas)
        k = int(mods.argmax())
        w = np.zeros(T.domain.dim, dtype=T.domain.dtype)
        w[k] = 1.0
        return NormResult(float(mods[k]), "exact", w, "diagonal-sup")
    if isinstance(T, Lift):
        inner = operator_norm(T.child, restarts, iters, seed)
        wit = None
        if inner.witness is not None:
            s = T.sum_space
            wit = s.join([inner.witness,
                          np.zeros(s.components[1].dim, dtype=s.dtype)])
        return NormResult(inner.value, inner.certainty, wit, "lift")
    if isinstance(T, DirectSum):
        parts = [operator_norm(c, restarts, iters, seed) for c in T.children]
        k = int(np.argmax([p.value for p in parts]))
        cert = "exact" if all(p.is_certified() for p in parts) else "heuristic"
        cert = parts[k].certainty if cert == "exact" else "heuristic"
        wit = None
        if parts[k].witness is not None:
            blocks = [np.zeros(c.domain.dim, dtype=T.domain.dtype)
                      for c in T.children]
            blocks[k] = parts[k].witness
            wit = T.domain.join(blocks)
        return NormResult(parts[k].value, cert, wit, "direct-sum-max")
    if isinstance(T, RankOne):
        ncod = T.codomain.norm(T.y)
        f_norm = T.domain.dual().norm(T.xstar)
        wit = primal_align_rows(T.xstar[None, :], T.domain.p)[0] \
            if f_norm > 0 else None
        return NormResult(ncod * f_norm, "exact", wit, "rank-one")
    if isinstance(T, (Adjoint, Delift)):
        M = to_matrix(T)
        return _dense_norm(M, T.domain, T.codomain, restarts, iters, seed)
    if isinstance(T, Dense):
        return _dense_norm(T.matrix, T.domain, T.codomain, restarts, iters, seed)
    raise TypeError(f"unknown operator node {type(T).__name__}")


def _col_norm(M, cod):
    return np.array([cod.norm(M[:, j]) for j in range(M.shape[1])])


def _dense_norm(M, dom, cod, restarts, iters, seed) -> NormResult:
    if isinstance(dom, SumSpace) or isinstance(cod, SumSpace):
        return _sum_space_norm(M, dom, cod, restarts, iters, seed)
    if cod.dim == 1:
        f = M[0]
        val = dom.dual().norm(f)
        wit = primal_align_rows(f[None, :], dom.p)[0] if val > 0 else None
        return NormResult(float(val), "exact", wit, "functional-dual-norm")
    if dom.p == 1:
        cols = _col_norm(M, cod)
        j = int(cols.argmax())
        w = np.zeros(dom.dim, dtype=dom.dtype)
        w[j] = 1.0
        return NormResult(float(cols[j]), "exact", w, "l1-max-column")
    if cod.p == INF:
        rows = np.array([dom.dual().norm(M[i]) for i in range(M.shape[0])])
        i = int(rows.argmax())
        wit = primal_align_rows(M[i][None, :], dom.p)[0] if rows[i] > 0 else None
        return NormResult(float(rows[i]), "exact", wit, "sup-max-row")
    if dom.p == 2 and cod.p == 2:
        U, S, Vh = np.linalg.svd(M)
        wit = np.conj(Vh[0])
        return NormResult(float(S[0]), "exact", wit.astype(dom.dtype), "svd")
    if dom.p == INF and not dom.is_complex and dom.dim <= SIGN_ENUM_MAX_DIM:
        val, wit = _sign_enumerate(M, dom, cod)
        return NormResult(val, "enumerated", wit, "sign-enumeration")
    if dom.p == INF and dom.is_complex and dom.dim <= PHASE_ENUM_MAX_DIM:
        val, wit = _phase_enumerate(M, dom, cod)
        return NormResult(val, "enumerated", wit, "phase-grid-refined")
    val, wit = _multistart_norm(M, dom, cod, restarts, iters, seed)
    return NormResult(val, "heuristic", wit, "boyd-multistart")


def _sign_enumerate(M, dom, cod):
    d = dom.dim
    best_val, best_sign = -1.0, None
    chunk = 1 << min(d, 14)
    total = 1 << d
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        signs = (((idx[:, None] >> np.arange(d)) & 1) * 2.0 - 1.0)
        vals = _batch_cod_norms(signs @ M.T, cod)
        k = int(vals.argmax())
        if vals[k] > best_val:
            best_val, best_sign = float(vals[k]), signs[k]
    return best_val, best_sign


def _batch_cod_norms(Y, cod):
    A = np.abs(Y)
    if cod.p == INF:
        return A.max(axis=1)
    if cod.p == 1:
        return A.sum(axis=1)
    if cod.p == 2:
        return np.sqrt((A * A).sum(axis=1))
    return (A ** cod.p).sum(axis=1) ** (1.0 / cod.p)


def _phase_enumerate(M, dom, cod):
    # global phase freedom pins the first coordinate to 1
    d = dom.dim
    thetas = np.linspace(0.0, 2 * np.pi, PHASE_GRID, endpoint=False)
    grids = np.meshgrid(*([thetas] * (d - 1)), indexing="ij")
    X = np.ones((grids[0].size if d > 1 else 1, d), dtype=complex)
    for j, g in enumerate(grids):
        X[:, j + 1] = np.exp(1j * g.ravel())
    vals = _batch_cod_norms(X @ M.T, cod)
    x = X[int(vals.argmax())].copy()

    def polish(x):
        for _ in range(60):
            changed = False
            for j in range(1, d):
                def f(t):
                    xt = x.copy()
                    xt[j] = np.exp(1j * t)
                    return cod.norm(M @ xt)
                t0 = float(np.angle(x[j]))
                tbest, fbest = golden_max(f, t0 - 0.2, t0 + 0.2, tol=1e-12)
                if fbest > cod.norm(M @ x) + 1e-15:
                    x[j] = np.exp(1j * tbest)
                    changed = True
            if not changed:
                break
        return x

    x = polish(x)
    return float(cod.norm(M @ x)), x


def _multistart_norm(M, dom, cod, restarts, iters, seed):
    rngs = spawn_rngs(seed, max(1, restarts // 16))

    def worker(i):
        X0 = random_unit_rows(rngs[i], 16, dom.dim, dom.p, dom.is_complex)
        return boyd_ascent(M, dom.p, cod.p, X0, iters=iters)

    results = run_batches(worker, len(rngs))
    k = int(np.argmax([r[0] for r in results]))
    return float(results[k][0]), results[k][1]


def _sum_space_norm(M, dom, cod, restarts, iters, seed):
    rngs = spawn_rngs(seed, max(1, restarts // 8))

    def worker(i):
        best_v, best_x = -1.0, None
        for _ in range(8):
            x0 = _random_sum_unit(rngs[i], dom)
            v, x = generic_power_ascent(M, dom, cod, x0, iters=iters)
            if v > best_v:
                best_v, best_x = v, x
        return best_v, best_x

    results = run_batches(worker, len(rngs))
    k = int(np.argmax([r[0] for r in results]))
    return NormResult(float(results[k][0]), "heuristic", results[k][1],
                      "sum-space-multistart")


def _random_sum_unit(rng, space):
    if isinstance(space, SumSpace):
        blocks = [_random_sum_unit(rng, c) for c in space.components]
        profile = rng.uniform(0.2, 1.0, len(blocks))
        profile /= lp_norm(profile, space.outer_p)
        return space.join([p * b for p, b in zip(profile, blocks)])
    v = rng.normal(size=space.dim) + (1j * rng.normal(size=space.dim)
                                      if space.is_complex else 0.0)
    return (v / space.norm(v)).astype(space.dtype)


# ---------------------------------------------------------------------------
# norming sets
# ---------------------------------------------------------------------------

@dataclass
class NormingSetDescriptor:
    """A machine-checkable description of {x unit : ||Tx|| = ||T||}.

    kinds:
      support_constrained -- unit vectors supported on J (lp domains, p < inf)
      coordinate_unimodular -- unit sup-norm vectors with |x(n)| = 1 for some
                               n in J
      explicit_list       -- finitely many points, optionally modulo a global
                             phase, optionally with free coordinates that
                             members may fill with any unit-ball value
      subspace            -- the unit sphere of a linear subspace (Hilbert)
      empty               -- no norming points
    """

    kind: str
    space: object = None
    J: Optional[tuple] = None
    points: tuple = ()
    phase_orbit: bool = False
    free_mask: Optional[np.ndarray] = None
    basis: Optional[np.ndarray] = None          # columns orthonormal
    note: str = ""

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"

    # -- exact distances ----------------------------------------------------

    def distance(self, x: np.ndarray) -> float:
        if self.kind == "empty":
            return float("inf")
        if self.kind == "support_constrained":
            return support_distance(x, self.J, self.space)
        if self.kind == "coordinate_unimodular":
            mods = np.abs(np.asarray(x)[list(self.J)])
            return float(max(0.0, (1.0 - mods).min()))
        if self.kind == "explicit_list":
            return min(self._point_distance(x, np.asarray(v)) for v in self.points)
        if self.kind == "subspace":
            return subspace_sphere_distance(x, self.basis)
        raise GeometryError(f"unknown norming-set kind {self.kind}")

    def _point_distance(self, x, v):
        space = self.space
        mask = None if self.free_mask is None else np.asarray(self.free_mask)

        def dist_for(phi):
            d = x - phi * v
            if mask is not None:
                d = np.where(mask, 0.0, d)
            return space.norm(d) if not isinstance(space, (Space, SumSpace)) \
                else space.norm(d)

        if not self.phase_orbit:
            return dist_for(1.0)
        if not getattr(space, "is_complex", False):
            return min(dist_for(1.0), dist_for(-1.0))
        ths = np.linspace(0, 2 * np.pi, 64, endpoint=False)
        coarse = min(ths, key=lambda t: dist_for(np.exp(1j * t)))
        t, _ = golden_max(lambda t: -dist_for(np.exp(1j * t)),
                          coarse - 0.2, coarse + 0.2, tol=1e-13)
        return dist_for(np.exp(1j * t))

    # -- sampling -----------------------------------------------------------

    def sample(self, rng, count: int = 1):
        out = []
        for _ in range(count):
            if self.kind == "support_constrained":
                v = np.zeros(self.space.dim, dtype=self.space.dtype)
                sub = rng.normal(size=len(self.J)) + \
                    (1j * rng.normal(size=len(self.J))
                     if self.space.is_complex else 0.0)
                v[list(self.J)] = sub
                out.append(v / self.space.norm(v))
            elif self.kind == "coordinate_unimodular":
                v = rng.uniform(-1, 1, self.space.dim).astype(self.space.dtype)
                if self.space.is_complex:
                    v = v * np.exp(2j * np.pi * rng.uniform(size=self.space.dim))
                n = self.J[int(rng.integers(len(self.J)))]
                v[n] = np.exp(2j * np.pi * rng.uniform()) \
                    if self.space.is_complex else rng.choice([-1.0, 1.0])
                out.append(v)
            elif self.kind == "explicit_list":
                v = np.asarray(self.points[int(rng.integers(len(self.points)))],
                               dtype=self.space.dtype).copy()
                if self.phase_orbit:
                    v = v * (np.exp(2j * np.pi * rng.uniform())
                             if self.space.is_complex else rng.choice([-1.0, 1.0]))
                if self.free_mask is not None:
                    fill = rng.uniform(-1, 1, self.space.dim)
                    v[self.free_mask] = fill[self.free_mask]
                out.append(v)
            elif self.kind == "subspace":
                k = self.basis.shape[1]
                c = rng.normal(size=k) + (1j * rng.normal(size=k)
                                          if np.iscomplexobj(self.basis) else 0.0)
                v = self.basis @ c
                out.append(v / np.linalg.norm(v))
            else:
                raise GeometryError("cannot sample an empty norming set")
        return out

    def describe(self) -> dict:
        d = {"kind": self.kind, "note": self.note}
        if self.J is not None:
            d["J"] = list(self.J)
        if self.kind == "explicit_list":
            d["count"] = len(self.points)
            d["phase_orbit"] = self.phase_orbit
        return d


class UnionNormingSet(NormingSetDescriptor):
    """Union of norming sets; distance is the min over the parts (exact when
    each part is exact)."""

    def __init__(self, parts):
        super().__init__("union")
        self.parts = list(parts)

    @property
    def is_empty(self):
        return all(p.is_empty for p in self.parts)

    def distance(self, x):
        return min(p.distance(x) for p in self.parts)

    def sample(self, rng, count: int = 1):
        out = []
        for _ in range(count):
            p = self.parts[int(rng.integers(len(self.parts)))]
            out.extend(p.sample(rng, 1))
        return out

    def describe(self):
        return {"kind": "union", "parts": [p.describe() for p in self.parts]}


def support_distance(x: np.ndarray, J, space) -> float:
    """Exact distance from x to the unit vectors supported on J.

    The nearest point is the radial rescaling of the J-restriction, for every
    p in [1, inf): dist^p = |1 - ||x_J|||^p + ||x_offJ||^p.
    """
    x = np.asarray(x)
    mask = np.zeros(x.shape[0], dtype=bool)
    mask[list(J)] = True
    p = space.p
    A = lp_norm(x[mask], p)
    off = lp_norm(x[~mask], p)
    if p == INF:
        return max(abs(1.0 - A), off)
    return (abs(1.0 - A) ** p + off ** p) ** (1.0 / p)


def subspace_sphere_distance(x: np.ndarray, basis: np.ndarray) -> float:
    """Exact Hilbert distance from x to the unit sphere of span(basis)."""
    P = basis @ (np.conj(basis.T) @ x)
    a = np.linalg.norm(P)
    res = np.linalg.norm(x - P)
    return float(np.sqrt(res ** 2 + (1.0 - a) ** 2))


def hilbert_norm_modulus(M: np.ndarray, eps: float, tol: float = 1e-12):
    """The exact stability modulus of a norm-one Hilbert-to-Hilbert operator:
    with V1 the top right-singular subspace and s2 the next singular value,
    the best feasible point splits its mass a on V1 (a <= 1 - eps^2/2), so

        eta(eps) = 1 - sqrt(a^2 + s2^2 (1 - a^2)),   a = max(0, 1 - eps^2/2).

    Returns None when no unit vector is eps-far from the norming set."""
    S = np.linalg.svd(M, compute_uv=False)
    if abs(S[0] - 1.0) > 1e-9:
        raise GeometryError("modulus formula needs a norm-one operator")
    rest = S[S < S[0] * (1 - tol)]
    if rest.size == 0:
        return None                     # every unit vector is norming
    s2 = float(rest.max())
    if eps > np.sqrt(2.0):
        return None                     # nothing is that far from the sphere cap
    a = max(0.0, 1.0 - eps * eps / 2.0)
    return 1.0 - float(np.sqrt(a * a + s2 * s2 * (1.0 - a * a)))


def norming_set(T: OperatorExpr, norm_result: Optional[NormResult] = None,
                tol: float = 1e-12) -> NormingSetDescriptor:
    nr = norm_result if norm_result is not None else operator_norm(T)
    if not nr.is_certified():
        raise HeuristicRefusalError(
            "norming set refused: only a heuristic norm is available")
    if nr.value == 0.0:
        return NormingSetDescriptor("empty", note="zero operator")

    if isinstance(T, Scale):
        return norming_set(T.child, None, tol)
    if isinstance(T, Lift):
        inner = norming_set(T.child, None, tol)
        return _lifted_descriptor(inner, T)
    if isinstance(T, Diagonal):
        mods = np.abs(T.alphas())
        J = tuple(int(i) for i in np.nonzero(mods >= nr.value * (1 - tol))[0])
        if T.domain.p == INF:
            return NormingSetDescriptor("coordinate_unimodular",
                                        space=T.domain, J=J)
        return NormingSetDescriptor("support_constrained", space=T.domain, J=J)
    if isinstance(T, RankOne):
        return functional_norming_set(T.xstar, T.domain, tol)
    if isinstance(T, (Dense, Adjoint, Delift)):
        M = to_matrix(T)
        dom, cod = T.domain, T.codomain
        if isinstance(dom, SumSpace) or isinstance(cod, SumSpace):
            raise HeuristicRefusalError(
                "norming sets on sum spaces are provided by structured "
                "entries, not generic dense operators")
        if cod.dim == 1:
            return functional_norming_set(M[0], dom, tol)
        if dom.p == 2 and cod.p == 2:
            U, S, Vh = np.linalg.svd(M)
            keep = S >= S[0] * (1 - tol)
            basis = np.conj(Vh[keep]).T
            return NormingSetDescriptor("subspace", space=dom, basis=basis)
        if cod.p == INF:
            rows = np.array([dom.dual().norm(M[i]) for i in range(M.shape[0])])
            keep = np.nonzero(rows >= rows.max() * (1 - tol))[0]
            return UnionNormingSet([functional_norming_set(M[i], dom, tol)
                                    for i in keep])
        if dom.p == 1:
            cols = _col_norm(M, cod)
            J = tuple(int(j) for j in
                      np.nonzero(cols >= cols.max() * (1 - tol))[0])
            if len(J) == 1:
                e = np.zeros(dom.dim, dtype=dom.dtype)
                e[J[0]] = 1.0
                return NormingSetDescriptor("explicit_list", space=dom,
                                            points=(e,), phase_orbit=True)
            return NormingSetDescriptor(
                "support_constrained", space=dom, J=J,
                note="superset: image-alignment across columns not encoded")
        if dom.p == INF and not dom.is_complex and nr.method == "sign-enumeration":
            pts = _enumerated_norming_points(M, dom, cod, nr.value, tol)
            return NormingSetDescriptor("explicit_list", space=dom, points=pts)
    raise HeuristicRefusalError(
        f"no certified norming-set rule for {type(T).__name__} on this geometry")


def _lifted_descriptor(inner: NormingSetDescriptor, T: Lift) -> NormingSetDescriptor:
    s = T.sum_space
    return LiftedNormingSet(inner, s)


class LiftedNormingSet(NormingSetDescriptor):
    """Norming set of a lifted operator: {(w, z) : w norming for the child,
    z = 0} for outer p < inf; z free in the ball for outer p = inf."""

    def __init__(self, inner: NormingSetDescriptor, sum_space: SumSpace):
        super().__init__("lifted", space=sum_space)
        self.inner = inner
        self.sum_space = sum_space

    @property
    def is_empty(self):
        return self.inner.is_empty

    def distance(self, x) -> float:
        s = self.sum_space
        w, z = s.split(x)
        dw = self.inner.distance(w)
        nz = s.components[1].norm(z)
        if s.outer_p == INF:
            return max(dw, max(0.0, nz - 1.0))
        if s.outer_p == 1:
            return dw + nz
        return (dw ** s.outer_p + nz ** s.outer_p) ** (1.0 / s.outer_p)

    def sample(self, rng, count: int = 1):
        s = self.sum_space
        out = []
        for w in self.inner.sample(rng, count):
            z = np.zeros(s.components[1].dim, dtype=s.dtype)
            out.append(s.join([w, z]))
        return out

    def describe(self):
        return {"kind": "lifted", "inner": self.inner.describe()}


def functional_norming_set(f: np.ndarray, dom: Space,
                           tol: float = 1e-12) -> NormingSetDescriptor:
    """Norming points of the functional x -> <f, x> on the domain geometry."""
    f = np.asarray(f)
    val = dom.dual().norm(f)
    if val == 0:
        return NormingSetDescriptor("empty", note="zero functional")
    if 1.0 < dom.p < INF:
        x = primal_align_rows(f[None, :], dom.p)[0]
        return NormingSetDescriptor("explicit_list", space=dom,
                                    points=(x,), phase_orbit=True)
    if dom.p == 1:
        mods = np.abs(f)
        J = tuple(int(j) for j in np.nonzero(mods >= val * (1 - tol))[0])
        if len(J) == 1:
            e = np.zeros(dom.dim, dtype=dom.dtype)
            e[J[0]] = np.conj(f[J[0]] / abs(f[J[0]]))
            return NormingSetDescriptor("explicit_list", space=dom,
                                        points=(e,), phase_orbit=True)
        return NormingSetDescriptor(
            "support_constrained", space=dom, J=J,
            note="superset: phase alignment across J not encoded")
    # sup-norm domain: aligned pattern on supp(f), free elsewhere
    supp = np.abs(f) > tol * val
    pattern = np.zeros(dom.dim, dtype=dom.dtype)
    pattern[supp] = np.conj(unit_phase(f[supp]))
    free = ~supp
    return NormingSetDescriptor("explicit_list", space=dom, points=(pattern,),
                                phase_orbit=True,
                                free_mask=free if free.any() else None)


def _enumerated_norming_points(M, dom, cod, value, tol):
    d = dom.dim
    pts = []
    chunk = 1 << min(d, 14)
    total = 1 << d
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        signs = (((idx[:, None] >> np.arange(d)) & 1) * 2.0 - 1.0)
        vals = _batch_cod_norms(signs @ M.T, cod)
        for k in np.nonzero(vals >= value * (1 - tol))[0]:
            pts.append(signs[k])
    return tuple(pts)


def distance_to_norming_set(x: np.ndarray, T: OperatorExpr,
                            descriptor: Optional[NormingSetDescriptor] = None,
                            norm_result: Optional[NormResult] = None) -> float:
    desc = descriptor if descriptor is not None else norming_set(T, norm_result)
    return desc.distance(np.asarray(x))
