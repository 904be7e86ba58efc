"""Local normal form: an affine slice through ``c = Σ ℓ^i⊗ℓ^i⊗e_i`` and a Newton
solver that moves nearby tensors onto it with a group element.

This is the only floating-point module. The slice itself is built exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exact import QQ, FieldSpec, rank, rref
from .tensors import StructureTensor, TensorSpace, elementary, lie_action, make_m0


class NormalFormError(RuntimeError):
    pass


class NoConvergence(NormalFormError):
    pass


class SingularJacobian(NormalFormError):
    pass


# --- float tensor helpers -----------------------------------------------------

def g_action_float(g: np.ndarray, c: np.ndarray) -> np.ndarray:
    h = np.linalg.inv(g)
    return np.einsum("ai,bj,rk,abk->ijr", h, h, g, c, optimize=True)


def lie_action_float(x: np.ndarray, c: np.ndarray) -> np.ndarray:
    return (np.einsum("rk,ijk->ijr", x, c) - np.einsum("ai,ajr->ijr", x, c)
            - np.einsum("bj,ibr->ijr", x, c))


def coords_float(space: str, c: np.ndarray) -> np.ndarray:
    """Float analogue of :meth:`TensorSpace.coords` for M and C (no membership check)."""
    n = c.shape[0]
    if space == "M":
        return c.reshape(-1).copy()
    iu = [(p, q) for p in range(n) for q in range(p, n)]
    return np.array([c[p, q, r] if p < q else c[p, p, r] / 2 for p, q in iu for r in range(n)])


def tensor_float(space: str, coords: np.ndarray, n: int) -> np.ndarray:
    if space == "M":
        return np.asarray(coords, dtype=float).reshape(n, n, n)
    c = np.zeros((n, n, n))
    k = 0
    for p in range(n):
        for q in range(p, n):
            for r in range(n):
                c[p, q, r] += coords[k]
                c[q, p, r] += coords[k]
                k += 1
    return c


def to_float(m) -> np.ndarray:
    if isinstance(m, StructureTensor):
        if not m.field.is_rational:
            raise ValueError("normal forms are computed over Q / R only")
        return np.array([float(x) for x in m.entries.flat]).reshape(m.entries.shape)
    return np.asarray(m, dtype=float)


# --- slice -----------------------------------------------------------------------

@dataclass
class SliceSpec:
    """Affine slice ``c + W`` transversal to the orbit tangent ``gl(V)·c``.

    ``pivots`` are the coordinates where the tangent space has its echelon
    pivots; ``W`` is spanned by the unit vectors at all other coordinates, so
    a point lies on the slice iff its pivot coordinates agree with ``c``.
    """

    n: int
    space: str
    base: StructureTensor
    tangent: np.ndarray  # exact, ambient_dim x n², column a*n+b is x_{a,b}·c
    pivots: list[int]
    complement: list[int]
    base_coords: np.ndarray = field(repr=False)
    tangent_float: np.ndarray = field(repr=False)

    @property
    def ambient_dim(self) -> int:
        return self.tangent.shape[0]

    @property
    def dim(self) -> int:
        return len(self.complement)

    def point(self, w) -> np.ndarray:
        """Float tensor ``c + Σ w_k u_k`` over the complement unit vectors."""
        x = self.base_coords.copy()
        x[self.complement] += np.asarray(w, dtype=float)
        return tensor_float(self.space, x, self.n)

    def tangent_part(self, v: np.ndarray) -> np.ndarray:
        """Component of the coordinate vector ``v`` along the tangent space (projection along W)."""
        a = np.linalg.solve(self.tangent_float[self.pivots, :], v[self.pivots])
        return self.tangent_float @ a

    def on_slice(self, z, tol: float = 0.0) -> bool:
        if isinstance(z, StructureTensor):
            ts = TensorSpace(self.space, self.n, z.field)
            zc = ts.coords(z)
            bc = ts.coords(self.base)
            return all(zc[i] == bc[i] for i in self.pivots)
        v = coords_float(self.space, to_float(z))
        return bool(np.max(np.abs(v[self.pivots] - self.base_coords[self.pivots]), initial=0.0) <= tol)


def build_slice(n: int, space: str = "M", field: FieldSpec = QQ) -> SliceSpec:
    if n < 2:
        raise ValueError("n must be at least 2")
    if space not in ("M", "C"):
        raise ValueError("slices are built in M or C")
    ts = TensorSpace(space, n, field)
    c = make_m0(n, field)
    cols = [ts.coords(lie_action(elementary(i, j, n, field), c)) for i in range(n) for j in range(n)]
    T = np.array(cols, dtype=object).T
    if rank(field, T) != n * n:
        raise AssertionError("orbit tangent at c is rank deficient")
    _, piv = rref(field, T.T)
    comp = [k for k in range(ts.dim) if k not in set(piv)]
    return SliceSpec(
        n=n, space=space, base=c, tangent=T, pivots=list(piv), complement=comp,
        base_coords=np.array([float(x) for x in ts.coords(c)]),
        tangent_float=np.array([[float(x) for x in r] for r in T]),
    )


# --- Newton normalization -----------------------------------------------------------

@dataclass
class NormalizationResult:
    g: np.ndarray
    z: np.ndarray
    residual: float
    iterations: int


def _units(n: int) -> list[np.ndarray]:
    out = []
    for i in range(n):
        for j in range(n):
            x = np.zeros((n, n))
            x[j, i] = 1.0
            out.append(x)
    return out


def normalize(m, slc: SliceSpec, max_iter: int = 50, tol: float = 1e-9,
              warm_start: np.ndarray | None = None) -> NormalizationResult:
    """Find g with ``g·m ∈ c + W`` by Newton's method in the chart ``g ↦ (I + δ) g``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = to_float(m)
    n = slc.n
    if m.shape != (n, n, n):
        raise ValueError("tensor dimension differs from the slice")
    g = np.eye(n) if warm_start is None else np.array(warm_start, dtype=float)
    units = _units(n)
    piv = slc.pivots
    target = slc.base_coords[piv]
    for it in range(max_iter + 1):
        if abs(np.linalg.det(g)) < 1e-14:
            raise NormalFormError("iterate became singular")
        z = g_action_float(g, m)
        zc = coords_float(slc.space, z)
        resid = float(np.max(np.abs(slc.tangent_part(zc - slc.base_coords)), initial=0.0))
        if resid < tol:
            return NormalizationResult(g, z, resid, it)
        if it == max_iter:
            break
        J = np.column_stack([coords_float(slc.space, lie_action_float(x, z))[piv] for x in units])
        if np.linalg.matrix_rank(J, tol=1e-10 * max(1.0, np.abs(J).max(initial=0.0))) < n * n:
            raise SingularJacobian("orbit tangent at the iterate is degenerate")
        delta = np.linalg.solve(J, -(zc[piv] - target))
        step = sum(d * x for d, x in zip(delta, units))
        g = (np.eye(n) + step) @ g
    raise NoConvergence(f"residual {resid:.3e} after {max_iter} iterations")


def local_uniqueness_check(slc: SliceSpec, z) -> bool:
    """True iff ``gl(V)·z ⊕ W`` is the whole space (exact for rational z).

    Meaningful for z on the slice; off the slice it still reports transversality at z.
    """
    n = slc.n
    if isinstance(z, StructureTensor):
        ts = TensorSpace(slc.space, n, z.field)
        cols = [ts.coords(lie_action(elementary(i, j, n, z.field), z)) for i in range(n) for j in range(n)]
        for k in slc.complement:
            e = [z.field.zero] * ts.dim
            e[k] = z.field.one
            cols.append(e)
        return rank(z.field, np.array(cols, dtype=object)) == ts.dim
    z = to_float(z)
    cols = [coords_float(slc.space, lie_action_float(x, z)) for x in _units(n)]
    eye = np.eye(slc.ambient_dim)
    cols += [eye[:, k] for k in slc.complement]
    sv = np.linalg.svd(np.column_stack(cols), compute_uv=False)
    return bool(sv.min() > 1e-8 * max(1.0, sv.max()))


# --- round trips ---------------------------------------------------------------------

@dataclass
class TrialRecord:
    trial: int
    z_error: float
    g_error: float
    iterations: int
    restart_spread: float | None
    passed: bool
    error: str | None = None


@dataclass
class RoundTripReport:
    n: int
    space: str
    seed: int
    magnitude: float
    trials: list[TrialRecord]

    @property
    def passed(self) -> bool:
        return all(t.passed for t in self.trials)

    @property
    def max_z_error(self) -> float:
        return max((t.z_error for t in self.trials), default=0.0)

    @property
    def max_g_error(self) -> float:
        return max((t.g_error for t in self.trials), default=0.0)


def restart_spread(m, slc: SliceSpec, g_hat: np.ndarray, rng: np.random.Generator,
                   restarts: int = 5, perturbation: float = 1e-3) -> float:
    """Largest deviation from ``g_hat`` when re-solving from perturbed warm starts."""
    worst = 0.0
    for _ in range(restarts):
        start = g_hat + perturbation * rng.uniform(-1, 1, g_hat.shape)
        res = normalize(m, slc, warm_start=start)
        worst = max(worst, float(np.max(np.abs(res.g - g_hat))))
    return worst


def roundtrip_test(n: int, space: str, seed: int, trials: int = 50, magnitude: float = 0.1,
                   restarts: int = 0, accept: float = 1e-6) -> RoundTripReport:
    """Build ``m = g0·(c + w)`` and check that normalization returns ``c + w`` and ``g0⁻¹``."""
    if magnitude > 0.25:
        raise ValueError("magnitude above 0.25 leaves the tested basin")
    from .exact import trial_rng
    slc = build_slice(n, space)
    records = []
    for t in range(trials):
        rng = trial_rng(seed, t)
        w = magnitude * rng.uniform(-1, 1, slc.dim)
        g0 = np.eye(n) + magnitude * rng.uniform(-1, 1, (n, n))
        z = slc.point(w)
        m = g_action_float(g0, z)
        try:
            res = normalize(m, slc)
        except NormalFormError as exc:
            records.append(TrialRecord(t, np.inf, np.inf, -1, None, False, str(exc)))
            continue
        ze = float(np.max(np.abs(res.z - z)))
        ge = float(np.max(np.abs(res.g @ g0 - np.eye(n))))
        spread = restart_spread(m, slc, res.g, rng, restarts) if restarts else None
        ok = ze <= accept and ge <= accept and (spread is None or spread <= accept)
        records.append(TrialRecord(t, ze, ge, res.iterations, spread, ok))
    return RoundTripReport(n, space, seed, magnitude, records)
