"""Stabilizers, orbit dimensions and fixed spaces of the GL(V) action on tensors."""
from __future__ import annotations

import itertools

import numpy as np

from .exact import QQ, FieldSpec, Subspace, kernel_basis, rank, trial_rng
from .tensors import StructureTensor, TensorSpace, g_action, random_tensor

AUT_BUDGET = 10 ** 5


class BudgetExceeded(RuntimeError):
    pass


def tangent_matrix(m: StructureTensor) -> np.ndarray:
    """n³ x n² matrix whose column ``a*n + b`` is ``E_ab · m`` (E_ab the matrix unit)."""
    # (E_ab·m)[i,j,r] = δ_ra c[i,j,b] - δ_bi c[a,j,r] - δ_bj c[i,a,r]; filled by slicing
    n, c = m.n, m.entries
    T = m.field.zeros((n, n, n, n, n))
    for a in range(n):
        for b in range(n):
            T[:, :, a, a, b] = T[:, :, a, a, b] + c[:, :, b]
            T[b, :, :, a, b] = T[b, :, :, a, b] - c[a, :, :]
            T[:, b, :, a, b] = T[:, b, :, a, b] - c[:, a, :]
    return T.reshape(n ** 3, n * n)


def stabilizer_lie(m: StructureTensor) -> Subspace:
    """``{x ∈ gl(V) : x·m = 0}``, as flattened n x n matrices."""
    return kernel_basis(m.field, tangent_matrix(m))


def orbit_dim(m: StructureTensor) -> int:
    """Dimension of the tangent space ``gl(V)·m``."""
    return rank(m.field, tangent_matrix(m))


def projective_stabilizer_dim(m: StructureTensor) -> int:
    """``dim {x : x·m ∈ k m}``; at least 1 because scalars act by -1."""
    if m.is_zero():
        raise ValueError("projective stabilizer of the zero tensor is undefined")
    T = tangent_matrix(m)
    bordered = np.concatenate([T, np.array(m.vector(), dtype=object).reshape(-1, 1)], axis=1)
    # m ≠ 0, so each kernel vector (x, λ) is determined by x
    return kernel_basis(m.field, bordered).dim


def space_dim(space: str, n: int) -> int:
    return {"M": n ** 3, "C": n * n * (n + 1) // 2, "A": (n - 1) * n * n // 2,
            "C0": n * n * (n + 1) // 2 - n}[space]


def trdeg_estimate(space: str, n: int, samples: int = 50, seed: int = 0,
                   field: FieldSpec = QQ, bound: int = 9) -> int:
    """``dim(space) - max orbit_dim`` over seeded random samples."""
    if samples < 1:
        raise ValueError("samples must be positive")
    best = 0
    for t in range(samples):
        m = random_tensor(space, n, field, trial_rng(seed, t), bound)
        best = max(best, orbit_dim(m))
        if best == n * n:
            break
    return space_dim(space, n) - best


def fixed_space(g, space: str = "C", field: FieldSpec = QQ) -> Subspace:
    """``{m ∈ space : g·m = m}`` in the coordinates of :class:`TensorSpace` ``space``."""
    g = field.array(g)
    n = g.shape[0]
    ts = TensorSpace(space, n, field)
    A = ts.action_matrix(g) - field.identity(ts.dim)
    return kernel_basis(field, A)


def gl_order(n: int, p: int) -> int:
    out = 1
    for i in range(n):
        out *= p ** n - p ** i
    return out


def _det_mod(G: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod p of a stack of small integer matrices (Leibniz expansion)."""
    N, n, _ = G.shape
    total = np.zeros(N, dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = np.ones(N, dtype=np.int64)
        for i in range(n):
            term = term * G[:, i, perm[i]] % p
        total = (total + sign * term) % p
    return total


def automorphisms_bruteforce(m: StructureTensor, budget: int = AUT_BUDGET) -> list[np.ndarray]:
    """All g ∈ GL_n(F_p) with ``g·m = m``, in lexicographic order of their entries.

    Candidates are screened with ``g(e_i e_j) = (g e_i)(g e_j)`` in vectorized
    integer arithmetic; survivors are confirmed with :func:`g_action`.
    """
    f = m.field
    if f.is_rational:
        raise ValueError("exhaustive automorphism search needs a prime field")
    n, p = m.n, f.p
    if gl_order(n, p) > budget:
        raise BudgetExceeded(f"|GL_{n}(F_{p})| = {gl_order(n, p)} exceeds budget {budget}")
    c = np.array([[[int(x) for x in row] for row in plane] for plane in m.entries], dtype=np.int64)
    found = []
    # chunk over the first row of g to keep the candidate stack small
    rest = np.array(list(itertools.product(range(p), repeat=n * n - n)), dtype=np.int64).reshape(-1, n - 1, n) \
        if n > 1 else np.zeros((1, 0, n), dtype=np.int64)
    for first in itertools.product(range(p), repeat=n):
        G = np.concatenate([np.broadcast_to(np.array(first, dtype=np.int64), (len(rest), 1, n)), rest], axis=1)
        G = G[_det_mod(G, p) != 0]
        if not len(G):
            continue
        lhs = np.einsum("Nrk,ijk->Nijr", G, c) % p
        rhs = np.einsum("Nai,Nbj,abr->Nijr", G, G, c) % p
        ok = np.all((lhs - rhs).reshape(len(G), -1) == 0, axis=1)
        for g in G[ok]:
            gm = f.array(g.tolist())
            if g_action(gm, m) == m:
                found.append(gm)
    found.sort(key=lambda g: [int(x) for x in g.flat])
    return found
