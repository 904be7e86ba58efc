"""Multiplication tensors on V = k^n and the GL(V), gl(V) actions on them.

A tensor ``m`` stores structure constants ``m.entries[i, j, k] = c_{ij}^k``, i.e.
the k-th coordinate of ``e_i e_j``. All indices in this module are 0-based.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import QQ, FieldSpec, det, inverse, kernel_basis, sample_scalar, solve, trial_rng

SPACES = ("M", "C", "A", "C0")


@dataclass(frozen=True, eq=False)
class StructureTensor:
    field: FieldSpec
    entries: np.ndarray

    def __post_init__(self):
        e = self.entries
        if e.ndim != 3 or not (e.shape[0] == e.shape[1] == e.shape[2]):
            raise ValueError(f"structure tensor must be n x n x n, got {e.shape}")
        e.flags.writeable = False

    @classmethod
    def from_array(cls, field: FieldSpec, data) -> "StructureTensor":
        return cls(field, field.array(data))

    @classmethod
    def zero(cls, n: int, field: FieldSpec = QQ) -> "StructureTensor":
        return cls(field, field.zeros((n, n, n)))

    @classmethod
    def from_vector(cls, field: FieldSpec, n: int, vec: Sequence) -> "StructureTensor":
        return cls(field, field.array(list(vec)).reshape(n, n, n))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def vector(self) -> list:
        """Coordinates in M, flattened with index ``i*n*n + j*n + k``."""
        return list(self.entries.reshape(-1))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries.flat)

    def nonzero(self) -> dict[tuple[int, int, int], object]:
        return {idx: self.entries[idx] for idx in np.ndindex(self.entries.shape) if self.entries[idx] != 0}

    def _other(self, other: "StructureTensor") -> np.ndarray:
        if not isinstance(other, StructureTensor):
            return NotImplemented
        if other.field != self.field or other.n != self.n:
            raise ValueError("tensors over different fields or dimensions")
        return other.entries

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else StructureTensor(self.field, self.entries + o)

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else StructureTensor(self.field, self.entries - o)

    def __neg__(self):
        return StructureTensor(self.field, -self.entries)

    def scale(self, s) -> "StructureTensor":
        return StructureTensor(self.field, self.entries * self.field(s))

    def __eq__(self, other):
        if not isinstance(other, StructureTensor):
            return NotImplemented
        return (self.field == other.field and self.n == other.n
                and all(a == b for a, b in zip(self.entries.flat, other.entries.flat)))

    def __hash__(self):
        return hash((self.field, tuple(self.entries.flat)))

    def __repr__(self):
        nz = {(i + 1, j + 1, k + 1): self.field.format(v) for (i, j, k), v in self.nonzero().items()}
        return f"StructureTensor(n={self.n}, field={self.field}, nonzero={nz})"


def _vec(field: FieldSpec, v, n: int) -> np.ndarray:
    v = field.array(list(v))
    if v.shape != (n,):
        raise ValueError(f"expected a vector of length {n}, got shape {v.shape}")
    return v


def _square(field: FieldSpec, g, n: int) -> np.ndarray:
    g = field.array(g)
    if g.shape != (n, n):
        raise ValueError(f"expected an {n} x {n} matrix, got shape {g.shape}")
    return g


def multiply(m: StructureTensor, a, b) -> np.ndarray:
    """The product ``ab`` in the algebra {V, m}."""
    a, b = _vec(m.field, a, m.n), _vec(m.field, b, m.n)
    return np.einsum("i,j,ijk->k", a, b, m.entries)


def theta(m: StructureTensor) -> StructureTensor:
    """Swap the two covector slots."""
    return StructureTensor(m.field, np.ascontiguousarray(m.entries.transpose(1, 0, 2)))


def split(m: StructureTensor) -> tuple[StructureTensor, StructureTensor]:
    """Commutative and anticommutative parts ``((m + θm)/2, (m - θm)/2)``."""
    t = theta(m)
    half = m.field(Fraction(1, 2))
    return (m + t).scale(half), (m - t).scale(half)


def g_action(g, m: StructureTensor) -> StructureTensor:
    """``(g·m)(a, b) = g m(g⁻¹a, g⁻¹b)``, one slot at a time."""
    g = _square(m.field, g, m.n)
    if det(m.field, g) == 0:
        raise ValueError("group element is singular")
    h = inverse(m.field, g)
    c = np.einsum("ai,abk->ibk", h, m.entries)
    c = np.einsum("bj,ibk->ijk", h, c)
    c = np.einsum("rk,ijk->ijr", g, c)
    return StructureTensor(m.field, c)


def lie_action(x, m: StructureTensor) -> StructureTensor:
    """Differential of :func:`g_action`: x acts as ``-ℓ∘x`` on covector slots, ``x v`` on the vector slot."""
    x = _square(m.field, x, m.n)
    c = m.entries
    out = (np.einsum("rk,ijk->ijr", x, c)
           - np.einsum("ai,ajr->ijr", x, c)
           - np.einsum("bj,ibr->ijr", x, c))
    return StructureTensor(m.field, out)


def elementary(i: int, j: int, n: int, field: FieldSpec = QQ) -> np.ndarray:
    """The operator ``x_{i,j}``: ``e_i ↦ e_j``, other basis vectors to 0."""
    x = field.zeros((n, n))
    x[j, i] = field.one
    return x


def make_m0(n: int, field: FieldSpec = QQ) -> StructureTensor:
    """``e_i e_i = e_i``, all other products zero (also the slice base point)."""
    if n < 1:
        raise ValueError("n must be positive")
    e = field.zeros((n, n, n))
    for i in range(n):
        e[i, i, i] = field.one
    return StructureTensor(field, e)


def make_pm(ell, sign: str, n: int, field: FieldSpec = QQ) -> StructureTensor:
    """``ab = ℓ(a) b + ℓ(b) a`` for sign ``"+"``, ``ℓ(a) b - ℓ(b) a`` for ``"-"``."""
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    ell = _vec(field, ell, n)
    s = field.one if sign == "+" else -field.one
    e = field.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            e[i, j, j] = e[i, j, j] + ell[i]
            e[i, j, i] = e[i, j, i] + s * ell[j]
    return StructureTensor(field, e)


def left_mult_operator(m: StructureTensor, v) -> np.ndarray:
    """Matrix of ``a ↦ va``."""
    v = _vec(m.field, v, m.n)
    return np.ascontiguousarray(np.einsum("j,jik->ki", v, m.entries))


def right_mult_operator(m: StructureTensor, v) -> np.ndarray:
    """Matrix of ``a ↦ av``."""
    v = _vec(m.field, v, m.n)
    return np.ascontiguousarray(np.einsum("j,ijk->ki", v, m.entries))


def trace_form(m: StructureTensor) -> np.ndarray:
    """Covector ``v ↦ tr(a ↦ va)``."""
    return np.einsum("jii->j", m.entries)


def _check_trace_char(field: FieldSpec, n: int, shift: int):
    p = field.characteristic
    # p ∤ n is the documented hypothesis; p ∤ (n+shift) is what the splitting actually needs
    if p and (n % p == 0 or (n + shift) % p == 0):
        raise ValueError(f"characteristic {p} divides n={n} or n{shift:+d}; trace splitting undefined")


def decompose_C(m: StructureTensor) -> tuple[StructureTensor, StructureTensor]:
    """Split commutative ``m`` into a traceless part and a part ``m_{ℓ+}``.

    For ``m_{ℓ+}`` the left multiplication by ``v`` has trace ``(n+1)ℓ(v)``.
    """
    if theta(m) != m:
        raise ValueError("tensor is not commutative")
    n, f = m.n, m.field
    _check_trace_char(f, n, +1)
    ell = trace_form(m) / f(n + 1)
    mp = make_pm(ell, "+", n, f)
    return m - mp, mp


def decompose_A(m: StructureTensor) -> tuple[StructureTensor, StructureTensor]:
    """Anticommutative analogue; here the trace of ``v·`` on ``m_{ℓ-}`` is ``(n-1)ℓ(v)``."""
    if theta(m) != -m:
        raise ValueError("tensor is not anticommutative")
    n, f = m.n, m.field
    if n < 2:
        raise ValueError("n must be at least 2")
    _check_trace_char(f, n, -1)
    ell = trace_form(m) / f(n - 1)
    mp = make_pm(ell, "-", n, f)
    return m - mp, mp


def basis_C(n: int, field: FieldSpec = QQ) -> list[StructureTensor]:
    """``(ℓ^p⊗ℓ^q + ℓ^q⊗ℓ^p)⊗e_r`` for ``p <= q``, ordered by ``(p, q, r)``."""
    out = []
    for p in range(n):
        for q in range(p, n):
            for r in range(n):
                e = field.zeros((n, n, n))
                e[p, q, r] = e[p, q, r] + field.one
                e[q, p, r] = e[q, p, r] + field.one
                out.append(StructureTensor(field, e))
    return out


def basis_A(n: int, field: FieldSpec = QQ) -> list[StructureTensor]:
    """``(ℓ^p⊗ℓ^q - ℓ^q⊗ℓ^p)⊗e_r`` for ``p < q``."""
    out = []
    for p in range(n):
        for q in range(p + 1, n):
            for r in range(n):
                e = field.zeros((n, n, n))
                e[p, q, r] = field.one
                e[q, p, r] = -field.one
                out.append(StructureTensor(field, e))
    return out


def basis_M(n: int, field: FieldSpec = QQ) -> list[StructureTensor]:
    out = []
    for idx in np.ndindex(n, n, n):
        e = field.zeros((n, n, n))
        e[idx] = field.one
        out.append(StructureTensor(field, e))
    return out


def basis_C0(n: int, field: FieldSpec = QQ) -> list[StructureTensor]:
    """Basis of the commutative tensors all of whose left multiplications are traceless."""
    _check_trace_char(field, n, +1)
    bc = basis_C(n, field)
    # columns = basis tensors, rows = the n trace functionals
    T = np.array([[trace_form(b)[j] for b in bc] for j in range(n)], dtype=object)
    K = kernel_basis(field, T)
    return [combine(field, n, row, bc) for row in K.basis]


def combine(field: FieldSpec, n: int, coeffs, tensors: Sequence[StructureTensor]) -> StructureTensor:
    acc = field.zeros((n, n, n))
    for a, t in zip(coeffs, tensors):
        if a != 0:
            acc = acc + t.entries * a
    return StructureTensor(field, acc)


class TensorSpace:
    """One of the G-stable subspaces M, C, A, C0 with a fixed coordinate basis."""

    def __init__(self, name: str, n: int, field: FieldSpec = QQ):
        if name not in SPACES:
            raise ValueError(f"unknown space {name!r}; expected one of {SPACES}")
        self.name, self.n, self.field = name, n, field
        self.basis = {"M": basis_M, "C": basis_C, "A": basis_A, "C0": basis_C0}[name](n, field)
        self._sub = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, m: StructureTensor) -> bool:
        if self.name == "M":
            return True
        if self.name == "C":
            return theta(m) == m
        if self.name == "A":
            return theta(m) == -m
        return theta(m) == m and all(x == 0 for x in trace_form(m))

    def coords(self, m: StructureTensor) -> list:
        """Coefficients of ``m`` in :attr:`basis` (ValueError if ``m`` is outside)."""
        if not self.contains(m):
            raise ValueError(f"tensor does not lie in {self.name}")
        e, n, f = m.entries, self.n, self.field
        if self.name == "M":
            return list(e.reshape(-1))
        if self.name == "C":
            half = f(Fraction(1, 2))
            return [e[p, q, r] if p < q else e[p, p, r] * half
                    for p in range(n) for q in range(p, n) for r in range(n)]
        if self.name == "A":
            return [e[p, q, r] for p in range(n) for q in range(p + 1, n) for r in range(n)]
        if self._sub is None:
            self._sub = np.array([b.vector() for b in self.basis], dtype=object).T
        return solve(f, self._sub, m.vector())

    def tensor(self, coords: Sequence) -> StructureTensor:
        if len(coords) != self.dim:
            raise ValueError("coordinate vector has the wrong length")
        return combine(self.field, self.n, [self.field(a) for a in coords], self.basis)

    def action_matrix(self, g) -> np.ndarray:
        """Matrix of ``m ↦ g·m`` on this space, in :attr:`basis` coordinates (columns = images).

        For M, C, A the entries are written down slot by slot from ``g`` and
        ``g⁻¹``; C0 goes through :func:`g_action` on each basis tensor.
        """
        n, f = self.n, self.field
        g = _square(f, g, n)
        if self.name == "C0":
            cols = [self.coords(g_action(g, b)) for b in self.basis]
            return np.array(cols, dtype=object).T.reshape(self.dim, self.dim)
        h = inverse(f, g)
        if self.name == "M":
            # (g·m)_{ij}^k = Σ h[a,i] h[b,j] g[k,r] m_{ab}^r
            return np.kron(np.kron(h.T, h.T), g)
        pairs = [(p, q) for p in range(n) for q in range(p + (self.name == "A"), n)]
        out = np.empty((self.dim, self.dim), dtype=object)
        for row, (i, j) in enumerate(pairs):
            for col, (p, q) in enumerate(pairs):
                if self.name == "A":
                    w = h[p, i] * h[q, j] - h[q, i] * h[p, j]
                elif i < j:
                    w = h[p, i] * h[q, j] + h[q, i] * h[p, j]
                else:
                    w = h[p, i] * h[q, i]
                out[row * n:(row + 1) * n, col * n:(col + 1) * n] = g * w
        return out

    def lie_matrix(self, x) -> np.ndarray:
        cols = [self.coords(lie_action(x, b)) for b in self.basis]
        return np.array(cols, dtype=object).T.reshape(self.dim, self.dim)


def random_tensor(space: str, n: int, field: FieldSpec = QQ, seed=0, bound: int = 9) -> StructureTensor:
    """Seeded random combination of the basis of ``space``.

    ``seed`` is an int master seed or a ``numpy.random.Generator``.
    """
    rng = seed if isinstance(seed, np.random.Generator) else trial_rng(seed)
    ts = TensorSpace(space, n, field)
    return ts.tensor([sample_scalar(field, rng, bound) for _ in range(ts.dim)])
