"""Exact scalars over Q and F_p, and dense linear algebra over them.

Rational elimination is fraction-free (Bareiss) on integer-scaled rows; prime
field elimination is plain Gauss-Jordan on residues. Pivots are always taken
at the first nonzero entry in column order, from the first eligible row, so
reduced echelon forms (and hence :class:`Subspace` values) are reproducible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ModP", "FieldSpec", "QQ", "GF", "Subspace",
    "as_matrix", "rref", "rank", "kernel_basis", "solve", "inverse", "det",
    "row_space", "trial_rng", "sample_scalar", "is_prime",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@total_ordering
class ModP:
    """Residue class modulo an odd prime; supports the usual operators."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = int(v) % p
        self.p = p

    def _lift(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise ValueError(f"mixing F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, (int, np.integer)):
            return int(other) % self.p
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p) % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else ModP(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else ModP(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else ModP(o - self.v, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else ModP(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return ModP(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return ModP(o * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        return ModP(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        o = self._lift(other)
        return False if o is NotImplemented else self.v == o

    def __lt__(self, other):
        # only for canonical sorting
        return self.v < self._lift(other)

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"ModP({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


@dataclass(frozen=True)
class FieldSpec:
    """The base field: ``kind`` is ``"rational"`` or ``"prime"`` (with odd prime ``p``)."""

    kind: str = "rational"
    p: int | None = None

    def __post_init__(self):
        if self.kind == "rational":
            if self.p is not None:
                raise ValueError("rational field takes no p")
        elif self.kind == "prime":
            if self.p is None or not is_prime(self.p):
                raise ValueError(f"p must be prime, got {self.p!r}")
            if self.p == 2:
                raise ValueError("characteristic 2 is excluded")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @property
    def characteristic(self) -> int:
        return 0 if self.kind == "rational" else self.p

    @property
    def is_rational(self) -> bool:
        return self.kind == "rational"

    def __call__(self, x):
        if isinstance(x, str):
            return self.parse(x)
        if self.kind == "rational":
            if isinstance(x, ModP):
                raise TypeError("cannot coerce a residue into Q")
            return Fraction(x)
        if isinstance(x, ModP):
            if x.p != self.p:
                raise ValueError(f"residue of F_{x.p} given to F_{self.p}")
            return x
        x = Fraction(x)
        return ModP(x.numerator * pow(x.denominator, -1, self.p), self.p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def parse(self, s: str):
        """Read the text form: ``"n"``/``"n/d"`` over Q, a decimal residue over F_p."""
        s = s.strip()
        if self.kind == "rational":
            num, _, den = s.partition("/")
            if not _is_int_text(num) or (den and not _is_int_text(den, signed=False)):
                raise ValueError(f"bad rational literal {s!r}")
            if den and int(den) == 0:
                raise ValueError(f"zero denominator in {s!r}")
            return Fraction(int(num), int(den) if den else 1)
        if not _is_int_text(s, signed=False):
            raise ValueError(f"bad residue literal {s!r}")
        v = int(s)
        if v >= self.p:
            raise ValueError(f"residue {v} out of range for F_{self.p}")
        return ModP(v, self.p)

    def format(self, x) -> str:
        x = self(x)
        if self.kind == "rational":
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(x.v)

    def array(self, data) -> np.ndarray:
        a = np.array(data, dtype=object)
        out = np.empty(a.size, dtype=object)
        out[:] = [self(x) for x in a.reshape(-1)]
        return out.reshape(a.shape)

    def zeros(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(self.zero)  # elements are immutable, so sharing one instance is safe
        return out

    def identity(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def __str__(self):
        return "Q" if self.kind == "rational" else f"F_{self.p}"


def _is_int_text(s: str, signed: bool = True) -> bool:
    if signed and s.startswith("-"):
        s = s[1:]
    return s.isdigit()


QQ = FieldSpec("rational")


def GF(p: int) -> FieldSpec:
    return FieldSpec("prime", p)


def as_matrix(field: FieldSpec, data) -> np.ndarray:
    a = field.array(data)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    if a.ndim != 2:
        raise ValueError("expected a 2-D array")
    return a


# --- elimination kernels on raw values (Fraction / int residues) -------------

def _raw_rows(field: FieldSpec, A) -> list[list]:
    rows = [list(r) for r in np.asarray(A, dtype=object).reshape(len(A), -1)] if len(A) else []
    if field.is_rational:
        return [[Fraction(x) for x in r] for r in rows]
    return [[field(x).v for x in r] for r in rows]


def _bareiss_echelon(rows: list[list[Fraction]], ncols: int):
    """Fraction-free forward elimination. Returns integer echelon rows and pivot columns."""
    M = []
    for r in rows:
        den = 1
        for x in r:
            den = den * x.denominator // math.gcd(den, x.denominator)
        M.append([int(x * den) for x in r])
    m = len(M)
    k = 0
    prev = 1
    pivots = []
    for c in range(ncols):
        if k >= m:
            break
        piv = next((r for r in range(k, m) if M[r][c] != 0), None)
        if piv is None:
            continue
        M[k], M[piv] = M[piv], M[k]
        pk = M[k][c]
        rowk = M[k]
        for i in range(k + 1, m):
            rowi = M[i]
            a = rowi[c]
            for j in range(c + 1, ncols):
                rowi[j] = (pk * rowi[j] - a * rowk[j]) // prev
            rowi[c] = 0
        prev = pk
        pivots.append(c)
        k += 1
    return M[:k], pivots


def _rref_sparse(rows: list[list[Fraction]], ncols: int):
    """Gauss-Jordan touching only nonzero entries; cheap when most entries vanish."""
    M = [{j: x for j, x in enumerate(r) if x} for r in rows]
    pivots = []
    k = 0
    for c in range(ncols):
        piv = next((r for r in range(k, len(M)) if c in M[r]), None)
        if piv is None:
            continue
        M[k], M[piv] = M[piv], M[k]
        inv = 1 / M[k][c]
        rowk = {j: x * inv for j, x in M[k].items()}
        M[k] = rowk
        for i in range(len(M)):
            if i != k and c in M[i]:
                f = M[i][c]
                rowi = M[i]
                for j, x in rowk.items():
                    y = rowi.get(j, 0) - f * x
                    if y:
                        rowi[j] = y
                    else:
                        rowi.pop(j, None)
        pivots.append(c)
        k += 1
    return [[r.get(j, Fraction(0)) for j in range(ncols)] for r in M[:k]], pivots


def _rref_rational(rows: list[list[Fraction]], ncols: int):
    nnz = sum(1 for r in rows for x in r if x)
    if nnz * 4 < len(rows) * ncols:
        return _rref_sparse(rows, ncols)
    ech, pivots = _bareiss_echelon(rows, ncols)
    R = [[Fraction(x) for x in r] for r in ech]
    for i in range(len(R) - 1, -1, -1):
        c = pivots[i]
        pv = R[i][c]
        R[i] = [x / pv for x in R[i]]
        for j in range(i):
            f = R[j][c]
            if f:
                R[j] = [a - f * b for a, b in zip(R[j], R[i])]
    return R, pivots


def _rref_modp(rows: list[list[int]], ncols: int, p: int):
    if not rows:
        return [], []
    dtype = np.int64 if p < 2 ** 31 else object
    M = np.array(rows, dtype=dtype).reshape(len(rows), ncols) % p
    m = len(rows)
    k = 0
    pivots = []
    for c in range(ncols):
        if k >= m:
            break
        nz = np.nonzero(M[k:, c])[0]
        if not len(nz):
            continue
        piv = k + int(nz[0])
        if piv != k:
            M[[k, piv]] = M[[piv, k]]
        M[k] = M[k] * pow(int(M[k, c]), -1, p) % p
        f = M[:, c].copy()
        f[k] = 0
        M = (M - np.outer(f, M[k])) % p
        pivots.append(c)
        k += 1
    return [[int(x) for x in r] for r in M[:k]], pivots


def _rref_raw(field: FieldSpec, rows: list[list], ncols: int):
    if field.is_rational:
        return _rref_rational(rows, ncols)
    return _rref_modp(rows, ncols, field.p)


def _wrap(field: FieldSpec, rows) -> tuple[tuple, ...]:
    if field.is_rational:
        return tuple(tuple(r) for r in rows)
    return tuple(tuple(ModP(x, field.p) for x in r) for r in rows)


def _shape(A) -> tuple[int, int]:
    a = np.asarray(A, dtype=object)
    if a.ndim != 2:
        if a.size == 0:
            return 0, 0
        raise ValueError("expected a 2-D matrix")
    return a.shape


def rref(field: FieldSpec, A) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form (nonzero rows only) and the pivot columns."""
    m, n = _shape(A)
    R, piv = _rref_raw(field, _raw_rows(field, A) if m else [], n)
    out = np.empty((len(R), n), dtype=object)
    for i, r in enumerate(_wrap(field, R)):
        out[i, :] = r
    return out, piv


def rank(field: FieldSpec, A) -> int:
    m, n = _shape(A)
    if not m:
        return 0
    if not field.is_rational and field.p < 2 ** 31:
        a = np.asarray(A)
        if a.dtype.kind in "iu":
            return _rank_modp(a.reshape(m, n).astype(np.int64) % field.p, field.p)
        return _rank_modp(np.array(_raw_rows(field, A), dtype=np.int64).reshape(m, n), field.p)
    rows = _raw_rows(field, A)
    if field.is_rational:
        return len(_bareiss_echelon(rows, n)[1])
    return len(_rref_modp(rows, n, field.p)[1])


def _rank_modp(M: np.ndarray, p: int) -> int:
    """Forward elimination only, touching the trailing block at each step."""
    M = M.copy()
    m, n = M.shape
    k = 0
    for c in range(n):
        if k >= m:
            break
        nz = np.nonzero(M[k:, c])[0]
        if not len(nz):
            continue
        piv = k + int(nz[0])
        if piv != k:
            M[[k, piv]] = M[[piv, k]]
        inv = pow(int(M[k, c]), -1, p)
        f = M[k + 1:, c] * inv % p
        if f.any():
            M[k + 1:, c:] = (M[k + 1:, c:] - np.outer(f, M[k, c:])) % p
        k += 1
    return k


def _null_rows(field: FieldSpec, R: list[list], piv: list[int], n: int) -> list[list]:
    free = [c for c in range(n) if c not in set(piv)]
    zero = Fraction(0) if field.is_rational else 0
    one = Fraction(1) if field.is_rational else 1
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for i, c in enumerate(piv):
            v[c] = -R[i][f] if field.is_rational else (-R[i][f]) % field.p
        basis.append(v)
    return basis


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace of ``field^ambient``, stored by its canonical RREF basis."""

    field: FieldSpec
    ambient: int
    basis: tuple[tuple, ...]
    pivots: tuple[int, ...] = ()

    @classmethod
    def span(cls, field: FieldSpec, vectors: Iterable[Sequence], ambient: int | None = None) -> "Subspace":
        vecs = [list(v) for v in vectors]
        if ambient is None:
            if not vecs:
                raise ValueError("ambient dimension needed for an empty spanning set")
            ambient = len(vecs[0])
        if any(len(v) != ambient for v in vecs):
            raise ValueError("vector length does not match ambient dimension")
        if not vecs:
            return cls(field, ambient, (), ())
        R, piv = _rref_raw(field, _raw_rows(field, vecs), ambient)
        return cls(field, ambient, _wrap(field, R), tuple(piv))

    @classmethod
    def zero(cls, field: FieldSpec, ambient: int) -> "Subspace":
        return cls(field, ambient, (), ())

    @classmethod
    def full(cls, field: FieldSpec, ambient: int) -> "Subspace":
        return cls.span(field, field.identity(ambient).tolist(), ambient) if ambient else cls.zero(field, 0)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> np.ndarray:
        out = np.empty((self.dim, self.ambient), dtype=object)
        for i, r in enumerate(self.basis):
            out[i, :] = r
        return out

    def contains(self, v: Sequence) -> bool:
        v = [self.field(x) for x in v]
        # reduce against the RREF basis; the residual vanishes iff v lies in the span
        for row, c in zip(self.basis, self.pivots):
            f = v[c]
            if f:
                v = [a - f * b for a, b in zip(v, row)]
        return all(x == 0 for x in v)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.field, list(self.basis) + list(other.basis), self.ambient)

    def coordinates(self, v: Sequence) -> list:
        """Coefficients of ``v`` in the canonical basis (ValueError if ``v`` is outside)."""
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        return [self.field(v[c]) for c in self.pivots]

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.field, self.ambient, self.basis) == (other.field, other.ambient, other.basis)

    def __hash__(self):
        return hash((self.field, self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, field={self.field})"


def row_space(field: FieldSpec, A) -> Subspace:
    m, n = _shape(A)
    return Subspace.span(field, np.asarray(A, dtype=object).tolist() if m else [], n)


def kernel_basis(field: FieldSpec, A) -> Subspace:
    """The right null space ``{v : A v = 0}``."""
    m, n = _shape(A)
    if not m:
        return Subspace.full(field, n)
    R, piv = _rref_raw(field, _raw_rows(field, A), n)
    return Subspace.span(field, _wrap(field, _null_rows(field, R, piv, n)), n)


def solve(field: FieldSpec, A, b) -> list | None:
    """One exact solution of ``A x = b``, or ``None`` when the system is inconsistent."""
    m, n = _shape(A)
    b = list(b)
    if len(b) != m:
        raise ValueError("right-hand side length mismatch")
    aug = [list(r) + [bi] for r, bi in zip(np.asarray(A, dtype=object).tolist(), b)] if m else []
    R, piv = _rref_raw(field, _raw_rows(field, aug) if m else [], n + 1)
    if piv and piv[-1] == n:
        return None
    x = [field.zero] * n
    for i, c in enumerate(piv):
        x[c] = field(R[i][n])
    return x


def inverse(field: FieldSpec, A) -> np.ndarray:
    m, n = _shape(A)
    if m != n:
        raise ValueError("inverse of a non-square matrix")
    aug = np.concatenate([np.asarray(A, dtype=object), field.identity(n)], axis=1)
    R, piv = rref(field, aug)
    if piv[:n] != list(range(n)) or len(piv) > n:
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:]


def det(field: FieldSpec, A) -> object:
    m, n = _shape(A)
    if m != n:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return field.one
    rows = _raw_rows(field, A)
    if field.is_rational:
        # Bareiss without row skipping: the last pivot is the determinant
        den = 1
        M = []
        for r in rows:
            d = 1
            for x in r:
                d = d * x.denominator // math.gcd(d, x.denominator)
            den *= d
            M.append([int(x * d) for x in r])
        sign = 1
        prev = 1
        for k in range(n - 1):
            if M[k][k] == 0:
                sw = next((r for r in range(k + 1, n) if M[r][k] != 0), None)
                if sw is None:
                    return Fraction(0)
                M[k], M[sw] = M[sw], M[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    M[i][j] = (M[k][k] * M[i][j] - M[i][k] * M[k][j]) // prev
                M[i][k] = 0
            prev = M[k][k]
        return Fraction(sign * M[n - 1][n - 1], den)
    p = field.p
    M = [list(r) for r in rows]
    d = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if M[r][k] % p), None)
        if piv is None:
            return ModP(0, p)
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            d = -d
        d = d * M[k][k] % p
        inv = pow(M[k][k], -1, p)
        for i in range(k + 1, n):
            f = M[i][k] * inv % p
            if f:
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[k])]
    return ModP(d, p)


# --- randomness ---------------------------------------------------------------

def trial_rng(master_seed: int, *path: int) -> np.random.Generator:
    """Counter-based generator for one trial, keyed by (master seed, trial path)."""
    ss = np.random.SeedSequence([int(master_seed), *(int(k) for k in path)])
    return np.random.Generator(np.random.Philox(ss))


def sample_scalar(field: FieldSpec, rng: np.random.Generator, bound: int = 9):
    """Integer in ``[-bound, bound]`` over Q; a uniform residue over F_p."""
    if bound < 1:
        raise ValueError("bound must be positive")
    if field.is_rational:
        return Fraction(int(rng.integers(-bound, bound + 1)))
    return ModP(int(rng.integers(0, field.p)), field.p)
