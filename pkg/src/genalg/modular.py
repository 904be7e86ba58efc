"""Unipotent elements in characteristic p: Jordan types and fixed-space counts.

For a cyclic p-group every indecomposable module is a single Jordan block with
eigenvalue 1, so the number of indecomposable summands of a module equals the
dimension of its fixed space; both are computed here independently.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .exact import FieldSpec, kernel_basis, rank
from .stabilizers import fixed_space

Partition = tuple[int, ...]


def jordan_block(size: int, field: FieldSpec) -> np.ndarray:
    J = field.identity(size)
    for i in range(size - 1):
        J[i, i + 1] = field.one
    return J


def block_diag(field: FieldSpec, *blocks: np.ndarray) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    out = field.zeros((n, n))
    k = 0
    for b in blocks:
        d = b.shape[0]
        out[k:k + d, k:k + d] = b
        k += d
    return out


def unipotent_of_type(partition, field: FieldSpec) -> np.ndarray:
    return block_diag(field, *(jordan_block(s, field) for s in partition))


def partitions(n: int, largest: int | None = None):
    """Partitions of n as weakly decreasing tuples, largest parts first."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def _power_ranks(u: np.ndarray, field: FieldSpec) -> list[int]:
    """``[rank (u-I)^k for k = 0, 1, ...]`` up to the first zero; ValueError if never zero."""
    n = u.shape[0]
    if field.is_rational:
        N = u - field.identity(n)
        P = field.identity(n)
        mul = lambda A, B: A @ B  # noqa: E731
    else:
        p = field.p
        N = (np.array([[int(x) for x in r] for r in u.tolist()], dtype=np.int64) - np.eye(n, dtype=np.int64)) % p
        P = np.eye(n, dtype=np.int64)
        mul = lambda A, B: (A @ B) % p  # noqa: E731
    ranks = [n]
    for _ in range(n):
        P = mul(P, N)
        ranks.append(rank(field, P) if P.any() else 0)
        if ranks[-1] == 0:
            return ranks
    raise ValueError("matrix is not unipotent")


def jordan_type(u: np.ndarray, field: FieldSpec) -> Partition:
    """Block sizes of a unipotent matrix, from the ranks of powers of ``u - I``."""
    ranks = _power_ranks(field.array(u), field)
    # blocks of size >= k number ranks[k-1] - ranks[k]
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))] + [0]
    parts = []
    for k in range(len(at_least) - 1, 0, -1):
        parts.extend([k] * (at_least[k - 1] - at_least[k]))
    return tuple(parts)


def indecomposable_count(A: np.ndarray, field: FieldSpec) -> int:
    """Number of indecomposable summands of the module, as ``dim ker(A - I)``."""
    A = field.array(A)
    _power_ranks(A, field)  # raises unless unipotent
    # kernel via full reduction, independent of the power-rank route used by jordan_type
    return kernel_basis(field, A - field.identity(A.shape[0])).dim


def tensor_jordan(a: int, b: int, p: int) -> Partition:
    """Jordan type of ``J_a ⊗ J_b`` over F_p (sizes at most p)."""
    from .exact import GF
    if not (1 <= a <= p and 1 <= b <= p):
        raise ValueError(f"block sizes must lie in 1..{p}")
    f = GF(p)
    return jordan_type(np.kron(jordan_block(a, f), jordan_block(b, f)), f)


def sym2_action(A: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Matrix of ``A ⊗ A`` on the swap-invariant part of the tensor square.

    Basis ``e_i⊗e_j + e_j⊗e_i`` for ``i <= j``.
    """
    A = field.array(A)
    n = A.shape[0]
    K = np.kron(A, A)
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    half = field(Fraction(1, 2))
    out = field.zeros((len(pairs), len(pairs)))
    for col, (i, j) in enumerate(pairs):
        v = field.zeros(n * n)
        v[i * n + j] = v[i * n + j] + field.one
        v[j * n + i] = v[j * n + i] + field.one
        w = K @ v
        for row, (k, l) in enumerate(pairs):
            out[row, col] = w[k * n + l] if k < l else w[k * n + k] * half
    return out


def cu_bound(n: int, s: int) -> int:
    """Upper bound for ``dim C^u`` when u has a Jordan block of size s."""
    if not 2 <= s <= n:
        raise ValueError(f"need 2 <= s <= n, got s={s}, n={n}")
    r = n - s
    return s * (s - 1) + s * r + (r + 1) * r // 2 + r * (s - 1) + r * r + (r + 1) * r * r // 2


def numb(n: int, s: int) -> int:
    """Bound on the dimension of the closure of ``G·C^u``."""
    return cu_bound(n, s) + n * n - n


def dif_value(n: int, s: int) -> int:
    if not 2 <= s <= n:
        raise ValueError(f"need 2 <= s <= n, got s={s}, n={n}")
    return n * n * (3 * s - 5) + n * (-3 * s * s + 4 * s + 3) + (s ** 3 - 2 * s * s + s)


def discriminant(s: int) -> Fraction:
    s = Fraction(s)
    return -3 * s ** 3 * (s - Fraction(20, 3)) - 54 * s * (s - Fraction(22, 27)) + 9


def discriminant_check(s: int) -> bool:
    if s < 2:
        raise ValueError("s must be at least 2")
    return discriminant(s) < 0


def largest_block(u: np.ndarray, field: FieldSpec) -> int:
    return max(jordan_type(u, field))


def verify_cu(u: np.ndarray, n: int, field: FieldSpec) -> bool:
    """``dim C^u <= cu_bound(n, s)`` with s the largest Jordan block of u."""
    u = field.array(u)
    if u.shape != (n, n):
        raise ValueError("matrix size differs from n")
    s = largest_block(u, field)
    if s == 1:
        raise ValueError("identity element: the bound concerns nonidentity unipotents")
    return fixed_space(u, "C", field).dim <= cu_bound(n, s)
