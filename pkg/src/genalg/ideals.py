"""Two-sided ideals, the loci L_d, and simplicity certificates."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import sympy

from .exact import FieldSpec, ModP, Subspace, kernel_basis
from .tensors import StructureTensor, basis_C, left_mult_operator, multiply, right_mult_operator

BRUTEFORCE_BUDGET = 10 ** 6


class BudgetExceeded(RuntimeError):
    pass


def _unit(field: FieldSpec, n: int, i: int) -> list:
    v = [field.zero] * n
    v[i] = field.one
    return v


def is_ideal(m: StructureTensor, S: Subspace) -> bool:
    """True iff ``VS ⊆ S`` and ``SV ⊆ S``."""
    n = m.n
    for s in S.basis:
        for i in range(n):
            e = _unit(m.field, n, i)
            if not S.contains(multiply(m, e, s)) or not S.contains(multiply(m, s, e)):
                return False
    return True


def ideal_closure(m: StructureTensor, gens) -> Subspace:
    """Smallest two-sided ideal containing ``gens``."""
    n, f = m.n, m.field
    S = Subspace.span(f, [list(g) for g in gens], n)
    while True:
        new = list(S.basis)
        for s in S.basis:
            for i in range(n):
                e = _unit(f, n, i)
                new.append(list(multiply(m, e, s)))
                new.append(list(multiply(m, s, e)))
        T = Subspace.span(f, new, n)
        if T.dim == S.dim:
            return T
        S = T


def dim_L_d(n: int, d: int) -> int:
    if not 0 < d <= n:
        raise ValueError(f"need 0 < d <= n, got d={d}, n={n}")
    return n * n * (n + 1) // 2 - (n - d) * d * (2 * n - d + 1) // 2


def ideal_locus_deficit(n: int, d: int) -> int:
    """How far ``dim G + dim L_d - dim P_d`` falls below ``dim C``."""
    if not 0 < d < n:
        raise ValueError(f"need 0 < d < n, got d={d}, n={n}")
    return (n - d) * d * (2 * n - d + 1) // 2 - d * (n - d)


def L_d_by_exclusion(n: int, d: int, field: FieldSpec) -> Subspace:
    """Span (in C-coordinates) of the basis tensors c^{pq}_r not excluded by the ideal conditions."""
    keep = []
    k = 0
    dimC = n * n * (n + 1) // 2
    for p in range(n):
        for q in range(p, n):
            for r in range(n):
                if not ((p < d or q < d) and r >= d):
                    keep.append(_unit(field, dimC, k))
                k += 1
    return Subspace.span(field, keep, dimC)


def L_d_by_conditions(n: int, d: int, field: FieldSpec) -> Subspace:
    """Kernel of ``m ↦ (components outside V_d of e_a e_b, a < d)`` on C."""
    bc = basis_C(n, field)
    rows = []
    for a in range(d):
        for b in range(n):
            for r in range(d, n):
                rows.append([t.entries[a, b, r] for t in bc])
    if not rows:
        return Subspace.full(field, len(bc))
    return kernel_basis(field, np.array(rows, dtype=object))


def gaussian_binomial(n: int, d: int, q: int) -> int:
    num = den = 1
    for i in range(d):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def enumerate_subspaces(field: FieldSpec, n: int, d: int):
    """All d-dimensional subspaces of F_p^n, as canonical RREF bases, in a fixed order."""
    p = field.p
    for piv in itertools.combinations(range(n), d):
        free = [(i, c) for i, pc in enumerate(piv) for c in range(pc + 1, n) if c not in piv]
        for vals in itertools.product(range(p), repeat=len(free)):
            rows = [[0] * n for _ in range(d)]
            for i, pc in enumerate(piv):
                rows[i][pc] = 1
            for (i, c), v in zip(free, vals):
                rows[i][c] = v
            basis = tuple(tuple(ModP(x, p) for x in r) for r in rows)
            yield Subspace(field, n, basis, piv)


def find_ideals_bruteforce(m: StructureTensor, d: int, budget: int = BRUTEFORCE_BUDGET) -> list[Subspace]:
    """Every d-dimensional two-sided ideal, by exhausting the Grassmannian over F_p."""
    if m.field.is_rational:
        raise ValueError("exhaustive ideal search needs a prime field")
    count = gaussian_binomial(m.n, d, m.field.p)
    if count > budget:
        raise BudgetExceeded(f"{count} subspaces exceed budget {budget}")
    return [S for S in enumerate_subspaces(m.field, m.n, d) if is_ideal(m, S)]


def _flat(a: np.ndarray) -> list:
    return list(a.reshape(-1))


def multiplication_algebra(m: StructureTensor) -> Subspace:
    """Unital associative algebra generated by all left and right multiplications, in End(V) ≅ k^{n²}."""
    n, f = m.n, m.field
    gens = []
    for i in range(n):
        e = _unit(f, n, i)
        gens.append(left_mult_operator(m, e))
        gens.append(right_mult_operator(m, e))
    S = Subspace.span(f, [_flat(f.identity(n))] + [_flat(g) for g in gens], n * n)
    while True:
        mats = [np.array(b, dtype=object).reshape(n, n) for b in S.basis]
        new = list(S.basis) + [_flat(g @ a) for g in gens for a in mats]
        T = Subspace.span(f, new, n * n)
        if T.dim == S.dim:
            return T
        S = T


@dataclass
class Verdict:
    status: str  # "simple" | "not_simple" | "undetermined"
    certificate: dict = field(default_factory=dict)
    witness: Subspace | None = None

    def __bool__(self):
        return self.status == "simple"


def _char_factors(f: FieldSpec, a: np.ndarray):
    x = sympy.Symbol("x")
    if f.is_rational:
        M = sympy.Matrix(a.tolist())
        poly = M.charpoly(x)
        return [sympy.Poly(g, x, domain="QQ") for g, _ in sympy.factor_list(poly.as_expr(), x)[1]]
    M = sympy.Matrix([[int(v) for v in r] for r in a.tolist()])
    poly = sympy.Poly(M.charpoly(x).as_expr(), x, modulus=f.p)
    return [g for g, _ in poly.factor_list()[1]]


def _poly_at(f: FieldSpec, poly, a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    out = f.zeros((n, n))
    for c in poly.all_coeffs():
        cf = f(sympy.Rational(c).p) / f(sympy.Rational(c).q)
        out = out @ a + f.identity(n) * cf
    return out


def _submodule(f: FieldSpec, mats: list[np.ndarray], v: list, n: int) -> Subspace:
    S = Subspace.span(f, [v], n)
    while True:
        T = Subspace.span(f, list(S.basis) + [list(a @ np.array(s, dtype=object)) for a in mats for s in S.basis], n)
        if T.dim == S.dim:
            return T
        S = T


def _search_witness(m: StructureTensor, alg: Subspace) -> Subspace | None:
    """Look for a proper nonzero ideal among modules cut out by eigen-data of algebra elements."""
    n, f = m.n, m.field
    for i in range(n):
        S = ideal_closure(m, [_unit(f, n, i)])
        if 0 < S.dim < n:
            return S
    prods = [list(multiply(m, _unit(f, n, i), _unit(f, n, j))) for i in range(n) for j in range(n)]
    sq = Subspace.span(f, prods, n)
    if 0 < sq.dim < n:
        return sq
    mats = [np.array(b, dtype=object).reshape(n, n) for b in alg.basis]
    for a in mats:
        for poly in _char_factors(f, a):
            N = kernel_basis(f, _poly_at(f, poly, a))
            if N.dim == n:
                continue
            for v in N.basis:
                S = _submodule(f, mats, list(v), n)
                if S.dim < n:
                    return S
            # dual side: an invariant subspace of V* gives its annihilator
            Nt = kernel_basis(f, _poly_at(f, poly, a.T))
            for w in Nt.basis:
                U = _submodule(f, [b.T for b in mats], list(w), n)
                if U.dim < n:
                    return kernel_basis(f, U.matrix())
    return None


def simplicity_verdict(m: StructureTensor, policy: str = "auto", budget: int = BRUTEFORCE_BUDGET) -> Verdict:
    """Decide simplicity via the multiplication algebra.

    ``policy="auto"`` uses the algebraic witness search only; ``"bruteforce"``
    additionally exhausts subspaces over F_p when the budget allows.
    """
    n, f = m.n, m.field
    if m.is_zero():
        return Verdict("not_simple", {"reason": "zero product"}, Subspace.span(f, [_unit(f, n, 0)], n))
    alg = multiplication_algebra(m)
    if alg.dim == n * n:
        return Verdict("simple", {"mult_algebra_dim": alg.dim})
    cert = {"mult_algebra_dim": alg.dim}
    w = _search_witness(m, alg)
    if w is not None and is_ideal(m, w):
        return Verdict("not_simple", cert, w)
    if policy == "bruteforce" and not f.is_rational:
        for d in range(1, n):
            found = find_ideals_bruteforce(m, d, budget)
            if found:
                return Verdict("not_simple", cert, found[0])
    return Verdict("undetermined", cert)
