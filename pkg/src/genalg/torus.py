"""Weights of the diagonal torus on commutative tensors, α-series, and the h bound.

Characters are integer exponent tuples: ``(a_0, ..., a_{n-1})`` stands for
``diag(t) ↦ Π t_i^{a_i}``. Simple roots are indexed from 0: ``α_s = ε_s / ε_{s+1}``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .exact import QQ, FieldSpec
from .stabilizers import fixed_space

Weight = tuple[int, ...]

FORM_LENGTHS = {1: 4, 2: 3, 3: 1, 4: 2, 5: 2, 6: 3}


@dataclass(frozen=True)
class AlphaSeries:
    s: int
    form: int
    weights: tuple[Weight, ...]


def _e(n: int, *terms: tuple[int, int]) -> Weight:
    w = [0] * n
    for i, a in terms:
        w[i] += a
    return tuple(w)


def weight_system(n: int) -> list[tuple[Weight, int]]:
    """Weights of C with multiplicities, read off the basis ``c^{pq}_r`` (weight ε_p⁻¹ε_q⁻¹ε_r)."""
    cnt = Counter()
    for p in range(n):
        for q in range(p, n):
            for r in range(n):
                cnt[_e(n, (p, -1), (q, -1), (r, 1))] += 1
    return sorted(cnt.items())


def alpha(n: int, s: int) -> Weight:
    return _e(n, (s, 1), (s + 1, -1))


def _add(u: Weight, v: Weight, k: int = 1) -> Weight:
    return tuple(a + k * b for a, b in zip(u, v))


def chains(n: int, s: int) -> list[tuple[Weight, ...]]:
    """Maximal α_s-strings in the weight set, found by walking from each string's lower end."""
    delta = {w for w, _ in weight_system(n)}
    a = alpha(n, s)
    out = []
    for w in sorted(delta):
        if _add(w, a, -1) in delta:
            continue
        chain = [w]
        while _add(chain[-1], a) in delta:
            chain.append(_add(chain[-1], a))
        out.append(tuple(chain))
    return out


def series_by_form(n: int, s: int) -> dict[int, list[tuple[Weight, ...]]]:
    """The six families of α_s-strings written out explicitly by index pattern."""
    t = s + 1
    others = [i for i in range(n) if i not in (s, t)]
    E = lambda *terms: _e(n, *terms)  # noqa: E731
    forms = {k: [] for k in range(1, 7)}
    forms[1].append((E((s, -2), (t, 1)), E((s, -1)), E((t, -1)), E((t, -2), (s, 1))))
    for p in others:
        forms[2].append((E((p, -1), (s, -1), (t, 1)), E((p, -1)), E((p, -1), (t, -1), (s, 1))))
    for i, p in enumerate(others):
        for q in others[i:]:
            for r in others:
                if r not in (p, q):
                    forms[3].append((E((p, -1), (q, -1), (r, 1)),))
            forms[4].append((E((p, -1), (q, -1), (t, 1)), E((p, -1), (q, -1), (s, 1))))
    for q in others:
        for r in others:
            if r != q:
                forms[5].append((E((s, -1), (q, -1), (r, 1)), E((t, -1), (q, -1), (r, 1))))
    for r in others:
        forms[6].append((E((s, -2), (r, 1)), E((s, -1), (t, -1), (r, 1)), E((t, -2), (r, 1))))
    return forms


def form_counts_table(n: int) -> tuple[int, ...]:
    return (1, n - 2, (n - 2) ** 2 * (n - 3) // 2, (n - 1) * (n - 2) // 2, (n - 2) * (n - 3), n - 2)


def alpha_series(n: int, s: int) -> list[AlphaSeries]:
    """All α_s-series, each tagged with the form (1-6) it matches.

    Raises ``RuntimeError`` if an enumerated string matches none of the forms.
    """
    if not 0 <= s <= n - 2:
        raise ValueError(f"need 0 <= s <= n-2, got s={s}, n={n}")
    lookup = {}
    for form, lst in series_by_form(n, s).items():
        for ws in lst:
            lookup[ws] = form
    out = []
    for ch in chains(n, s):
        if ch not in lookup:
            raise RuntimeError(f"α_{s}-string {ch} matches no known form")
        out.append(AlphaSeries(s, lookup[ch], ch))
    return out


def form_counts(n: int, s: int) -> tuple[int, ...]:
    cnt = Counter(a.form for a in alpha_series(n, s))
    return tuple(cnt.get(k, 0) for k in range(1, 7))


def h_bound(n: int) -> int:
    if n < 2:
        raise ValueError("n must be at least 2")
    return (n + 1 + n * (n - 2) + (n - 2) ** 2 * (n - 3) // 2 + (n - 1) * (n - 2) // 2
            + (n - 2) * (n - 3) + 2 * (n - 2))


def verify_h2(n: int) -> bool:
    return h_bound(n) + n * n - n < n * n * (n + 1) // 2


def evaluate(w: Weight, t, field: FieldSpec = QQ):
    """Value of the character ``w`` at ``diag(t)``."""
    out = field.one
    for ti, a in zip(t, w):
        ti = field(ti)
        out = out * (ti ** a if a >= 0 else (field.one / ti) ** (-a))
    return out


def fixed_dim_by_weights(t, field: FieldSpec = QQ) -> int:
    """``Σ dim C_μ`` over weights with ``μ(t) = 1``."""
    return sum(k for w, k in weight_system(len(t)) if evaluate(w, t, field) == field.one)


def eigen_dims_by_weights(t, field: FieldSpec = QQ) -> dict:
    """Dimensions of the eigenspaces of ``diag(t)`` on C, grouped by eigenvalue."""
    out = Counter()
    for w, k in weight_system(len(t)):
        out[evaluate(w, t, field)] += k
    return dict(out)


def _diag(t, field):
    n = len(t)
    g = field.zeros((n, n))
    for i, x in enumerate(t):
        g[i, i] = field(x)
    return g


def check_fixed_bound(n: int, t, field: FieldSpec = QQ) -> bool:
    """``dim C^t <= h(n)`` for the non-scalar diagonal element ``diag(t)``."""
    t = [field(x) for x in t]
    if len(t) != n:
        raise ValueError("diagonal length differs from n")
    if any(x == 0 for x in t):
        raise ValueError("diagonal element is singular")
    if all(x == t[0] for x in t):
        raise ValueError("scalar element: the bound applies to non-scalar t only")
    return fixed_space(_diag(t, field), "C", field).dim <= h_bound(n)
