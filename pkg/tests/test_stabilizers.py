import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from genalg.exact import GF, QQ, Subspace, inverse, rank, trial_rng
from genalg.stabilizers import (BudgetExceeded, automorphisms_bruteforce, fixed_space, gl_order,
                                orbit_dim, projective_stabilizer_dim, stabilizer_lie, trdeg_estimate)
from genalg.tensors import StructureTensor, basis_C, g_action, make_m0, make_pm, random_tensor
from genalg.torus import fixed_dim_by_weights


def rand_invertible(rng, n, f=QQ):
    while True:
        g = f.array(rng.integers(-3, 4, (n, n)).tolist())
        if rank(f, g) == n:
            return g


def fixed_dim_oracle(g) -> int:
    """dim ker(g - 1) on C via sympy, acting on the basis tensors with g_action."""
    n = g.shape[0]
    basis = basis_C(n)
    B = sympy.Matrix([[sympy.Rational(str(x)) for x in b.vector()] for b in basis]).T
    imgs = sympy.Matrix([[sympy.Rational(str(x)) for x in g_action(g, b).vector()] for b in basis]).T
    return len((imgs - B).nullspace())


# ---- stabilizer / orbit ---------------------------------------------------------------------

def test_stabilizer_examples():
    assert stabilizer_lie(StructureTensor.zero(2)).dim == 4
    assert stabilizer_lie(make_m0(3)).dim == 0
    assert stabilizer_lie(make_pm([1, 0], "+", 2)).dim == 2


def test_orbit_dim_examples():
    for n in range(2, 7):
        assert orbit_dim(make_m0(n)) == n * n
    assert orbit_dim(StructureTensor.zero(3)) == 0
    assert orbit_dim(make_pm([1, 0], "+", 2)) == 2


def test_stabilizer_of_pm_is_kernel_of_ell():
    """For m_{ℓ+} the Lie stabilizer is {x : ℓ∘x = 0}."""
    S = stabilizer_lie(make_pm([1, 0], "+", 2))
    # x is flattened row-major; ℓ¹∘x = 0 means the first row of x vanishes
    for v in S.basis:
        assert v[0] == 0 and v[1] == 0


def test_projective_stabilizer_examples():
    assert projective_stabilizer_dim(random_tensor("C", 3, QQ, 1729)) == 1
    assert projective_stabilizer_dim(make_m0(3)) == 1
    m = make_pm([1, 0, 0], "+", 3)
    assert projective_stabilizer_dim(m) >= max(1, stabilizer_lie(m).dim)
    with pytest.raises(ValueError):
        projective_stabilizer_dim(StructureTensor.zero(2))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["M", "C"]))
def test_stabilizer_equivariance(seed, space):
    rng = trial_rng(seed)
    n = 2
    g = rand_invertible(rng, n)
    # low-rank tensors have nontrivial stabilizers, which makes the check meaningful
    m = make_pm(rng.integers(-2, 3, n).tolist(), "+", n) if space == "C" else random_tensor("M", n, QQ, rng, 1)
    S = stabilizer_lie(m)
    h = inverse(QQ, g)
    conj = [list((g @ QQ.array(list(v)).reshape(n, n) @ h).reshape(-1)) for v in S.basis]
    assert stabilizer_lie(g_action(g, m)) == Subspace.span(QQ, conj, n * n)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_orbit_dim_constant_on_orbits(seed):
    rng = trial_rng(seed)
    g = rand_invertible(rng, 3)
    m = random_tensor("C", 3, QQ, rng, 2)
    assert orbit_dim(g_action(g, m)) == orbit_dim(m)


def test_generic_lie_stabilizer_trivial():
    for t in range(100):
        assert stabilizer_lie(random_tensor("C", 3, QQ, trial_rng(1729, 4, t), 9)).dim == 0


# ---- trdeg ----------------------------------------------------------------------------------------

@pytest.mark.parametrize("space,n,expected", [("M", 2, 4), ("C", 2, 2), ("M", 3, 18), ("C", 3, 9)])
def test_trdeg(space, n, expected):
    assert trdeg_estimate(space, n, 50, 1729) == expected


def test_trdeg_needs_samples():
    with pytest.raises(ValueError):
        trdeg_estimate("M", 2, 0)


# ---- fixed spaces ------------------------------------------------------------------------------

def test_fixed_space_examples():
    assert fixed_space(QQ.identity(2), "C").dim == 6
    assert fixed_space(QQ.identity(2) * 2, "C").dim == 0
    assert fixed_space(QQ.array([[1, 0], [0, -1]]), "C").dim == 3
    assert fixed_space(QQ.identity(2), "M").dim == 8
    assert fixed_space(QQ.identity(3), "A").dim == 9


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 4).flatmap(lambda n: st.lists(
    st.sampled_from([-4, -3, -2, -1, 1, 2, 3, 4]), min_size=n, max_size=n)))
def test_fixed_space_matches_weight_sum(t):
    g = QQ.zeros((len(t), len(t)))
    for i, x in enumerate(t):
        g[i, i] = QQ(x)
    assert fixed_space(g, "C").dim == fixed_dim_by_weights(t)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_fixed_space_matches_sympy_oracle(seed):
    rng = trial_rng(seed)
    # elements of finite order have sizable fixed spaces
    P = QQ.array(np.eye(3, dtype=int)[rng.permutation(3)].tolist())
    D = QQ.array(np.diag(rng.choice([-1, 1], 3)).tolist())
    g = P @ D
    assert fixed_space(g, "C").dim == fixed_dim_oracle(g)


# ---- automorphisms ---------------------------------------------------------------------------

@pytest.mark.parametrize("n,p", [(2, 3), (2, 5), (3, 3)])
def test_aut_m0(n, p):
    auts = automorphisms_bruteforce(make_m0(n, GF(p)))
    assert len(auts) == math.factorial(n)
    for g in auts:  # permutation matrices
        assert sorted(int(x) for x in g.reshape(-1)) == [0] * (n * n - n) + [1] * n


def test_aut_zero_tensor_is_whole_group():
    assert len(automorphisms_bruteforce(StructureTensor.zero(2, GF(3)))) == gl_order(2, 3) == 48


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_automorphisms_form_a_group(seed):
    f = GF(3)
    m = random_tensor("C", 2, f, seed)
    auts = automorphisms_bruteforce(m)
    key = {tuple(int(x) for x in g.reshape(-1)) for g in auts}
    for g in auts:
        assert g_action(g, m) == m
        assert tuple(int(x) for x in inverse(f, g).reshape(-1)) in key
        for h in auts:
            assert tuple(int(x) for x in (g @ h).reshape(-1)) in key


def test_aut_budget():
    with pytest.raises(BudgetExceeded):
        automorphisms_bruteforce(make_m0(3, GF(7)))
    with pytest.raises(ValueError):
        automorphisms_bruteforce(make_m0(2))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 3), st.sampled_from([QQ, GF(5)]))
def test_tangent_matrix_columns_are_lie_actions(seed, n, f):
    from genalg.stabilizers import tangent_matrix
    from genalg.tensors import lie_action
    m = random_tensor("M", n, f, seed)
    T = tangent_matrix(m)
    for a in range(n):
        for b in range(n):
            x = f.zeros((n, n))
            x[a, b] = f.one
            assert list(T[:, a * n + b]) == lie_action(x, m).vector()
