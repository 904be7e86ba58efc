from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from genalg.exact import GF, QQ, rank, trial_rng
from genalg.tensors import (StructureTensor, TensorSpace, basis_A, basis_C, basis_C0, decompose_A,
                            decompose_C, elementary, g_action, lie_action, left_mult_operator, make_m0,
                            make_pm, multiply, random_tensor, right_mult_operator, split, theta,
                            trace_form)


def e(i, n, f=QQ):
    v = f.zeros(n)
    v[i] = f.one
    return v


def single(n, idx, val=1, f=QQ):
    a = f.zeros((n, n, n))
    a[idx] = f(val)
    return StructureTensor(f, a)


def rand_matrix(rng, n, f=QQ, bound=3):
    return f.array(rng.integers(-bound, bound + 1, (n, n)).tolist())


def rand_invertible(rng, n, f=QQ):
    while True:
        g = rand_matrix(rng, n, f)
        if rank(f, g) == n:
            return g


def sympy_g_action(g, m: StructureTensor):
    """Oracle: evaluate g·φ(g⁻¹a, g⁻¹b) on basis pairs with sympy matrices."""
    n = m.n
    G = sympy.Matrix([[sympy.Rational(str(x)) for x in row] for row in g])
    H = G.inv()
    out = [[[0] * n for _ in range(n)] for _ in range(n)]
    C = [[[sympy.Rational(str(m.entries[i, j, k])) for k in range(n)] for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            a, b = H[:, i], H[:, j]
            prod = sympy.zeros(n, 1)
            for p in range(n):
                for q in range(n):
                    for k in range(n):
                        prod[k] += a[p] * b[q] * C[p][q][k]
            res = G * prod
            for k in range(n):
                out[i][j][k] = Fraction(int(res[k].p), int(res[k].q))
    return StructureTensor.from_array(QQ, out)


# ---- multiply / named tensors -------------------------------------------------------

def test_multiply_examples():
    m0 = make_m0(2)
    assert list(multiply(m0, e(0, 2), e(0, 2))) == [1, 0]
    assert list(multiply(m0, e(0, 2), e(1, 2))) == [0, 0]
    mp = make_pm([1, 0], "+", 2)
    assert list(multiply(mp, e(0, 2), e(1, 2))) == [0, 1]
    with pytest.raises(ValueError):
        multiply(m0, e(0, 3), e(0, 2))


def test_make_m0():
    assert make_m0(1).nonzero() == {(0, 0, 0): 1}
    assert len(make_m0(2).nonzero()) == 2
    for n in range(1, 5):
        assert theta(make_m0(n)) == make_m0(n)


def test_make_pm_examples():
    assert make_pm([0, 0], "+", 2).is_zero()
    mm = make_pm([1, 0], "-", 2)
    assert list(multiply(mm, e(0, 2), e(1, 2))) == [0, 1]
    assert list(multiply(mm, e(1, 2), e(0, 2))) == [0, -1]
    assert TensorSpace("C", 3).contains(make_pm([1, 2, 3], "+", 3))
    assert TensorSpace("A", 3).contains(make_pm([1, 2, 3], "-", 3))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_pm_left_trace(n):
    """tr(a ↦ va) is (n+1)ℓ(v) for the + tensor and (n-1)ℓ(v) for the − tensor.

    Direct count: v·a = ℓ(v)a ± ℓ(a)v contributes nℓ(v) from the first term and
    ±ℓ(v) from the rank-one second term.
    """
    rng = trial_rng(5, n)
    ell = rng.integers(-5, 6, n).tolist()
    v = rng.integers(-5, 6, n).tolist()
    lv = sum(a * b for a, b in zip(ell, v))
    for sign, shift in (("+", 1), ("-", -1)):
        L = left_mult_operator(make_pm(ell, sign, n), v)
        assert sum(L[i, i] for i in range(n)) == (n + shift) * lv


def test_left_mult_examples():
    L = left_mult_operator(make_m0(3), e(0, 3))
    assert (L == QQ.array([[1, 0, 0], [0, 0, 0], [0, 0, 0]])).all()
    assert not left_mult_operator(StructureTensor.zero(3), [1, 2, 3]).any()


def test_left_right_operators_agree_with_multiply():
    rng = trial_rng(1, 2)
    m = random_tensor("M", 3, QQ, rng)
    a, v = QQ.array([1, -2, 3]), QQ.array([0, 4, -1])
    assert list(left_mult_operator(m, v) @ a) == list(multiply(m, v, a))
    assert list(right_mult_operator(m, v) @ a) == list(multiply(m, a, v))


# ---- theta / split ----------------------------------------------------------------------

def test_theta_examples():
    t = single(2, (0, 1, 0))
    assert theta(t) == single(2, (1, 0, 0))
    m = random_tensor("M", 3, QQ, 4)
    assert theta(theta(m)) == m


def test_split_examples():
    h = Fraction(1, 2)
    c_part, a_part = split(single(2, (0, 1, 0)))
    assert c_part.nonzero() == {(0, 1, 0): h, (1, 0, 0): h}
    assert a_part.nonzero() == {(0, 1, 0): h, (1, 0, 0): -h}
    m = random_tensor("C", 3, QQ, 9)
    assert split(m) == (m, StructureTensor.zero(3))
    assert split(make_m0(3))[1].is_zero()


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([QQ, GF(5)]), st.integers(1, 4))
def test_split_invariants(seed, f, n):
    m = random_tensor("M", n, f, seed)
    c_part, a_part = split(m)
    assert theta(c_part) == c_part and theta(a_part) == -a_part
    assert c_part + a_part == m


# ---- actions -------------------------------------------------------------------------------

def test_g_action_examples():
    m = random_tensor("M", 2, QQ, 3)
    assert g_action(QQ.identity(2), m) == m
    assert g_action(QQ.identity(2) * 2, make_m0(2)) == make_m0(2).scale(Fraction(1, 2))
    P = QQ.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    assert g_action(P, make_m0(3)) == make_m0(3)
    with pytest.raises((ValueError, ZeroDivisionError)):
        g_action(QQ.array([[1, 1], [1, 1]]), m)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 3))
def test_g_action_matches_sympy_oracle(seed, n):
    rng = trial_rng(seed)
    g = rand_invertible(rng, n)
    m = random_tensor("M", n, QQ, rng, 4)
    assert g_action(g, m) == sympy_g_action(g, m)


def test_lie_action_examples():
    c = make_m0(2)
    got = lie_action(elementary(0, 1, 2), c)
    assert got.nonzero() == {(0, 0, 1): 1, (0, 1, 1): -1, (1, 0, 1): -1}
    m = random_tensor("M", 3, QQ, 2)
    assert lie_action(QQ.identity(3), m) == -m
    for i in range(3):
        assert lie_action(elementary(i, i, 3), make_m0(3)) == single(3, (i, i, i), -1)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 3), st.sampled_from([QQ, GF(7)]))
def test_group_law(seed, n, f):
    rng = trial_rng(seed)
    g1, g2 = rand_invertible(rng, n, f), rand_invertible(rng, n, f)
    m = random_tensor("M", n, f, rng, 4)
    assert g_action(g1, g_action(g2, m)) == g_action(g1 @ g2, m)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 3))
def test_isomorphism_property(seed, n):
    rng = trial_rng(seed)
    g = rand_invertible(rng, n)
    m = random_tensor("M", n, QQ, rng, 4)
    a, b = QQ.array(rng.integers(-4, 5, n).tolist()), QQ.array(rng.integers(-4, 5, n).tolist())
    assert list(multiply(g_action(g, m), g @ a, g @ b)) == list(g @ multiply(m, a, b))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 3))
def test_lie_bracket(seed, n):
    rng = trial_rng(seed)
    x, y = rand_matrix(rng, n), rand_matrix(rng, n)
    m = random_tensor("M", n, QQ, rng, 4)
    lhs = lie_action(x, lie_action(y, m)) - lie_action(y, lie_action(x, m))
    assert lhs == lie_action(x @ y - y @ x, m)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_first_order_consistency(seed):
    """The remainder g(I+tx)·m − m − t x·m is second order in t."""
    rng = trial_rng(seed)
    n = 2
    x = rand_matrix(rng, n, bound=1)  # keep t·x small enough to be in the quadratic regime
    m = random_tensor("M", n, QQ, rng, 4)

    def r(t):
        d = g_action(QQ.identity(n) + x * t, m) - m - lie_action(x, m).scale(t)
        return max((abs(v) for v in d.nonzero().values()), default=0)

    for t in (Fraction(1, 8), Fraction(1, 16)):
        assert r(t / 2) <= Fraction(3, 10) * r(t)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["M", "C", "A"]), st.sampled_from([QQ, GF(7)]))
def test_action_matrix_matches_g_action(seed, space, f):
    rng = trial_rng(seed)
    n = 3 if space != "M" else 2
    g = rand_invertible(rng, n, f)
    ts = TensorSpace(space, n, f)
    m = random_tensor(space, n, f, rng, 4)
    assert ts.tensor(list(ts.action_matrix(g) @ f.array(ts.coords(m)))) == g_action(g, m)


# ---- commutativity / bases ------------------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_commutativity(seed):
    rng = trial_rng(seed)
    n = 3
    a, b = QQ.array(rng.integers(-9, 10, n).tolist()), QQ.array(rng.integers(-9, 10, n).tolist())
    mc, ma = random_tensor("C", n, QQ, rng), random_tensor("A", n, QQ, rng)
    assert list(multiply(mc, a, b)) == list(multiply(mc, b, a))
    assert list(multiply(ma, a, b)) == list(-multiply(ma, b, a))


@pytest.mark.parametrize("n", range(1, 7))
def test_basis_dimensions(n):
    bc = basis_C(n)
    assert len(bc) == rank(QQ, [b.vector() for b in bc]) == n * n * (n + 1) // 2
    assert all(theta(b) == b for b in bc)
    if n > 1:
        ba = basis_A(n)
        assert len(ba) == rank(QQ, [b.vector() for b in ba]) == (n - 1) * n * n // 2
        assert all(theta(b) == -b for b in ba)


def test_C0_is_traceless():
    for b in basis_C0(3):
        assert not trace_form(b).any()
    assert len(basis_C0(3)) == 18 - 3


def test_random_tensor_spaces():
    assert theta(random_tensor("C", 3, QQ, 1)) == random_tensor("C", 3, QQ, 1)
    ma = random_tensor("A", 2, GF(5), 1)
    assert theta(ma) == -ma and TensorSpace("A", 2, GF(5)).contains(ma)
    assert random_tensor("M", 3, QQ, 42) == random_tensor("M", 3, QQ, 42)
    with pytest.raises(ValueError):
        random_tensor("C0", 3, GF(3), 0)
    with pytest.raises(ValueError):
        random_tensor("Q", 3, QQ, 0)


# ---- decompositions -------------------------------------------------------------------------

def test_decompose_C_examples():
    mp = make_pm([1, -2, 3], "+", 3)
    z, p = decompose_C(mp)
    assert z.is_zero() and p == mp
    m0 = basis_C0(3)[4]
    assert decompose_C(m0) == (m0, StructureTensor.zero(3))
    with pytest.raises(ValueError):
        decompose_C(random_tensor("C", 3, GF(3), 0))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 4))
def test_decompositions_reassemble(seed, n):
    m = random_tensor("C", n, QQ, seed)
    z, p = decompose_C(m)
    assert z + p == m and not trace_form(z).any()
    a = random_tensor("A", n, QQ, seed)
    za, pa = decompose_A(a)
    assert za + pa == a and not trace_form(za).any()


def test_decompose_refuses_bad_characteristic():
    # 5 divides n + 1 = 5 here, which is where the + splitting genuinely breaks down
    with pytest.raises(ValueError):
        decompose_C(make_pm([1, 0, 0, 0], "+", 4, GF(5)))
    assert decompose_C(make_pm([1, 0, 0], "+", 3, GF(5)))[0].is_zero()


# ---- representation ------------------------------------------------------------------------

def test_tensor_equality_and_hash():
    a, b = random_tensor("M", 2, QQ, 8), random_tensor("M", 2, QQ, 8)
    assert a == b and hash(a) == hash(b) and len({a, b}) == 1
    assert StructureTensor.from_vector(QQ, 2, a.vector()) == a
    with pytest.raises(ValueError):
        a + make_m0(3)
    with pytest.raises((TypeError, ValueError)):
        a.entries[0, 0, 0] = 5
    assert np.array_equal(a.entries, b.entries)
