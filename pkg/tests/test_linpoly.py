import pytest
from hypothesis import given, settings, strategies as st

from amcurves.errors import InseparableError, ParameterError
from amcurves.gf import enumerate_elements, make_field, subfield_elements
from amcurves.linpoly import (
    LinearizedPoly,
    classify_linearity,
    compose,
    kernel,
    kernel_in,
    linpoly,
    random_separable,
    solve,
    splitting_degree,
    values,
)
from oracles import naive_field_for, naive_lin

F3, F9, F27, F81 = (make_field(3, d) for d in (1, 2, 3, 4))


# --- evaluation -------------------------------------------------------------


def test_eval_classical_at_one():
    L = linpoly(F3, [-1, 1])
    assert L(F3(1)) == 0


def test_eval_at_gf9_generator():
    L = linpoly(F3, [-1, 1]).over(F9)
    g = F9.gen()
    assert not g.in_subfield(1)
    assert L(g) == g**3 - g
    assert L(g) != 0


def test_eval_vanishes_at_zero():
    assert linpoly(F3, [1, 1, 1])(F3(0)) == 0
    assert linpoly(F3, [1, 1, 1]).over(F81)(F81(0)) == 0


@pytest.mark.parametrize("coeffs,F", [([-1, 1], F27), ([1, 1, 1], F81), ([2, 0, 1], F81), ([1, 2], F9)])
def test_value_table_matches_oracle(coeffs, F):
    L = linpoly(F3, coeffs).over(F)
    Fn = naive_field_for(F)
    cidx = [a.index for a in L.coeffs]
    v = values(L, F)
    for x in range(F.order):
        assert v[x] == naive_lin(Fn, cidx, L.qbar, x)


def test_value_table_over_gf9_coefficients():
    lam = F9.gen()
    L = LinearizedPoly(2, F9, (lam, F9(1)))  # lam T + T^9
    F = make_field(3, 4)
    Lf = L.over(F)
    v = values(Lf, F)
    for x in enumerate_elements(F):
        assert v[x.index] == (Lf.coeffs[0] * x + x**9).index


# --- linearity class ----------------------------------------------------------


def test_classify_examples():
    assert classify_linearity(linpoly(F3, [1, 1, 1])) == 1
    assert classify_linearity(linpoly(F3, [1, 0, 1])) == 2
    assert classify_linearity(linpoly(F3, [1, 0, 1, 0, 1])) == 2
    assert classify_linearity(linpoly(F3, [-1, 1])) == 1


def test_qbar_squared_linearized_is_gf9_semilinear_by_sampling():
    # T^81 + T^9 + T: a_1 = a_3 = 0 and L(c x) = c L(x) for c in GF(9)
    L = linpoly(F3, [1, 0, 1, 0, 1])
    assert not L.coeffs[1] and not L.coeffs[3]
    F = make_field(3, 8)
    Lf = L.over(F)
    sub9 = subfield_elements(F, 2)
    for i in range(0, F.order, 331):
        x = F.from_index(i)
        for c in sub9:
            assert Lf(c * x) == c * Lf(x)


# --- kernels -------------------------------------------------------------------


def test_kernel_of_classical_is_prime_field():
    K = kernel(linpoly(F3, [-1, 1]))
    assert K.ambient.d == 1
    assert sorted(r.index for r in K) == [0, 1, 2]


def test_kernel_of_t3_plus_t_is_zero_and_square_roots_of_minus_one():
    K = kernel(linpoly(F3, [1, 1]))
    assert K.ambient.d == 2
    F = K.ambient
    by_enum = {x for x in enumerate_elements(F) if x * x == -F.one()}
    assert len(by_enum) == 2
    assert set(K) == by_enum | {F.zero()}


def test_kernel_of_t9_minus_t_is_gf9():
    K = kernel(linpoly(F3, [-1, 0, 1]))
    assert len(K) == 9
    F = K.ambient
    assert all(x**9 == x for x in K)
    assert {x for x in enumerate_elements(F) if x**9 == x} == set(K)


@pytest.mark.parametrize("coeffs", [[-1, 1], [1, 1], [1, 1, 1], [2, 1, 1], [2, 0, 0, 1]])
def test_kernel_equals_brute_force_roots(coeffs):
    L = linpoly(F3, coeffs)
    K = kernel(L)
    F = K.ambient
    brute = {x for x in enumerate_elements(F) if L.over(F)(x) == 0}
    assert set(K) == brute
    assert len(K) == L.degree


def test_splitting_degree_steps_through_multiples_of_nm():
    # T^27 + 2T^3 + T splits over GF(3^26); the first multiple of 3 that works is 78
    L = linpoly(F3, [1, 2, 0, 1])
    assert splitting_degree(L) == 78
    assert len(kernel_in(L, make_field(3, 26))) == 27
    K = kernel(L)
    assert len(K) == 27 and all(L.over(K.ambient)(x) == 0 for x in K)


def test_kernel_in_small_field_is_partial():
    L = linpoly(F3, [1, 1])
    assert [r.index for r in kernel_in(L, F3)] == [0]
    with pytest.raises(ParameterError, match="GF\\(3\\^2\\)"):
        kernel(L, F27)


def test_inseparable_rejected():
    L = linpoly(F3, [0, 1])
    with pytest.raises(InseparableError):
        kernel(L)
    with pytest.raises(InseparableError):
        splitting_degree(L)


def test_leading_coefficient_required():
    with pytest.raises(ParameterError):
        linpoly(F3, [1, 0])


# --- composition ---------------------------------------------------------------


def test_compose_identity():
    M = linpoly(F3, [1, 2, 1])
    T = linpoly(F3, [1])
    assert compose(T, M) == M
    assert compose(M, T) == M


def test_compose_classical_with_itself():
    L = linpoly(F3, [-1, 1])
    # (x^3 - x)^3 - (x^3 - x) = x^9 - 2 x^3 + x = x^9 + x^3 + x mod 3
    assert compose(L, L) == linpoly(F3, [1, 1, 1])


def test_compose_is_evaluation_composition():
    import random

    L = LinearizedPoly(1, F9, (F9.gen(), F9(2), F9(1)))
    M = linpoly(F3, [1, 1]).over(F9)
    LM = compose(L, M)
    F = make_field(3, 6)
    rng = random.Random(5)
    Lf, Mf, LMf = L.over(F), M.over(F), LM.over(F)
    for _ in range(100):
        x = F.from_index(rng.randrange(F.order))
        assert LMf(x) == Lf(Mf(x))


# --- random draws and solving ----------------------------------------------------


def test_random_separable_seed_7():
    L = random_separable(F3, 1, 7)
    assert L.coeffs[0] and L.coeffs[1]
    assert len(kernel(L)) == 3
    assert random_separable(F3, 1, 7) == L


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(0, 10**6))
def test_random_separable_always_separable(m, seed):
    L = random_separable(F3, m, seed)
    assert L.is_separable and L.m == m


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 80))
def test_solve_returns_preimage_when_one_exists(i):
    L = linpoly(F3, [1, 2, 1]).over(F81)
    c = F81.from_index(i)
    y = solve(L, c)
    image = set(values(L, F81).tolist())
    if y is None:
        assert c.index not in image
    else:
        assert L(y) == c


def test_monic_and_dict_round_trip():
    L = LinearizedPoly(1, F9, (F9.gen(), F9(1), F9.gen() + 1))
    assert L.monic().coeffs[-1] == 1
    assert LinearizedPoly.from_dict(L.to_dict()) == L


def test_as_p_linearized_has_same_values():
    L = linpoly(F3, [1, 1], n=2)  # T^9 + T
    P = L.as_p_linearized()
    assert P.n == 1 and P.degree == L.degree
    assert (values(L, F81) == values(P, F81)).all()
