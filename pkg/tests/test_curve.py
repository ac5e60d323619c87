import json

import pytest

from amcurves.curve import (
    AMCurve,
    affine_count,
    affine_points,
    check_functional_equation,
    curve_from_dict,
    deuring_shafarevich,
    different_exponent,
    extension_field,
    genus,
    l_poly_from_counts,
    l_polynomial,
    nakajima,
    nakajima_bound,
    new_am_curve,
    p_rank_formula,
    ramification_profile,
    random_curve,
    rational_places,
    reciprocal_root_moduli,
    riemann_hurwitz,
)
from amcurves.errors import DeskScaleLimit, InconsistencyError, InseparableError, ParameterError, ValidationError
from amcurves.gf import make_field
from amcurves.linpoly import linpoly
from conftest import CURVES, corpus
from oracles import l_poly_series, naive_am_count, naive_field_for, predicted_counts

F3, F9 = make_field(3, 1), make_field(3, 2)

# [DERIVED] N_1..N_8 of the classical curve over GF(3): brute force (tests/oracles.py)
# for k <= 5, then frozen; N_5..N_8 are also predicted from N_1..N_4 below.
CLASSICAL_COUNTS = (6, 24, 24, 96, 186, 618, 2526, 6720)
CLASSICAL_LPOLY = (1, 2, 9, 14, 40, 42, 81, 54, 81)


# --- construction ----------------------------------------------------------


def test_classical_curve_is_valid(classical):
    assert isinstance(classical, AMCurve)
    assert (classical.q, classical.qbar, classical.regime, classical.diagonal) == (3, 3, "q = p", True)
    assert len(classical.kernel1) == len(classical.kernel2) == 3


def test_both_qbar_squared_linearized_rejected():
    L = linpoly(F3, [1, 0, 1])
    with pytest.raises(ValidationError, match="linearized"):
        new_am_curve(L, L)


def test_one_qbar_squared_linearized_accepted():
    c = new_am_curve(linpoly(F3, [1, 1, 1]), linpoly(F3, [1, 0, 1]))
    assert c.q == 9 and c.qbar == 3 and not c.diagonal


def test_validation_errors():
    with pytest.raises(ValidationError):
        new_am_curve(linpoly(F3, [1, 1]), linpoly(F3, [1, 1, 1]))  # degree mismatch
    with pytest.raises(ValidationError):
        new_am_curve(linpoly(F3, [1, 1]), linpoly(F9, [1, 1], n=2))  # qbar mismatch
    with pytest.raises(InseparableError):
        new_am_curve(linpoly(F3, [0, 1]), linpoly(F3, [1, 1]))


def test_curve_dict_round_trip():
    for name in ("classical", "pair_q9_qbar3", "diagonal_q9"):
        c = corpus(name)
        d = json.loads(json.dumps(c.to_dict()))
        c2 = curve_from_dict(d)
        assert (c2.L1, c2.L2) == (c.L1, c.L2)


def test_corpus_files_load():
    for path in ("classical_q3", "pair_q3", "pair_q9_qbar3", "diagonal_q9"):
        c = curve_from_dict(json.loads((CURVES / f"{path}.json").read_text()))
        assert c.genus() == (c.q - 1) ** 2


def test_random_curve_is_deterministic_and_valid():
    a, b = random_curve(3, 1, 2, 11), random_curve(3, 1, 2, 11)
    assert (a.L1, a.L2) == (b.L1, b.L2)
    assert a.q == 9


# --- formula engines -----------------------------------------------------------


@pytest.mark.parametrize("q,expected", [(3, 4), (9, 64), (5, 16), (27, 676)])
def test_genus_formula(q, expected):
    # (q - 1)^2 from a Z/p-tower over the x-line: |G| = q, q places, filtration (q, q, 1)
    d = q * different_exponent((q, q, 1))
    assert riemann_hurwitz(q, 0, d) == expected == (q - 1) ** 2


def test_genus_on_curves():
    assert genus(corpus("classical")) == 4
    assert genus(corpus("pair_q9_qbar3")) == 64
    assert genus(corpus("diagonal_q9")) == 64
    assert genus(random_curve(5, 1, 1, 0)) == 16


def test_ramification_profile_classical(classical):
    prof = ramification_profile(classical)
    assert (prof.group_order, prof.places, tuple(prof.filtration)) == (3, 3, (3, 3, 1))
    assert prof.different_exponent == 4 and prof.different_sum == 12


def test_riemann_hurwitz_unramified():
    for G in (1, 2, 5, 9):
        for gbar in (0, 1, 3):
            if G * (2 * gbar - 2) + 2 >= 0:
                assert riemann_hurwitz(G, gbar, 0) == G * (gbar - 1) + 1


def test_riemann_hurwitz_rejects_odd_total():
    with pytest.raises(InconsistencyError):
        riemann_hurwitz(3, 0, 3)


def test_deuring_shafarevich_examples():
    for q in (3, 5, 9):
        assert deuring_shafarevich(q * q, 0, [q, q]) == (q - 1) ** 2
        assert deuring_shafarevich(q, 0, [1, 1]) == q - 1
    assert deuring_shafarevich(7, 1, []) == 1
    with pytest.raises(ParameterError):
        deuring_shafarevich(9, 0, [2])


def test_p_rank_formula_equals_genus():
    for name in ("classical", "pair_q3", "pair_q9_qbar3", "diagonal_q9"):
        c = corpus(name)
        assert p_rank_formula(c) == genus(c)


def test_nakajima_tight_for_q3():
    nk = nakajima(corpus("classical"))
    assert nk.ok and nk.tight
    assert nk.sylow_order == 9 and nk.bound == 9
    # q = p is always tight: p/(p-2) * ((p-1)^2 - 1) = p^2
    assert nakajima_bound(25, 5, 16).tight
    nk9 = nakajima(corpus("pair_q9_qbar3"))
    assert nk9.ok and not nk9.tight and nk9.bound == 189


# --- point counting --------------------------------------------------------------


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_classical_counts_match_brute_force(classical, k):
    Fn = naive_field_for(extension_field(F3, k))
    assert rational_places(classical, k) == naive_am_count(Fn, [2, 1], [2, 1], 3) == CLASSICAL_COUNTS[k - 1]


@pytest.mark.parametrize("k", [1, 2])
def test_pair_counts_match_brute_force(pair_q3, k):
    Fn = naive_field_for(extension_field(F3, k))
    assert rational_places(pair_q3, k) == naive_am_count(Fn, [2, 1], [1, 1], 3)


def test_kernel_outside_base_field_contributes_only_zero():
    L = linpoly(F3, [1, 1])
    c = new_am_curve(L, L)
    Fn = naive_field_for(F3)
    # affine part is 2 (x = y = +-1); at infinity only the root 0 of each kernel is rational
    assert affine_count(c.L1, c.L2, F3) == 2
    assert rational_places(c, 1) == 2 + 2 == naive_am_count(Fn, [1, 1], [1, 1], 3)


def test_counts_beyond_brute_force_are_predicted_by_the_first_four(classical):
    counts = [rational_places(classical, k) for k in range(1, 9)]
    assert counts == list(CLASSICAL_COUNTS)
    assert counts == predicted_counts(counts[:4], 3, 8)


def test_parallel_counting_equals_serial(classical):
    F = extension_field(F3, 6)
    assert affine_count(classical.L1, classical.L2, F, workers=4) == affine_count(classical.L1, classical.L2, F)


def test_affine_points_satisfy_equation(classical):
    F = extension_field(F3, 2)
    xs, ys = affine_points(classical.in_field(F), F)
    L = classical.L1.over(F)
    assert len(xs) == CLASSICAL_COUNTS[1] - 6
    for x, y in zip(xs, ys):
        assert L(F.from_index(int(x))) * L(F.from_index(int(y))) == 1


def test_counts_over_gf9_coefficient_field():
    c = corpus("diagonal_q9")
    # N_1 over GF(9): affine count by brute force plus 9 + 9 rational kernel roots
    Fn = naive_field_for(F9)
    lead = [x.index for x in c.L1.coeffs]
    assert rational_places(c, 1) == naive_am_count(Fn, lead, lead, 9)


# --- zeta --------------------------------------------------------------------------


def test_l_polynomial_classical(classical):
    z = l_polynomial(classical)
    assert tuple(z.counts) == CLASSICAL_COUNTS
    assert tuple(z.l_poly) == CLASSICAL_LPOLY
    assert list(z.l_poly) == l_poly_series(list(z.counts), 3)
    assert z.l_poly[0] == 1 and len(z.l_poly) == 9
    assert z.genus == 4 and z.p_rank == 4
    assert all(abs(m - 3**0.5) < 1e-6 for m in z.reciprocal_root_moduli)


def test_l_poly_from_counts_and_functional_equation():
    L = l_poly_from_counts(CLASSICAL_COUNTS, 3)
    assert tuple(L) == CLASSICAL_LPOLY
    assert check_functional_equation(L, 3) == []
    bad = list(L)
    bad[6] += 1
    assert check_functional_equation(bad, 3)


def test_reciprocal_roots_of_repeated_factor():
    # (1 + 3T^2)^2: every reciprocal root has modulus sqrt(3)
    moduli = reciprocal_root_moduli([1, 0, 6, 0, 9])
    assert moduli and all(abs(m - 3**0.5) < 1e-9 for m in moduli)


def test_desk_scale_guard():
    with pytest.raises(DeskScaleLimit, match="desk-scale limit"):
        l_polynomial(corpus("diagonal_q9"))
