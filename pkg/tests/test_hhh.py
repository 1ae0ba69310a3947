import itertools
import random

import pytest
from hypothesis import given, strategies as st

from stable_hhh.groebner import Window, free_quotient, hilbert_function, ideal, quotient
from stable_hhh.hhh import (
    a_zero_window,
    block_simplify,
    check_presentation,
    chi_map,
    default_window,
    e_registry,
    e_relations,
    exterior_convolve,
    exterior_degrees,
    full_hhh,
    literal_presentation,
    poincare_series,
    psi_map,
    specialized_factorization,
    stable_homology_presentation,
    unit_shift,
    verify_E_isomorphism,
)
from stable_hhh.perm import Permutation, all_permutations, partitions, random_permutation, special_form
from stable_hhh.poly import Poly, Registry, TriDegree, Variable

SMALL = Window(-14, 10, 0, 5, 0, 0)


def test_unit_shift_and_exterior_degrees():
    assert unit_shift(3, 1) == TriDegree(-4, 2, 0)
    assert unit_shift(2, 1) == TriDegree(-2, 1, 0)
    assert unit_shift(4, 4) == TriDegree(0, 0, 0)
    assert exterior_degrees(3) == [TriDegree(-2, 0, 1), TriDegree(-4, 0, 1), TriDegree(-6, 0, 1)]


@pytest.mark.parametrize("ct", [(1, 2), (3,), (2, 2), (1, 1, 2), (1, 3)])
def test_block_simplify_shape(ct):
    w = special_form(ct)
    n = w.n
    B = block_simplify(specialized_factorization(n, w), w)
    ends = set(w.cycle_ends())
    reg = B.factorization.registry
    for r in B.factorization.rows:
        if r.label in ends:
            assert r.a.is_zero()
        else:
            assert r.b.is_zero()
            assert r.a == Poly.var(reg, f"x{r.label}") - Poly.var(reg, f"x{r.label + 1}")


# -- worked examples ------------------------------------------------------------

def test_n2_identity_ring_is_x1_alpha_u2_mod_alpha_u2():
    pres = stable_homology_presentation(2, Permutation.identity(2))
    assert pres.unit_shift == TriDegree(0, 0, 0)
    reg = Registry(
        [
            Variable("x1", "x", TriDegree(2, 0, 0), (1,)),
            Variable("alpha", "alpha", TriDegree(2, 0, 0), (1,)),
            Variable("u2", "u", TriDegree(-4, 2, 0), (2,)),
        ]
    )
    model = quotient(ideal(reg, [Poly.var(reg, "alpha") * Poly.var(reg, "u2")]))
    win = Window(-20, 20, 0, 8)
    assert hilbert_function(pres.ring, win) == hilbert_function(model, win)


def test_n2_transposition_shift():
    pres = stable_homology_presentation(2, Permutation.parse("(1 2)", 2))
    assert (pres.unit_shift.q, pres.unit_shift.t) == (-2, 1)
    # ring is Q[x1, u2]: one x, one surviving u
    model = free_quotient(Registry.standard(2, ("x", "u")).without(["x2", "u1"]), TriDegree(-2, 1, 0))
    assert hilbert_function(pres.ring, SMALL) == hilbert_function(model, SMALL)


def test_n3_three_cycle():
    pres = stable_homology_presentation(3, Permutation.parse("(1 2 3)", 3))
    assert (pres.unit_shift.q, pres.unit_shift.t) == (-4, 2)
    assert pres.exterior_factor == exterior_degrees(3)
    model = free_quotient(Registry.standard(3, ("x", "u")).without(["x2", "x3", "u1"]), TriDegree(-4, 2, 0))
    assert hilbert_function(pres.ring, SMALL) == hilbert_function(model, SMALL)
    assert pres.to_json()["shift"] == {"q": -4, "t": 2}


def test_n2_transposition_lowest_terms():
    pres = stable_homology_presentation(2, Permutation.parse("(1 2)", 2))
    table = full_hhh(pres, Window(-6, 0, 0, 1, 0, 0))
    assert table == {TriDegree(-2, 1, 0): 1, TriDegree(0, 1, 0): 1}


# -- presentation checks -----------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3])
def test_presentation_checks_small(n):
    for ct in partitions(n):
        c = check_presentation(n, ct, Window(-12, 12, 0, 6))
        assert c.passed, c.to_json()


# -- Poincare series ----------------------------------------------------------

def test_series_closed_forms():
    assert poincare_series(2, (2,)).closed_form() == "q^-2*t*(1+q^-2*a)(1+q^-4*a)/((1-q^2)(1-q^-4*t^2))"
    s = poincare_series(2, (1, 1))
    assert s.prefactor == TriDegree(0, 0, 0)
    assert s.numerator_factors[0] == (-1, TriDegree(-2, 2, 0))
    assert len(s.denominator_factors) == 3


def test_series_t_minus_one_data():
    d = poincare_series(3, (3,)).at_t_minus_one()
    assert d["prefactor"] == {"coeff": 1, "q": -4, "a": 0}
    assert d["numerator"][0] == {"sign": 1, "q": -2, "a": 1}
    assert d["denominator"] == [{"sign": -1, "q": q, "a": 0} for q in (2, -4, -6)]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_series_matches_ring_hilbert_function(n):
    win = Window(-16, 8, 0, 5, 0, n)
    for ct in partitions(n):
        pres = stable_homology_presentation(n, special_form(ct))
        assert full_hhh(pres, win) == poincare_series(n, ct).expand(win)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_series_positivity(n):
    win = Window(-30, 20, 0, 8, 0, n)
    for ct in partitions(n):
        assert all(c > 0 for c in poincare_series(n, ct).expand(win).values())


def test_exterior_convolution():
    table = {TriDegree(0, 0, 0): 1}
    out = exterior_convolve(table, 2, Window(-10, 0, 0, 0, 0, 2))
    assert out == {TriDegree(0, 0, 0): 1, TriDegree(-2, 0, 1): 1, TriDegree(-4, 0, 1): 1, TriDegree(-6, 0, 2): 1}
    assert a_zero_window(Window(-4, 4, 0, 2, 0, 3), 3) == Window(-4, 16, 0, 2, 0, 0)


# -- conjugacy ------------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3])
def test_conjugacy_invariance_small(n):
    win = default_window(n)
    tables = {}
    for w in all_permutations(n):
        tables.setdefault(w.cycle_type(), []).append(full_hhh(literal_presentation(w), win))
    for ct, ts in tables.items():
        assert all(t == ts[0] for t in ts), ct
        assert ts[0] == poincare_series(n, ct).expand(win)


@given(st.randoms())
def test_conjugacy_random_n4(rng):
    w = random_permutation(4, rng)
    v = random_permutation(4, rng)
    win = Window(-20, 10, 0, 6, 0, 4)
    assert full_hhh(literal_presentation(w.conjugate(v)), win) == full_hhh(literal_presentation(w), win)


# -- flag ring ------------------------------------------------------------------

def test_E_relation_n2():
    reg = e_registry(2)
    assert e_relations(2) == [(Poly.var(reg, "x1") - Poly.var(reg, "x2")) * Poly.var(reg, "v12")]


def test_psi_chi_on_generators():
    reg = e_registry(3)
    psi = psi_map(3, reg)
    assert psi["u1"].is_zero()
    assert psi["u2"] == -Poly.var(reg, "v12")
    assert psi["u3"] == Poly.var(reg, "v13")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_E_isomorphism(n):
    rep = verify_E_isomorphism(n, Window(-12, 12, 0, 8))
    assert rep.passed, rep.to_json()
