import itertools
import random
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import random_nilpotent_case
from oracles import brute_force_fixed_points

from nillefschetz.dynamics import (
    Polynomial,
    PolynomialGroup,
    PolynomialMap,
    bch_group_from_algebra,
    binomial_coordinates,
    fixed_points,
    lie_algebra_of,
    non_integer_valued_witness,
    validate_endomorphism_map,
    validate_group,
)
from nillefschetz.errors import ClassTooHigh, NonIntegerCoefficients, NonIntegerLattice, NotHomomorphism
from nillefschetz.exact import Matrix
from nillefschetz.lie import NilpotentLieAlgebra
from nillefschetz.problem import load_problem


def poly(nvars, terms):
    return Polynomial(nvars, {tuple(e): Fraction(c) for e, c in terms.items()})


# -- polynomials --------------------------------------------------------------------

coef = st.fractions(min_value=-4, max_value=4, max_denominator=3)
poly2 = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), coef, max_size=5).map(
    lambda t: poly(2, t))
point2 = st.tuples(coef, coef)


@settings(max_examples=60)
@given(poly2, poly2, point2)
def test_polynomial_ring_operations_evaluate_pointwise(a, b, x):
    assert (a + b)(x) == a(x) + b(x)
    assert (a - b)(x) == a(x) - b(x)
    assert (a * b)(x) == a(x) * b(x)
    assert (a ** 2)(x) == a(x) ** 2


@settings(max_examples=40)
@given(poly2, poly2, poly2, point2)
def test_substitution_is_composition(a, u, v, x):
    assert a.substitute([u, v])(x) == a((u(x), v(x)))


def test_polynomial_json_round_trip():
    p = poly(3, {(1, 0, 0): 2, (0, 2, 1): Fraction(-1, 2)})
    assert Polynomial.from_json(3, p.to_json()) == p


@pytest.mark.parametrize("terms,integer_valued", [
    ({(2,): Fraction(1, 2), (1,): Fraction(-1, 2)}, True),   # x(x-1)/2
    ({(3,): Fraction(1, 6), (2,): Fraction(-1, 2), (1,): Fraction(1, 3)}, True),  # binom(x, 3)
    ({(1,): Fraction(1, 2)}, False),
    ({(2,): Fraction(1, 2)}, False),
    ({(2,): 3, (1,): -7}, True),
])
def test_integer_valuedness(terms, integer_valued):
    p = poly(1, terms)
    assert (non_integer_valued_witness(p) is None) == integer_valued
    # oracle: integer-valued on Z iff integral on 0..deg
    vals = [p((Fraction(k),)) for k in range(-3, 6)]
    assert all(v.denominator == 1 for v in vals) == integer_valued


def test_binomial_coordinates_two_variables():
    x, y = Polynomial.var(2, 0), Polynomial.var(2, 1)
    p = x * (x - 1) * y * Fraction(1, 2)
    coords = binomial_coordinates(p)
    assert coords == {(2, 1): Fraction(1)}
    q = x * y * Fraction(1, 2)
    assert non_integer_valued_witness(q) == (1, 1)


# -- groups ------------------------------------------------------------------------------

def heisenberg_group(coeff=Fraction(1)):
    v = [Polynomial.var(6, i) for i in range(6)]
    mul = PolynomialMap(6, [v[0] + v[3], v[1] + v[4], v[2] + v[5] + v[0] * v[4] * coeff])
    w = [Polynomial.var(3, i) for i in range(3)]
    inv = PolynomialMap(3, [-w[0], -w[1], -w[2] + w[0] * w[1] * coeff])
    return PolynomialGroup(3, mul, inv, [[0, 1], [2]])


def test_heisenberg_group_valid():
    rep = validate_group(heisenberg_group())
    assert rep.ok and rep.layers == 2
    assert lie_algebra_of(heisenberg_group()) == NilpotentLieAlgebra.from_brackets(3, [(0, 1, 2, 1)])


def test_group_with_half_coefficient_is_not_integer_valued():
    rep = validate_group(heisenberg_group(Fraction(1, 2)))
    assert rep.associative and not rep.integer_valued and not rep.ok
    assert rep.witness["coordinate"] == 2


def test_non_associative_law_detected():
    v = [Polynomial.var(4, i) for i in range(4)]
    mul = PolynomialMap(4, [v[0] + v[2], v[1] + v[3] + v[0] * v[0] * v[2]])
    w = [Polynomial.var(2, i) for i in range(2)]
    inv = PolynomialMap(2, [-w[0], -w[1]])
    rep = validate_group(PolynomialGroup(2, mul, inv, [[0], [1]]))
    assert not rep.ok
    assert not rep.associative or not rep.inverse


def test_group_json_round_trip():
    G = heisenberg_group()
    assert PolynomialGroup.from_json(G.to_json()).to_json() == G.to_json()


def test_bch_groups_are_groups_with_the_right_algebra():
    rng = random.Random(5)
    for _ in range(15):
        L, _ = random_nilpotent_case(rng, conjugate=False)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            G = bch_group_from_algebra(L)
        rep = validate_group(G)
        assert rep.identity and rep.inverse and rep.associative and rep.triangular
        assert lie_algebra_of(G) == L
        # exponential coordinates: the inverse is negation and one-parameter subgroups are lines
        x = tuple(Fraction(rng.randint(-3, 3), 2) for _ in range(L.dim))
        assert G.invert(x) == tuple(-v for v in x)
        assert G.multiply(x, x) == tuple(2 * v for v in x)


def test_bch_heisenberg_warns_and_is_not_lattice_closed():
    L = NilpotentLieAlgebra.from_brackets(3, [(0, 1, 2, 1)])
    with pytest.warns(UserWarning):
        G = bch_group_from_algebra(L)
    assert not validate_group(G).integer_valued


def test_bch_class_too_high():
    n = 8  # standard filiform of class 7
    L = NilpotentLieAlgebra.from_brackets(n, [(0, i, i + 1, 1) for i in range(1, n - 1)])
    with pytest.raises(ClassTooHigh):
        bch_group_from_algebra(L)


# -- endomorphisms ---------------------------------------------------------------------

def test_endomorphism_checks():
    G = heisenberg_group()
    spec = load_problem("heisenberg")
    endo = validate_endomorphism_map(G, spec.endomorphism())
    # the -y(y-1)/2 correction contributes y/2 to the derivative at 0
    assert endo.linear_part == Matrix.rational([[1, 1, 0], [2, 1, 0], [0, "1/2", -1]])
    w = [Polynomial.var(3, i) for i in range(3)]
    # f(0) != 0
    with pytest.raises(NotHomomorphism):
        validate_endomorphism_map(G, PolynomialMap(3, [w[0] + 1, w[1], w[2]]))
    # linear map that ignores the quadratic correction is not a homomorphism
    with pytest.raises(NotHomomorphism) as err:
        validate_endomorphism_map(G, PolynomialMap.linear(Matrix.rational([[1, 1, 0], [2, 1, 0], [0, 0, -1]])))
    assert err.value.witness["coordinate"] == 2
    # abelian group: x -> x/2 is a homomorphism but not integer valued
    T = PolynomialGroup.abelian(1)
    with pytest.raises(NonIntegerCoefficients):
        validate_endomorphism_map(T, PolynomialMap.linear(Matrix.rational([["1/2"]])))


# -- fixed points ------------------------------------------------------------------------

def test_heisenberg_fixed_points_match_brute_force():
    spec = load_problem("heisenberg")
    G = spec.resolved_group()
    endo = validate_endomorphism_map(G, spec.endomorphism())
    pts = fixed_points(G, endo)
    got = {p.coords for p in pts}
    oracle = brute_force_fixed_points(G.multiply, endo.map, 3, 8)
    assert got == oracle
    assert got == {(0, 0, 0), (0, 0, Fraction(1, 2)), (Fraction(1, 2), 0, Fraction(1, 8)),
                   (Fraction(1, 2), 0, Fraction(5, 8))}


def test_filiform_group_fixed_points():
    spec = load_problem("filiform4-group")
    G = spec.resolved_group()
    endo = validate_endomorphism_map(G, spec.endomorphism())
    pts = fixed_points(G, endo)
    assert len(pts) == 30
    assert len({p.coords for p in pts}) == 30
    for p in pts:
        assert all(0 <= c < 1 for c in p.coords)
        assert all(Fraction(g).denominator == 1 for g in p.gamma)
        assert G.multiply(p.gamma, p.coords) == endo.map(p.coords)


def test_torus_fixed_points_small():
    G = PolynomialGroup.abelian(2)
    endo = validate_endomorphism_map(G, PolynomialMap.linear(Matrix.rational([[2, 1], [1, 1]])))
    assert [p.coords for p in fixed_points(G, endo)] == [(0, 0)]
    endo = validate_endomorphism_map(G, PolynomialMap.linear(Matrix.rational([[3, 0], [0, -2]])))
    got = {p.coords for p in fixed_points(G, endo)}
    assert got == {(Fraction(a, 2), Fraction(b, 3)) for a, b in itertools.product(range(2), range(3))}


def test_fixed_points_require_lattice_closure():
    L = NilpotentLieAlgebra.from_brackets(3, [(0, 1, 2, 1)])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        G = bch_group_from_algebra(L)
    f = PolynomialMap.linear(Matrix.rational([[2, 0, 0], [0, -1, 0], [0, 0, -2]]))
    endo = validate_endomorphism_map(G, f)
    with pytest.raises(NonIntegerLattice):
        fixed_points(G, endo)
