import random
from fractions import Fraction
from math import comb

import pytest

from generators import random_nilpotent_case
from oracles import ce_differential_literal, float_rank, leibniz_det

from nillefschetz.errors import (
    EigenvalueOne,
    NonSquareError,
    NotClosedUnderBracket,
    NotHomomorphism,
    NotInvariant,
    NotNilpotent,
)
from nillefschetz.exact import Matrix
from nillefschetz.lie import (
    NilpotentLieAlgebra,
    Subalgebra,
    alternating_cohomology_trace,
    betti_numbers,
    ce_complex,
    cohomology_trace,
    exterior_pullback,
    lower_central_series,
    nilpotency_class,
    restricted_determinant,
    validate_algebra,
    validate_endomorphism,
)

HEIS = NilpotentLieAlgebra.from_brackets(3, [(0, 1, 2, 1)])
HEIS_F = Matrix.rational([[1, 1, 0], [2, 1, 0], [0, 0, -1]])


def _cases(count, seed):
    rng = random.Random(seed)
    return [random_nilpotent_case(rng) for _ in range(count)]


# -- algebra validation --------------------------------------------------------------

def test_heisenberg_structure():
    rep = validate_algebra(HEIS)
    assert rep.ok and rep.nilpotency_class == 2
    chain = lower_central_series(HEIS)
    assert [c.dim for c in chain] == [3, 1, 0]
    assert chain[1].same_space(Subalgebra(HEIS, [(0, 0, 1)]))


def test_validate_algebra_failures():
    # not antisymmetric
    c = [[[Fraction(0)] * 2 for _ in range(2)] for _ in range(2)]
    c[0][1][1] = Fraction(1)
    bad = NilpotentLieAlgebra(2, c)
    rep = validate_algebra(bad)
    assert not rep.antisymmetric and not rep.ok
    # solvable but not nilpotent: [e0, e1] = e1
    aff = NilpotentLieAlgebra.from_brackets(2, [(0, 1, 1, 1)])
    rep = validate_algebra(aff)
    assert rep.antisymmetric and rep.jacobi and not rep.nilpotent
    with pytest.raises(NotNilpotent):
        lower_central_series(aff)
    # Jacobi failure: [e0,e1]=e2, [e1,e2]=e0 (and nothing else) is not a Lie algebra
    jac = NilpotentLieAlgebra.from_brackets(3, [(0, 1, 2, 1), (1, 2, 0, 1), (0, 2, 2, 1)])
    assert not validate_algebra(jac).jacobi


def test_json_round_trip_and_conjugate_preserves_invariants():
    for L, _ in _cases(15, 3):
        assert NilpotentLieAlgebra.from_json(L.to_json()) == L
        P = Matrix.rational([[1 if i == j else (1 if j == i + 1 else 0) for j in range(L.dim)]
                             for i in range(L.dim)])
        M = L.conjugate(P)
        assert validate_algebra(M).ok
        assert nilpotency_class(M) == nilpotency_class(L)
        assert betti_numbers(ce_complex(M)) == betti_numbers(ce_complex(L))


# -- subalgebras ---------------------------------------------------------------------------

def test_subalgebra_checks():
    with pytest.raises(NotClosedUnderBracket):
        Subalgebra(HEIS, [(1, 0, 0), (0, 1, 0)])
    sub = Subalgebra(HEIS, [(1, 0, 0), (0, 0, 1)])
    assert sub.dim == 2 and sub.contains((2, 0, -3))
    assert not sub.contains((0, 1, 0))
    with pytest.raises(NotInvariant):
        sub.restrict(HEIS_F)
    centre = Subalgebra(HEIS, [(0, 0, 1)])
    assert centre.restrict(HEIS_F) == Matrix.rational([[-1]])


# -- endomorphisms ---------------------------------------------------------------------------

def test_validate_endomorphism():
    validate_endomorphism(HEIS, HEIS_F)
    with pytest.raises(NotHomomorphism) as err:
        validate_endomorphism(HEIS, Matrix.rational([[1, 1, 0], [2, 1, 0], [0, 0, 1]]))
    assert err.value.witness == (0, 1)
    with pytest.raises(EigenvalueOne):
        validate_endomorphism(HEIS, Matrix.rational([[1, 0, 0], [0, -1, 0], [0, 0, -1]]))
    with pytest.raises(NonSquareError):
        validate_endomorphism(HEIS, Matrix.rational([[1, 0], [0, 1]]))


# -- Chevalley-Eilenberg complex -------------------------------------------------------------

def test_heisenberg_differential_sign():
    C = ce_complex(HEIS)
    # d(e2^) = -e0^ ^ e1^
    d1 = C.differentials[1]
    col = C.wedge_bases[1].index((2,))
    row = C.wedge_bases[2].index((0, 1))
    assert d1[row, col] == -1
    assert betti_numbers(C) == [1, 2, 2, 1]


def test_differential_matches_literal_formula():
    for L, _ in _cases(25, 11):
        C = ce_complex(L)
        for p in range(L.dim):
            lit = ce_differential_literal(L.c, p)
            assert [list(r) for r in C.differentials[p].rows] == lit


def test_betti_numbers_match_float_ranks():
    for L, _ in _cases(25, 12):
        n = L.dim
        ranks = [float_rank([list(r) for r in ce_differential_literal(L.c, p)]) for p in range(n)] + [0]
        expected = [comb(n, k) - ranks[k] - (ranks[k - 1] if k else 0) for k in range(n + 1)]
        assert betti_numbers(ce_complex(L)) == expected


def test_pullback_is_a_cochain_map_and_functorial():
    for L, F in _cases(20, 13):
        C = ce_complex(L)
        for p in range(L.dim):
            lhs = C.differentials[p] @ exterior_pullback(F, p)
            rhs = exterior_pullback(F, p + 1) @ C.differentials[p]
            assert lhs == rhs
        G = F @ F
        for p in range(L.dim + 1):
            assert exterior_pullback(G, p) == exterior_pullback(F, p) @ exterior_pullback(F, p)
        top = exterior_pullback(F, L.dim)
        assert top[0, 0] == leibniz_det([list(r) for r in F.rows])


# -- traces ------------------------------------------------------------------------------------

def test_heisenberg_traces_by_degree():
    assert [cohomology_trace(HEIS, HEIS_F, k) for k in range(4)] == [1, 2, -2, 1]
    assert alternating_cohomology_trace(HEIS, HEIS_F) == -4
    assert restricted_determinant(HEIS, HEIS_F) == -4


def test_trace_on_invariant_subalgebra():
    centre = Subalgebra(HEIS, [(0, 0, 1)])
    assert alternating_cohomology_trace(centre, HEIS_F) == 2
    assert restricted_determinant(Subalgebra.zero(HEIS), HEIS_F) == 1


def test_trace_of_identity_is_euler_characteristic():
    for L, _ in _cases(15, 14):
        ident = Matrix.identity(L.dim, Fraction(1))
        b = betti_numbers(ce_complex(L))
        assert [cohomology_trace(L, ident, k) for k in range(L.dim + 1)] == b
        assert alternating_cohomology_trace(L, ident) == 0
