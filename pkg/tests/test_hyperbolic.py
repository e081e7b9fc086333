import random
from fractions import Fraction

import numpy as np
import pytest

from generators import random_nilpotent_case
from oracles import leibniz_det

from nillefschetz.algebraic import RealAlgebraicField
from nillefschetz.errors import EigenvalueOne, JordanOnCircle, UnsupportedScalarTower
from nillefschetz.exact import Matrix
from nillefschetz.hyperbolic import AnosovClass, anosov_class, intersect, is_gamma_acceptable, split
from nillefschetz.lie import NilpotentLieAlgebra, Subalgebra, lower_central_series, restricted_determinant
from nillefschetz.problem import load_problem

HEIS = NilpotentLieAlgebra.from_brackets(3, [(0, 1, 2, 1)])
HEIS_F = Matrix.rational([[1, 1, 0], [2, 1, 0], [0, "1/2", -1]])
K2 = RealAlgebraicField.quadratic(2)
SQRT2 = K2.gen()


def _float_counts(F):
    eig = np.linalg.eigvals(np.array([[float(v) for v in r] for r in F.rows]))
    mod = np.abs(eig)
    return int(np.sum(mod > 1 + 1e-9)), int(np.sum(mod < 1 - 1e-9)), int(np.sum(np.abs(mod - 1) <= 1e-9))


@pytest.mark.parametrize("rows,cls", [
    ([[2, 1], [1, 1]], AnosovClass.ANOSOV),
    ([[-1]], AnosovClass.GENERALIZED),
    ([[2, 1, 0], [1, 1, 0], [0, 0, -1]], AnosovClass.GENERALIZED),
    ([[0, -1], [1, 0]], AnosovClass.GENERALIZED),
    ([[1, 0], [0, 2]], AnosovClass.NEITHER),
])
def test_anosov_class(rows, cls):
    assert anosov_class(Matrix.rational(rows)) is cls


def test_heisenberg_splitting_vectors_are_eigenvectors():
    S = split(HEIS_F, HEIS)
    assert S.dims() == (1, 1, 1)
    assert S.scalar_extension == K2
    lam_u, lam_s = 1 + SQRT2, 1 - SQRT2
    for sub, lam in ((S.unstable, lam_u), (S.stable, lam_s)):
        (v,) = sub.basis
        Fv = HEIS_F @ v
        assert all(a == lam * b for a, b in zip(Fv, v))
    (u,) = S.unstable.basis
    assert u == (K2(1), SQRT2, K2.element([Fraction(-1, 2), Fraction(1, 2)]))
    assert S.neutral.same_space(Subalgebra(HEIS, [(0, 0, 1)]))


def test_splitting_dimensions_match_numpy_on_random_cases():
    rng = random.Random(99)
    checked = 0
    while checked < 25:
        L, F = random_nilpotent_case(rng)
        n = F.ncols
        if leibniz_det([[Fraction(int(i == j)) - F[i, j] for j in range(n)] for i in range(n)]) == 0:
            with pytest.raises(EigenvalueOne):
                split(F, L)
            continue
        try:
            S = split(F, L)
        except JordanOnCircle:
            continue
        assert S.dims() == _float_counts(F)
        total = Fraction(1)
        for sub in (S.unstable, S.stable, S.neutral):
            sub.restrict(F)  # invariant
            total *= restricted_determinant(sub, F)
        assert total == leibniz_det([[Fraction(int(i == j)) - F[i, j] for j in range(n)] for i in range(n)])
        checked += 1


def test_jordan_block_on_circle_rejected():
    T2 = NilpotentLieAlgebra.abelian(2)
    with pytest.raises(JordanOnCircle):
        split(Matrix.rational([[-1, 1], [0, -1]]), T2)
    S = split(Matrix.rational([[-1, 0], [0, -1]]), T2)
    assert S.dims() == (0, 0, 2)


def test_unsupported_tower():
    T3 = NilpotentLieAlgebra.abelian(3)
    with pytest.raises(UnsupportedScalarTower):
        split(Matrix.rational([[0, 0, 1], [1, 0, 1], [0, 1, 0]]), T3)


# -- acceptability ------------------------------------------------------------------------

def test_rational_eigenvectors_are_not_dense():
    T2 = NilpotentLieAlgebra.abelian(2)
    S = split(Matrix.rational([[2, 0], [0, 3]]), T2)
    # both eigenvalues expand: g^u = T2 is dense, g^s = 0 is not
    assert S.dims() == (2, 0, 0)
    assert is_gamma_acceptable(S.unstable, T2).overall
    assert not is_gamma_acceptable(S.stable, T2).overall
    S = split(Matrix.rational([[2, 0], [0, "1/3"]]), T2)
    rep = is_gamma_acceptable(S.unstable, T2)
    assert not rep.overall and rep.layers[0].witness == (0, 1)


def test_heisenberg_acceptability_layers():
    S = split(HEIS_F, HEIS)
    rep = is_gamma_acceptable(S.unstable, HEIS)
    assert [v.dense for v in rep.layers] == [True, False]
    assert rep.layers[1].witness == (0, 0, 1)
    assert is_gamma_acceptable(Subalgebra.full(HEIS), HEIS).overall


def _check_witnesses(p, L):
    chain = lower_central_series(L)
    rep = is_gamma_acceptable(p, L)
    for v in rep.layers:
        if v.dense:
            assert v.witness is None
            continue
        w = v.witness
        assert all(isinstance(x, int) for x in w)
        cj, cnext = chain[v.j], chain[v.j + 1]
        dot = lambda vec: sum(a * b for a, b in zip(w, vec))  # noqa: E731
        assert any(dot(b) != 0 for b in cj.basis)
        assert all(dot(b) == 0 for b in cnext.basis)
        assert all(dot(b) == 0 for b in intersect(p, cj))
    return rep


def test_witnesses_are_valid_covectors():
    _check_witnesses(split(HEIS_F, HEIS).unstable, HEIS)
    for name in ("filiform4-group", "catmap", "torus4-anosov"):
        spec = load_problem(name)
        L = spec.algebra()
        S = split(spec.endomorphism().linear_part(), L)
        for sub in (S.unstable, S.stable):
            _check_witnesses(sub, L)
    T3 = NilpotentLieAlgebra.abelian(3)
    rep = _check_witnesses(Subalgebra(T3, [(1, 2, 0), (0, 1, -3)]), T3)
    assert not rep.overall
