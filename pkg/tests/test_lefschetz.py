import math
import random
from fractions import Fraction

import numpy as np
import pytest

from nillefschetz.algebraic import RealAlgebraicField
from nillefschetz.dynamics import PolynomialGroup, PolynomialMap, validate_endomorphism_map
from nillefschetz.errors import EigenvalueOne
from nillefschetz.exact import Matrix
from nillefschetz.lefschetz import FoliationChoice, FoliationKind, Verdict, nomizu_check, verify
from nillefschetz.lie import NilpotentLieAlgebra
from nillefschetz.problem import fixture_names, load_problem


def run(name, kind, custom=None, precision=None):
    spec = load_problem(name)
    G = spec.resolved_group()
    endo = validate_endomorphism_map(G, spec.endomorphism())
    choice = FoliationChoice(kind, custom) if custom else FoliationChoice(kind)
    return endo, (verify(G, endo, choice, precision) if precision else verify(G, endo, choice))


def float_side(F, side):
    eig = np.linalg.eigvals(np.array([[float(v) for v in r] for r in F.rows]))
    pick = np.abs(eig) > 1 if side == "unstable" else np.abs(eig) < 1
    return float(np.real(np.prod(1 - eig[pick])))


K2 = RealAlgebraicField.quadratic(2)


@pytest.mark.parametrize("kind,expected", [
    (FoliationKind.UNSTABLE, K2.element([0, -1])),
    (FoliationKind.STABLE, K2.element([0, 1])),
    (FoliationKind.ZERO, 1),
])
def test_heisenberg_all_foliations(kind, expected):
    _, rep = run("heisenberg", kind)
    assert rep.verdict is Verdict.EXACT_EQUAL
    assert rep.lhs_cohomology == rep.lhs_determinant == rep.rhs_fixed_point_sum == expected
    assert all(rep.checks.values())


def test_rhs_is_count_times_local_term():
    _, rep = run("heisenberg", FoliationKind.UNSTABLE)
    # eps = sgn(1 - (1 + sqrt2)) = -1, transverse |(1 - (1 - sqrt2)) (1 - (-1))| = 2 sqrt2
    assert rep.epsilon == -1
    assert rep.transverse_det == K2.element([0, 2])
    assert rep.rhs_fixed_point_sum == 4 * (-1 / rep.transverse_det)
    for x in rep.fixed_points:
        assert x.local_sign == -1 and x.local_transverse_det == rep.transverse_det


def test_filiform_group_foliations():
    expected = {FoliationKind.UNSTABLE: -15, FoliationKind.STABLE: 1, FoliationKind.ZERO: 1}
    for kind, val in expected.items():
        _, rep = run("filiform4-group", kind)
        assert rep.fixed_point_count == 30
        assert rep.verdict is Verdict.EXACT_EQUAL
        assert rep.lhs_cohomology == val
    centre = [[0, 0, 1, 0], [0, 0, 0, 1]]
    _, rep = run("filiform4-group", FoliationKind.CUSTOM, custom=centre)
    assert rep.verdict is Verdict.EXACT_EQUAL and rep.lhs_cohomology == 15


@pytest.mark.parametrize("name", ["catmap", "torus3", "torus4-anosov", "heisenberg", "filiform4-group"])
@pytest.mark.parametrize("side", ["unstable", "stable"])
def test_determinant_side_matches_float_eigenvalues(name, side):
    kind = FoliationKind.UNSTABLE if side == "unstable" else FoliationKind.STABLE
    endo, rep = run(name, kind)
    assert math.isclose(float(rep.lhs_determinant), float_side(endo.linear_part, side), rel_tol=1e-9)


def test_interval_mode_for_cubic_field():
    eps = Fraction(1, 2 ** 40)
    endo, rep = run("torus4-cubic", FoliationKind.UNSTABLE, precision=eps)
    assert rep.mode == "interval"
    assert rep.verdict is Verdict.INTERVAL_CONSISTENT
    lo, hi = rep.lhs_determinant
    target = float_side(endo.linear_part, "unstable")
    assert float(lo) - 1e-12 <= target <= float(hi) + 1e-12
    assert rep.width is not None and rep.width <= eps * max(1, abs(hi))


def test_random_anosov_torus_maps():
    rng = random.Random(3)
    done = 0
    while done < 15:
        a, b, c = (rng.randint(-4, 4) for _ in range(3))
        for d in range(-6, 7):
            det, tr = a * d - b * c, a + d
            # hyperbolic automorphisms of Z^2: det 1 needs |tr| > 2, det -1 needs tr != 0
            if (det == 1 and abs(tr) > 2) or (det == -1 and tr != 0):
                G = PolynomialGroup.abelian(2)
                endo = validate_endomorphism_map(G, PolynomialMap.linear(Matrix.rational([[a, b], [c, d]])))
                for kind in (FoliationKind.UNSTABLE, FoliationKind.STABLE):
                    rep = verify(G, endo, FoliationChoice(kind))
                    assert rep.verdict is Verdict.EXACT_EQUAL
                    side = "unstable" if kind is FoliationKind.UNSTABLE else "stable"
                    assert math.isclose(float(rep.rhs_fixed_point_sum), float_side(endo.linear_part, side),
                                        rel_tol=1e-9)
                done += 1
                break


def test_eigenvalue_one_rejected():
    G = PolynomialGroup.abelian(2)
    endo = validate_endomorphism_map(G, PolynomialMap.linear(Matrix.rational([[1, 1], [0, 2]])),
                                     forbid_eigenvalue_one=False)
    with pytest.raises(EigenvalueOne):
        verify(G, endo, FoliationChoice(FoliationKind.UNSTABLE))


def test_report_serialisation():
    _, rep = run("heisenberg", FoliationKind.UNSTABLE)
    data = rep.to_json()
    assert data["verdict"] == "EXACT_EQUAL"
    assert data["fixed_point_count"] == 4
    assert data["lhs_cohomology"] == {"field": K2.to_json(), "coords": ["0", "-1"]}
    text = rep.to_text()
    assert "EXACT_EQUAL" in text and "det(1 - f_* | p)" in text


def test_nomizu():
    rep = nomizu_check(NilpotentLieAlgebra.from_brackets(3, [(0, 1, 2, 1)]), [1, 2, 2, 2])
    assert rep.betti == [1, 2, 2, 1] and rep.matches is False
    for name in fixture_names():
        L = load_problem(name).algebra()
        rep = nomizu_check(L)
        assert rep.euler == 0
        assert rep.betti[0] == rep.betti[-1] == 1
        # Poincare duality for unimodular algebras
        assert rep.betti == list(reversed(rep.betti))
