"""Both sides of the dynamical Lefschetz formula for an invariant foliation.

Three quantities are computed along separate code paths:

* ``lhs_cohomology``: alternating sum of traces of ``f^*`` on ``H^k(p)``
  from the Chevalley-Eilenberg complex;
* ``lhs_determinant``: ``det(1 - f_*|p)`` as the characteristic polynomial of
  the restriction evaluated at 1;
* ``rhs_fixed_point_sum``: ``sum_x eps_x / |det(1 - f_*|g/p)|`` over the
  enumerated fixed points.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebraic import CircleClass, FieldElement, isolate_roots, sign_of, to_interval
from .dynamics import FixedPoint, GroupEndomorphism, PolynomialGroup, fixed_points, lie_algebra_of
from .errors import EigenvalueOne, TraceIdentityError, UnsupportedScalarTower
from .exact import Matrix, char_poly, char_poly_coeffs, determinant, rational_str
from .hyperbolic import AcceptabilityReport, AnosovClass, Splitting, anosov_class, is_gamma_acceptable, split
from .lie import (
    NilpotentLieAlgebra,
    Subalgebra,
    betti_numbers,
    ce_complex,
    cohomology_trace,
    restricted_determinant,
)
from .serialize import scalar_to_json

ONE = Fraction(1)
ZERO = Fraction(0)
DEFAULT_PRECISION = Fraction(1, 2**64)


class FoliationKind(str, enum.Enum):
    UNSTABLE = "UNSTABLE"
    STABLE = "STABLE"
    ZERO = "ZERO"
    CUSTOM = "CUSTOM"


@dataclass
class FoliationChoice:
    kind: FoliationKind
    custom_basis: Sequence[Sequence] | None = None

    @classmethod
    def parse(cls, name: str, custom_basis=None) -> "FoliationChoice":
        return cls(FoliationKind(name.upper()), custom_basis)


class Verdict(str, enum.Enum):
    EXACT_EQUAL = "EXACT_EQUAL"
    INTERVAL_CONSISTENT = "INTERVAL_CONSISTENT"
    MISMATCH = "MISMATCH"


@dataclass
class LefschetzReport:
    foliation: FoliationKind
    foliation_dim: int
    anosov_class: AnosovClass
    fixed_point_count: int
    lhs_cohomology: object
    lhs_determinant: object
    rhs_fixed_point_sum: object
    verdict: Verdict
    mode: str = "exact"
    width: Fraction | None = None
    epsilon: int | None = None
    transverse_det: object = None
    acceptability: AcceptabilityReport | None = None
    cohomology_skipped: bool = False
    fixed_points: list[FixedPoint] = field(default_factory=list)
    scalar_field: object = None
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict is not Verdict.MISMATCH

    def to_json(self) -> dict:
        def enc(v):
            return None if v is None else scalar_to_json(v)

        return {
            "foliation": self.foliation.value,
            "foliation_dim": self.foliation_dim,
            "anosov_class": self.anosov_class.value,
            "mode": self.mode,
            "scalar_field": self.scalar_field.to_json() if self.scalar_field is not None else None,
            "fixed_point_count": self.fixed_point_count,
            "fixed_points": [p.to_json() for p in self.fixed_points],
            "epsilon": self.epsilon,
            "transverse_det": enc(self.transverse_det),
            "lhs_cohomology": enc(self.lhs_cohomology),
            "cohomology_skipped": self.cohomology_skipped,
            "lhs_determinant": enc(self.lhs_determinant),
            "rhs_fixed_point_sum": enc(self.rhs_fixed_point_sum),
            "verdict": self.verdict.value,
            "width": rational_str(self.width) if self.width is not None else None,
            "acceptability": self.acceptability.to_json() if self.acceptability is not None else None,
            "checks": dict(sorted(self.checks.items())),
        }

    def to_text(self) -> str:
        def show(v):
            if v is None:
                return "skipped"
            if isinstance(v, tuple):
                return f"[{float(v[0]):.12g}, {float(v[1]):.12g}]"
            approx = float(v)
            return f"{v}  (~{approx:.12g})"

        lines = [
            f"foliation            {self.foliation.value} (dim {self.foliation_dim})",
            f"map class            {self.anosov_class.value}",
            f"fixed points         {self.fixed_point_count} = |det(1 - f_* | g)|",
            f"sum_k (-1)^k Tr(f^* | H^k(p))      = {show(self.lhs_cohomology)}",
            f"det(1 - f_* | p)                   = {show(self.lhs_determinant)}",
            f"sum_x eps_x / |det(1 - f_* | g/p)| = {show(self.rhs_fixed_point_sum)}",
        ]
        if self.epsilon is not None:
            lines.append(f"eps_x = sgn det(1 - f_* | p)       = {self.epsilon:+d}")
        if self.transverse_det is not None:
            lines.append(f"|det(1 - f_* | g/p)|               = {show(self.transverse_det)}")
        if self.acceptability is not None:
            lay = ", ".join(f"j={v.j}:{'dense' if v.dense else 'not dense ' + str(list(v.witness))}"
                            for v in self.acceptability.layers)
            lines.append(f"lattice-acceptable   {self.acceptability.overall} ({lay})")
        verdict = self.verdict.value
        if self.width is not None:
            verdict += f" (width {float(self.width):.3g})"
        lines.append(f"verdict              {verdict}")
        return "\n".join(lines)


def _resolve_foliation(choice: FoliationChoice, L: NilpotentLieAlgebra, F: Matrix,
                       splitting: Splitting | None) -> Subalgebra:
    if choice.kind is FoliationKind.ZERO:
        return Subalgebra.zero(L)
    if choice.kind is FoliationKind.CUSTOM:
        if not choice.custom_basis:
            return Subalgebra.zero(L)
        p = Subalgebra(L, [[Fraction(v) for v in b] for b in choice.custom_basis])
        p.restrict(F)
        return p
    return splitting.unstable if choice.kind is FoliationKind.UNSTABLE else splitting.stable


def _alternating_trace(p: Subalgebra, F: Matrix):
    C = ce_complex(p)
    Fp = p.restrict(F)
    total = ZERO
    for k in range(C.dim + 1):
        t = cohomology_trace(p, F, k, complex_=C, restricted=Fp)
        total = total + t if k % 2 == 0 else total - t
    return total


def _det_via_char_poly(p: Subalgebra, F: Matrix):
    Fp = p.restrict(F)
    return sum(char_poly_coeffs(Fp), ZERO) if Fp.ncols else ONE


def _abs(v):
    return -v if sign_of(v) < 0 else v


def verify(G: PolynomialGroup, f: GroupEndomorphism, choice: FoliationChoice,
           precision=DEFAULT_PRECISION) -> LefschetzReport:
    F = f.linear_part
    n = F.ncols
    L = lie_algebra_of(G)
    cls = anosov_class(F)
    if cls is AnosovClass.NEITHER:
        raise EigenvalueOne("f_* has eigenvalue 1; both sides of the formula degenerate")
    points = fixed_points(G, f)
    count = len(points)
    splitting = None
    if choice.kind in (FoliationKind.UNSTABLE, FoliationKind.STABLE):
        try:
            splitting = split(F, L)
        except UnsupportedScalarTower:
            return _verify_interval(F, choice, cls, points, precision)
    p = _resolve_foliation(choice, L, F, splitting)

    lhs_coh = _alternating_trace(p, F)
    lhs_det = _det_via_char_poly(p, F)

    full = determinant(Matrix.identity(n, ONE) - F) if n else ONE
    det_p = restricted_determinant(p, F)
    eps = sign_of(det_p)
    transverse = _abs(full / det_p)
    checks = {"count_equals_abs_det": count == abs(full)}
    if splitting is not None:
        other = splitting.stable if choice.kind is FoliationKind.UNSTABLE else splitting.unstable
        se = _abs(restricted_determinant(other, F) * restricted_determinant(splitting.neutral, F))
        checks["transverse_equals_complement_det"] = se == transverse
        if se != transverse:
            raise TraceIdentityError("quotient determinant differs from the complement determinant")
    terms = []
    for x in points:
        x.local_sign, x.local_unstable_det, x.local_transverse_det = eps, det_p, transverse
        terms.append(eps / transverse if isinstance(transverse, FieldElement) else Fraction(eps) / transverse)
    rhs = sum(terms, ZERO)
    checks["rhs_equals_count_times_term"] = rhs == count * (terms[0] if terms else ZERO)

    verdict = Verdict.EXACT_EQUAL if lhs_coh == lhs_det == rhs else Verdict.MISMATCH
    fld = next((v.field for v in (lhs_coh, lhs_det, rhs, transverse) if isinstance(v, FieldElement)), None)
    try:
        acc = is_gamma_acceptable(p, L)
    except UnsupportedScalarTower:
        acc = None
    return LefschetzReport(choice.kind, p.dim, cls, count, lhs_coh, lhs_det, rhs, verdict,
                           epsilon=eps, transverse_det=transverse, acceptability=acc,
                           fixed_points=points, scalar_field=fld, checks=checks)


# ---------------------------------------------------------------------------
# Interval mode

def _imul(a, b):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(ps), max(ps))


def _factor_interval(enc):
    """Interval for ``(1 - lambda)`` (real root) or ``|1 - lambda|^2`` (conjugate pair, upper member)."""
    x0, x1, y0, y1 = enc.region
    if enc.is_real:
        return (1 - x1, 1 - x0)
    # |1 - z|^2 over the rectangle
    ax = (1 - x1, 1 - x0)
    sx = (min(abs(ax[0]), abs(ax[1])) if ax[0] * ax[1] > 0 else ZERO, max(abs(ax[0]), abs(ax[1])))
    sy = (min(abs(y0), abs(y1)) if y0 * y1 > 0 else ZERO, max(abs(y0), abs(y1)))
    return (sx[0] ** 2 + sy[0] ** 2, sx[1] ** 2 + sy[1] ** 2)


def _product_over(encs, classes):
    iv = (ONE, ONE)
    for e in encs:
        if e.circle_class not in classes or e._partner is not None:
            continue
        fac = _factor_interval(e)
        for _ in range(e.multiplicity):
            iv = _imul(iv, fac)
    return iv


def _idiv_const(c, iv):
    if iv[0] <= 0 <= iv[1]:
        raise ZeroDivisionError("interval contains zero")
    a, b = c / iv[0], c / iv[1]
    return (min(a, b), max(a, b))


def _verify_interval(F: Matrix, choice: FoliationChoice, cls: AnosovClass, points, precision) -> LefschetzReport:
    precision = Fraction(precision)
    chi = char_poly(F)
    encs = isolate_roots(chi)
    own = {CircleClass.OUTSIDE} if choice.kind is FoliationKind.UNSTABLE else {CircleClass.INSIDE}
    rest = {CircleClass.INSIDE, CircleClass.ON} if choice.kind is FoliationKind.UNSTABLE else {
        CircleClass.OUTSIDE, CircleClass.ON}
    count = len(points)
    dim_p = sum(e.multiplicity for e in encs if e.circle_class in own)
    while True:
        det_p = _product_over(encs, own)
        trans = _product_over(encs, rest)
        if det_p[0] <= 0 <= det_p[1] or trans[0] <= 0 <= trans[1]:
            ok = False
        else:
            eps = 1 if det_p[0] > 0 else -1
            t_abs = trans if trans[0] > 0 else (-trans[1], -trans[0])
            rhs = _idiv_const(Fraction(count * eps), t_abs)
            scale = max(ONE, abs(det_p[0]), abs(det_p[1]))
            ok = (det_p[1] - det_p[0] <= precision * scale and rhs[1] - rhs[0] <= precision * scale)
        if ok:
            break
        for e in encs:
            if e._partner is None:
                e.refine()
    lo, hi = max(det_p[0], rhs[0]), min(det_p[1], rhs[1])
    verdict = Verdict.INTERVAL_CONSISTENT if lo <= hi else Verdict.MISMATCH
    full = chi(1)
    checks = {"count_equals_abs_det": count == abs(full),
              "det_product_contains_char_poly_at_1": _imul(det_p, (trans[0], trans[1]))[0] <= full
              <= _imul(det_p, trans)[1]}
    width = max(det_p[1] - det_p[0], rhs[1] - rhs[0])
    for x in points:
        x.local_sign, x.local_unstable_det, x.local_transverse_det = eps, det_p, t_abs
    return LefschetzReport(choice.kind, dim_p, cls, count, None, det_p, rhs, verdict, mode="interval",
                           width=width, epsilon=eps, transverse_det=t_abs, acceptability=None,
                           cohomology_skipped=True, fixed_points=points, checks=checks)


# ---------------------------------------------------------------------------
# Nomizu

@dataclass
class NomizuReport:
    betti: list[int]
    euler: int
    expected: list[int] | None
    matches: bool | None

    @property
    def ok(self) -> bool:
        return (self.matches is not False) and (self.euler == 0 or not self.betti or len(self.betti) == 1)

    def to_json(self) -> dict:
        return {"betti": self.betti, "euler": self.euler, "expected": self.expected, "matches": self.matches,
                "ok": self.ok}


def nomizu_check(L: NilpotentLieAlgebra, expected: Sequence[int] | None = None) -> NomizuReport:
    b = betti_numbers(ce_complex(L))
    euler = sum((-1) ** k * v for k, v in enumerate(b))
    if L.dim > 0 and euler != 0:
        raise TraceIdentityError(f"Euler characteristic {euler} != 0 for a nilmanifold")
    matches = None if expected is None else list(expected) == b
    return NomizuReport(b, euler, list(expected) if expected is not None else None, matches)
