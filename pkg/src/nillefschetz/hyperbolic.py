"""Unstable / stable / neutral splitting and the lattice density test."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebraic import (
    CircleClass,
    FieldElement,
    RealAlgebraicField,
    RootEnclosure,
    RootStructure,
    classify_unit_circle,
    exact_root_structure,
)
from .errors import EigenvalueOne, JordanOnCircle, TraceIdentityError
from .exact import (
    Matrix,
    UnivariatePolynomial,
    char_poly,
    kernel_basis,
    poly_at_matrix,
    poly_gcd,
    rank,
    solve,
)
from .lie import LieEndomorphism, NilpotentLieAlgebra, Subalgebra, lower_central_series, restricted_determinant

ONE = Fraction(1)
ZERO = Fraction(0)


class AnosovClass(str, enum.Enum):
    ANOSOV = "ANOSOV"
    GENERALIZED = "GENERALIZED"
    NEITHER = "NEITHER"


def _matrix(f) -> Matrix:
    return f.matrix if isinstance(f, LieEndomorphism) else f


def anosov_class(f: LieEndomorphism | Matrix) -> AnosovClass:
    chi = char_poly(_matrix(f))
    if chi(1) == 0:
        return AnosovClass.NEITHER
    if classify_unit_circle(chi).on == 0:
        return AnosovClass.ANOSOV
    return AnosovClass.GENERALIZED


# ---------------------------------------------------------------------------
# Splitting

@dataclass
class Splitting:
    unstable: Subalgebra
    stable: Subalgebra
    neutral: Subalgebra
    eigen_data: list[tuple[RootEnclosure, int]]
    scalar_extension: RealAlgebraicField | None
    roots: RootStructure | None = None

    def dims(self) -> tuple[int, int, int]:
        return (self.unstable.dim, self.stable.dim, self.neutral.dim)

    def summand(self, name: str) -> Subalgebra:
        return {"unstable": self.unstable, "stable": self.stable, "neutral": self.neutral}[name]

    def to_json(self) -> dict:
        out = {"scalar_extension": self.scalar_extension.to_json() if self.scalar_extension else None}
        for name in ("unstable", "stable", "neutral"):
            out[name] = self.summand(name).to_json()
        out["eigenvalues"] = [dict(e.to_json(), multiplicity=m) for e, m in self.eigen_data]
        return out


def _normalise(v: Sequence) -> tuple:
    lead = next(x for x in v if x != 0)
    return tuple(x / lead if x != 0 else ZERO for x in v)


def _kernel_of_poly(F: Matrix, coeffs: Sequence) -> list[tuple]:
    n = F.ncols
    one = next((c for c in coeffs if isinstance(c, FieldElement)), None)
    if one is not None:
        one = one.field(1)
        I = Matrix.identity(n, one)
        acc = Matrix.zeros(n, n, one - one)
        for c in reversed(list(coeffs)):
            acc = acc @ F + I * c
        M = acc
    else:
        M = poly_at_matrix(coeffs, F)
    return [_normalise(v) for v in kernel_basis(M)]


def _power_coeffs(linear: Sequence, m: int) -> list:
    """Ascending coefficients of ``(c0 + c1 x)^m`` (or of any polynomial power)."""
    out = [ONE]
    for _ in range(m):
        nxt = [ZERO] * (len(out) + len(linear) - 1)
        for i, a in enumerate(out):
            for j, b in enumerate(linear):
                nxt[i + j] = nxt[i + j] + a * b
        out = nxt
    return out


def split(f: LieEndomorphism | Matrix, L: NilpotentLieAlgebra) -> Splitting:
    """``g = g^u + g^s + g^e`` from generalized eigenspaces of ``f_*``."""
    F = _matrix(f)
    n = F.ncols
    chi = char_poly(F)
    if chi(1) == 0:
        raise EigenvalueOne("the endomorphism has eigenvalue 1")
    rs = exact_root_structure(chi)
    groups = {CircleClass.OUTSIDE: [], CircleClass.INSIDE: []}
    rational_parts = {CircleClass.OUTSIDE: UnivariatePolynomial((1,)), CircleClass.INSIDE: UnivariatePolynomial((1,))}
    for r in rs.roots:
        if r.kind == "real_quadratic":
            groups[r.circle_class].extend(_kernel_of_poly(F, _power_coeffs(r.factor_coeffs, r.multiplicity)))
        else:
            rational_parts[r.circle_class] = rational_parts[r.circle_class] * UnivariatePolynomial(r.factor_coeffs) ** r.multiplicity
    for cls, P in rational_parts.items():
        if P.degree > 0:
            groups[cls] = _kernel_of_poly(F, P.coeffs) + groups[cls]
    Pe = rs.neutral_factor
    neutral = _kernel_of_poly(F, Pe.coeffs) if Pe.degree > 0 else []
    if Pe.degree > 0:
        rad = Pe.exact_div(poly_gcd(Pe, Pe.derivative()))
        if len(_kernel_of_poly(F, rad.coeffs)) < Pe.degree:
            raise JordanOnCircle("an eigenvalue on the unit circle has a nontrivial Jordan block")
    u = Subalgebra(L, groups[CircleClass.OUTSIDE])
    s = Subalgebra(L, groups[CircleClass.INSIDE])
    e = Subalgebra(L, neutral)
    if u.dim + s.dim + e.dim != n or rank(Matrix(list(u.basis + s.basis + e.basis), n)) != n:
        raise ArithmeticError("generalized eigenspaces do not form a direct sum decomposition")
    prod = restricted_determinant(u, F) * restricted_determinant(s, F) * restricted_determinant(e, F)
    if prod != chi(1):
        raise TraceIdentityError("determinants over the summands do not multiply to det(1 - f_*)")
    eigen = []
    for r in rs.roots:
        if r.enclosure is not None:
            eigen.append((r.enclosure, r.multiplicity))
    eigen += [(enc, enc.multiplicity) for enc in rs.enclosures if enc.circle_class is CircleClass.ON]
    for r in rs.roots:
        if r.kind == "rational":
            enc = RootEnclosure(UnivariatePolynomial(r.factor_coeffs), r.multiplicity,
                                (r.value, r.value, ZERO, ZERO))
            enc.circle_class = r.circle_class
            eigen.append((enc, r.multiplicity))
    for r in _rational_on_roots(chi):
        enc = RootEnclosure(UnivariatePolynomial((-r, 1)), 1, (r, r, ZERO, ZERO))
        enc.circle_class = CircleClass.ON
        eigen.append((enc, _multiplicity(chi, r)))
    eigen.sort(key=lambda em: (em[0].region[0] + em[0].region[1], em[0].region[2] + em[0].region[3]))
    return Splitting(u, s, e, eigen, rs.field, rs)


def _rational_on_roots(chi: UnivariatePolynomial) -> list[Fraction]:
    return [r for r in (Fraction(-1), Fraction(1)) if chi(r) == 0]


def _multiplicity(chi: UnivariatePolynomial, r) -> int:
    m = 0
    lin = UnivariatePolynomial((-r, 1))
    while chi(r) == 0:
        chi = chi.exact_div(lin)
        m += 1
    return m


# ---------------------------------------------------------------------------
# Gamma-acceptability

@dataclass
class LayerVerdict:
    j: int
    dense: bool
    witness: tuple[int, ...] | None = None
    intersection_dim: int = 0

    def to_json(self) -> dict:
        return {"j": self.j, "dense": self.dense, "intersection_dim": self.intersection_dim,
                "witness": list(self.witness) if self.witness is not None else None}


@dataclass
class AcceptabilityReport:
    layers: list[LayerVerdict] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(v.dense for v in self.layers)

    def to_json(self) -> dict:
        return {"overall": self.overall, "layers": [v.to_json() for v in self.layers]}


def intersect(p: Subalgebra, rational_space: Subalgebra) -> list[tuple]:
    """Basis of ``p ∩ V`` for a rational subspace ``V``."""
    n = p.parent.dim
    if not p.basis:
        return []
    if rational_space.dim == n:
        return list(p.basis)
    ann = kernel_basis(Matrix(rational_space.basis, n)) if rational_space.basis else [
        tuple(ONE if i == j else ZERO for i in range(n)) for j in range(n)]
    P = p.basis_matrix()
    coeffs = kernel_basis(Matrix(ann, n) @ P)
    return [tuple(P @ c) for c in coeffs]


def _power_components(x, degree: int) -> list[Fraction]:
    if isinstance(x, FieldElement):
        return list(x.coords)
    return [Fraction(x)] + [ZERO] * (degree - 1)


def _primitive_integer(v: Sequence[Fraction]) -> tuple[int, ...]:
    den = math.lcm(*(Fraction(x).denominator for x in v))
    ints = [int(Fraction(x) * den) for x in v]
    g = math.gcd(*ints) or 1
    lead = next(x for x in ints if x)
    if lead < 0:
        g = -g
    return tuple(x // g for x in ints)


def is_gamma_acceptable(p: Subalgebra, L: NilpotentLieAlgebra | None = None,
                        chain: list[Subalgebra] | None = None) -> AcceptabilityReport:
    """Layerwise density of ``p`` in the tori ``(Z^n ∩ c_j) \\ c_j / c_{j+1}``.

    A layer is dense iff no nonzero rational covector on ``c_j`` kills both
    ``c_{j+1}`` and ``p ∩ c_j``.  Irrational coordinates are expanded in the
    power basis of the scalar field, giving a linear system over Q.
    """
    L = L or p.parent
    chain = chain or lower_central_series(L)
    fld = p.scalar_field
    deg = fld.degree if fld else 1
    report = AcceptabilityReport()
    for j in range(len(chain) - 1):
        cj, cnext = chain[j], chain[j + 1]
        pj = intersect(p, cj)
        rows = []
        for r in cnext.basis:
            rows.append(list(cj.coordinates(r)))
        for v in pj:
            coords = cj.coordinates(v)
            if coords is None:
                raise ArithmeticError("intersection left the layer")
            comps = [_power_components(x, deg) for x in coords]
            for t in range(deg):
                rows.append([c[t] for c in comps])
        sol = kernel_basis(Matrix(rows, cj.dim)) if rows else [
            tuple(ONE if a == b else ZERO for a in range(cj.dim)) for b in range(cj.dim)]
        if not sol:
            report.layers.append(LayerVerdict(j, True, None, len(pj)))
            continue
        w = sol[0]
        Q = Matrix(cj.basis, L.dim)
        W = solve(Q, Matrix([[x] for x in w], 1))
        report.layers.append(LayerVerdict(j, False, _primitive_integer(W.column(0)), len(pj)))
    return report
