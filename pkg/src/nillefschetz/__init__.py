"""Exact verification of the dynamical Lefschetz trace formula on nilmanifolds."""

from .algebraic import (
    CircleClass,
    FieldElement,
    RealAlgebraicField,
    RootEnclosure,
    classify_unit_circle,
    field_arith,
    isolate_roots,
    sign_of,
    to_interval,
)
from .dynamics import (
    FixedPoint,
    GroupEndomorphism,
    Polynomial,
    PolynomialGroup,
    PolynomialMap,
    bch_group_from_algebra,
    fixed_points,
    local_data,
    validate_endomorphism_map,
    validate_group,
)
from .exact import (
    Matrix,
    UnivariatePolynomial,
    char_poly,
    determinant,
    kernel_basis,
    rref,
    smith_normal_form,
)
from .hyperbolic import AnosovClass, Splitting, anosov_class, is_gamma_acceptable, split
from .lefschetz import FoliationChoice, FoliationKind, LefschetzReport, Verdict, nomizu_check, verify
from .lie import (
    CEComplex,
    NilpotentLieAlgebra,
    Subalgebra,
    alternating_cohomology_trace,
    betti_numbers,
    ce_complex,
    cohomology_trace,
    lower_central_series,
    validate_algebra,
    validate_endomorphism,
)

__version__ = "0.1.0"
