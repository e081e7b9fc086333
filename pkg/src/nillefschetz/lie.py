"""Nilpotent Lie algebras, Chevalley-Eilenberg complexes and cohomology traces.

Vectors are tuples of scalars (Fractions, or FieldElements of one real
algebraic field).  Linear maps are :class:`Matrix` objects whose columns are
the images of basis vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .algebraic import FieldElement, RealAlgebraicField
from .errors import (
    EigenvalueOne,
    NonSquareError,
    NotClosedUnderBracket,
    NotHomomorphism,
    NotInvariant,
    NotNilpotent,
    TraceIdentityError,
)
from .exact import (
    Matrix,
    char_poly,
    determinant,
    kernel_basis,
    parse_rational,
    rank,
    rational_str,
    rref,
    solve,
)

ZERO = Fraction(0)
ONE = Fraction(1)


def _is_zero_vec(v) -> bool:
    return all(x == 0 for x in v)


def _field_of(values: Iterable) -> RealAlgebraicField | None:
    for v in values:
        if isinstance(v, FieldElement):
            return v.field
    return None


class NilpotentLieAlgebra:
    """Structure constants ``c[i][j][k]`` with ``[e_i, e_j] = sum_k c[i][j][k] e_k``.

    The constructor only stores data; use :func:`validate_algebra` to check
    antisymmetry, Jacobi and nilpotency.
    """

    def __init__(self, dim: int, constants: Sequence[Sequence[Sequence]] | None = None):
        self.dim = dim
        if constants is None:
            constants = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
        self.c = tuple(tuple(tuple(row) for row in plane) for plane in constants)
        if len(self.c) != dim or any(len(p) != dim or any(len(r) != dim for r in p) for p in self.c):
            raise ValueError("structure constants must be a dim x dim x dim array")

    @classmethod
    def from_brackets(cls, dim: int, brackets: Iterable[tuple[int, int, int, object]]) -> "NilpotentLieAlgebra":
        """Build from sparse ``(i, j, k, c)`` entries with ``i < j``; antisymmetry is implied."""
        c = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
        for i, j, k, v in brackets:
            if not (0 <= i < j < dim and 0 <= k < dim):
                raise ValueError(f"bracket index out of range or not i < j: {(i, j, k)}")
            v = parse_rational(v) if isinstance(v, (str, int)) else v
            c[i][j][k] += v
            c[j][i][k] -= v
        return cls(dim, c)

    @classmethod
    def abelian(cls, dim: int) -> "NilpotentLieAlgebra":
        return cls(dim)

    @classmethod
    def from_json(cls, data: dict) -> "NilpotentLieAlgebra":
        return cls.from_brackets(data["dim"], ((b["i"], b["j"], b["k"], b["c"]) for b in data.get("brackets", [])))

    def to_json(self) -> dict:
        out = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(self.dim):
                    v = self.c[i][j][k]
                    if v != 0:
                        out.append({"i": i, "j": j, "k": k, "c": rational_str(v)})
        return {"dim": self.dim, "brackets": out}

    @property
    def scalar_field(self) -> RealAlgebraicField | None:
        return _field_of(v for p in self.c for r in p for v in r)

    def basis_vector(self, i: int) -> tuple:
        return tuple(ONE if k == i else ZERO for k in range(self.dim))

    def bracket(self, u: Sequence, v: Sequence) -> tuple:
        out = [ZERO] * self.dim
        for i, ui in enumerate(u):
            if ui == 0:
                continue
            for j, vj in enumerate(v):
                if vj == 0 or i == j:
                    continue
                s = ui * vj
                row = self.c[i][j]
                for k in range(self.dim):
                    if row[k] != 0:
                        out[k] = out[k] + s * row[k]
        return tuple(out)

    def conjugate(self, P: Matrix) -> "NilpotentLieAlgebra":
        """Structure constants in the basis given by the columns of invertible ``P``."""
        n = self.dim
        cols = P.columns()
        Pinv = solve(P, Matrix.identity(n, ONE))
        if Pinv is None:
            raise ValueError("change of basis is singular")
        c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                c[i][j] = list(Pinv @ self.bracket(cols[i], cols[j]))
        return NilpotentLieAlgebra(n, c)

    def __eq__(self, other):
        return isinstance(other, NilpotentLieAlgebra) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"NilpotentLieAlgebra(dim={self.dim}, nonzero brackets={len(self.to_json()['brackets'])})"


# ---------------------------------------------------------------------------
# Subspaces and subalgebras

def _canonical_basis(vectors: Sequence[Sequence], dim: int) -> tuple[tuple, ...]:
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return ()
    R, _, r = rref(Matrix(vectors, dim))
    return tuple(R.rows[:r])


class Subalgebra:
    """A subspace of ``parent`` spanned by ``basis``, closed under the bracket.

    The basis is kept as given (callers may rely on its order); use
    :meth:`canonical` for the reduced echelon basis.
    """

    def __init__(self, parent: NilpotentLieAlgebra, basis: Sequence[Sequence], *, check: bool = True):
        self.parent = parent
        self.basis = tuple(tuple(v) for v in basis)
        for v in self.basis:
            if len(v) != parent.dim:
                raise ValueError("basis vector has wrong length")
        if self.basis and rank(Matrix(self.basis, parent.dim)) != len(self.basis):
            raise ValueError("subalgebra basis is linearly dependent")
        if check:
            self.structure_constants()

    @classmethod
    def full(cls, L: NilpotentLieAlgebra) -> "Subalgebra":
        return cls(L, [L.basis_vector(i) for i in range(L.dim)], check=False)

    @classmethod
    def zero(cls, L: NilpotentLieAlgebra) -> "Subalgebra":
        return cls(L, [], check=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def scalar_field(self) -> RealAlgebraicField | None:
        return _field_of(v for b in self.basis for v in b)

    def basis_matrix(self) -> Matrix:
        """Columns are the basis vectors."""
        return Matrix.from_columns(self.basis, self.parent.dim)

    def coordinates(self, v: Sequence):
        """Coordinates of ``v`` in the basis, or ``None`` if ``v`` is not in the span."""
        if not self.basis:
            return () if _is_zero_vec(v) else None
        x = solve(self.basis_matrix(), Matrix([[a] for a in v], 1))
        return None if x is None else tuple(x.column(0))

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def structure_constants(self) -> NilpotentLieAlgebra:
        """The algebra ``p`` itself, in its own basis."""
        d = self.dim
        c = [[[ZERO] * d for _ in range(d)] for _ in range(d)]
        for a in range(d):
            for b in range(a + 1, d):
                w = self.parent.bracket(self.basis[a], self.basis[b])
                coords = self.coordinates(w)
                if coords is None:
                    raise NotClosedUnderBracket(f"[b{a}, b{b}] leaves the subalgebra", witness=(a, b))
                c[a][b] = list(coords)
                c[b][a] = [-x for x in coords]
        return NilpotentLieAlgebra(d, c)

    def restrict(self, F: Matrix) -> Matrix:
        """Matrix of ``F`` restricted to this subspace, in its basis."""
        if self.dim == 0:
            return Matrix([], 0)
        B = self.basis_matrix()
        X = solve(B, F @ B)
        if X is None:
            raise NotInvariant("subspace is not invariant under the endomorphism")
        return X

    def canonical(self) -> tuple[tuple, ...]:
        return _canonical_basis(self.basis, self.parent.dim)

    def same_space(self, other: "Subalgebra") -> bool:
        return self.canonical() == other.canonical()

    def to_json(self) -> list:
        from .serialize import scalar_to_json  # local import keeps the dependency one-way

        return [[scalar_to_json(v) for v in b] for b in self.basis]

    def __repr__(self):
        return f"Subalgebra(dim={self.dim})"


# ---------------------------------------------------------------------------
# Validation

@dataclass
class AlgebraReport:
    antisymmetric: bool
    jacobi: bool
    nilpotent: bool
    nilpotency_class: int | None
    failure: str | None = None
    witness: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.antisymmetric and self.jacobi and self.nilpotent

    def to_json(self) -> dict:
        return {"antisymmetric": self.antisymmetric, "jacobi": self.jacobi, "nilpotent": self.nilpotent,
                "nilpotency_class": self.nilpotency_class, "failure": self.failure,
                "witness": list(self.witness) if self.witness is not None else None}


def validate_algebra(L: NilpotentLieAlgebra) -> AlgebraReport:
    n = L.dim
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                if L.c[i][j][k] != -L.c[j][i][k]:
                    return AlgebraReport(False, False, False, None,
                                         f"c[{i}][{j}][{k}] != -c[{j}][{i}][{k}]", (i, j, k))
    for i, j, k in combinations(range(n), 3):
        ei, ej, ek = L.basis_vector(i), L.basis_vector(j), L.basis_vector(k)
        s = [a + b + c for a, b, c in zip(L.bracket(ei, L.bracket(ej, ek)),
                                          L.bracket(ej, L.bracket(ek, ei)),
                                          L.bracket(ek, L.bracket(ei, ej)))]
        if not _is_zero_vec(s):
            return AlgebraReport(True, False, False, None, f"Jacobi identity fails on ({i}, {j}, {k})", (i, j, k))
    try:
        chain = lower_central_series(L)
    except NotNilpotent as exc:
        return AlgebraReport(True, True, False, None, str(exc))
    return AlgebraReport(True, True, True, len(chain) - 1)


def lower_central_series(L: NilpotentLieAlgebra) -> list[Subalgebra]:
    """``c_0 = g``, ``c_{j+1} = [g, c_j]``, ending with the zero subalgebra."""
    current = _canonical_basis([L.basis_vector(i) for i in range(L.dim)], L.dim)
    chain = [Subalgebra(L, current, check=False)]
    while current:
        brackets = [L.bracket(L.basis_vector(i), b) for i in range(L.dim) for b in current]
        nxt = _canonical_basis([w for w in brackets if not _is_zero_vec(w)], L.dim)
        if len(nxt) == len(current):
            raise NotNilpotent(f"lower central series stabilises in dimension {len(current)}")
        chain.append(Subalgebra(L, nxt, check=False))
        current = nxt
    return chain


def nilpotency_class(L: NilpotentLieAlgebra) -> int:
    return len(lower_central_series(L)) - 1


@dataclass(frozen=True)
class LieEndomorphism:
    algebra: NilpotentLieAlgebra
    matrix: Matrix

    @property
    def char_poly(self):
        return char_poly(self.matrix)


def validate_endomorphism(L: NilpotentLieAlgebra, F: Matrix, *, forbid_eigenvalue_one: bool = True) -> LieEndomorphism:
    """Check that ``F`` (columns = images of basis vectors) preserves brackets."""
    if not F.is_square() or F.ncols != L.dim:
        raise NonSquareError(f"endomorphism of shape {F.shape} for a {L.dim}-dimensional algebra")
    cols = F.columns()
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            lhs = F @ L.bracket(L.basis_vector(i), L.basis_vector(j))
            rhs = L.bracket(cols[i], cols[j])
            if tuple(lhs) != tuple(rhs):
                raise NotHomomorphism(f"f[e{i}, e{j}] != [f e{i}, f e{j}]", witness=(i, j))
    for layer in lower_central_series(L):
        layer.restrict(F)
    if forbid_eigenvalue_one and char_poly(F)(1) == 0:
        raise EigenvalueOne("the endomorphism has eigenvalue 1")
    return LieEndomorphism(L, F)


# ---------------------------------------------------------------------------
# Chevalley-Eilenberg complex

@dataclass
class CEComplex:
    """``d_p : Λ^p p^∨ -> Λ^{p+1} p^∨`` in lexicographic wedge-dual bases."""

    algebra: NilpotentLieAlgebra
    wedge_bases: list[list[tuple[int, ...]]]
    differentials: list[Matrix] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.algebra.dim


def _wedge_basis(n: int, p: int) -> list[tuple[int, ...]]:
    return list(combinations(range(n), p))


def _differential(A: NilpotentLieAlgebra, p: int) -> Matrix:
    n = A.dim
    src = _wedge_basis(n, p)
    dst = _wedge_basis(n, p + 1)
    index = {I: col for col, I in enumerate(src)}
    rows = [[ZERO] * len(src) for _ in dst]
    for r, J in enumerate(dst):
        for a in range(len(J)):
            for b in range(a + 1, len(J)):
                rest = J[:a] + J[a + 1:b] + J[b + 1:]
                sign_ab = -1 if (a + b) % 2 else 1
                coeffs = A.c[J[a]][J[b]]
                for k in range(n):
                    ck = coeffs[k]
                    if ck == 0 or k in rest:
                        continue
                    pos = sum(1 for x in rest if x < k)
                    I = rest[:pos] + (k,) + rest[pos:]
                    s = sign_ab * (-1 if pos % 2 else 1)
                    col = index[I]
                    rows[r][col] = rows[r][col] + s * ck
    return Matrix(rows, len(src))


def ce_complex(p: Subalgebra | NilpotentLieAlgebra) -> CEComplex:
    A = p if isinstance(p, NilpotentLieAlgebra) else p.structure_constants()
    n = A.dim
    C = CEComplex(A, [_wedge_basis(n, k) for k in range(n + 1)])
    C.differentials = [_differential(A, k) for k in range(n)]
    for k in range(n - 1):
        sq = C.differentials[k + 1] @ C.differentials[k]
        if any(v != 0 for r in sq.rows for v in r):
            raise ArithmeticError(f"d_{k + 1} d_{k} != 0; structure constants violate Jacobi")
    return C


def betti_numbers(C: CEComplex) -> list[int]:
    n = C.dim
    ranks = [rank(d) for d in C.differentials] + [0]
    out = []
    for k in range(n + 1):
        size = len(C.wedge_bases[k])
        out.append(size - ranks[k] - (ranks[k - 1] if k > 0 else 0))
    return out


def exterior_pullback(F: Matrix, p: int) -> Matrix:
    """Matrix of ``f^*`` on ``Λ^p`` of the dual, with ``M[J][I] = det F[I, J]``."""
    n = F.ncols
    basis = _wedge_basis(n, p)
    if p == 0:
        return Matrix([[ONE]], 1)
    return Matrix([[determinant(F.submatrix(I, J)) for I in basis] for J in basis], len(basis))


def _trace_on_span(Phi: Matrix, vectors: Sequence[Sequence]):
    if not vectors:
        return ZERO
    B = Matrix.from_columns(vectors, Phi.nrows)
    X = solve(B, Phi @ B)
    if X is None:
        raise NotInvariant("cocycle or coboundary space is not invariant under the pullback")
    return X.trace()


def _column_space(M: Matrix) -> list[tuple]:
    if M.ncols == 0 or M.nrows == 0:
        return []
    _, pivots, _ = rref(M)
    return [M.column(c) for c in pivots]


def _as_ambient_restriction(p: Subalgebra | NilpotentLieAlgebra, F: Matrix | LieEndomorphism) -> tuple[CEComplex, Matrix]:
    if isinstance(F, LieEndomorphism):
        F = F.matrix
    if isinstance(p, NilpotentLieAlgebra):
        return ce_complex(p), F
    return ce_complex(p), p.restrict(F)


def cohomology_trace(p: Subalgebra | NilpotentLieAlgebra, F: Matrix | LieEndomorphism, degree: int,
                     complex_: CEComplex | None = None, restricted: Matrix | None = None):
    """Trace of ``f^*`` on ``H^degree(p)``.

    ``F`` is the ambient matrix; it is restricted to ``p`` here.  Pass
    ``complex_`` and ``restricted`` to reuse work across degrees.
    """
    if complex_ is None or restricted is None:
        complex_, restricted = _as_ambient_restriction(p, F)
    n = complex_.dim
    if degree < 0 or degree > n:
        return ZERO
    Phi = exterior_pullback(restricted, degree)
    size = len(complex_.wedge_bases[degree])
    if degree < n:
        cocycles = kernel_basis(complex_.differentials[degree])
    else:
        cocycles = [tuple(ONE if i == j else ZERO for i in range(size)) for j in range(size)]
    boundaries = _column_space(complex_.differentials[degree - 1]) if degree > 0 else []
    return _trace_on_span(Phi, cocycles) - _trace_on_span(Phi, boundaries)


def restricted_determinant(p: Subalgebra | NilpotentLieAlgebra, F: Matrix | LieEndomorphism):
    """``det(1 - f_*|p)`` (1 on the zero space)."""
    if isinstance(F, LieEndomorphism):
        F = F.matrix
    Fp = F if isinstance(p, NilpotentLieAlgebra) else p.restrict(F)
    n = Fp.ncols
    return determinant(Matrix.identity(n, ONE) - Fp) if n else ONE


def alternating_cohomology_trace(p: Subalgebra | NilpotentLieAlgebra, F: Matrix | LieEndomorphism):
    """``sum_k (-1)^k Tr(f^* | H^k(p))``, checked against ``det(1 - f_*|p)``."""
    C, Fp = _as_ambient_restriction(p, F)
    total = ZERO
    for k in range(C.dim + 1):
        t = cohomology_trace(p, F, k, complex_=C, restricted=Fp)
        total = total + t if k % 2 == 0 else total - t
    det = determinant(Matrix.identity(Fp.ncols, ONE) - Fp) if Fp.ncols else ONE
    if total != det:
        raise TraceIdentityError(f"alternating cohomology trace {total} != det(1 - f) = {det}")
    return total
