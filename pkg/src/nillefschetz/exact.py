"""Exact arithmetic substrate: rationals, dense matrices, polynomials over Q.

Rationals are :class:`fractions.Fraction` throughout.  Matrices are dense and
generic in their scalar type: entries may be ``int``, ``Fraction`` or any
exact field element supporting ``+ - * /`` and comparison with ``0``
(see :mod:`nillefschetz.algebraic`).  Purely rational inputs take
fraction-free integer paths.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NonSquareError

__all__ = [
    "Matrix",
    "UnivariatePolynomial",
    "char_poly",
    "char_poly_coeffs",
    "determinant",
    "kernel_basis",
    "parse_rational",
    "poly_gcd",
    "poly_at_matrix",
    "rank",
    "rational_str",
    "rref",
    "smith_normal_form",
    "solve",
    "squarefree_decomposition",
]


# ---------------------------------------------------------------------------
# Rationals

def parse_rational(value) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int.  Floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ValueError(f"not an exact rational literal: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot read {type(value).__name__} as a rational")


def rational_str(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


# ---------------------------------------------------------------------------
# Univariate polynomials over Q

class UnivariatePolynomial:
    """Polynomial with ``Fraction`` coefficients in ascending degree order.

    The zero polynomial has no coefficients and degree ``-1``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls) -> "UnivariatePolynomial":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "UnivariatePolynomial":
        return cls((c,))

    @classmethod
    def from_roots(cls, roots: Iterable) -> "UnivariatePolynomial":
        p = cls((1,))
        for r in roots:
            p = p * cls((-Fraction(r), 1))
        return p

    # -- basic structure
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, UnivariatePolynomial):
            return self.coeffs == other.coeffs
        if _is_rational(other):
            return self.coeffs == UnivariatePolynomial((other,)).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("upoly", self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    # -- arithmetic
    def _coerce(self, other):
        if isinstance(other, UnivariatePolynomial):
            return other
        if _is_rational(other):
            return UnivariatePolynomial((other,))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return UnivariatePolynomial(self[i] + o[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return UnivariatePolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return UnivariatePolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return UnivariatePolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = UnivariatePolynomial((1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = o.degree
        if len(rem) - 1 < dq:
            return UnivariatePolynomial(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        inv_lc = 1 / o.lc
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * inv_lc
            quot[k - dq] = c
            if c:
                for j, b in enumerate(o.coeffs):
                    rem[k - dq + j] -= c * b
        return UnivariatePolynomial(quot), UnivariatePolynomial(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "UnivariatePolynomial":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def __call__(self, x):
        """Horner evaluation; ``x`` may be any ring element."""
        if not self.coeffs:
            return Fraction(0)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    # -- derived polynomials
    def derivative(self) -> "UnivariatePolynomial":
        return UnivariatePolynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "UnivariatePolynomial":
        if not self.coeffs:
            return self
        return UnivariatePolynomial(c / self.lc for c in self.coeffs)

    def reverse(self) -> "UnivariatePolynomial":
        """``x^deg p(1/x)``."""
        return UnivariatePolynomial(reversed(self.coeffs))

    def compose(self, inner: "UnivariatePolynomial") -> "UnivariatePolynomial":
        acc = UnivariatePolynomial()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def scale_argument(self, r) -> "UnivariatePolynomial":
        """``p(r x)``."""
        r = Fraction(r)
        return UnivariatePolynomial(c * r**i for i, c in enumerate(self.coeffs))

    def integer_primitive(self) -> list[int]:
        """Integer coefficient list with content 1 and positive leading term."""
        if not self.coeffs:
            return []
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return [v // g for v in ints]

    # -- display / io
    def to_json(self) -> list[str]:
        return [rational_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "UnivariatePolynomial":
        return cls(parse_rational(v) for v in data)

    def __repr__(self):
        return f"UnivariatePolynomial({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = rational_str(a)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                body = mono if a == 1 else f"{rational_str(a)}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def poly_gcd(a: UnivariatePolynomial, b: UnivariatePolynomial) -> UnivariatePolynomial:
    """Monic gcd (zero if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_decomposition(p: UnivariatePolynomial) -> list[tuple[UnivariatePolynomial, int]]:
    """Yun's algorithm: ``p = lc * prod s_k**k`` with monic squarefree coprime ``s_k``.

    Only factors of positive degree are returned.
    """
    if p.degree < 1:
        return []
    p = p.monic()
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p.exact_div(a)
    c = dp.exact_div(a)
    d = c - b.derivative()
    out = []
    k = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, k))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        k += 1
    return out


# ---------------------------------------------------------------------------
# Dense matrices

class Matrix:
    """Immutable dense matrix stored row-major as a tuple of tuples."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self.rows = rows
        self.ncols = ncols

    @classmethod
    def rational(cls, rows: Iterable[Iterable]) -> "Matrix":
        return cls([[parse_rational(v) for v in r] for r in rows])

    @classmethod
    def identity(cls, n: int, one=1) -> "Matrix":
        zero = one - one
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, m: int, n: int, zero=0) -> "Matrix":
        return cls([[zero] * n for _ in range(m)], n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None) -> "Matrix":
        if not columns:
            return cls([[] for _ in range(nrows or 0)], 0)
        return cls(zip(*columns), len(columns))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def is_square(self) -> bool:
        return len(self.rows) == self.ncols

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self.rows[i][j]
        return self.rows[idx]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        return Matrix(zip(*self.rows), len(self.rows)) if self.rows else Matrix([], 0)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def map(self, fn) -> "Matrix":
        return Matrix([[fn(v) for v in r] for r in self.rows], self.ncols)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def __hash__(self):
        return hash(self.rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self):
        return self.map(lambda v: -v)

    def __mul__(self, scalar):
        if isinstance(scalar, Matrix):
            return NotImplemented
        return self.map(lambda v: v * scalar)

    def __rmul__(self, scalar):
        return self.map(lambda v: scalar * v)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.columns()
            return Matrix([[_dot(r, c) for c in cols] for r in self.rows], other.ncols)
        vec = tuple(other)
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(_dot(r, vec) for r in self.rows)

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square():
            raise NonSquareError("power of a non-square matrix")
        result = Matrix.identity(self.ncols)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def trace(self):
        if not self.is_square():
            raise NonSquareError("trace of a non-square matrix")
        return sum((self.rows[i][i] for i in range(self.ncols)), Fraction(0))

    def is_rational(self) -> bool:
        return all(_is_rational(v) for r in self.rows for v in r)

    def to_json(self) -> list[list[str]]:
        return [[rational_str(v) for v in r] for r in self.rows]

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(v) for v in r) + "]" for r in self.rows)
        return f"Matrix([{body}])"


def _dot(a, b):
    acc = 0
    for x, y in zip(a, b):
        if x and y:
            acc = acc + x * y
    return acc if not isinstance(acc, int) else Fraction(acc)


# ---------------------------------------------------------------------------
# Elimination

def _integer_rows(rows):
    out = []
    for r in rows:
        den = math.lcm(*(Fraction(v).denominator for v in r)) if r else 1
        out.append([int(Fraction(v) * den) for v in r])
    return out


def _primitive(row):
    g = math.gcd(*row)
    return [v // g for v in row] if g > 1 else row


def _echelon_integer(rows, ncols):
    """Fraction-free forward elimination; rows are made primitive after each step."""
    a = [list(r) for r in rows]
    m = len(a)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        piv = None
        best = None
        for i in range(r, m):
            v = a[i][c]
            if v and (best is None or abs(v) < best):
                piv, best = i, abs(v)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, m):
            v = a[i][c]
            if v:
                a[i] = _primitive([p * x - v * y for x, y in zip(a[i], a[r])])
        pivots.append(c)
        r += 1
    return a, pivots


def rref(M: Matrix) -> tuple[Matrix, list[int], int]:
    """Reduced row echelon form, pivot columns and rank."""
    m, n = M.shape
    if M.is_rational():
        ints, pivots = _echelon_integer(_integer_rows(M.rows), n)
        rows = [[Fraction(v) for v in r] for r in ints]
    else:
        rows = [list(r) for r in M.rows]
        pivots = []
        r = 0
        for c in range(n):
            if r == m:
                break
            piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            p = rows[r][c]
            for i in range(r + 1, m):
                v = rows[i][c]
                if v != 0:
                    f = v / p
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
    # back substitution to reduced form
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        p = rows[k][c]
        rows[k] = [v / p for v in rows[k]]
        for i in range(k):
            v = rows[i][c]
            if v != 0:
                rows[i] = [x - v * y for x, y in zip(rows[i], rows[k])]
    return Matrix(rows, n), pivots, len(pivots)


def rank(M: Matrix) -> int:
    if M.is_rational():
        return len(_echelon_integer(_integer_rows(M.rows), M.ncols)[1])
    return rref(M)[2]


def kernel_basis(M: Matrix) -> list[tuple]:
    """Basis of ``{v : M v = 0}`` read off the reduced echelon form."""
    R, pivots, _ = rref(M)
    n = M.ncols
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for k, c in enumerate(pivots):
            v[c] = -R[k, f]
        basis.append(tuple(v))
    return basis


def determinant(M: Matrix):
    """Exact determinant by Bareiss elimination."""
    if not M.is_square():
        raise NonSquareError(f"determinant of a {M.shape} matrix")
    n = M.ncols
    if n == 0:
        return Fraction(1)
    if M.is_rational():
        scale = Fraction(1)
        rows = []
        for r in M.rows:
            den = math.lcm(*(Fraction(v).denominator for v in r))
            scale *= den
            rows.append([int(Fraction(v) * den) for v in r])
        div = lambda a, b: a // b  # noqa: E731  exact in Bareiss
        one = 1
    else:
        scale = Fraction(1)
        rows = [list(r) for r in M.rows]
        div = lambda a, b: a / b  # noqa: E731
        one = Fraction(1)
    sign = 1
    prev = one
    for k in range(n - 1):
        if rows[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if rows[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        p = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = div(rows[i][j] * p - rows[i][k] * rows[k][j], prev)
        prev = p
    det = rows[n - 1][n - 1]
    if isinstance(det, int):
        return Fraction(sign * det) / scale
    return det * sign if sign == 1 else -det


def solve(A: Matrix, B: Matrix) -> Matrix | None:
    """Unique-or-any solution of ``A X = B``; ``None`` if inconsistent.

    Free variables are set to zero.
    """
    m, n = A.shape
    if B.nrows != m:
        raise ValueError("row count mismatch")
    aug = Matrix([list(ra) + list(rb) for ra, rb in zip(A.rows, B.rows)], n + B.ncols)
    R, pivots, _ = rref(aug)
    if any(c >= n for c in pivots):
        return None
    X = [[Fraction(0)] * B.ncols for _ in range(n)]
    for k, c in enumerate(pivots):
        X[c] = list(R[k][n:])
    return Matrix(X, B.ncols)


def char_poly_coeffs(M: Matrix) -> list:
    """Ascending coefficients of ``det(xI - M)`` over the entries' field (Faddeev-LeVerrier)."""
    if not M.is_square():
        raise NonSquareError(f"characteristic polynomial of a {M.shape} matrix")
    n = M.ncols
    A = M.map(Fraction) if M.is_rational() else M
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = Matrix.zeros(n, n, Fraction(0))
    I = Matrix.identity(n, Fraction(1))
    for k in range(1, n + 1):
        Mk = A @ Mk + I * coeffs[n - k + 1]
        coeffs[n - k] = -(A @ Mk).trace() / k
    return coeffs


def char_poly(M: Matrix) -> UnivariatePolynomial:
    """``det(xI - M)`` for a rational matrix."""
    if M.is_square() and not M.is_rational():
        raise TypeError("char_poly needs a rational matrix; use char_poly_coeffs")
    return UnivariatePolynomial(char_poly_coeffs(M))


def poly_at_matrix(coeffs: Sequence, M: Matrix) -> Matrix:
    """Evaluate a polynomial given by ascending coefficients at a square matrix."""
    n = M.ncols
    if isinstance(coeffs, UnivariatePolynomial):
        coeffs = coeffs.coeffs
    acc = Matrix.zeros(n, n, Fraction(0))
    I = Matrix.identity(n, Fraction(1))
    for c in reversed(list(coeffs)):
        acc = acc @ M + I * c
    return acc


# ---------------------------------------------------------------------------
# Smith normal form

def smith_normal_form(M: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)``: unimodular ``U, V`` and diagonal ``D = U M V`` with ``d_i | d_{i+1}``.

    Pivots are chosen with smallest absolute value to limit coefficient growth.
    """
    m, n = M.shape
    A = [[int(v) for v in r] for r in M.rows]
    for r_orig, r_int in zip(M.rows, A):
        if any(Fraction(a) != b for a, b in zip(r_orig, r_int)):
            raise ValueError("Smith normal form needs integer entries")
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            U[t] = [-v for v in U[t]]
    return Matrix(U, m), Matrix(A, n), Matrix(V, n)
