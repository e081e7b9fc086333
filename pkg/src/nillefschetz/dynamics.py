"""Polynomial nilpotent groups with lattice Z^n, endomorphisms and fixed points on Z^n \\ G."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import (
    ClassTooHigh,
    DegenerateLayer,
    NonIntegerCoefficients,
    NonIntegerLattice,
    NonTriangularMap,
    NotHomomorphism,
    TraceIdentityError,
)
from .exact import Matrix, determinant, parse_rational, rational_str, smith_normal_form
from .lie import NilpotentLieAlgebra, lower_central_series, nilpotency_class, validate_endomorphism

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# Multivariate polynomials

class Polynomial:
    """Sparse polynomial in ``nvars`` variables: ``{exponent tuple: Fraction}``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, object] | None = None):
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            c = Fraction(c)
            if c != 0:
                if len(e) != nvars:
                    raise ValueError("exponent length does not match the number of variables")
                clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def var(cls, nvars: int, i: int) -> "Polynomial":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def const(cls, nvars: int, c) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.const(self.nvars, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) + c
        return Polynomial(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, Polynomial) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            other = Fraction(other)
            return Polynomial(self.nvars, {e: c * other for e, c in self.terms.items()})
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, ZERO) + c1 * c2
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = Polynomial.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __call__(self, point: Sequence):
        total = ZERO
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * x ** k
            total += t
        return total

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Replace variable ``i`` by ``images[i]`` (all in a common variable set)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        m = images[0].nvars if images else 0
        powers: dict = {}

        def pw(i, k):
            if (i, k) not in powers:
                powers[(i, k)] = images[i] ** k
            return powers[(i, k)]

        out = Polynomial(m)
        for e, c in self.terms.items():
            t = Polynomial.const(m, c)
            for i, k in enumerate(e):
                if k:
                    t = t * pw(i, k)
            out = out + t
        return out

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), ZERO)

    def to_json(self) -> list[dict]:
        return [{"exponents": list(e), "coeff": rational_str(c)} for e, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, nvars: int, data: Iterable[Mapping]) -> "Polynomial":
        terms: dict = {}
        for t in data:
            e = tuple(int(k) for k in t["exponents"])
            if len(e) != nvars or any(k < 0 for k in e):
                raise ValueError(f"bad exponent vector {list(e)} for {nvars} variables")
            terms[e] = terms.get(e, ZERO) + parse_rational(t["coeff"])
        return cls(nvars, terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"v{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            parts.append(rational_str(c) if not mono else (mono if c == 1 else f"{rational_str(c)}*{mono}"))
        return " + ".join(parts)


@lru_cache(maxsize=None)
def _stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * _stirling2(n - 1, k) + _stirling2(n - 1, k - 1)


def binomial_coordinates(p: Polynomial) -> dict[tuple, Fraction]:
    """Coefficients of ``p`` in the basis ``prod_i C(x_i, b_i)``."""
    out: dict = {}
    for e, c in p.terms.items():
        per_var = [[(b, _stirling2(a, b) * math.factorial(b)) for b in range(a + 1) if _stirling2(a, b)] for a in e]
        for combo in product(*per_var):
            b = tuple(x[0] for x in combo)
            w = math.prod(x[1] for x in combo)
            out[b] = out.get(b, ZERO) + c * w
    return {b: v for b, v in out.items() if v != 0}


def non_integer_valued_witness(p: Polynomial) -> tuple | None:
    """A binomial-basis index with a non-integral coefficient, or ``None`` if ``p(Z^n) ⊆ Z``."""
    for b, v in sorted(binomial_coordinates(p).items()):
        if v.denominator != 1:
            return b
    return None


# ---------------------------------------------------------------------------
# Polynomial maps and groups

class PolynomialMap:
    def __init__(self, n_in: int, outputs: Sequence[Polynomial]):
        self.n_in = n_in
        self.outputs = tuple(outputs)
        for q in self.outputs:
            if q.nvars != n_in:
                raise ValueError("output polynomial has the wrong number of variables")

    @property
    def n_out(self) -> int:
        return len(self.outputs)

    @classmethod
    def linear(cls, A: Matrix) -> "PolynomialMap":
        n = A.ncols
        outs = []
        for i in range(A.nrows):
            terms = {}
            for j in range(n):
                e = [0] * n
                e[j] = 1
                terms[tuple(e)] = A[i, j]
            outs.append(Polynomial(n, terms))
        return cls(n, outs)

    @classmethod
    def identity(cls, n: int) -> "PolynomialMap":
        return cls(n, [Polynomial.var(n, i) for i in range(n)])

    def __call__(self, point: Sequence):
        return tuple(q(point) for q in self.outputs)

    def substitute(self, images: Sequence[Polynomial]) -> list[Polynomial]:
        return [q.substitute(images) for q in self.outputs]

    def linear_part(self) -> Matrix:
        n = self.n_in
        rows = []
        for q in self.outputs:
            rows.append([q.coefficient(tuple(1 if k == j else 0 for k in range(n))) for j in range(n)])
        return Matrix(rows, n)

    def to_json(self) -> list[list[dict]]:
        return [q.to_json() for q in self.outputs]

    @classmethod
    def from_json(cls, n_in: int, data: Sequence) -> "PolynomialMap":
        return cls(n_in, [Polynomial.from_json(n_in, out) for out in data])

    def __eq__(self, other):
        return isinstance(other, PolynomialMap) and self.outputs == other.outputs

    def __repr__(self):
        return "PolynomialMap(" + ", ".join(repr(q) for q in self.outputs) + ")"


@dataclass
class PolynomialGroup:
    dim: int
    multiplication: PolynomialMap
    inverse: PolynomialMap
    layer_blocks: list[list[int]]
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.multiplication.n_in != 2 * self.dim or self.multiplication.n_out != self.dim:
            raise ValueError("multiplication must map 2n variables to n coordinates")
        if self.inverse.n_in != self.dim or self.inverse.n_out != self.dim:
            raise ValueError("inverse must map n variables to n coordinates")
        flat = sorted(i for b in self.layer_blocks for i in b)
        if flat != list(range(self.dim)):
            raise ValueError("layer blocks must partition the coordinates")

    @classmethod
    def abelian(cls, n: int) -> "PolynomialGroup":
        mul = PolynomialMap(2 * n, [Polynomial.var(2 * n, i) + Polynomial.var(2 * n, n + i) for i in range(n)])
        inv = PolynomialMap(n, [-Polynomial.var(n, i) for i in range(n)])
        return cls(n, mul, inv, [list(range(n))] if n else [])

    def multiply(self, x: Sequence, y: Sequence) -> tuple:
        return self.multiplication(tuple(x) + tuple(y))

    def invert(self, x: Sequence) -> tuple:
        return self.inverse(x)

    def block_of(self) -> list[int]:
        out = [0] * self.dim
        for j, b in enumerate(self.layer_blocks):
            for i in b:
                out[i] = j
        return out

    def to_json(self) -> dict:
        return {"dim": self.dim, "multiplication": self.multiplication.to_json(),
                "inverse": self.inverse.to_json(), "layers": [list(b) for b in self.layer_blocks]}

    @classmethod
    def from_json(cls, data: Mapping) -> "PolynomialGroup":
        n = data["dim"]
        return cls(n, PolynomialMap.from_json(2 * n, data["multiplication"]),
                   PolynomialMap.from_json(n, data["inverse"]), [list(b) for b in data["layers"]])


def _vars(n: int, offset: int, total: int) -> list[Polynomial]:
    return [Polynomial.var(total, offset + i) for i in range(n)]


def _first_difference(lhs: Sequence[Polynomial], rhs: Sequence[Polynomial]):
    for i, (a, b) in enumerate(zip(lhs, rhs)):
        d = a - b
        if not d.is_zero():
            return i, min(d.terms)
    return None


@dataclass
class GroupReport:
    identity: bool = True
    inverse: bool = True
    associative: bool = True
    triangular: bool = True
    integer_coefficients: bool = True
    integer_valued: bool = True
    layers: int = 0
    failure: str | None = None
    witness: dict | None = None

    @property
    def ok(self) -> bool:
        return self.identity and self.inverse and self.associative and self.triangular and self.integer_valued

    def to_json(self) -> dict:
        return {"ok": self.ok, "identity": self.identity, "inverse": self.inverse,
                "associative": self.associative, "triangular": self.triangular,
                "integer_coefficients": self.integer_coefficients, "integer_valued": self.integer_valued,
                "layers": self.layers, "failure": self.failure, "witness": self.witness}


def _fail(report: GroupReport, attr: str, message: str, coord: int, mono) -> GroupReport:
    setattr(report, attr, False)
    if report.failure is None:
        report.failure = message
        report.witness = {"coordinate": coord, "monomial": list(mono)}
    return report


def validate_group(G: PolynomialGroup) -> GroupReport:
    """Check identity, inverse, associativity, triangularity and lattice closure."""
    n = G.dim
    rep = GroupReport(layers=len(G.layer_blocks))
    x = _vars(n, 0, n)
    zeros = [Polynomial(n) for _ in range(n)]
    for images, label in ((x + zeros, "m(x, 0) != x"), (zeros + x, "m(0, x) != x")):
        diff = _first_difference(G.multiplication.substitute(images), x)
        if diff:
            _fail(rep, "identity", label, *diff)
    inv = list(G.inverse.outputs)
    for images, label in ((x + inv, "m(x, x^-1) != 0"), (inv + x, "m(x^-1, x) != 0")):
        diff = _first_difference(G.multiplication.substitute(images), zeros)
        if diff:
            _fail(rep, "inverse", label, *diff)
    X, Y, Z = _vars(n, 0, 3 * n), _vars(n, n, 3 * n), _vars(n, 2 * n, 3 * n)
    xy = G.multiplication.substitute(X + Y)
    yz = G.multiplication.substitute(Y + Z)
    diff = _first_difference(G.multiplication.substitute(xy + Z), G.multiplication.substitute(X + yz))
    if diff:
        _fail(rep, "associative", "m(m(x, y), z) != m(x, m(y, z))", *diff)
    block = G.block_of()
    xv, yv = _vars(n, 0, 2 * n), _vars(n, n, 2 * n)
    for i, q in enumerate(G.multiplication.outputs):
        rest = q - xv[i] - yv[i]
        for e in rest.terms:
            if any(k and block[v % n] >= block[i] for v, k in enumerate(e)):
                _fail(rep, "triangular", f"coordinate {i} depends on its own or an inner layer", i, e)
                break
    for mp in (G.multiplication, G.inverse):
        for i, q in enumerate(mp.outputs):
            if any(c.denominator != 1 for c in q.terms.values()):
                rep.integer_coefficients = False
            w = non_integer_valued_witness(q)
            if w is not None:
                _fail(rep, "integer_valued", f"coordinate {i} is not integer-valued on the lattice", i, w)
    return rep


def lie_algebra_of(G: PolynomialGroup) -> NilpotentLieAlgebra:
    """Structure constants from the bilinear part ``B`` of the law: ``[u, v] = B(u, v) - B(v, u)``."""
    n = G.dim
    brackets = []
    for a in range(n):
        for b in range(a + 1, n):
            e_ab = tuple(1 if (k == a or k == n + b) else 0 for k in range(2 * n))
            e_ba = tuple(1 if (k == b or k == n + a) else 0 for k in range(2 * n))
            for k, q in enumerate(G.multiplication.outputs):
                v = q.coefficient(e_ab) - q.coefficient(e_ba)
                if v != 0:
                    brackets.append((a, b, k, v))
    return NilpotentLieAlgebra.from_brackets(n, brackets)


# ---------------------------------------------------------------------------
# Baker-Campbell-Hausdorff

_BERNOULLI = {2: Fraction(1, 6), 4: Fraction(-1, 30), 6: Fraction(1, 42)}


def _bracket_vec(L: NilpotentLieAlgebra, U: Sequence[Polynomial], V: Sequence[Polynomial]) -> list[Polynomial]:
    nv = U[0].nvars
    out = [Polynomial(nv) for _ in range(L.dim)]
    for i in range(L.dim):
        if U[i].is_zero():
            continue
        for j in range(L.dim):
            if i == j or V[j].is_zero():
                continue
            row = L.c[i][j]
            if not any(row):
                continue
            prod_ij = U[i] * V[j]
            for k in range(L.dim):
                if row[k] != 0:
                    out[k] = out[k] + prod_ij * row[k]
    return out


def _compositions(total: int, parts: int):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def bch_group_from_algebra(L: NilpotentLieAlgebra) -> PolynomialGroup:
    """Exponential coordinates with the truncated BCH product and ``x^-1 = -x``."""
    k = nilpotency_class(L)
    if k > 6:
        raise ClassTooHigh(f"nilpotency class {k} exceeds 6")
    n = L.dim
    X, Y = _vars(n, 0, 2 * n), _vars(n, n, 2 * n)
    S = [a + b for a, b in zip(X, Y)]
    D = [a - b for a, b in zip(X, Y)]
    Zs = {1: S}
    for m in range(1, max(k, 1)):
        acc = [q * Fraction(1, 2) for q in _bracket_vec(L, D, Zs[m])]
        for p in range(1, m // 2 + 1):
            coef = _BERNOULLI[2 * p] / math.factorial(2 * p)
            for comp in _compositions(m, 2 * p):
                term = S
                for idx in reversed(comp):
                    term = _bracket_vec(L, Zs[idx], term)
                acc = [a + t * coef for a, t in zip(acc, term)]
        Zs[m + 1] = [q * Fraction(1, m + 1) for q in acc]
    total = [Polynomial(2 * n) for _ in range(n)]
    for m in range(1, max(k, 1) + 1):
        total = [a + b for a, b in zip(total, Zs[m])]
    mul = PolynomialMap(2 * n, total)
    inv = PolynomialMap(n, [-Polynomial.var(n, i) for i in range(n)])
    chain = lower_central_series(L)
    layers = []
    seen = set()
    for j in range(len(chain) - 1):
        nxt = chain[j + 1]
        block = [i for i in range(n) if i not in seen and not nxt.contains(L.basis_vector(i))]
        seen.update(block)
        if block:
            layers.append(block)
    leftover = [i for i in range(n) if i not in seen]
    if leftover:
        layers.append(leftover)
    G = PolynomialGroup(n, mul, inv, layers)
    bad = sorted({rational_str(c) for q in total for c in q.terms.values() if c.denominator != 1})
    if bad:
        msg = f"non-integer BCH coefficients {', '.join(bad)}; Z^n is not a subgroup in these coordinates"
        G.warnings.append(msg)
        warnings.warn(msg, stacklevel=2)
    return G


# ---------------------------------------------------------------------------
# Endomorphisms

@dataclass
class GroupEndomorphism:
    group: PolynomialGroup
    map: PolynomialMap
    linear_part: Matrix


def validate_endomorphism_map(G: PolynomialGroup, f: PolynomialMap, *,
                              forbid_eigenvalue_one: bool = True) -> GroupEndomorphism:
    n = G.dim
    if f.n_in != n or f.n_out != n:
        raise NotHomomorphism(f"map has shape {f.n_in} -> {f.n_out}, expected {n} -> {n}")
    for i, q in enumerate(f.outputs):
        c0 = q.coefficient((0,) * n)
        if c0 != 0:
            raise NotHomomorphism(f"f(0) != 0 in coordinate {i}", witness={"coordinate": i, "monomial": [0] * n})
    X, Y = _vars(n, 0, 2 * n), _vars(n, n, 2 * n)
    lhs = f.substitute(G.multiplication.substitute(X + Y))
    rhs = G.multiplication.substitute(f.substitute(X) + f.substitute(Y))
    diff = _first_difference(lhs, rhs)
    if diff:
        i, mono = diff
        raise NotHomomorphism(f"f(x y) != f(x) f(y) in coordinate {i}",
                              witness={"coordinate": i, "monomial": list(mono)})
    for i, q in enumerate(f.outputs):
        w = non_integer_valued_witness(q)
        if w is not None:
            raise NonIntegerCoefficients(f"coordinate {i} of the map is not integer-valued on Z^n",
                                         witness={"coordinate": i, "binomial_index": list(w)})
    A = f.linear_part()
    validate_endomorphism(lie_algebra_of(G), A, forbid_eigenvalue_one=forbid_eigenvalue_one)
    return GroupEndomorphism(G, f, A)


# ---------------------------------------------------------------------------
# Fixed points

@dataclass
class FixedPoint:
    coords: tuple
    gamma: tuple
    local_sign: int | None = None
    local_unstable_det: object = None
    local_transverse_det: object = None

    def to_json(self) -> dict:
        return {"coords": [rational_str(c) for c in self.coords], "gamma": [int(g) for g in self.gamma]}


def _frac_part(q: Fraction) -> Fraction:
    return q - math.floor(q)


def _layer_data(G: PolynomialGroup, f: GroupEndomorphism):
    n = G.dim
    block = G.block_of()
    layers = []
    for j, idx in enumerate(G.layer_blocks):
        inner = {i for i in range(n) if block[i] >= j}
        own = set(idx)
        A = [[ZERO] * len(idx) for _ in idx]
        for r, i in enumerate(idx):
            q = f.map.outputs[i]
            for e, c in q.terms.items():
                used = [v for v, k in enumerate(e) if k]
                if not any(v in inner for v in used):
                    continue
                if sum(e) == 1 and used[0] in own:
                    A[r][idx.index(used[0])] = c
                else:
                    raise NonTriangularMap(f"coordinate {i} of the map is not affine in its own layer "
                                           f"and independent of inner layers (monomial {list(e)})")
        Aj = Matrix(A, len(idx))
        if any(v.denominator != 1 for row in A for v in row):
            raise NonIntegerLattice(f"layer {j} block of the linear part is not integral")
        layers.append((idx, Aj))
    return layers


def fixed_points(G: PolynomialGroup, f: GroupEndomorphism) -> list[FixedPoint]:
    """All fixed points of ``f`` on ``Z^n \\ G``, as normalised coset representatives.

    Solves ``gamma * x = f(x)`` one layer at a time.  On layer ``j`` this is
    ``(A_j - I) x_j = gamma_j + P_j(gamma_<j, x_<j) - Q_j(x_<j)``, a congruence
    modulo ``Z^{d_j}`` handled through the Smith form of ``A_j - I``.
    """
    rep = validate_group(G)
    if not rep.integer_valued:
        raise NonIntegerLattice(f"Z^n is not closed under the group law: {rep.failure}")
    if not rep.triangular:
        raise NonTriangularMap(f"group law is not layer-triangular: {rep.failure}")
    n = G.dim
    layers = _layer_data(G, f)
    mul = G.multiplication.outputs
    branches = [((ZERO,) * n, (0,) * n)]
    expected = 1
    for idx, Aj in layers:
        d = len(idx)
        B = Aj - Matrix.identity(d, ONE)
        detB = determinant(B)
        if detB == 0:
            raise DegenerateLayer(f"layer with coordinates {idx} has eigenvalue 1")
        expected *= abs(int(detB))
        Bint = B.map(int)
        U, D, V = smith_normal_form(Bint)
        diag = [D[i, i] for i in range(d)]
        new = []
        for x, gamma in branches:
            point = tuple(gamma) + tuple(x)
            c = []
            for i in idx:
                P = mul[i](point) - gamma[i] - x[i]  # inner coordinates of x, gamma are still 0
                Q = f.map.outputs[i](x) - sum((Aj[idx.index(i), idx.index(k)] * x[k] for k in idx), ZERO)
                c.append(P - Q)
            Uc = U @ c
            for m in product(*(range(abs(dd)) for dd in diag)):
                y = [(Fraction(Uc[i]) + m[i]) / diag[i] for i in range(d)]
                xj = [_frac_part(v) for v in V @ y]
                g = [a - b for a, b in zip(B @ xj, c)]
                if any(Fraction(v).denominator != 1 for v in g):
                    raise ArithmeticError("layer solve produced a non-integral lattice element")
                xs, gs = list(x), list(gamma)
                for r, i in enumerate(idx):
                    xs[i] = xj[r]
                    gs[i] = int(g[r])
                new.append((tuple(xs), tuple(gs)))
        branches = new
    if len(branches) != expected or len(set(x for x, _ in branches)) != expected:
        raise TraceIdentityError("fixed point count differs from the product of layer determinants")
    out = []
    for x, gamma in sorted(branches):
        if G.multiply(gamma, x) != f.map(x):
            raise TraceIdentityError(f"gamma * x != f(x) at x = {x}")
        if any(not (0 <= v < 1) for v in x):
            raise ArithmeticError("representative outside the fundamental domain")
        out.append(FixedPoint(x, gamma))
    total = abs(determinant(Matrix.identity(n, ONE) - f.linear_part)) if n else ONE
    if len(out) != total:
        raise TraceIdentityError(f"found {len(out)} fixed points, |det(1 - f_*)| = {total}")
    return out


def local_data(x: FixedPoint | None, splitting, F: Matrix, foliation=None):
    """``(epsilon_x, transverse_det)`` for the unstable foliation or a given subalgebra.

    ``epsilon_x`` is the sign of ``det(1 - f_*|p)``; ``transverse_det`` the
    absolute value of ``det(1 - f_*)`` on a complement (``g^s + g^e`` for the
    unstable foliation).  Both are the same at every fixed point.
    """
    from .algebraic import sign_of
    from .lie import restricted_determinant

    if foliation is None:
        foliation = splitting.unstable
        du = restricted_determinant(foliation, F)
        trans = restricted_determinant(splitting.stable, F) * restricted_determinant(splitting.neutral, F)
    else:
        du = restricted_determinant(foliation, F)
        full = determinant(Matrix.identity(F.ncols, ONE) - F) if F.ncols else ONE
        trans = full / du
    eps = sign_of(du)
    trans = -trans if sign_of(trans) < 0 else trans
    if x is not None:
        x.local_sign, x.local_unstable_det, x.local_transverse_det = eps, du, trans
    return eps, trans
