"""Certified root analysis and exact arithmetic in real algebraic number fields.

Everything here is exact.  Real roots are isolated with Sturm sequences;
complex roots with rectangles whose root counts come from the argument
principle, evaluated as Cauchy indices of ``Re p / Im p`` along each edge
(again via Sturm chains over Q).  Whether a root lies *on* the unit circle is
decided algebraically, never by proximity.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import FieldMismatch, UnsupportedScalarTower
from .exact import (
    UnivariatePolynomial,
    parse_rational,
    poly_gcd,
    rational_str,
    squarefree_decomposition,
)

Poly = UnivariatePolynomial
Interval = tuple  # (lo, hi) pair of Fractions


class CircleClass(str, enum.Enum):
    INSIDE = "INSIDE"
    ON = "ON"
    OUTSIDE = "OUTSIDE"


# ---------------------------------------------------------------------------
# Sturm sequences and real roots

@lru_cache(maxsize=4096)
def sturm_sequence(p: Poly) -> tuple[Poly, ...]:
    seq = [p, p.derivative()]
    while seq[-1].degree > 0:
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(r)
    if seq[-1].is_zero():
        seq.pop()
    return tuple(seq)


def _variations(values: Iterable) -> int:
    count = 0
    last = 0
    for v in values:
        if v == 0:
            continue
        s = 1 if v > 0 else -1
        if last and s != last:
            count += 1
        last = s
    return count


def count_real_roots(p: Poly, lo, hi) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval ``(lo, hi]``."""
    seq = sturm_sequence(p)
    return _variations(q(lo) for q in seq) - _variations(q(hi) for q in seq)


def root_bound(p: Poly) -> Fraction:
    """Power of two strictly exceeding every root modulus (Cauchy bound)."""
    lc = abs(p.lc)
    b = 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))
    bound = Fraction(1)
    while bound <= b:
        bound *= 2
    return bound


def isolate_real_roots(p: Poly) -> list[Interval]:
    """Disjoint isolating intervals for the real roots of a squarefree ``p``.

    Each item is ``(lo, hi)`` with ``lo < hi``, ``p(lo) p(hi) < 0`` and exactly
    one root inside, or ``(r, r)`` for an exact rational root.
    """
    if p.degree < 1:
        return []
    B = root_bound(p)
    stack = [(-B, B, count_real_roots(p, -B, B))]
    found = []
    while stack:
        a, b, c = stack.pop()
        if c == 0:
            continue
        if c == 1:
            found.append(_tighten_single(p, a, b))
            continue
        m = (a + b) / 2
        stack.append((m, b, count_real_roots(p, m, b)))
        stack.append((a, m, count_real_roots(p, a, m)))
    return sorted(found)


def _tighten_single(p: Poly, a, b) -> Interval:
    # the unique root lies in (a, b]
    while True:
        if p(b) == 0:
            return (b, b)
        if p(a) != 0:
            return (a, b)
        m = (a + b) / 2
        if count_real_roots(p, m, b) == 1:
            a = m
        else:
            b = m


def bisect_real(p: Poly, iv: Interval) -> Interval:
    """Halve an isolating interval of a simple root by a sign test."""
    lo, hi = iv
    if lo == hi:
        return iv
    m = (lo + hi) / 2
    vm = p(m)
    if vm == 0:
        return (m, m)
    if (vm > 0) == (p(lo) > 0):
        return (m, hi)
    return (lo, m)


# ---------------------------------------------------------------------------
# Complex root counting in rectangles

def _int_coeffs(p: Poly) -> list[int]:
    den = math.lcm(*(c.denominator for c in p.coeffs))
    return [int(c * den) for c in p.coeffs]


def _edge_polys(coeffs: Sequence[int], za, zb) -> tuple[list[int], list[int]]:
    """Positive multiples of ``Re p(za + t (zb - za))`` and ``Im ...`` as integer lists in ``t``.

    With a common denominator ``D`` the edge is ``(A + t B) / D`` for Gaussian
    integers ``A, B``; Horner's rule on ``D^n p`` stays in integers.
    """
    dr, di = zb[0] - za[0], zb[1] - za[1]
    D = math.lcm(za[0].denominator, za[1].denominator, dr.denominator, di.denominator)
    ar, ai, br, bi = (int(v * D) for v in (za[0], za[1], dr, di))
    R, I = [coeffs[-1]], [0]
    scale = 1
    for c in reversed(coeffs[:-1]):
        scale *= D
        # (R + iI)(A + tB): constant part times A, shifted part times B
        nR = [0] * (len(R) + 1)
        nI = [0] * (len(R) + 1)
        for k, (r, i) in enumerate(zip(R, I)):
            nR[k] += r * ar - i * ai
            nI[k] += r * ai + i * ar
            nR[k + 1] += r * br - i * bi
            nI[k + 1] += r * bi + i * br
        nR[0] += c * scale
        R, I = nR, nI
    return _trim(R), _trim(I)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _primitive_part(a: list[int]) -> list[int]:
    g = math.gcd(*a)
    return [x // g for x in a] if g > 1 else a


def _cauchy_index_edge(coeffs: Sequence[int], za, zb):
    """``Ind_0^1 (V/U)`` along the edge, or ``None`` if ``p`` vanishes on it."""
    U, V = _edge_polys(coeffs, za, zb)
    if not U or U[0] == 0 or sum(U) == 0:
        return None
    chain = [_primitive_part(U)]
    if V:
        chain.append(_primitive_part(V))
        while len(chain[-1]) > 1:
            r = _sturm_step(chain[-2], chain[-1])
            if not r:
                break
            chain.append(r)
    g = chain[-1]
    if len(g) > 1 and count_real_roots(Poly([Fraction(c) for c in g]).monic(), 0, 1) > 0:
        return None
    return _variations(q[0] for q in chain) - _variations(sum(q) for q in chain)


def _sturm_step(a: list[int], b: list[int]) -> list[int]:
    """Primitive positive multiple of ``-(a mod b)`` for integer coefficient lists."""
    a = list(a)
    lb, db = b[-1], len(b) - 1
    steps = 0
    while a and len(a) - 1 >= db:
        la, shift = a[-1], len(a) - 1 - db
        a = [x * lb for x in a]
        for k, v in enumerate(b):
            a[k + shift] -= la * v
        _trim(a)
        steps += 1
    if not a:
        return a
    # a is now lb^steps * (a mod b); flip to get a positive multiple of -(a mod b)
    sign = -1 if (lb < 0 and steps % 2) else 1
    a = [-sign * x for x in a]
    return _primitive_part(a)


class _RectangleCounter:
    """Argument-principle root counts for rectangles, with an edge cache."""

    def __init__(self, p: Poly):
        self.p = p
        self._coeffs = _int_coeffs(p)
        self._edges = {}

    def edge(self, za, zb):
        key = (za, zb)
        if key in self._edges:
            return self._edges[key]
        rev = self._edges.get((zb, za), False)
        if rev is not False:
            val = None if rev is None else -rev
        else:
            val = _cauchy_index_edge(self._coeffs, za, zb)
        self._edges[key] = val
        return val

    def count(self, x0, x1, y0, y1):
        corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
        total = 0
        for k in range(4):
            ind = self.edge(corners[k], corners[(k + 1) % 4])
            if ind is None:
                return None
            total += ind
        if total % 2:
            raise ArithmeticError("odd total Cauchy index around a rectangle")
        return -total // 2


_SPLITS = [Fraction(1, 2), Fraction(7, 16), Fraction(9, 16), Fraction(13, 32),
           Fraction(19, 32), Fraction(29, 64), Fraction(35, 64), Fraction(3, 8)]


def _split_rect(counter: _RectangleCounter, rect, total):
    x0, x1, y0, y1 = rect
    for s in _SPLITS:
        for t in _SPLITS:
            xm = x0 + (x1 - x0) * s
            ym = y0 + (y1 - y0) * t
            kids = [(x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1)]
            counts = []
            for k in kids[:3]:
                c = counter.count(*k)
                if c is None:
                    break
                counts.append(c)
            else:
                c4 = counter.count(*kids[3])
                if c4 is None:
                    continue
                counts.append(c4)
                if sum(counts) != total:
                    raise ArithmeticError("inconsistent rectangle root counts")
                return list(zip(kids, counts))
    raise ArithmeticError("could not find a root-free subdivision line")


def _upper_half_plane_box(counter: _RectangleCounter, p: Poly, n_pairs: int):
    B = root_bound(p)
    h = Fraction(1, 2)
    while True:
        c = counter.count(-B, B, h, B)
        if c is None:
            # an edge meets a zero of Re p; move both the bottom and the outer edges
            h = h * Fraction(5, 7)
            B = B * Fraction(9, 8)
            continue
        if c == n_pairs:
            return (-B, B, h, B)
        h /= 4


def _isolate_upper(p: Poly, n_pairs: int, counter: _RectangleCounter):
    if n_pairs == 0:
        return []
    work = [(_upper_half_plane_box(counter, p, n_pairs), n_pairs)]
    done = []
    while work:
        rect, c = work.pop()
        if c == 0:
            continue
        if c == 1:
            done.append(rect)
            continue
        work.extend(_split_rect(counter, rect, c))
    return done


# ---------------------------------------------------------------------------
# Root enclosures

def _rect_min_sq(x0, x1, y0, y1):
    cx = min(max(Fraction(0), x0), x1)
    cy = min(max(Fraction(0), y0), y1)
    return cx * cx + cy * cy


def _rect_max_sq(x0, x1, y0, y1):
    return max(x0 * x0, x1 * x1) + max(y0 * y0, y1 * y1)


class RootEnclosure:
    """A region holding one distinct root of a squarefree factor.

    Real roots carry a rational interval (``y0 = y1 = 0``); non-real roots a
    rectangle.  The lower member of a conjugate pair mirrors its partner and
    refines through it.  Refinement mutates the enclosure, so an enclosure
    should have a single owner while it is being refined.
    """

    def __init__(self, factor: Poly, multiplicity: int, region=None, *,
                 counter: _RectangleCounter | None = None, partner: "RootEnclosure | None" = None):
        self.factor = factor
        self.multiplicity = multiplicity
        self._region = region
        self._counter = counter
        self._partner = partner
        self.circle_class: CircleClass | None = None

    @property
    def is_real(self) -> bool:
        if self._partner is not None:
            return False
        x0, x1, y0, y1 = self._region
        return y0 == 0 and y1 == 0

    @property
    def region(self):
        if self._partner is not None:
            x0, x1, y0, y1 = self._partner.region
            return (x0, x1, -y1, -y0)
        return self._region

    @property
    def interval(self) -> Interval:
        x0, x1, _, _ = self.region
        return (x0, x1)

    @property
    def width(self) -> Fraction:
        x0, x1, y0, y1 = self.region
        return max(x1 - x0, y1 - y0)

    def refine(self) -> None:
        """Roughly halve the enclosure while keeping exactly one root inside."""
        if self._partner is not None:
            self._partner.refine()
            return
        x0, x1, y0, y1 = self._region
        if self.is_real:
            lo, hi = bisect_real(self.factor, (x0, x1))
            self._region = (lo, hi, Fraction(0), Fraction(0))
            return
        for rect, c in _split_rect(self._counter, self._region, 1):
            if c == 1:
                self._region = rect
                return
        raise ArithmeticError("lost a root during refinement")

    def refine_to(self, width) -> None:
        while self.width > width:
            self.refine()

    def min_modulus_sq(self):
        return _rect_min_sq(*self.region)

    def max_modulus_sq(self):
        return _rect_max_sq(*self.region)

    def to_json(self) -> dict:
        x0, x1, y0, y1 = self.region
        out = {"multiplicity": self.multiplicity,
               "circle_class": self.circle_class.value if self.circle_class else None}
        if self.is_real:
            out["interval"] = [rational_str(x0), rational_str(x1)]
        else:
            out["rectangle"] = [rational_str(v) for v in (x0, x1, y0, y1)]
        return out

    def approx(self) -> complex:
        x0, x1, y0, y1 = self.region
        return complex(float((x0 + x1) / 2), float((y0 + y1) / 2))

    def __repr__(self):
        cls = self.circle_class.value if self.circle_class else "?"
        return f"RootEnclosure({self.approx():.6g}, mult={self.multiplicity}, {cls})"


def _enclose_squarefree(s: Poly, mult: int) -> list[RootEnclosure]:
    real = [RootEnclosure(s, mult, (lo, hi, Fraction(0), Fraction(0))) for lo, hi in isolate_real_roots(s)]
    n_pairs = (s.degree - len(real)) // 2
    counter = _RectangleCounter(s)
    out = list(real)
    for rect in _isolate_upper(s, n_pairs, counter):
        upper = RootEnclosure(s, mult, rect, counter=counter)
        out.append(upper)
        out.append(RootEnclosure(s, mult, partner=upper))
    return out


# ---------------------------------------------------------------------------
# Unit circle

def _dickson_transform(g: Poly) -> Poly:
    """For palindromic ``g`` of degree ``2m`` return ``H`` with ``g(x) = x^m H(x + 1/x)``."""
    m = g.degree // 2
    # x^j + x^-j as a polynomial in y = x + 1/x
    D = [Poly((2,)), Poly((0, 1))]
    for _ in range(2, m + 1):
        D.append(Poly((0, 1)) * D[-1] - D[-2])
    H = Poly((g[m],))
    for j in range(1, m + 1):
        H = H + D[j] * g[m + j]
    return H


def _on_circle_squarefree(s: Poly) -> int:
    on = 0
    for r in (1, -1):
        if s(r) == 0:
            on += 1
            s = s.exact_div(Poly((-r, 1)))
    while s.degree > 0 and s[0] == 0:
        s = s.exact_div(Poly.x())
    if s.degree < 2:
        return on
    g = poly_gcd(s, s.reverse())
    if g.degree < 2:
        return on
    if g.coeffs != tuple(reversed(g.coeffs)):
        raise ArithmeticError("reciprocal part is not palindromic")
    H = _dickson_transform(g).monic()
    return on + 2 * count_real_roots(H, -2, 2)


def count_on_circle(p: Poly) -> int:
    """Exact number of roots on ``|z| = 1`` counted with multiplicity."""
    return sum(k * _on_circle_squarefree(s) for s, k in squarefree_decomposition(p))


def schur_cohn_count(p: Poly, radius=1) -> int | None:
    """Roots of ``p`` with ``|z| < radius`` via the Schur-Cohn transform.

    Returns ``None`` when the recursion degenerates, which always happens if
    ``p`` has a root on ``|z| = radius`` (and occasionally otherwise).
    """
    f = p.scale_argument(radius)
    plan = []
    while f.degree > 0:
        n = f.degree
        star = Poly(f[n - i] for i in range(n + 1))
        delta = f[0] * f[0] - f[n] * f[n]
        if delta == 0:
            return None
        plan.append((n, delta < 0))
        f = f * f[0] - star * f[n]
    k = 0
    for n, flip in reversed(plan):
        k = n - k if flip else k
    return k


@dataclass
class UnitCircleCount:
    inside: int
    on: int
    outside: int
    enclosures: list = field(default_factory=list)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.inside, self.on, self.outside)


def _classify_real(enc: RootEnclosure) -> CircleClass:
    s = enc.factor
    lo, hi = enc.interval
    for r in (1, -1):
        if s(r) == 0 and lo <= r <= hi:
            return CircleClass.ON
    while True:
        lo, hi = enc.interval
        if hi < -1 or lo > 1:
            return CircleClass.OUTSIDE
        if -1 < lo and hi < 1:
            return CircleClass.INSIDE
        enc.refine()


def _classify_squarefree(s: Poly, encs: list[RootEnclosure]) -> None:
    on_total = _on_circle_squarefree(s)
    real_on = 0
    for e in encs:
        if e.is_real:
            e.circle_class = _classify_real(e)
            real_on += e.circle_class is CircleClass.ON
    uppers = [e for e in encs if not e.is_real and e._partner is None]
    need = (on_total - real_on) // 2
    while True:
        touching = [e for e in uppers if e.min_modulus_sq() <= 1 <= e.max_modulus_sq()]
        if len(touching) == need:
            break
        if len(touching) < need:
            raise ArithmeticError("fewer circle-touching enclosures than on-circle roots")
        for e in touching:
            e.refine()
    for e in uppers:
        if e.min_modulus_sq() <= 1 <= e.max_modulus_sq():
            e.circle_class = CircleClass.ON
        elif e.max_modulus_sq() < 1:
            e.circle_class = CircleClass.INSIDE
        else:
            e.circle_class = CircleClass.OUTSIDE
    for e in encs:
        if e._partner is not None:
            e.circle_class = e._partner.circle_class


def _sort_key(e: RootEnclosure):
    x0, x1, y0, y1 = e.region
    return (x0 + x1, y0 + y1)


def isolate_roots(p: Poly, precision=None) -> list[RootEnclosure]:
    """Disjoint classified enclosures of all roots of ``p`` (with multiplicity)."""
    if p.is_zero():
        raise ValueError("cannot isolate the roots of the zero polynomial")
    out = []
    for s, k in squarefree_decomposition(p):
        encs = _enclose_squarefree(s, k)
        _classify_squarefree(s, encs)
        out.extend(encs)
    if precision is not None:
        precision = Fraction(precision)
        for e in out:
            if e._partner is None:
                e.refine_to(precision)
    return sorted(out, key=_sort_key)


def classify_unit_circle(p: Poly) -> UnitCircleCount:
    """Count roots inside, on and outside the unit circle, with multiplicity."""
    encs = isolate_roots(p)
    res = UnitCircleCount(0, 0, 0, encs)
    for e in encs:
        if e.circle_class is CircleClass.INSIDE:
            res.inside += e.multiplicity
        elif e.circle_class is CircleClass.ON:
            res.on += e.multiplicity
        else:
            res.outside += e.multiplicity
    if res.on != count_on_circle(p):
        raise ArithmeticError("on-circle count disagrees with the algebraic count")
    return res


# ---------------------------------------------------------------------------
# Interval helpers

def _imul(a: Interval, b: Interval) -> Interval:
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(ps), max(ps))


def _iadd(a: Interval, b: Interval) -> Interval:
    return (a[0] + b[0], a[1] + b[1])


def interval_horner(coeffs: Sequence, iv: Interval) -> Interval:
    if not coeffs:
        return (Fraction(0), Fraction(0))
    acc = (coeffs[-1], coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = _iadd(_imul(acc, iv), (c, c))
    return acc


# ---------------------------------------------------------------------------
# Real algebraic number fields

def rational_roots(p: Poly) -> list[Fraction]:
    """Distinct rational roots via the rational root theorem."""
    if p.degree < 1:
        return []
    ints = p.integer_primitive()
    roots = []
    if ints[0] == 0:
        roots.append(Fraction(0))
        k = next(i for i, c in enumerate(ints) if c)
        ints = ints[k:]
    if len(ints) == 1:
        return roots
    q = Poly(ints)
    for num in _divisors(abs(ints[0])):
        for den in _divisors(abs(ints[-1])):
            if math.gcd(num, den) != 1:
                continue
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if q(cand) == 0:
                    roots.append(cand)
    return sorted(set(roots))


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def squarefree_part(n: int) -> tuple[int, int]:
    """Write ``n = k^2 d`` with ``d`` squarefree; return ``(k, d)`` (sign kept in ``d``)."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    k, d = 1, 1
    f = 2
    while f * f <= n:
        e = 0
        while n % f == 0:
            n //= f
            e += 1
        k *= f ** (e // 2)
        if e % 2:
            d *= f
        f += 1
    return k, sign * d * n


class RealAlgebraicField:
    """The field Q(alpha) for a real root alpha of an irreducible monic integer polynomial.

    ``alpha`` is pinned by a rational isolating interval.  Refining that
    interval mutates the field (serialisation always uses the original one).
    """

    def __init__(self, min_poly: Poly, interval: Interval, *, assume_irreducible: bool = False,
                 name: str | None = None):
        min_poly = Poly(min_poly)
        if min_poly.degree < 1 or min_poly.lc != 1 or any(c.denominator != 1 for c in min_poly.coeffs):
            raise ValueError("minimal polynomial must be monic with integer coefficients")
        d = min_poly.degree
        if d <= 3:
            if d > 1 and rational_roots(min_poly):
                raise ValueError(f"{min_poly} is reducible over Q")
        elif not assume_irreducible:
            raise ValueError("irreducibility of degree > 3 minimal polynomials must be asserted")
        lo, hi = Fraction(interval[0]), Fraction(interval[1])
        if lo > hi:
            raise ValueError("empty isolating interval")
        if lo == hi:
            if min_poly(lo) != 0:
                raise ValueError("degenerate interval is not a root")
        elif count_real_roots(min_poly, lo, hi) + (min_poly(lo) == 0) != 1:
            raise ValueError("interval does not isolate exactly one real root")
        self.min_poly = min_poly
        self.degree = d
        self.initial_interval = (lo, hi)
        self._interval = _tighten_single(min_poly, lo, hi) if lo != hi and min_poly(lo) != 0 or lo == hi else (lo, hi)
        if self._interval[0] != self._interval[1] and min_poly(self._interval[0]) == 0:
            r = self._interval[0]
            self._interval = (r, r)
        self.name = name or ("a" if d > 1 else "q")

    @classmethod
    def quadratic(cls, d: int) -> "RealAlgebraicField":
        """Q(sqrt d) for a squarefree integer ``d > 1``."""
        k, sq = squarefree_part(d)
        if d <= 1 or k != 1:
            raise ValueError("d must be a squarefree integer > 1")
        r = math.isqrt(d)
        return cls(Poly((-d, 0, 1)), (Fraction(r), Fraction(r + 1)), name=f"sqrt{d}")

    @property
    def interval(self) -> Interval:
        return self._interval

    def refine(self) -> None:
        self._interval = bisect_real(self.min_poly, self._interval)

    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return FieldElement(self, (-self.min_poly[0],))
        return FieldElement(self, (0, 1))

    def element(self, coords: Iterable) -> "FieldElement":
        return FieldElement(self, [parse_rational(c) if isinstance(c, str) else c for c in coords])

    def __call__(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.field is not self and x.field != self:
                raise FieldMismatch("element belongs to another field")
            return x
        return FieldElement(self, (Fraction(x),))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, RealAlgebraicField) or self.min_poly != other.min_poly:
            return False
        a, b = self.initial_interval, other.initial_interval
        lo, hi = max(a[0], b[0]), min(a[1], b[1])
        if lo > hi:
            return False
        return count_real_roots(self.min_poly, lo, hi) + (self.min_poly(lo) == 0) >= 1

    def __hash__(self):
        return hash(("field", self.min_poly))

    def to_json(self) -> dict:
        return {"min_poly": self.min_poly.to_json(),
                "interval": [rational_str(v) for v in self.initial_interval]}

    @classmethod
    def from_json(cls, data: dict) -> "RealAlgebraicField":
        mp = Poly.from_json(data["min_poly"])
        iv = tuple(parse_rational(v) for v in data["interval"])
        return cls(mp, iv, assume_irreducible=bool(data.get("assume_irreducible", False)))

    def __repr__(self):
        return f"RealAlgebraicField({self.min_poly}, {self.name})"


class FieldElement:
    """Element of Q(alpha) in the power basis ``1, alpha, ..., alpha^(d-1)``."""

    __slots__ = ("field", "coords")

    def __init__(self, field: RealAlgebraicField, coords: Iterable):
        cs = [Fraction(c) for c in coords]
        d = field.degree
        if len(cs) > d:
            cs = list((Poly(cs) % field.min_poly).coeffs)
        cs += [Fraction(0)] * (d - len(cs))
        self.field = field
        self.coords = tuple(cs)

    # -- coercion
    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch("elements of different fields")
            return other.coords
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return (Fraction(other),) + (Fraction(0),) * (self.field.degree - 1)
        return None

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is irrational")
        return self.coords[0]

    # -- arithmetic
    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, (a + b for a, b in zip(self.coords, o)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, (-a for a in self.coords))

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, (a - b for a, b in zip(self.coords, o)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return FieldElement(self.field, (a * other for a in self.coords))
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, (Poly(self.coords) * Poly(o)) % self.field.min_poly)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self == 0:
            raise ZeroDivisionError("division by zero in a number field")
        # extended Euclid: s * a + t * m = 1
        m = self.field.min_poly
        r0, r1 = m, Poly(self.coords)
        s0, s1 = Poly(), Poly((1,))
        while not r1.is_zero():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r0.degree != 0:
            raise ArithmeticError("minimal polynomial is not irreducible")
        return FieldElement(self.field, (s0 * (1 / r0[0])) % m)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("division by zero in a number field")
            return FieldElement(self.field, (a / other for a in self.coords))
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._other(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, o) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = FieldElement(self.field, (1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison
    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                return False
            return self.coords == other.coords
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_rational() and self.coords[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash((self.field.min_poly, self.coords))

    def __bool__(self):
        return any(self.coords)

    def sign(self) -> int:
        return sign_of(self)

    def __lt__(self, other):
        return sign_of(self - other) < 0

    def __le__(self, other):
        return sign_of(self - other) <= 0

    def __gt__(self, other):
        return sign_of(self - other) > 0

    def __ge__(self, other):
        return sign_of(self - other) >= 0

    def __abs__(self):
        return -self if sign_of(self) < 0 else self

    def __float__(self):
        lo, hi = to_interval(self, Fraction(1, 2**60))
        return float((lo + hi) / 2)

    # -- io
    def to_json(self) -> dict:
        out = self.field.to_json()
        out["coords"] = [rational_str(c) for c in self.coords]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "FieldElement":
        fld = RealAlgebraicField.from_json(data)
        return fld.element(parse_rational(c) for c in data["coords"])

    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            mono = "" if i == 0 else (self.field.name if i == 1 else f"{self.field.name}^{i}")
            if not mono:
                terms.append(rational_str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append(f"-{mono}")
            else:
                terms.append(f"{rational_str(c)}*{mono}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")


def _element_interval(a: FieldElement) -> Interval:
    return interval_horner(a.coords, a.field.interval)


def sign_of(a) -> int:
    """Exact sign of a rational or a field element."""
    if not isinstance(a, FieldElement):
        a = Fraction(a)
        return (a > 0) - (a < 0)
    if a.is_rational():
        c = a.coords[0]
        return (c > 0) - (c < 0)
    while True:
        lo, hi = _element_interval(a)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        a.field.refine()


def to_interval(a, width) -> Interval:
    """Rational interval of width at most ``width`` containing the real value of ``a``."""
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if not isinstance(a, FieldElement):
        q = Fraction(a)
        return (q, q)
    if a.is_rational():
        return (a.coords[0], a.coords[0])
    while True:
        lo, hi = _element_interval(a)
        if hi - lo <= width:
            return (lo, hi)
        a.field.refine()


def field_arith(a, b, op: str):
    """Apply ``add``, ``sub``, ``mul`` or ``div`` to two elements of one field."""
    if isinstance(a, FieldElement) and isinstance(b, FieldElement) and a.field != b.field:
        raise FieldMismatch("elements of different fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise ZeroDivisionError("division by zero in a number field")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# Exact root structure of characteristic polynomials

@dataclass
class ExactRoot:
    """An off-circle root (or conjugate pair) known exactly.

    ``kind`` is ``"rational"`` (``value`` a Fraction), ``"real_quadratic"``
    (``value`` a FieldElement of ``Q(sqrt d)``) or ``"complex_pair"`` (``factor``
    is the real quadratic with the pair as roots).  ``factor`` is always the
    monic factor over the scalar field whose kernel gives the root subspace.
    """

    kind: str
    circle_class: CircleClass
    multiplicity: int
    factor_coeffs: tuple
    value: object = None
    enclosure: RootEnclosure | None = None


@dataclass
class RootStructure:
    roots: list[ExactRoot]
    neutral_factor: Poly
    field: RealAlgebraicField | None
    enclosures: list[RootEnclosure]


def _quadratic_candidates(lo: Fraction, hi: Fraction) -> list[int]:
    return list(range(math.ceil(lo), math.floor(hi) + 1))


def _pair_bounds(e1: RootEnclosure, e2: RootEnclosure | None):
    if e2 is None:  # conjugate pair of e1
        x0, x1, y0, y1 = e1.region
        return (2 * x0, 2 * x1), (e1.min_modulus_sq(), e1.max_modulus_sq())
    a, b = e1.interval, e2.interval
    return _iadd(a, b), _imul(a, b)


def _find_quadratic_factor(s: Poly, e1: RootEnclosure, e2: RootEnclosure | None) -> Poly | None:
    D = math.lcm(*(c.denominator for c in s.coeffs))
    scaled = Poly(c * D ** (s.degree - i) for i, c in enumerate(s.coeffs))  # roots D*lambda
    while True:
        (slo, shi), (plo, phi) = _pair_bounds(e1, e2)
        slo, shi, plo, phi = slo * D, shi * D, plo * D * D, phi * D * D
        if shi - slo < 1 and phi - plo < 1:
            break
        e1.refine()
        if e2 is not None:
            e2.refine()
    for S in _quadratic_candidates(slo, shi):
        for P in _quadratic_candidates(plo, phi):
            q = Poly((P, -S, 1))
            if (scaled % q).is_zero():
                return Poly((Fraction(P, D * D), Fraction(-S, D), 1))
    return None


def exact_root_structure(chi: Poly) -> RootStructure:
    """Exact description of the off-circle roots of ``chi``.

    Off-circle roots must be rational, or roots of rational quadratic factors
    whose real roots all live in one field ``Q(sqrt d)``; otherwise
    :class:`UnsupportedScalarTower` is raised.  The product of the on-circle
    factors is returned as ``neutral_factor`` (always rational).
    """
    chi = chi.monic()
    roots: list[ExactRoot] = []
    off_product = Poly((1,))
    discs = set()
    pending = []  # (a, b, disc, mult, enc_plus, enc_minus)
    all_encs = []
    for s, k in squarefree_decomposition(chi):
        for r in rational_roots(s):
            cls = CircleClass.ON if abs(r) == 1 else (CircleClass.INSIDE if abs(r) < 1 else CircleClass.OUTSIDE)
            s = s.exact_div(Poly((-r, 1)))
            if cls is not CircleClass.ON:
                roots.append(ExactRoot("rational", cls, k, (-r, Fraction(1)), value=r))
                off_product = off_product * Poly((-r, 1)) ** k
        if s.degree < 1:
            continue
        encs = _enclose_squarefree(s, k)
        _classify_squarefree(s, encs)
        all_encs.extend(encs)
        reals = [e for e in encs if e.is_real and e.circle_class is not CircleClass.ON]
        uppers = [e for e in encs if not e.is_real and e._partner is None and e.circle_class is not CircleClass.ON]
        for e in uppers:
            q = _find_quadratic_factor(s, e, None)
            if q is None:
                raise UnsupportedScalarTower(f"a complex root of {s} is not quadratic over Q")
            roots.append(ExactRoot("complex_pair", e.circle_class, k, q.coeffs, enclosure=e))
            off_product = off_product * q ** k
        used = set()
        for i, e in enumerate(reals):
            if i in used:
                continue
            for j in range(i + 1, len(reals)):
                if j in used:
                    continue
                q = _find_quadratic_factor(s, e, reals[j])
                if q is not None:
                    used.update((i, j))
                    lo_enc, hi_enc = sorted((e, reals[j]), key=lambda x: x.interval[0])
                    b, c = q[1], q[0]
                    disc = b * b - 4 * c
                    pending.append((-b / 2, disc, k, hi_enc, lo_enc))
                    off_product = off_product * q ** k
                    break
            else:
                raise UnsupportedScalarTower(f"a real root of {s} is neither rational nor quadratic")
        for _, disc, *_ in pending:
            num, den = disc.numerator, disc.denominator
            discs.add(squarefree_part(num * den)[1])
    discs = {d for d in discs}
    fld = None
    if len(discs) > 1:
        raise UnsupportedScalarTower(f"roots need several quadratic fields: {sorted(discs)}")
    if discs:
        fld = RealAlgebraicField.quadratic(discs.pop())
    for half_trace, disc, k, hi_enc, lo_enc in pending:
        num, den = disc.numerator, disc.denominator
        kk, d = squarefree_part(num * den)
        # sqrt(disc) = kk * sqrt(d) / den
        root_half = FieldElement(fld, (0, Fraction(kk, den) / 2))
        for enc, value in ((hi_enc, half_trace + root_half), (lo_enc, half_trace - root_half)):
            roots.append(ExactRoot("real_quadratic", enc.circle_class, k, (-value, Fraction(1)),
                                   value=value, enclosure=enc))
    neutral = chi.exact_div(off_product)
    return RootStructure(roots, neutral, fld, all_encs)
