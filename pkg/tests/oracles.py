"""Reference implementations used only by the tests.

Each oracle is deliberately naive and shares no code path with the package
routine it checks (permutation expansions instead of elimination, literal
formula evaluation instead of index bookkeeping, floating point where a
float answer is unambiguous).
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


def perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz_det(rows):
    """Determinant by the permutation expansion (fine up to n = 6 or so)."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        term = Fraction(perm_sign(perm))
        for i in range(n):
            term *= rows[i][perm[i]]
            if term == 0:
                break
        total += term
    return total


def poly_eval(coeffs, x):
    return sum((Fraction(c) * Fraction(x) ** i for i, c in enumerate(coeffs)), Fraction(0))


def float_unit_circle_counts(int_coeffs_ascending, margin=1e-3):
    """(inside, on, outside) from numpy roots, or None if a root is within ``margin`` of the circle."""
    desc = list(reversed(int_coeffs_ascending))
    roots = np.roots(np.array(desc, dtype=float))
    mods = np.abs(roots)
    if np.any(np.abs(mods - 1.0) <= margin):
        return None
    return int(np.sum(mods < 1)), 0, int(np.sum(mods > 1))


def torus_fixed_points_grid(A_int):
    """Fixed points of ``x -> A x`` on R^n / Z^n by scanning every residue class.

    Solutions are ``x = (A - I)^{-1} m``; with ``d = |det(A - I)|`` and the
    adjugate ``adj`` this is ``adj m / det``, which modulo Z^n only depends on
    ``m mod d``.  All ``m`` in ``[0, d)^n`` are tried with numpy integer
    arithmetic.
    """
    A = np.array(A_int, dtype=np.int64)
    n = A.shape[0]
    B = A - np.eye(n, dtype=np.int64)
    rows = [[Fraction(int(v)) for v in r] for r in B]
    det = int(leibniz_det(rows))
    d = abs(det)
    adj = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            minor = [[rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            adj[j, i] = int((-1) ** (i + j) * leibniz_det(minor))
    grids = np.meshgrid(*[np.arange(d, dtype=np.int64)] * n, indexing="ij")
    m = np.stack([g.ravel() for g in grids], axis=0)
    num = (adj @ m) * (1 if det > 0 else -1)
    res = np.mod(num, d).T
    uniq = {tuple(int(v) for v in r) for r in res}
    return {tuple(Fraction(v, d) for v in r) for r in uniq}


def brute_force_fixed_points(mul, f, n, denominator):
    """Fixed points of ``f`` on Z^n \\ G with coordinates in (1/denominator) Z, by direct search.

    ``mul(x, y)`` and ``f(x)`` are plain callables.  A point ``x`` is fixed iff
    ``f(x) * x^{-1}`` is a lattice element, i.e. some integer ``gamma`` with
    ``gamma * x = f(x)``; ``gamma`` is recovered coordinate by coordinate
    because the law is triangular (``(gamma x)_i = gamma_i + x_i + ...``).
    """
    pts = []
    grid = [Fraction(k, denominator) for k in range(denominator)]
    for x in itertools.product(grid, repeat=n):
        fx = f(x)
        gamma = [0] * n
        ok = True
        for i in range(n):
            # solve (gamma * x)_i = fx_i for gamma_i, other gamma_j fixed
            trial = list(gamma)
            trial[i] = 0
            base = mul(tuple(trial), x)[i]
            g = fx[i] - base
            if g.denominator != 1:
                ok = False
                break
            gamma[i] = int(g)
        if ok and mul(tuple(gamma), x) == tuple(fx):
            pts.append(tuple(x))
    return set(pts)


def ce_differential_literal(c, p):
    """Matrix of d: Λ^p -> Λ^{p+1} by evaluating the cochain formula on basis tuples.

    ``(dω)(x_0..x_p) = sum_{i<j} (-1)^{i+j} ω([x_i, x_j], x_0, ..^i..^j.., x_p)``
    with ``ω = e^I`` evaluated as a determinant of dual pairings.
    """
    n = len(c)
    src = list(itertools.combinations(range(n), p))
    dst = list(itertools.combinations(range(n), p + 1))

    def bracket(a, b):
        return [c[a][b][k] for k in range(n)]

    def omega(I, vectors):
        return leibniz_det([[vec[i] for vec in vectors] for i in I])

    def unit(k):
        return [Fraction(1) if t == k else Fraction(0) for t in range(n)]

    M = []
    for J in dst:
        row = []
        for I in src:
            total = Fraction(0)
            for i, j in itertools.combinations(range(p + 1), 2):
                rest = [unit(J[t]) for t in range(p + 1) if t not in (i, j)]
                total += (-1) ** (i + j) * omega(I, [bracket(J[i], J[j])] + rest)
            row.append(total)
        M.append(row)
    return M


def float_rank(M, tol=1e-9):
    if not M or not M[0]:
        return 0
    return int(np.linalg.matrix_rank(np.array([[float(v) for v in r] for r in M]), tol=tol))
