"""Random test inputs shared by several test modules.

Nilpotent algebras are spans of elementary matrices E_ij over a set of
strictly upper triangular positions closed under composition, with the
commutator bracket.  Automorphisms combine a grading E_ij -> (m_i...m_{j-1}) E_ij
with unipotent inner factors Ad(1 + t E_ij) = 1 + t ad(E_ij).
"""

from fractions import Fraction

from oracles import leibniz_det

from nillefschetz import Matrix, NilpotentLieAlgebra
from nillefschetz.exact import solve


def _closure(positions):
    s = set(positions)
    changed = True
    while changed:
        changed = False
        for (i, j) in list(s):
            for (k, l) in list(s):
                if j == k and (i, l) not in s:
                    s.add((i, l))
                    changed = True
    return sorted(s)


def _matrix_algebra(positions):
    """Span of E_ij, (i, j) in a composition-closed set of strictly upper positions."""
    index = {pos: a for a, pos in enumerate(positions)}
    n = len(positions)
    brackets = []
    for a, (i, j) in enumerate(positions):
        for b, (k, l) in enumerate(positions):
            if a >= b:
                continue
            # [E_ij, E_kl] = d_jk E_il - d_li E_kj
            if j == k:
                brackets.append((a, b, index[(i, l)], 1))
            if l == i:
                brackets.append((a, b, index[(k, j)], -1))
    return NilpotentLieAlgebra.from_brackets(n, brackets)


def _ad(positions, pos):
    """Matrix of ad(E_pos) in the E-basis (columns are images)."""
    index = {p: a for a, p in enumerate(positions)}
    n = len(positions)
    i, j = pos
    M = [[Fraction(0)] * n for _ in range(n)]
    for b, (k, l) in enumerate(positions):
        if j == k:
            M[index[(i, l)]][b] += 1
        if l == i:
            M[index[(k, j)]][b] -= 1
    return Matrix(M)


def random_nilpotent_case(rng, conjugate=True):
    """Random (algebra, automorphism) pair of dimension <= 5.

    With ``conjugate`` the pair is expressed in a random rational basis;
    otherwise the elementary-matrix basis (adapted to the central series) is kept.
    """
    while True:
        m = rng.randint(2, 5)
        upper = [(i, j) for i in range(m) for j in range(i + 1, m)]
        pos = _closure(rng.sample(upper, rng.randint(1, min(4, len(upper)))))
        if len(pos) <= 5:
            break
    L = _matrix_algebra(pos)
    n = len(pos)
    # grading automorphism E_ij -> (m_i ... m_{j-1}) E_ij
    weights = [rng.choice([-3, -2, -1, 1, 2, 3]) for _ in range(m)]
    diag = []
    for (i, j) in pos:
        w = 1
        for k in range(i, j):
            w *= weights[k]
        diag.append(Fraction(w))
    F = Matrix([[diag[r] if r == c else Fraction(0) for c in range(n)] for r in range(n)])
    # unipotent inner factors Ad(1 + t E_ij) = 1 + t ad(E_ij)
    for _ in range(rng.randint(0, 2)):
        p = rng.choice(pos)
        t = rng.randint(-2, 2)
        F = F @ (Matrix.identity(n, Fraction(1)) + _ad(pos, p) * Fraction(t))
    if not conjugate:
        return L, F
    while True:
        P = Matrix([[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)])
        if leibniz_det([list(r) for r in P.rows]) != 0:
            break
    Pinv = solve(P, Matrix.identity(n, Fraction(1)))
    return L.conjugate(P), Pinv @ F @ P
