"""Exact rational matrix helpers and an integer Smith normal form.

Matrices are lists of row lists, vectors are tuples; entries are
:class:`fractions.Fraction` (or ``int`` for the integer routines).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = tuple
Matrix = list


def to_fraction(x) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string; floats are refused."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected a rational, got {type(x).__name__}")


def fmt_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def vec(xs) -> tuple:
    return tuple(to_fraction(x) for x in xs)


def mat(rows) -> list:
    return [list(vec(r)) for r in rows]


def zeros(n: int) -> tuple:
    return (Fraction(0),) * n


def identity(n: int, one=1) -> list:
    return [[one if i == j else 0 * one for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence]) -> list:
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def matmul(A, B) -> list:
    if not A:
        return []
    Bt = transpose(B)
    return [[sum((a * b for a, b in zip(row, col)), 0 * row[0] if row else 0) for col in Bt] for row in A]


def matvec(A, v) -> tuple:
    return tuple(sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in A)


def vecmat(v, A) -> tuple:
    if not A:
        return ()
    n = len(A[0])
    out = [Fraction(0)] * n
    for c, row in zip(v, A):
        if c:
            for j in range(n):
                out[j] += c * row[j]
    return tuple(out)


def add(u, v) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v) -> tuple:
    return tuple(c * a for a in v)


def is_zero_vec(v) -> bool:
    return all(a == 0 for a in v)


def is_integral(v) -> bool:
    return all(Fraction(a).denominator == 1 for a in v)


def rref(A) -> tuple[list, list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    M = [[Fraction(x) for x in row] for row in A]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def rank(A) -> int:
    if not A:
        return 0
    return len(rref(A)[1])


def nullspace(A, ncols: int | None = None) -> list[tuple]:
    """Basis of {x : A x = 0} over Q."""
    if not A:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    n = len(A[0])
    R, pivots = rref(A)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -R[i][f]
        basis.append(tuple(x))
    return basis


def inverse(A) -> list:
    n = len(A)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def det(A) -> Fraction:
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] / M[c][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return d


def solve_left(B, x) -> tuple | None:
    """Coefficients c with c·B = x (rows of B independent), or None."""
    if not B:
        return () if is_zero_vec(x) else None
    # c B = x  <=>  B^T c = x
    Bt = transpose(B)
    aug = [list(row) + [xi] for row, xi in zip(Bt, x)]
    R, pivots = rref(aug)
    r = len(B)
    if r in pivots:
        return None
    c = [Fraction(0)] * r
    for i, p in enumerate(pivots):
        c[p] = R[i][r]
    return tuple(c)


def smith_normal_form(A: Sequence[Sequence[int]]) -> tuple[list, list, list]:
    """Integer SNF: returns ``(U, D, V)`` with ``U @ A @ V == D``.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with non-negative
    invariant factors ``d_1 | d_2 | ...`` and zeros last.  Pivoting always
    takes the first entry of minimal absolute value in row-major order, so the
    transforms are deterministic.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [[int(x) for x in row] for row in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        if i != j:
            D[i], D[j] = D[j], D[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for M in (D, V):
                for row in M:
                    row[i], row[j] = row[j], row[i]

    def row_axpy(dst, src, q):
        # row_dst -= q * row_src
        D[dst] = [a - q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def col_axpy(dst, src, q):
        for M in (D, V):
            for row in M:
                row[dst] -= q * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            for i in range(t + 1, m):
                if D[i][t]:
                    row_axpy(i, t, D[i][t] // D[t][t])
            for j in range(t + 1, n):
                if D[t][j]:
                    col_axpy(j, t, D[t][j] // D[t][t])
            rest = [(abs(D[i][t]), i, None) for i in range(t + 1, m) if D[i][t]]
            rest += [(abs(D[t][j]), None, j) for j in range(t + 1, n) if D[t][j]]
            if rest:
                _, i, j = min(rest, key=lambda e: e[0])
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]),
                None,
            )
            if bad is None:
                break
            # pull the offending row into row t and keep reducing
            D[t] = [a + b for a, b in zip(D[t], D[bad[0]])]
            U[t] = [a + b for a, b in zip(U[t], U[bad[0]])]
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
    return U, D, V


def int_inverse(U) -> list:
    """Inverse of a unimodular integer matrix."""
    inv = inverse(U)
    out = [[int(x) for x in row] for row in inv]
    assert all(Fraction(x).denominator == 1 for row in inv for x in row)
    return out


def diagonal(D) -> list[int]:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]
