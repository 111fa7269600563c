"""Small exact linear algebra kernel: Gaussian elimination over Q and
fraction-free (Bareiss) elimination over Q[mu].

Everything here works on plain lists of Fractions or of coefficient
tuples; matrices at the scale of this package are tiny, so clarity wins
over sparsity tricks.
"""

from __future__ import annotations

from fractions import Fraction

from .novikov import POLY_ONE, QPoly, poly_divexact, poly_mul, poly_sub


def q_rank(rows: list[list[Fraction]]) -> int:
    """Rank of a matrix over Q (rows may have any consistent width)."""
    mat = [list(r) for r in rows if any(c != 0 for c in r)]
    rank = 0
    col = 0
    width = max((len(r) for r in mat), default=0)
    while rank < len(mat) and col < width:
        pivot = None
        for i in range(rank, len(mat)):
            if mat[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            col += 1
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pv = mat[rank][col]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col] / pv
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
        col += 1
    return rank


def q_kernel_basis(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel of the matrix with the given column count."""
    mat = [list(r) + [Fraction(0)] * (ncols - len(r)) for r in rows]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot = None
        for i in range(rank, len(mat)):
            if mat[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pv = mat[rank][col]
        mat[rank] = [a / pv for a in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -mat[r][fc]
        basis.append(vec)
    return basis


def q_solve(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """One solution of A x = b over Q, or None when inconsistent."""
    if not rows:
        return []
    ncols = max(len(r) for r in rows)
    mat = [list(r) + [Fraction(0)] * (ncols - len(r)) + [b] for r, b in zip(rows, rhs)]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot = None
        for i in range(rank, len(mat)):
            if mat[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pv = mat[rank][col]
        mat[rank] = [a / pv for a in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        pivots.append(col)
        rank += 1
    for i in range(rank, len(mat)):
        if mat[i][ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = mat[r][ncols]
    return x


def poly_matrix_rank(rows: list[list[QPoly]]) -> int:
    """Rank over the fraction field Q(mu), via fraction-free elimination.

    Bareiss updates keep every intermediate entry a polynomial; the exact
    divisions are guaranteed by the algorithm.
    """
    mat = [list(r) for r in rows if any(p for p in r)]
    if not mat:
        return 0
    width = len(mat[0])
    rank = 0
    col = 0
    prev: QPoly = POLY_ONE
    while rank < len(mat) and col < width:
        pivot = None
        for i in range(rank, len(mat)):
            if mat[i][col]:
                pivot = i
                break
        if pivot is None:
            col += 1
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pv = mat[rank][col]
        for i in range(rank + 1, len(mat)):
            row = mat[i]
            for j in range(width):
                if j == col:
                    continue
                num = poly_sub(poly_mul(row[j], pv), poly_mul(row[col], mat[rank][j]))
                row[j] = poly_divexact(num, prev)
            row[col] = ()
        prev = pv
        rank += 1
        col += 1
    return rank
