"""Negative-definite lattice computations: minimal norm, signed sums over
equal-norm congruent classes, and the resulting upper bounds.

Vectors are enumerated exactly: the positive-definite form -Q is put in
exact rational Cholesky form and a branch-and-bound walk visits every
integer vector within a norm bound, so vector lists are complete by
construction rather than sampled.
"""

from __future__ import annotations

import math
from fractions import Fraction


class LatticeInputError(ValueError):
    pass


RANK_CAP = 12


class LatticeData:
    """Symmetric negative-definite integer Gram matrix of rank <= 12."""

    def __init__(self, gram):
        g = [[int(x) for x in row] for row in gram]
        n = len(g)
        if n == 0:
            raise LatticeInputError("lattice must have positive rank")
        if n > RANK_CAP:
            raise LatticeInputError(f"rank {n} exceeds the cap {RANK_CAP}")
        if any(len(row) != n for row in g):
            raise LatticeInputError("Gram matrix must be square")
        for i in range(n):
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise LatticeInputError("Gram matrix must be symmetric")
        self.gram = tuple(tuple(row) for row in g)
        self.rank = n
        if not self._negative_definite():
            raise LatticeInputError("Gram matrix is not negative definite")

    def _negative_definite(self) -> bool:
        # -G positive definite iff all leading principal minors positive.
        n = self.rank
        neg = [[-self.gram[i][j] for j in range(n)] for i in range(n)]
        for k in range(1, n + 1):
            if _int_det([row[:k] for row in neg[:k]]) <= 0:
                return False
        return True

    def q(self, v) -> int:
        """Q(v) = v^T gram v (a non-positive integer)."""
        n = self.rank
        total = 0
        for i in range(n):
            if v[i] == 0:
                continue
            row = self.gram[i]
            for j in range(n):
                if v[j] != 0:
                    total += v[i] * row[j] * v[j]
        return total

    def bilinear(self, v, w) -> int:
        n = self.rank
        return sum(v[i] * self.gram[i][j] * w[j] for i in range(n) for j in range(n))


def _int_det(rows) -> int:
    """Integer determinant by fraction-free elimination."""
    m = [list(map(int, r)) for r in rows]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if pivot is None:
                return 0
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


def _cholesky(p: list[list[Fraction]]):
    """q with P(v) = sum_i q[i][i] (v_i + sum_{j>i} q[i][j] v_j)^2, exact."""
    n = len(p)
    q = [[Fraction(p[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] = q[k][l] - q[k][i] * q[i][l]
    return q


def _floor_sqrt(fr: Fraction) -> int:
    """Largest integer s with s^2 <= fr (fr >= 0)."""
    if fr < 0:
        raise ValueError("negative radicand")
    s = math.isqrt(fr.numerator // fr.denominator)
    while Fraction((s + 1) * (s + 1)) <= fr:
        s += 1
    while Fraction(s * s) > fr:
        s -= 1
    return s


def enumerate_up_to_norm(L: LatticeData, bound: int):
    """All nonzero integer vectors with |Q(v)| <= bound, one per {v, -v} pair.

    Complete by construction: exact Cholesky bounds prune nothing that
    could satisfy the norm condition.
    """
    n = L.rank
    p = [[Fraction(-L.gram[i][j]) for j in range(n)] for i in range(n)]
    q = _cholesky(p)
    found: list[tuple[tuple[int, ...], int]] = []
    v = [0] * n

    def walk(i: int, remaining: Fraction):
        if i < 0:
            if any(v):
                norm = -L.q(v)
                found.append((tuple(v), -norm))
            return
        center = -sum(q[i][j] * v[j] for j in range(i + 1, n))
        s = _floor_sqrt(remaining / q[i][i])
        # safe outer range, each candidate tested exactly
        for t in range(math.floor(center) - s - 1, math.ceil(center) + s + 2):
            used = q[i][i] * (Fraction(t) - center) ** 2
            if used <= remaining:
                v[i] = t
                walk(i - 1, remaining - used)
        v[i] = 0

    walk(n - 1, Fraction(bound))
    # one representative per pair: first nonzero coordinate positive
    reps = []
    for vec, norm in found:
        lead = next(x for x in vec if x != 0)
        if lead > 0:
            reps.append((vec, norm))
    return reps


def minimal_norm(L: LatticeData) -> int:
    """m(L): least |Q(v)| over nonzero integer vectors."""
    bound = min(-L.gram[i][i] for i in range(L.rank))
    reps = enumerate_up_to_norm(L, bound)
    return min(-q for _, q in reps)


def minimal_vectors(L: LatticeData):
    """(m(L), all vectors of norm m(L) counting both signs)."""
    m = minimal_norm(L)
    reps = [v for v, q in enumerate_up_to_norm(L, m) if -q == m]
    both = [v for v in reps] + [tuple(-x for x in v) for v in reps]
    return m, both


def gamma_upper_bounds_from_lattice(L: LatticeData):
    """Bound m/4 on the invariant over 1 <= i <= floor(m/2), when m > 1."""
    m = minimal_norm(L)
    if m <= 1:
        return None
    return {"bound": Fraction(m, 4), "range_max": m // 2, "minimal_norm": m}


def _class_pairs(L: LatticeData, e):
    """One representative per pair {e', -e'} with e' = e mod 2, Q(e') = Q(e).

    Also verifies the minimality hypothesis |Q(e)| <= |Q(e')| over the
    whole congruence class, returning a smaller-norm witness if violated.
    """
    qe = L.q(list(e))
    target = -qe
    reps = enumerate_up_to_norm(L, target)
    witness = None
    cls = []
    for v, qv in reps:
        if all((x - y) % 2 == 0 for x, y in zip(v, e)):
            if -qv < target and witness is None:
                witness = v
            if qv == qe:
                cls.append(v)
    return cls, witness


def signed_sum_even(L: LatticeData, e) -> int:
    """sum over the class pairs of (-1)^Q((e + e')/2), Q(e) even."""
    e = tuple(int(x) for x in e)
    qe = L.q(list(e))
    if qe % 2 != 0:
        raise LatticeInputError(f"Q(e) = {qe} is odd; use the weighted sum")
    if -qe < 2:
        raise LatticeInputError(f"|Q(e)| = {-qe} must be at least 2")
    cls, witness = _class_pairs(L, e)
    if witness is not None:
        raise LatticeInputError(
            f"e is not minimal in its class: {witness} has smaller norm")
    total = 0
    for v in cls:
        half = [(x + y) // 2 for x, y in zip(e, v)]
        total += -1 if L.q(half) % 2 else 1
    return total


def signed_sum_odd(L: LatticeData, e, xi, m: int) -> int:
    """sum of (-1)^Q((e + e')/2) (xi . e')^m over the class pairs.

    The parity hypothesis Q(e) = m mod 2 makes the chosen representative
    of each pair irrelevant.
    """
    e = tuple(int(x) for x in e)
    xi = tuple(int(x) for x in xi)
    if m < 0:
        raise LatticeInputError("m must be a non-negative integer")
    qe = L.q(list(e))
    if (qe - m) % 2 != 0:
        raise LatticeInputError(f"parity mismatch: Q(e) = {qe}, m = {m}")
    if -qe < 2:
        raise LatticeInputError(f"|Q(e)| = {-qe} must be at least 2")
    if len(xi) != L.rank:
        raise LatticeInputError("xi has wrong length")
    cls, witness = _class_pairs(L, e)
    if witness is not None:
        raise LatticeInputError(
            f"e is not minimal in its class: {witness} has smaller norm")
    total = 0
    for v in cls:
        half = [(x + y) // 2 for x, y in zip(e, v)]
        sign = -1 if L.q(half) % 2 else 1
        pairing = sum(a * b for a, b in zip(xi, v))
        total += sign * pairing ** m
    return total


def bound_from_class(L: LatticeData, e, xi=None, m: int | None = None):
    """The (n0, bound) conclusion from a nonvanishing signed sum, or None.

    Without (xi, m) the even signed sum applies with n0 = -Q(e)/2; with
    them the weighted sum applies with n0 = -(Q(e) + m)/2.  A vanishing
    sum yields no conclusion.
    """
    e = tuple(int(x) for x in e)
    qe = L.q(list(e))
    if xi is None and m is None:
        total = signed_sum_even(L, e)
        n0 = -qe // 2
    elif xi is not None and m is not None:
        total = signed_sum_odd(L, e, xi, m)
        n0 = (-qe - m) // 2 if (-qe - m) % 2 == 0 else None
        if n0 is None:
            raise LatticeInputError("parity mismatch in n0")
    else:
        raise LatticeInputError("xi and m must be given together")
    if total == 0:
        return None
    return {"n0": n0, "bound": Fraction(-qe, 4), "signed_sum": total}
