"""The homology cobordism invariant Gamma, the h-invariant, and spectral bounds.

For a validated datum, Gamma at an integer k is computed from the
feasible sets of homogeneous chains:

* k >= 1: unknowns s in Q^G over the generators G of grading 4k-3 mod 8
  represent alpha = sum s_g l^(r_g) g.  The constraints d(alpha) = 0 and
  d1(u^j alpha) = 0 for j < k-1 are Q-linear after grouping image terms
  by (generator, exponent).  The objective functional F(s) reads off the
  l^0 coefficient of d1(u^(k-1) alpha).  Gamma(k) is -t* where t* is the
  largest support threshold over the energy lifts admitting a solution
  with F != 0, and +inf when no such solution exists at all.

* k <= 0: additional unknowns q_i (i = 0..-k, i = k mod 2) set
  a_i = q_i l^((-k-i)/2); the constraint is d(alpha) = sum u^i d2(a_i).
  A solution with q != 0 and alpha = 0 forces the value 0; otherwise the
  same threshold search over the alpha support applies, clamped at 0;
  when no q != 0 solution exists the value is +inf.

All searches are rank comparisons over Q, exact throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._linalg import q_kernel_basis, q_rank
from .floer_datum import (
    FloerDatum,
    HomogeneousVector,
    Report,
    validate,
)
from .novikov import INF, ExtRat, NovikovElement

GammaValue = ExtRat  # Fraction, or INF


class MonotonicityError(RuntimeError):
    """A gamma profile came out non-monotone: datum or implementation fault."""


class DatumInconsistencyError(RuntimeError):
    """The feasible-set search produced a structurally impossible answer."""


@dataclass(frozen=True)
class SpecialSolution:
    """Witness of feasibility behind a finite gamma value."""

    k: int
    alpha: HomogeneousVector
    a_tuple: tuple[Fraction, ...] | None  # q_0..q_{-k}, only for k <= 0


def _require_valid(datum: FloerDatum):
    rep = validate(datum)
    if not rep.ok:
        raise ValueError(f"datum {datum.name!r} fails validation: {rep}")


def _grading_class(datum: FloerDatum, k: int) -> list[str]:
    residue = (4 * k - 3) % 8
    return [g for g in datum.names() if datum.grading(g) % 8 == residue]


def _rows_from_keyed(keyed_cols: list[dict], keys: list) -> list[list[Fraction]]:
    return [[col.get(key, Fraction(0)) for col in keyed_cols] for key in keys]


def _d1_tower(datum: FloerDatum, start: dict, depth: int) -> list[NovikovElement]:
    """d1(u^j alpha) for j = 0..depth-1, for a single chain vector."""
    out = []
    vec = start
    for _ in range(depth):
        out.append(datum.apply_d1(vec))
        vec = datum.apply_u(vec)
    return out


def _lambda_rows(values: list[NovikovElement]) -> tuple[list, list[dict]]:
    """Group a list of per-column Novikov values into per-exponent Q-rows."""
    keyed_cols = []
    exps = set()
    for el in values:
        col = {e: c for c, e in el.items()}
        keyed_cols.append(col)
        exps.update(col)
    return sorted(exps), keyed_cols


def _positive_system(datum: FloerDatum, k: int, gens: list[str]):
    """Constraint rows, objective row and any-nonzero rows for k >= 1."""
    unit_vectors = [{g: NovikovElement.term(1, datum.lift(g))} for g in gens]

    rows: list[list[Fraction]] = []
    d_keyed = []
    for vec in unit_vectors:
        image = datum.apply_d(vec)
        keyed = {}
        for h, el in image.items():
            for c, e in el.items():
                keyed[(h, e)] = keyed.get((h, e), Fraction(0)) + c
        d_keyed.append(keyed)
    d_keys = sorted({key for col in d_keyed for key in col})
    rows.extend(_rows_from_keyed(d_keyed, d_keys))

    towers = [_d1_tower(datum, vec, k) for vec in unit_vectors]
    for j in range(k - 1):
        exps, keyed = _lambda_rows([t[j] for t in towers])
        rows.extend(_rows_from_keyed(keyed, exps))

    top = [t[k - 1] for t in towers]
    objective = [el.coefficient(0) for el in top]
    exps, keyed = _lambda_rows(top)
    nonzero_rows = _rows_from_keyed(keyed, exps)
    return rows, objective, nonzero_rows


def _threshold_search(gens: list[str], lifts: dict[str, Fraction],
                      solvable) -> Fraction | None:
    """Largest t in the lift set with a solution supported on {r_g >= t}."""
    for t in sorted({lifts[g] for g in gens}, reverse=True):
        allowed = [i for i, g in enumerate(gens) if lifts[g] >= t]
        if solvable(allowed):
            return t
    return None


def _gamma_positive(datum: FloerDatum, k: int, want_witness: bool):
    gens = _grading_class(datum, k)
    if not gens:
        return INF, None
    rows, objective, _ = _positive_system(datum, k, gens)
    lifts = {g: datum.lift(g) for g in gens}

    def solvable(allowed: list[int]) -> bool:
        sub = [[r[i] for i in allowed] for r in rows]
        obj = [objective[i] for i in allowed]
        if all(c == 0 for c in obj):
            return False
        return q_rank(sub + [obj]) > q_rank(sub)

    t_star = _threshold_search(gens, lifts, solvable)
    if t_star is None:
        return INF, None
    value = -t_star
    witness = None
    if want_witness:
        allowed = [i for i, g in enumerate(gens) if lifts[g] >= t_star]
        sub = [[r[i] for i in allowed] for r in rows]
        obj = [objective[i] for i in allowed]
        sol = _kernel_vector_with_nonzero(sub, [obj], len(allowed))
        coeffs = {gens[i]: Fraction(0) for i in range(len(gens))}
        for idx, val in zip(allowed, sol):
            coeffs[gens[idx]] = val
        witness = SpecialSolution(
            k, HomogeneousVector(coeffs, (4 * k - 3) % 8, Fraction(0)), None
        )
    return value, witness


def _kernel_vector_with_nonzero(rows, functionals, ncols) -> list[Fraction]:
    """A kernel vector of `rows` on which some functional is nonzero."""
    basis = q_kernel_basis(rows, ncols)

    def hits(vec):
        return any(sum(f[i] * vec[i] for i in range(ncols)) != 0 for f in functionals)

    # A linear functional nonzero on the kernel is nonzero on a basis vector.
    for vec in basis:
        if hits(vec):
            return vec
    raise DatumInconsistencyError("feasibility claimed but no witness found")


def _nonpositive_system(datum: FloerDatum, k: int, gens: list[str]):
    """Constraint rows for d(alpha) = sum u^i d2(a_i), unknowns (s, q)."""
    q_indices = [i for i in range(0, -k + 1) if (i - k) % 2 == 0]

    keyed_cols = []
    for g in gens:
        vec = {g: NovikovElement.term(1, datum.lift(g))}
        image = datum.apply_d(vec)
        keyed = {}
        for h, el in image.items():
            for c, e in el.items():
                keyed[(h, e)] = keyed.get((h, e), Fraction(0)) + c
        keyed_cols.append(keyed)
    for i in q_indices:
        lam = NovikovElement.term(1, Fraction(-k - i, 2))
        image = datum.apply_u_power(datum.apply_d2(lam), i)
        keyed = {}
        for h, el in image.items():
            for c, e in el.items():
                keyed[(h, e)] = keyed.get((h, e), Fraction(0)) - c
        keyed_cols.append(keyed)

    keys = sorted({key for col in keyed_cols for key in col})
    rows = _rows_from_keyed(keyed_cols, keys)
    return rows, q_indices


def _has_kernel_with_nonzero_block(rows, ncols, block: list[int]) -> bool:
    """Does the kernel contain a vector nonzero somewhere in `block`?"""
    if not block:
        return False
    outside = [i for i in range(ncols) if i not in block]
    rank_full = q_rank(rows)
    rank_outside = q_rank([[row[i] for i in outside] for row in rows])
    # dim ker(full) > dim ker(restricted to block = 0)
    return (ncols - rank_full) > (len(outside) - rank_outside)


def _gamma_nonpositive(datum: FloerDatum, k: int, want_witness: bool):
    gens = _grading_class(datum, k)
    rows, q_indices = _nonpositive_system(datum, k, gens)
    ns, nq = len(gens), len(q_indices)
    ncols = ns + nq
    q_block = list(range(ns, ncols))

    # (a) q != 0 with alpha = 0
    q_only = [[row[i] for i in q_block] for row in rows]
    if nq and q_rank(q_only) < nq:
        witness = None
        if want_witness:
            vec = _kernel_vector_with_nonzero(
                q_only, [[1 if j == i else 0 for j in range(nq)] for i in range(nq)],
                nq)
            witness = _package_nonpositive_witness(datum, k, gens, q_indices,
                                                   [Fraction(0)] * ns + vec)
        return Fraction(0), witness

    # (b) q != 0 with alpha unrestricted, threshold search on the alpha support
    if not _has_kernel_with_nonzero_block(rows, ncols, q_block):
        return INF, None

    lifts = {g: datum.lift(g) for g in gens}

    def solvable(allowed: list[int]) -> bool:
        cols = allowed + q_block
        sub = [[row[i] for i in cols] for row in rows]
        return _has_kernel_with_nonzero_block(
            sub, len(cols), list(range(len(allowed), len(cols))))

    t_star = _threshold_search(gens, lifts, solvable)
    if t_star is None:
        raise DatumInconsistencyError(
            "q-feasible system lost feasibility at the loosest threshold")
    value = max(Fraction(0), -t_star)
    witness = None
    if want_witness:
        allowed = [i for i, g in enumerate(gens) if lifts[g] >= t_star]
        cols = allowed + q_block
        sub = [[row[i] for i in cols] for row in rows]
        nq_off = len(allowed)
        vec = _kernel_vector_with_nonzero(
            sub,
            [[1 if j == nq_off + i else 0 for j in range(len(cols))]
             for i in range(nq)],
            len(cols))
        full = [Fraction(0)] * ncols
        for pos, col in enumerate(cols):
            full[col] = vec[pos]
        witness = _package_nonpositive_witness(datum, k, gens, q_indices, full)
    return value, witness


def _package_nonpositive_witness(datum, k, gens, q_indices, full):
    ns = len(gens)
    coeffs = {g: full[i] for i, g in enumerate(gens)}
    qs = [Fraction(0)] * (-k + 1)
    for pos, i in enumerate(q_indices):
        qs[i] = full[ns + pos]
    return SpecialSolution(
        k, HomogeneousVector(coeffs, (4 * k - 3) % 8, Fraction(0)), tuple(qs)
    )


def gamma(datum: FloerDatum, k: int, want_witness: bool = False):
    """Gamma at the integer k; optionally with a feasibility witness.

    Returns the value alone, or a (value, witness) pair when
    want_witness is set; the witness is None for infinite values and for
    the alpha = 0 branch value 0 without request.
    """
    _require_valid(datum)
    if k >= 1:
        value, witness = _gamma_positive(datum, k, want_witness)
    else:
        value, witness = _gamma_nonpositive(datum, k, want_witness)
    return (value, witness) if want_witness else value


def gamma_profile(datum: FloerDatum, k_min: int, k_max: int):
    """Per-k gamma over [k_min, k_max]; asserts monotone non-decreasing."""
    if k_min > k_max:
        raise ValueError("k_min must not exceed k_max")
    profile = [(k, gamma(datum, k)) for k in range(k_min, k_max + 1)]
    for (k0, v0), (k1, v1) in zip(profile, profile[1:]):
        if not (v0 <= v1):
            raise MonotonicityError(
                f"gamma({k0}) = {v0} > gamma({k1}) = {v1} on {datum.name!r}")
    return profile


# ---------------------------------------------------------------------------
# Feasible-set emptiness and the h-invariant
# ---------------------------------------------------------------------------

def feasible_nonempty(datum: FloerDatum, k: int) -> bool:
    """Is the degree-k feasible set nonempty?

    For k >= 1 this asks for a constrained solution with
    d1(u^(k-1) alpha) != 0 (any coefficient); for k <= 0 for a solution
    with q != 0.
    """
    if k >= 1:
        gens = _grading_class(datum, k)
        if not gens:
            return False
        rows, _, nonzero_rows = _positive_system(datum, k, gens)
        base = q_rank(rows)
        return q_rank(rows + nonzero_rows) > base
    gens = _grading_class(datum, k)
    rows, q_indices = _nonpositive_system(datum, k, gens)
    ncols = len(gens) + len(q_indices)
    return _has_kernel_with_nonzero_block(
        rows, ncols, list(range(len(gens), ncols)))


def h_invariant(datum: FloerDatum) -> int:
    """Half the largest k with a nonempty feasible set.

    Searches k downward from 1 + 4 * (number of generators); a
    guaranteed kernel argument bounds the search below.  An odd maximal
    k is reported as a datum inconsistency.
    """
    _require_valid(datum)
    n = len(datum.generators)
    for k in range(1 + 4 * n, -(2 * n + 5), -1):
        if feasible_nonempty(datum, k):
            if k % 2 != 0:
                raise DatumInconsistencyError(
                    f"largest feasible degree {k} is odd on {datum.name!r}")
            return k // 2
    raise DatumInconsistencyError(
        f"no feasible degree found for {datum.name!r}; h undefined")


# ---------------------------------------------------------------------------
# Arithmetic lower bounds from the energy-lift spectrum
# ---------------------------------------------------------------------------

def _positive_fractional(x: Fraction) -> Fraction:
    r = x - (x.numerator // x.denominator)  # in [0, 1)
    return r if r > 0 else Fraction(1)


def _nonnegative_fractional(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def tau_lower_bound(datum: FloerDatum) -> Fraction:
    """min { r > 0 : r = -r_g mod 1 for some generator g }."""
    if not datum.generators:
        raise ValueError("empty datum has no irreducible classes")
    return min(_positive_fractional(-g.energy_lift) for g in datum.generators)


def tau_prime_lower_bound(datum: FloerDatum) -> Fraction:
    """min over ordered generator pairs of the positive representative of
    r_g' - r_g mod 1 (the difference 0 contributes 1)."""
    if not datum.generators:
        raise ValueError("empty datum has no irreducible classes")
    lifts = [g.energy_lift for g in datum.generators]
    return min(_positive_fractional(r2 - r1) for r1 in lifts for r2 in lifts)


def eta_lower_bound(source: FloerDatum, target: FloerDatum) -> Fraction:
    """min over cross pairs of the non-negative representative of
    r_g' - r_g mod 1."""
    if not source.generators or not target.generators:
        raise ValueError("eta bound needs nonempty spectra on both ends")
    return min(
        _nonnegative_fractional(gt.energy_lift - gs.energy_lift)
        for gs in source.generators
        for gt in target.generators
    )


def check_cs_trichotomy(datum: FloerDatum, k_min: int, k_max: int) -> Report:
    """Every finite positive gamma value must match -r_g mod 1 for some g."""
    rep = Report()
    for k in range(k_min, k_max + 1):
        value = gamma(datum, k)
        if value == INF or value == 0:
            continue
        if value < 0:
            rep.fail(f"gamma({k}) = {value} is negative")
            continue
        if not any(
            (value + g.energy_lift).denominator == 1 for g in datum.generators
        ):
            rep.fail(
                f"gamma({k}) = {value} is not congruent to any -r_g mod 1")
    return rep
