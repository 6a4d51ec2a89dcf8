"""Interpolating-subset counts, incidence-variety point counts, and the
linear-system / Jacobian diagnostics.

chi_r and S_mn default to the value-profile route, which costs one
family sweep total; the subset / brute routes exist as independent
oracles with explicit budget caps and must agree exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, factorial

from .errors import (
    BudgetExceeded,
    NotOnVariety,
    NotUniqueRegime,
    OverlappingSubsets,
    RegimeViolation,
)
from .family import FamilySpec, enumerate_b, family_poly
from .sweep import DEFAULT_BUDGET, FamilyStats, collect_stats, exact_tuple_counts
from .upoly import (
    ZERO,
    derivative,
    eval_at,
    poly_divmod,
    poly_mul,
    root_profile,
    trim,
)

SUBSET_BUDGET = 10**6


@dataclass(frozen=True)
class GammaCounts:
    """Point counts of an incidence variety and its closure."""

    affine_open: int
    closed: int


def _stats_for(spec, stats, workers, budget=DEFAULT_BUDGET):
    if stats is not None:
        return stats
    return collect_stats(spec, workers=workers, budget=budget)


def interpolating_b0(spec: FamilySpec, subset):
    """The unique (b, b0) whose member vanishes on the subset, if any.

    Reduce f_a modulo prod(T - alpha): the member exists iff the
    remainder has degree <= d-s-1, and then its negated coefficients
    are (b_1..b_{d-s-1}, b_0).  Only valid in the uniqueness regime
    r >= d-s+1.
    """
    subset = tuple(sorted(set(subset)))
    r = len(subset)
    d, s, gf = spec.d, spec.s, spec.field
    if r < d - s + 1:
        raise NotUniqueRegime(f"need |subset| >= {d - s + 1}, got {r}")
    f_a = [0] * (d + 1)
    f_a[d] = 1
    for i, c in enumerate(spec.a):
        f_a[d - 1 - i] = c
    prod = (1,)
    for alpha in subset:
        prod = poly_mul(gf, prod, (gf.neg(alpha), 1))
    _, rem = poly_divmod(gf, trim(f_a), prod)
    if rem and len(rem) - 1 > d - s - 1:
        return None
    dense = list(rem) + [0] * (d - s - len(rem))
    b = tuple(gf.neg(dense[i]) for i in range(d - s - 1, 0, -1))
    b0 = gf.neg(dense[0])
    return b, b0


def chi_r(
    spec: FamilySpec,
    r: int,
    method: str = "profile",
    stats: FamilyStats | None = None,
    budget: int = SUBSET_BUDGET,
    workers: int | None = None,
) -> int:
    """Number of r-subsets of F_q annihilated by some family member."""
    d, s, q = spec.d, spec.s, spec.q
    if r > d:
        return 0
    if r < d - s + 1:
        raise RegimeViolation(
            f"chi_r needs the uniqueness regime r >= d-s+1 = {d - s + 1}"
        )
    if method == "profile":
        st = _stats_for(spec, stats, workers)
        return st.chi(r)
    if method == "subsets":
        if comb(q, r) > budget:
            raise BudgetExceeded(f"C({q},{r}) exceeds the subset budget {budget}")
        count = 0
        for subset in itertools.combinations(range(q), r):
            if interpolating_b0(spec, subset) is not None:
                count += 1
        return count
    raise ValueError(f"unknown method {method!r}")


def compute_chi_vector(spec: FamilySpec, stats: FamilyStats) -> dict:
    return {r: stats.chi(r) for r in range(spec.d - spec.s + 1, spec.d + 1)}


def compute_s_matrix(spec: FamilySpec, stats: FamilyStats) -> dict:
    d = spec.d
    return {
        (m, n): stats.s_mn(m, n)
        for m in range(1, d + 1)
        for n in range(1, d + 1)
        if 2 <= m + n <= 2 * d
    }


def s_mn(
    spec: FamilySpec,
    m: int,
    n: int,
    method: str = "profile",
    stats: FamilyStats | None = None,
    budget: int = SUBSET_BUDGET,
    workers: int | None = None,
) -> int:
    """Triples (b, b01, b02), b01 != b02, with annihilated m- and n-sets."""
    d, q = spec.d, spec.q
    if m > d or n > d or m < 1 or n < 1:
        return 0
    if method == "profile":
        st = _stats_for(spec, stats, workers)
        return st.s_mn(m, n)
    if method == "brute":
        gf = spec.field
        pairs = comb(q, m) * comb(q, n)
        if pairs * spec.n_b * (m + n) > budget:
            raise BudgetExceeded(
                f"brute S_mn enumeration over {pairs} subset pairs x "
                f"{spec.n_b} members exceeds the budget {budget}"
            )
        total = 0
        members = []
        for b in enumerate_b(spec):
            f = trim(spec.coeff_vector(b, 0))
            members.append([eval_at(gf, f, t) for t in gf.elements()])
        for g1 in itertools.combinations(range(q), m):
            for g2 in itertools.combinations(range(q), n):
                if set(g1) & set(g2):
                    continue
                for vals in members:
                    c1s = {vals[t] for t in g1}
                    c2s = {vals[t] for t in g2}
                    if len(c1s) == 1 and len(c2s) == 1 and c1s != c2s:
                        total += 1
        return total
    raise ValueError(f"unknown method {method!r}")


def gamma_counts_r(
    spec: FamilySpec,
    r: int,
    stats: FamilyStats | None = None,
    workers: int | None = None,
) -> GammaCounts:
    """|Gamma_r(F_q)| (distinct coordinates) and |Gamma_r^*(F_q)|."""
    if not 1 <= r <= spec.d:
        raise ValueError(f"need 1 <= r <= d, got r={r}")
    st = _stats_for(spec, stats, workers, None)
    return GammaCounts(affine_open=st.gamma_open(r), closed=st.gamma_closed[r - 1])


def gamma_counts_mn(
    spec: FamilySpec,
    m: int,
    n: int,
    stats: FamilyStats | None = None,
    budget: int = DEFAULT_BUDGET,
) -> GammaCounts:
    """Point counts of Gamma_mn and Gamma_mn^* (diagonal included)."""
    d, q, gf = spec.d, spec.q, spec.field
    if not (1 <= m <= d and 1 <= n <= d):
        raise ValueError("need 1 <= m, n <= d")
    st = _stats_for(spec, stats, None, budget)
    affine = factorial(m) * factorial(n) * st.s_mn(m, n)
    if spec.n_b * q > budget:
        raise BudgetExceeded(
            f"closed Gamma_mn scan needs {spec.n_b * q} root profiles"
        )
    closed = 0
    for b in enumerate_b(spec):
        f = trim(spec.coeff_vector(b, 0))
        by_value = {}
        for t in gf.elements():
            by_value.setdefault(eval_at(gf, f, t), []).append(t)
        w_m = 0
        w_n = 0
        for c, roots in by_value.items():
            shifted = list(f)
            shifted[0] = gf.sub(shifted[0], c)
            prof = root_profile(gf, trim(shifted))
            caps = [prof.multiplicities[t] for t in roots]
            w = exact_tuple_counts(caps, 0, d)
            w_m += w[m - 1]
            w_n += w[n - 1]
        closed += w_m * w_n
    return GammaCounts(affine_open=affine, closed=closed)


# -- linear-system audit ------------------------------------------------------


def _row_reduce(gf, rows):
    """Row echelon over F_q; returns (rank, pivot column list)."""
    rows = [list(r) for r in rows]
    n_cols = len(rows[0]) if rows else 0
    rank = 0
    pivots = []
    for col in range(n_cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = gf.inv(rows[rank][col])
        rows[rank] = [gf.mul(inv, x) for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                factor = rows[i][col]
                rows[i] = [
                    gf.sub(x, gf.mul(factor, y)) for x, y in zip(rows[i], rows[rank])
                ]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    return rank, pivots


def matrix_rank(gf, rows) -> int:
    if not rows:
        return 0
    return _row_reduce(gf, rows)[0]


def _solution_count(gf, rows, rhs, n_unknowns):
    """Number of solutions of rows * x = rhs over F_q."""
    aug = [list(r) + [v] for r, v in zip(rows, rhs)]
    rank_aug, pivots = _row_reduce(gf, aug)
    rank = matrix_rank(gf, rows)
    if rank_aug > rank:  # a pivot landed in the rhs column
        return 0
    return gf.q ** (n_unknowns - rank)


def vandermonde_rows(spec: FamilySpec, gamma1, gamma2):
    """The (m+n) x (d-s+1) matrix and rhs of the vanishing conditions.

    Unknowns are ordered (b_{d-s-1}, ..., b_1, b01, b02); the right-hand
    side is -f_a at each node.
    """
    gf, d, s = spec.field, spec.d, spec.s
    f_a = [0] * (d + 1)
    f_a[d] = 1
    for i, c in enumerate(spec.a):
        f_a[d - 1 - i] = c
    f_a = trim(f_a)
    rows, rhs = [], []
    for kind, gamma in ((0, gamma1), (1, gamma2)):
        for alpha in gamma:
            powers = [gf.pow(alpha, j) for j in range(d - s - 1, 0, -1)]
            row = powers + ([1, 0] if kind == 0 else [0, 1])
            rows.append(row)
            rhs.append(gf.neg(eval_at(gf, f_a, alpha)))
    return rows, rhs


def linear_system_audit(spec: FamilySpec, gamma1, gamma2) -> dict:
    """Rank and solution counts of the two-subset vanishing system."""
    gamma1, gamma2 = set(gamma1), set(gamma2)
    if gamma1 & gamma2:
        raise OverlappingSubsets(f"subsets share {sorted(gamma1 & gamma2)}")
    m, n = len(gamma1), len(gamma2)
    d, s = spec.d, spec.s
    if m + n > d - s:
        raise RegimeViolation(
            f"audit is for the low regime m+n <= d-s = {d - s}, got {m + n}"
        )
    gf = spec.field
    n_unknowns = d - s + 1
    rows, rhs = vandermonde_rows(spec, sorted(gamma1), sorted(gamma2))
    rank = matrix_rank(gf, rows)
    count_all = _solution_count(gf, rows, rhs, n_unknowns)
    # the b01 = b02 hyperplane, as one extra equation
    diag_row = [0] * (d - s - 1) + [1, gf.neg(1)]
    count_diag = _solution_count(gf, rows + [diag_row], rhs + [0], n_unknowns)
    return {
        "rank": rank,
        "count_all": count_all,
        "count_strict": count_all - count_diag,
    }


def jacobian_rank(spec: FamilySpec, b0_full, alpha) -> int:
    """Rank of the incidence Jacobian at a point of Gamma_r^*.

    b0_full = (b_{d-s-1}, ..., b_1, b_0); each row is the gradient of
    one vanishing condition: the B-powers, the constant column, and the
    diagonal derivative entry f'(alpha_i).
    """
    gf, d, s = spec.field, spec.d, spec.s
    b0_full = tuple(b0_full)
    if len(b0_full) != d - s:
        raise ValueError(f"expected {d - s} coordinates, got {len(b0_full)}")
    b, b0 = b0_full[: d - s - 1], b0_full[-1]
    f = family_poly(spec, b, b0)
    r = len(alpha)
    for a_i in alpha:
        if eval_at(gf, f, a_i) != 0:
            raise NotOnVariety(f"alpha={a_i} is not a root of the member")
    fp = derivative(gf, f)
    rows = []
    for i, a_i in enumerate(alpha):
        powers = [gf.pow(a_i, j) for j in range(d - s - 1, 0, -1)]
        diag = [0] * r
        diag[i] = eval_at(gf, fp, a_i) if fp else 0
        rows.append(powers + [1] + diag)
    return matrix_rank(gf, rows)


def divides_check_multiplicity(spec: FamilySpec, b0_full, alpha) -> bool:
    """Multiset-multiplicity membership test for Gamma_r^*."""
    gf = spec.field
    b, b0 = tuple(b0_full[: spec.d - spec.s - 1]), b0_full[-1]
    f = family_poly(spec, b, b0)
    prof = root_profile(gf, f)
    need = {}
    for a_i in alpha:
        need[a_i] = need.get(a_i, 0) + 1
    return all(prof.multiplicities.get(t, 0) >= c for t, c in need.items())


def divides_check_division(spec: FamilySpec, b0_full, alpha) -> bool:
    """Direct polynomial-division membership test for Gamma_r^*."""
    gf = spec.field
    b, b0 = tuple(b0_full[: spec.d - spec.s - 1]), b0_full[-1]
    f = family_poly(spec, b, b0)
    prod = (1,)
    for a_i in alpha:
        prod = poly_mul(gf, prod, (gf.neg(a_i), 1))
    if len(prod) - 1 > len(f) - 1:
        return False
    _, rem = poly_divmod(gf, f, prod)
    return rem == ZERO
