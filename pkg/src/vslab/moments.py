"""Exact value-set statistics and their combinatorial reconstructions.

Everything here is exact rational arithmetic (fractions.Fraction); a
tolerance anywhere in this layer would only mask bugs.  The two
reconstruction identities are:

  mean:   V = sum_{r=1}^{d-s} (-1)^(r-1) C(q,r) q^(1-r)
              + q^-(d-s-1) sum_{r=d-s+1}^{d} (-1)^(r-1) chi_r

  second moment (mode="paper", the closed middle term as printed):
          V2 = V + sum_{2<=m+n<=d-s} (-1)^(m+n) C(q,m) C(q,n) q^(2-m-n)
              + q^-(d-s-1) sum_{d-s+1<=m+n<=2d} (-1)^(m+n) S_mn

  second moment (mode="exact", the middle term from measured counts,
  which keeps the b_{0,1} != b_{0,2} constraint):
          V2 = V + q^-(d-s-1) sum_{2<=m+n<=2d} (-1)^(m+n) S_mn

Whether the two modes agree is a finding the reports surface, never an
assumption baked in.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .errors import RangeMismatch, RegimeViolation
from .family import FamilySpec
from .sweep import DEFAULT_BUDGET, FamilyStats, collect_stats


def mu(d: int) -> Fraction:
    """sum_{r=1}^{d} (-1)^(r-1) / r!, the limiting value-set density."""
    if d < 1:
        raise ValueError("mu is defined for d >= 1")
    return sum(
        (Fraction((-1) ** (r - 1), factorial(r)) for r in range(1, d + 1)),
        Fraction(0),
    )


def one_minus_inv_e_enclosure(terms: int = 60):
    """Rational interval containing 1 - e^-1, via the alternating series.

    Consecutive partial sums of e^-1 = sum (-1)^k / k! bracket the limit,
    so the enclosure is rigorous; 60 terms is far below 10^-50 wide.
    """
    partial = Fraction(0)
    values = []
    for k in range(terms):
        partial += Fraction((-1) ** k, factorial(k))
        values.append(partial)
    hi_e, lo_e = values[-2], values[-1]
    if hi_e < lo_e:
        hi_e, lo_e = lo_e, hi_e
    return 1 - hi_e, 1 - lo_e


def cohen_exact_mean(q: int, d: int) -> Fraction:
    """The exact average value set of all monic degree-d f with f(0)=0."""
    if d < 1:
        raise ValueError("need d >= 1")
    return sum(
        (
            Fraction((-1) ** (r - 1) * comb(q, r), q ** (r - 1))
            for r in range(1, d + 1)
        ),
        Fraction(0),
    )


def _stats_for(spec, stats, workers, budget):
    if stats is not None:
        return stats
    return collect_stats(spec, workers=workers, budget=budget)


def value_set_mean(
    spec: FamilySpec,
    stats: FamilyStats | None = None,
    workers: int | None = None,
    budget: int | None = DEFAULT_BUDGET,
) -> Fraction:
    st = _stats_for(spec, stats, workers, budget)
    return Fraction(st.sum_v, st.n_b)


def value_set_second_moment(
    spec: FamilySpec,
    stats: FamilyStats | None = None,
    workers: int | None = None,
    budget: int | None = DEFAULT_BUDGET,
) -> Fraction:
    st = _stats_for(spec, stats, workers, budget)
    return Fraction(st.sum_v2, st.n_b)


def reconstruct_mean(spec: FamilySpec, chi) -> Fraction:
    """Rebuild the mean from the interpolating-subset counts chi_r."""
    d, s, q = spec.d, spec.s, spec.q
    if not 1 <= s <= d - 2:
        raise RegimeViolation(f"mean reconstruction needs 1 <= s <= d-2, got s={s}")
    missing = [r for r in range(d - s + 1, d + 1) if r not in chi]
    if missing:
        raise RangeMismatch(f"chi vector is missing r in {missing}")
    low = sum(
        (
            Fraction((-1) ** (r - 1) * comb(q, r), q ** (r - 1))
            for r in range(1, d - s + 1)
        ),
        Fraction(0),
    )
    high = sum((-1) ** (r - 1) * chi[r] for r in range(d - s + 1, d + 1))
    return low + Fraction(high, q ** (d - s - 1))


def reconstruct_second_moment(
    spec: FamilySpec, mean: Fraction, smatrix, mode: str = "exact"
) -> Fraction:
    """Rebuild the second moment from S_mn; see the module docstring."""
    d, s, q = spec.d, spec.s, spec.q
    if mode not in ("paper", "exact"):
        raise ValueError(f"unknown mode {mode!r}")
    lo_needed = 2 if mode == "exact" else d - s + 1
    missing = [
        (m, n)
        for m in range(1, d + 1)
        for n in range(1, d + 1)
        if lo_needed <= m + n <= 2 * d and (m, n) not in smatrix
    ]
    if missing:
        raise RangeMismatch(f"S matrix is missing cells {missing[:6]}...")

    total = Fraction(mean)
    if mode == "paper":
        middle = Fraction(0)
        for m in range(1, d + 1):
            for n in range(1, d + 1):
                if 2 <= m + n <= d - s:
                    middle += Fraction(
                        (-1) ** (m + n) * comb(q, m) * comb(q, n), q ** (m + n - 2)
                    )
        total += middle
        high = sum(
            (-1) ** (m + n) * smatrix[(m, n)]
            for m in range(1, d + 1)
            for n in range(1, d + 1)
            if d - s + 1 <= m + n <= 2 * d
        )
        total += Fraction(high, q ** (d - s - 1))
    else:
        signed = sum(
            (-1) ** (m + n) * smatrix[(m, n)]
            for m in range(1, d + 1)
            for n in range(1, d + 1)
            if 2 <= m + n <= 2 * d
        )
        total += Fraction(signed, q ** (d - s - 1))
    return total


@dataclass
class MomentReport:
    """Everything one family sweep establishes, exactly."""

    spec_key: str
    q: int
    d: int
    s: int
    a: tuple
    mean: Fraction
    second_moment: Fraction
    chi: dict
    smn: dict
    mean_reconstructed: Fraction | None
    v2_exact_mode: Fraction
    v2_paper_mode: Fraction | None

    def residual_mean(self) -> Fraction:
        return self.mean - mu(self.d) * self.q

    def residual_second(self) -> Fraction:
        return self.second_moment - mu(self.d) ** 2 * self.q**2

    def paper_mode_residual(self) -> Fraction | None:
        if self.v2_paper_mode is None:
            return None
        return self.v2_paper_mode - self.v2_exact_mode


def build_moment_report(spec: FamilySpec, stats: FamilyStats) -> MomentReport:
    """Assemble the full exact report from one family sweep."""
    d, s = spec.d, spec.s
    mean = Fraction(stats.sum_v, stats.n_b)
    second = Fraction(stats.sum_v2, stats.n_b)
    chi = {r: stats.chi(r) for r in range(d - s + 1, d + 1)} if s >= 1 else {}
    smn = {
        (m, n): stats.s_mn(m, n)
        for m in range(1, d + 1)
        for n in range(1, d + 1)
        if 2 <= m + n <= 2 * d
    }
    mean_rec = reconstruct_mean(spec, chi) if 1 <= s <= d - 2 else None
    v2_exact = reconstruct_second_moment(spec, mean, smn, mode="exact")
    v2_paper = reconstruct_second_moment(spec, mean, smn, mode="paper")
    return MomentReport(
        spec_key=spec.key,
        q=spec.q,
        d=d,
        s=s,
        a=spec.a,
        mean=mean,
        second_moment=second,
        chi=chi,
        smn=smn,
        mean_reconstructed=mean_rec,
        v2_exact_mode=v2_exact,
        v2_paper_mode=v2_paper,
    )
