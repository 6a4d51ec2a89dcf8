"""Evaluators for the explicit error bounds, their hypotheses, and the
growth analysis of h(k) = C(d,k)^2 (d-k)!.

Left-hand sides are exact rationals supplied by the statistics modules;
only the right-hand sides are floats.  A check passes when

    lhs <= rhs * (1 + 1e-9)

with the comparison done in exact rational arithmetic after converting
the float rhs exactly.  The slack only keeps the contract honest: at
desk scale the right-hand sides dwarf the left by orders of magnitude,
so it never decides a verdict.  For d > 20 the rhs terms are assembled
in log space before exponentiating, which is where the documented
<= 1e-9 relative slack comes from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, isqrt

from .errors import MissingParameter

RELATIVE_SLACK = Fraction(1, 10**9)
LOG_SPACE_THRESHOLD = 20

BOUND_KINDS = (
    "mean_main",
    "mean_refined",
    "chi",
    "gamma_star",
    "smn",
    "smn_s0",
    "v2",
    "v2_s0",
)


# -- parameter combinations used by the estimates ---------------------------


def d_r(d: int, r: int) -> int:
    """Sum of (d - i) for i = 1..r: the multidegree total minus r."""
    return r * d - r * (r + 1) // 2


def delta_r(d: int, r: int) -> int:
    """d!/(d-r)!: the degree of the incidence variety closure."""
    return factorial(d) // factorial(d - r)


def d_mn(d: int, m: int, n: int) -> int:
    return (m + n) * d - comb(m + 1, 2) - comb(n + 1, 2)


def delta_mn(d: int, m: int, n: int) -> int:
    return factorial(d) ** 2 // (factorial(d - m) * factorial(d - n))


def xi_mn(m: int, n: int) -> int:
    return comb(m, 2) + comb(n, 2) + 1


def h_value(d: int, k: int) -> int:
    return comb(d, k) ** 2 * factorial(d - k)


def k0_floor(d: int) -> int:
    """floor(-1/2 + sqrt(5+4d)/2), exactly: max k with (2k+1)^2 <= 5+4d."""
    s = isqrt(5 + 4 * d)
    if (s + 1) ** 2 <= 5 + 4 * d:
        s += 1
    return (s - 1) // 2


# -- hypothesis predicates ---------------------------------------------------


def applicability(q: int, d: int, s: int, p: int) -> set:
    """Which bound kinds apply at (q, d, s), per the stated hypotheses.

    mean_main / v2 / smn / gamma_star need 1 <= s <= d-4 for p > 3 and
    1 <= s <= d-6 for p = 3; the chi estimate (and the refined mean
    corollary derived from it) is stated with s <= d-3 for p > 3;
    v2_s0 / smn_s0 need s = 0 with d >= 5 for p > 3 and d >= 9 for
    p = 3.  Everything needs odd p and q > d.
    """
    out: set = set()
    if p <= 2 or q <= d:
        return out
    if s >= 1:
        tight = (p > 3 and s <= d - 4) or (p == 3 and s <= d - 6)
        loose = (p > 3 and s <= d - 3) or (p == 3 and s <= d - 6)
        if tight:
            out.update({"mean_main", "v2", "smn", "gamma_star"})
        if loose:
            out.update({"chi", "mean_refined"})
    else:
        if (p > 3 and d >= 5) or (p == 3 and d >= 9):
            out.update({"v2_s0", "smn_s0"})
    return out


# -- right-hand sides ---------------------------------------------------------


def _exp_term(log_value: float) -> float:
    return math.exp(log_value)


def _pow_term(base: float, expo: float, extra_log: float = 0.0) -> float:
    """base**expo * e**extra_log, via logs to dodge double overflow."""
    return math.exp(expo * math.log(base) + extra_log)


def bound_value(
    kind: str,
    q: int,
    d: int,
    s: int | None = None,
    r: int | None = None,
    m: int | None = None,
    n: int | None = None,
) -> float:
    """Float value of the named bound's right-hand side."""
    if kind not in BOUND_KINDS:
        raise MissingParameter(f"unknown bound kind {kind!r}")
    need_s = kind in ("mean_refined", "chi", "gamma_star", "smn")
    if need_s and s is None:
        raise MissingParameter(f"{kind} needs s")
    if kind in ("chi", "gamma_star") and r is None:
        raise MissingParameter(f"{kind} needs r")
    if kind in ("smn", "smn_s0") and (m is None or n is None):
        raise MissingParameter(f"{kind} needs m and n")

    sqrt_q = math.sqrt(q)
    if kind == "mean_main":
        if d <= LOG_SPACE_THRESHOLD:
            tail = 49.0 * d ** (d + 5) * math.exp(2.0 * math.sqrt(d) - d)
        else:
            tail = 49.0 * _pow_term(d, d + 5, 2.0 * math.sqrt(d) - d)
        return d * d * 2.0 ** (d - 1) * sqrt_q + tail

    if kind == "mean_refined":
        total = sum(h_value(d, k) for k in range(s))
        return d * d * 2.0 ** (d - 1) * sqrt_q + 3.5 * d**4 * float(total)

    if kind == "chi":
        dr, dlt = d_r(d, r), delta_r(d, r)
        main = (dlt * (dr - 2) + 2) * q ** (d - s) / sqrt_q
        tail = (14 * dr * dr * dlt * dlt + r * (r - 1) * dlt // 2) * q ** (
            d - s - 1
        )
        return (main + tail) / factorial(r)

    if kind == "gamma_star":
        dr, dlt = d_r(d, r), delta_r(d, r)
        return (dlt * (dr - 2) + 2) * q ** (d - s) / sqrt_q + (
            14 * dr * dr * dlt * dlt
        ) * float(q ** (d - s - 1))

    if kind == "smn":
        dmn, dlt = d_mn(d, m, n), delta_mn(d, m, n)
        main = (dlt * (dmn - 2) + 2) * q ** (d - s) * sqrt_q
        tail = (14 * dmn * dmn * dlt * dlt + xi_mn(m, n) * dlt) * q ** (d - s)
        return (main + tail) / (factorial(m) * factorial(n))

    if kind == "smn_s0":
        dmn, dlt = d_mn(d, m, n), delta_mn(d, m, n)
        return (
            (14 * dmn**3 * dlt * dlt + xi_mn(m, n) * dlt)
            * float(q**d)
            / (factorial(m) * factorial(n))
        )

    if kind == "v2":
        if d <= LOG_SPACE_THRESHOLD:
            tail = 14.0**3 * d ** (2 * d + 6) * math.exp(4 * math.sqrt(d) - 2 * d)
        else:
            tail = _pow_term(d, 2 * d + 6, 4 * math.sqrt(d) - 2 * d + math.log(14.0**3))
        return d * d * 2.0 ** (2 * d + 1) * q * sqrt_q + tail * q

    if kind == "v2_s0":
        if d <= LOG_SPACE_THRESHOLD:
            tail = 14.0**3 * d ** (2 * d + 8) * math.exp(4 * math.sqrt(d) - 2 * d)
        else:
            tail = _pow_term(d, 2 * d + 8, 4 * math.sqrt(d) - 2 * d + math.log(14.0**3))
        return (d * d * 2.0 ** (2 * d - 2) + tail) * q

    raise MissingParameter(kind)


# -- checks --------------------------------------------------------------------


@dataclass(frozen=True)
class BoundCheck:
    """One |exact deviation| <= rhs comparison, or a recorded skip."""

    kind: str
    q: int
    d: int
    s: int
    r: int | None
    m: int | None
    n: int | None
    lhs: Fraction | None
    rhs: float | None
    applicable: bool
    feasible: bool
    passed: bool | None

    @staticmethod
    def verdict(lhs: Fraction, rhs: float) -> bool:
        # Fraction(float) is exact, so this comparison has no rounding.
        return lhs <= Fraction(rhs) * (1 + RELATIVE_SLACK)


def _check(kind, q, d, s, lhs, applicable, r=None, m=None, n=None):
    rhs = bound_value(kind, q, d, s=s, r=r, m=m, n=n)
    passed = BoundCheck.verdict(lhs, rhs) if applicable else None
    return BoundCheck(
        kind=kind,
        q=q,
        d=d,
        s=s,
        r=r,
        m=m,
        n=n,
        lhs=lhs,
        rhs=rhs,
        applicable=applicable,
        feasible=True,
        passed=passed,
    )


def bound_suite(spec, stats) -> list:
    """Every bound check at one family instance, from one sweep's stats."""
    from .moments import mu, value_set_mean, value_set_second_moment

    q, d, s, p = spec.q, spec.d, spec.s, spec.field.p
    applicable = applicability(q, d, s, p)
    mean = value_set_mean(spec, stats=stats)
    second = value_set_second_moment(spec, stats=stats)
    mu_d = mu(d)
    checks = []
    if s >= 1:
        lhs_mean = abs(mean - mu_d * q)
        checks.append(
            _check("mean_main", q, d, s, lhs_mean, "mean_main" in applicable)
        )
        checks.append(
            _check("mean_refined", q, d, s, lhs_mean, "mean_refined" in applicable)
        )
        lhs_v2 = abs(second - mu_d**2 * q**2)
        checks.append(_check("v2", q, d, s, lhs_v2, "v2" in applicable))
        for r in range(d - s + 1, d + 1):
            lhs_chi = abs(
                Fraction(stats.chi(r)) - Fraction(q ** (d - s), factorial(r))
            )
            checks.append(
                _check("chi", q, d, s, lhs_chi, "chi" in applicable, r=r)
            )
            lhs_g = abs(Fraction(stats.gamma_closed[r - 1] - q ** (d - s)))
            checks.append(
                _check(
                    "gamma_star", q, d, s, lhs_g, "gamma_star" in applicable, r=r
                )
            )
        for m in range(1, d + 1):
            for n in range(1, d + 1):
                if not d - s + 1 <= m + n <= 2 * d:
                    continue
                lhs_s = abs(
                    Fraction(stats.s_mn(m, n))
                    - Fraction(q ** (d - s + 1), factorial(m) * factorial(n))
                )
                checks.append(
                    _check("smn", q, d, s, lhs_s, "smn" in applicable, m=m, n=n)
                )
    else:
        lhs_v2 = abs(second - mu_d**2 * q**2)
        checks.append(_check("v2_s0", q, d, s, lhs_v2, "v2_s0" in applicable))
        for m in range(1, d + 1):
            for n in range(1, d + 1):
                if not d + 1 <= m + n <= 2 * d:
                    continue
                lhs_s = abs(
                    Fraction(stats.s_mn(m, n))
                    - Fraction(q ** (d + 1), factorial(m) * factorial(n))
                )
                checks.append(
                    _check(
                        "smn_s0", q, d, s, lhs_s, "smn_s0" in applicable, m=m, n=n
                    )
                )
    return checks


def infeasible_marker(q, d, s) -> BoundCheck:
    """Row recording an instance skipped for budget, never silently."""
    return BoundCheck(
        kind="sweep",
        q=q,
        d=d,
        s=s,
        r=None,
        m=None,
        n=None,
        lhs=None,
        rhs=None,
        applicable=True,
        feasible=False,
        passed=None,
    )


def inapplicable_marker(q, d, s) -> BoundCheck:
    """Row for an explicitly requested instance no estimate covers."""
    return BoundCheck(
        kind="instance",
        q=q,
        d=d,
        s=s,
        r=None,
        m=None,
        n=None,
        lhs=None,
        rhs=None,
        applicable=False,
        feasible=True,
        passed=None,
    )


# -- unimodality of h(k) -------------------------------------------------------


@dataclass(frozen=True)
class UnimodalityAudit:
    d: int
    k0: int
    values: tuple
    argmax_set: tuple
    classification: str


def unimodality_audit(d: int) -> UnimodalityAudit:
    """Exact growth analysis of h(k) on [0, d-1].

    h must be non-decreasing throughout ("increasing") or rise to a
    plateau and then fall ("unimodal"), with floor(k0) attaining the
    maximum; any other shape raises.
    """
    if d < 2:
        raise ValueError("unimodality audit needs d >= 2")
    values = tuple(h_value(d, k) for k in range(d))
    peak = max(values)
    argmax = tuple(k for k, v in enumerate(values) if v == peak)
    first, last = argmax[0], argmax[-1]
    rising = all(values[k] <= values[k + 1] for k in range(first))
    plateau = all(values[k] == peak for k in range(first, last + 1))
    falling = all(values[k] >= values[k + 1] for k in range(last, d - 1))
    if not (rising and plateau and falling):
        raise AssertionError(f"h is not unimodal for d={d}: {values}")
    classification = "increasing" if last == d - 1 and rising else "unimodal"
    k0 = k0_floor(d)
    if k0 not in argmax:
        raise AssertionError(f"floor(k0)={k0} misses argmax {argmax} for d={d}")
    return UnimodalityAudit(d, k0, values, argmax, classification)
