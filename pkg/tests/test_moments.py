from fractions import Fraction
from math import factorial

import pytest

from vslab.errors import RangeMismatch, RegimeViolation
from vslab.family import FamilySpec, enumerate_b, family_poly
from vslab.gf import make_field
from vslab.moments import (
    build_moment_report,
    cohen_exact_mean,
    mu,
    one_minus_inv_e_enclosure,
    reconstruct_mean,
    reconstruct_second_moment,
    value_set_mean,
    value_set_second_moment,
)
from vslab.counting import compute_chi_vector, compute_s_matrix
from vslab.sweep import collect_stats
from vslab import upoly as up

F5 = make_field(5)
F7 = make_field(7)


def brute_value_sets(spec):
    """Independent oracle: the list of V(f_b) by direct evaluation."""
    gf = spec.field
    out = []
    for b in enumerate_b(spec):
        f = family_poly(spec, b, 0)
        out.append(len(set(up.batch_eval(gf, f))))
    return out


def test_mu_values():
    assert mu(1) == 1
    assert mu(2) == Fraction(1, 2)
    assert mu(5) == Fraction(19, 30)  # (120-60+20-5+1)/120


def test_mu_convergence_to_one_minus_inv_e():
    lo, hi = one_minus_inv_e_enclosure()
    assert hi - lo < Fraction(1, 10**50)
    for d in range(1, 21):
        bound = Fraction(1, factorial(d + 1))
        m = mu(d)
        assert max(abs(m - lo), abs(m - hi)) <= bound


def test_cohen_exact_mean_values():
    assert cohen_exact_mean(7, 2) == 4  # 7 - 21/7
    assert cohen_exact_mean(5, 3) == Fraction(17, 5)  # 5 - 2 + 2/5
    for q in (5, 7, 11):
        assert cohen_exact_mean(q, 1) == q


def test_value_set_mean_squaring_family():
    spec = FamilySpec(F7, 2, 0)
    vs = brute_value_sets(spec)
    assert vs == [4] * 7  # every T^2+bT hits exactly (q+1)/2 values
    assert value_set_mean(spec) == 4
    assert value_set_second_moment(spec) == 16


def test_mean_equals_cohen_for_s0():
    for q, d in [(5, 3), (5, 4), (7, 3), (7, 4)]:
        gf = make_field(q)
        spec = FamilySpec(gf, d, 0)
        vs = brute_value_sets(spec)
        mean = Fraction(sum(vs), len(vs))
        assert mean == cohen_exact_mean(q, d)
        assert value_set_mean(spec) == mean


def test_degenerate_linear_family():
    spec = FamilySpec(F5, 1, 0)
    assert value_set_mean(spec) == 5


def test_bounds_on_moments():
    for spec in (FamilySpec(F5, 4, 1, (2,)), FamilySpec(F7, 4, 2, (0, 3))):
        mean = value_set_mean(spec)
        second = value_set_second_moment(spec)
        assert 1 <= mean <= spec.q
        assert second >= mean * mean  # Jensen
        assert second <= spec.q**2


def test_reconstruct_mean_exact():
    for spec in (
        FamilySpec(F7, 4, 1, (1,)),
        FamilySpec(F7, 4, 2, (1, 2)),
        FamilySpec(F5, 4, 1, (3,)),
    ):
        st = collect_stats(spec)
        chi = compute_chi_vector(spec, st)
        assert reconstruct_mean(spec, chi) == value_set_mean(spec, stats=st)


def test_reconstruct_mean_regime_errors():
    with pytest.raises(RegimeViolation):
        reconstruct_mean(FamilySpec(F5, 4, 0), {})
    spec = FamilySpec(F7, 4, 2, (1, 2))
    with pytest.raises(RangeMismatch):
        reconstruct_mean(spec, {4: 0})  # missing r = 3


def test_reconstruct_second_moment_exact_mode():
    for spec in (
        FamilySpec(F5, 4, 1, (2,)),
        FamilySpec(F5, 4, 0),
        FamilySpec(F7, 4, 1, (5,)),
    ):
        st = collect_stats(spec)
        smn = compute_s_matrix(spec, st)
        mean = value_set_mean(spec, stats=st)
        v2 = reconstruct_second_moment(spec, mean, smn, mode="exact")
        assert v2 == value_set_second_moment(spec, stats=st)


def test_paper_mode_residual_is_reported_not_asserted():
    spec = FamilySpec(F5, 4, 1, (2,))
    st = collect_stats(spec)
    report = build_moment_report(spec, st)
    assert report.v2_exact_mode == report.second_moment
    resid = report.paper_mode_residual()
    assert resid is not None  # whatever its value, it must be computable


def test_reconstruct_second_moment_range_check():
    spec = FamilySpec(F5, 4, 1, (2,))
    with pytest.raises(RangeMismatch):
        reconstruct_second_moment(spec, Fraction(4), {(1, 1): 0}, mode="exact")
    with pytest.raises(ValueError):
        reconstruct_second_moment(spec, Fraction(4), {}, mode="weird")


def test_moment_report_residuals_recomputed():
    spec = FamilySpec(F7, 4, 1, (1,))
    st = collect_stats(spec)
    rep = build_moment_report(spec, st)
    assert rep.residual_mean() == rep.mean - mu(4) * 7
    assert rep.residual_second() == rep.second_moment - mu(4) ** 2 * 49
    assert rep.mean_reconstructed == rep.mean
