import itertools
import random
from math import comb, factorial

import pytest

from vslab.errors import (
    BudgetExceeded,
    NotOnVariety,
    NotUniqueRegime,
    OverlappingSubsets,
    RegimeViolation,
)
from vslab.counting import (
    chi_r,
    divides_check_division,
    divides_check_multiplicity,
    gamma_counts_mn,
    gamma_counts_r,
    interpolating_b0,
    jacobian_rank,
    linear_system_audit,
    s_mn,
)
from vslab.family import FamilySpec, enumerate_b, family_poly
from vslab.gf import make_field
from vslab.sweep import collect_stats
from vslab import upoly as up

F5 = make_field(5)
F7 = make_field(7)


def test_interpolating_b0_examples():
    spec = FamilySpec(F5, 3, 1, (0,))
    # subset {0,1,4}: prod = T^3 + 4T, remainder of T^3 is T, so the
    # member T^3 + 4T vanishes there: b1 = 4, b0 = 0 (checked below)
    got = interpolating_b0(spec, {0, 1, 4})
    assert got == ((4,), 0)
    f = family_poly(spec, *got)
    assert all(up.eval_at(F5, f, t) == 0 for t in (0, 1, 4))
    # subset {0,1,2}: T^2 coefficient of the product is 2 != a_2 = 0
    assert interpolating_b0(spec, {0, 1, 2}) is None
    with pytest.raises(NotUniqueRegime):
        interpolating_b0(spec, {0, 1})  # r = d-s


def test_interpolating_b0_against_exhaustive_search():
    spec = FamilySpec(F5, 3, 1, (0,))
    for subset in itertools.combinations(range(5), 3):
        found = [
            (b, b0)
            for b in enumerate_b(spec)
            for b0 in range(5)
            if all(
                up.eval_at(F5, family_poly(spec, b, b0), t) == 0 for t in subset
            )
        ]
        got = interpolating_b0(spec, subset)
        if got is None:
            assert found == []
        else:
            assert found == [got]


def test_chi3_subset_count_frozen():
    # 3-subsets of F_5 with zero elementary symmetric e1 (= a_2 matching):
    # {0,1,4} and {0,2,3}; frozen after enumerating all C(5,3) = 10.
    spec = FamilySpec(F5, 3, 1, (0,))
    brute = sum(
        1
        for subset in itertools.combinations(range(5), 3)
        if sum(subset) % 5 == 0
    )
    assert brute == 2
    assert chi_r(spec, 3, method="subsets") == 2
    assert chi_r(spec, 3, method="profile") == 2


def test_chi_r_dual_method_equality():
    cases = [
        (FamilySpec(F5, 3, 1, (a,)), range(3, 4)) for a in range(5)
    ] + [
        (FamilySpec(F7, 4, 1, (2,)), range(4, 5)),
        (FamilySpec(F7, 4, 2, (1, 2)), range(3, 5)),
    ]
    for spec, rs in cases:
        st = collect_stats(spec)
        for r in rs:
            assert chi_r(spec, r, "profile", stats=st) == chi_r(spec, r, "subsets")


def test_chi_r_edges():
    spec = FamilySpec(F5, 3, 1, (1,))
    assert chi_r(spec, 4) == 0  # r > d
    with pytest.raises(RegimeViolation):
        chi_r(spec, 2)  # r = d-s
    with pytest.raises(BudgetExceeded):
        chi_r(spec, 3, method="subsets", budget=3)


def test_low_range_incidences_match_closed_form():
    # In the low range every r-subset has exactly q^(d-s-r) interpolating
    # pairs, so the profile incidence count equals C(q,r) q^(d-s-r).
    spec = FamilySpec(F7, 5, 1, (3,))
    st = collect_stats(spec)
    for r in range(1, spec.d - spec.s + 1):
        assert st.chi(r) == comb(7, r) * 7 ** (spec.d - spec.s - r)


def test_s_mn_symmetry_and_duality():
    spec = FamilySpec(F5, 3, 1, (1,))
    st = collect_stats(spec)
    for m in range(1, 4):
        for n in range(1, 4):
            prof = s_mn(spec, m, n, "profile", stats=st)
            assert prof == s_mn(spec, n, m, "profile", stats=st)
            assert prof == s_mn(spec, m, n, "brute")
    assert s_mn(spec, 4, 1) == 0  # m > d


def test_gamma_counts_r_identities():
    for spec in (FamilySpec(F5, 3, 1, (1,)), FamilySpec(F7, 4, 2, (1, 2))):
        st = collect_stats(spec)
        d, s = spec.d, spec.s
        assert gamma_counts_r(spec, 1, stats=st).closed == spec.q ** (d - s)
        for r in range(d - s + 1, d + 1):
            g = gamma_counts_r(spec, r, stats=st)
            assert g.affine_open == factorial(r) * chi_r(spec, r, stats=st)
            assert g.closed >= g.affine_open


def test_gamma_counts_mn_identities():
    spec = FamilySpec(F5, 3, 1, (1,))
    st = collect_stats(spec)
    for m in range(1, 4):
        for n in range(1, 4):
            g = gamma_counts_mn(spec, m, n, stats=st)
            expected = factorial(m) * factorial(n) * s_mn(spec, m, n, stats=st)
            assert g.affine_open == expected
            assert g.closed >= g.affine_open
    # (1,1) closed includes the diagonal c1 = c2
    g11 = gamma_counts_mn(spec, 1, 1, stats=st)
    assert g11.closed > g11.affine_open


def test_gamma_mn_closed_against_direct_count():
    # direct count over (b, b01, b02, ordered tuples) at tiny size
    spec = FamilySpec(F5, 3, 1, (2,))
    st = collect_stats(spec)
    for m, n in [(1, 1), (2, 1), (2, 2)]:
        direct = 0
        for b in enumerate_b(spec):
            for b01 in range(5):
                f1 = family_poly(spec, b, b01)
                w_m = sum(
                    1
                    for tup in itertools.product(range(5), repeat=m)
                    if up.divides_at_nodes(F5, f1, tup)
                )
                for b02 in range(5):
                    f2 = family_poly(spec, b, b02)
                    w_n = sum(
                        1
                        for tup in itertools.product(range(5), repeat=n)
                        if up.divides_at_nodes(F5, f2, tup)
                    )
                    direct += w_m * w_n
        assert gamma_counts_mn(spec, m, n, stats=st).closed == direct


def test_linear_system_audit_exhaustive():
    rng = random.Random(97)
    for spec in (FamilySpec(F5, 4, 1, (1,)), FamilySpec(F7, 5, 1, (3,))):
        q, d, s = spec.q, spec.d, spec.s
        gf = spec.field
        for _ in range(12):
            m = rng.randrange(1, d - s)
            n = rng.randrange(1, d - s - m + 1)
            pool = list(range(q))
            rng.shuffle(pool)
            g1, g2 = set(pool[:m]), set(pool[m : m + n])
            audit = linear_system_audit(spec, g1, g2)
            assert audit["rank"] == m + n
            assert audit["count_all"] == q ** (d - s + 1 - m - n)
            # exhaustive verification over (b, b01, b02)
            count_all = count_strict = 0
            for b in enumerate_b(spec):
                vals = up.batch_eval(gf, family_poly(spec, b, 0))
                c1 = {vals[t] for t in g1}
                c2 = {vals[t] for t in g2}
                if len(c1) == 1 and len(c2) == 1:
                    count_all += 1
                    if c1 != c2:
                        count_strict += 1
            assert audit["count_all"] == count_all
            assert audit["count_strict"] == count_strict


def test_linear_system_audit_errors():
    spec = FamilySpec(F5, 4, 1, (1,))
    with pytest.raises(OverlappingSubsets):
        linear_system_audit(spec, {0, 1}, {1, 2})
    with pytest.raises(RegimeViolation):
        linear_system_audit(spec, {0, 1}, {2, 3})  # m+n > d-s


def test_jacobian_rank_cases():
    spec = FamilySpec(F7, 4, 1, (0,))
    # f = T^4 + T^2 = T^2 (T^2+1): roots 0 (double); T^2+1 irreducible
    b0_full = (0, 1, 0)  # b2=0, b1=1? layout: (b_{d-s-1}, ..., b_1, b_0)
    f = family_poly(spec, b0_full[:2], b0_full[2])
    prof = up.root_profile(F7, f)
    simple = [t for t, e in prof.multiplicities.items() if e == 1]
    multiple = [t for t, e in prof.multiplicities.items() if e >= 2]
    # r = 1 always has rank 1 (the constant column)
    some_root = next(iter(prof.multiplicities))
    assert jacobian_rank(spec, b0_full, (some_root,)) == 1
    if len(simple) >= 2:
        assert jacobian_rank(spec, b0_full, tuple(simple[:2])) == 2
    if multiple:
        t = multiple[0]
        assert jacobian_rank(spec, b0_full, (t, t)) < 2  # identical rows
    with pytest.raises(NotOnVariety):
        bad = next(t for t in range(7) if up.eval_at(F7, f, t) != 0)
        jacobian_rank(spec, b0_full, (bad,))


def test_jacobian_full_rank_on_simple_roots():
    rng = random.Random(13)
    spec = FamilySpec(F5, 4, 1, (1,))
    hits = 0
    while hits < 20:
        b = (rng.randrange(5), rng.randrange(5))
        b0 = rng.randrange(5)
        f = family_poly(spec, b, b0)
        prof = up.root_profile(F5, f)
        simple = [t for t, e in prof.multiplicities.items() if e == 1]
        if len(simple) < 2:
            continue
        r = rng.randrange(2, len(simple) + 1)
        alpha = tuple(simple[:r])
        assert jacobian_rank(spec, b + (b0,), alpha) == r
        hits += 1


def test_divides_oracles_agree_three_ways():
    rng = random.Random(29)
    spec = FamilySpec(F5, 4, 1, (2,))
    for _ in range(400):
        b = (rng.randrange(5), rng.randrange(5))
        b0 = rng.randrange(5)
        r = rng.randrange(1, 4)
        alpha = tuple(rng.randrange(5) for _ in range(r))
        f = family_poly(spec, b, b0)
        newton = up.divides_at_nodes(F5, f, alpha)
        mult = divides_check_multiplicity(spec, b + (b0,), alpha)
        division = divides_check_division(spec, b + (b0,), alpha)
        assert newton == mult == division
