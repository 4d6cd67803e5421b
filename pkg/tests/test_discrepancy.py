import math

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from equidist.discrepancy import (
    THM31_MIN_N,
    TestFunction,
    TheoremTag,
    builtin_test_function,
    cor32_report,
    cor35_report,
    cor36_report,
    dirichlet_integral,
    energy_report,
    erdos_turan_rhs,
    et31_report,
    growth_report,
    sector_deviation,
    thm31_report,
    thm34_report,
    zero_stats,
)
from equidist.families import (
    FamilyMember,
    chebyshev_t,
    cyclotomic_product,
    cyclotomic_product_factors,
    parse_family,
    power_minus_one,
    shift,
    totally_positive_minpoly,
)
from equidist.intpoly import IntPolynomial as P, has_simple_zeros, parse_polynomial
from equidist.potential import Segment, UnitDisk, green
from equidist.rootfinder import RootSet, find_roots

D = UnitDisk()
S = Segment(-2, 2)


def newton_means(p):
    """(1/n) p_1 and (1/n) p_2 from the top coefficients."""
    n, an = p.degree, p.leading
    e1 = -p.coeffs[n - 1] / an
    e2 = p.coeffs[n - 2] / an if n >= 2 else 0.0
    return e1 / n, (e1 * e1 - 2 * e2) / n


# -- zero statistics ------------------------------------------------------------------------


def test_zero_stats_examples():
    for n in (5, 40):
        st_ = zero_stats(find_roots(chebyshev_t(n)))
        assert abs(st_.mean) <= 1e-14
        assert st_.mean_square == pytest.approx(2.0, abs=1e-12)
    assert zero_stats(find_roots(cyclotomic_product(3))).mean == pytest.approx(-0.25, abs=1e-15)
    assert zero_stats(find_roots(parse_polynomial("z^2+1")), 4).sector_counts == (0, 1, 0, 1)


def test_moments_structure():
    s = zero_stats(find_roots(totally_positive_minpoly(23)))
    assert len(s.moments) == 9 and s.moments[0] == 1
    assert s.moments[1] == s.mean and s.moments[2] == s.mean_square


@pytest.mark.parametrize(
    "p",
    [cyclotomic_product(12), chebyshev_t(33), shift(chebyshev_t(20), 2), totally_positive_minpoly(61), power_minus_one(50)],
    ids=["cyclo12", "cheb33", "scheb20", "trace61", "powm1_50"],
)
def test_moments_match_newton_sums(p):
    s = zero_stats(find_roots(p))
    m1, m2 = newton_means(p)
    assert abs(s.mean - m1) <= 1e-8
    assert abs(s.mean_square - m2) <= 1e-8
    assert abs(s.mean.imag) <= 1e-12 and abs(s.mean_square.imag) <= 1e-12


def test_roots_of_unity_counted_once():
    for n, bins in [(12, 4), (12, 6), (30, 10), (64, 8)]:
        s = zero_stats(find_roots(power_minus_one(n)), bins)
        assert s.sector_counts == (n // bins,) * bins
        assert sector_deviation(s)[0] == 0.0


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(-9, 9), min_size=3, max_size=16).filter(lambda c: c[-1] != 0 and c[0] != 0),
    st.sampled_from([2, 3, 4, 6, 8, 12]),
    st.integers(1, 11),
)
def test_sector_counts_rotate_cyclically(cs, bins, shift_by):
    p = P(cs)
    if not has_simple_zeros(p):
        return
    rs = find_roots(p)
    rot = np.exp(2j * math.pi * shift_by / bins)
    rotated = RootSet(rs.roots * rot, rs.radii, rs.source_degree)
    a, b = zero_stats(rs, bins), zero_stats(rotated, bins)
    if a.edge_ambiguous or b.edge_ambiguous:
        return
    assert b.sector_counts == tuple(np.roll(a.sector_counts, shift_by))


# -- Erdos-Turan -------------------------------------------------------------------------------


def test_erdos_turan_examples():
    r = et31_report(power_minus_one(24), sector_bins=6)
    assert r.lhs == 0.0 and r.passed
    s = zero_stats(find_roots(cyclotomic_product(3)), 2)
    assert s.sector_counts == (2, 2)
    assert sector_deviation(s)[0] == 0.0
    golden = parse_polynomial("z^2-z-1")
    r = et31_report(golden)
    # dense sampling oracle: max |e^{2it} - e^{it} - 1| = sqrt 5 at t = pi/2
    t = np.linspace(0, 2 * np.pi, 200001)
    ref = np.abs(np.exp(2j * t) - np.exp(1j * t) - 1).max()
    assert math.exp(r.parameters["log_sup_norm"]) == pytest.approx(ref, rel=1e-9)
    assert r.rhs == pytest.approx(16 * math.sqrt(0.5 * math.log(ref)), rel=1e-9)
    assert r.lhs <= r.rhs and r.passed


def test_erdos_turan_zero_constant():
    with pytest.raises(ValueError, match="zero constant term"):
        erdos_turan_rhs(P([0, 1, 1]), 2.0)
    with pytest.raises(ValueError, match="zero constant term"):
        et31_report(P([0, -1, 0, 1]))


# -- test functions ---------------------------------------------------------------------------


def test_builtin_examples():
    phi = builtin_test_function("cor32")
    assert phi(0.5) == 0.5
    assert phi(math.e) == 0.0 and phi(math.e * 1j) == 0.0
    assert phi(-0.3 + 0.4j) == pytest.approx(-0.3)
    assert builtin_test_function("cor36")(1 + 0j) == 1.0
    assert builtin_test_function("cor35", a=0, b=4)(3 + 0.5j) == pytest.approx(1.5)
    with pytest.raises(ValueError):
        builtin_test_function("cor99")
    with pytest.raises(ValueError):
        builtin_test_function("cor35", a=0, b=3)


def test_builtin_constants():
    phi = builtin_test_function("cor32")
    assert phi.lipschitz_A == pytest.approx(math.sqrt(5) / 2)
    assert phi.support_radius_R == math.e
    assert phi.dirichlet_bound == pytest.approx(2 * math.pi * math.e ** 2 * 5 / 4)
    phi = builtin_test_function("cor35", a=-2, b=2)
    assert phi.lipschitz_A == pytest.approx(2 * math.sqrt(2)) and phi.dirichlet_bound == 96
    phi = builtin_test_function("cor36")
    assert phi.lipschitz_A == pytest.approx(4 * math.sqrt(2)) and phi.dirichlet_bound == 384


def _all_functions():
    return [
        builtin_test_function("cor32"),
        builtin_test_function("cor35", a=0, b=4),
        builtin_test_function("cor35", a=-2, b=2),
        builtin_test_function("cor35", a=-7, b=-3),
        builtin_test_function("cor36"),
        builtin_test_function("cor33", n=20),
        builtin_test_function("cor37", n=20),
    ]


@pytest.mark.parametrize("phi", _all_functions(), ids=lambda f: f"{f.name}{f.params.get('a', '')}")
def test_support_and_lipschitz(phi):
    rng = np.random.default_rng(1)
    ang = rng.uniform(0, 2 * np.pi, 1024)
    rad = phi.support_radius_R * (1 + 1e-9) + rng.exponential(2.0, 1024)
    outside = phi.support_center + rad * np.exp(1j * ang)
    assert np.all(phi(outside) == 0.0)
    # near pairs inside the support box
    c, R = phi.support_center, phi.support_radius_R
    z = c + rng.uniform(-R, R, 20000) + 1j * rng.uniform(-R, R, 20000)
    t = z + rng.normal(scale=1e-3, size=z.shape) * np.exp(2j * np.pi * rng.uniform(size=z.shape))
    ratio = np.abs(phi(z) - phi(t)) / np.abs(z - t)
    assert float(np.nanmax(ratio)) <= phi.lipschitz_A * (1 + 1e-9)


def test_continuity_across_pieces():
    for phi in _all_functions():
        c, R = phi.support_center, phi.support_radius_R
        z = c + np.linspace(-R, R, 40001) + 0.3j
        jumps = np.abs(np.diff(phi(z)))
        assert jumps.max() <= phi.lipschitz_A * (2 * R / 40000) * (1 + 1e-6)


def test_dirichlet_closed_forms():
    # cor36: 128/9 + 128/5 + 128/3; cor35(a, b): 8/3 + 2(b^3-a^3)/3 + 4(a^2+b^2)/3
    assert dirichlet_integral(builtin_test_function("cor36"), 0.002) == pytest.approx(3712 / 45, rel=2e-3)
    for a in (0, -2, -7):
        b = a + 4
        exact = 8 / 3 + 2 * (b ** 3 - a ** 3) / 3 + 4 * (a * a + b * b) / 3
        assert dirichlet_integral(builtin_test_function("cor35", a=a, b=b), 0.002) == pytest.approx(exact, rel=2e-3)
    # cor32: pi (inner disk) + pi int_0^1 (s^2 + (1-s)^2) e^{2s} ds
    s = sympy.Symbol("s")
    exact = float(sympy.pi + sympy.pi * sympy.integrate((s ** 2 + (1 - s) ** 2) * sympy.exp(2 * s), (s, 0, 1)))
    assert dirichlet_integral(builtin_test_function("cor32"), 0.002) == pytest.approx(exact, rel=2e-3)


@pytest.mark.parametrize("phi", _all_functions(), ids=lambda f: f"{f.name}{f.params.get('a', '')}")
def test_dirichlet_below_stated_bound(phi):
    step = 0.005 if phi.name not in ("cor33", "cor37") else 0.002
    assert dirichlet_integral(phi, step) <= phi.dirichlet_bound


def test_dirichlet_of_zero_is_zero():
    zero = TestFunction("zero", lambda z: np.zeros(z.shape), 0.0, 1.0, 0j, 0.0)
    assert dirichlet_integral(zero, 0.05) == 0.0
    with pytest.raises(ValueError):
        dirichlet_integral(zero, 0)


def test_cor32_specialisation_constant():
    assert math.sqrt(5) / 2 * (2 * math.e + 1) <= 8


# -- theorem reports ------------------------------------------------------------------------


@pytest.mark.parametrize("k", [14, 20, 40, 81])
def test_thm31_cyclotomic(k):
    p, f = cyclotomic_product(k), cyclotomic_product_factors(k)
    assert p.degree >= THM31_MIN_N
    rs = find_roots(p, factors=f)
    phi = builtin_test_function("cor32")
    r = thm31_report(p, rs, phi)
    assert r.theorem is TheoremTag.THM31 and r.passed
    # M = 1, so the rhs is (sqrt5/2)(2e+1) sqrt(log n / n) <= 8 sqrt(log n / n)
    n = p.degree
    assert r.rhs == pytest.approx(math.sqrt(5) / 2 * (2 * math.e + 1) * math.sqrt(math.log(n) / n), rel=1e-12)
    assert r.lhs <= 8 * math.sqrt(math.log(n) / n)
    c = cor32_report(p, rs)
    # the root sum is the Mertens function: minus the z^{n-1} coefficient
    mertens = sum(int(sympy.mobius(d)) for d in range(1, k + 1))
    assert c.passed and c.lhs == pytest.approx(abs(mertens) / n, abs=1e-12)


def test_thm31_roots_of_unity_zero_lhs():
    r = thm31_report(power_minus_one(60), None, builtin_test_function("cor32"))
    assert r.lhs <= 1e-15 and r.passed


def test_thm31_threshold():
    r = thm31_report(shift(chebyshev_t(20), 2), None, builtin_test_function("cor32"))
    assert r.passed is None and r.status == "threshold not met" and r.rhs is None


def test_thm31_wrong_centre():
    with pytest.raises(ValueError):
        thm31_report(power_minus_one(60), None, builtin_test_function("cor36").__class__(
            "shifted", lambda z: np.zeros(z.shape), 1.0, 1.0, 3 + 0j, 1.0))


@pytest.mark.parametrize("n", [25, 64, 200])
def test_thm34_chebyshev(n):
    p = chebyshev_t(n)
    rs = find_roots(p)
    r = thm34_report(p, rs, builtin_test_function("cor36"), S)
    assert r.passed
    c = cor36_report(p, rs)
    assert c.passed
    assert c.lhs <= 24 * math.sqrt(math.log(n) / n)


@pytest.mark.parametrize("q", [53, 101, 199])
def test_cor35_trace_family(q):
    p = totally_positive_minpoly(q)
    rs = find_roots(p)
    E = Segment(0, 4)
    c = cor35_report(p, rs, E)
    n = p.degree
    assert c.passed
    # mean is exactly (q - 2)/n
    assert c.lhs == pytest.approx(abs((q - 2) / n - 2), abs=1e-12)
    assert thm34_report(p, rs, builtin_test_function("cor35", a=0, b=4), E).passed


def test_thm34_threshold_and_class_checks():
    r = thm34_report(shift(chebyshev_t(2), 2), None, builtin_test_function("cor35", a=0, b=4), Segment(0, 4))
    assert r.status == "threshold not met"
    # roots outside the segment: corollary precondition fails
    p = P([-3, 1]) * chebyshev_t(30)
    assert cor36_report(p).status.startswith("precondition not met")
    # non-monic with |a_n| above n
    p = chebyshev_t(26) * 40
    assert cor36_report(p).status == "threshold not met"


def independent_energy_rhs(p, rs, phi, r, E):
    """Every term recomputed by other means: sympy discriminant, mpmath root products."""
    n = p.degree
    x = sympy.Symbol("x")
    disc = sympy.discriminant(sum(c * x ** k for k, c in enumerate(p.coeffs)), x)
    log_disc = float(mpmath.log(abs(mpmath.mpf(int(disc)) * p.leading ** 2)))
    with mpmath.workdps(30):
        if isinstance(E, Segment):
            log_m = math.log(abs(p.leading)) + sum(
                float(green(E, z)) for z in rs.roots if abs(z.imag) > 1e-9 or not (E.a <= z.real <= E.b)
            )
            edge = 2 * float(mpmath.log(1 + (2 * r + mpmath.sqrt(8 * r + 4 * r * r)) / 2))
        else:
            log_m = float(mpmath.log(abs(p.leading)) + mpmath.fsum(mpmath.log(max(1, abs(mpmath.mpc(z)))) for z in rs.roots))
            edge = 4 * r
    energy = 2 * log_m / n - log_disc / n ** 2 - math.log(r) / n + edge
    return phi.lipschitz_A * r + math.sqrt(phi.dirichlet_bound / (2 * math.pi)) * math.sqrt(energy)


@pytest.mark.parametrize("k", [10, 14, 25])
def test_energy_disk_cyclotomic(k):
    p, f = cyclotomic_product(k), cyclotomic_product_factors(k)
    rs = find_roots(p, factors=f)
    phi = builtin_test_function("cor32")
    rep = energy_report(p, rs, phi, factors=f)
    assert rep.theorem is TheoremTag.THM52 and rep.passed
    assert rep.parameters["r"] == 1 / p.degree
    assert rep.rhs == pytest.approx(independent_energy_rhs(p, rs, phi, 1 / p.degree, D), rel=1e-9)


@pytest.mark.parametrize("name,p", [("cheb30", chebyshev_t(30)), ("cheb57", chebyshev_t(57)), ("lehmerish", P([-1, 3, 1, -3, 1]))])
def test_energy_segment(name, p):
    rs = find_roots(p)
    phi = builtin_test_function("cor36")
    n = p.degree
    rep = energy_report(p, rs, phi, None, S)
    assert rep.theorem is TheoremTag.THM54_SEG and rep.passed
    assert rep.parameters["r"] == 1 / n ** 2
    assert rep.rhs == pytest.approx(independent_energy_rhs(p, rs, phi, 1 / n ** 2, S), rel=1e-9)
    if n >= 25:
        assert rep.parameters["edge_term"] <= 2.22 * math.sqrt(2) / n


def test_energy_edge_term_bound_over_n():
    for n in range(25, 400, 7):
        r = n ** -2.0
        assert 2 * green(S, 2 + 2 * r) <= 2.22 * math.sqrt(2) / n


def test_energy_monotone_in_large_r():
    p = cyclotomic_product(10)
    phi = builtin_test_function("cor32")
    rhs = [energy_report(p, None, phi, r).rhs for r in (1.0, 5.0, 25.0, 125.0)]
    assert rhs == sorted(rhs)


def test_energy_rejects_multiple_zeros():
    p = P([-1, 1]) ** 2 * P([1, 1])
    fake = RootSet(np.array([-1.0, 1.0, 1.0 + 1e-9]), np.zeros(3), 3)
    with pytest.raises(ValueError, match="multiple zeros"):
        energy_report(p, fake, builtin_test_function("cor32"))


def test_energy_cor33_bounds_log_growth():
    # |(1/n) log|P(z)| - log|z|| is the lhs for the cor33 test function at |z| = 1 + 1/n
    k = 14
    p, f = cyclotomic_product(k), cyclotomic_product_factors(k)
    n = p.degree
    rs = find_roots(p, factors=f)
    phi = builtin_test_function("cor33", n=n)
    rep = energy_report(p, rs, phi, 1 / n ** 2, factors=f)
    z = 1 + 1 / n
    with mpmath.workdps(30):
        direct = float(mpmath.log(abs(mpmath.polyval([mpmath.mpf(c) for c in p.coeffs[::-1]], z)))) / n
    assert rep.lhs == pytest.approx(abs(direct - math.log(z)), abs=1e-9)
    assert rep.passed


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=26, max_size=40).filter(lambda c: c[-1] != 0 and c[0] != 0))
def test_random_polynomials_pass_all_reports(cs):
    p = P(cs)
    if not has_simple_zeros(p):
        return
    rs = find_roots(p)
    phi = builtin_test_function("cor32")
    assert energy_report(p, rs, phi).passed
    assert energy_report(p, rs, builtin_test_function("cor36"), None, S).passed
    assert et31_report(p, rs).passed
    assert thm34_report(p, rs, builtin_test_function("cor36"), S).passed
    if p.degree >= THM31_MIN_N:
        assert thm31_report(p, rs, phi).passed


# -- growth ------------------------------------------------------------------------------------


def test_growth_cyclotomic_bounded():
    rows = growth_report(parse_family("cycloprod").members(2, 40), D)
    assert [r.n for r in rows] == sorted(r.n for r in rows)
    ratios = [r.ratio for r in rows if r.ratio is not None]
    assert max(ratios) < 5


def test_growth_roots_of_unity_and_exclusion():
    rows = growth_report([FamilyMember(f"powm1:n={n}", n, power_minus_one(n), None) for n in (2, 10, 100)], D)
    for row in rows:
        assert row.log_sup_norm == pytest.approx(math.log(2), rel=1e-12)
    assert rows[-1].ratio < rows[0].ratio
    bad = growth_report([FamilyMember("(z-1)^5", 5, P([-1, 1]) ** 5, None)], D)
    assert bad[0].note.startswith("excluded") and math.isnan(bad[0].log_sup_norm)
