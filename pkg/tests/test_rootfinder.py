import math
import random

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equidist.families import (
    chebyshev_t,
    cyclotomic_product,
    cyclotomic_product_factors,
    power_minus_one,
    shift,
    totally_positive_minpoly,
)
from equidist.intpoly import IntPolynomial as P, has_simple_zeros, parse_polynomial
from equidist.rootfinder import RootFindingError, RootSet, find_roots, joukowski_lift, root_residual


def corpus():
    out = [(f"cyclo{k}", cyclotomic_product(k)) for k in (3, 8, 15, 22)]
    out += [(f"cheb{n}", chebyshev_t(n)) for n in (2, 7, 25, 60, 101, 200)]
    out += [(f"scheb{n}", shift(chebyshev_t(n), 2)) for n in (10, 57)]
    out += [(f"trace{p}", totally_positive_minpoly(p)) for p in (5, 31, 97, 199)]
    out += [(f"powm1_{n}", power_minus_one(n)) for n in (1, 2, 33, 128)]
    return out


CORPUS = corpus()


def reconstruct_error(p, roots):
    """max_k |coef_k(a_n prod(z - z_i)) - a_k| / max|a_k|, expanded at 60 digits."""
    with mpmath.workdps(60):
        c = [mpmath.mpc(1)]
        for z in roots:
            z = mpmath.mpc(z)
            nxt = [mpmath.mpc(0)] * (len(c) + 1)
            for i, v in enumerate(c):
                nxt[i + 1] += v
                nxt[i] -= z * v
            c = nxt
        an = p.leading
        scale = max(abs(a) for a in p.coeffs)
        return max(float(abs(an * ck - ak)) for ck, ak in zip(c, p.coeffs)) / scale


# -- examples ------------------------------------------------------------------------


def test_z2_plus_1():
    rs = find_roots(parse_polynomial("z^2+1"))
    assert np.allclose(rs.roots, [-1j, 1j], atol=1e-15)
    assert rs.max_radius <= 1e-14


def test_cyclotomic_product_k3_sorted():
    rs = find_roots(parse_polynomial("z^4+z^3-z-1"))
    w = np.exp(2j * math.pi / 3)
    assert np.allclose(rs.roots, [-1, np.conj(w), w, 1], atol=1e-14)


def test_quadratic_formula():
    rs = find_roots(parse_polynomial("x^2-3x+1"))
    assert np.allclose(rs.roots, [(3 - math.sqrt(5)) / 2, (3 + math.sqrt(5)) / 2], rtol=0, atol=1e-15)


def test_linear_exact():
    rs = find_roots(P([-7, 2]))
    assert rs.roots[0] == 3.5 and rs.radii[0] == 0.0


def test_degree_zero_rejected():
    with pytest.raises(ValueError):
        find_roots(P([5]))
    with pytest.raises(ValueError):
        find_roots(P([]))


def test_repeated_zero_rejected():
    with pytest.raises(ValueError):
        find_roots(P.from_roots([2, 2, 3]))
    with pytest.raises(ValueError):
        find_roots(P([0, 0, 1, 1]))


def test_zero_root():
    rs = find_roots(parse_polynomial("z^3-z"))
    assert np.allclose(rs.roots, [-1, 0, 1])
    assert rs.roots[1] == 0


def test_non_convergence_reports_worst_residual():
    with pytest.raises(RootFindingError) as info:
        find_roots(chebyshev_t(40), max_sweeps=1, basis="monomial")
    assert info.value.worst_residual > 1e-10


def test_rootset_is_immutable():
    rs = find_roots(P([-2, 0, 1]))
    with pytest.raises(ValueError):
        rs.roots[0] = 0
    with pytest.raises(ValueError):
        RootSet(np.zeros(2), np.zeros(1), 2)


# -- root_residual -------------------------------------------------------------------


def test_root_residual_examples():
    assert root_residual(P([-2, 0, 1]), math.sqrt(2)) <= 1e-15
    assert root_residual(P([-2, 0, 1]), 1.5) == pytest.approx(2 * 0.25 / 3.0, rel=1e-14)
    assert root_residual(P([-5, 1]), 5.1) == pytest.approx(0.1, rel=1e-12)


def test_root_residual_derivative_vanishes():
    with pytest.raises(ZeroDivisionError, match="derivative vanishes"):
        root_residual(P([1, 0, 1]), 0.0)


# -- invariants over the family corpus ---------------------------------------------------


@pytest.mark.parametrize("name,p", CORPUS, ids=[c[0] for c in CORPUS])
def test_corpus_invariants(name, p):
    rs = find_roots(p)
    n = p.degree
    assert len(rs.roots) == n == rs.source_degree
    assert rs.max_radius <= 1e-10
    # sorted by (re, im)
    keys = list(zip(rs.roots.real, rs.roots.imag))
    assert keys == sorted(keys)
    # conjugate-closed, entrywise after re-sorting
    conj = np.conj(rs.roots)
    order = np.lexsort((conj.imag, conj.real))
    assert np.array_equal(conj[order], rs.roots)
    # the reported radius is n|p/p'| plus the evaluation error bound
    for i in np.argsort(rs.radii)[-3:]:
        assert root_residual(p, rs.roots[i]) <= rs.radii[i] * (1 + 1e-9)
    # Vieta
    an = p.leading
    s = -p.coeffs[-2] / an if n >= 1 and len(p.coeffs) > 1 else 0.0
    assert abs(rs.roots.sum() - s) <= 1e-9 * max(1.0, np.abs(rs.roots).sum())
    prod = np.prod(rs.roots)
    expect = (-1) ** n * p.coeffs[0] / an
    assert abs(prod - expect) <= 1e-9 * max(1.0, abs(expect))
    if n <= 200:
        assert reconstruct_error(p, rs.roots) <= 1e-8


@pytest.mark.parametrize("k", [5, 20, 40, 60])
def test_cyclotomic_roots_on_circle(k):
    p = cyclotomic_product(k)
    rs = find_roots(p, factors=cyclotomic_product_factors(k))
    with mpmath.workdps(40):
        mods = np.array([float(abs(mpmath.mpc(z)) - 1) for z in rs.roots])
        assert np.all(np.abs(mods) <= rs.radii)
        exact = [
            mpmath.expjpi(mpmath.mpf(2 * j) / d) for d in range(1, k + 1) for j in range(d) if math.gcd(j, d) == 1
        ]
        approx = np.array([complex(e) for e in exact])
        nearest = np.abs(rs.roots[:, None] - approx[None, :]).argmin(axis=1)
        assert np.all(mp_distance(rs.roots, [exact[i] for i in nearest]) <= rs.radii)


def test_factored_matches_plain():
    k = 20
    a = find_roots(cyclotomic_product(k))
    b = find_roots(cyclotomic_product(k), factors=cyclotomic_product_factors(k))
    assert np.allclose(a.roots, b.roots, atol=1e-12)
    assert b.method == "factored"


def test_wrong_factors_rejected():
    with pytest.raises(ValueError):
        find_roots(cyclotomic_product(4), factors=cyclotomic_product_factors(3))
    with pytest.raises(ValueError):
        find_roots(P([1, 0, 1]), factors=[P([1, 1]), P([1, 1])])


def mp_distance(computed, exact):
    return np.array([float(abs(mpmath.mpc(z) - e)) for z, e in zip(computed, exact)])


def test_radii_contain_true_roots():
    with mpmath.workdps(40):
        for n in (25, 250):
            rs = find_roots(chebyshev_t(n))
            exact = sorted(2 * mpmath.cos((2 * k - 1) * mpmath.pi / (2 * n)) for k in range(1, n + 1))
            assert np.all(mp_distance(rs.roots, exact) <= rs.radii + 1e-30)
        p = 31
        rs = find_roots(totally_positive_minpoly(p))
        exact = sorted(4 * mpmath.cos(k * mpmath.pi / p) ** 2 for k in range(1, (p - 1) // 2 + 1))
        assert np.all(mp_distance(rs.roots, exact) <= rs.radii + 1e-30)


def test_joukowski_lift_identities():
    assert joukowski_lift(chebyshev_t(5), 0) == P([1] + [0] * 9 + [1])
    # trace family lifts to the cyclotomic Phi_p
    assert joukowski_lift(totally_positive_minpoly(11), 2) == P([1] * 11)


def test_bases_agree():
    p = shift(chebyshev_t(20), 2)
    a = find_roots(p, basis="monomial")
    b = find_roots(p, basis="joukowski")
    assert b.method == "joukowski"
    assert np.allclose(a.roots, b.roots, atol=1e-11)


def test_large_degree():
    rs = find_roots(chebyshev_t(1200))
    assert rs.max_radius <= 1e-10
    rs = find_roots(power_minus_one(1500))
    assert np.allclose(np.abs(rs.roots), 1.0, atol=1e-12)


def test_deterministic():
    p = cyclotomic_product(12)
    a, b = find_roots(p, seed=3), find_roots(p, seed=3)
    assert np.array_equal(a.roots, b.roots) and np.array_equal(a.radii, b.radii)
    c = find_roots(p, seed=99)
    assert np.allclose(a.roots, c.roots, atol=1e-12)


def test_wilkinson():
    # badly conditioned: needs the extended tiers
    p = P.from_roots(list(range(1, 31)))
    rs = find_roots(p)
    assert np.allclose(rs.roots.real, np.arange(1, 31), atol=1e-9)


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.integers(-1000, 1000), min_size=2, max_size=30).filter(lambda c: c[-1] != 0),
)
def test_random_polynomials(cs):
    p = P(cs)
    if p.degree < 1 or not has_simple_zeros(p):
        return
    rs = find_roots(p)
    assert rs.max_radius <= 1e-10
    assert reconstruct_error(p, rs.roots) <= 1e-8
    conj = np.conj(rs.roots)
    order = np.lexsort((conj.imag, conj.real))
    assert np.array_equal(conj[order], rs.roots)


def test_random_big_coefficients():
    rng = random.Random(8)
    for _ in range(30):
        n = rng.randint(2, 40)
        cs = [rng.randint(-(10 ** 30), 10 ** 30) for _ in range(n)] + [rng.randint(1, 10 ** 30)]
        p = P(cs)
        if not has_simple_zeros(p):
            continue
        rs = find_roots(p)
        assert reconstruct_error(p, rs.roots) <= 1e-8


# -- sparse lifts and double-double evaluation ----------------------------------------


@pytest.mark.parametrize("n", [3, 31, 201, 991])
def test_odd_chebyshev_zero_root_exact(n):
    rs = find_roots(chebyshev_t(n))
    if n > 3:
        assert rs.method == "joukowski"
    k = int(np.argmin(np.abs(rs.roots)))
    assert rs.roots[k] == 0 and rs.radii[k] == 0
    ref = np.sort(2 * np.cos((2 * np.arange(1, n + 1) - 1) * np.pi / (2 * n)))
    assert np.max(np.abs(np.sort(rs.roots.real) - ref)) <= np.max(rs.radii) + 1e-15


def test_zero_root_at_lift_endpoint_keeps_deflation():
    # z (z - 4) on [0, 4]: 0 is an endpoint, where the lift would have a double root
    rs = find_roots(P([0, -4, 1]), basis="joukowski")
    assert sorted(rs.roots.real) == [0.0, 4.0]


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.integers(-9, 9), min_size=2, max_size=70).filter(lambda c: c[0] != 0),
    st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False),
    st.floats(0.0, 1.0),
)
def test_horner_dd_matches_mpmath(c, z, density):
    from equidist import _dd

    # thin the coefficients to create long zero runs
    rnd = random.Random(len(c))
    c = [c[0]] + [a if rnd.random() < density else 0 for a in c[1:]]
    hi = np.array([float(a) for a in c])
    p, d = _dd.horner_dd(hi, np.zeros(len(c)), np.array([z]))
    with mpmath.workdps(50):
        Z = mpmath.mpc(z)
        ref_p = mpmath.polyval(c, Z)
        ref_d = mpmath.polyval([a * (len(c) - 1 - i) for i, a in enumerate(c)][:-1], Z)
    s = sum(abs(a) * abs(z) ** (len(c) - 1 - i) for i, a in enumerate(c))
    assert abs(p[0] - complex(ref_p)) <= 2.3e-16 * abs(complex(ref_p)) + 1e-28 * s
    assert abs(d[0] - complex(ref_d)) <= 2.3e-16 * abs(complex(ref_d)) + 1e-28 * s * len(c)
