"""Zero statistics and both sides of the discrepancy inequalities.

Every report carries a left side measured from the computed roots, an
uncertainty for that left side, and a right side assembled from exact or
closed-form quantities. ``passed`` is ``lhs <= rhs + lhs_uncertainty``; it is
``None`` when a size threshold or class precondition is not met.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .intpoly import IntPolynomial, discriminant, discriminant_of_product, log_abs
from .mahler import log_generalized_mahler, log_mahler, sup_norm
from .potential import (
    Domain,
    Segment,
    UnitDisk,
    distance_to,
    equilibrium_mean,
    green_level_point,
    max_green_near,
)
from .rootfinder import RootSet, find_roots

__all__ = [
    "TheoremTag",
    "ZeroStats",
    "TestFunction",
    "DiscrepancyReport",
    "GrowthRow",
    "zero_stats",
    "sector_deviation",
    "erdos_turan_rhs",
    "et31_report",
    "builtin_test_function",
    "thm31_report",
    "thm34_report",
    "energy_report",
    "cor32_report",
    "cor35_report",
    "cor36_report",
    "dirichlet_integral",
    "growth_report",
    "THM31_MIN_N",
    "THM34_MIN_N",
]

THM31_MIN_N = 55
THM34_MIN_N = 25
_TWO_PI = 2.0 * math.pi


class TheoremTag(str, enum.Enum):
    ET31 = "ET31"
    THM31 = "THM31"
    THM34 = "THM34"
    THM52 = "THM52"
    THM54_SEG = "THM54_SEG"
    COR32 = "COR32"
    COR35 = "COR35"
    COR36 = "COR36"


# -- zero statistics -------------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroStats:
    n: int
    mean: complex
    mean_square: complex
    moments: tuple[complex, ...]  # moments[j] = (1/n) sum z^j, j = 0..8
    sector_edges: tuple[float, ...]
    sector_counts: tuple[int, ...]
    edge_ambiguous: int  # roots whose bin could change within their error radius


def _arguments(rs: RootSet) -> np.ndarray:
    return np.mod(np.angle(rs.roots), _TWO_PI)


def _bin_roots(rs: RootSet, edges: np.ndarray) -> tuple[np.ndarray, int]:
    """Bin indices for half-open sectors [edges[j], edges[j+1]).

    A root within its angular uncertainty of an edge is placed on the edge
    (so exact roots of unity on bin boundaries are counted once, in the bin
    they open) and counted as ambiguous unless it is exactly real.
    """
    arg = _arguments(rs)
    mod = np.abs(rs.roots)
    with np.errstate(divide="ignore", invalid="ignore"):
        tol = np.where(mod > 0, rs.radii / mod, math.pi)
    tol = np.maximum(tol, 8 * np.finfo(float).eps * _TWO_PI)
    closed = np.append(edges, _TWO_PI)
    ambiguous = 0
    for i, a in enumerate(arg):
        d = np.abs(closed - a)
        j = int(np.argmin(d))
        if d[j] <= tol[i]:
            arg[i] = closed[j] % _TWO_PI
            # roots made exactly real by conjugate pairing have exact arguments
            ambiguous += int(rs.roots[i].imag != 0)
    idx = np.searchsorted(edges, arg, side="right") - 1
    return idx, ambiguous


def zero_stats(rs: RootSet, sector_bins: int = 8) -> ZeroStats:
    n = len(rs.roots)
    if n == 0:
        raise ValueError("zero_stats needs at least one root")
    if sector_bins < 1:
        raise ValueError("sector_bins must be positive")
    z = rs.roots
    moments = [complex(1.0)]
    pw = np.ones_like(z)
    for _ in range(8):
        pw = pw * z
        moments.append(complex(np.mean(pw)))
    edges = _TWO_PI * np.arange(sector_bins) / sector_bins
    idx, amb = _bin_roots(rs, edges)
    counts = np.bincount(idx, minlength=sector_bins)
    return ZeroStats(n, moments[1], moments[2], tuple(moments), tuple(edges.tolist()), tuple(int(c) for c in counts), amb)


def sector_deviation(stats: ZeroStats) -> tuple[float, tuple[float, float]]:
    """max |N/n - (phi2 - phi1)/2pi| over arcs made of consecutive equal bins inside [0, 2pi)."""
    counts = np.array(stats.sector_counts)
    edges = list(stats.sector_edges) + [_TWO_PI]
    B = len(counts)
    best, arc = 0.0, (0.0, 0.0)
    csum = np.concatenate([[0], np.cumsum(counts)])
    for i in range(B):
        for j in range(i + 1, B + 1):
            if i == 0 and j == B:
                continue
            dev = abs((csum[j] - csum[i]) / stats.n - (j - i) / B)
            if dev > best:
                best, arc = float(dev), (edges[i], edges[j])
    return best, arc


# -- reports ------------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscrepancyReport:
    theorem: TheoremTag
    lhs: float
    lhs_uncertainty: float
    rhs: float | None
    parameters: dict = field(default_factory=dict)
    status: str = "pass"

    @property
    def passed(self) -> bool | None:
        if self.rhs is None:
            return None
        return self.lhs <= self.rhs + self.lhs_uncertainty

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem.value,
            "lhs": self.lhs,
            "lhs_uncertainty": self.lhs_uncertainty,
            "rhs": self.rhs,
            "pass": self.passed,
            "status": self.status,
            "parameters": dict(self.parameters),
        }


def _report(tag, lhs, unc, rhs, params, skipped: str | None = None) -> DiscrepancyReport:
    if skipped:
        return DiscrepancyReport(tag, float(lhs), float(unc), None, params, skipped)
    ok = lhs <= rhs + unc
    return DiscrepancyReport(tag, float(lhs), float(unc), float(rhs), params, "pass" if ok else "fail")


def _check_rs(p: IntPolynomial, rs: RootSet | None) -> RootSet:
    if rs is None:
        return find_roots(p)
    if rs.source_degree != p.degree:
        raise ValueError("root set does not match the polynomial degree")
    return rs


def erdos_turan_rhs(p: IntPolynomial, norm: float | None = None, *, log_norm: float | None = None) -> float:
    """16 sqrt((1/n) log(||p||_D / sqrt|a_0 a_n|)); pass ``log_norm`` for huge norms."""
    if p.coeffs[0] == 0:
        raise ValueError("zero constant term: divide out the power of z first")
    if log_norm is None:
        if norm is None:
            raise ValueError("need norm or log_norm")
        log_norm = math.log(norm)
    n = p.degree
    inner = (log_norm - 0.5 * (log_abs(p.coeffs[0]).value + log_abs(p.leading).value)) / n
    return 16.0 * math.sqrt(max(inner, 0.0))


def et31_report(
    p: IntPolynomial, rs: RootSet | None = None, *, sector_bins: int = 8, factors=None
) -> DiscrepancyReport:
    """Sector discrepancy against the Erdos-Turan bound on the disk.

    The norm enters through its sampled value, a lower bound on the true
    norm, so a pass here implies a pass with the exact norm.
    """
    if p.coeffs[0] == 0:
        raise ValueError("zero constant term: divide out the power of z first")
    rs = _check_rs(p, rs)
    stats = zero_stats(rs, sector_bins)
    lhs, arc = sector_deviation(stats)
    s = sup_norm(p, UnitDisk(), rs=rs, factors=factors)
    rhs = erdos_turan_rhs(p, log_norm=s.log_value)
    params = {
        "n": p.degree,
        "bins": sector_bins,
        "arc": arc,
        "log_sup_norm": s.log_value,
        "edge_ambiguous": stats.edge_ambiguous,
        "domain": "disk",
    }
    return _report(TheoremTag.ET31, lhs, stats.edge_ambiguous / p.degree, rhs, params)


# -- test functions -----------------------------------------------------------------------------


@dataclass(frozen=True)
class TestFunction:
    """A compactly supported Lipschitz function with its analytic constants.

    ``lipschitz_A`` bounds |phi(z) - phi(t)| / |z - t|; the support lies in
    the closed disk of radius ``support_radius_R`` about ``support_center``;
    ``dirichlet_bound`` bounds the integral of |grad phi|^2 over the plane.
    """

    __test__ = False  # not a pytest class

    name: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    lipschitz_A: float
    support_radius_R: float
    support_center: complex = 0j
    dirichlet_bound: float = math.inf
    modulus: Callable[[float], float] | None = None
    params: dict = field(default_factory=dict)

    def __call__(self, z):
        scalar = np.ndim(z) == 0
        out = np.asarray(self.evaluator(np.asarray(z, dtype=complex)), dtype=float)
        return float(out) if scalar else out

    def modulus_of_continuity(self, r: float) -> float:
        return self.modulus(r) if self.modulus else self.lipschitz_A * r


def _cor32(z):
    r = np.abs(z)
    with np.errstate(divide="ignore"):
        out = np.where(r <= 1, z.real, z.real * (1 - np.log(np.where(r > 0, r, 1.0))))
    return np.where(r >= math.e, 0.0, out)


def _cor35(a, b):
    def f(z):
        x, y = z.real, np.abs(z.imag)
        fy = np.clip(1 - y, 0.0, None)
        mid = x * fy
        left = a * fy * (x + 1 - a)
        right = b * fy * (b + 1 - x)
        out = np.where((x >= a) & (x <= b), mid, 0.0)
        out = np.where((x >= a - 1) & (x < a), left, out)
        out = np.where((x > b) & (x <= b + 1), right, out)
        return np.where(y <= 1, out, 0.0)

    return f


def _cor36(z):
    x, y = z.real, np.abs(z.imag)
    ax = np.abs(x)
    fy = np.clip(1 - y, 0.0, None)
    out = np.where(ax <= 2, x * x * fy, np.where(ax <= 3, 4 * fy * (3 - ax), 0.0))
    return np.where(y <= 1, out, 0.0)


def _cor33(z0: complex):
    zc = np.conj(z0)

    def f(w):
        r = np.abs(w)
        with np.errstate(divide="ignore", invalid="ignore"):
            inner = np.log(np.abs(z0 - w))
            outer = (1 - np.log(np.where(r > 0, r, 1.0))) * np.log(np.abs(1 - zc * w))
        out = np.where(r <= 1, inner, outer)
        return np.where(r >= math.e, 0.0, out)

    return f


def _cor37(z0: complex):
    def f(w):
        x, y = w.real, np.abs(w.imag)
        fy = np.clip(1 - y, 0.0, None)
        with np.errstate(divide="ignore", invalid="ignore"):
            mid = fy * np.log(np.abs(z0 - x))
        left = (x + 3) * fy * math.log(abs(z0 + 2))
        right = (3 - x) * fy * math.log(abs(z0 - 2))
        out = np.where(np.abs(x) <= 2, mid, 0.0)
        out = np.where((x >= -3) & (x < -2), left, out)
        out = np.where((x > 2) & (x <= 3), right, out)
        return np.where(y <= 1, out, 0.0)

    return f


def builtin_test_function(name: str, *, a: float | None = None, b: float | None = None,
                          z: complex | None = None, n: int | None = None) -> TestFunction:
    """The test functions behind the corollaries.

    cor32: Re z cut off by (1 - log|z|) on 1 <= |z| <= e.
    cor35(a, b): x(1-|y|) on [a,b] x [-1,1] with linear ramps of width 1.
    cor36: x^2(1-|y|) on [-2,2] x [-1,1] with ramps to |x| = 3.
    cor33(z or n): log|z - w| inside the unit disk, with |z| = 1 + 1/n.
    cor37(z or n): (1-|y|) log|z - x| on the strip, z on {g_[-2,2] = 1/n}.

    cor33 and cor37 only have O-bounds in their original constructions; the
    constants here are explicit bounds from the triangle inequality on the
    gradient (see the comments in each branch).
    """
    key = name.lower()
    if key == "cor32":
        A, R = math.sqrt(5) / 2, math.e
        return TestFunction("cor32", _cor32, A, R, 0j, 2 * math.pi * R * R * A * A)
    if key == "cor35":
        if a is None or b is None:
            a, b = 0.0, 4.0
        a, b = float(a), float(b)
        if abs(b - a - 4) > 1e-12:
            raise ValueError("cor35 needs b - a = 4")
        m = max(abs(a), abs(b))
        # supported on [a-1, b+1] x [-1, 1]: half-diagonal sqrt(3^2 + 1)
        return TestFunction(
            "cor35", _cor35(a, b), math.sqrt(2) * m, math.sqrt(10), complex(a + 2), 24 * m * m, params={"a": a, "b": b}
        )
    if key == "cor36":
        return TestFunction("cor36", _cor36, 4 * math.sqrt(2), math.sqrt(10), 0j, 384.0)
    if key == "cor33":
        if z is None:
            if n is None:
                raise ValueError("cor33 needs z or n")
            z = 1 + 1 / n
        z = complex(z)
        if not abs(z) > 1:
            raise ValueError("cor33 needs |z| > 1")
        n_eff = 1 / (abs(z) - 1)
        L = max(math.log(n_eff), math.log(1 + math.e * abs(z)))
        # inside: |grad| = 1/|z-w| <= n; annulus: |log|1-zw|| + |z|/|1-zw| with |1-zw| >= |z|-1
        A = max(n_eff, L + abs(z) * n_eff)
        # disk: int 1/|z-w|^2 <= 2pi log(1 + 2n); annulus: 2L^2 area + 2|z|^2 int 1/|1-zw|^2
        dist = 1 - 1 / abs(z)
        D = 2 * math.pi * math.log(1 + 2 * n_eff) + 2 * L * L * math.pi * (math.e ** 2 - 1)
        D += 4 * math.pi * math.log((math.e + 1) / dist)
        return TestFunction("cor33", _cor33(z), A, math.e, 0j, D, params={"z": z})
    if key == "cor37":
        S = Segment(-2, 2)
        if z is None:
            if n is None:
                raise ValueError("cor37 needs z or n")
            z = green_level_point(S, 1 / n)
        z = complex(z)
        d = distance_to(S, z)
        if not d > 0:
            raise ValueError("cor37 needs z off the segment")
        L = max(abs(math.log(d)), abs(math.log(abs(z) + 2)), abs(math.log(abs(z - 2))), abs(math.log(abs(z + 2))))
        A = max(math.hypot(1 / d, L), math.sqrt(2) * L)
        if z.imag == 0:
            I = 1 / d
        else:
            I = min(4 / d ** 2, math.pi / abs(z.imag))
        # middle: (2/3) int dx/|z-x|^2 + 8 L^2; ramps: 2 x (2 L^2 x area 2)
        D = (2 / 3) * I + 16 * L * L
        return TestFunction("cor37", _cor37(z), A, math.sqrt(10), 0j, D, params={"z": z})
    raise ValueError(f"unknown test function {name!r}; expected cor32, cor33, cor35, cor36 or cor37")


def dirichlet_integral(phi: TestFunction, grid_step: float = 0.01) -> float:
    """Central-difference estimate of the integral of |grad phi|^2 over a box holding the support."""
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    R = phi.support_radius_R + 2 * grid_step
    c = phi.support_center
    k = int(math.ceil(R / grid_step))
    xs = c.real + grid_step * np.arange(-k, k + 1)
    ys = c.imag + grid_step * np.arange(-k, k + 1)
    total = 0.0
    h = grid_step
    for y in ys:
        row = xs + 1j * y
        fx = (phi(row + h / 2) - phi(row - h / 2)) / h
        fy = (phi(row + 0.5j * h) - phi(row - 0.5j * h)) / h
        total += float(np.sum(fx * fx + fy * fy))
    return total * h * h


# -- averages against the roots ------------------------------------------------------------


def _root_average(phi: TestFunction, rs: RootSet) -> tuple[float, float]:
    vals = phi(rs.roots)
    return float(np.mean(vals)), phi.lipschitz_A * float(np.mean(rs.radii))


def _phi_lhs(phi: TestFunction, rs: RootSet, E: Domain) -> tuple[float, float, float]:
    avg, unc = _root_average(phi, rs)
    mu = equilibrium_mean(E, phi)
    return abs(avg - mu), unc + 1e-12 * max(1.0, abs(mu)), mu


def _check_support(phi: TestFunction, center: complex):
    if abs(phi.support_center - center) > 1e-12:
        raise ValueError(f"test function must be centred at {center}, got {phi.support_center}")


def thm31_report(p: IntPolynomial, rs: RootSet | None, phi: TestFunction) -> DiscrepancyReport:
    rs = _check_rs(p, rs)
    _check_support(phi, 0j)
    n = p.degree
    lhs, unc, mu = _phi_lhs(phi, rs, UnitDisk())
    lm = log_mahler(p, rs)
    params = {"n": n, "M": math.exp(min(lm, 700)), "log_M": lm, "A": phi.lipschitz_A, "R": phi.support_radius_R,
              "phi": phi.name, "domain": "disk"}
    if n < THM31_MIN_N:
        return _report(TheoremTag.THM31, lhs, unc, None, params, "threshold not met")
    rhs = phi.lipschitz_A * (2 * phi.support_radius_R + 1) * math.sqrt(max(math.log(n), lm) / n)
    return _report(TheoremTag.THM31, lhs, unc, rhs, params)


def thm34_report(p: IntPolynomial, rs: RootSet | None, phi: TestFunction, E: Segment) -> DiscrepancyReport:
    if not isinstance(E, Segment):
        raise ValueError("thm34 needs a segment")
    rs = _check_rs(p, rs)
    _check_support(phi, complex(E.a + 2))
    n = p.degree
    lhs, unc, mu = _phi_lhs(phi, rs, E)
    lme = log_generalized_mahler(p, rs, E)
    params = {"n": n, "M": math.exp(min(lme, 700)), "log_M": lme, "A": phi.lipschitz_A, "R": phi.support_radius_R,
              "phi": phi.name, "domain": E.describe()}
    if n < THM34_MIN_N:
        return _report(TheoremTag.THM34, lhs, unc, None, params, "threshold not met")
    rhs = phi.lipschitz_A * (3 * phi.support_radius_R + 1) * math.sqrt(max(math.log(n), lme) / n)
    return _report(TheoremTag.THM34, lhs, unc, rhs, params)


def _log_an2_disc(p: IntPolynomial, factors: Sequence[IntPolynomial] | None) -> float:
    if p.degree == 1:
        disc = 1
    elif factors is not None and len(factors) > 1:
        disc = discriminant_of_product(list(factors))
    else:
        disc = discriminant(p)
    if disc == 0:
        raise ValueError("multiple zeros: energy bound inapplicable")
    return 2 * log_abs(p.leading).value + log_abs(disc).value


def energy_report(
    p: IntPolynomial,
    rs: RootSet | None,
    phi: TestFunction,
    r: float | None = None,
    E: Domain = UnitDisk(),
    *,
    factors: Sequence[IntPolynomial] | None = None,
) -> DiscrepancyReport:
    """The energy estimate with every term of the right side recorded.

    Disk (and disk plus points, whose equilibrium measure is the disk's):
    omega(r) + sqrt(D/2pi) sqrt(2/n log M - log|a_n^2 Disc|/n^2 - log r/n + 4r).
    Segment: log M_E in place of log M and 2 max_{d_E <= 2r} g_E in place of 4r.
    Defaults: r = 1/n on the disk, r = n^-2 on a segment.
    """
    rs = _check_rs(p, rs)
    n = p.degree
    seg = isinstance(E, Segment)
    if r is None:
        r = 1 / n ** 2 if seg else 1 / n
    if not r > 0:
        raise ValueError("r must be positive")
    log_disc = _log_an2_disc(p, factors)
    lhs, unc, mu = _phi_lhs(phi, rs, E)
    if seg:
        log_m = log_generalized_mahler(p, rs, E)
        edge = 2 * max_green_near(E, 2 * r)
        tag = TheoremTag.THM54_SEG
    else:
        log_m = log_mahler(p, rs)
        edge = 4 * r
        tag = TheoremTag.THM52
    energy = 2 * log_m / n - log_disc / n ** 2 - math.log(r) / n + edge
    omega = phi.modulus_of_continuity(r)
    rhs = omega + math.sqrt(phi.dirichlet_bound / _TWO_PI) * math.sqrt(max(energy, 0.0))
    params = {
        "n": n,
        "r": r,
        "A": phi.lipschitz_A,
        "R": phi.support_radius_R,
        "phi": phi.name,
        "domain": E.describe(),
        "log_M": log_m,
        "log_an2_disc": log_disc,
        "omega": omega,
        "edge_term": edge,
        "energy": energy,
        "dirichlet_bound": phi.dirichlet_bound,
        "integral": mu,
    }
    return _report(tag, lhs, unc, rhs, params)


# -- corollaries ----------------------------------------------------------------------------


def _class_check(p: IntPolynomial, rs: RootSet, E: Domain, floor: int) -> tuple[str | None, int]:
    n = p.degree
    M = abs(p.leading)
    if np.any(distance_to(E, rs.roots) > rs.radii):
        return "precondition not met: zeros outside E", M
    if n < max(M, floor):
        return "threshold not met", M
    return None, M


def cor32_report(p: IntPolynomial, rs: RootSet | None = None) -> DiscrepancyReport:
    """|A_n| <= 8 sqrt(log n / n) for zeros in the disk, n >= max(|a_n|, 55)."""
    rs = _check_rs(p, rs)
    n = p.degree
    lhs = abs(complex(np.mean(rs.roots)))
    unc = float(np.mean(rs.radii))
    skip, M = _class_check(p, rs, UnitDisk(), THM31_MIN_N)
    params = {"n": n, "M": M, "domain": "disk"}
    return _report(TheoremTag.COR32, lhs, unc, 8 * math.sqrt(math.log(n) / n), params, skip)


def cor35_report(p: IntPolynomial, rs: RootSet | None, E: Segment) -> DiscrepancyReport:
    """|A_n - (a+b)/2| <= 6 max(|a|,|b|) sqrt(log n / n) for zeros in [a, b], n >= max(|a_n|, 25)."""
    rs = _check_rs(p, rs)
    n = p.degree
    lhs = abs(complex(np.mean(rs.roots)) - E.center)
    unc = float(np.mean(rs.radii))
    skip, M = _class_check(p, rs, E, THM34_MIN_N)
    m = max(abs(E.a), abs(E.b))
    params = {"n": n, "M": M, "domain": E.describe()}
    return _report(TheoremTag.COR35, lhs, unc, 6 * m * math.sqrt(math.log(n) / n), params, skip)


def cor36_report(p: IntPolynomial, rs: RootSet | None = None) -> DiscrepancyReport:
    """|S_n - 2| <= 24 sqrt(log n / n) for zeros in [-2, 2], n >= max(|a_n|, 25)."""
    rs = _check_rs(p, rs)
    n = p.degree
    z = rs.roots
    lhs = abs(complex(np.mean(z * z)) - 2)
    unc = float(np.mean(2 * np.abs(z) * rs.radii + rs.radii ** 2))
    E = Segment(-2, 2)
    skip, M = _class_check(p, rs, E, THM34_MIN_N)
    params = {"n": n, "M": M, "domain": E.describe()}
    return _report(TheoremTag.COR36, lhs, unc, 24 * math.sqrt(math.log(n) / n), params, skip)


# -- growth -------------------------------------------------------------------------------------


@dataclass(frozen=True)
class GrowthRow:
    label: str
    n: int
    log_sup_norm: float
    ratio: float | None  # log||P|| / (sqrt(n) log n); None at n = 1
    note: str = ""


def growth_report(members, E: Domain) -> list[GrowthRow]:
    """One row per family member with simple zeros; members with repeated
    zeros are listed with a note and no value."""
    from .intpoly import has_simple_zeros

    rows = []
    for m in members:
        p = m.poly
        n = p.degree
        simple = has_simple_zeros(p) if m.factors is None else _factors_simple(m.factors)
        if not simple:
            rows.append(GrowthRow(m.label, n, math.nan, None, "excluded: multiple zeros"))
            continue
        s = sup_norm(p, E, factors=m.factors)
        ratio = s.log_value / (math.sqrt(n) * math.log(n)) if n > 1 else None
        rows.append(GrowthRow(m.label, n, s.log_value, ratio))
    return rows


def _factors_simple(factors) -> bool:
    from .intpoly import has_simple_zeros

    return len(set(factors)) == len(factors) and all(has_simple_zeros(f) for f in factors if f.degree > 1)
