"""Mahler measure, its generalisations to capacity-one sets, and sup-norms.

All products are accumulated as sums of logarithms, so the ``log_*``
functions never overflow; the plain versions exponentiate at the end and
may return ``inf`` for very large values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .intpoly import IntPolynomial, log_abs
from .potential import (
    DiskPlusPoints,
    Domain,
    QuadratureError,
    Segment,
    distance_to,
    equilibrium_mean,
    green,
    support_distance,
)
from .rootfinder import RootSet, find_roots, joukowski_lift

__all__ = [
    "SupNorm",
    "MeasureReport",
    "log_mahler",
    "mahler_measure",
    "mahler_of_product",
    "log_generalized_mahler",
    "generalized_mahler",
    "log_tilde_mahler",
    "tilde_mahler",
    "tilde_quadrature",
    "height",
    "sup_norm",
    "log_abs_values",
    "limit_diagnostics",
    "measure_report",
]

_U = 2.0 ** -53


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _roots(p: IntPolynomial, rs: RootSet | None) -> RootSet:
    if rs is None:
        return find_roots(p)
    if rs.source_degree != p.degree:
        raise ValueError("root set does not match the polynomial degree")
    return rs


# -- Mahler measures ---------------------------------------------------------------------


def log_mahler(p: IntPolynomial, rs: RootSet | None = None) -> float:
    rs = _roots(p, rs)
    return log_abs(p.leading).value + float(np.sum(np.log(np.maximum(1.0, np.abs(rs.roots)))))


def mahler_measure(p: IntPolynomial, rs: RootSet | None = None) -> float:
    """|a_n| prod max(1, |z_k|) with the moduli used as computed."""
    return _exp(log_mahler(p, rs))


def mahler_of_product(parts: Sequence[tuple[IntPolynomial, int]]) -> float:
    """M(prod f_i^{e_i}) = prod M(f_i)^{e_i}; handles repeated factors such as (z-1)^n."""
    return _exp(sum(e * log_mahler(f) for f, e in parts))


def _omega_mask(E: Domain, rs: RootSet) -> np.ndarray:
    """Roots farther from E than their error radius."""
    return distance_to(E, rs.roots) > rs.radii


def log_generalized_mahler(p: IntPolynomial, rs: RootSet | None, E: Domain) -> float:
    rs = _roots(p, rs)
    mask = _omega_mask(E, rs)
    return log_abs(p.leading).value + float(np.sum(green(E, rs.roots[mask])))


def generalized_mahler(p: IntPolynomial, rs: RootSet | None, E: Domain) -> float:
    """M_E = |a_n| exp(sum of g_E over roots in the unbounded complement)."""
    return _exp(log_generalized_mahler(p, rs, E))


def log_tilde_mahler(p: IntPolynomial, rs: RootSet | None, E: Domain) -> float:
    rs = _roots(p, rs)
    return log_abs(p.leading).value + float(np.sum(green(E, rs.roots)))


def tilde_mahler(p: IntPolynomial, rs: RootSet | None, E: Domain) -> float:
    """exp(log|a_n| + sum of the extended g_E over all roots)."""
    return _exp(log_tilde_mahler(p, rs, E))


def height(p: IntPolynomial, rs: RootSet | None = None) -> float:
    if p.degree < 1:
        raise ValueError("height needs degree >= 1")
    return log_mahler(p, rs) / p.degree


# -- evaluation of log|p| -------------------------------------------------------------------


def _scaled(coeffs: Sequence[int]) -> tuple[np.ndarray, float]:
    """Coefficients divided by 2^shift so the largest is below 1, plus log(2^shift)."""
    shift = max(abs(c).bit_length() for c in coeffs)
    out = np.empty(len(coeffs))
    for i, c in enumerate(coeffs):
        drop = max(0, abs(c).bit_length() - 60)
        out[i] = math.ldexp(float(c >> drop if c >= 0 else -((-c) >> drop)), drop - shift)
    return out, shift * math.log(2.0)


def _horner_log(coeffs: Sequence[int], x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """log|p(x)| in double with a relative error estimate per point."""
    f, log_scale = _scaled(coeffs)
    f = f[::-1]
    acc = np.full(x.shape, f[0], dtype=complex)
    bound = np.full(x.shape, abs(f[0]))
    ax = np.abs(x)
    for c in f[1:]:
        acc = acc * x + c
        bound = bound * ax + abs(c)
    n = len(coeffs) - 1
    with np.errstate(divide="ignore"):
        val = np.log(np.abs(acc)) + log_scale
        rel = (4 * n + 4) * _U * bound / np.abs(acc)
    return val, rel


def _roots_log(p: IntPolynomial, rs: RootSet, x: np.ndarray) -> np.ndarray:
    out = np.full(x.shape, log_abs(p.leading).value)
    step = max(1, 2_000_000 // max(1, len(rs.roots)))
    for i in range(0, len(x), step):
        chunk = x[i:i + step]
        with np.errstate(divide="ignore"):
            out[i:i + step] += np.sum(np.log(np.abs(chunk[:, None] - rs.roots[None, :])), axis=1)
    return out


def log_abs_values(
    p: IntPolynomial,
    x: np.ndarray,
    *,
    rs: RootSet | None = None,
    factors: Sequence[IntPolynomial] | None = None,
    tol: float = 1e-10,
) -> tuple[np.ndarray, str]:
    """log|p(x)| at arbitrary points, choosing the cheapest reliable route.

    Plain double Horner is used where its rounding bound is below ``tol``;
    otherwise the factor list (each factor is well conditioned) or the
    root product a_n prod(x - z_k) takes over.
    """
    x = np.asarray(x, dtype=complex)
    val, rel = _horner_log(p.coeffs, x)
    bad = ~(rel <= tol)
    if not bad.any():
        return val, "horner"
    if factors is not None:
        fx = x[bad]
        acc = np.zeros(fx.shape)
        ok = True
        for f in factors:
            v, r = _horner_log(f.coeffs, fx)
            acc += v
            ok = ok and bool(np.all(r <= tol))
        if ok:
            val[bad] = acc
            return val, "factors"
    rs = _roots(p, rs)
    val[bad] = _roots_log(p, rs, x[bad])
    return val, "roots"


# -- sup-norm ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class SupNorm:
    """Sampled maximum of |p| on E.

    ``log_value`` is the log of an attained value (a lower bound for the
    norm up to evaluation error); ``log_upper`` is a Bernstein-type upper
    bound from the grid spacing. ``gap = upper - value``.
    """

    log_value: float
    log_upper: float
    argmax: complex
    method: str
    nodes: int

    @property
    def value(self) -> float:
        return _exp(self.log_value)

    @property
    def upper(self) -> float:
        return _exp(self.log_upper)

    @property
    def gap(self) -> float:
        if not math.isfinite(self.upper):
            return math.inf
        return self.upper - self.value

    @property
    def relative_gap(self) -> float:
        return math.expm1(self.log_upper - self.log_value)


def _grid_log(coeffs: Sequence[int], m: int) -> tuple[np.ndarray, float]:
    """log|q(e^{2 pi i j/m})| for j < m by FFT, with a global relative error bound."""
    f, log_scale = _scaled(coeffs)
    if len(f) > m:
        folded = np.zeros(m)
        for start in range(0, len(f), m):
            chunk = f[start:start + m]
            folded[: len(chunk)] += chunk
        f = folded
    vals = np.fft.ifft(f, m) * m
    err = 8 * math.log2(m) * _U * float(np.sum(np.abs(f)))
    mag = np.abs(vals)
    with np.errstate(divide="ignore"):
        logs = np.log(mag) + log_scale
    top = float(mag.max())
    rel = err / top if top > 0 else math.inf
    return logs, rel


def _trig_view(p: IntPolynomial, E: Domain, factors):
    """Coefficient lists whose values on the unit circle give |p| on supp or boundary of E.

    For a segment [c-2, c+2], |p(c + 2cos t)| = |q(e^{it})| with q the
    Joukowski lift; for the disk it is p itself.
    """
    if isinstance(E, Segment):
        c = E.integer_center
        if c is None:
            return None
        base = [joukowski_lift(f, c) for f in factors] if factors else None
        return joukowski_lift(p, c), base
    return p, list(factors) if factors else None


def _point_of(E: Domain, theta):
    if isinstance(E, Segment):
        return E.center + 2.0 * np.cos(theta)
    return np.exp(1j * np.asarray(theta))


def sup_norm(
    p: IntPolynomial,
    E: Domain,
    *,
    rs: RootSet | None = None,
    factors: Sequence[IntPolynomial] | None = None,
    nodes: int | None = None,
    refine: int = 16,
) -> SupNorm:
    """Approximate max of |p| over E by boundary sampling plus refinement.

    The maximum principle reduces the disk to its boundary circle. Values
    on ``m = max(4096, 64 n)`` equispaced angles come from one FFT; the
    ``refine`` largest local maxima are then moved to the vertex of a
    parabola through three neighbouring samples and re-evaluated. The upper
    bound uses that p on the circle (or p(c + 2cos t)) is a trigonometric
    polynomial T of degree n, so |T|'' <= n^2 ||T|| at a maximum and
    ||T|| <= max_grid / (1 - (n pi / m)^2 / 2).
    """
    n = p.degree
    if n < 0:
        raise ValueError("sup-norm of the zero polynomial")
    if n == 0:
        lv = log_abs(p.coeffs[0]).value
        return SupNorm(lv, lv, complex(_point_of(E, 0.0)), "constant", 0)
    m = nodes or max(4096, 64 * n)
    m = 1 << (m - 1).bit_length()
    theta = 2.0 * math.pi * np.arange(m) / m
    view = _trig_view(p, E, factors)
    method = None
    logs = None
    rel = math.inf
    if view is not None:
        q, qf = view
        logs, rel = _grid_log(q.coeffs, m)
        method = "fft"
        if rel > 1e-8 and qf:
            parts = [_grid_log(f.coeffs, m) for f in qf]
            rel_f = sum(r for _, r in parts)
            if rel_f < rel:
                logs = np.sum([lg for lg, _ in parts], axis=0)
                rel, method = rel_f, "fft-factors"
    if logs is None or rel > 1e-8:
        x = _point_of(E, theta)
        logs, how = log_abs_values(p, x, rs=rs, factors=factors)
        rel = 1e-10
        method = f"grid-{how}"

    best = int(np.argmax(logs))
    log_best = float(logs[best])
    theta_best = float(theta[best])
    grid_max = log_best
    # parabolic refinement around the largest local maxima
    h = n * math.pi / m
    inflate = -math.log1p(-0.5 * h * h) + math.log1p(rel)
    left, right = np.roll(logs, 1), np.roll(logs, -1)
    # only peaks whose Bernstein envelope reaches the grid maximum can beat it
    peaks = np.flatnonzero((logs >= left) & (logs >= right) & (logs + inflate >= grid_max))
    peaks = peaks[np.argsort(logs[peaks])[::-1][:refine]]
    if len(peaks):
        l0, l1, l2 = left[peaks], logs[peaks], right[peaks]
        denom = l0 - 2 * l1 + l2
        with np.errstate(divide="ignore", invalid="ignore"):
            delta = np.where(denom < 0, 0.5 * (l0 - l2) / denom, 0.0)
        delta = np.clip(np.nan_to_num(delta), -0.5, 0.5)
        t_ref = theta[peaks] + delta * (2.0 * math.pi / m)
        ref_logs = _refine_values(p, E, view, t_ref, rs, factors)
        k = int(np.argmax(ref_logs))
        if ref_logs[k] > log_best:
            log_best, theta_best = float(ref_logs[k]), float(t_ref[k])
    argmax = complex(_point_of(E, theta_best))

    log_upper = grid_max + inflate
    log_upper = max(log_upper, log_best)

    if isinstance(E, DiskPlusPoints):
        for pt in E.points:
            lv = _log_abs_at(p, pt, rs)
            if lv > log_best:
                log_best, argmax = lv, pt
            log_upper = max(log_upper, lv)
    return SupNorm(log_best, log_upper, argmax, method, m)


def _refine_values(p, E, view, t, rs, factors) -> np.ndarray:
    """log|p| at angles t, via the unit-circle representation when it is well conditioned."""
    u = np.exp(1j * t)
    if view is not None:
        q, qf = view
        val, rel = _horner_log(q.coeffs, u)
        if np.all(rel <= 1e-10):
            return val
        if qf:
            parts = [_horner_log(f.coeffs, u) for f in qf]
            rel_f = np.sum([r for _, r in parts], axis=0)
            if np.all(rel_f <= 1e-10):
                return np.sum([v for v, _ in parts], axis=0)
    try:
        val, _ = log_abs_values(p, _point_of(E, t), rs=rs, factors=factors)
        return val
    except ValueError:
        # repeated zeros and no usable factors: keep only points Horner resolves
        val, rel = _horner_log(p.coeffs, _point_of(E, t))
        return np.where(rel <= 1e-10, val, -np.inf)


def _log_abs_at(p: IntPolynomial, z: complex, rs: RootSet | None) -> float:
    """log|p(z)|, exact for Gaussian-integer z."""
    if float(z.real).is_integer() and float(z.imag).is_integer():
        zr, zi = int(z.real), int(z.imag)
        ar, ai = 0, 0
        for c in reversed(p.coeffs):
            ar, ai = ar * zr - ai * zi + c, ar * zi + ai * zr
        if ar == 0 and ai == 0:
            return -math.inf
        return 0.5 * log_abs(ar * ar + ai * ai).value
    val, _ = log_abs_values(p, np.array([z]), rs=rs)
    return float(val[0])


# -- quadrature cross-check and reports --------------------------------------------------------


def tilde_quadrature(
    p: IntPolynomial,
    rs: RootSet | None,
    E: Domain,
    *,
    factors: Sequence[IntPolynomial] | None = None,
    min_distance: float = 1e-6,
) -> tuple[float | None, str]:
    """log of exp(integral of log|p| d mu_E), or None with a reason when skipped."""
    rs = _roots(p, rs)
    d = support_distance(E, rs.roots)
    if len(d) and float(d.min()) <= min_distance:
        return None, f"quadrature skipped: a root lies within {min_distance:g} of supp(mu_E)"

    def f(x):
        v, _ = log_abs_values(p, x, rs=rs, factors=factors)
        return v

    try:
        return equilibrium_mean(E, f, tol=1e-12), "quadrature converged"
    except QuadratureError as exc:
        return None, f"quadrature skipped: {exc}"


def limit_diagnostics(p: IntPolynomial, rs: RootSet | None = None, R: float = 2.0) -> dict:
    """Finite-n values behind the asymptotic conditions: |a_n|^{1/n} and the
    tail product (prod_{|z_k| >= R} |z_k|)^{1/n}."""
    rs = _roots(p, rs)
    n = p.degree
    mods = np.abs(rs.roots)
    tail = float(np.sum(np.log(mods[mods >= R]))) / n
    return {
        "lead_root": _exp(log_abs(p.leading).value / n),
        "tail_product": _exp(tail),
        "tail_count": int(np.sum(mods >= R)),
        "R": R,
    }


@dataclass(frozen=True)
class MeasureReport:
    domain: str
    degree: int
    log_mahler: float
    log_generalized: float
    log_tilde: float
    height: float
    sup: SupNorm
    log_tilde_quadrature: float | None
    chain_ok: bool
    notes: dict = field(default_factory=dict)

    @property
    def mahler(self) -> float:
        return _exp(self.log_mahler)

    @property
    def generalized(self) -> float:
        return _exp(self.log_generalized)

    @property
    def tilde(self) -> float:
        return _exp(self.log_tilde)

    def as_dict(self) -> dict:
        return {
            "domain": self.domain,
            "degree": self.degree,
            "mahler": self.mahler,
            "generalized": self.generalized,
            "tilde": self.tilde,
            "height": self.height,
            "sup_norm": self.sup.value,
            "gap": self.sup.gap,
            "log_mahler": self.log_mahler,
            "log_generalized": self.log_generalized,
            "log_tilde": self.log_tilde,
            "log_sup_norm": self.sup.log_value,
            "log_sup_upper": self.sup.log_upper,
            "notes": dict(self.notes),
        }


def measure_report(
    p: IntPolynomial,
    E: Domain,
    *,
    rs: RootSet | None = None,
    factors: Sequence[IntPolynomial] | None = None,
    R: float = 2.0,
) -> MeasureReport:
    if p.degree < 1:
        raise ValueError("measure report needs degree >= 1")
    rs = rs if rs is not None else find_roots(p, factors=factors)
    lm = log_mahler(p, rs)
    lg = log_generalized_mahler(p, rs, E)
    lt = log_tilde_mahler(p, rs, E)
    sup = sup_norm(p, E, rs=rs, factors=factors)
    lq, qnote = tilde_quadrature(p, rs, E, factors=factors)
    slack = 1e-9 + p.degree * rs.mean_radius
    chain_ok = (lg >= -slack) and (lg <= lt + slack) and (lt <= sup.log_upper + slack)
    notes = {
        "mahler": "closed form: |a_n| prod max(1,|z_k|)",
        "generalized": f"closed-form Green sum over {int(_omega_mask(E, rs).sum())} roots outside E",
        "tilde": "closed-form Green sum over all roots",
        "tilde_quadrature": qnote,
        "sup_norm": f"{sup.method}, {sup.nodes} nodes, relative gap {sup.relative_gap:.3g}",
        "roots": rs.method,
        "max_root_radius": rs.max_radius,
        "limits": limit_diagnostics(p, rs, R),
    }
    if lq is not None:
        notes["tilde_quadrature_log"] = lq
        notes["tilde_quadrature_agreement"] = abs(lq - lt)
    return MeasureReport(E.describe(), p.degree, lm, lg, lt, lm / p.degree, sup, lq, chain_ok, notes)
