"""All complex roots of an integer polynomial, each with an error radius.

The solver is Aberth-Ehrlich simultaneous iteration. Evaluation runs in
double precision with a running Horner error bound; roots whose bound is
too coarse for the requested radius are re-evaluated in double-double.

Two representations besides the plain monomial one are available:

* ``factors``: the polynomial is given as a product of exact factors (the
  cyclotomic products). Each factor is solved separately and radii are taken
  from the logarithmic derivative of the full product.
* Joukowski lift: for a polynomial whose roots sit near a real segment of
  length 4 centred at ``c``, ``q(u) = u**n p(c + u + 1/u)`` has modest
  integer coefficients even when ``p`` itself is badly conditioned
  (``t_n`` lifts to ``u**(2n) + 1``). Roots map back through
  ``z = c + u + 1/u``.

The radius reported for a root ``z`` is ``n (|p(z)/p'(z)| + kappa)`` where
``kappa`` bounds the rounding error of the computed ratio, so the disk is
the classical inclusion disk with the evaluation error folded in.
"""

from __future__ import annotations

import math
import os
import random
from fractions import Fraction
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _dd
from .intpoly import IntPolynomial, has_simple_zeros

__all__ = [
    "RootSet",
    "RootFindingError",
    "find_roots",
    "root_residual",
    "joukowski_lift",
    "EXACT_CUTOFF",
    "DEFAULT_TARGET_RADIUS",
    "MAX_SWEEPS",
]

EXACT_CUTOFF = 500
DEFAULT_TARGET_RADIUS = 1e-10
MAX_SWEEPS = 200

_U = 2.0 ** -53
_U_DD = 2.0 ** -104
# polishing aims this far below the target so that the final radii have slack
_POLISH_MARGIN = 0.1
# caps on per-root exact and multiprecision work
_EXACT_LIMIT = 256
_MP_DEGREE_LIMIT = 600


class RootFindingError(RuntimeError):
    """Raised when the iteration cap is hit before every radius is small."""

    def __init__(self, message: str, worst_residual: float):
        self.worst_residual = worst_residual
        super().__init__(f"{message} (worst residual {worst_residual:.3e})")


@dataclass(frozen=True)
class RootSet:
    """Roots sorted by (real, imag) with matching error radii."""

    roots: np.ndarray
    radii: np.ndarray
    source_degree: int
    method: str = "monomial"
    sweeps: int = 0
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        roots = np.array(self.roots, dtype=complex)
        radii = np.array(self.radii, dtype=float)
        if roots.shape != (self.source_degree,) or radii.shape != roots.shape:
            raise ValueError("roots and radii must both have length equal to the degree")
        roots.flags.writeable = False
        radii.flags.writeable = False
        object.__setattr__(self, "roots", roots)
        object.__setattr__(self, "radii", radii)

    def __len__(self) -> int:
        return self.source_degree

    @property
    def max_radius(self) -> float:
        return float(self.radii.max()) if self.source_degree else 0.0

    @property
    def mean_radius(self) -> float:
        return float(self.radii.mean()) if self.source_degree else 0.0


# -- evaluation ----------------------------------------------------------------


class _Evaluator:
    """p/p' with an a-priori bound on the rounding error, for real integer p.

    ``ratio(z)`` returns ``(r, kappa)`` where ``r`` approximates p(z)/p'(z)
    and ``kappa`` bounds |error in p(z)| / |p'(z)|. Points with |z| > 1 go
    through the reversed polynomial so nothing overflows.
    """

    def __init__(self, coeffs: Sequence[int]):
        self.coeffs = list(coeffs)
        self.n = len(coeffs) - 1
        shift = max(abs(c).bit_length() for c in coeffs) - 1
        hi, lo = _dd.int_to_dd(self.coeffs, shift)
        self.fwd = hi[::-1].copy()
        self.fwd_lo = lo[::-1].copy()
        self.rev = hi.copy()
        self.rev_lo = lo.copy()
        self.gamma = (4 * self.n + 4) * _U
        self.gamma_dd = (8 * self.n + 8) * _U_DD

    @staticmethod
    def _horner(f, z):
        p = np.full(z.shape, f[0], dtype=complex)
        d = np.zeros(z.shape, dtype=complex)
        s = np.full(z.shape, abs(f[0]))
        az = np.abs(z)
        af = np.abs(f)
        for c, ac in zip(f[1:], af[1:]):
            d = d * z + p
            p = p * z + c
            s = s * az + ac
        return p, d, s

    @staticmethod
    def _abs_sum(f, az):
        s = np.full(az.shape, abs(f[0]))
        for ac in np.abs(f[1:]):
            s = s * az + ac
        return s

    def ratio(self, z: np.ndarray, extended: bool = False):
        z = np.asarray(z, dtype=complex)
        r = np.empty(z.shape, dtype=complex)
        kappa = np.empty(z.shape)
        inside = np.abs(z) <= 1.0
        with np.errstate(all="ignore"):
            if inside.any():
                zi = z[inside]
                if extended:
                    p, d = _dd.horner_dd(self.fwd, self.fwd_lo, zi)
                    err = self.gamma_dd * self._abs_sum(self.fwd, np.abs(zi))
                else:
                    p, d, s = self._horner(self.fwd, zi)
                    err = self.gamma * s
                r[inside] = p / d
                kappa[inside] = err / np.abs(d)
            out = ~inside
            if out.any():
                zo = z[out]
                w = 1.0 / zo
                if extended:
                    q, dq = _dd.horner_dd(self.rev, self.rev_lo, w)
                    err = self.gamma_dd * self._abs_sum(self.rev, np.abs(w))
                else:
                    q, dq, s = self._horner(self.rev, w)
                    err = self.gamma * s
                denom = self.n * q - w * dq
                r[out] = q / (w * denom)
                kappa[out] = np.abs(zo) * err / np.abs(denom)
        return r, kappa


def _aberth_corrections(z: np.ndarray, idx: np.ndarray, r: np.ndarray) -> np.ndarray:
    diff = z[idx, None] - z[None, :]
    diff[np.arange(len(idx)), idx] = np.inf
    with np.errstate(all="ignore"):
        s = (1.0 / diff).sum(axis=1)
        # p'/p; an underflowed p' gives r = inf and the step tends to -1/s
        inv = np.where(np.isfinite(r), 1.0 / r, 0.0)
        inv[r == 0] = np.inf
        w = 1.0 / (inv - s)
    w[~np.isfinite(w)] = 0.0
    return w


def _initial_points(coeffs: Sequence[int], rng: np.random.Generator) -> np.ndarray:
    """Rings whose radii come from the upper convex hull of (k, log|a_k|)."""
    pts = [(k, math.log(abs(c))) for k, c in enumerate(coeffs) if c != 0]
    hull: list[tuple[int, float]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) <= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    out = []
    for (i, li), (j, lj) in zip(hull, hull[1:]):
        cnt = j - i
        radius = math.exp((li - lj) / cnt)
        theta0 = rng.uniform(0.0, 2.0 * math.pi)
        ang = theta0 + 2.0 * math.pi * np.arange(cnt) / cnt
        ang = ang + rng.uniform(-0.1, 0.1, cnt) * (2.0 * math.pi / cnt)
        out.append(radius * np.exp(1j * ang))
    return np.concatenate(out)


def _polish(
    ev: _Evaluator,
    z: np.ndarray,
    target: float,
    max_sweeps: int,
) -> tuple[np.ndarray, int, bool]:
    """Aberth iteration; returns (z, sweeps, used_extended)."""
    n = len(z)
    z = z.copy()
    active = np.ones(n, dtype=bool)
    need_dd = np.zeros(n, dtype=bool)
    near = np.zeros(n, dtype=bool)
    used_dd = False
    goal = _POLISH_MARGIN * target / n
    sweeps = 0
    while sweeps < max_sweeps and active.any():
        idx = np.flatnonzero(active)
        r, kap = ev.ratio(z[idx])
        dd_idx = need_dd[idx]
        if dd_idx.any():
            used_dd = True
            r2, k2 = ev.ratio(z[idx[dd_idx]], extended=True)
            r[dd_idx], kap[dd_idx] = r2, k2
        # stop a root once its step is below the goal or at the noise floor
        noise = 2.0 * kap + 4.0 * _U * np.abs(z[idx])
        at_floor = (np.abs(r) <= noise) & np.isfinite(noise)
        coarse = at_floor & (kap > goal) & ~dd_idx
        need_dd[idx[coarse]] = True
        # below the goal: take this last step, then freeze
        done = (at_floor & ~coarse) | (near[idx] & (np.abs(r) <= goal))
        near[idx] = np.abs(r) <= goal
        w = _aberth_corrections(z, idx, r)
        w[at_floor] = 0.0
        z[idx] -= w
        active[idx[done]] = False
        sweeps += 1
    return z, sweeps, used_dd


def _exact_ratio(coeffs: Sequence[int], z: complex) -> complex:
    """p(z)/p'(z) from exact Gaussian-integer arithmetic at the double z."""
    xr, xi = Fraction(z.real), Fraction(z.imag)
    e = max(xr.denominator, xi.denominator).bit_length() - 1
    X, Y = int(xr * (1 << e)), int(xi * (1 << e))
    n = len(coeffs) - 1
    pr, pi = coeffs[n], 0
    dr, di = n * coeffs[n], 0
    for k in range(n - 1, -1, -1):
        pr, pi = pr * X - pi * Y + (coeffs[k] << (e * (n - k))), pr * Y + pi * X
        if k:
            dr, di = dr * X - di * Y + ((k * coeffs[k]) << (e * (n - k))), dr * Y + di * X
    # p = P / 2^(en), p' = D / 2^(e(n-1)), so p/p' = P / (D 2^e)
    den = (dr * dr + di * di) << e
    if den == 0:
        return complex(math.inf, 0.0)
    return complex(Fraction(pr * dr + pi * di, den), Fraction(pi * dr - pr * di, den))


def _best_ratio(ev: _Evaluator, z: np.ndarray, target: float):
    """Cheapest tier whose rounding error does not swamp the radius."""
    r, kap = ev.ratio(z)
    n = ev.n
    goal = _POLISH_MARGIN * target
    redo = ~(n * (np.abs(r) + kap) <= goal)
    if redo.any():
        r2, k2 = ev.ratio(z[redo], extended=True)
        r[redo], kap[redo] = r2, k2
        exact = np.flatnonzero(redo)[~(n * k2 <= goal)]
        for i in exact[:_EXACT_LIMIT]:
            r[i], kap[i] = _exact_ratio(ev.coeffs, complex(z[i])), 0.0
    return r, kap


def _mp_polish(coeffs: Sequence[int], z: np.ndarray, bad: np.ndarray, target: float) -> np.ndarray:
    """Multiprecision Aberth steps for the roots double-double cannot resolve.

    The other roots stay fixed and still repel, so two approximations cannot
    settle on the same root.
    """
    import mpmath

    n = len(coeffs) - 1
    bits = max(abs(c).bit_length() for c in coeffs)
    out = z.copy()
    with mpmath.workprec(max(128, 2 * bits + 4 * n)):
        cs = [mpmath.mpf(c) for c in reversed(coeffs)]
        w = [mpmath.mpc(v) for v in z]
        pending = set(int(i) for i in bad)
        for _ in range(60):
            if not pending:
                break
            for i in sorted(pending):
                pv, dv = mpmath.polyval(cs, w[i], derivative=True)
                if pv == 0:
                    pending.discard(i)
                    continue
                s = mpmath.fsum(1 / (w[i] - w[j]) for j in range(n) if j != i)
                step = 1 / (dv / pv - s)
                w[i] -= step
                if abs(step) <= 1e-25 * max(1, abs(w[i])) or n * abs(step) < 1e-4 * target:
                    pending.discard(i)
        for i in bad:
            out[i] = complex(w[i])
    return out



# -- conjugate symmetry ----------------------------------------------------------


def _symmetrize(z: np.ndarray, tol: np.ndarray) -> tuple[np.ndarray, bool]:
    """Snap near-real roots and average conjugate pairs.

    Returns ``(z, ok)``; ``ok`` is False when no consistent pairing exists,
    in which case ``z`` is returned untouched.
    """
    z = z.copy()
    tol = np.maximum(tol, 1e-14 * np.maximum(1.0, np.abs(z)))
    real = np.abs(z.imag) <= tol
    up = np.flatnonzero(~real & (z.imag > 0))
    lo = np.flatnonzero(~real & (z.imag < 0))
    if len(up) != len(lo):
        return z, False
    if len(up):
        ku = np.lexsort((z[up].imag, np.round(z[up].real, 9)))
        kl = np.lexsort((-z[lo].imag, np.round(z[lo].real, 9)))
        up, lo = up[ku], lo[kl]
        gap = np.abs(z[up] - np.conj(z[lo]))
        if np.any(gap > 10.0 * (tol[up] + tol[lo]) + 1e-12):
            from scipy.optimize import linear_sum_assignment

            cost = np.abs(z[up][:, None] - np.conj(z[lo])[None, :])
            ri, ci = linear_sum_assignment(cost)
            up, lo = up[ri], lo[ci]
            if np.any(cost[ri, ci] > 10.0 * (tol[up] + tol[lo]) + 1e-12):
                return z, False
        mid = 0.5 * (z[up] + np.conj(z[lo]))
        z[up] = mid
        z[lo] = np.conj(mid)
    z[real] = z[real].real
    return z, True


def _sorted(z: np.ndarray, radii: np.ndarray):
    order = np.lexsort((z.imag, z.real))
    return z[order], radii[order]


# -- representations ---------------------------------------------------------------


def joukowski_lift(p: IntPolynomial, c: int) -> IntPolynomial:
    """Exact ``u**n * p(c + u + 1/u)``, an integer polynomial of degree 2n."""
    a = p.coeffs
    n = p.degree
    h = [a[n]]
    for j in range(n):
        ext = h + [0, 0]
        mid = [0] + h + [0]
        low = [0, 0] + h
        if c:
            h = [x + c * y + w for x, y, w in zip(ext, mid, low)]
        else:
            h = [x + w for x, w in zip(ext, low)]
        h[j + 1] += a[n - j - 1]
    return IntPolynomial(h)


def _solve_monomial(coeffs: list[int], target: float, max_sweeps: int, rng):
    """Roots of a polynomial with nonzero constant term, unsorted."""
    ev = _Evaluator(coeffs)
    if ev.n == 1:
        z = np.array([-coeffs[0] / coeffs[1]], dtype=complex)
        return ev, z, 0, False
    z0 = _initial_points(coeffs, rng)
    z, sweeps, used_dd = _polish(ev, z0, target, max_sweeps)
    if ev.n <= _MP_DEGREE_LIMIT:
        r, kap = ev.ratio(z, extended=True)
        bad = np.flatnonzero(ev.n * kap > _POLISH_MARGIN * target)
        if 0 < len(bad) <= _EXACT_LIMIT:
            z = _mp_polish(coeffs, z, bad, target)
            used_dd = True
    return ev, z, sweeps, used_dd


def _log_size(coeffs: Sequence[int], radius: float) -> float:
    lr = math.log(radius)
    vals = [math.log(abs(c)) + k * lr for k, c in enumerate(coeffs) if c]
    m = max(vals)
    return m + math.log(sum(math.exp(v - m) for v in vals))


def _choose_center(p: IntPolynomial) -> int | None:
    """Centre for the Joukowski lift, or None when it would not help."""
    a = p.coeffs
    n = p.degree
    if n < 2:
        return None
    c = round(-a[n - 1] / (n * a[n]))
    if p(c + 2) == 0 or p(c - 2) == 0:
        return None
    # both sizes bound |p| on the segment; their gap is digits lost by Horner
    mono = _log_size(a, abs(c) + 2.0)
    q = joukowski_lift(p, c)
    lifted = _log_size(q.coeffs, 1.0)
    if lifted + 3 * math.log(10) < mono:
        return c
    return None


def _pair_reciprocals(u: np.ndarray) -> np.ndarray | None:
    """Representative index of each {u, 1/u} pair, or None if unpairable."""
    from scipy.spatial import cKDTree

    tree = cKDTree(np.column_stack([u.real, u.imag]))
    inv = 1.0 / u
    _, nbr = tree.query(np.column_stack([inv.real, inv.imag]), k=2)
    partner = np.where(nbr[:, 0] == np.arange(len(u)), nbr[:, 1], nbr[:, 0])
    if np.any(partner[partner] != np.arange(len(u))):
        return None
    keep = []
    for i, j in enumerate(partner):
        if i > j:
            continue
        mi, mj = abs(u[i]), abs(u[j])
        if abs(mi - mj) <= 1e-9 * max(mi, mj):
            keep.append(i if u[i].imag >= u[j].imag else j)
        else:
            keep.append(i if mi > mj else j)
    return np.array(keep)


class _LiftedRatio:
    """p/p' at points z evaluated through the Joukowski lift."""

    def __init__(self, ev: _Evaluator, c: int, n: int):
        self.ev, self.c, self.n = ev, c, n

    def at_u(self, u, target):
        ru, ku = _best_ratio(self.ev, u, target)
        jac = 1.0 - u ** -2
        denom = 1.0 - self.n * ru / u
        return ru * jac / denom, ku * np.abs(jac) / np.abs(denom)

    def __call__(self, z, target):
        w = z - self.c
        s = np.sqrt(w * w - 4.0)
        u = 0.5 * (w + s)
        small = np.abs(u) < 1.0
        u[small] = 0.5 * (w[small] - s[small])
        return self.at_u(u, target)


def _solve_lifted(p: IntPolynomial, c: int, target: float, max_sweeps: int, rng):
    q = joukowski_lift(p, c)
    n = p.degree
    ev, u, sweeps, used_dd = _solve_monomial(list(q.coeffs), target / 4.0, max_sweeps, rng)
    ru, _ = _best_ratio(ev, u, target)
    u, ok = _symmetrize(u, 2 * n * np.abs(ru))
    if not ok:
        return None
    keep = _pair_reciprocals(u)
    if keep is None or len(keep) != n:
        return None
    u = u[keep]
    z = c + (u + 1.0 / u)
    return z, _LiftedRatio(ev, c, n), sweeps, used_dd


# -- public API ----------------------------------------------------------------------


def _rng(seed: int | None) -> np.random.Generator:
    return np.random.default_rng(0x5EED if seed is None else seed)


def _check_factors(p: IntPolynomial, factors: Sequence[IntPolynomial]) -> None:
    if sum(f.degree for f in factors) != p.degree:
        raise ValueError("factor degrees do not add up to the degree of p")
    prime = (1 << 61) - 1
    gen = random.Random(p.degree)
    for _ in range(3):
        x = gen.randrange(2, prime)
        lhs = 1
        for f in factors:
            acc = 0
            for c in reversed(f.coeffs):
                acc = (acc * x + c) % prime
            lhs = lhs * acc % prime
        rhs = 0
        for c in reversed(p.coeffs):
            rhs = (rhs * x + c) % prime
        if lhs != rhs:
            raise ValueError("factors do not multiply to p")


def find_roots(
    p: IntPolynomial,
    target_radius: float = DEFAULT_TARGET_RADIUS,
    *,
    factors: Sequence[IntPolynomial] | None = None,
    basis: str = "auto",
    seed: int | None = None,
    max_sweeps: int = MAX_SWEEPS,
    check_simple: bool = True,
) -> RootSet:
    """All roots of ``p`` with radii ``n |p/p'|`` at most ``target_radius``.

    Parameters
    ----------
    factors
        Optional exact factorisation of ``p``; each factor is solved on its
        own and the radii are computed for ``p`` as a whole.
    basis
        ``"auto"``, ``"monomial"`` or ``"joukowski"``.
    seed
        Seed for the angular jitter of the starting rings.
    """
    n = p.degree
    if n < 1:
        raise ValueError("find_roots requires degree >= 1")
    if target_radius <= 0:
        raise ValueError("target_radius must be positive")
    if basis not in ("auto", "monomial", "joukowski"):
        raise ValueError(f"unknown basis {basis!r}")
    rng = _rng(seed)
    if factors is not None:
        factors = [f for f in factors if f.degree > 0]
        _check_factors(p, factors)
        return _find_roots_factored(p, factors, target_radius, rng, max_sweeps, check_simple)
    if check_simple and n <= EXACT_CUTOFF and not has_simple_zeros(p):
        raise ValueError("polynomial has a repeated zero")

    notes: list[str] = []
    coeffs = list(p.coeffs)
    zero_root = coeffs[0] == 0
    if zero_root and coeffs[1] == 0:
        raise ValueError("polynomial has a repeated zero at 0")

    solved = None
    lift_full = False
    if zero_root and n >= 2 and basis != "monomial":
        # lift p itself: deflating z destroys sparse lifts (t_n -> u^{2n}+1);
        # not when 0 is an endpoint, where the lift would get a double root
        c = _choose_center(p) if basis == "auto" else round(-coeffs[-2] / (n * coeffs[-1]))
        if c is not None and abs(c) != 2:
            solved = _solve_lifted(p, c, target_radius, max_sweeps, rng)
            lift_full = solved is not None
            if lift_full:
                notes.append(f"joukowski lift centred at {c}")
    if zero_root and not lift_full:
        coeffs = coeffs[1:]
    core = IntPolynomial(coeffs)
    zero_root = zero_root and not lift_full

    if solved is None and core.degree >= 1 and basis != "monomial":
        c = _choose_center(core) if basis == "auto" else round(-coeffs[-2] / (core.degree * coeffs[-1]))
        if c is not None:
            solved = _solve_lifted(core, c, target_radius, max_sweeps, rng)
            if solved is None:
                notes.append("joukowski pairing failed; used monomial basis")
            else:
                notes.append(f"joukowski lift centred at {c}")
    if core.degree == 0:
        z = np.zeros(0, dtype=complex)
        ratio_fn = None
        sweeps, used_dd, method = 0, False, "monomial"
    elif solved is not None:
        z, ratio_fn, sweeps, used_dd = solved
        method = "joukowski"
    else:
        ev, z, sweeps, used_dd = _solve_monomial(coeffs, target_radius, max_sweeps, rng)
        ratio_fn = lambda pts, t: _best_ratio(ev, pts, t)  # noqa: E731
        method = "monomial"
    if used_dd:
        notes.append("double-double polishing")

    if len(z):
        r, kap = ratio_fn(z, target_radius)
        z, ok = _symmetrize(z, n * (np.abs(r) + kap))
        if not ok:
            notes.append("conjugate pairing failed")
        r, kap = ratio_fn(z, target_radius)
        if len(coeffs) - 1 == 1:
            r = np.array([_linear_ratio(coeffs, z[0])])
            kap = np.zeros(1)
        # the radius is for p = z * core when 0 is a root
        if zero_root:
            fac = 1.0 / (1.0 + r / z)
            r = r * fac
            kap = kap * np.abs(fac) ** 2
        radii = n * (np.abs(r) + kap)
        if lift_full:
            # p(0) = 0 exactly
            k = int(np.argmin(np.abs(z)))
            z[k], radii[k] = 0.0, 0.0
    else:
        radii = np.zeros(0)
    if zero_root:
        z = np.append(z, 0.0 + 0.0j)
        radii = np.append(radii, 0.0)
    _finish_checks(z, radii, target_radius)
    z, radii = _sorted(z, radii)
    return RootSet(z, radii, n, method=method, sweeps=sweeps, notes=tuple(notes))


def _linear_ratio(coeffs, z) -> complex:
    """(a1 z + a0) / a1 with the real part formed exactly."""
    return complex(float(Fraction(z.real) + Fraction(coeffs[0], coeffs[1])), z.imag)


def _finish_checks(z, radii, target):
    bound = radii
    bad = ~np.isfinite(bound) | (bound > target)
    if bad.any():
        worst = float(np.max(np.where(np.isfinite(bound), bound, np.inf)))
        raise RootFindingError(f"{int(bad.sum())} of {len(z)} roots not within target radius {target:g}", worst)
    if len(z) > 1:
        order = np.argsort(z.real)
        zs, rs = z[order], radii[order]
        # only near neighbours in real part can overlap
        for shift in range(1, min(len(z), 64)):
            d = np.abs(zs[shift:] - zs[:-shift])
            if np.any(d <= rs[shift:] + rs[:-shift]):
                raise RootFindingError("two approximations share one inclusion disk", float(rs.max()))
            if np.all(np.abs(zs[shift:].real - zs[:-shift].real) > 2 * target):
                break


@lru_cache(maxsize=4096)
def _factor_roots(f: IntPolynomial, target: float, seed: int, max_sweeps: int) -> RootSet:
    return find_roots(f, target, seed=seed, max_sweeps=max_sweeps, check_simple=False)


def _find_roots_factored(p, factors, target, rng, max_sweeps, check_simple) -> RootSet:
    n = p.degree
    parts = []
    sweeps = 0
    notes = ["solved per factor"]
    base = int(rng.integers(1 << 31))
    for f in factors:
        if check_simple and f.degree <= EXACT_CUTOFF and not has_simple_zeros(f):
            raise ValueError("a factor has a repeated zero")
        # power-of-two target and a coefficient-derived seed make the cached
        # result a pure function of its inputs, so sweeps stay deterministic
        t = 2.0 ** math.floor(math.log2(0.5 * target * f.degree / n))
        rs = _factor_roots(f, t, (base * 1000003 + hash(f.coeffs)) & 0x7FFFFFFF, max_sweeps)
        parts.append(rs)
        sweeps = max(sweeps, rs.sweeps)
        if rs.method != "monomial":
            notes.append(f"factor of degree {f.degree}: {rs.method}")
    z = np.concatenate([rs.roots for rs in parts])
    owner = np.concatenate([np.full(rs.source_degree, i) for i, rs in enumerate(parts)])
    # p'/p = sum of f'/f over factors; the own factor term dominates near its root
    logder = np.zeros(n, dtype=complex)
    kappa = np.zeros(n)
    for i, f in enumerate(factors):
        ev = _Evaluator(list(f.coeffs))
        mask = owner != i
        if f.degree == 1:
            with np.errstate(all="ignore"):
                logder[mask] += f.coeffs[1] / (f.coeffs[1] * z[mask] + f.coeffs[0])
            continue
        r, _ = ev.ratio(z[mask])
        with np.errstate(all="ignore"):
            logder[mask] += 1.0 / r
    own_ratio = np.empty(n, dtype=complex)
    for i, (f, rs) in enumerate(zip(factors, parts)):
        mask = owner == i
        if f.degree == 1:
            own_ratio[mask] = _linear_ratio(list(f.coeffs), rs.roots[0])
            kappa[mask] = 0.0
        else:
            ev = _Evaluator(list(f.coeffs))
            r, k = _best_ratio(ev, rs.roots, target / n)
            own_ratio[mask] = r
            kappa[mask] = k
    with np.errstate(all="ignore"):
        total = np.where(own_ratio == 0, np.inf, 1.0 / own_ratio) + logder
        ratio = np.where(own_ratio == 0, 0.0, 1.0 / total)
        scale = np.where(own_ratio == 0, 1.0, np.abs(ratio / own_ratio) ** 2)
    radii = n * (np.abs(ratio) + kappa * scale)
    _finish_checks(z, radii, target)
    z, radii = _sorted(z, radii)
    return RootSet(z, radii, n, method="factored", sweeps=sweeps, notes=tuple(notes))


def root_residual(p: IntPolynomial, z: complex) -> float:
    """``n |p(z)/p'(z)|``: a disk of this radius about z contains a root of p."""
    n = p.degree
    if n < 1:
        raise ValueError("root_residual requires degree >= 1")
    z = complex(z)
    if n == 1:
        return float(abs(_linear_ratio(list(p.coeffs), z)))
    ev = _Evaluator(list(p.coeffs))
    pts = np.array([z])
    r, kap = ev.ratio(pts)
    if np.isfinite(r[0]) and kap[0] > 1e-3 * abs(r[0]):
        r, kap = ev.ratio(pts, extended=True)
        if kap[0] > 1e-3 * abs(r[0]):
            r[0] = _exact_ratio(ev.coeffs, z)
    if not np.isfinite(r[0]) or abs(r[0]) > 1e300:
        raise ZeroDivisionError(f"derivative vanishes near z={z}")
    return float(n * abs(r[0]))


def default_precision() -> int:
    """Decimal digits for mpmath work, from ``EQUIDIST_PRECISION`` (default 30)."""
    try:
        return max(15, int(os.environ.get("EQUIDIST_PRECISION", "30")))
    except ValueError:
        return 30
