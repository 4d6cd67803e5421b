"""Vectorised double-double Horner evaluation (about 106-bit mantissa).

Only used to polish roots when the running error bound of plain double
Horner says the double result cannot resolve the requested radius.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod_split(a, b, bh, bl):
    p = a * b
    ah, al = _split(a)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_mul_d(xh, xl, y, yh, yl):
    p, e = _two_prod_split(xh, y, yh, yl)
    return _quick_two_sum(p, e + xl * y)


def _dd_add(xh, xl, yh, yl):
    s, e = _two_sum(xh, yh)
    return _quick_two_sum(s, e + xl + yl)


def int_to_dd(coeffs, shift: int) -> tuple[np.ndarray, np.ndarray]:
    """Split ``c * 2**-shift`` into (hi, lo) doubles for each integer ``c``."""
    hi = np.empty(len(coeffs))
    lo = np.empty(len(coeffs))
    scale = Fraction(1, 1 << shift) if shift >= 0 else Fraction(1 << -shift)
    for k, c in enumerate(coeffs):
        x = c * scale
        h = float(x)
        hi[k] = h
        lo[k] = float(x - Fraction(h))
    return hi, lo


def _dd_mul(xh, xl, yh, yl):
    p, e = _two_prod_split(xh, yh, *_split(yh))
    return _quick_two_sum(p, e + (xh * yl + xl * yh))


def _cdd_mul(a, b):
    """Complex double-double product; a, b are (rh, rl, ih, il)."""
    r1 = _dd_mul(a[0], a[1], b[0], b[1])
    r2 = _dd_mul(a[2], a[3], -b[2], -b[3])
    i1 = _dd_mul(a[0], a[1], b[2], b[3])
    i2 = _dd_mul(a[2], a[3], b[0], b[1])
    rh, rl = _dd_add(r1[0], r1[1], r2[0], r2[1])
    ih, il = _dd_add(i1[0], i1[1], i2[0], i2[1])
    return rh, rl, ih, il


def _cdd_pow(zc, m: int, cache: dict):
    if m in cache:
        return cache[m]
    if m == 1:
        out = zc
    else:
        half = _cdd_pow(zc, m // 2, cache)
        out = _cdd_mul(half, half)
        if m % 2:
            out = _cdd_mul(out, zc)
    cache[m] = out
    return out


def horner_dd(hi: np.ndarray, lo: np.ndarray, z: np.ndarray):
    """Evaluate p and p' at complex points ``z``; coefficients high-to-low.

    Long runs of zero coefficients are skipped with binary powers of z
    (fewer roundings than the Horner steps they replace).
    Returns complex128 arrays rounded from the double-double results.
    """
    z = np.asarray(z, dtype=complex)
    zr, zi = z.real.copy(), z.imag.copy()
    zrh, zrl = _split(zr)
    nzi = -zi
    zih, zil = _split(zi)
    nzih, nzil = -zih, -zil
    shape = z.shape
    pr_h = np.full(shape, hi[0])
    pr_l = np.full(shape, lo[0])
    pi_h = np.zeros(shape)
    pi_l = np.zeros(shape)
    dr_h = np.zeros(shape)
    dr_l = np.zeros(shape)
    di_h = np.zeros(shape)
    di_l = np.zeros(shape)
    zero = np.zeros(shape)
    zc = (zr, zero, zi, zero)
    powers: dict = {}

    def cmul(ah, al, bh, bl):
        # (a + ib) * z
        r1 = _dd_mul_d(ah, al, zr, zrh, zrl)
        r2 = _dd_mul_d(bh, bl, nzi, nzih, nzil)
        i1 = _dd_mul_d(ah, al, zi, zih, zil)
        i2 = _dd_mul_d(bh, bl, zr, zrh, zrl)
        rh, rl = _dd_add(r1[0], r1[1], r2[0], r2[1])
        ih, il = _dd_add(i1[0], i1[1], i2[0], i2[1])
        return rh, rl, ih, il

    nonzero = np.flatnonzero((hi != 0) | (lo != 0))
    k_prev = 0
    for k in list(nonzero[nonzero > 0]) + ([len(hi) - 1] if hi[-1] == 0 and lo[-1] == 0 else []):
        m = int(k - k_prev)
        if m < 8:
            for _ in range(m - 1):
                t = cmul(dr_h, dr_l, di_h, di_l)
                dr_h, dr_l = _dd_add(t[0], t[1], pr_h, pr_l)
                di_h, di_l = _dd_add(t[2], t[3], pi_h, pi_l)
                t = cmul(pr_h, pr_l, pi_h, pi_l)
                pr_h, pr_l, pi_h, pi_l = t
            t = cmul(dr_h, dr_l, di_h, di_l)
            dr_h, dr_l = _dd_add(t[0], t[1], pr_h, pr_l)
            di_h, di_l = _dd_add(t[2], t[3], pi_h, pi_l)
            t = cmul(pr_h, pr_l, pi_h, pi_l)
        else:
            zm1 = _cdd_pow(zc, m - 1, powers)
            zm = _cdd_pow(zc, m, powers)
            P = (pr_h, pr_l, pi_h, pi_l)
            a = _cdd_mul((dr_h, dr_l, di_h, di_l), zm)
            b = _cdd_mul(P, zm1)
            dr_h, dr_l = _dd_add(a[0], a[1], *_dd_mul_d(b[0], b[1], float(m), *_split(float(m))))
            di_h, di_l = _dd_add(a[2], a[3], *_dd_mul_d(b[2], b[3], float(m), *_split(float(m))))
            t = _cdd_mul(P, zm)
        pr_h, pr_l = _dd_add(t[0], t[1], hi[k], lo[k])
        pi_h, pi_l = t[2], t[3]
        k_prev = k
    p = (pr_h + pr_l) + 1j * (pi_h + pi_l)
    d = (dr_h + dr_l) + 1j * (di_h + di_l)
    return p, d
