"""Capacity-one compact sets with closed-form Green functions.

Three kinds are supported: the closed unit disk, a real segment of length 4,
and the unit disk with finitely many extra points outside it. All have
logarithmic capacity 1, so ``g_E(z) - log|z| -> 0`` at infinity.

Green functions use the extended convention: they are 0 on E itself, and for
:class:`DiskPlusPoints` the disk formula is used everywhere (finite sets have
zero capacity).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

__all__ = [
    "UnitDisk",
    "Segment",
    "DiskPlusPoints",
    "Domain",
    "DomainError",
    "QuadratureError",
    "parse_domain",
    "green",
    "equilibrium_mean",
    "distance_to",
    "support_distance",
    "green_level_point",
    "max_green_near",
]

_LOG2 = math.log(2.0)
_CIRCLE_SLACK = 4 * np.finfo(float).eps


class DomainError(ValueError):
    pass


class QuadratureError(ArithmeticError):
    """Node doubling hit the cap; ``estimates`` holds the last two values."""

    def __init__(self, estimates: tuple[float, float], nodes: int):
        self.estimates = estimates
        self.nodes = nodes
        super().__init__(f"equilibrium quadrature did not converge with {nodes} nodes: {estimates[0]!r}, {estimates[1]!r}")


@dataclass(frozen=True)
class UnitDisk:
    kind = "disk"

    def describe(self) -> str:
        return "disk"


@dataclass(frozen=True)
class Segment:
    a: float = -2.0
    b: float = 2.0
    kind = "segment"

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DomainError("segment endpoints must be finite")
        if abs((self.b - self.a) - 4.0) > 1e-12:
            raise DomainError(f"segment must have length 4 (capacity 1), got [{self.a}, {self.b}]")

    @property
    def center(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def integer_center(self) -> int | None:
        c = self.center
        return int(c) if float(c).is_integer() else None

    def describe(self) -> str:
        return f"segment:a={_fmt(self.a)},b={_fmt(self.b)}"


@dataclass(frozen=True)
class DiskPlusPoints:
    points: tuple[complex, ...]
    kind = "diskplus"

    def __post_init__(self):
        pts = tuple(complex(p) for p in self.points)
        if not pts:
            raise DomainError("diskplus needs at least one point")
        for p in pts:
            if not abs(p) > 1.0:
                raise DomainError(f"added point {p} must satisfy |p| > 1")
        object.__setattr__(self, "points", pts)

    def describe(self) -> str:
        return "diskplus:points=" + ",".join(_fmt_c(p) for p in self.points)


Domain = Union[UnitDisk, Segment, DiskPlusPoints]


def _fmt(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def _fmt_c(z: complex) -> str:
    if z.imag == 0:
        return _fmt(z.real)
    return repr(z).strip("()")


def _parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError:
        raise DomainError(f"cannot parse point {text!r}") from None


def parse_domain(text: str) -> Domain:
    """``disk``, ``segment:a=-2,b=2`` or ``diskplus:points=2,-3,1+2i``."""
    s = text.strip().lower()
    if s in ("disk", "unitdisk", "d"):
        return UnitDisk()
    m = re.fullmatch(r"segment(?::(.*))?", s)
    if m:
        args = _kv(m.group(1) or "", text)
        a = float(args.pop("a", "-2" if "b" not in args else str(float(args["b"]) - 4)))
        b = float(args.pop("b", str(a + 4)))
        if args:
            raise DomainError(f"unknown segment keys {sorted(args)} in {text!r}")
        return Segment(a, b)
    m = re.fullmatch(r"diskplus:points=(.+)", s)
    if m:
        return DiskPlusPoints(tuple(_parse_complex(p) for p in m.group(1).split(",")))
    raise DomainError(f"unknown domain {text!r}; expected disk, segment:a=..,b=.. or diskplus:points=..")


def _kv(body: str, text: str) -> dict[str, str]:
    out = {}
    for part in filter(None, body.split(",")):
        if "=" not in part:
            raise DomainError(f"expected key=value in {text!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


# -- Green function ----------------------------------------------------------------


def _segment_green(w: np.ndarray) -> np.ndarray:
    """g_[-2,2](w) = log|w + sqrt(w^2-4)| - log 2 on the larger-modulus branch."""
    out = np.zeros(w.shape)
    aw = np.abs(w)
    on = (w.imag == 0) & (np.abs(w.real) <= 2.0)
    big = (aw >= 1.0) & ~on
    if big.any():
        wb = w[big]
        # w + sqrt(w^2-4) = w (1 + sqrt(1 - 4/w^2)); the principal root maximises |1 + s|
        s = np.sqrt(1.0 - (2.0 / wb) ** 2)
        out[big] = np.log(aw[big]) + np.log(np.abs(1.0 + s)) - _LOG2
    small = ~big & ~on
    if small.any():
        ws = w[small]
        s = np.sqrt(ws * ws - 4.0)
        val = np.maximum(np.abs(ws + s), np.abs(ws - s))
        out[small] = np.log(val) - _LOG2
    return np.maximum(out, 0.0)


def green(E: Domain, z):
    """Green function of the unbounded complement with pole at infinity.

    Vectorised over ``z``; returns a float for scalar input.
    """
    scalar = np.ndim(z) == 0
    zz = np.asarray(z, dtype=complex)
    if isinstance(E, Segment):
        val = _segment_green(zz - E.center)
    else:
        az = np.abs(zz)
        with np.errstate(divide="ignore"):
            # |e^{it}| rounds to 1 + ulp; such points are on the circle
            val = np.where(az <= 1.0 + _CIRCLE_SLACK, 0.0, np.log(az))
    return float(val) if scalar else val


# -- equilibrium measure --------------------------------------------------------------


def _nodes(E: Domain, m: int) -> np.ndarray:
    j = np.arange(1, m + 1)
    if isinstance(E, Segment):
        return E.center + 2.0 * np.cos((2 * j - 1) * math.pi / (2 * m))
    return np.exp(1j * (2 * j - 1) * math.pi / m)


def _apply(f: Callable, x: np.ndarray) -> np.ndarray:
    try:
        y = np.asarray(f(x))
        if y.shape == x.shape:
            return y
    except Exception:
        pass
    return np.array([f(v) for v in x])


def equilibrium_mean(
    E: Domain,
    f: Callable,
    *,
    tol: float = 1e-12,
    start: int = 64,
    cap: int = 1 << 16,
) -> float:
    """Integral of ``f`` against the equilibrium measure of E.

    Segments use equal-weight Gauss-Chebyshev nodes (exact for the arcsine
    weight against polynomials of degree < 2m); the disk uses the midpoint
    trapezoid rule on the unit circle. The node count doubles from ``start``
    until two successive values differ by less than ``tol`` (relative to
    max(1, |value|)).
    """
    m = start
    prev = float(np.mean(_apply(f, _nodes(E, m))).real)
    while m < cap:
        m *= 2
        cur = float(np.mean(_apply(f, _nodes(E, m))).real)
        if abs(cur - prev) < tol * max(1.0, abs(cur)):
            return cur
        prev_prev, prev = prev, cur
    raise QuadratureError((prev_prev, prev), m)


# -- geometry -----------------------------------------------------------------------


def distance_to(E: Domain, z):
    """Euclidean distance from z to the compact set E (vectorised)."""
    scalar = np.ndim(z) == 0
    zz = np.asarray(z, dtype=complex)
    if isinstance(E, Segment):
        x = np.clip(zz.real, E.a, E.b)
        d = np.abs(zz - x)
    else:
        d = np.maximum(np.abs(zz) - 1.0, 0.0)
        if isinstance(E, DiskPlusPoints):
            for p in E.points:
                d = np.minimum(d, np.abs(zz - p))
    return float(d) if scalar else d


def support_distance(E: Domain, z):
    """Distance from z to supp(mu_E): the unit circle or the segment."""
    scalar = np.ndim(z) == 0
    zz = np.asarray(z, dtype=complex)
    if isinstance(E, Segment):
        d = distance_to(E, zz)
    else:
        d = np.abs(np.abs(zz) - 1.0)
    return float(d) if scalar else d


def green_level_point(E: Domain, c: float) -> complex:
    """A point with g_E = c: e^c on the positive axis for the disk, b + eps
    for a segment, where eps = e^c + e^-c - 2 = 4 sinh^2(c/2) solves
    g(b + eps) = c exactly."""
    if c < 0:
        raise ValueError("level must be nonnegative")
    if isinstance(E, Segment):
        return complex(E.b + 4.0 * math.sinh(0.5 * c) ** 2)
    return complex(math.exp(c))


def max_green_near(E: Domain, r: float) -> float:
    """max of g_E over the closed r-neighbourhood of E.

    For the disk this is log(1 + r); added points contribute log(|p| + r).
    For a segment the maximum is attained on the real axis beyond an
    endpoint, g(b + r).
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    if isinstance(E, Segment):
        return green(E, E.b + r)
    out = math.log1p(r)
    if isinstance(E, DiskPlusPoints):
        out = max([out] + [math.log(abs(p) + r) for p in E.points])
    return out
