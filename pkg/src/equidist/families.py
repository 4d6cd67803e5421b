"""Integer polynomial families used as test corpora."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import mpmath
import sympy

from .intpoly import IntPolynomial
from .rootfinder import default_precision

__all__ = [
    "FamilyKind",
    "FamilySpec",
    "FamilyMember",
    "FamilyError",
    "cyclotomic",
    "cyclotomic_product",
    "cyclotomic_product_factors",
    "chebyshev_t",
    "totally_positive_minpoly",
    "shift",
    "power_minus_one",
    "parse_family",
]


class FamilyError(ValueError):
    pass


class FamilyKind(enum.Enum):
    CyclotomicProduct = "cycloprod"
    ChebyshevT = "chebyshev"
    TotallyPositiveMinPoly = "trace"
    ShiftedChebyshev = "shiftcheb"
    PowerMinusOne = "powm1"
    Custom = "custom"


_PARAM_NAME = {
    FamilyKind.CyclotomicProduct: "k",
    FamilyKind.ChebyshevT: "n",
    FamilyKind.TotallyPositiveMinPoly: "p",
    FamilyKind.ShiftedChebyshev: "n",
    FamilyKind.PowerMinusOne: "n",
}


@lru_cache(maxsize=None)
def cyclotomic(d: int) -> IntPolynomial:
    """Phi_d by exact division of z**d - 1 by Phi_e for the proper divisors e."""
    if d < 1:
        raise FamilyError("cyclotomic(d) needs d >= 1")
    num = IntPolynomial.monomial(d) - IntPolynomial((1,))
    for e in range(1, d):
        if d % e == 0:
            num = num.exact_div(cyclotomic(e))
    return num


def cyclotomic_product_factors(k: int) -> list[IntPolynomial]:
    if k < 1:
        raise FamilyError("cyclotomic_product(k) needs k >= 1")
    return [cyclotomic(d) for d in range(1, k + 1)]


_PRODUCTS: dict[int, IntPolynomial] = {}


def cyclotomic_product(k: int) -> IntPolynomial:
    """prod_{d<=k} Phi_d; partial products are memoised."""
    if k < 1:
        raise FamilyError("cyclotomic_product(k) needs k >= 1")
    if k in _PRODUCTS:
        return _PRODUCTS[k]
    start = max((j for j in _PRODUCTS if j < k), default=0)
    acc = _PRODUCTS[start] if start else IntPolynomial((1,))
    for d in range(start + 1, k + 1):
        acc = acc * cyclotomic(d)
        _PRODUCTS[d] = acc
    return acc


@lru_cache(maxsize=None)
def chebyshev_t(n: int) -> IntPolynomial:
    """t_n(x) = 2 cos(n arccos(x/2)); t_0 = 2, t_1 = x, t_{n+1} = x t_n - t_{n-1}."""
    if n < 0:
        raise FamilyError("chebyshev_t(n) needs n >= 0")
    prev, cur = IntPolynomial((2,)), IntPolynomial((0, 1))
    if n == 0:
        return prev
    x = IntPolynomial((0, 1))
    for _ in range(n - 1):
        prev, cur = cur, x * cur - prev
    return cur


def _tp_candidate(p: int, dps: int) -> tuple[IntPolynomial, float]:
    with mpmath.workdps(dps):
        roots = [4 * mpmath.cos(k * mpmath.pi / p) ** 2 for k in range(1, (p - 1) // 2 + 1)]
        coeffs = [mpmath.mpf(1)]
        for r in roots:
            nxt = [mpmath.mpf(0)] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i + 1] += c
                nxt[i] -= r * c
            coeffs = nxt
        ints = [int(mpmath.nint(c)) for c in coeffs]
        resid = max(float(abs(c - i)) for c, i in zip(coeffs, ints))
    return IntPolynomial(ints), resid


def totally_positive_minpoly(p: int, dps: int | None = None) -> IntPolynomial:
    """Minimal polynomial of 4 cos^2(pi/p) for an odd prime p.

    Expands prod (x - 4cos^2(k pi/p)) at ``dps`` digits and rounds. A
    coefficient further than 0.25 from an integer means the precision was
    too low; the precision is then doubled.
    """
    if p < 3 or not sympy.isprime(p):
        raise FamilyError(f"trace family needs an odd prime, got {p}")
    dps = dps or default_precision()
    for _ in range(8):
        poly, resid = _tp_candidate(p, dps)
        if resid < 0.25:
            return poly
        dps *= 2
    raise FamilyError(f"insufficient precision for p={p} (residual {resid:.3g})")


def shift(p: IntPolynomial, c: int) -> IntPolynomial:
    """p(z - c): zeros move by +c."""
    return p.compose_shift(c)


def power_minus_one(n: int) -> IntPolynomial:
    if n < 1:
        raise FamilyError("power_minus_one(n) needs n >= 1")
    return IntPolynomial.monomial(n) - IntPolynomial((1,))


@dataclass(frozen=True)
class FamilyMember:
    label: str
    parameter: int
    poly: IntPolynomial
    factors: tuple[IntPolynomial, ...] | None = None

    @property
    def degree(self) -> int:
        return self.poly.degree


@dataclass(frozen=True)
class FamilySpec:
    kind: FamilyKind
    parameter: int | None = None
    shift: int = 0
    custom: IntPolynomial | None = None

    def __post_init__(self):
        if self.kind is FamilyKind.Custom:
            if self.custom is None:
                raise FamilyError("custom family needs a polynomial")
            return
        if self.parameter is not None:
            self.check_parameter(self.parameter)

    @property
    def name(self) -> str:
        return self.kind.value

    def check_parameter(self, v: int) -> None:
        if self.kind is FamilyKind.TotallyPositiveMinPoly:
            if v < 3 or not sympy.isprime(v):
                raise FamilyError(f"p must be an odd prime, got {v}")
        elif self.kind in (FamilyKind.CyclotomicProduct, FamilyKind.PowerMinusOne):
            if v < 1:
                raise FamilyError(f"{_PARAM_NAME[self.kind]} must be >= 1, got {v}")
        elif v < 0:
            raise FamilyError(f"n must be >= 0, got {v}")

    def valid_parameters(self, lo: int, hi: int) -> list[int]:
        out = []
        for v in range(lo, hi + 1):
            try:
                self.check_parameter(v)
            except FamilyError:
                continue
            out.append(v)
        return out

    def member(self, v: int | None = None) -> FamilyMember:
        if self.kind is FamilyKind.Custom:
            poly = shift(self.custom, self.shift) if self.shift else self.custom
            return FamilyMember(f"custom:{poly.to_symbolic()}", poly.degree, poly)
        v = self.parameter if v is None else v
        if v is None:
            raise FamilyError("family parameter not given")
        self.check_parameter(v)
        factors = None
        if self.kind is FamilyKind.CyclotomicProduct:
            factors = tuple(cyclotomic_product_factors(v))
            poly = cyclotomic_product(v)
        elif self.kind is FamilyKind.ChebyshevT:
            poly = chebyshev_t(v)
        elif self.kind is FamilyKind.ShiftedChebyshev:
            poly = shift(chebyshev_t(v), 2)
        elif self.kind is FamilyKind.TotallyPositiveMinPoly:
            poly = totally_positive_minpoly(v)
        else:
            poly = power_minus_one(v)
        if self.shift:
            poly = shift(poly, self.shift)
            if factors is not None:
                factors = tuple(shift(f, self.shift) for f in factors)
        label = f"{self.kind.value}:{_PARAM_NAME[self.kind]}={v}"
        if self.shift:
            label += f",shift={self.shift}"
        return FamilyMember(label, v, poly, factors)

    def members(self, lo: int, hi: int) -> Iterator[FamilyMember]:
        for v in self.valid_parameters(lo, hi):
            yield self.member(v)

    def degree_of(self, v: int) -> int:
        """Degree of the member with parameter ``v``, without building it."""
        if self.kind is FamilyKind.Custom:
            return self.custom.degree
        self.check_parameter(v)
        if self.kind is FamilyKind.CyclotomicProduct:
            return sum(int(sympy.totient(d)) for d in range(1, v + 1))
        if self.kind is FamilyKind.TotallyPositiveMinPoly:
            return (v - 1) // 2
        return v

    def members_by_degree(self, n_min: int, n_max: int) -> Iterator[FamilyMember]:
        """Members whose degree lies in [n_min, n_max]; degree grows with the parameter."""
        if self.kind is FamilyKind.Custom:
            if n_min <= self.custom.degree <= n_max:
                yield self.member()
            return
        v = 3 if self.kind is FamilyKind.TotallyPositiveMinPoly else (1 if self.kind in (FamilyKind.CyclotomicProduct, FamilyKind.PowerMinusOne) else 0)
        while True:
            try:
                d = self.degree_of(v)
            except FamilyError:
                v += 1
                continue
            if d > n_max:
                return
            if d >= n_min:
                yield self.member(v)
            v += 1


_SPEC_RE = re.compile(r"^\s*([a-z0-9]+)\s*(?::\s*([a-z])\s*=\s*(-?\d+))?\s*(?:,\s*shift\s*=\s*(-?\d+))?\s*$")


def parse_family(text: str, shift_by: int = 0) -> FamilySpec:
    """Parse ``cycloprod:k=200``, ``chebyshev:n=101``, ``trace:p=97``, ``powm1:n=64``.

    The parameter may be omitted (``chebyshev``) when an n-range is supplied
    separately. ``shiftcheb`` is t_n moved to [0, 4]. ``,shift=c`` adds a
    further integer shift.
    """
    m = _SPEC_RE.match(text)
    if not m:
        raise FamilyError(f"cannot parse family {text!r}")
    name, pname, val, sh = m.groups()
    try:
        kind = FamilyKind(name)
    except ValueError:
        raise FamilyError(f"unknown family {name!r}") from None
    if kind is FamilyKind.Custom:
        raise FamilyError("custom families are built from a polynomial, not parsed")
    if pname is not None and pname != _PARAM_NAME[kind]:
        raise FamilyError(f"family {name} takes parameter {_PARAM_NAME[kind]}, not {pname}")
    total_shift = shift_by + (int(sh) if sh else 0)
    return FamilySpec(kind, int(val) if val is not None else None, total_shift)
