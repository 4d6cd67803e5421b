"""Exact arithmetic on polynomials with integer coefficients.

Coefficients are stored low-to-high as Python ints, so every operation here
is exact. Floating point only enters through :func:`evaluate` at non-integer
points and through :func:`log_abs`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

__all__ = [
    "IntPolynomial",
    "BigLog",
    "PolynomialParseError",
    "parse_polynomial",
    "evaluate",
    "derivative",
    "resultant",
    "discriminant",
    "discriminant_of_product",
    "has_simple_zeros",
    "is_squarefree_mod",
    "log_abs",
]

_LOG2 = math.log(2.0)


class PolynomialParseError(ValueError):
    """Raised for malformed polynomial text; carries the 1-based column."""

    def __init__(self, message: str, text: str, column: int):
        self.text = text
        self.column = column
        super().__init__(f"{message} at line 1, column {column}: {text!r}")


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial, ``coeffs[k]`` is the coefficient of ``z**k``.

    Trailing zeros are stripped on construction, so the zero polynomial is the
    empty tuple and has degree -1.
    """

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- construction helpers -------------------------------------------------

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "IntPolynomial":
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Sequence[int], lead: int = 1) -> "IntPolynomial":
        p = cls([lead])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    # -- basic properties -----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def constant(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    @property
    def is_real(self) -> bool:
        return True

    def max_bits(self) -> int:
        """Bit length of the largest coefficient in absolute value."""
        return max((abs(c).bit_length() for c in self.coeffs), default=0)

    def content(self) -> int:
        return reduce(math.gcd, self.coeffs, 0)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(out)

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial([-c for c in self.coeffs])

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial([c * other for c in self.coeffs])
        return IntPolynomial(_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "IntPolynomial":
        if k < 0:
            raise ValueError("negative power")
        out = IntPolynomial([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other: "IntPolynomial"):
        """Division by a polynomial whose leading coefficient is +-1, or exact
        division otherwise (raises if a non-integer quotient would appear)."""
        q, r = _divmod_int(self.coeffs, other.coeffs)
        return IntPolynomial(q), IntPolynomial(r)

    def exact_div(self, other: "IntPolynomial") -> "IntPolynomial":
        q, r = divmod(self, other)
        if not r.is_zero:
            raise ArithmeticError("division is not exact")
        return q

    def __call__(self, z):
        return evaluate(self, z)

    def derivative(self) -> "IntPolynomial":
        return derivative(self)

    def compose_shift(self, c: int) -> "IntPolynomial":
        """Return ``p(z - c)`` exactly (zeros move by ``+c``)."""
        out: list[int] = []
        # Horner with the linear factor (z - c)
        for a in reversed(self.coeffs):
            nxt = [0] * (len(out) + 1)
            for i, v in enumerate(out):
                nxt[i + 1] += v
                nxt[i] -= c * v
            nxt[0] += a
            out = nxt
        return IntPolynomial(out)

    def reversed(self) -> "IntPolynomial":
        return IntPolynomial(self.coeffs[::-1])

    # -- text form ------------------------------------------------------------

    def to_csv(self) -> str:
        return ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    def to_symbolic(self, var: str = "z") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += sign + body
        return text

    def __str__(self) -> str:
        return self.to_symbolic()

    def __repr__(self) -> str:
        return f"IntPolynomial({self.to_symbolic()!r})"


# ---------------------------------------------------------------------------
# parsing

_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+)\s*(?P<star>\*)?\s*)?
        (?P<var>[a-zA-Z])?
        (?:\s*(?:\^|\*\*)\s*(?P<exp>\d+))?
        \s*""",
    re.VERBOSE,
)


def parse_polynomial(text: str) -> IntPolynomial:
    """Parse ``"c0,c1,...,cn"`` (low to high) or a symbolic form like
    ``"z^4+z^3-z-1"`` / ``"3*x**2 - 2"``."""
    s = text.strip()
    if not s:
        raise PolynomialParseError("empty polynomial", text, 1)
    if "," in s or re.fullmatch(r"[+-]?\d+", s):
        coeffs = []
        pos = 0
        for field in s.split(","):
            col = text.find(field, pos) + 1 if field else pos + 1
            f = field.strip()
            if not re.fullmatch(r"[+-]?\d+", f):
                raise PolynomialParseError("expected an integer coefficient", text, max(col, 1))
            coeffs.append(int(f))
            pos += len(field) + 1
        return IntPolynomial(coeffs)
    return _parse_symbolic(text)


def _parse_symbolic(text: str) -> IntPolynomial:
    terms: dict[int, int] = {}
    var_seen: str | None = None
    pos = 0
    n = len(text)
    first = True
    while pos < n:
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos:
            raise PolynomialParseError("unexpected character", text, pos + 1)
        sign, coef, star, var, exp = (m.group(g) for g in ("sign", "coef", "star", "var", "exp"))
        if sign is None and not first:
            raise PolynomialParseError("expected '+' or '-'", text, m.start() + 1)
        if coef is None and var is None:
            raise PolynomialParseError("expected a term", text, m.start() + 1)
        if star and var is None:
            raise PolynomialParseError("dangling '*'", text, m.end() + 1)
        if exp is not None and var is None:
            raise PolynomialParseError("exponent without variable", text, m.start() + 1)
        if var is not None:
            if var_seen is None:
                var_seen = var
            elif var != var_seen:
                raise PolynomialParseError(f"mixed variables {var_seen!r} and {var!r}", text,
                                           m.start("var") + 1)
        c = int(coef) if coef is not None else 1
        if sign == "-":
            c = -c
        k = 0 if var is None else (int(exp) if exp is not None else 1)
        terms[k] = terms.get(k, 0) + c
        pos = m.end()
        first = False
    deg = max(terms) if terms else 0
    coeffs = [0] * (deg + 1)
    for k, c in terms.items():
        coeffs[k] = c
    return IntPolynomial(coeffs)


# ---------------------------------------------------------------------------
# kernels on coefficient tuples


def _mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    if len(a) < len(b):
        a, b = b, a
    out = [0] * (len(a) + len(b) - 1)
    for j, y in enumerate(b):
        if y:
            for i, x in enumerate(a):
                out[i + j] += x * y
    return out


def _divmod_int(a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    if len(r) - 1 < db:
        return [], r
    q = [0] * (len(r) - db)
    for i in range(len(q) - 1, -1, -1):
        top = r[i + db]
        if top == 0:
            continue
        c, rem = divmod(top, lb)
        if rem:
            raise ArithmeticError("non-integer quotient in polynomial division")
        q[i] = c
        for j in range(db + 1):
            r[i + j] -= c * b[j]
    return q, r[:db]


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of ``lc(b)**(deg a - deg b + 1) * a`` by ``b``."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(r) - 1 - db + 1
    while len(r) - 1 >= db and r:
        top = r[-1]
        # r <- lb*r - top*z^k*b
        k = len(r) - 1 - db
        r = [lb * c for c in r]
        for j in range(db + 1):
            r[k + j] -= top * b[j]
        r.pop()
        while r and r[-1] == 0:
            r.pop()
        e -= 1
    if e > 0:
        f = lb**e
        r = [f * c for c in r]
    return r


def _strip(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


# ---------------------------------------------------------------------------
# operations


def evaluate(p: IntPolynomial, z) -> complex:
    """Horner evaluation; exact for integer and Gaussian-integer points."""
    if isinstance(z, complex) and z.real.is_integer() and z.imag.is_integer():
        zr, zi = int(z.real), int(z.imag)
        if zi == 0:
            z = zr
        else:
            ar, ai = 0, 0
            for c in reversed(p.coeffs):
                ar, ai = ar * zr - ai * zi + c, ar * zi + ai * zr
            return complex(_to_float(ar), _to_float(ai))
    if isinstance(z, float) and z.is_integer():
        z = int(z)
    if isinstance(z, int):
        acc = 0
        for c in reversed(p.coeffs):
            acc = acc * z + c
        return complex(_to_float(acc), 0.0)
    acc = 0j
    z = complex(z)
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return acc


def _to_float(i: int) -> float:
    try:
        return float(i)
    except OverflowError:
        return math.inf if i > 0 else -math.inf


def derivative(p: IntPolynomial) -> IntPolynomial:
    return IntPolynomial([k * c for k, c in enumerate(p.coeffs)][1:])


def resultant(p: IntPolynomial, q: IntPolynomial) -> int:
    """Exact resultant via the subresultant pseudo-remainder sequence."""
    if p.is_zero or q.is_zero:
        return 0
    a, b = list(p.coeffs), list(q.coeffs)
    da, db = len(a) - 1, len(b) - 1
    if da == 0 and db == 0:
        return 1
    s = 1
    if da < db:
        a, b = b, a
        da, db = db, da
        if (da * db) % 2:
            s = -1
    if db == 0:
        return s * b[0] ** da
    ca = reduce(math.gcd, a, 0)
    cb = reduce(math.gcd, b, 0)
    a = [c // ca for c in a]
    b = [c // cb for c in b]
    t = ca**db * cb**da
    g = h = 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = _prem(a, b)
        if not r:
            return 0
        a = b
        div = g * h**delta
        b = [c // div for c in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = g**delta // h ** (delta - 1)
        if len(b) == 1:
            dA = len(a) - 1
            if dA == 1:
                h = b[0]
            else:
                h = b[0] ** dA // h ** (dA - 1)
            return s * t * h


def discriminant(p: IntPolynomial) -> int:
    """``(-1)**(n(n-1)/2) * Res(p, p') / a_n`` for ``deg p >= 2``."""
    n = p.degree
    if n < 2:
        raise ValueError("discriminant needs degree >= 2")
    res = resultant(p, derivative(p))
    q, r = divmod(res, p.leading)
    assert r == 0
    return -q if (n * (n - 1) // 2) % 2 else q


def discriminant_of_product(factors: Sequence[IntPolynomial], cache: dict | None = None) -> int:
    """Discriminant of a product from its factors:
    ``Disc(FG) = Disc(F) Disc(G) Res(F, G)**2``. Linear factors count as 1.

    ``cache`` (keyed by coefficient tuples) lets sweeps reuse pairwise
    resultants across overlapping factor lists.
    """
    if cache is None:
        cache = {}
    out = 1
    for i, f in enumerate(factors):
        if f.degree >= 2:
            key = ("disc", f.coeffs)
            if key not in cache:
                cache[key] = discriminant(f)
            out *= cache[key]
        for g in factors[i + 1:]:
            key = ("res", f.coeffs, g.coeffs)
            if key not in cache:
                cache[key] = resultant(f, g)
            out *= cache[key] ** 2
    return out


def is_squarefree_mod(p: IntPolynomial, prime: int) -> bool | None:
    """Sufficient test for simple zeros: ``gcd(p, p') == 1`` modulo ``prime``.

    Returns True when the modular gcd is trivial (which proves p squarefree
    over Q), None when inconclusive.
    """
    n = p.degree
    if n < 1 or p.leading % prime == 0 or n % prime == 0:
        return None
    a = [c % prime for c in p.coeffs]
    b = [(k * c) % prime for k, c in enumerate(p.coeffs)][1:]
    _strip(b)
    while b:
        if len(b) == 1:
            return True
        inv = pow(b[-1], -1, prime)
        db = len(b) - 1
        while len(a) - 1 >= db:
            f = a[-1] * inv % prime
            k = len(a) - 1 - db
            if f:
                for j in range(db):
                    a[k + j] = (a[k + j] - f * b[j]) % prime
            a.pop()
            _strip(a)
            if not a:
                break
        a, b = b, a
    return None


_PRIMES = (2305843009213693951, 4611686018427387847, 9223372036854775783)


def has_simple_zeros(p: IntPolynomial) -> bool:
    """True iff the discriminant is nonzero (always True in degree 1)."""
    n = p.degree
    if n < 1:
        raise ValueError("has_simple_zeros needs degree >= 1")
    if n == 1:
        return True
    for prime in _PRIMES:
        if is_squarefree_mod(p, prime):
            return True
    d = discriminant(p)
    if d != 0:
        assert abs(d) >= 1
    return d != 0


@dataclass(frozen=True)
class BigLog:
    """Natural log of ``|i|`` for an arbitrarily large nonzero integer."""

    value: float
    relative_error: float


def log_abs(i: int) -> BigLog:
    if i == 0:
        raise ValueError("log of zero")
    i = abs(i)
    b = i.bit_length()
    if b <= 53:
        return BigLog(math.log(i), 2.3e-16)
    shift = max(0, b - 64)
    mantissa = i >> shift  # top 64 bits, < 2**64
    value = math.log(mantissa) + shift * _LOG2
    return BigLog(value, 1e-15)
