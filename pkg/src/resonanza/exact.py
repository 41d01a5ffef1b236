"""
Exact scalars
-------------

Coefficients of every polynomial in the package live in Q(i, sqrt 2).
Matrices of the su(2) representations need arbitrary square roots of
integers, which are handled by :class:`RadicalComplex`.

Rationals are ``gmpy2.mpq`` throughout; Python ints and ``Fraction`` are
accepted anywhere a rational is expected.
"""

from __future__ import annotations

from numbers import Rational

from gmpy2 import mpq

_ZERO = mpq(0)
_ONE = mpq(1)
_TWO = mpq(2)


def to_mpq(x) -> mpq:
    """Convert int, Fraction, mpq or a ``"p/q"`` string to ``mpq``."""
    if isinstance(x, str):
        x = x.strip()
        if "." in x or "e" in x.lower():
            raise ValueError(f"rational expected, got decimal literal {x!r}")
        return mpq(x)
    if isinstance(x, (int, Rational)) or type(x) is type(_ZERO):
        return mpq(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rational(x) -> str:
    """``"p/q"`` with q >= 1, always including the denominator."""
    x = mpq(x)
    return f"{x.numerator}/{x.denominator}"


class ExactComplex:
    """
    Element ``(re + i*im) + sqrt(2)*(re_s2 + i*im_s2)`` of Q(i, sqrt 2).

    Treat values as immutable. The sqrt(2) parts stay zero unless a transform
    with sqrt(2) entries introduced them.
    """

    __slots__ = ("re", "im", "re_s2", "im_s2")

    def __init__(self, re=0, im=0, re_s2=0, im_s2=0):
        self.re = to_mpq(re)
        self.im = to_mpq(im)
        self.re_s2 = to_mpq(re_s2)
        self.im_s2 = to_mpq(im_s2)

    @classmethod
    def _raw(cls, re, im, re_s2=_ZERO, im_s2=_ZERO) -> "ExactComplex":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        obj.re_s2 = re_s2
        obj.im_s2 = im_s2
        return obj

    @classmethod
    def coerce(cls, x) -> "ExactComplex":
        if isinstance(x, ExactComplex):
            return x
        if isinstance(x, complex):
            raise TypeError("floating-point complex values are not exact")
        if isinstance(x, float):
            raise TypeError("floating-point values are not exact")
        return cls._raw(to_mpq(x), _ZERO)

    # -- predicates -------------------------------------------------------

    @property
    def has_sqrt2(self) -> bool:
        return bool(self.re_s2) or bool(self.im_s2)

    def is_zero(self) -> bool:
        return not (self.re or self.im or self.re_s2 or self.im_s2)

    def is_real(self) -> bool:
        return not (self.im or self.im_s2)

    def is_rational(self) -> bool:
        return not (self.im or self.re_s2 or self.im_s2)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ExactComplex):
            try:
                other = ExactComplex.coerce(other)
            except TypeError:
                return NotImplemented
        return ExactComplex._raw(self.re + other.re, self.im + other.im,
                                 self.re_s2 + other.re_s2, self.im_s2 + other.im_s2)

    __radd__ = __add__

    def __neg__(self):
        return ExactComplex._raw(-self.re, -self.im, -self.re_s2, -self.im_s2)

    def __sub__(self, other):
        if not isinstance(other, ExactComplex):
            try:
                other = ExactComplex.coerce(other)
            except TypeError:
                return NotImplemented
        return ExactComplex._raw(self.re - other.re, self.im - other.im,
                                 self.re_s2 - other.re_s2, self.im_s2 - other.im_s2)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ExactComplex):
            try:
                other = ExactComplex.coerce(other)
            except TypeError:
                return NotImplemented
        a, b = self.re, self.im
        c, d = other.re, other.im
        if not (self.re_s2 or self.im_s2 or other.re_s2 or other.im_s2):
            return ExactComplex._raw(a * c - b * d, a * d + b * c)
        # (x + y r)(u + v r) with r = sqrt 2 and x, y, u, v Gaussian
        e, f = self.re_s2, self.im_s2
        g, h = other.re_s2, other.im_s2
        re = a * c - b * d + 2 * (e * g - f * h)
        im = a * d + b * c + 2 * (e * h + f * g)
        re2 = a * g - b * h + e * c - f * d
        im2 = a * h + b * g + e * d + f * c
        return ExactComplex._raw(re, im, re2, im2)

    __rmul__ = __mul__

    def inverse(self) -> "ExactComplex":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if not self.has_sqrt2:
            den = self.re * self.re + self.im * self.im
            return ExactComplex._raw(self.re / den, -self.im / den)
        x = ExactComplex._raw(self.re, self.im)
        y = ExactComplex._raw(self.re_s2, self.im_s2)
        # 1/(x + y r) = (x - y r) / (x^2 - 2 y^2)
        norm_inv = (x * x - y * y * 2).inverse()
        out = ExactComplex._raw(x.re, x.im, -y.re, -y.im) * norm_inv
        return out

    def __truediv__(self, other):
        if not isinstance(other, ExactComplex):
            try:
                other = ExactComplex.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return ExactComplex.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "ExactComplex":
        return ExactComplex._raw(self.re, -self.im, self.re_s2, -self.im_s2)

    def real_part(self) -> "ExactComplex":
        return ExactComplex._raw(self.re, _ZERO, self.re_s2, _ZERO)

    def imag_part(self) -> "ExactComplex":
        return ExactComplex._raw(self.im, _ZERO, self.im_s2, _ZERO)

    # -- comparison / conversion -----------------------------------------

    def _key(self):
        return (self.re, self.im, self.re_s2, self.im_s2)

    def __eq__(self, other):
        if not isinstance(other, ExactComplex):
            try:
                other = ExactComplex.coerce(other)
            except TypeError:
                return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if not (self.im or self.re_s2 or self.im_s2):
            return hash(self.re)
        return hash(self._key())

    def __complex__(self):
        s2 = 2 ** 0.5
        return complex(float(self.re) + s2 * float(self.re_s2),
                       float(self.im) + s2 * float(self.im_s2))

    def to_rational(self) -> mpq:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.re

    def fields(self) -> dict:
        """JSON fields; sqrt(2) parts only when nonzero."""
        out = {"re": format_rational(self.re), "im": format_rational(self.im)}
        if self.re_s2:
            out["re_s2"] = format_rational(self.re_s2)
        if self.im_s2:
            out["im_s2"] = format_rational(self.im_s2)
        return out

    @classmethod
    def from_fields(cls, d: dict) -> "ExactComplex":
        return cls(d.get("re", "0/1"), d.get("im", "0/1"),
                   d.get("re_s2", "0/1"), d.get("im_s2", "0/1"))

    def __repr__(self):
        return f"ExactComplex({self})"

    def __str__(self):
        parts = []
        for val, unit in ((self.re, ""), (self.im, "i"),
                          (self.re_s2, "sqrt2"), (self.im_s2, "i*sqrt2")):
            if val:
                s = str(val) if not unit else (f"{val}*{unit}" if val != 1 else unit)
                parts.append(s)
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")


ZERO = ExactComplex._raw(_ZERO, _ZERO)
ONE = ExactComplex._raw(_ONE, _ZERO)
I = ExactComplex._raw(_ZERO, _ONE)
SQRT2 = ExactComplex._raw(_ZERO, _ZERO, _ONE, _ZERO)
INV_SQRT2 = ExactComplex._raw(_ZERO, _ZERO, mpq(1, 2), _ZERO)


def exact(x) -> ExactComplex:
    return ExactComplex.coerce(x)


# ---------------------------------------------------------------------------
# sums of square roots


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return (s, r) with n == s*s*r and r squarefree."""
    if n <= 0:
        raise ValueError("radicand must be positive")
    s, r, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            r *= p
        p += 1
    return s, r * n


class RadicalComplex:
    """
    Finite sum ``sum_r c_r * sqrt(r)`` with squarefree ``r`` and Gaussian
    rational ``c_r``. Square roots of distinct squarefree integers are
    linearly independent over Q(i), so equality is exact.
    """

    __slots__ = ("parts",)

    def __init__(self, parts=None):
        clean = {}
        for r, c in (parts or {}).items():
            c = ExactComplex.coerce(c)
            if c.has_sqrt2:
                raise ValueError("use radicand 2 instead of sqrt2 components")
            if c:
                clean[r] = c
        self.parts = clean

    @classmethod
    def sqrt(cls, n, coeff=1) -> "RadicalComplex":
        """``coeff * sqrt(n)`` for a nonnegative rational n."""
        n = to_mpq(n)
        if n == 0:
            return cls()
        if n < 0:
            raise ValueError("negative radicand")
        num, den = int(n.numerator), int(n.denominator)
        # sqrt(num/den) = sqrt(num*den)/den
        s, r = _squarefree_split(num * den)
        return cls({r: ExactComplex.coerce(coeff) * mpq(s, den)})

    @classmethod
    def coerce(cls, x) -> "RadicalComplex":
        if isinstance(x, RadicalComplex):
            return x
        return cls({1: ExactComplex.coerce(x)})

    def __add__(self, other):
        other = RadicalComplex.coerce(other)
        out = dict(self.parts)
        for r, c in other.parts.items():
            out[r] = out[r] + c if r in out else c
        return RadicalComplex(out)

    __radd__ = __add__

    def __neg__(self):
        return RadicalComplex({r: -c for r, c in self.parts.items()})

    def __sub__(self, other):
        return self + (-RadicalComplex.coerce(other))

    def __rsub__(self, other):
        return RadicalComplex.coerce(other) - self

    def __mul__(self, other):
        other = RadicalComplex.coerce(other)
        out = {}
        for r1, c1 in self.parts.items():
            for r2, c2 in other.parts.items():
                s, r = _squarefree_split(r1 * r2)
                c = c1 * c2 * s
                out[r] = out[r] + c if r in out else c
        return RadicalComplex(out)

    __rmul__ = __mul__

    def conjugate(self):
        return RadicalComplex({r: c.conjugate() for r, c in self.parts.items()})

    def is_zero(self) -> bool:
        return not self.parts

    def __bool__(self):
        return bool(self.parts)

    def __eq__(self, other):
        try:
            other = RadicalComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self):
        return hash(frozenset(self.parts.items()))

    def __complex__(self):
        return sum((complex(c) * (r ** 0.5) for r, c in self.parts.items()), 0j)

    def as_exact(self) -> ExactComplex:
        """Value as an element of Q(i, sqrt 2), when it lies there."""
        if set(self.parts) - {1, 2}:
            raise ValueError(f"{self} is not in Q(i, sqrt 2)")
        c1 = self.parts.get(1, ZERO)
        c2 = self.parts.get(2, ZERO)
        return c1 + c2 * SQRT2

    def __repr__(self):
        if not self.parts:
            return "0"
        return " + ".join(f"({c})" + ("" if r == 1 else f"*sqrt({r})")
                          for r, c in sorted(self.parts.items()))


__all__ = [
    "ExactComplex", "RadicalComplex", "ZERO", "ONE", "I", "SQRT2", "INV_SQRT2",
    "exact", "to_mpq", "format_rational",
]
