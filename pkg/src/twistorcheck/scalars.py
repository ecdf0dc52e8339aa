"""Scalar arithmetic for the two numeric backends.

Float mode uses Python ``complex``/``float``; exact mode uses
``fractions.Fraction`` for reals and :class:`GaussianRational` for complex
values.  The helpers here dispatch on type so polynomial and linear-algebra
code can stay backend-agnostic.
"""

from __future__ import annotations

import math
from fractions import Fraction


class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            if im != 0:
                raise TypeError("cannot combine GaussianRational with extra imaginary part")
            self.re, self.im = re.re, re.im
            return
        if isinstance(re, float) or isinstance(im, float):
            raise TypeError("GaussianRational does not accept floats; use exact input")
        self.re = Fraction(re)
        self.im = Fraction(im)

    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational((self.re * o.re + self.im * o.im) / n,
                                (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"GR({self.re})"
        return f"GR({self.re}, {self.im})"


GR_ZERO = GaussianRational(0)
GR_ONE = GaussianRational(1)
GR_I = GaussianRational(0, 1)


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, GaussianRational))


def conj_of(x):
    if isinstance(x, (GaussianRational, complex)):
        return x.conjugate()
    return x


def real_of(x):
    if isinstance(x, GaussianRational):
        return x.re
    if isinstance(x, complex):
        return x.real
    return x


def imag_of(x):
    if isinstance(x, GaussianRational):
        return x.im
    if isinstance(x, complex):
        return x.imag
    if isinstance(x, (int, Fraction)):
        return Fraction(0)
    return 0.0


def abs2(x):
    """Squared modulus; exact for exact inputs."""
    if isinstance(x, GaussianRational):
        return x.norm_sq()
    if isinstance(x, complex):
        return x.real * x.real + x.imag * x.imag
    return x * x


def to_complex(x) -> complex:
    if isinstance(x, GaussianRational):
        return complex(x)
    return complex(x)


def make_complex(re, im, exact: bool):
    if exact:
        return GaussianRational(re, im)
    return complex(re, im)


def scalar_is_zero(x, tol: float = 0.0) -> bool:
    if is_exact(x):
        return x == 0
    return abs(x) <= tol


def exact_sqrt(f: Fraction):
    """Square root of a nonnegative rational, or None if not a perfect square."""
    f = Fraction(f)
    if f < 0:
        return None
    if f == 0:
        return Fraction(0)
    ns = math.isqrt(f.numerator)
    ds = math.isqrt(f.denominator)
    if ns * ns == f.numerator and ds * ds == f.denominator:
        return Fraction(ns, ds)
    return None


def gaussian_sqrt(g: GaussianRational):
    """Exact square root of a Gaussian rational, or None if not a perfect square."""
    if not isinstance(g, GaussianRational):
        g = GaussianRational(g)
    if g.im == 0 and g.re >= 0:
        r = exact_sqrt(g.re)
        return None if r is None else GaussianRational(r)
    # (p + qi)^2 = (p^2 - q^2) + 2pq i with p^2 + q^2 = |g|
    n = exact_sqrt(g.norm_sq())
    if n is None:
        return None
    p2 = (n + g.re) / 2
    q2 = (n - g.re) / 2
    p = exact_sqrt(p2)
    q = exact_sqrt(q2)
    if p is None or q is None:
        return None
    if g.im < 0:
        q = -q
    cand = GaussianRational(p, q)
    if cand * cand == g:
        return cand
    return None


def parse_exact_scalar(text: str) -> GaussianRational:
    """Parse strings like '3/4', '-i', '1/2+3/4i', '2-1/3i'."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    # split into real and imaginary summands at a top-level +/- (not at index 0)
    split_at = None
    for k in range(1, len(s)):
        if s[k] in "+-":
            split_at = k
    if split_at is not None and s.endswith(("i", "I", "j", "J")):
        re_part, im_part = s[:split_at], s[split_at:]
    elif s.endswith(("i", "I", "j", "J")):
        re_part, im_part = "", s
    else:
        re_part, im_part = s, ""
    re = Fraction(re_part) if re_part else Fraction(0)
    if im_part:
        body = im_part[:-1]
        if body in ("", "+"):
            im = Fraction(1)
        elif body == "-":
            im = Fraction(-1)
        else:
            im = Fraction(body)
    else:
        im = Fraction(0)
    return GaussianRational(re, im)
