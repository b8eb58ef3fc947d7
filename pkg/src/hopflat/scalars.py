"""Scalar fields: exact Gaussian rationals and double-precision complex.

Every quantity in the package is a linear combination over one of two
coefficient fields:

* ``EXACT``  -- Gaussian rationals, stored as an integer triple
  ``(a + b*i)/d`` with lazy gcd reduction (multiplication then needs no gcd,
  which dominates the contraction workloads).  Valid whenever all structure
  constants are Gaussian-rational, which holds for group algebras over Z2,
  Z2xZ2, Z4, S3, their duals, doubles and the twists shipped here.
* ``APPROX`` -- Python ``complex`` with a tolerance (default ``EPS_TOL``).

Code elsewhere is written against the small ``Field`` interface below so the
two modes stay interchangeable.
"""

from __future__ import annotations

import math
from fractions import Fraction

#: default tolerance used by all approximate equality tests
EPS_TOL = 1e-9

#: denominators above this trigger gcd reduction after arithmetic
_REDUCE_LIMIT = 1 << 128


class GaussRat:
    """A Gaussian rational ``(a + b*i)/d`` with integer components, d > 0."""

    __slots__ = ("a", "b", "d")

    def __init__(self, re=0, im=0):
        if isinstance(re, int) and isinstance(im, int):
            self.a, self.b, self.d = re, im, 1
            return
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // math.gcd(re.denominator,
                                                        im.denominator)
        self.a = re.numerator * (d // re.denominator)
        self.b = im.numerator * (d // im.denominator)
        self.d = d

    @classmethod
    def _raw(cls, a, b, d):
        self = cls.__new__(cls)
        if d < 0:
            a, b, d = -a, -b, -d
        if d > _REDUCE_LIMIT:
            g = math.gcd(math.gcd(a, b), d)
            if g > 1:
                a, b, d = a // g, b // g, d // g
        self.a, self.b, self.d = a, b, d
        return self

    def _reduced(self):
        g = math.gcd(math.gcd(self.a, self.b), self.d)
        if g > 1:
            return self.a // g, self.b // g, self.d // g
        return self.a, self.b, self.d

    @property
    def re(self):
        return Fraction(self.a, self.d)

    @property
    def im(self):
        return Fraction(self.b, self.d)

    # -- field operations -------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if self.d == other.d:
            return GaussRat._raw(self.a + other.a, self.b + other.b, self.d)
        return GaussRat._raw(self.a * other.d + other.a * self.d,
                             self.b * other.d + other.b * self.d,
                             self.d * other.d)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat._raw(-self.a, -self.b, self.d)

    def __sub__(self, other):
        other = _coerce(other)
        if self.d == other.d:
            return GaussRat._raw(self.a - other.a, self.b - other.b, self.d)
        return GaussRat._raw(self.a * other.d - other.a * self.d,
                             self.b * other.d - other.b * self.d,
                             self.d * other.d)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        return GaussRat._raw(self.a * other.a - self.b * other.b,
                             self.a * other.b + self.b * other.a,
                             self.d * other.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        n = other.a * other.a + other.b * other.b
        if n == 0:
            raise ZeroDivisionError("division by zero GaussRat")
        return GaussRat._raw((self.a * other.a + self.b * other.b) * other.d,
                             (self.b * other.a - self.a * other.b) * other.d,
                             self.d * n)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def conjugate(self):
        return GaussRat._raw(self.a, -self.b, self.d)

    # -- comparisons / hashing --------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (GaussRat, int, Fraction)):
            other = _coerce(other)
            return (self.a * other.d == other.a * self.d
                    and self.b * other.d == other.b * self.d)
        return NotImplemented

    def __hash__(self):
        return hash(self._reduced())

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __abs__(self):
        return math.hypot(self.a / self.d, self.b / self.d)

    def __complex__(self):
        return complex(self.a / self.d, self.b / self.d)

    def __repr__(self):
        if self.b == 0:
            return f"GaussRat({self.re})"
        return f"GaussRat({self.re}, {self.im})"


def _coerce(x):
    if isinstance(x, GaussRat):
        return x
    if isinstance(x, int):
        return GaussRat(x)
    if isinstance(x, Fraction):
        return GaussRat(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to GaussRat")


class Field:
    """Coefficient-field interface: promotion, zero tests, serialization."""

    def __init__(self, name, zero, one, of, is_exact):
        self.name = name
        self.zero = zero
        self.one = one
        self.of = of
        self.is_exact = is_exact

    def __repr__(self):
        return f"Field({self.name})"

    def is_zero(self, x, tol=EPS_TOL):
        if self.is_exact:
            return not bool(x)
        return abs(x) <= tol

    def inv(self, x):
        return self.one / x

    def to_complex(self, x):
        return complex(x)

    def rand(self, rng):
        """Small random scalar, reproducible from ``rng``."""
        if self.is_exact:
            return GaussRat(
                Fraction(rng.randint(-4, 4), rng.randint(1, 4)),
                Fraction(rng.randint(-4, 4), rng.randint(1, 4)),
            )
        return complex(rng.uniform(-1, 1), rng.uniform(-1, 1))

    # structure constants serialize as numbers, "p/q" strings, or
    # [re, im] pairs of either
    def to_json(self, x):
        if self.is_exact:
            re, im = x.re, x.im
            re_j = int(re) if re.denominator == 1 else str(re)
            if im == 0:
                return re_j
            im_j = int(im) if im.denominator == 1 else str(im)
            return [re_j, im_j]
        if x.imag == 0:
            v = x.real
            return int(v) if v == int(v) else v
        return [x.real, x.imag]

    def from_json(self, j):
        if isinstance(j, list):
            re, im = j
        else:
            re, im = j, 0
        if self.is_exact:
            conv = lambda v: Fraction(v) if isinstance(v, str) else Fraction(v)
            return GaussRat(conv(re), conv(im))
        conv = lambda v: float(Fraction(v)) if isinstance(v, str) else float(v)
        return complex(conv(re), conv(im))


def _exact_of(x):
    if isinstance(x, GaussRat):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussRat(x)
    raise TypeError(f"exact field cannot represent {type(x).__name__}")


def _approx_of(x):
    return complex(x)


EXACT = Field("exact", GaussRat(0), GaussRat(1), _exact_of, True)
APPROX = Field("approx", 0j, 1 + 0j, _approx_of, False)

FIELDS = {"exact": EXACT, "approx": APPROX}
