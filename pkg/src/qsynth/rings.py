"""Exact arithmetic in Z[√2], Z[i], Z[ζ8], radical denominators, and heights.

All coefficients are arbitrary-precision Python ints (or Fractions for the
field-level helpers), so nothing here silently overflows.  Values are
immutable and hashable; they can be shared freely between workers.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

import mpmath

SQRT2 = math.sqrt(2.0)


def _rounddiv(x: int, n: int) -> int:
    """Round x/n to the nearest integer (ties away from zero is fine here)."""
    if n < 0:
        x, n = -x, -n
    return (2 * x + n) // (2 * n)


class ZRoot2:
    """a + b√2 with integer a, b."""

    __slots__ = ("a", "b")

    def __init__(self, a: int, b: int = 0) -> None:
        object.__setattr__(self, "a", int(a))
        object.__setattr__(self, "b", int(b))

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("ZRoot2 is immutable")

    def __repr__(self) -> str:
        return f"ZRoot2({self.a}, {self.b})"

    def __str__(self) -> str:
        return format_zroot2(self)

    @classmethod
    def coerce(cls, x: Union[int, "ZRoot2"]) -> "ZRoot2":
        return x if isinstance(x, ZRoot2) else cls(x)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.a == other and self.b == 0
        if isinstance(other, ZRoot2):
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __neg__(self) -> "ZRoot2":
        return ZRoot2(-self.a, -self.b)

    def __add__(self, other) -> "ZRoot2":
        o = ZRoot2.coerce(other)
        return ZRoot2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other) -> "ZRoot2":
        o = ZRoot2.coerce(other)
        return ZRoot2(self.a - o.a, self.b - o.b)

    def __rsub__(self, other) -> "ZRoot2":
        return (-self) + other

    def __mul__(self, other) -> "ZRoot2":
        o = ZRoot2.coerce(other)
        return ZRoot2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ZRoot2":
        if n < 0:
            raise ValueError("negative powers leave Z[√2]; invert units explicitly")
        result = ZRoot2(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "ZRoot2":
        """Galois conjugate: √2 ↦ −√2."""
        return ZRoot2(self.a, -self.b)

    def norm(self) -> int:
        """Field norm a² − 2b² (multiplicative, can be negative)."""
        return self.a * self.a - 2 * self.b * self.b

    def sign(self) -> int:
        """Exact sign of the real value a + b√2."""
        a, b = self.a, self.b
        if a == 0 and b == 0:
            return 0
        if a >= 0 and b >= 0:
            return 1
        if a <= 0 and b <= 0:
            return -1
        # mixed signs: compare a² with 2b²; equality is impossible (√2 irrational)
        s = 1 if a * a > 2 * b * b else -1
        return s if a > 0 else -s

    def to_float(self) -> float:
        return self.a + self.b * SQRT2

    def to_mpf(self, prec: int = 128) -> mpmath.mpf:
        with mpmath.workprec(prec):
            return mpmath.mpf(self.a) + mpmath.mpf(self.b) * mpmath.sqrt(2)

    def divisible_sqrt2(self) -> bool:
        return self.a % 2 == 0

    def div_sqrt2(self) -> "ZRoot2":
        """Exact division by √2; caller checks divisibility."""
        if self.a % 2 != 0:
            raise ValueError(f"{self} is not divisible by √2")
        return ZRoot2(self.b, self.a // 2)

    def mul_sqrt2(self) -> "ZRoot2":
        return ZRoot2(2 * self.b, self.a)

    def __divmod__(self, other) -> tuple["ZRoot2", "ZRoot2"]:
        o = ZRoot2.coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError
        p = self * o.conj()
        q = ZRoot2(_rounddiv(p.a, n), _rounddiv(p.b, n))
        return q, self - o * q

    def __floordiv__(self, other) -> "ZRoot2":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "ZRoot2":
        return divmod(self, other)[1]


ZROOT2_ONE = ZRoot2(1)
ZROOT2_SQRT2 = ZRoot2(0, 1)
ZROOT2_LAMBDA = ZRoot2(1, 1)  # fundamental unit 1 + √2


def galois_conj(x: ZRoot2) -> ZRoot2:
    """(a + b√2)• = a − b√2."""
    return x.conj()


def zroot2_gcd(x: ZRoot2, y: ZRoot2) -> ZRoot2:
    """Euclidean gcd in Z[√2] (unique up to units)."""
    a, b = x, y
    while b:
        a, b = b, a % b
    return a


def ord_sqrt2(x: ZRoot2) -> int:
    """√2-adic valuation of a nonzero element of Z[√2]."""
    if not x:
        raise ValueError("ord_√2(0) is undefined")
    e = 0
    while x.divisible_sqrt2():
        x = x.div_sqrt2()
        e += 1
    return e


def sqrt2_factor(x: ZRoot2) -> tuple[int, ZRoot2]:
    """Split nonzero x as √2^e · rest with rest not divisible by √2."""
    e = ord_sqrt2(x)
    for _ in range(e):
        x = x.div_sqrt2()
    return e, x


def unit_log(u: ZRoot2) -> int | None:
    """Exponent m with u = +(1+√2)^m, or None if u is not such a unit.

    Only totally positive units are powers of 1+√2; sign or non-unit inputs
    return None.  The float log is a hint only — the result is re-verified
    exactly.
    """
    if abs(u.norm()) != 1:
        return None
    if u.sign() <= 0:
        return None
    with mpmath.workprec(max(64, 4 * (u.a.bit_length() + u.b.bit_length()))):
        val = mpmath.mpf(u.a) + mpmath.mpf(u.b) * mpmath.sqrt(2)
        m = int(mpmath.nint(mpmath.log(val) / mpmath.log(1 + mpmath.sqrt(2))))
    lam = ZROOT2_LAMBDA
    if m >= 0:
        candidate = lam**m
    else:
        # (1+√2)^{-1} = √2 − 1
        candidate = ZRoot2(-1, 1) ** (-m)
    return m if candidate == u else None


class ZOmega:
    """c0 + c1ζ + c2ζ² + c3ζ³ in Z[ζ8], with ζ = exp(iπ/4), ζ⁴ = −1."""

    __slots__ = ("c0", "c1", "c2", "c3")

    def __init__(self, c0: int, c1: int = 0, c2: int = 0, c3: int = 0) -> None:
        object.__setattr__(self, "c0", int(c0))
        object.__setattr__(self, "c1", int(c1))
        object.__setattr__(self, "c2", int(c2))
        object.__setattr__(self, "c3", int(c3))

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("ZOmega is immutable")

    def coords(self) -> tuple[int, int, int, int]:
        return (self.c0, self.c1, self.c2, self.c3)

    def __repr__(self) -> str:
        return f"ZOmega{self.coords()}"

    def __str__(self) -> str:
        return format_zomega(self)

    @classmethod
    def coerce(cls, x: Union[int, "ZOmega"]) -> "ZOmega":
        return x if isinstance(x, ZOmega) else cls(x)

    @classmethod
    def from_zroot2(cls, x: ZRoot2) -> "ZOmega":
        # √2 = ζ − ζ³
        return cls(x.a, x.b, 0, -x.b)

    @classmethod
    def from_zi(cls, x: "ZI") -> "ZOmega":
        # i = ζ²
        return cls(x.re, 0, x.im, 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = ZOmega(other)
        if isinstance(other, ZOmega):
            return self.coords() == other.coords()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coords())

    def __bool__(self) -> bool:
        return any(self.coords())

    def __neg__(self) -> "ZOmega":
        return ZOmega(-self.c0, -self.c1, -self.c2, -self.c3)

    def __add__(self, other) -> "ZOmega":
        o = ZOmega.coerce(other)
        return ZOmega(self.c0 + o.c0, self.c1 + o.c1, self.c2 + o.c2, self.c3 + o.c3)

    __radd__ = __add__

    def __sub__(self, other) -> "ZOmega":
        return self + (-ZOmega.coerce(other))

    def __rsub__(self, other) -> "ZOmega":
        return (-self) + other

    def __mul__(self, other) -> "ZOmega":
        o = ZOmega.coerce(other)
        a0, a1, a2, a3 = self.coords()
        b0, b1, b2, b3 = o.coords()
        return ZOmega(
            a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1,
            a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2,
            a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3,
            a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
        )

    __rmul__ = __mul__

    def conj(self) -> "ZOmega":
        """Complex conjugate (ζ ↦ ζ⁻¹)."""
        return ZOmega(self.c0, -self.c3, -self.c2, -self.c1)

    def conj_root2(self) -> "ZOmega":
        """The √2 ↦ −√2 automorphism (ζ ↦ ζ³)."""
        return ZOmega(self.c0, self.c3, -self.c2, self.c1)

    def mul_zeta_pow(self, j: int) -> "ZOmega":
        """Multiply by ζ^j."""
        c = list(self.coords())
        for _ in range(j % 8):
            c = [-c[3], c[0], c[1], c[2]]
        return ZOmega(*c)

    def norm_sq(self) -> ZRoot2:
        """|z|² = z·z̄ as an exact element of Z[√2] (always real)."""
        p = self * self.conj()
        # real elements of Z[ζ8] have the form r0 + r1(ζ − ζ³)
        if p.c2 != 0 or p.c1 != -p.c3:
            raise ArithmeticError(f"norm_sq produced a non-real value {p!r}")
        return ZRoot2(p.c0, p.c1)

    def abs_norm(self) -> int:
        """|N_{Q(ζ8)/Q}(z)|, a nonnegative rational integer."""
        return abs(self.norm_sq().norm())

    def real_part_zroot2(self) -> ZRoot2 | None:
        """If z is real, return it as an element of Z[√2]; else None."""
        if self.c2 == 0 and self.c1 == -self.c3:
            return ZRoot2(self.c0, self.c1)
        return None

    def divisible_sqrt2(self) -> bool:
        return (self.c0 - self.c2) % 2 == 0 and (self.c1 - self.c3) % 2 == 0

    def div_sqrt2(self) -> "ZOmega":
        if not self.divisible_sqrt2():
            raise ValueError(f"{self!r} is not divisible by √2")
        c0, c1, c2, c3 = self.coords()
        # (√2·z)/2
        return ZOmega((c1 - c3) // 2, (c0 + c2) // 2, (c1 + c3) // 2, (c2 - c0) // 2)

    def mul_sqrt2(self) -> "ZOmega":
        c0, c1, c2, c3 = self.coords()
        return ZOmega(c1 - c3, c0 + c2, c1 + c3, c2 - c0)

    def divisible_int(self, n: int) -> bool:
        return all(c % n == 0 for c in self.coords())

    def div_int(self, n: int) -> "ZOmega":
        if not self.divisible_int(n):
            raise ValueError(f"{self!r} is not divisible by {n}")
        return ZOmega(*(c // n for c in self.coords()))

    def to_complex(self) -> complex:
        z8 = complex(SQRT2 / 2, SQRT2 / 2)
        return self.c0 + self.c1 * z8 + self.c2 * z8**2 + self.c3 * z8**3

    def to_mpc(self, prec: int = 128) -> mpmath.mpc:
        with mpmath.workprec(prec):
            z8 = mpmath.exp(mpmath.mpc(0, mpmath.pi / 4))
            return self.c0 + self.c1 * z8 + self.c2 * z8**2 + self.c3 * z8**3


ZOMEGA_ZETA8 = ZOmega(0, 1, 0, 0)
ZOMEGA_SQRT2 = ZOmega(0, 1, 0, -1)
ZOMEGA_I = ZOmega(0, 0, 1, 0)


class ZI:
    """Gaussian integer re + im·i."""

    __slots__ = ("re", "im")

    def __init__(self, re: int, im: int = 0) -> None:
        object.__setattr__(self, "re", int(re))
        object.__setattr__(self, "im", int(im))

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("ZI is immutable")

    def __repr__(self) -> str:
        return f"ZI({self.re}, {self.im})"

    @classmethod
    def coerce(cls, x: Union[int, "ZI"]) -> "ZI":
        return x if isinstance(x, ZI) else cls(x)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.re == other and self.im == 0
        if isinstance(other, ZI):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __neg__(self) -> "ZI":
        return ZI(-self.re, -self.im)

    def __add__(self, other) -> "ZI":
        o = ZI.coerce(other)
        return ZI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> "ZI":
        return self + (-ZI.coerce(other))

    def __rsub__(self, other) -> "ZI":
        return (-self) + other

    def __mul__(self, other) -> "ZI":
        o = ZI.coerce(other)
        return ZI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "ZI":
        return ZI(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def mul_i_pow(self, j: int) -> "ZI":
        re, im = self.re, self.im
        for _ in range(j % 4):
            re, im = -im, re
        return ZI(re, im)

    def divisible_int(self, n: int) -> bool:
        return self.re % n == 0 and self.im % n == 0

    def div_int(self, n: int) -> "ZI":
        if not self.divisible_int(n):
            raise ValueError(f"{self!r} is not divisible by {n}")
        return ZI(self.re // n, self.im // n)

    def divisible_one_plus_i(self) -> bool:
        return (self.re + self.im) % 2 == 0

    def div_one_plus_i(self) -> "ZI":
        # z/(1+i) = z(1−i)/2
        if not self.divisible_one_plus_i():
            raise ValueError(f"{self!r} is not divisible by 1+i")
        return ZI((self.re + self.im) // 2, (self.im - self.re) // 2)

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


class Denominated:
    """numerator / √base^k, stored in reduced form (k minimal, i.e. k = lde)."""

    __slots__ = ("numerator", "base", "k")

    def __init__(self, numerator: Union[ZOmega, ZI], base: int, k: int) -> None:
        if base not in (2, 5):
            raise ValueError("root base must be 2 or 5")
        if k < 0:
            raise ValueError("denominator exponent must be nonnegative")
        if base == 5 and not isinstance(numerator, ZI):
            raise TypeError("√5 denominators are only supported over Z[i]")
        num, k = self._reduce(numerator, base, k)
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "k", k)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("Denominated is immutable")

    @staticmethod
    def _reduce(num, base, k):
        if not num:
            return num, 0
        if base == 2 and isinstance(num, ZOmega):
            while k > 0 and num.divisible_sqrt2():
                num = num.div_sqrt2()
                k -= 1
        else:
            # over Z[i] a single √base step never lands back in the ring
            while k >= 2 and num.divisible_int(base):
                num = num.div_int(base)
                k -= 2
        return num, k

    def __repr__(self) -> str:
        return f"Denominated({self.numerator!r}, base={self.base}, k={self.k})"

    def __eq__(self, other) -> bool:
        if isinstance(other, Denominated):
            return (
                self.base == other.base
                and self.k == other.k
                and self.numerator == other.numerator
            )
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.base, self.k, self.numerator))


def lde(z: Denominated) -> int:
    """Least denominator exponent: min k with z·√base^k integral (0 for z = 0)."""
    return z.k


QRoot2Like = Union["QRoot2", ZRoot2, int, Fraction]


class QRoot2:
    """a + b√2 with rational a, b — the field Q(√2), used for heights and
    exact squared distances."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0) -> None:
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("QRoot2 is immutable")

    @classmethod
    def coerce(cls, x: QRoot2Like) -> "QRoot2":
        if isinstance(x, QRoot2):
            return x
        if isinstance(x, ZRoot2):
            return cls(x.a, x.b)
        return cls(x)

    def __repr__(self) -> str:
        return f"QRoot2({self.a}, {self.b})"

    def __eq__(self, other) -> bool:
        o = QRoot2.coerce(other) if isinstance(other, (QRoot2, ZRoot2, int, Fraction)) else None
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __neg__(self) -> "QRoot2":
        return QRoot2(-self.a, -self.b)

    def __add__(self, other) -> "QRoot2":
        o = QRoot2.coerce(other)
        return QRoot2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other) -> "QRoot2":
        return self + (-QRoot2.coerce(other))

    def __rsub__(self, other) -> "QRoot2":
        return (-self) + other

    def __mul__(self, other) -> "QRoot2":
        o = QRoot2.coerce(other)
        return QRoot2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def inverse(self) -> "QRoot2":
        n = self.a * self.a - 2 * self.b * self.b
        if n == 0:
            raise ZeroDivisionError
        return QRoot2(self.a / n, -self.b / n)

    def __truediv__(self, other) -> "QRoot2":
        return self * QRoot2.coerce(other).inverse()

    def conj(self) -> "QRoot2":
        return QRoot2(self.a, -self.b)

    def sign(self) -> int:
        a, b = self.a, self.b
        if a == 0 and b == 0:
            return 0
        if a >= 0 and b >= 0:
            return 1
        if a <= 0 and b <= 0:
            return -1
        s = 1 if a * a > 2 * b * b else -1
        return s if a > 0 else -s

    def __lt__(self, other) -> bool:
        return (self - QRoot2.coerce(other)).sign() < 0

    def __le__(self, other) -> bool:
        return (self - QRoot2.coerce(other)).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - QRoot2.coerce(other)).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - QRoot2.coerce(other)).sign() >= 0

    def __abs__(self) -> "QRoot2":
        return self if self.sign() >= 0 else -self

    def to_float(self) -> float:
        return float(self.a) + float(self.b) * SQRT2


def embed(x: Union[ZRoot2, ZOmega, QRoot2], which: int = 1, prec: int | None = None):
    """Evaluate the embedding σ_which (1: √2 ↦ √2, 2: √2 ↦ −√2).

    Returns a float/complex, or an mpmath value when prec (bits) is given.
    """
    if which not in (1, 2):
        raise ValueError("embedding index must be 1 or 2")
    if isinstance(x, ZRoot2):
        y = x if which == 1 else x.conj()
        return y.to_mpf(prec) if prec else y.to_float()
    if isinstance(x, QRoot2):
        y = x if which == 1 else x.conj()
        if prec:
            with mpmath.workprec(prec):
                return mpmath.mpf(y.a.numerator) / y.a.denominator + (
                    mpmath.mpf(y.b.numerator) / y.b.denominator
                ) * mpmath.sqrt(2)
        return y.to_float()
    if isinstance(x, ZOmega):
        y = x if which == 1 else x.conj_root2()
        return y.to_mpc(prec) if prec else y.to_complex()
    raise TypeError(f"cannot embed {type(x).__name__}")


def _height_q(x: Fraction) -> Fraction:
    if x == 0:
        raise ValueError("height of 0 is undefined")
    return Fraction(max(abs(x.numerator), abs(x.denominator)))


def _height_qroot2(num: ZRoot2, den: ZRoot2) -> QRoot2:
    if not num:
        raise ValueError("height of 0 is undefined")
    if not den:
        raise ZeroDivisionError("zero denominator")
    g = zroot2_gcd(num, den)
    num, den = num // g, den // g
    # finite places contribute the absolute norm of the denominator ideal
    h = QRoot2(abs(den.norm()))
    value = QRoot2.coerce(num) / QRoot2.coerce(den)
    for emb in (value, value.conj()):
        mag = abs(emb)
        if mag > QRoot2(1):
            h = h * mag
    return h


def height(x) -> Union[Fraction, QRoot2]:
    """Relative multiplicative height H_K over the places of K.

    K = Q for int/Fraction inputs; K = Q(√2) for ZRoot2/QRoot2 inputs or an
    explicit (numerator, denominator) pair of ZRoot2.  Both real embeddings
    of Q(√2) enter with weight 1 and the √2-adic place with weight 2, so e.g.
    H(2) = 4 over Q(√2) but 2 over Q.
    """
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return _height_q(Fraction(x))
    if isinstance(x, ZRoot2):
        return _height_qroot2(x, ZROOT2_ONE)
    if isinstance(x, QRoot2):
        d = x.a.denominator * x.b.denominator // math.gcd(
            x.a.denominator, x.b.denominator
        )
        return _height_qroot2(ZRoot2(x.a * d, x.b * d), ZRoot2(d))
    if isinstance(x, tuple) and len(x) == 2:
        num, den = (ZRoot2.coerce(v) for v in x)
        return _height_qroot2(num, den)
    raise TypeError(f"height is not defined for {type(x).__name__}")


# ---------------------------------------------------------------------------
# canonical text forms


def format_zroot2(x: ZRoot2) -> str:
    return f"{x.a}{x.b:+d}w2"


def parse_zroot2(s: str) -> ZRoot2:
    text = s.strip().replace(" ", "")
    if not text.endswith("w2"):
        if _INT_RE.fullmatch(text):
            return ZRoot2(int(text))
        raise ValueError(f"malformed Z[√2] literal: {s!r}")
    body = text[:-2]
    for i in range(len(body) - 1, 0, -1):
        if body[i] in "+-" and body[i - 1] not in "+-":
            a_part, b_part = body[:i], body[i:]
            if _INT_RE.fullmatch(a_part) and _SIGNED_INT_RE.fullmatch(b_part):
                return ZRoot2(int(a_part), int(b_part))
    if _SIGNED_INT_RE.fullmatch(body):
        return ZRoot2(0, int(body))
    raise ValueError(f"malformed Z[√2] literal: {s!r}")


def format_zomega(z: ZOmega) -> str:
    return f"{z.c0}{z.c1:+d}z{z.c2:+d}z2{z.c3:+d}z3"


def parse_zomega(s: str) -> ZOmega:
    import re

    m = re.fullmatch(
        r"\s*([+-]?\d+)([+-]\d+)z([+-]\d+)z2([+-]\d+)z3\s*", s
    )
    if not m:
        raise ValueError(f"malformed Z[ζ8] literal: {s!r}")
    return ZOmega(*(int(g) for g in m.groups()))


import re as _re

_INT_RE = _re.compile(r"[+-]?\d+")
_SIGNED_INT_RE = _re.compile(r"[+-]\d+")
