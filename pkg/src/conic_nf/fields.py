"""Exact arithmetic in Q and quadratic fields Q(sqrt(d)).

Elements are stored in coordinates over the integral basis {1, omega},
where omega = sqrt(d) for d = 2, 3 (mod 4) and omega = (1+sqrt(d))/2 for
d = 1 (mod 4).  All arithmetic is exact (arbitrary-precision rationals);
archimedean sizes are compared exactly via the Surd helper, with floats
only as a human-readable approximation.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import (
    AllZero,
    InvalidD,
    NotEuclidean,
    NotSquarefree,
    ParseError,
)

EUCLIDEAN_IMAGINARY_DS = (-1, -2, -3, -7, -11)


def _squarefree(n: int) -> bool:
    n = abs(n)
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class FieldDescriptor:
    """The base field: Q, or Q(sqrt(d)) for squarefree d != 0, 1."""

    kind: str  # "rational" | "quadratic"
    d: Optional[int]
    disc: Optional[int]
    omega_kind: Optional[str]  # "sqrt_d" | "half_one_plus_sqrt_d"
    euclidean: bool
    totally_imaginary: bool

    @property
    def is_rational(self) -> bool:
        return self.kind == "rational"

    @property
    def degree(self) -> int:
        return 1 if self.is_rational else 2

    def element(self, u, v=0) -> "FieldElement":
        return FieldElement(self, Fraction(u), Fraction(v))

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def omega(self) -> "FieldElement":
        if self.is_rational:
            raise InvalidD("Q has no omega generator")
        return self.element(0, 1)

    def sqrt_gen(self) -> "FieldElement":
        """The element sqrt(d) in omega-coordinates."""
        if self.is_rational:
            raise InvalidD("Q has no sqrt(d)")
        if self.omega_kind == "sqrt_d":
            return self.element(0, 1)
        return self.element(-1, 2)  # sqrt(d) = 2*omega - 1

    def units(self) -> list["FieldElement"]:
        """Roots of unity (all units for Q and imaginary quadratic fields)."""
        one = self.one()
        if self.is_rational or (self.d is not None and self.d > 0):
            return [one, -one]
        if self.d == -1:
            i = self.omega()
            return [one, -one, i, -i]
        if self.d == -3:
            z = self.omega()  # primitive 6th root of unity
            z2 = z * z
            return [one, -one, z, -z, z2, -z2]
        return [one, -one]

    def __repr__(self) -> str:
        if self.is_rational:
            return "Q"
        return f"Q(sqrt({self.d}))"


RATIONAL = FieldDescriptor(
    kind="rational",
    d=None,
    disc=None,
    omega_kind=None,
    euclidean=True,
    totally_imaginary=False,
)


def make_field(d: Union[int, str, None] = None) -> FieldDescriptor:
    """Build a validated field descriptor from d, or Q for d=None/'Q'."""
    if d is None or d == "Q":
        return RATIONAL
    d = int(d)
    if d in (0, 1):
        raise InvalidD(f"d = {d} does not define a quadratic field")
    if not _squarefree(d):
        raise NotSquarefree(f"d = {d} is not squarefree")
    if d % 4 == 1:
        omega_kind = "half_one_plus_sqrt_d"
        disc = d
    else:
        omega_kind = "sqrt_d"
        disc = 4 * d
    return FieldDescriptor(
        kind="quadratic",
        d=d,
        disc=disc,
        omega_kind=omega_kind,
        euclidean=d in EUCLIDEAN_IMAGINARY_DS,
        totally_imaginary=d < 0,
    )


class Surd:
    """Exact real number r + s*sqrt(rad) with r, s rational and rad >= 0.

    rad = 0 encodes a plain rational.  Mixing instances is allowed when the
    radicals agree or one side is rational.
    """

    __slots__ = ("r", "s", "rad")

    def __init__(self, r, s=0, rad=0):
        self.r = Fraction(r)
        self.s = Fraction(s)
        self.rad = int(rad)
        if self.rad < 0:
            raise ValueError("radical must be >= 0")
        if self.rad == 0 and self.s != 0:
            raise ValueError("rad=0 requires s=0")

    @staticmethod
    def of(value) -> "Surd":
        if isinstance(value, Surd):
            return value
        return Surd(Fraction(value))

    def _coerce(self, other) -> tuple["Surd", "Surd"]:
        other = Surd.of(other)
        if self.rad == other.rad:
            return self, other
        if self.s == 0:
            return Surd(self.r, 0, other.rad), other
        if other.s == 0:
            return self, Surd(other.r, 0, self.rad)
        raise ValueError(f"incompatible radicals {self.rad} and {other.rad}")

    def __add__(self, other):
        a, b = self._coerce(other)
        return Surd(a.r + b.r, a.s + b.s, a.rad)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        return Surd(a.r - b.r, a.s - b.s, a.rad)

    def __rsub__(self, other):
        return Surd.of(other) - self

    def __mul__(self, other):
        a, b = self._coerce(other)
        return Surd(a.r * b.r + a.s * b.s * a.rad, a.r * b.s + a.s * b.r, a.rad)

    __rmul__ = __mul__

    def __neg__(self):
        return Surd(-self.r, -self.s, self.rad)

    def sign(self) -> int:
        r, s = self.r, self.s
        if s == 0:
            return (r > 0) - (r < 0)
        if r == 0:
            return (s > 0) - (s < 0)
        if r > 0 and s > 0:
            return 1
        if r < 0 and s < 0:
            return -1
        # Opposite signs: compare r^2 against s^2 * rad.
        lhs, rhs = r * r, s * s * self.rad
        if lhs == rhs:
            return 0
        big_is_r = lhs > rhs
        return (1 if r > 0 else -1) if big_is_r else (1 if s > 0 else -1)

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except (ValueError, TypeError):
            return NotImplemented

    def __hash__(self):
        if self.s == 0:
            return hash(self.r)
        return hash((self.r, self.s, self.rad))

    def __float__(self):
        return float(self.r) + float(self.s) * math.sqrt(self.rad)

    def __repr__(self):
        if self.s == 0:
            return f"Surd({self.r})"
        return f"Surd({self.r} + {self.s}*sqrt({self.rad}))"


class FieldElement:
    """u + v*omega with exact rational coordinates."""

    __slots__ = ("field", "u", "v")

    def __init__(self, field: FieldDescriptor, u, v=0):
        self.field = field
        self.u = Fraction(u)
        self.v = Fraction(v)
        if field.is_rational and self.v != 0:
            raise ValueError("rational field elements have no omega part")

    # -- basic structure -------------------------------------------------

    def _check(self, other: "FieldElement") -> None:
        if self.field != other.field:
            raise ValueError("elements of different fields")

    def coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            self._check(other)
            return other
        return FieldElement(self.field, Fraction(other))

    @property
    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    @property
    def is_integral(self) -> bool:
        return self.u.denominator == 1 and self.v.denominator == 1

    @property
    def is_rational_value(self) -> bool:
        return self.v == 0

    def s_coords(self) -> tuple[Fraction, Fraction]:
        """Coordinates (p, q) with self = p + q*sqrt(d)."""
        if self.field.is_rational or self.field.omega_kind == "sqrt_d":
            return self.u, self.v
        return self.u + self.v / 2, self.v / 2

    @classmethod
    def from_s_coords(cls, field: FieldDescriptor, p, q) -> "FieldElement":
        p, q = Fraction(p), Fraction(q)
        if field.is_rational or field.omega_kind == "sqrt_d":
            return cls(field, p, q)
        return cls(field, p - q, 2 * q)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = self.coerce(other)
        return FieldElement(self.field, self.u + other.u, self.v + other.v)

    __radd__ = __add__

    def __sub__(self, other):
        other = self.coerce(other)
        return FieldElement(self.field, self.u - other.u, self.v - other.v)

    def __rsub__(self, other):
        return self.coerce(other) - self

    def __neg__(self):
        return FieldElement(self.field, -self.u, -self.v)

    def __mul__(self, other):
        other = self.coerce(other)
        f = self.field
        u1, v1, u2, v2 = self.u, self.v, other.u, other.v
        if f.is_rational:
            return FieldElement(f, u1 * u2)
        if f.omega_kind == "sqrt_d":
            return FieldElement(f, u1 * u2 + f.d * v1 * v2, u1 * v2 + u2 * v1)
        # omega^2 = omega + (d-1)/4
        c = Fraction(f.d - 1, 4)
        return FieldElement(
            f, u1 * u2 + c * v1 * v2, u1 * v2 + u2 * v1 + v1 * v2
        )

    __rmul__ = __mul__

    def conj(self) -> "FieldElement":
        f = self.field
        if f.is_rational:
            return self
        if f.omega_kind == "sqrt_d":
            return FieldElement(f, self.u, -self.v)
        return FieldElement(f, self.u + self.v, -self.v)

    def norm(self) -> Fraction:
        f = self.field
        u, v = self.u, self.v
        if f.is_rational:
            return u * u
        if f.omega_kind == "sqrt_d":
            return u * u - f.d * v * v
        return u * u + u * v + v * v * Fraction(1 - f.d, 4)

    def trace(self) -> Fraction:
        if self.field.is_rational:
            return 2 * self.u
        if self.field.omega_kind == "sqrt_d":
            return 2 * self.u
        return 2 * self.u + self.v

    def inverse(self) -> "FieldElement":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        return self.field.one() / self

    def __truediv__(self, other):
        other = self.coerce(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero element")
        num = self * other.conj()
        return FieldElement(self.field, num.u / n, num.v / n)

    def __rtruediv__(self, other):
        return self.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return (self.field.one() / self) ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.u == other.u and self.v == other.v
        if isinstance(other, (int, Fraction)):
            return self.v == 0 and self.u == other
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.u, self.v))

    def __repr__(self):
        return f"<{format_element(self)} in {self.field}>"


# -- size (archimedean) ------------------------------------------------------


def size_sq(x: FieldElement) -> Surd:
    """Exact square of elem_size(x): max over archimedean embeddings."""
    f = x.field
    if f.is_rational:
        return Surd(x.u * x.u)
    if f.totally_imaginary:
        return Surd(x.norm())
    p, q = x.s_coords()
    return Surd(p * p + q * q * f.d, abs(2 * p * q), f.d)


def elem_size(x: FieldElement) -> float:
    """Max over archimedean embeddings of |sigma(x)|, as a float."""
    return math.sqrt(float(size_sq(x)))


def size_value(x: FieldElement) -> Surd:
    """Exact elem_size when it is expressible as a surd (real quadratic / Q)."""
    f = x.field
    if f.is_rational:
        return Surd(abs(x.u))
    if f.totally_imaginary:
        raise ValueError("complex modulus is not a surd in general")
    p, q = x.s_coords()
    a = Surd(p, q, f.d)
    b = Surd(p, -q, f.d)
    return max(a, -a, b, -b)


def size_lt(x: FieldElement, y: FieldElement) -> bool:
    """Exact |x| < |y|."""
    return size_sq(x) < size_sq(y)


def size_lt_size_minus_one(w: FieldElement, b: FieldElement) -> bool:
    """Exact |w| < |b| - 1 (the descent step-6 test)."""
    f = w.field
    if f.is_rational or f.totally_imaginary:
        a = size_sq(w).r  # rational: |w|^2
        c = size_sq(b).r
        # sqrt(a) < sqrt(c) - 1  <=>  c + 1 - a > 0 and (c + 1 - a)^2 > 4c
        diff = c + 1 - a
        return c >= 1 and diff > 0 and diff * diff > 4 * c
    return size_value(w) < size_value(b) - Surd(1)


# -- integrality, rounding, Euclidean division ------------------------------


def require_integral(x: FieldElement) -> FieldElement:
    if not x.is_integral:
        raise ValueError(f"{x!r} is not an algebraic integer")
    return x


def is_unit(x: FieldElement) -> bool:
    """True iff x is a unit of O_K (requires x integral)."""
    return x.is_integral and abs(x.norm()) == 1


def _int_window(center: Fraction, radius: float) -> range:
    lo = math.floor(float(center) - radius) - 1
    hi = math.ceil(float(center) + radius) + 1
    return range(lo, hi + 1)


def nearest_integer(x: FieldElement) -> FieldElement:
    """Closest element of O_K to x under elem_size, certified by enumeration.

    Ties break to the lexicographically smallest (u, v) coordinate pair.
    """
    f = x.field
    if f.is_rational:
        n = math.floor(x.u)
        best = min((n, n + 1), key=lambda m: (abs(x.u - m), m))
        return f.element(best)

    # Baseline candidate by coordinate rounding.
    m0 = round(x.u)
    n0 = round(x.v)
    base = f.element(m0, n0)
    best_d = size_sq(x - base)
    radius = math.sqrt(float(best_d)) * (1 + 1e-9) + 1e-9

    # Window in s-coordinates: |p - p_z| <= R and |q - q_z|*sqrt(|d|) <= R
    # covers every candidate at distance <= R for both the imaginary
    # (norm) and real (max-embedding) size.
    p, q = x.s_coords()
    sd = math.sqrt(abs(f.d))
    candidates = []
    for n in _int_window(x.v, 2 * radius / sd + 1):
        # For fixed v-coordinate n, u ranges so that the 1-part stays close.
        if f.omega_kind == "sqrt_d":
            if abs(float(q - n)) * sd > radius * (1 + 1e-9) + 1e-9:
                continue
            for m in _int_window(x.u, radius):
                candidates.append((m, n))
        else:
            qz = Fraction(n, 2)
            if abs(float(q - qz)) * sd > radius * (1 + 1e-9) + 1e-9:
                continue
            for m in _int_window(x.u, radius + 1):
                candidates.append((m, n))

    best = None
    best_key = None
    for m, n in candidates:
        z = f.element(m, n)
        d = size_sq(x - z)
        key = (d, Fraction(m), Fraction(n))
        if best_key is None or _lex_lt(key, best_key):
            best, best_key = z, key
    assert best is not None and best_key[0] <= best_d
    return best


def _lex_lt(a, b) -> bool:
    if a[0] != b[0]:
        return a[0] < b[0]
    return (a[1], a[2]) < (b[1], b[2])


def euclid_divmod(a: FieldElement, b: FieldElement) -> tuple[FieldElement, FieldElement]:
    """Nearest-integer division a = q*b + r with |N(r)| < |N(b)|."""
    if not a.field.euclidean:
        raise NotEuclidean(f"{a.field} is not in the Euclidean list")
    require_integral(a)
    require_integral(b)
    if b.is_zero:
        raise ZeroDivisionError("euclid_divmod by zero")
    q = nearest_integer(a / b)
    r = a - q * b
    assert abs(r.norm()) < abs(b.norm())
    return q, r


def normalize_associate(x: FieldElement) -> FieldElement:
    """Canonical associate: the unit multiple minimizing (sgn u, sgn v, u, v)."""
    if x.is_zero:
        return x
    if x.field.is_rational:
        return x if x.u > 0 else -x

    def key(y):
        return (
            (y.u > 0) - (y.u < 0),
            (y.v > 0) - (y.v < 0),
            y.u,
            y.v,
        )

    return min((x * e for e in x.field.units()), key=key)


def gcd_elems(xs: Iterable[FieldElement]) -> FieldElement:
    """gcd of algebraic integers over a Euclidean field, unit-normalised."""
    xs = list(xs)
    if not xs:
        raise AllZero("gcd of empty list")
    field = xs[0].field
    if not field.euclidean:
        raise NotEuclidean(f"{field} is not in the Euclidean list")
    g = field.zero()
    for x in xs:
        require_integral(x)
        h = x
        while not h.is_zero:
            if g.is_zero:
                g, h = h, field.zero()
            else:
                _, r = euclid_divmod(g, h)
                g, h = h, r
    if g.is_zero:
        raise AllZero("gcd of all-zero list")
    return normalize_associate(g)


def divides(a: FieldElement, b: FieldElement) -> bool:
    """True iff a | b in O_K (exact integral quotient)."""
    if a.is_zero:
        return b.is_zero
    return (b / a).is_integral


def rational_sqrt(x: Fraction) -> Optional[Fraction]:
    """Exact square root of a rational, or None."""
    x = Fraction(x)
    if x < 0:
        return None
    pn = math.isqrt(x.numerator)
    pd = math.isqrt(x.denominator)
    if pn * pn == x.numerator and pd * pd == x.denominator:
        return Fraction(pn, pd)
    return None


def elem_sqrt(s: FieldElement) -> Optional[FieldElement]:
    """A square root of s in K, or None if s is not a square in K."""
    f = s.field
    if f.is_rational:
        r = rational_sqrt(s.u)
        return None if r is None else f.element(r)
    p, q = s.s_coords()  # s = p + q*sqrt(d)
    d = f.d
    if q == 0:
        r = rational_sqrt(p)
        if r is not None:
            return FieldElement.from_s_coords(f, r, 0)
        r = rational_sqrt(p / d)
        if r is not None:
            return FieldElement.from_s_coords(f, 0, r)
        return None
    # (a + b*sqrt(d))^2 = a^2 + b^2 d + 2ab sqrt(d):  2ab = q, a^2 + b^2 d = p.
    # Substitute b = q/(2a):  4a^4 - 4p a^2 + q^2 d = 0.
    disc = rational_sqrt(p * p - q * q * d)
    if disc is None:
        return None
    for root in (p + disc, p - disc):
        a2 = root / 2
        a = rational_sqrt(a2)
        if a is not None and a != 0:
            b = q / (2 * a)
            return FieldElement.from_s_coords(f, a, b)
    return None


# -- text grammar ------------------------------------------------------------

_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-]?)\s*
        (?:
            (?P<coef>\d+(?:/\d+)?)\s*\*?\s*(?P<sym1>[sw])?
          | (?P<sym2>[sw])
        )\s*""",
    re.VERBOSE,
)


def parse_element(field: FieldDescriptor, text: str) -> FieldElement:
    """Parse the element grammar: INT, p/q, s = sqrt(d), w = omega."""
    text = text.strip()
    if not text:
        raise ParseError("empty element")
    pos = 0
    rat = Fraction(0)
    s_part = Fraction(0)
    w_part = Fraction(0)
    first = True
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse element {text!r} at offset {pos}")
        sign = m.group("sign")
        if not first and sign == "":
            raise ParseError(f"missing +/- between terms in {text!r}")
        sgn = -1 if sign == "-" else 1
        if m.group("sym2"):
            coef = Fraction(1)
            sym = m.group("sym2")
        else:
            coef = Fraction(m.group("coef"))
            sym = m.group("sym1")
        coef *= sgn
        if sym is None:
            rat += coef
        elif sym == "s":
            s_part += coef
        else:
            w_part += coef
        pos = m.end()
        first = False
    if (s_part != 0 or w_part != 0) and field.is_rational:
        raise ParseError("symbols s/w are not valid over Q")
    if field.is_rational:
        return field.element(rat)
    from_s = FieldElement.from_s_coords(field, rat, s_part)
    return from_s + field.element(0, w_part)


def parse_integral_element(field: FieldDescriptor, text: str) -> FieldElement:
    x = parse_element(field, text)
    if not x.is_integral:
        raise ParseError(f"{text!r} is not integral over {field}")
    return x


def _fmt_rat(x: Fraction) -> str:
    return str(x)


def format_element(x: FieldElement) -> str:
    """Render in the wire grammar using s-coordinates (1 and sqrt(d))."""
    if x.field.is_rational:
        return _fmt_rat(x.u)
    p, q = x.s_coords()
    if q == 0:
        return _fmt_rat(p)
    s_term = "s" if abs(q) == 1 else f"{_fmt_rat(abs(q))}s"
    s_sign = "-" if q < 0 else "+"
    if p == 0:
        return ("-" if q < 0 else "") + s_term
    return f"{_fmt_rat(p)}{s_sign}{s_term}"
