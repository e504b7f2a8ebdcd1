"""Exact commutative base rings: Z, Z/n, polynomial rings over those, and finite products.

A ring descriptor is an immutable object carrying the arithmetic.  Elements are
stored as plain payloads so that sparse vectors over a ring stay cheap:

* ``Integers``: a Python int
* ``ModN(n)``: an int in ``[0, n)``
* ``Poly(base, var)``: a tuple of ``(degree, coefficient)`` pairs, sorted by
  degree, with no zero coefficients
* ``Product(factors)``: a tuple of factor payloads

``RingElement`` wraps a payload with its descriptor for user-facing code and
refuses to mix descriptors.

    >>> R = parse_ring("zmod:30")
    >>> R(6) * R(10)
    RingElement(zmod:30, 0)
    >>> unit_inverse(R(7))
    RingElement(zmod:30, 13)
"""

import itertools
import re
from dataclasses import dataclass
from math import gcd, lcm

from .errors import DescriptorMismatch, InfiniteRing, NotAUnit, ParseError


class Ring:
    """Common interface of all ring descriptors."""

    finite = False

    def __call__(self, value):
        if isinstance(value, int):
            return RingElement(self, self.from_int(value))
        if isinstance(value, str):
            return RingElement(self, self.parse_element(value))
        return RingElement(self, self.normalize(value))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a == self.zero()

    def is_one(self, a):
        return a == self.one()

    def normalize(self, a):
        return a

    def parse_element(self, s):
        value, pos = self.parse_element_prefix(s, 0)
        if pos != len(s):
            raise ParseError(f"trailing input in element {s!r}", pos)
        return value

    def elements(self):
        raise InfiniteRing(f"{self} is not finite")

    def size(self):
        raise InfiniteRing(f"{self} is not finite")

    def __repr__(self):
        return str(self)


@dataclass(frozen=True, repr=False)
class Integers(Ring):

    def __str__(self):
        return "z"

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a == 0

    def from_int(self, k):
        return k

    def to_str(self, a):
        return str(a)

    def parse_element_prefix(self, s, pos):
        m = re.compile(r"-?\d+").match(s, pos)
        if not m:
            raise ParseError("expected an integer", pos)
        return int(m.group()), m.end()

    def characteristic(self):
        return 0

    def additive_order(self, a):
        return 1 if a == 0 else 0

    def is_unit(self, a):
        return a in (1, -1)

    def inverse(self, a):
        if a in (1, -1):
            return a
        raise NotAUnit(f"{a} is not a unit in z")

    def lift(self, a):
        return a


@dataclass(frozen=True, repr=False)
class ModN(Ring):
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError("ModN needs n >= 2")

    finite = True

    def __str__(self):
        return f"zmod:{self.n}"

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def sub(self, a, b):
        return (a - b) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def is_zero(self, a):
        return a == 0

    def from_int(self, k):
        return k % self.n

    def normalize(self, a):
        return a % self.n

    def to_str(self, a):
        return str(a)

    def parse_element_prefix(self, s, pos):
        m = re.compile(r"-?\d+").match(s, pos)
        if not m:
            raise ParseError("expected an integer residue", pos)
        return int(m.group()) % self.n, m.end()

    def characteristic(self):
        return self.n

    def additive_order(self, a):
        return self.n // gcd(self.n, a)

    def elements(self):
        return list(range(self.n))

    def size(self):
        return self.n

    def is_unit(self, a):
        return gcd(a, self.n) == 1

    def inverse(self, a):
        if gcd(a, self.n) != 1:
            raise NotAUnit(f"{a} is not a unit in {self}")
        return pow(a, -1, self.n)

    def lift(self, a):
        return a


@dataclass(frozen=True, repr=False)
class Poly(Ring):
    base: Ring
    var: str = "x"

    def __post_init__(self):
        if not isinstance(self.base, (Integers, ModN)):
            raise ValueError("Poly base must be Integers or ModN")
        if not re.fullmatch(r"[A-Za-z_]\w*", self.var):
            raise ValueError(f"bad variable name {self.var!r}")

    def __str__(self):
        return f"poly:{self.base}:{self.var}"

    def zero(self):
        return ()

    def one(self):
        return ((0, 1),)

    def _clean(self, d):
        return tuple((k, c) for k, c in sorted(d.items()) if not self.base.is_zero(c))

    def normalize(self, a):
        acc = {}
        for k, c in a:
            acc[k] = self.base.add(acc.get(k, self.base.zero()), self.base.normalize(c))
        return self._clean(acc)

    def add(self, a, b):
        acc = dict(a)
        for k, c in b:
            acc[k] = self.base.add(acc.get(k, 0), c)
        return self._clean(acc)

    def neg(self, a):
        return tuple((k, self.base.neg(c)) for k, c in a)

    def mul(self, a, b):
        acc = {}
        for i, c in a:
            for j, d in b:
                acc[i + j] = self.base.add(acc.get(i + j, 0), self.base.mul(c, d))
        return self._clean(acc)

    def is_zero(self, a):
        return a == ()

    def from_int(self, k):
        c = self.base.from_int(k)
        return () if self.base.is_zero(c) else ((0, c),)

    def monomial(self, k, c=1):
        c = self.base.from_int(c)
        return () if self.base.is_zero(c) else ((k, c),)

    def to_str(self, a):
        if not a:
            return "0"
        parts = []
        for k, c in reversed(a):
            c = self.base.lift(c)
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = self.var if k == 1 else f"{self.var}^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += sign + body
        return out

    def parse_element_prefix(self, s, pos):
        term = re.compile(r"([+-]?)(\d+)?(\*?)(?:(" + re.escape(self.var) + r")(?:\^(\d+))?)?")
        acc = {}
        start = pos
        first = True
        while pos < len(s):
            m = term.match(s, pos)
            sign, num, star, var, exp = m.groups()
            if m.end() == pos or (num is None and var is None):
                break
            if not first and not sign:
                break
            if star and (num is None or var is None):
                raise ParseError("malformed polynomial term", pos)
            coeff = int(num) if num is not None else 1
            if sign == "-":
                coeff = -coeff
            deg = 0 if var is None else (int(exp) if exp else 1)
            acc[deg] = acc.get(deg, 0) + coeff
            pos = m.end()
            first = False
        if first:
            raise ParseError("expected a polynomial", start)
        return self.normalize(tuple(acc.items())), pos

    def characteristic(self):
        return self.base.characteristic()

    def additive_order(self, a):
        out = 1
        for _, c in a:
            o = self.base.additive_order(c)
            if o == 0:
                return 0
            out = lcm(out, o)
        return out

    def is_unit(self, a):
        if not a or a[0][0] != 0 or not self.base.is_unit(a[0][1]):
            return False
        if isinstance(self.base, Integers):
            return len(a) == 1
        # over Z/n: constant term a unit and every other coefficient nilpotent
        rad = 1
        for p in _prime_factors(self.base.n):
            rad *= p
        return all(c % rad == 0 for k, c in a if k > 0)

    def inverse(self, a):
        if not self.is_unit(a):
            raise NotAUnit(f"{self.to_str(a)} is not a unit in {self}")
        c0 = self.base.inverse(a[0][1])
        c0p = ((0, c0),)
        nil = self.sub(self.one(), self.mul(c0p, a))
        # a = c0^{-1}(1 - nil), nil nilpotent, so a^{-1} = c0 (1 + nil + nil^2 + ...)
        total, power = self.one(), self.one()
        while True:
            power = self.mul(power, nil)
            if not power:
                break
            total = self.add(total, power)
        return self.mul(c0p, total)

    def lift(self, a):
        raise TypeError("polynomials have no integer lift")


@dataclass(frozen=True, repr=False)
class Product(Ring):
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("Product needs at least one factor")

    @property
    def finite(self):
        return all(f.finite for f in self.factors)

    def __str__(self):
        return "prod:" + ",".join(str(f) for f in self.factors)

    def zero(self):
        return tuple(f.zero() for f in self.factors)

    def one(self):
        return tuple(f.one() for f in self.factors)

    def add(self, a, b):
        return tuple(f.add(x, y) for f, x, y in zip(self.factors, a, b))

    def neg(self, a):
        return tuple(f.neg(x) for f, x in zip(self.factors, a))

    def mul(self, a, b):
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def is_zero(self, a):
        return all(f.is_zero(x) for f, x in zip(self.factors, a))

    def from_int(self, k):
        return tuple(f.from_int(k) for f in self.factors)

    def normalize(self, a):
        if len(a) != len(self.factors):
            raise DescriptorMismatch(f"arity {len(a)} does not match {self}")
        return tuple(f.normalize(x) for f, x in zip(self.factors, a))

    def to_str(self, a):
        return "(" + ",".join(f.to_str(x) for f, x in zip(self.factors, a)) + ")"

    def parse_element_prefix(self, s, pos):
        if pos < len(s) and s[pos] != "(":
            # an integer is read through the diagonal embedding
            m = re.compile(r"-?\d+").match(s, pos)
            if not m:
                raise ParseError("expected '(' or an integer", pos)
            return self.from_int(int(m.group())), m.end()
        pos += 1
        out = []
        for i, f in enumerate(self.factors):
            if i:
                if pos >= len(s) or s[pos] != ",":
                    raise ParseError("expected ','", pos)
                pos += 1
            x, pos = f.parse_element_prefix(s, pos)
            out.append(x)
        if pos >= len(s) or s[pos] != ")":
            raise ParseError("expected ')'", pos)
        return tuple(out), pos + 1

    def characteristic(self):
        out = 1
        for f in self.factors:
            c = f.characteristic()
            if c == 0:
                return 0
            out = lcm(out, c)
        return out

    def additive_order(self, a):
        out = 1
        for f, x in zip(self.factors, a):
            o = f.additive_order(x)
            if o == 0:
                return 0
            out = lcm(out, o)
        return out

    def elements(self):
        return [tuple(t) for t in itertools.product(*(f.elements() for f in self.factors))]

    def size(self):
        out = 1
        for f in self.factors:
            out *= f.size()
        return out

    def is_unit(self, a):
        return all(f.is_unit(x) for f, x in zip(self.factors, a))

    def inverse(self, a):
        return tuple(f.inverse(x) for f, x in zip(self.factors, a))

    def lift(self, a):
        raise TypeError("product elements have no canonical integer lift")


def _prime_factors(n):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class RingElement:
    """A payload tagged with its ring descriptor."""

    ring: Ring
    value: object

    def _check(self, other):
        if isinstance(other, int):
            return self.ring.from_int(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        if other.ring != self.ring:
            raise DescriptorMismatch(f"{self.ring} vs {other.ring}")
        return other.value

    def __add__(self, other):
        v = self._check(other)
        return v if v is NotImplemented else RingElement(self.ring, self.ring.add(self.value, v))

    __radd__ = __add__

    def __mul__(self, other):
        v = self._check(other)
        return v if v is NotImplemented else RingElement(self.ring, self.ring.mul(self.value, v))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElement(self.ring, self.ring.neg(self.value))

    def __sub__(self, other):
        return self + (-RingElement(self.ring, self._check(other)))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == self.ring.from_int(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        if other.ring != self.ring:
            raise DescriptorMismatch(f"{self.ring} vs {other.ring}")
        return self.value == other.value

    def __hash__(self):
        return hash((self.ring, self.value))

    def __str__(self):
        return self.ring.to_str(self.value)

    def __repr__(self):
        return f"RingElement({self.ring}, {self.ring.to_str(self.value)})"


def _same(x, y):
    if x.ring != y.ring:
        raise DescriptorMismatch(f"{x.ring} vs {y.ring}")
    return x.ring


def add(x, y):
    R = _same(x, y)
    return RingElement(R, R.add(x.value, y.value))


def neg(x):
    return RingElement(x.ring, x.ring.neg(x.value))


def mul(x, y):
    R = _same(x, y)
    return RingElement(R, R.mul(x.value, y.value))


def one(R):
    return RingElement(R, R.one())


def zero(R):
    return RingElement(R, R.zero())


def eq(x, y):
    _same(x, y)
    return x.value == y.value


def characteristic(R):
    """Smallest p > 0 with p*1 = 0, else 0."""
    return R.characteristic()


def enumerate_idempotents(R):
    """All e with e*e = e by exhaustive search, sorted by payload."""
    if not R.finite:
        raise InfiniteRing(f"{R} is not finite")
    if isinstance(R, Product):
        # idempotents of a product are tuples of factor idempotents
        parts = [[e.value for e in enumerate_idempotents(f)] for f in R.factors]
        vals = [tuple(t) for t in itertools.product(*parts)]
    else:
        vals = [e for e in R.elements() if R.mul(e, e) == e]
    return [RingElement(R, v) for v in sorted(vals)]


def is_unit(x):
    return x.ring.is_unit(x.value)


def unit_inverse(x):
    return RingElement(x.ring, x.ring.inverse(x.value))


_RING_TAGS = ("zmod", "poly", "prod", "z")


def starts_ring(s, pos):
    """True when a ring descriptor could start at ``s[pos]``."""
    return re.compile(r"(zmod:|poly:|prod:|z(?![\w]))").match(s, pos) is not None


def parse_ring_prefix(s, pos=0):
    """Parse a ring descriptor starting at ``pos``; return (ring, end)."""
    if s.startswith("zmod:", pos):
        m = re.compile(r"\d+").match(s, pos + 5)
        if not m:
            raise ParseError("expected modulus after 'zmod:'", pos + 5)
        n = int(m.group())
        if n < 2:
            raise ParseError("modulus must be >= 2", pos + 5)
        return ModN(n), m.end()
    if s.startswith("poly:", pos):
        base, p = parse_ring_prefix(s, pos + 5)
        if not isinstance(base, (Integers, ModN)):
            raise ParseError("polynomial base must be z or zmod", pos + 5)
        if p >= len(s) or s[p] != ":":
            raise ParseError("expected ':' before variable name", p)
        m = re.compile(r"[A-Za-z_]\w*").match(s, p + 1)
        if not m or m.group() in _RING_TAGS:
            raise ParseError("expected a variable name", p + 1)
        return Poly(base, m.group()), m.end()
    if s.startswith("prod:", pos):
        factors = []
        p = pos + 5
        while True:
            f, p = parse_ring_prefix(s, p)
            factors.append(f)
            if p < len(s) and s[p] == "," and starts_ring(s, p + 1):
                p += 1
                continue
            break
        return Product(tuple(factors)), p
    if s.startswith("z", pos) and (pos + 1 == len(s) or not (s[pos + 1].isalnum() or s[pos + 1] == "_")):
        return Integers(), pos + 1
    raise ParseError("expected a ring descriptor (z, zmod:n, poly:..., prod:...)", pos)


def parse_ring(s):
    """Parse a full ring descriptor string such as ``prod:zmod:4,zmod:3``."""
    R, pos = parse_ring_prefix(s, 0)
    if pos != len(s):
        raise ParseError(f"trailing input in ring descriptor {s!r}", pos)
    return R


def coerce(R, c):
    """Payload of ``c`` in R; accepts ints, strings, RingElements and payloads."""
    if isinstance(c, RingElement):
        if c.ring != R:
            raise DescriptorMismatch(f"{c.ring} vs {R}")
        return c.value
    return R(c).value
