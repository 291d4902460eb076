"""Exact arithmetic over F_{p^r} and its function field in one variable.

Provides finite field towers with canonical moduli, dense univariate
polynomials, normalized rational functions, and truncated Laurent
expansions at any point of the projective line (infinity included).

Serialization of a field element is
``{"p": p, "r": r, "modulus": [c0..cr], "coeffs": [a0..a_{r-1}]}``
with all integers reduced to [0, p).  Extension moduli are canonical
(the lexicographically least monic irreducible of the given degree,
coefficients compared from the top degree down), so serialized values
are reproducible across runs.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from . import _core


class _Infinity:
    """The point at infinity of the projective line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"


INF = _Infinity()


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(f, p):
    """Rabin test for a monic polynomial f (little-endian list) over F_p."""
    r = len(f) - 1
    if r <= 0:
        return False
    x = [0, 1]
    # x^(p^r) == x mod f
    xq = x
    for _ in range(r):
        xq = _core.powmod(xq, p, f, p)
    if _core.trim(_core.sub(xq, x, p)) != []:
        return False
    for t in _prime_divisors(r):
        xq = x
        for _ in range(r // t):
            xq = _core.powmod(xq, p, f, p)
        g = _core.gcd_(_core.sub(xq, x, p), f, p)
        if g != [1]:
            return False
    return True


@functools.cache
def _canonical_modulus(p, r):
    """Lexicographically least monic irreducible of degree r over F_p.

    Candidates x^r + c_{r-1}x^{r-1} + ... + c_0 are ordered by the
    integer sum(c_k p^k), which is descending-degree lexicographic order
    on the coefficient vector.
    """
    if r == 1:
        return (0, 1)
    for i in range(p**r):
        c, k = [], i
        for _ in range(r):
            c.append(k % p)
            k //= p
        f = c + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise ArithmeticError(f"no irreducible of degree {r} over F_{p}")


@dataclass(frozen=True)
class FieldDescriptor:
    """The field F_{p^r} presented as F_p[x]/(modulus)."""

    p: int
    r: int
    modulus: tuple

    @staticmethod
    @functools.cache
    def get(p, r):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if r < 1:
            raise ValueError("extension degree must be >= 1")
        return FieldDescriptor(p, r, _canonical_modulus(p, r))

    @property
    def order(self):
        return self.p**self.r

    def element(self, value):
        if isinstance(value, FieldElement):
            if value.descriptor != self:
                raise ValueError("field mismatch; use embed() explicitly")
            return value
        if isinstance(value, int):
            coeffs = [value % self.p] + [0] * (self.r - 1)
            return FieldElement(self, tuple(coeffs))
        coeffs = [int(v) % self.p for v in value]
        if len(coeffs) > self.r:
            raise ValueError("coefficient vector too long")
        coeffs += [0] * (self.r - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def zero(self):
        return self.element(0)

    def one(self):
        return self.element(1)

    def generator(self):
        """The residue class of x (a root of the modulus) for r > 1."""
        if self.r == 1:
            return self.element(1)
        return self.element([0, 1])

    def elements(self):
        """All elements in serialization order (least first)."""
        p, r = self.p, self.r
        for i in range(p**r):
            coeffs, k = [], i
            for _ in range(r):
                coeffs.append(k % p)
                k //= p
            yield FieldElement(self, tuple(coeffs))

    def __repr__(self):
        return f"F_{self.p}^{self.r}" if self.r > 1 else f"F_{self.p}"


class FieldElement:
    __slots__ = ("descriptor", "coeffs")

    def __init__(self, descriptor, coeffs):
        self.descriptor = descriptor
        self.coeffs = coeffs

    def _check(self, other):
        if isinstance(other, int):
            return self.descriptor.element(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.descriptor != self.descriptor:
            raise ValueError("field mismatch; use embed() explicitly")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        d = self.descriptor
        c = _core.add(list(self.coeffs), list(other.coeffs), d.p)
        return d.element(c)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        d = self.descriptor
        return d.element(_core.sub(list(self.coeffs), list(other.coeffs), d.p))

    def __rsub__(self, other):
        return self.descriptor.element(other) - self

    def __neg__(self):
        return self.descriptor.element(_core.neg(list(self.coeffs), self.descriptor.p))

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        d = self.descriptor
        prod = _core.mul(list(self.coeffs), list(other.coeffs), d.p)
        return d.element(_core.divmod_(prod, list(d.modulus), d.p)[1])

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.descriptor.element(other) / self

    def __pow__(self, e):
        d = self.descriptor
        if e < 0:
            return self.inverse() ** (-e)
        c = _core.powmod(list(self.coeffs), e, list(d.modulus), d.p)
        return d.element(c)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.descriptor.order - 2)

    def frobenius(self):
        return self ** self.descriptor.p

    def frobenius_inverse(self):
        """The unique b with b^p = self, i.e. self^(p^(r-1))."""
        d = self.descriptor
        return self ** (d.p ** (d.r - 1))

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.descriptor.element(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.descriptor == other.descriptor and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.descriptor, self.coeffs))

    def key(self):
        """Serialization-order key (elements sort by this integer)."""
        p = self.descriptor.p
        return sum(c * p**k for k, c in enumerate(self.coeffs))

    def multiplicative_order(self):
        if self.is_zero():
            raise ValueError("zero has no multiplicative order")
        n = self.descriptor.order - 1
        order = n
        for q in _prime_divisors(n):
            while order % q == 0 and (self ** (order // q)) == 1:
                order //= q
        return order

    def embed(self, target):
        """Image in F_{p^R} for r | R, via the least root of the modulus."""
        d = self.descriptor
        if target == d:
            return self
        rho = _embedding_root(d, target)
        acc = target.zero()
        for c in reversed(self.coeffs):
            acc = acc * rho + target.element(c)
        return acc

    def to_json(self):
        d = self.descriptor
        return {
            "p": d.p,
            "r": d.r,
            "modulus": list(d.modulus),
            "coeffs": list(self.coeffs),
        }

    @staticmethod
    def from_json(obj):
        d = FieldDescriptor.get(obj["p"], obj["r"])
        if list(d.modulus) != [c % d.p for c in obj["modulus"]]:
            raise ValueError("non-canonical modulus in serialized element")
        return d.element(obj["coeffs"])

    def __repr__(self):
        if self.descriptor.r == 1:
            return str(self.coeffs[0])
        return f"{self.descriptor}{list(self.coeffs)}"


@functools.cache
def _embedding_root(src, dst):
    if src.p != dst.p or dst.r % src.r != 0:
        raise ValueError(f"no embedding {src} -> {dst}")
    mod = [dst.element(c) for c in src.modulus]
    for cand in dst.elements():
        acc = dst.zero()
        for c in reversed(mod):
            acc = acc * cand + c
        if acc.is_zero():
            return cand
    raise ArithmeticError("modulus has no root in the extension")


class Poly:
    """Dense univariate polynomial with FieldElement coefficients."""

    __slots__ = ("descriptor", "coeffs")

    def __init__(self, descriptor, coeffs):
        while coeffs and coeffs[-1].is_zero():
            coeffs = coeffs[:-1]
        self.descriptor = descriptor
        self.coeffs = tuple(coeffs)

    @staticmethod
    def from_ints(descriptor, ints):
        return Poly(descriptor, [descriptor.element(c) for c in ints])

    @staticmethod
    def x(descriptor):
        return Poly.from_ints(descriptor, [0, 1])

    @staticmethod
    def constant(descriptor, value):
        return Poly(descriptor, [descriptor.element(value)])

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def lead(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self):
        return bool(self.coeffs) and self.lead == 1

    def monic(self):
        if self.is_zero():
            return self
        return self * self.lead.inverse()

    def coerce(self, other):
        if isinstance(other, Poly):
            if other.descriptor != self.descriptor:
                raise ValueError("field mismatch")
            return other
        if isinstance(other, (int, FieldElement)):
            return Poly(self.descriptor, [self.descriptor.element(other)])
        return NotImplemented

    def __add__(self, other):
        other = self.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(self.descriptor, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.descriptor, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            c = self.descriptor.element(other)
            return Poly(self.descriptor, [a * c for a in self.coeffs])
        other = self.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly(self.descriptor, [])
        zero = self.descriptor.zero()
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
        return Poly(self.descriptor, out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        zero = self.descriptor.zero()
        r = list(self.coeffs)
        db = other.degree
        if self.degree < db:
            return Poly(self.descriptor, []), self
        inv = other.lead.inverse()
        q = [zero] * (self.degree - db + 1)
        for i in range(self.degree - db, -1, -1):
            c = r[i + db] * inv
            if c:
                q[i] = c
                for j, bc in enumerate(other.coeffs):
                    r[i + j] = r[i + j] - c * bc
        return Poly(self.descriptor, q), Poly(self.descriptor, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(self.descriptor, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def gcd(self, other):
        a, b = self, self.coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def evaluate(self, x):
        x = self.descriptor.element(x)
        acc = self.descriptor.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, other):
        other = self.coerce(other)
        acc = Poly(self.descriptor, [])
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def derivative(self):
        return Poly(
            self.descriptor,
            [self.descriptor.element(k) * c for k, c in enumerate(self.coeffs)][1:],
        )

    def multiplicity_at(self, xi):
        """Multiplicity of the root xi (0 if not a root)."""
        if self.is_zero():
            raise ValueError("zero polynomial")
        lin = Poly(self.descriptor, [-self.descriptor.element(xi), self.descriptor.one()])
        f, n = self, 0
        while True:
            q, rem = divmod(f, lin)
            if not rem.is_zero():
                return n
            f, n = q, n + 1

    def reversed_(self):
        """x^deg * f(1/x), used for expansions at infinity."""
        return Poly(self.descriptor, list(reversed(self.coeffs)))

    def map_coefficients(self, fn, target=None):
        target = target or self.descriptor
        return Poly(target, [fn(c) for c in self.coeffs])

    def embed(self, target):
        return self.map_coefficients(lambda c: c.embed(target), target)

    def to_json(self):
        if self.descriptor.r == 1:
            return [c.coeffs[0] for c in self.coeffs]
        return [list(c.coeffs) for c in self.coeffs]

    def __eq__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = self.coerce(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.descriptor == other.descriptor and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.descriptor, self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"({c!r})*x^{k}" if k else f"({c!r})")
        return "Poly(" + " + ".join(terms) + ")"


class RationalFunction:
    """Quotient of polynomials, kept coprime with a monic denominator."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator):
        if isinstance(numerator, Poly) and isinstance(denominator, Poly):
            pass
        else:
            raise TypeError("numerator and denominator must be Poly")
        if denominator.is_zero():
            raise ZeroDivisionError("zero denominator")
        if numerator.descriptor != denominator.descriptor:
            raise ValueError("field mismatch")
        if numerator.is_zero():
            num = numerator
            den = Poly.constant(denominator.descriptor, 1)
        else:
            g = numerator.gcd(denominator)
            num = numerator // g
            den = denominator // g
            c = den.lead.inverse()
            num, den = num * c, den * c
        self.numerator = num
        self.denominator = den

    @property
    def descriptor(self):
        return self.numerator.descriptor

    @staticmethod
    def from_poly(poly):
        return RationalFunction(poly, Poly.constant(poly.descriptor, 1))

    @staticmethod
    def constant(descriptor, value):
        return RationalFunction.from_poly(Poly.constant(descriptor, value))

    def is_zero(self):
        return self.numerator.is_zero()

    def __bool__(self):
        return bool(self.numerator)

    def coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.descriptor != self.descriptor:
                raise ValueError("field mismatch")
            return other
        if isinstance(other, Poly):
            return RationalFunction.from_poly(other)
        if isinstance(other, (int, FieldElement)):
            return RationalFunction.constant(self.descriptor, other)
        return NotImplemented

    def __add__(self, other):
        other = self.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other):
        other = self.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(
            self.numerator * other.numerator, self.denominator * other.denominator
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(
            self.numerator * other.denominator, self.denominator * other.numerator
        )

    def __rtruediv__(self, other):
        return self.coerce(other) / self

    def __pow__(self, e):
        if e < 0:
            if self.is_zero():
                raise ZeroDivisionError("negative power of zero")
            return RationalFunction(self.denominator, self.numerator) ** (-e)
        return RationalFunction(self.numerator**e, self.denominator**e)

    def derivative(self):
        return RationalFunction(
            self.numerator.derivative() * self.denominator
            - self.numerator * self.denominator.derivative(),
            self.denominator * self.denominator,
        )

    def evaluate(self, x):
        d = self.denominator.evaluate(x)
        if d.is_zero():
            raise ZeroDivisionError("pole at evaluation point")
        return self.numerator.evaluate(x) / d

    def ord_at(self, xi):
        """Valuation at a point of P^1 (INF for the point at infinity)."""
        if self.is_zero():
            raise ValueError("the zero function has no valuation")
        if xi is INF:
            return self.denominator.degree - self.numerator.degree
        return self.numerator.multiplicity_at(xi) - self.denominator.multiplicity_at(xi)

    def embed(self, target):
        return RationalFunction(self.numerator.embed(target), self.denominator.embed(target))

    def to_json(self):
        return {"num": self.numerator.to_json(), "den": self.denominator.to_json()}

    def __eq__(self, other):
        other = self.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (
            self.numerator == other.numerator and self.denominator == other.denominator
        )

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def __repr__(self):
        return f"({self.numerator!r})/({self.denominator!r})"


def normalize(f):
    """Canonical form of a rational function (the constructor normalizes)."""
    return RationalFunction(f.numerator, f.denominator)


def ord_at(f, xi):
    return f.ord_at(xi)


def frobenius_inverse(a):
    return a.frobenius_inverse()


class LaurentSeries:
    """Truncated Laurent expansion: coefficients for orders start..trunc.

    ``center`` records where the expansion was taken (a field element or
    INF); purely local computations may use center=None.
    """

    __slots__ = ("descriptor", "center", "start", "coeffs", "trunc")

    def __init__(self, descriptor, center, start, coeffs, trunc=None):
        coeffs = list(coeffs)
        if trunc is None:
            trunc = start + len(coeffs) - 1
        if trunc - start + 1 != len(coeffs):
            raise ValueError("coefficient window does not match orders")
        # canonical window: drop leading zeros (keeps truncation order)
        while coeffs and coeffs[0].is_zero():
            coeffs = coeffs[1:]
            start += 1
        if not coeffs:
            start = trunc + 1
        self.descriptor = descriptor
        self.center = center
        self.start = start
        self.coeffs = tuple(coeffs)
        self.trunc = trunc

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def order(self):
        for k, c in enumerate(self.coeffs):
            if c:
                return self.start + k
        return None

    def coeff(self, n):
        if n < self.start or n > self.trunc:
            return self.descriptor.zero()
        return self.coeffs[n - self.start]

    def _window(self):
        return self.start, self.trunc

    def __add__(self, other):
        if isinstance(other, LaurentSeries):
            if other.descriptor != self.descriptor:
                raise ValueError("field mismatch")
            start = min(self.start, other.start)
            trunc = min(self.trunc, other.trunc)
            coeffs = [self.coeff(n) + other.coeff(n) for n in range(start, trunc + 1)]
            return LaurentSeries(self.descriptor, self.center, start, coeffs, trunc)
        return NotImplemented

    def __neg__(self):
        return LaurentSeries(
            self.descriptor, self.center, self.start, [-c for c in self.coeffs], self.trunc
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.descriptor.element(c)
        return LaurentSeries(
            self.descriptor, self.center, self.start, [a * c for a in self.coeffs], self.trunc
        )

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        if other.descriptor != self.descriptor:
            raise ValueError("field mismatch")
        start = self.start + other.start
        trunc = min(self.start + other.trunc, other.start + self.trunc)
        zero = self.descriptor.zero()
        n = trunc - start + 1
        if n <= 0:
            return LaurentSeries(self.descriptor, self.center, start, [], start - 1)
        out = [zero] * n
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    k = i + j
                    if k < n and b:
                        out[k] = out[k] + a * b
        return LaurentSeries(self.descriptor, self.center, start, out, trunc)

    __rmul__ = scale

    def shift(self, k):
        """Multiply by t^k."""
        return LaurentSeries(
            self.descriptor, self.center, self.start + k, list(self.coeffs), self.trunc + k
        )

    def inverse(self):
        """Reciprocal; requires a nonzero coefficient at the start order."""
        if not self.coeffs or self.coeffs[0].is_zero():
            raise ZeroDivisionError("series inverse needs a unit leading coefficient")
        n = self.trunc - self.start + 1
        inv0 = self.coeffs[0].inverse()
        out = [inv0] + [self.descriptor.zero()] * (n - 1)
        for k in range(1, n):
            acc = self.descriptor.zero()
            for j in range(1, k + 1):
                if j < len(self.coeffs):
                    acc = acc + self.coeffs[j] * out[k - j]
            out[k] = -acc * inv0
        return LaurentSeries(
            self.descriptor, self.center, -self.start, out, -self.start + n - 1
        )

    def __truediv__(self, other):
        return self * other.inverse()

    def nth_root(self, m, lead_root=None):
        """A series y with y^m = self, for m prime to the characteristic.

        The start order must be divisible by m.  ``lead_root`` fixes the
        branch (an m-th root of the leading coefficient); when omitted a
        root is searched in the coefficient field and it is an error if
        none exists there.
        """
        if m % self.descriptor.p == 0:
            raise ValueError("root index divisible by the characteristic")
        if not self.coeffs or self.coeffs[0].is_zero():
            raise ValueError("series root needs a unit leading coefficient")
        if self.start % m != 0:
            raise ValueError("start order not divisible by the root index")
        c0 = self.coeffs[0]
        if lead_root is None:
            lead_root = nth_root_in_field(c0, m)
            if lead_root is None:
                raise ArithmeticError("leading coefficient has no m-th root here")
        if lead_root**m != c0:
            raise ValueError("lead_root is not an m-th root of the leading coefficient")
        n = self.trunc - self.start + 1
        zero, one = self.descriptor.zero(), self.descriptor.one()
        # unit part u with u_0 = 1
        inv0 = c0.inverse()
        u = [self.coeffs[i] * inv0 if i < len(self.coeffs) else zero for i in range(n)]
        y = [one] + [zero] * (n - 1)
        melem = self.descriptor.element(m)
        minv = melem.inverse()
        for k in range(1, n):
            # coefficient of t^k in y^m given y_k (linear term m*y_k)
            ym = _power_series_pow(y, m, k, zero)
            y[k] = (u[k] - ym[k]) * minv
        out = [lead_root * c for c in y]
        return LaurentSeries(
            self.descriptor, self.center, self.start // m, out, self.start // m + n - 1
        )

    def derivative(self):
        """Term-wise d/dt."""
        coeffs = [
            self.descriptor.element(n) * self.coeff(n)
            for n in range(self.start, self.trunc + 1)
        ]
        return LaurentSeries(
            self.descriptor, self.center, self.start - 1, coeffs, self.trunc - 1
        )

    def truncate(self, trunc):
        if trunc >= self.trunc:
            return self
        coeffs = [self.coeff(n) for n in range(self.start, trunc + 1)]
        return LaurentSeries(self.descriptor, self.center, self.start, coeffs, trunc)

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        if self.descriptor != other.descriptor or self.center != other.center:
            return False
        lo = min(self.start, other.start)
        hi = min(self.trunc, other.trunc)
        return all(self.coeff(n) == other.coeff(n) for n in range(lo, hi + 1))

    def __repr__(self):
        terms = [
            f"({self.coeff(n)!r})*t^{n}"
            for n in range(self.start, self.trunc + 1)
            if self.coeff(n)
        ]
        body = " + ".join(terms) if terms else "0"
        return f"LaurentSeries({body} + O(t^{self.trunc + 1}))"


def _power_series_pow(y, m, upto, zero):
    """(sum y_i t^i)^m truncated at order upto (dense helper)."""
    out = [zero] * (upto + 1)
    out[0] = y[0] ** 0  # one
    acc = list(out)
    e = m
    base = list(y[: upto + 1]) + [zero] * max(0, upto + 1 - len(y))
    result = None
    cur = base
    while e:
        if e & 1:
            result = cur if result is None else _series_mul_trunc(result, cur, upto, zero)
        e >>= 1
        if e:
            cur = _series_mul_trunc(cur, cur, upto, zero)
    return result


def _series_mul_trunc(a, b, upto, zero):
    out = [zero] * (upto + 1)
    for i, x in enumerate(a[: upto + 1]):
        if x:
            for j, yv in enumerate(b[: upto + 1 - i]):
                if yv:
                    out[i + j] = out[i + j] + x * yv
    return out


def nth_root_in_field(a, m):
    """Some x with x^m = a in a's field, or None (least in serialization order)."""
    if a.is_zero():
        return a
    d = a.descriptor
    q1 = d.order - 1
    g = _gcd_int(m, q1)
    # solvable iff a^(q1/g) == 1; the m-th power map has image of index g
    if a ** (q1 // g) != d.one():
        return None
    for cand in d.elements():
        if cand**m == a:
            return cand
    return None


def nth_root_with_extension(a, m):
    """An m-th root of a, extending the field minimally if needed.

    Returns (root, descriptor); the root is the least one (serialization
    order) in the smallest extension F_{p^{r*k}} that contains any.
    """
    d = a.descriptor
    for k in range(1, m + 1):
        target = FieldDescriptor.get(d.p, d.r * k)
        b = a.embed(target)
        root = nth_root_in_field(b, m)
        if root is not None:
            return root, target
    raise ArithmeticError("no m-th root found in extensions up to degree m")


def _gcd_int(a, b):
    while b:
        a, b = b, a % b
    return a


def series_at(f, xi, n):
    """Truncated Laurent expansion of a rational function at xi.

    The local parameter is t = x - xi at a finite point and t = 1/x at
    infinity; coefficients run up to order n inclusive.
    """
    if f.is_zero():
        return LaurentSeries(f.descriptor, xi, n + 1, [], n)
    v = f.ord_at(xi)
    if n < v:
        raise ValueError("truncation order below the valuation")
    d = f.descriptor
    if xi is INF:
        num_t = f.numerator.reversed_()
        den_t = f.denominator.reversed_()
        shift = f.denominator.degree - f.numerator.degree
    else:
        lin = Poly(d, [d.element(xi), d.one()])  # x = xi + t
        num_t = f.numerator.compose(lin)
        den_t = f.denominator.compose(lin)
        shift = 0
    vn = _poly_valuation(num_t)
    vd = _poly_valuation(den_t)
    length = n - v + 1
    num_win = list(num_t.coeffs[vn : vn + length])
    den_win = list(den_t.coeffs[vd : vd + length])
    num_win += [d.zero()] * (length - len(num_win))
    den_win += [d.zero()] * (length - len(den_win))
    num_ser = LaurentSeries(d, xi, 0, num_win)
    den_ser = LaurentSeries(d, xi, 0, den_win)
    ser = (num_ser * den_ser.inverse()).shift(vn - vd + shift)
    return ser.truncate(n)


def _poly_valuation(poly):
    for k, c in enumerate(poly.coeffs):
        if c:
            return k
    raise ValueError("zero polynomial")
