"""The Cartier operator on P^1 and on Kummer covers z^m = prod (x-tau_j)^b_j.

Forms on the cover are written h(x) * z_i * dx with h rational, one
level i per Frobenius step of the exponent orbit.  The operator sends
level i+1 to level i via z_{i+1} = z_i^p * prod (x-tau_j)^{e_j} with
integer exponents e_j = (b^(i+1) - p b^(i))/m; the root-of-unity
ambiguity in that relation is fixed as 1 (any other choice is absorbed
by the eigenform constants).

Local expansions at critical points run over dual-number coefficients
throughout (a pair of plain series); the purely algebraic callers just
leave the epsilon channel zero.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .algebra import (
    INF,
    FieldDescriptor,
    LaurentSeries,
    Poly,
    RationalFunction,
    nth_root_in_field,
)

_BIG = 10**9


# ---------------------------------------------------------------------------
# the Cartier operator on rational differentials of the x-line


def cartier_rational(f):
    """C(f dx) for a rational function f.

    Writes f dx = (u g^{p-1} / g^p) dx with g the (monic) denominator,
    keeps the monomials x^n with n = -1 mod p and takes p-th roots of
    their coefficients; the result is C_poly(u g^{p-1}) / g dx.
    """
    d = f.descriptor
    p = d.p
    if f.is_zero():
        return f
    g = f.denominator
    u = f.numerator * g ** (p - 1)
    out = {}
    for n, c in enumerate(u.coeffs):
        if c and n % p == p - 1:
            out[(n + 1) // p - 1] = c.frobenius_inverse()
    if not out:
        return RationalFunction(Poly(d, []), Poly.constant(d, 1))
    deg = max(out)
    num = Poly(d, [out.get(k, d.zero()) for k in range(deg + 1)])
    return RationalFunction(num, g)


# ---------------------------------------------------------------------------
# Kummer covers and eigenforms


@dataclass(frozen=True)
class KummerCover:
    """z^m = prod over finite branches of (x - tau_j)^{b_j^{(i)}}.

    ``orbits[j]`` is the full exponent orbit of branch j; the point at
    infinity carries ``infinity_orbit`` (its exponents never enter the
    defining equation, only the bookkeeping).  Purity normalization:
    exponents at each level sum to m over all points including infinity.
    """

    descriptor: FieldDescriptor
    m: int
    taus: tuple
    orbits: tuple
    infinity_orbit: tuple = None

    def __post_init__(self):
        if len(self.taus) != len(self.orbits):
            raise ValueError("one exponent orbit per finite branch")
        if len(set((t.coeffs for t in self.taus))) != len(self.taus):
            raise ValueError("branch points must be distinct")
        s = self.s
        for orbit in self.orbits:
            if len(orbit) != s:
                raise ValueError("orbit lengths differ")
        if self.infinity_orbit is not None and len(self.infinity_orbit) != s:
            raise ValueError("orbit lengths differ")
        p = self.descriptor.p
        orbits = list(self.orbits)
        if self.infinity_orbit is not None:
            orbits.append(self.infinity_orbit)
        for orbit in orbits:
            for i in range(s):
                if (p * orbit[i] - orbit[(i + 1) % s]) % self.m:
                    raise ValueError("exponent orbit is not a Frobenius orbit mod m")
        for i in range(s):
            total = sum(orb[i] for orb in self.orbits)
            if self.infinity_orbit is not None:
                total += self.infinity_orbit[i]
            if total % self.m:
                raise ValueError(f"level {i}: exponents do not sum to 0 mod m")

    @property
    def s(self):
        return len(self.orbits[0]) if self.orbits else (
            len(self.infinity_orbit) if self.infinity_orbit else 1
        )

    def is_pure(self):
        for i in range(self.s):
            total = sum(orb[i] for orb in self.orbits)
            if self.infinity_orbit is not None:
                total += self.infinity_orbit[i]
            if total != self.m:
                return False
        return True

    def orbit_at(self, key):
        if key is INF:
            if self.infinity_orbit is None:
                raise KeyError("infinity is not a branch of this cover")
            return self.infinity_orbit
        return self.orbits[key]

    def m_at(self, key):
        from math import gcd

        b = self.orbit_at(key)[0]
        return self.m // gcd(self.m, b) if b else 1

    def radicand(self, level):
        """prod (x - tau_j)^{b_j^{(level)}} as a polynomial."""
        d = self.descriptor
        out = Poly.constant(d, 1)
        for tau, orbit in zip(self.taus, self.orbits):
            lin = Poly(d, [-tau, d.one()])
            out = out * lin ** orbit[level % self.s]
        return out

    def step_exponents(self, level):
        """e_j with z_level = z_{level-1}^p * prod (x-tau_j)^{e_j}."""
        s = self.s
        out = []
        for orbit in self.orbits:
            b_hi = orbit[level % s]
            b_lo = orbit[(level - 1) % s]
            e, rem = divmod(b_hi - self.descriptor.p * b_lo, self.m)
            if rem:
                raise ValueError("exponent orbit violates the Frobenius relation")
            out.append(e)
        return tuple(out)

    def step_factor(self, level):
        """prod (x - tau_j)^{e_j} as a rational function."""
        d = self.descriptor
        num = Poly.constant(d, 1)
        den = Poly.constant(d, 1)
        for tau, e in zip(self.taus, self.step_exponents(level)):
            lin = Poly(d, [-tau, d.one()])
            if e >= 0:
                num = num * lin**e
            else:
                den = den * lin ** (-e)
        return RationalFunction(num, den)

    def embed(self, target):
        return KummerCover(
            target,
            self.m,
            tuple(t.embed(target) for t in self.taus),
            self.orbits,
            self.infinity_orbit,
        )

    def content_hash(self):
        blob = json.dumps(
            {
                "p": self.descriptor.p,
                "r": self.descriptor.r,
                "m": self.m,
                "taus": [t.to_json()["coeffs"] for t in self.taus],
                "orbits": [list(o) for o in self.orbits],
                "infinity": list(self.infinity_orbit) if self.infinity_orbit else None,
            },
            sort_keys=True,
        )
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class KummerForm:
    """The differential h(x) * z_{level} * dx on the cover."""

    cover: KummerCover
    level: int
    h: RationalFunction

    def __post_init__(self):
        if self.h.descriptor != self.cover.descriptor:
            raise ValueError("field mismatch between cover and coefficient")
        object.__setattr__(self, "level", self.level % self.cover.s)

    def is_zero(self):
        return self.h.is_zero()

    def to_json(self):
        return {
            "level": self.level,
            "h": self.h.to_json(),
            "cover": self.cover.content_hash(),
        }


@dataclass(frozen=True)
class FormCombination:
    """sum over levels of h_l * z_l * dx (one rational coefficient per level)."""

    cover: KummerCover
    hs: tuple

    def __post_init__(self):
        if len(self.hs) != self.cover.s:
            raise ValueError("one coefficient per level")

    @staticmethod
    def from_form(form):
        d = form.cover.descriptor
        zero = RationalFunction(Poly(d, []), Poly.constant(d, 1))
        hs = [zero] * form.cover.s
        hs[form.level] = form.h
        return FormCombination(form.cover, tuple(hs))

    def is_zero(self):
        return all(h.is_zero() for h in self.hs)

    def __add__(self, other):
        if self.cover != other.cover:
            raise ValueError("forms live on different covers")
        return FormCombination(
            self.cover, tuple(a + b for a, b in zip(self.hs, other.hs))
        )

    def scale(self, c):
        return FormCombination(self.cover, tuple(h * c for h in self.hs))


def cartier_kummer(cover, form):
    """C of h * z_{level} * dx, landing at level - 1."""
    if form.cover != cover:
        raise ValueError("form does not live on the given cover")
    g = cartier_rational(form.h * cover.step_factor(form.level))
    return KummerForm(cover, form.level - 1, g)


def cartier_combination(combo):
    cover = combo.cover
    out = [None] * cover.s
    for level, h in enumerate(combo.hs):
        out[(level - 1) % cover.s] = cartier_rational(h * cover.step_factor(level))
    return FormCombination(cover, tuple(out))


def is_cartier_fixed(form):
    """True iff the Cartier operator returns the input exactly.

    Accepts a plain rational function (meaning f dx on the x-line), a
    KummerForm, or a FormCombination.
    """
    if isinstance(form, RationalFunction):
        return cartier_rational(form) == form
    if isinstance(form, KummerForm):
        form = FormCombination.from_form(form)
    return cartier_combination(form) == form


def omega_form(datum, i):
    """The level-i eigenform eps_i * z_i * dx / prod_{B0 finite}(x - tau)."""
    eps = datum.epsilon[i % datum.cover.s]
    if eps.is_zero():
        raise ValueError("eigenform constants must be units")
    h = RationalFunction(Poly.constant(datum.cover.descriptor, eps), datum.q_poly)
    return KummerForm(datum.cover, i % datum.cover.s, h)


def omega_combination(datum):
    d = datum.cover.descriptor
    hs = []
    for i in range(datum.cover.s):
        hs.append(RationalFunction(Poly.constant(d, datum.epsilon[i]), datum.q_poly))
    return FormCombination(datum.cover, tuple(hs))


def phi_basis(datum, generator_power=None):
    """The F_p-rational basis phi_l = sum_i chi_{i+l}(alpha) omega_i.

    chi_0(alpha) is a primitive m-th root of unity gamma in F_{p^s}
    (embedded into the datum's field) and chi_{i+l}(alpha) =
    gamma^{p^{i+l}}.  ``generator_power`` selects alpha = (canonical
    generator)^k; by default the least power (in serialization order of
    gamma^k) whose conjugates are F_p-independent is chosen, and it is
    an error if no generator yields an independent family.
    """
    cover = datum.cover
    s = cover.s
    p = cover.descriptor.p
    roots_field = datum.field_with_roots()
    gamma0 = _primitive_root_of_unity(roots_field, cover.m)
    if generator_power is not None:
        gamma = gamma0**generator_power
        if gamma.multiplicative_order() != cover.m:
            raise ValueError("alpha is not a generator of H")
        candidates = [gamma]
    else:
        candidates = [
            gamma0**k for k in range(1, cover.m) if _gcd(k, cover.m) == 1
        ]
        # the fixed space only needs c in F_{p^s} with independent
        # conjugates; fall back to a normal-basis generator when no
        # m-th root of unity has one
        fallback = [
            e
            for e in roots_field.elements()
            if not e.is_zero() and e ** (p**s) == e
        ]
        candidates += [e for e in fallback if e not in candidates]
    for gamma in candidates:
        conjugates = [gamma ** (p**l) for l in range(s)]
        if _fp_rank(conjugates) != s:
            if generator_power is not None:
                raise ValueError("alpha does not give an independent family")
            continue
        omegas = omega_combination(datum.embedded(gamma.descriptor))
        out = []
        for l in range(s):
            hs = tuple(
                omegas.hs[i] * conjugates[(i + l) % s] for i in range(s)
            )
            out.append(FormCombination(omegas.cover, hs))
        return out
    raise ArithmeticError("no scalar yields an F_p-independent fixed basis")


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _primitive_root_of_unity(descriptor, m):
    """Least element of multiplicative order m (serialization order)."""
    if (descriptor.order - 1) % m:
        raise ValueError(f"no m-th roots of unity in {descriptor}")
    for cand in descriptor.elements():
        if not cand.is_zero() and cand.multiplicative_order() == m:
            return cand
    raise ArithmeticError("unreachable: the unit group is cyclic")


def _fp_rank(elements):
    """Rank over F_p of field elements viewed as coefficient vectors."""
    import numpy as np

    from .homcoh import rank_mod_p

    if not elements:
        return 0
    p = elements[0].descriptor.p
    A = np.array([list(e.coeffs) for e in elements], dtype=np.int64)
    return rank_mod_p(A, p)


# ---------------------------------------------------------------------------
# local expansions (dual-number coefficients via a pair of plain series)


def _zero_series(descriptor):
    return LaurentSeries(descriptor, None, _BIG, [], _BIG - 1)


@dataclass(frozen=True)
class DSer:
    """A Laurent series over the dual numbers: base + epsilon * eps."""

    base: LaurentSeries
    eps: LaurentSeries

    @property
    def descriptor(self):
        return self.base.descriptor

    def __add__(self, other):
        return DSer(self.base + other.base, self.eps + other.eps)

    def __sub__(self, other):
        return DSer(self.base - other.base, self.eps - other.eps)

    def __mul__(self, other):
        return DSer(
            self.base * other.base, self.base * other.eps + self.eps * other.base
        )

    def scale(self, c_base, c_eps=None):
        out_base = self.base.scale(c_base)
        out_eps = self.eps.scale(c_base)
        if c_eps is not None:
            out_eps = out_eps + self.base.scale(c_eps)
        return DSer(out_base, out_eps)

    def shift(self, k):
        return DSer(self.base.shift(k), self.eps.shift(k))

    def inverse(self):
        ib = self.base.inverse()
        return DSer(ib, -(ib * ib * self.eps))

    def power(self, e):
        if e < 0:
            return self.inverse().power(-e)
        # give the unit a wide window so it does not truncate products
        result = DSer(
            LaurentSeries(
                self.descriptor,
                None,
                0,
                [self.descriptor.one()]
                + [self.descriptor.zero()] * max(0, self.base.trunc - self.base.start),
            ),
            _zero_series(self.descriptor),
        )
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def nth_root(self, m, lead_root=None):
        y = self.base.nth_root(m, lead_root)
        # (y + eps z)^m = base + eps * e  =>  z = e * y / (m * base)
        num = self.eps * y
        z = (num * self.base.inverse()).scale(
            self.descriptor.element(m).inverse()
        )
        return DSer(y, z)

    def derivative(self):
        return DSer(self.base.derivative(), self.eps.derivative())

    def coeff(self, n):
        return self.base.coeff(n), self.eps.coeff(n)

    def window(self):
        return (
            min(self.base.start, self.eps.start),
            min(self.base.trunc, self.eps.trunc),
        )


def _const_dser(descriptor, value, eps_value=None, length=1):
    base = LaurentSeries(
        descriptor, None, 0, [descriptor.element(value)] + [descriptor.zero()] * (length - 1)
    )
    if eps_value is None or descriptor.element(eps_value).is_zero():
        eps = _zero_series(descriptor)
    else:
        eps = LaurentSeries(
            descriptor, None, 0, [descriptor.element(eps_value)] + [descriptor.zero()] * (length - 1)
        )
    return DSer(base, eps)


def _eval_poly_dser(poly, x):
    d = poly.descriptor
    acc = None
    for c in reversed(poly.coeffs):
        cd = _const_dser(d, c, length=x.base.trunc - x.base.start + 1)
        acc = cd if acc is None else acc * x + cd
    if acc is None:
        zero = _zero_series(d)
        return DSer(zero, zero)
    return acc


def _eval_rational_dser(f, x):
    num = _eval_poly_dser(f.numerator, x)
    den = _eval_poly_dser(f.denominator, x)
    return num * den.inverse()


def expand_combination(cover, hs, center, upto, delta=None, eps_hs=None):
    """Expansion of sum_l (h_l + eps * theta_l) z_{l,R} dx at a critical point.

    ``center`` is a finite branch index or INF; ``delta`` maps branch
    indices to the epsilon-part of the branch coordinate (the point at
    infinity never moves); ``eps_hs`` are the theta_l.  The local
    parameter is t with x = tau_R + t^{m_j} (resp. x = t^{-m_inf});
    returns the dt-coefficient DSer with coefficients up to order
    ``upto``, over the cover's field or the minimal extension needed for
    the branch constant of z.

    The branch of z_0 is fixed by the least m-th root (serialization
    order) of the leading constant; higher levels follow from the
    Frobenius recursion, so all levels use consistent branches.
    """
    d = cover.descriptor
    delta = delta or {}
    m = cover.m
    mj = cover.m_at(center)
    s = cover.s
    maxdeg = max(
        (h.numerator.degree + h.denominator.degree for h in hs if not h.is_zero()),
        default=0,
    )
    if eps_hs is not None:
        maxdeg = max(
            maxdeg,
            max(
                (h.numerator.degree + h.denominator.degree
                 for h in eps_hs if not h.is_zero()),
                default=0,
            ),
        )
    # window losses: Horner steps at infinity and repeated p-th powers of
    # series with negative start orders both shave multiples of m
    length = upto + (maxdeg + d.p * s + 6) * (m + 1) + 8

    def build(desc, cov, hs_, eps_hs_, delta_, length):
        one = desc.one()
        if center is INF:
            x = DSer(
                LaurentSeries(desc, None, -mj, [one] + [desc.zero()] * (length - 1)),
                _zero_series(desc),
            )
            dx = x.derivative()
        else:
            tau = cov.taus[center]
            dval = delta_.get(center, desc.zero())
            coeffs = [tau] + [desc.zero()] * (mj - 1) + [one] + [desc.zero()] * (length - mj - 1)
            base = LaurentSeries(desc, None, 0, coeffs)
            if dval.is_zero():
                eps = _zero_series(desc)
            else:
                eps = LaurentSeries(desc, None, 0, [dval] + [desc.zero()] * (length - 1))
            x = DSer(base, eps)
            dx = DSer(
                LaurentSeries(
                    desc,
                    None,
                    mj - 1,
                    [desc.element(mj)] + [desc.zero()] * (length - 1),
                ),
                _zero_series(desc),
            )
        # linear factors (x - tau_k) as dual series
        factors = []
        for k, tau_k in enumerate(cov.taus):
            dv = delta_.get(k, desc.zero())
            fk = x - _const_dser(desc, tau_k, dv if not dv.is_zero() else None, length)
            factors.append(fk)
        # z_0 from the radicand, then the Frobenius recursion
        rad = None
        for fk, orbit in zip(factors, cov.orbits):
            term = fk.power(orbit[0])
            rad = term if rad is None else rad * term
        if rad is None:
            rad = _const_dser(desc, 1, None, length)
        lead = rad.base.coeffs[0]
        root = nth_root_in_field(lead, m)
        if root is None:
            return ("extend", lead)  # caller extends the field
        zs = [rad.nth_root(m, root)]
        for level in range(1, s):
            z = zs[-1].power(desc.p)
            for fk, e in zip(factors, cov.step_exponents(level)):
                if e:
                    z = z * fk.power(e)
            zs.append(z)
        total = None
        for level in range(s):
            coeff = _eval_rational_dser(hs_[level], x)
            if eps_hs_ is not None and not eps_hs_[level].is_zero():
                th = _eval_rational_dser(eps_hs_[level], x)
                coeff = DSer(coeff.base, coeff.eps + th.base)
            term = coeff * zs[level] * dx
            total = term if total is None else total + term
        return total

    desc = d
    cov, hs_, eps_hs_, delta_ = cover, hs, eps_hs, delta
    for widen in range(4):
        out = build(desc, cov, hs_, eps_hs_, delta_, length)
        if isinstance(out, tuple):
            from .algebra import nth_root_with_extension

            _, desc = nth_root_with_extension(out[1], m)
            cov = cover.embed(desc)
            hs_ = tuple(h.embed(desc) for h in hs)
            eps_hs_ = tuple(h.embed(desc) for h in eps_hs) if eps_hs else None
            delta_ = {k: v.embed(desc) for k, v in delta.items()}
            out = build(desc, cov, hs_, eps_hs_, delta_, length)
            if isinstance(out, tuple):
                raise ArithmeticError("branch constant not a root in its own field")
        lo, hi = out.window()
        if hi >= upto:
            return out
        length *= 2
    raise ArithmeticError("expansion window too small; increase upto margin")


def ord_at_critical(form, center, search_span=None):
    """Exact vanishing order of a form (or combination) at a critical point.

    The order is computed from the honest local expansion; the input
    must be nonzero.
    """
    if isinstance(form, KummerForm):
        combo = FormCombination.from_form(form)
    else:
        combo = form
    if combo.is_zero():
        raise ValueError("the zero form has no order")
    cover = combo.cover
    span = search_span if search_span is not None else 4 * cover.m + 6
    for _ in range(3):
        ser = expand_combination(cover, combo.hs, center, span)
        order = ser.base.order()
        if order is not None:
            return order
        span *= 2
    raise ArithmeticError("order exceeds the search window")


def ord_single_form(form, center):
    """Closed-form order of h * z_l * dx at a critical point."""
    cover = form.cover
    l = form.level
    if form.is_zero():
        raise ValueError("the zero form has no order")
    mj = cover.m_at(center)
    if center is INF:
        fin = sum(orb[l] for orb in cover.orbits)
        ord_z = -(mj * fin) // cover.m
        return mj * form.h.ord_at(INF) + ord_z - mj - 1
    tau = cover.taus[center]
    ord_z = mj * cover.orbits[center][l] // cover.m
    return mj * form.h.ord_at(tau) + ord_z + mj - 1
