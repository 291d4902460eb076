"""First-order deformations of multiplicative data over the dual numbers.

A tangent direction assigns to every new branch point an epsilon-shift
delta_j; the eigenforms pick up epsilon-corrections theta_i whose
exactness (equivalently, membership in the Cartier kernel) is a linear
condition.  Solving it produces the lifted datum; specialty of the lift
at each new point is then read off from honest local expansions over
k[eps], and the generic failure of specialty along every direction is
the rigidity statement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cartier, sigdata
from .algebra import Poly, RationalFunction, series_at
from .homcoh import rank_mod_p, solve_mod_p


class DualNumber:
    """a + eps*b with eps^2 = 0, over a fixed finite field."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=None):
        self.a = a
        self.b = b if b is not None else a.descriptor.zero()
        if self.b.descriptor != a.descriptor:
            raise ValueError("field mismatch in dual number")

    @property
    def descriptor(self):
        return self.a.descriptor

    def _coerce(self, other):
        if isinstance(other, DualNumber):
            return other
        return DualNumber(self.descriptor.element(other))

    def __add__(self, other):
        other = self._coerce(other)
        return DualNumber(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return DualNumber(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return DualNumber(self.a * other.a, self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def inverse(self):
        if self.a.is_zero():
            raise ZeroDivisionError("nilpotent dual number")
        ia = self.a.inverse()
        return DualNumber(ia, -(self.b * ia * ia))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = DualNumber(self.descriptor.one())
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_zero(self):
        return self.a.is_zero() and self.b.is_zero()

    def is_unit(self):
        return not self.a.is_zero()

    def __eq__(self, other):
        if not isinstance(other, DualNumber):
            other = self._coerce(other)
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"({self.a!r} + eps*{self.b!r})"


@dataclass(frozen=True)
class DeformedDatum:
    """A lifted datum: base, tangent direction, and eps-corrections.

    ``h[i]`` is the epsilon-part of omega_i relative to the moved
    Kummer coordinate: omega_{i,R} = (eps_i/Q + eps h_i) z_{i,R} dx.
    Rewriting z_{i,R} in terms of the base z_i contributes the polar
    part A_i, so the total eps-part over the base cover is A_i + h_i.
    """

    base: object  # search.DeformationDatum
    delta: tuple  # one FieldElement per new point
    h: tuple  # one RationalFunction per level, relative to z_{i,R} dx


def _new_slots(datum):
    """Cover branch indices and signature indices of the new points."""
    sig = datum.signature
    return [(2 + k, j) for k, j in enumerate(sig.new_indices())]


def _polar_part(datum, delta, level):
    """The forced eps-part: -(eps_i/(m Q)) sum_j b_j^{(i)} delta_j/(x-tau_j)."""
    sig = datum.signature
    d = datum.descriptor
    q = datum.q_poly
    x = Poly.x(d)
    total = RationalFunction(Poly(d, []), Poly.constant(d, 1))
    for k, (slot, j) in enumerate(_new_slots(datum)):
        if delta[k].is_zero():
            continue
        b = sig.orbit(j)[level]
        tau = datum.tau[k]
        term = RationalFunction(
            Poly.constant(d, d.element(b) * delta[k]), x - Poly.constant(d, tau)
        )
        total = total + term
    minv = d.element(sig.m).inverse()
    scale = -(datum.epsilon[level] * minv)
    return total * RationalFunction(Poly.constant(d, scale), q)


def _correction_space(datum):
    """Basis of the allowed regular corrections: x^k/(Q N), k = 0..nu."""
    d = datum.descriptor
    x = Poly.x(d)
    n_poly = Poly.constant(d, 1)
    for tau in datum.tau:
        n_poly = n_poly * (x - Poly.constant(d, tau))
    den = datum.q_poly * n_poly
    nu = len(datum.tau)
    return [RationalFunction(x**k, den) for k in range(nu + 1)]


def _rational_to_vector(fs, p):
    """F_p coordinate matrix of rational functions over a common denominator.

    Returns (matrix rows indexed by function, columns by coefficient),
    suitable for exact linear algebra; the functions must share a field.
    """
    d = fs[0].descriptor
    den = Poly.constant(d, 1)
    for f in fs:
        g = den.gcd(f.denominator)
        den = den * (f.denominator // g)
    nums = [f.numerator * (den // f.denominator) for f in fs]
    deg = max((n.degree for n in nums if not n.is_zero()), default=0)
    rows = []
    for n in nums:
        row = []
        for k in range(deg + 1):
            c = n.coeffs[k] if k <= n.degree else d.zero()
            row.extend(c.coeffs)
        rows.append(row)
    return np.array(rows, dtype=np.int64) % p


def lift_datum(datum, delta):
    """Solve for the eps-corrections keeping every form logarithmic.

    The total eps-part (A_i + h_i) z_i dx must be exact, equivalently
    in the kernel of the Cartier operator of the cover; this is a
    square F_p-linear condition on h_i inside the pole-bound space.
    Non-singularity of the system is equivalent to purity (the
    homogeneous solutions are exact isotypic sections, and those vanish
    exactly when the isotypic cohomology does), so non-pure input
    raises instead of silently producing junk, and a singular system
    for a pure base is an error, not a report.
    """
    sig = datum.signature
    if not sigdata.is_pure(sig):
        raise ValueError("lift requires a pure signature")
    d = datum.descriptor
    p = d.p
    delta = tuple(d.element(v) for v in delta)
    if len(delta) != len(datum.tau):
        raise ValueError("one delta per new branch point")
    cover = datum.cover
    s = cover.s
    basis = _correction_space(datum)
    gens = [d.generator() ** t for t in range(d.r)]
    corrections = []
    for i in range(s):
        step = cover.step_factor(i)
        a_i = _polar_part(datum, delta, i)
        rhs = -cartier.cartier_rational(a_i * step)
        images = []
        for w in basis:
            for g in gens:
                images.append(cartier.cartier_rational(w * g * step))
        mat = _rational_to_vector(images + [rhs], p)
        A = mat[:-1].T
        b = mat[-1]
        x = solve_mod_p(A, b, p)
        if x is None:
            raise ArithmeticError(f"level {i}: no logarithmic correction exists")
        if rank_mod_p(A, p) != A.shape[1]:
            raise ArithmeticError(f"level {i}: correction space is singular")
        h_i = RationalFunction(Poly(d, []), Poly.constant(d, 1))
        for idx, coeff in enumerate(x):
            if coeff:
                w = basis[idx // d.r]
                g = gens[idx % d.r]
                h_i = h_i + w * (g * int(coeff))
        corrections.append(h_i)
    return DeformedDatum(datum, delta, tuple(corrections))


def kodaira_spencer(deformed):
    """Recover the tangent direction from the stored eps-parts alone.

    The correction h_i carries a simple pole at every moving branch
    point whose residue is eps_i b_j^{(i)} delta_j / (m Q(tau_j)), so
    delta_j = m Q(tau_j) Res_{tau_j}(h_i) / (eps_i b_j^{(i)}),
    independent of the level i; the cross-level agreement is checked.
    """
    datum = deformed.base
    sig = datum.signature
    d = datum.descriptor
    q = datum.q_poly
    out = []
    for k, (slot, j) in enumerate(_new_slots(datum)):
        tau = datum.tau[k]
        vals = []
        for i in range(sig.s):
            b = sig.orbit(j)[i]
            if b % d.p == 0:
                continue  # the residue is killed by b in characteristic p
            h_i = deformed.h[i]
            if h_i.is_zero() or h_i.ord_at(tau) >= 0:
                res = d.zero()
            else:
                res = series_at(h_i, tau, -1).coeff(-1)
            val = (d.element(sig.m) * q.evaluate(tau) * res) * (
                datum.epsilon[i] * d.element(b)
            ).inverse()
            vals.append(val)
        if not vals:
            raise ArithmeticError(f"new point {k}: no level determines delta")
        if any(v != vals[0] for v in vals[1:]):
            raise ArithmeticError(f"new point {k}: levels disagree on delta")
        out.append(vals[0])
    return tuple(out)


def is_j_special(deformed, k, weakened=False):
    """Specialty of the lift at the k-th new point, over the dual numbers.

    Every nonzero element of the fixed space (coefficients c^{p^i} for
    c in F_{p^s}, scaled onto the omega_i) is expanded at the moved
    branch point; specialty needs every coefficient below
    M = m_j + a_j - 1 to vanish identically (epsilon-parts included)
    and the coefficient at M to be a unit.  ``weakened`` ignores the
    nilpotent low-order terms and only looks for the first unit
    coefficient; it exists as a negative control and must not be used
    for real verification.
    """
    datum = deformed.base
    sig = datum.signature
    slot, j = _new_slots(datum)[k]
    m_j = sig.m_j(j)
    target = m_j + sig.a_min(j) - 1
    cover = datum.cover
    s = cover.s
    d = datum.descriptor
    from .algebra import FieldDescriptor

    sub = FieldDescriptor.get(d.p, s)
    big = FieldDescriptor.get(d.p, _lcm(d.r, s))
    datum_b = datum.embedded(big)
    delta_map = {slot: deformed.delta[k].embed(big)}
    thetas = [t.embed(big) for t in deformed.h]
    inv_q = RationalFunction(Poly.constant(big, 1), datum_b.q_poly)
    for c0 in sub.elements():
        if c0.is_zero():
            continue
        c = c0.embed(big)
        hs, eps_hs = [], []
        for i in range(s):
            ci = c ** (d.p**i)
            hs.append(inv_q * (datum_b.epsilon[i] * ci))
            eps_hs.append(thetas[i] * ci)
        ser = cartier.expand_combination(
            datum_b.cover,
            tuple(hs),
            slot,
            target + m_j,
            delta=delta_map,
            eps_hs=tuple(eps_hs),
        )
        if weakened:
            lead = ser.base.order()
            if lead is None or lead != target:
                return False
            continue
        for n in range(min(ser.base.start, ser.eps.start), target):
            bb, ee = ser.coeff(n)
            if not bb.is_zero() or not ee.is_zero():
                return False
        bb, _ = ser.coeff(target)
        if bb.is_zero():
            return False
    return True


def _lcm(a, b):
    from math import gcd

    return a * b // gcd(a, b)


def rigidity_check(datum, directions=None):
    """No nonzero tangent direction keeps the lift special everywhere.

    For every coordinate direction and every nonzero scalar the lifted
    datum must fail specialty at some new point; the zero direction must
    stay special at all of them (that is the round-trip sanity check).
    Returns a report with the per-direction outcomes.
    """
    d = datum.descriptor
    n_new = len(datum.tau)
    zero = tuple(d.zero() for _ in range(n_new))
    report = {"zero_direction_special": None, "directions": [], "rigid": None}
    lifted0 = lift_datum(datum, zero)
    ks0 = kodaira_spencer(lifted0)
    report["zero_roundtrip"] = ks0 == zero
    report["zero_direction_special"] = all(
        is_j_special(lifted0, k) for k in range(n_new)
    )
    if directions is None:
        directions = []
        for k in range(n_new):
            for c in d.elements():
                if c.is_zero():
                    continue
                vec = [d.zero()] * n_new
                vec[k] = c
                directions.append(tuple(vec))
    all_fail = True
    for vec in directions:
        lifted = lift_datum(datum, vec)
        roundtrip = kodaira_spencer(lifted) == vec
        fails_at = [k for k in range(n_new) if not is_j_special(lifted, k)]
        entry = {
            "delta": [v.to_json() for v in vec],
            "roundtrip": roundtrip,
            "fails_specialty_at": fails_at,
        }
        report["directions"].append(entry)
        if not fails_at or not roundtrip:
            all_fail = False
    report["rigid"] = (
        all_fail and report["zero_direction_special"] and report["zero_roundtrip"]
    )
    return report
