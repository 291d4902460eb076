"""Numerical signatures of multiplicative deformation data.

A signature fixes the prime p, the order m of the tame cyclic group
(with p invertible mod m), and for every critical point an integer part
nu in {0,1} plus a residue b0 in [0,m).  Everything else is derived:
the Frobenius orbit b^(i) = p^i b0 mod m, the local index
m_j = m/gcd(m,b0), the rational slopes sigma^(i) = nu + b^(i)/m and the
local residues a^(i) = m_j * frac(sigma^(i)).

Exactly three points (the base triple) carry nu = 0; every other point
is "new" and carries nu = 1 with b0 != 0.  Wild points (all b^(i) = 0)
can only sit in the base triple.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import homcoh


def multiplicative_order(p, m):
    if m == 1:
        return 1
    if gcd(p, m) != 1:
        raise ValueError("p must be invertible mod m")
    s, acc = 1, p % m
    while acc != 1:
        acc = (acc * p) % m
        s += 1
    return s


@dataclass(frozen=True)
class SigPoint:
    role: str  # "B0" or "new"
    nu: int
    b0: int


@dataclass(frozen=True)
class Signature:
    p: int
    m: int
    points: tuple

    @property
    def s(self):
        return multiplicative_order(self.p, self.m)

    @property
    def n_points(self):
        return len(self.points)

    def orbit(self, j):
        """(b_j^(0), ..., b_j^(s-1)) with b^(i) = p^i b^(0) mod m."""
        b = self.points[j].b0 % self.m
        out = []
        for _ in range(self.s):
            out.append(b)
            b = (b * self.p) % self.m
        return tuple(out)

    def m_j(self, j):
        return self.m // gcd(self.m, self.points[j].b0 % self.m)

    def sigma(self, j, i):
        return Fraction(self.orbit(j)[i % self.s], self.m) + self.points[j].nu

    def a(self, j, i):
        frac = self.sigma(j, i) - self.points[j].nu
        val = self.m_j(j) * frac
        assert val.denominator == 1
        return int(val)

    def a_min(self, j):
        return min(self.a(j, i) for i in range(self.s))

    def b0_indices(self):
        return tuple(j for j, pt in enumerate(self.points) if pt.role == "B0")

    def new_indices(self):
        return tuple(j for j, pt in enumerate(self.points) if pt.role == "new")

    def to_json(self):
        return {
            "p": self.p,
            "m": self.m,
            "s": self.s,
            "points": [
                {"nu": pt.nu, "b0": pt.b0, "role": pt.role} for pt in self.points
            ],
        }

    @staticmethod
    def from_json(obj):
        sig = Signature(
            obj["p"],
            obj["m"],
            tuple(SigPoint(pt["role"], pt["nu"], pt["b0"]) for pt in obj["points"]),
        )
        if "s" in obj and obj["s"] != sig.s:
            raise ValueError("serialized s does not match ord_m(p)")
        return sig


@dataclass(frozen=True)
class ValidationReport:
    failures: tuple

    @property
    def passed(self):
        return not self.failures

    def __bool__(self):
        return self.passed


def validate_signature(sig):
    """All admissibility identities, with a detailed failure list."""
    fails = []
    if gcd(sig.p, sig.m) != 1:
        fails.append("p not invertible mod m")
        return ValidationReport(tuple(fails))
    s = sig.s
    for j, pt in enumerate(sig.points):
        if pt.nu not in (0, 1):
            fails.append(f"point {j}: nu outside {{0,1}}")
        if not 0 <= pt.b0 < sig.m:
            fails.append(f"point {j}: b0 outside [0, m)")
        if pt.role not in ("B0", "new"):
            fails.append(f"point {j}: unknown role {pt.role!r}")
    b0 = sig.b0_indices()
    if len(b0) != 3:
        fails.append(f"base triple has {len(b0)} points, expected 3")
    for j in b0:
        if sig.points[j].nu != 0:
            fails.append(f"point {j}: base-triple point with nu != 0")
    for j in sig.new_indices():
        if sig.points[j].nu != 1:
            fails.append(f"point {j}: new point with nu != 1")
        if sig.points[j].b0 % sig.m == 0:
            fails.append(f"point {j}: new point with b0 = 0 (wild outside the base triple)")
    for i in range(s):
        total = sum((sig.sigma(j, i) - 1) for j in range(sig.n_points))
        if total != -2:
            fails.append(f"level {i}: sum of (sigma - 1) is {total}, expected -2")
    for j in range(sig.n_points):
        s0 = sig.sigma(j, 0)
        for i in range(s):
            lhs = sig.sigma(j, i) - int(sig.sigma(j, i))
            rhs = sig.p**i * s0 - int(sig.p**i * s0)
            if lhs != rhs:
                fails.append(f"point {j}, level {i}: fractional orbit identity broken")
            if sig.sigma(j, i) == 1:
                fails.append(f"point {j}, level {i}: sigma = 1 is forbidden")
    return ValidationReport(tuple(fails))


def is_pure(sig):
    """Sum of b^(i) over all points equals m at every level."""
    return all(
        sum(sig.orbit(j)[i] for j in range(sig.n_points)) == sig.m
        for i in range(sig.s)
    )


@dataclass(frozen=True)
class SpecialReport:
    special: bool
    base_triple: tuple
    pure: bool
    nu_constant: bool

    def __bool__(self):
        return self.special


def is_special(sig):
    """Specialty check; the report also confirms the forced consequences.

    Special means sigma != 1 everywhere with nu = 0 exactly on a
    three-point base triple and nu = 1 elsewhere.  For such signatures
    purity and level-independence of the integer parts must follow; both
    are recomputed and reported rather than assumed.
    """
    report = validate_signature(sig)
    b0 = sig.b0_indices()
    special = report.passed and len(b0) == 3
    pure = is_pure(sig) if special else False
    nu_constant = all(
        int(sig.sigma(j, i)) == sig.points[j].nu
        for j in range(sig.n_points)
        for i in range(sig.s)
    )
    return SpecialReport(special and pure and nu_constant, b0, pure, nu_constant)


def classify_point(sig, j):
    if not 0 <= j < sig.n_points:
        raise IndexError(f"point index {j} out of range")
    orbit = sig.orbit(j)
    return {
        "wild": all(b == 0 for b in orbit),
        "tame": sig.m_j(j) > 1,
        "critical": True,
    }


def _canonical_key(orbit):
    # descending sort: wild slots (orbit all zero) come last, so the
    # pinned coordinates 0, 1, infinity put wild points at infinity
    return tuple(-b for b in orbit)


def canonicalize(sig):
    """Base-triple slots sorted by orbit (descending), then new points."""
    b0 = sorted((sig.points[j] for j in sig.b0_indices()),
                key=lambda pt: _canonical_key(_orbit_of(sig, pt)))
    new = sorted((sig.points[j] for j in sig.new_indices()),
                 key=lambda pt: _canonical_key(_orbit_of(sig, pt)))
    return Signature(sig.p, sig.m, tuple(b0 + new))


def _orbit_of(sig, pt):
    b, out = pt.b0 % sig.m, []
    for _ in range(sig.s):
        out.append(b)
        b = (b * sig.p) % sig.m
    return tuple(out)


def enumerate_signatures(p, m, n_points):
    """All special-admissible signatures, canonically ordered and deduplicated."""
    if gcd(p, m) != 1:
        raise ValueError("p must be invertible mod m")
    if n_points < 3:
        raise ValueError("need at least the base triple")
    out, seen = [], set()
    n_new = n_points - 3
    for base in itertools.product(range(m), repeat=3):
        for new in itertools.product(range(1, m), repeat=n_new):
            points = tuple(
                [SigPoint("B0", 0, b) for b in base]
                + [SigPoint("new", 1, b) for b in new]
            )
            sig = canonicalize(Signature(p, m, points))
            if sig.points in seen:
                continue
            seen.add(sig.points)
            if validate_signature(sig).passed:
                out.append(sig)
    out.sort(key=lambda sg: tuple(_canonical_key(sg.orbit(j)) for j in range(sg.n_points)))
    return out


def derived_invariants(sig):
    """Genus, isotypic degrees and cohomology, and tangent accounting.

    The genus of the cover Z comes from Riemann-Hurwitz over the local
    indices m_j; the isotypic degree at level i is minus the sum of the
    fractional parts of sigma^(i); the (h0, h1) pairs are delegated to
    the two-chart Cech complex.
    """
    m = sig.m
    ram = sum((m // sig.m_j(j)) * (sig.m_j(j) - 1) for j in range(sig.n_points))
    two_g = -2 * m + ram + 2
    if two_g % 2:
        raise ArithmeticError("Riemann-Hurwitz parity failure")
    degrees = []
    for i in range(sig.s):
        total = sum(sig.orbit(j)[i] for j in range(sig.n_points))
        if total % m:
            raise ArithmeticError(f"level {i}: residues do not sum to 0 mod m")
        degrees.append(-(total // m))
    cohomology = [homcoh.cech_line_bundle(sig.p, d) for d in degrees]
    return {
        "genus": two_g // 2,
        "isotypic_degrees": degrees,
        "isotypic_cohomology": cohomology,
        "tangent_dimension": sig.n_points - 3,
        "torsion_multiplicities": {j: 1 for j in sig.new_indices()},
    }
