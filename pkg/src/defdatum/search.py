"""Search for multiplicative deformation data realizing a signature.

The base triple is pinned at 0, 1 and infinity in canonical slot order
(wild points sort last, hence land at infinity); the remaining branch
points run over the chosen field.  A tuple of branch points carries a
datum iff every level of the Cartier condition C(omega_{i+1}) = omega_i
degenerates to a constant lambda_i; the eigenform constants eps_i are
then pinned (up to the F_{p^s}-rational ambiguity absorbed into the
choice of least root) by eps_i = frobenius_inverse(eps_{i+1}) lambda_i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd

from . import cartier, sigdata
from .algebra import (
    INF,
    FieldDescriptor,
    FieldElement,
    Poly,
    RationalFunction,
    nth_root_in_field,
)


def _lcm(a, b):
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class DeformationDatum:
    """A verified point of the search: signature, branch points, constants."""

    signature: sigdata.Signature
    descriptor: FieldDescriptor
    tau: tuple  # one FieldElement per new point, in slot order
    epsilon: tuple  # one unit per level
    lam: tuple  # the Cartier constants, one per level

    @property
    def cover(self):
        return build_cover(self.signature, self.descriptor, self.tau)

    @property
    def q_poly(self):
        """prod over the finite base-triple points (x - tau)."""
        d = self.descriptor
        x = Poly.x(d)
        return x * (x - Poly.constant(d, 1))

    def field_with_roots(self):
        """Smallest extension containing the datum and the m-th roots of 1."""
        s = self.signature.s
        return FieldDescriptor.get(self.descriptor.p, _lcm(self.descriptor.r, s))

    def embedded(self, target):
        if target == self.descriptor:
            return self
        return DeformationDatum(
            self.signature,
            target,
            tuple(t.embed(target) for t in self.tau),
            tuple(e.embed(target) for e in self.epsilon),
            tuple(l.embed(target) for l in self.lam),
        )

    def to_json(self):
        return {
            "schema": "defdatum/1",
            "signature": self.signature.to_json(),
            "field": {
                "p": self.descriptor.p,
                "r": self.descriptor.r,
                "modulus": list(self.descriptor.modulus),
            },
            "tau": [t.to_json() for t in self.tau],
            "epsilon": [e.to_json() for e in self.epsilon],
            "lambda": [l.to_json() for l in self.lam],
        }

    @staticmethod
    def from_json(obj):
        if obj.get("schema") != "defdatum/1":
            raise ValueError("unknown schema")
        return DeformationDatum(
            sigdata.Signature.from_json(obj["signature"]),
            FieldDescriptor.get(obj["field"]["p"], obj["field"]["r"]),
            tuple(FieldElement.from_json(t) for t in obj["tau"]),
            tuple(FieldElement.from_json(e) for e in obj["epsilon"]),
            tuple(FieldElement.from_json(l) for l in obj["lambda"]),
        )


def build_cover(sig, descriptor, tau_new):
    """The Kummer cover of a canonical signature with given new points.

    Base-triple slots map to 0, 1, infinity in order; ``tau_new`` lists
    the coordinates of the new points in slot order.
    """
    sig = sigdata.canonicalize(sig)
    b0 = sig.b0_indices()
    new = sig.new_indices()
    if len(b0) != 3:
        raise ValueError("signature lacks a three-point base triple")
    if len(tau_new) != len(new):
        raise ValueError("one coordinate per new point")
    d = descriptor
    taus = [d.zero(), d.one()]
    orbits = [sig.orbit(b0[0]), sig.orbit(b0[1])]
    infinity = sig.orbit(b0[2])
    for t, j in zip(tau_new, new):
        t = d.element(t)
        taus.append(t)
        orbits.append(sig.orbit(j))
    return cartier.KummerCover(d, sig.m, tuple(taus), tuple(orbits), infinity)


def check_candidate(sig, descriptor, tau_new):
    """The Cartier constants of a branch-point tuple, or None.

    Level i of the eigenvalue condition asks that the Cartier image of
    (1/Q) z_{i+1} dx is a constant multiple of (1/Q) z_i dx; the
    multiple lambda_i is returned for every level when all degenerate.
    """
    cover = build_cover(sig, descriptor, tau_new)
    d = descriptor
    x = Poly.x(d)
    q = x * (x - Poly.constant(d, 1))
    inv_q = RationalFunction(Poly.constant(d, 1), q)
    s = cover.s
    lams = []
    for i in range(s):
        image = cartier.cartier_rational(inv_q * cover.step_factor((i + 1) % s))
        const = image * RationalFunction.from_poly(q)
        if const.is_zero() or const.denominator.degree > 0 or const.numerator.degree > 0:
            return None
        lams.append(const.numerator.coeffs[0])
    return lams


class RootSearchExhausted(ArithmeticError):
    pass


def normalize_epsilons(descriptor, lams, max_extension=24):
    """Solve the cyclic relations eps_i = frobenius_inverse(eps_{i+1}) lambda_i.

    Eliminating gives eps_0^{p^s - 1} = prod_i lambda_i^{p^{s-i}}; the
    least root (serialization order) in the minimal field extension is
    taken and the remaining eps back-substituted.  Returns (epsilons,
    descriptor of the field they live in).
    """
    p = descriptor.p
    s = len(lams)
    if any(l.is_zero() for l in lams):
        raise ValueError("Cartier constants must be units")
    big = descriptor.one()
    for i, l in enumerate(lams):
        big = big * l ** (p ** (s - i))
    n = p**s - 1
    for k in range(1, max_extension + 1):
        target = FieldDescriptor.get(p, descriptor.r * k)
        emb = big.embed(target)
        root = nth_root_in_field(emb, n)
        if root is not None and not root.is_zero():
            eps = [None] * s
            eps[0] = root
            lams_t = [l.embed(target) for l in lams]
            for i in range(s - 1, 0, -1):
                nxt = eps[(i + 1) % s]
                eps[i] = nxt.frobenius_inverse() * lams_t[i]
            return tuple(eps), target
    raise RootSearchExhausted(
        f"no eigenform constant in extensions up to degree {max_extension}"
    )


def search_field(sig, descriptor):
    """All deformation data for the signature with branch points in the field.

    Deterministic: candidates are scanned in serialization order and new
    points with identical residues are taken in increasing order (they
    are interchangeable, so one representative per unordered choice).
    """
    sig = sigdata.canonicalize(sig)
    report = sigdata.validate_signature(sig)
    if not report.passed:
        raise ValueError(f"invalid signature: {report.failures}")
    new = sig.new_indices()
    candidates = [
        e for e in descriptor.elements() if not e.is_zero() and e != descriptor.one()
    ]
    found = []
    slot_b = [sig.points[j].b0 for j in new]
    for tau in itertools.permutations(candidates, len(new)):
        ok = True
        for a, b in itertools.combinations(range(len(new)), 2):
            if slot_b[a] == slot_b[b] and tau[a].key() >= tau[b].key():
                ok = False
                break
        if not ok:
            continue
        lams = check_candidate(sig, descriptor, tau)
        if lams is None:
            continue
        eps, eps_field = normalize_epsilons(descriptor, lams)
        datum = DeformationDatum(
            sig,
            eps_field,
            tuple(t.embed(eps_field) for t in tau),
            eps,
            tuple(l.embed(eps_field) for l in lams),
        )
        found.append(datum)
    found.sort(key=lambda dt: tuple(t.key() for t in dt.tau))
    return found


def verify_datum(datum, check_phi=True):
    """Full verification battery; returns a dict of named booleans.

    Everything is recomputed from scratch: signature admissibility and
    purity, the levelwise Cartier eigenform conditions, vanishing orders
    of the eigenforms at every critical point against nu_j m_j + a_j - 1
    (with -1 at wild points), the isotypic cohomology, and optionally
    the F_p-rational fixed basis.
    """
    sig = datum.signature
    checks = {}
    checks["signature_valid"] = sigdata.validate_signature(sig).passed
    checks["pure"] = sigdata.is_pure(sig)
    checks["special"] = bool(sigdata.is_special(sig))
    cover = datum.cover
    s = cover.s
    checks["epsilon_units"] = all(not e.is_zero() for e in datum.epsilon)
    checks["epsilon_relations"] = all(
        datum.epsilon[i]
        == datum.epsilon[(i + 1) % s].frobenius_inverse() * datum.lam[i]
        for i in range(s)
    )
    omega = cartier.omega_combination(datum)
    checks["cartier_fixed"] = cartier.is_cartier_fixed(omega)

    b0 = sig.b0_indices()
    new = sig.new_indices()
    slot_of = {}  # signature point index -> cover branch key
    slot_of[b0[0]] = 0
    slot_of[b0[1]] = 1
    slot_of[b0[2]] = INF
    for k, j in enumerate(new):
        slot_of[j] = 2 + k
    ord_ok = True
    for i in range(s):
        form = cartier.omega_form(datum, i)
        for j in range(sig.n_points):
            orbit = sig.orbit(j)
            if all(b == 0 for b in orbit):
                expected = -1
            else:
                expected = sig.points[j].nu * sig.m_j(j) + sig.a(j, i) - 1
            got = cartier.ord_at_critical(form, slot_of[j])
            if got != expected:
                ord_ok = False
    checks["vanishing_orders"] = ord_ok

    inv = sigdata.derived_invariants(sig)
    checks["isotypic_cohomology_trivial"] = all(
        pair == (0, 0) for pair in inv["isotypic_cohomology"]
    )
    if check_phi:
        try:
            phis = cartier.phi_basis(datum)
            checks["phi_fixed"] = all(cartier.is_cartier_fixed(ph) for ph in phis)
            checks["phi_count"] = len(phis) == s
        except ArithmeticError:
            checks["phi_fixed"] = False
            checks["phi_count"] = False
    checks["passed"] = all(checks.values())
    return checks


def _canonical_tau_key(slot_b, taus):
    """Slot-ordered keys with interchangeable slots (equal b) sorted."""
    keys = [t.key() for t in taus]
    out = list(keys)
    for b in set(slot_b):
        idx = [i for i, bb in enumerate(slot_b) if bb == b]
        vals = sorted(keys[i] for i in idx)
        for i, v in zip(idx, vals):
            out[i] = v
    return tuple(out)


def frobenius_orbits(data):
    """Partition of data (by index) under tau -> tau^p on all coordinates."""
    parent = list(range(len(data)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    index = {}
    for i, dt in enumerate(data):
        slot_b = [dt.signature.points[j].b0 for j in dt.signature.new_indices()]
        index[_canonical_tau_key(slot_b, dt.tau)] = i
    for i, dt in enumerate(data):
        slot_b = [dt.signature.points[j].b0 for j in dt.signature.new_indices()]
        image = _canonical_tau_key(slot_b, [t.frobenius() for t in dt.tau])
        if image in index:
            a, b = find(i), find(index[image])
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups = {}
    for i in range(len(data)):
        groups.setdefault(find(i), []).append(i)
    return [sorted(v) for v in sorted(groups.values())]
