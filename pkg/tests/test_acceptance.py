"""End-to-end acceptance battery.

Each test covers one numbered acceptance criterion, prints a single
pass/fail line (with the elapsed time) and enforces the documented time
bound.  All arithmetic is exact; there are no tolerances anywhere.
"""

import itertools
import json
import random
import time
from math import gcd

import pytest
from click.testing import CliRunner

from defdatum import cartier, deform, homcoh, search, sigdata
from defdatum.algebra import (
    INF,
    FieldDescriptor,
    Poly,
    RationalFunction,
)
from defdatum.cli import main as cli_main


def _report(capsys, number, name, elapsed, failures, bound=None):
    ok = not failures and (bound is None or elapsed < bound)
    line = f"criterion {number:2d} ({name}): {'PASS' if ok else 'FAIL'}  [{elapsed:.2f}s]"
    with capsys.disabled():
        print(line)
    assert not failures, failures[:10]
    if bound is not None:
        assert elapsed < bound, f"{elapsed:.2f}s exceeds the {bound}s bound"


def _rat(descriptor, num_ints, den_ints):
    return RationalFunction(
        Poly.from_ints(descriptor, num_ints), Poly.from_ints(descriptor, den_ints)
    )


# ---------------------------------------------------------------------------
# shared scans (criteria 7, 9 and 10 all quantify over "all scans performed")

SEARCH_RANGES = [
    # (p, m, n_points, r)
    (2, 3, 3, 1), (2, 3, 3, 2), (2, 3, 3, 3),
    (2, 3, 4, 1), (2, 3, 4, 2), (2, 3, 4, 3),
    (3, 2, 3, 1), (3, 2, 4, 1), (3, 2, 4, 2), (3, 2, 4, 3),
    (3, 4, 3, 1), (3, 4, 4, 1), (3, 4, 4, 2),
    (5, 2, 3, 1), (5, 2, 4, 1), (5, 2, 4, 2), (5, 2, 4, 3),
    (5, 4, 3, 1), (5, 4, 4, 1),
]

_scan_cache = {}


def scan(p, m, n_points, r):
    key = (p, m, n_points, r)
    if key not in _scan_cache:
        field = FieldDescriptor.get(p, r)
        out = []
        for sig in sigdata.enumerate_signatures(p, m, n_points):
            out.append((sig, field, search.search_field(sig, field)))
        _scan_cache[key] = out
    return _scan_cache[key]


def _slot_map(sig):
    b0 = sig.b0_indices()
    out = {b0[0]: 0, b0[1]: 1, b0[2]: INF}
    for k, j in enumerate(sig.new_indices()):
        out[j] = 2 + k
    return out


def test_criterion_01_golden_datum(capsys):
    t0 = time.perf_counter()
    failures = []
    runner = CliRunner()
    res = runner.invoke(
        cli_main, ["search", "--p", "3", "--m", "2", "--points", "3", "--r", "1"]
    )
    if res.exit_code != 0:
        failures.append(f"cli exit code {res.exit_code}")
    else:
        doc = json.loads(res.output)
        data = [dt for block in doc["results"] for dt in block["data"]]
        if len(data) != 1:
            failures.append(f"{len(data)} data returned, expected 1")
        elif not data[0]["verification"]["passed"]:
            failures.append("verification not fully green")

    F3 = FieldDescriptor.get(3, 1)
    sig = sigdata.enumerate_signatures(3, 2, 3)[0]
    found = search.search_field(sig, F3)
    if len(found) != 1:
        failures.append("library search did not return exactly one datum")
    else:
        datum = found[0]
        if datum.epsilon != (F3.one(),) or datum.lam != (F3.one(),):
            failures.append("eps or lambda differs from 1")
        # z^2 = x (x - 1)
        if datum.cover.radicand(0) != Poly.x(F3) * (Poly.x(F3) - Poly.constant(F3, 1)):
            failures.append("Kummer equation is not z^2 = x(x-1)")
        # omega = z dx / (x (x - 1))
        omega = cartier.omega_form(datum, 0)
        if omega.h != _rat(F3, [1], [0, 2, 1]):
            failures.append("omega coefficient is not 1/(x(x-1))")
        checks = search.verify_datum(datum)
        if not all(checks.values()):
            failures.append(f"verify_datum: {checks}")
    # supporting hand identity: C(dx/(x^2 (x-1)^2)) = dx/(x(x-1))
    f = _rat(F3, [1], [0, 0, 1]) * _rat(F3, [1], [1, 1, 1])
    if cartier.cartier_rational(f) != _rat(F3, [1], [0, 2, 1]):
        failures.append("hand Cartier identity fails")
    _report(capsys, 1, "golden datum", time.perf_counter() - t0, failures, bound=1.0)


def _signature_range():
    out = []
    for p in (3, 5, 7):
        for m in range(2, 9):
            if gcd(p, m) != 1:
                continue
            for n_points in (3, 4, 5):
                out.extend(sigdata.enumerate_signatures(p, m, n_points))
    return out


_sig_range_cache = []


def signature_range():
    if not _sig_range_cache:
        _sig_range_cache.extend(_signature_range())
    return _sig_range_cache


def test_criterion_02_signature_identities(capsys):
    t0 = time.perf_counter()
    failures = []
    sigs = signature_range()
    if len(sigs) < 50:
        failures.append(f"only {len(sigs)} signatures in range")
    for sig in sigs:
        s, p, m = sig.s, sig.p, sig.m
        for i in range(s):
            if sum(sig.sigma(j, i) - 1 for j in range(sig.n_points)) != -2:
                failures.append(f"{sig}: level {i} sum != -2")
        for j in range(sig.n_points):
            orbit = sig.orbit(j)
            for i in range(s):
                if orbit[(i + 1) % s] != (p * orbit[i]) % m:
                    failures.append(f"{sig}: point {j} orbit identity broken")
        rep = sigdata.is_special(sig)
        if not (rep.special and rep.pure and rep.nu_constant):
            failures.append(f"{sig}: specialty does not force purity/constant nu")
    _report(
        capsys, 2, "signature identities", time.perf_counter() - t0, failures, bound=10.0
    )


def test_criterion_03_purity_iff_cohomology_vanishes(capsys):
    t0 = time.perf_counter()
    failures = []
    rng = random.Random(20260825)
    nonpure = 0
    trials = 0
    while trials < 50:
        p = rng.choice([3, 5, 7])
        m = rng.choice([2, 3, 4])
        if gcd(p, m) != 1:
            continue
        n_points = rng.randint(3, 6)
        b = [rng.randrange(m) for _ in range(n_points)]
        b[0] = (b[0] - sum(b)) % m
        if sum(b) == 0:
            continue
        sig = sigdata.Signature(
            p,
            m,
            tuple(
                [sigdata.SigPoint("B0", 0, bb) for bb in b[:3]]
                + [sigdata.SigPoint("new", 1, bb) for bb in b[3:]]
            ),
        )
        trials += 1
        vanishes = []
        for i in range(sig.s):
            total = sum(sig.orbit(j)[i] for j in range(n_points))
            if total % m:
                failures.append(f"{sig}: level {i} residues not 0 mod m")
                continue
            vanishes.append(homcoh.cech_line_bundle(p, -(total // m)) == (0, 0))
        if sigdata.is_pure(sig) != all(vanishes):
            failures.append(f"{sig}: purity and Cech oracle disagree")
        if not sigdata.is_pure(sig):
            nonpure += 1
    if nonpure < 10:
        failures.append(f"only {nonpure} non-pure samples; the generator is too tame")
    _report(
        capsys, 3, "purity iff (h0,h1)=(0,0)", time.perf_counter() - t0, failures,
        bound=10.0,
    )


def _random_module(rng):
    p = rng.choice([2, 3])
    s = rng.randint(1, 2)
    m = rng.choice([mm for mm in (1, 2, 3, 4) if gcd(mm, p) == 1])
    V = list(itertools.product(range(p), repeat=s))
    identity = tuple(tuple(1 if a == b else 0 for b in range(s)) for a in range(s))
    if s == 2 and m % 2 == 0 and rng.random() < 0.4:
        # H swaps the two grading coordinates; trivial scalars keep order 2
        T = ((0, 1), (1, 0))
        dims = {}
        for phi in V:
            d = rng.randint(0, 2)
            dims[phi] = dims[(phi[1], phi[0])] = (
                dims.get((phi[1], phi[0]), d)
            )
        return homcoh.GradedHModule(p, s, m, T, dims, {})
    units = [c for c in range(1, p) if pow(c, m, p) == 1]
    dims = {phi: rng.randint(0, 2) for phi in V}
    scalars = {
        (phi, i): rng.choice(units) for phi in V for i in range(dims[phi])
    }
    return homcoh.GradedHModule(p, s, m, identity, dims, scalars)


def test_criterion_04_group_scheme_cohomology(capsys):
    t0 = time.perf_counter()
    failures = []
    rng = random.Random(41)
    done = 0
    while done < 20:
        M = _random_module(rng)
        if M.total_dim() == 0:
            continue
        done += 1
        dims = homcoh.group_cohomology(M, 2)
        if dims[0] != M.invariant_dim_at_zero():
            failures.append(f"module {done}: H0 = {dims[0]} != invariants")
        if dims[1] != 0 or dims[2] != 0:
            failures.append(f"module {done}: H1/H2 = {dims[1:]}, expected zero")
        if not homcoh.verify_resolution_homotopy(M, 2):
            failures.append(f"module {done}: homotopy identity fails")
    _report(
        capsys, 4, "group cohomology vanishing", time.perf_counter() - t0, failures,
        bound=30.0,
    )


def test_criterion_05_picard_invariants(capsys):
    t0 = time.perf_counter()
    failures = []
    rng = random.Random(5)
    for trial in range(24):
        p = rng.choice([2, 3])
        sizes = (
            rng.randint(0, 2), rng.randint(1, 3), rng.randint(1, 3), rng.randint(0, 2)
        )
        live = trial % 3
        mats = []
        import numpy as np

        for i in range(3):
            rows, cols = sizes[i + 1], sizes[i]
            M = np.zeros((rows, cols), dtype=np.int64)
            if i == live:
                for a in range(rows):
                    for b in range(cols):
                        M[a, b] = rng.randrange(p)
            mats.append(M)
        cx = homcoh.CochainComplex(p, sizes, tuple(mats), start_degree=-1)
        inv = homcoh.pic_invariants(cx)
        dims = homcoh.cohomology_dims(cx)
        # elementary abelian: isomorphic iff the invariant factors match
        if inv.pi0 != (p,) * dims[2]:
            failures.append(f"trial {trial}: pi0 {inv.pi0} != H1 of dim {dims[2]}")
        if inv.aut != (p,) * dims[1]:
            failures.append(f"trial {trial}: aut {inv.aut} != H0 of dim {dims[1]}")
    _report(
        capsys, 5, "Picard invariants", time.perf_counter() - t0, failures, bound=30.0
    )


def _random_rational(rng, descriptor, max_deg=3):
    table = list(descriptor.elements())

    def poly(min_size):
        while True:
            cs = [rng.choice(table) for _ in range(rng.randint(min_size, max_deg + 1))]
            f = Poly(descriptor, cs)
            if min_size == 0 or not f.is_zero():
                return f

    return RationalFunction(poly(0), poly(1))


def test_criterion_06_cartier_laws(capsys):
    t0 = time.perf_counter()
    failures = []
    rng = random.Random(6)
    for p in (3, 5):
        d = FieldDescriptor.get(p, 1)
        for case in range(100):
            f = _random_rational(rng, d)
            g = _random_rational(rng, d)
            if cartier.cartier_rational(f**p * g) != f * cartier.cartier_rational(g):
                failures.append(f"p={p} case {case}: semilinearity")
            if not cartier.cartier_rational(f.derivative()).is_zero():
                failures.append(f"p={p} case {case}: exact form not annihilated")
            if not f.is_zero():
                dlog = f.derivative() / f
                if cartier.cartier_rational(dlog) != dlog:
                    failures.append(f"p={p} case {case}: dlog not fixed")
    _report(capsys, 6, "Cartier laws", time.perf_counter() - t0, failures, bound=5.0)


def test_criterion_07_order_conditions(capsys):
    t0 = time.perf_counter()
    failures = []
    for key in SEARCH_RANGES:
        for sig, field, data in scan(*key):
            slot_of = _slot_map(sig)
            for datum in data:
                phis = cartier.phi_basis(datum)
                for j in range(sig.n_points):
                    orbit = sig.orbit(j)
                    orders = [
                        cartier.ord_at_critical(ph, slot_of[j]) for ph in phis
                    ]
                    if all(b == 0 for b in orbit):
                        # wild: the space has a simple pole and nothing worse
                        if min(orders) != -1:
                            failures.append(f"{key} point {j}: wild orders {orders}")
                    else:
                        want = sig.points[j].nu * sig.m_j(j) + sig.a_min(j) - 1
                        if any(o != want for o in orders):
                            failures.append(
                                f"{key} point {j}: orders {orders}, expected {want}"
                            )
    _report(capsys, 7, "order conditions", time.perf_counter() - t0, failures)


def test_criterion_08_tangent_accounting(capsys):
    t0 = time.perf_counter()
    failures = []
    for sig in signature_range():
        inv = sigdata.derived_invariants(sig)
        new = sig.new_indices()
        if inv["tangent_dimension"] != sig.n_points - 3:
            failures.append(f"{sig}: tangent dim {inv['tangent_dimension']}")
        if len(new) != sig.n_points - 3:
            failures.append(f"{sig}: |B_new| != |B| - 3")
        if sorted(inv["torsion_multiplicities"]) != sorted(new):
            failures.append(f"{sig}: torsion support is not B_new")
        if any(mult != 1 for mult in inv["torsion_multiplicities"].values()):
            failures.append(f"{sig}: torsion multiplicity != 1")
    _report(capsys, 8, "tangent accounting", time.perf_counter() - t0, failures)


def test_criterion_09_rigidity(capsys):
    t0 = time.perf_counter()
    failures = []
    per_datum = []
    for key in SEARCH_RANGES:
        if key[2] != 4:
            continue  # |B_new| = 1 scans
        tau_keys = {}
        for sig, field, data in scan(*key):
            slot_b = [sig.points[j].b0 for j in sig.new_indices()]
            found = {
                search._canonical_tau_key(slot_b, [t.embed(field) for t in dt.tau])
                for dt in data
            }
            # finiteness is immediate; Frobenius stability is not
            for dt in data:
                image = search._canonical_tau_key(
                    slot_b, [t.embed(field).frobenius() for t in dt.tau]
                )
                if image not in found:
                    failures.append(f"{key}: tau set not Frobenius stable")
            for dt in data:
                t1 = time.perf_counter()
                report = deform.rigidity_check(dt)
                per_datum.append(time.perf_counter() - t1)
                if not report["zero_roundtrip"] or not report["zero_direction_special"]:
                    failures.append(f"{key}: zero-direction round trip broken")
                for entry in report["directions"]:
                    if not entry["roundtrip"]:
                        failures.append(f"{key}: Kodaira-Spencer round trip broken")
                    if not entry["fails_specialty_at"]:
                        failures.append(
                            f"{key}: direction {entry['delta']} stays special"
                        )
                if not report["rigid"]:
                    failures.append(f"{key}: datum not rigid")
    if not per_datum:
        failures.append("no data with one new point were found at all")
    if per_datum and max(per_datum) >= 60.0:
        failures.append(f"slowest datum took {max(per_datum):.1f}s")
    _report(capsys, 9, "rigidity", time.perf_counter() - t0, failures)


def test_criterion_10_uniqueness(capsys):
    t0 = time.perf_counter()
    failures = []
    seen = {}
    for key in SEARCH_RANGES:
        for sig, field, data in scan(*key):
            slot_b = [sig.points[j].b0 for j in sig.new_indices()]
            for dt in data:
                tau_key = search._canonical_tau_key(slot_b, dt.tau)
                ident = (sig.points, dt.descriptor.p, dt.descriptor.r, tau_key)
                value = (
                    tuple(e.key() for e in dt.epsilon),
                    tuple(l.key() for l in dt.lam),
                )
                if ident in seen and seen[ident] != value:
                    failures.append(f"{ident}: two distinct normalized data")
                seen[ident] = value
    if not seen:
        failures.append("no data collected from the scans")
    _report(capsys, 10, "uniqueness", time.perf_counter() - t0, failures)
