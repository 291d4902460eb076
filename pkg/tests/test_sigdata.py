"""Signatures: admissibility, purity, specialty, enumeration, invariants."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from defdatum import sigdata
from defdatum.sigdata import (
    SigPoint,
    Signature,
    canonicalize,
    classify_point,
    derived_invariants,
    enumerate_signatures,
    is_pure,
    is_special,
    multiplicative_order,
    validate_signature,
)


def sig_of(p, m, base, new=()):
    points = tuple(
        [SigPoint("B0", 0, b) for b in base] + [SigPoint("new", 1, b) for b in new]
    )
    return Signature(p, m, points)


GOLDEN = sig_of(3, 2, (1, 1, 0))


def test_multiplicative_order():
    assert multiplicative_order(3, 2) == 1
    assert multiplicative_order(3, 4) == 2
    assert multiplicative_order(5, 4) == 1
    assert multiplicative_order(2, 7) == 3
    with pytest.raises(ValueError):
        multiplicative_order(3, 6)


def test_golden_signature_is_admissible_and_special():
    assert validate_signature(GOLDEN).passed
    assert is_pure(GOLDEN)
    rep = is_special(GOLDEN)
    assert rep.special and rep.pure and rep.nu_constant
    assert GOLDEN.s == 1
    assert GOLDEN.orbit(0) == (1,)
    assert GOLDEN.orbit(2) == (0,)


def test_orbit_and_local_data():
    sig = sig_of(3, 4, (3, 0, 0), new=(1,))
    assert sig.s == 2
    assert sig.orbit(0) == (3, 1)
    assert sig.orbit(3) == (1, 3)
    assert sig.m_j(0) == 4
    assert sig.m_j(1) == 1
    assert sig.sigma(3, 0) == Fraction(5, 4)
    assert sig.a(3, 0) == 1
    assert sig.a(3, 1) == 3
    assert sig.a_min(3) == 1


def test_validation_failures_are_named():
    bad = sig_of(3, 2, (1, 1, 1))  # sums to 3, not 2
    rep = validate_signature(bad)
    assert not rep.passed
    assert any("sigma" in f or "sum" in f for f in rep.failures)
    wild_new = Signature(3, 2, GOLDEN.points + (SigPoint("new", 1, 0),))
    assert not validate_signature(wild_new).passed
    four_base = Signature(3, 2, GOLDEN.points + (SigPoint("B0", 0, 1),))
    assert not validate_signature(four_base).passed


def test_sigma_one_is_rejected():
    # b0 = 0 with nu = 1 would give sigma = 1
    pts = (SigPoint("B0", 0, 1), SigPoint("B0", 0, 1), SigPoint("B0", 1, 0))
    assert not validate_signature(Signature(3, 2, pts)).passed


def test_purity_is_levelwise():
    pure = sig_of(3, 4, (3, 0, 0), new=(1,))
    assert is_pure(pure)
    # sums to 2m at level 0
    impure = sig_of(3, 4, (3, 3, 2))
    assert not is_pure(impure)


def test_classify_point():
    sig = sig_of(3, 4, (3, 0, 0), new=(1,))
    assert classify_point(sig, 1)["wild"]
    assert not classify_point(sig, 0)["wild"]
    assert classify_point(sig, 0)["tame"]
    with pytest.raises(IndexError):
        classify_point(sig, 7)


def test_canonicalize_sorts_wild_points_last():
    sig = sig_of(3, 2, (0, 1, 1))
    canon = canonicalize(sig)
    assert [pt.b0 for pt in canon.points] == [1, 1, 0]
    assert canonicalize(canon) == canon


def test_enumerate_golden_case():
    sigs = enumerate_signatures(3, 2, 3)
    assert len(sigs) == 1
    assert sigs[0] == canonicalize(GOLDEN)


def test_enumerate_four_points_includes_two_wild_slots():
    sigs = enumerate_signatures(3, 2, 4)
    patterns = [tuple(pt.b0 for pt in sg.points) for sg in sigs]
    assert (1, 0, 0, 1) in patterns


def test_enumerate_rejects_bad_input():
    with pytest.raises(ValueError):
        enumerate_signatures(3, 6, 3)
    with pytest.raises(ValueError):
        enumerate_signatures(3, 2, 2)


@settings(max_examples=30, deadline=None)
@given(
    st.sampled_from([(3, 2), (3, 4), (5, 2), (5, 4), (7, 2), (7, 3)]),
    st.integers(3, 5),
)
def test_enumerated_signatures_satisfy_the_identities(pm, n_points):
    p, m = pm
    for sig in enumerate_signatures(p, m, n_points):
        s = sig.s
        for i in range(s):
            assert sum(sig.sigma(j, i) - 1 for j in range(sig.n_points)) == -2
        for j in range(sig.n_points):
            orbit = sig.orbit(j)
            for i in range(s):
                assert orbit[(i + 1) % s] == (p * orbit[i]) % m
        rep = is_special(sig)
        assert rep.special
        assert rep.pure and rep.nu_constant  # specialty forces both


def test_derived_invariants_golden():
    inv = derived_invariants(canonicalize(GOLDEN))
    assert inv["genus"] == 0
    assert inv["isotypic_degrees"] == [-1]
    assert inv["isotypic_cohomology"] == [(0, 0)]
    assert inv["tangent_dimension"] == 0


def test_derived_invariants_tangent_accounting():
    for sig in enumerate_signatures(5, 4, 5):
        inv = derived_invariants(sig)
        assert inv["tangent_dimension"] == sig.n_points - 3 == len(sig.new_indices())
        assert all(mult == 1 for mult in inv["torsion_multiplicities"].values())


def test_signature_json_round_trip():
    sig = canonicalize(sig_of(3, 4, (3, 0, 0), new=(1,)))
    assert Signature.from_json(sig.to_json()) == sig
    obj = sig.to_json()
    obj["s"] = 5
    with pytest.raises(ValueError):
        Signature.from_json(obj)
