"""First-order deformations: lifts, Kodaira-Spencer, specialty, rigidity."""

import pytest

from defdatum import cartier, deform, search, sigdata
from defdatum.algebra import FieldDescriptor
from defdatum.deform import (
    DualNumber,
    is_j_special,
    kodaira_spencer,
    lift_datum,
    rigidity_check,
)

F3 = FieldDescriptor.get(3, 1)
F5 = FieldDescriptor.get(5, 1)


def sig_of(p, m, base, new=()):
    points = tuple(
        [sigdata.SigPoint("B0", 0, b) for b in base]
        + [sigdata.SigPoint("new", 1, b) for b in new]
    )
    return sigdata.canonicalize(sigdata.Signature(p, m, points))


def p5_datum():
    data = search.search_field(sig_of(5, 2, (1, 0, 0), new=(1,)), F5)
    assert len(data) == 1
    return data[0]


def p3_two_level_datum():
    data = search.search_field(sig_of(3, 4, (3, 0, 0), new=(1,)), F3)
    assert len(data) == 1
    return data[0]


def test_dual_number_ring():
    a = DualNumber(F5.element(2), F5.element(3))
    b = DualNumber(F5.element(4), F5.element(1))
    assert a + b == DualNumber(F5.element(1), F5.element(4))
    assert a * b == DualNumber(F5.element(3), F5.element(2 * 1 + 3 * 4))
    eps = DualNumber(F5.element(0), F5.element(1))
    assert (eps * eps).is_zero()
    assert a * a.inverse() == DualNumber(F5.one())
    assert not eps.is_unit()
    with pytest.raises(ZeroDivisionError):
        eps.inverse()


def test_dual_number_power():
    a = DualNumber(F5.element(2), F5.element(1))
    acc = DualNumber(F5.one())
    for _ in range(7):
        acc = acc * a
    assert a**7 == acc
    assert a**0 == DualNumber(F5.one())
    assert a**-1 == a.inverse()


def test_zero_direction_lifts_to_zero_correction():
    datum = p5_datum()
    lifted = lift_datum(datum, (F5.element(0),))
    assert all(h.is_zero() for h in lifted.h)
    assert kodaira_spencer(lifted) == (F5.zero(),)


def test_kodaira_spencer_round_trip():
    datum = p5_datum()
    for c in (1, 2, 3, 4):
        delta = (F5.element(c),)
        lifted = lift_datum(datum, delta)
        assert lifted.delta == delta
        assert kodaira_spencer(lifted) == delta


def test_kodaira_spencer_skips_levels_killed_by_p():
    # the new orbit is (1, 3): level 1 has b = 3 = 0 mod 3
    datum = p3_two_level_datum()
    d = datum.descriptor
    delta = (d.one(),)
    lifted = lift_datum(datum, delta)
    assert kodaira_spencer(lifted) == delta


def test_lifted_eps_part_is_in_the_cartier_kernel():
    datum = p5_datum()
    delta = (F5.element(2),)
    lifted = lift_datum(datum, delta)
    cover = datum.cover
    for i in range(cover.s):
        total = deform._polar_part(datum, delta, i) + lifted.h[i]
        image = cartier.cartier_rational(total * cover.step_factor(i))
        assert image.is_zero()


def test_lift_rejects_wrong_delta_length():
    datum = p5_datum()
    with pytest.raises(ValueError):
        lift_datum(datum, ())


def test_lift_requires_purity():
    impure = sigdata.Signature(
        3,
        4,
        (
            sigdata.SigPoint("B0", 0, 3),
            sigdata.SigPoint("B0", 0, 3),
            sigdata.SigPoint("B0", 0, 2),
        ),
    )
    fake = search.DeformationDatum(impure, F3, (), (F3.one(), F3.one()), (F3.one(), F3.one()))
    with pytest.raises(ValueError):
        lift_datum(fake, ())


def test_specialty_along_the_zero_direction():
    datum = p5_datum()
    lifted = lift_datum(datum, (F5.element(0),))
    assert is_j_special(lifted, 0)


def test_specialty_fails_along_nonzero_directions():
    datum = p5_datum()
    lifted = lift_datum(datum, (F5.element(1),))
    assert not is_j_special(lifted, 0)


def test_weakened_specialty_is_blind_to_the_deformation():
    # the weakened check ignores the nilpotent coefficients and wrongly
    # accepts a moved datum; it must stay strictly weaker than the real one
    datum = p5_datum()
    lifted = lift_datum(datum, (F5.element(1),))
    assert is_j_special(lifted, 0, weakened=True)
    assert not is_j_special(lifted, 0)


def test_rigidity_p5():
    report = rigidity_check(p5_datum())
    assert report["rigid"]
    assert report["zero_roundtrip"]
    assert report["zero_direction_special"]
    assert len(report["directions"]) == 4
    for entry in report["directions"]:
        assert entry["roundtrip"]
        assert entry["fails_specialty_at"] == [0]


def test_rigidity_two_level():
    report = rigidity_check(p3_two_level_datum())
    assert report["rigid"]
    assert len(report["directions"]) == 2


def test_rigidity_golden_is_vacuous():
    data = search.search_field(sig_of(3, 2, (1, 1, 0)), F3)
    report = rigidity_check(data[0])
    assert report["rigid"]
    assert report["directions"] == []
