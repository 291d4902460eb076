"""The Cartier operator, Kummer covers, eigenforms and local expansions."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from defdatum import search, sigdata
from defdatum.algebra import (
    INF,
    FieldDescriptor,
    Poly,
    RationalFunction,
    series_at,
)
from defdatum.cartier import (
    FormCombination,
    KummerCover,
    KummerForm,
    cartier_combination,
    cartier_kummer,
    cartier_rational,
    expand_combination,
    is_cartier_fixed,
    omega_combination,
    omega_form,
    ord_at_critical,
    ord_single_form,
    phi_basis,
)

F3 = FieldDescriptor.get(3, 1)
F5 = FieldDescriptor.get(5, 1)
F9 = FieldDescriptor.get(3, 2)


def rat(descriptor, num_ints, den_ints):
    return RationalFunction(
        Poly.from_ints(descriptor, num_ints), Poly.from_ints(descriptor, den_ints)
    )


def rationals(descriptor, max_deg=3):
    table = list(descriptor.elements())
    coeff = st.integers(0, descriptor.order - 1).map(lambda k: table[k])
    polys = st.lists(coeff, min_size=1, max_size=max_deg + 1).map(
        lambda cs: Poly(descriptor, cs)
    )
    return st.tuples(polys, polys.filter(lambda q: not q.is_zero())).map(
        lambda ab: RationalFunction(ab[0], ab[1])
    )


def test_cartier_rational_monomials():
    x = Poly.x(F3)
    one = Poly.constant(F3, 1)
    # C(x^n dx) = x^{(n+1)/p - 1} when p | n + 1, else 0
    assert cartier_rational(RationalFunction(x**2, one)) == RationalFunction(one, one)
    assert cartier_rational(RationalFunction(one, one)).is_zero()
    assert cartier_rational(RationalFunction(x, one)).is_zero()
    assert cartier_rational(RationalFunction(x**5, one)) == RationalFunction(x, one)


def test_cartier_rational_hand_value():
    # C(dx / (x^2 (x-1)^2)) = dx / (x (x-1)) over F_3
    f = rat(F3, [1], [0, 0, 1]) * rat(F3, [1], [1, 1, 1])  # 1/(x^2 (x-1)^2)
    expected = rat(F3, [1], [0, 2, 1])  # 1/(x^2 - x)
    assert cartier_rational(f) == expected


def test_cartier_fixes_dlog_and_kills_dx():
    f = rat(F3, [1], [0, 1])  # dx/x
    assert cartier_rational(f) == f
    assert is_cartier_fixed(f)


@settings(max_examples=60)
@given(rationals(F9), rationals(F9))
def test_cartier_semilinearity(f, g):
    # C(f^p g dx) = f C(g dx)
    p = 3
    lhs = cartier_rational(f**p * g)
    rhs = f * cartier_rational(g)
    assert lhs == rhs


@settings(max_examples=60)
@given(rationals(F5))
def test_cartier_kills_exact_forms(f):
    assert cartier_rational(f.derivative()).is_zero()


@settings(max_examples=60)
@given(rationals(F5))
def test_cartier_fixes_logarithmic_forms(f):
    if f.is_zero():
        return
    dlog = f.derivative() / f
    assert cartier_rational(dlog) == dlog


@settings(max_examples=40)
@given(rationals(F5), rationals(F5))
def test_cartier_is_additive(f, g):
    assert cartier_rational(f + g) == cartier_rational(f) + cartier_rational(g)


def two_level_cover(tau_new=2):
    # z^4 = x^3 (x - tau)  over F_3, wild point at infinity
    return KummerCover(
        F3,
        4,
        (F3.element(0), F3.element(1), F3.element(tau_new)),
        ((3, 1), (0, 0), (1, 3)),
        (0, 0),
    )


def test_cover_validation():
    with pytest.raises(ValueError):  # duplicate branch points
        KummerCover(F3, 2, (F3.element(0), F3.element(0)), ((1,), (1,)), (0,))
    with pytest.raises(ValueError):  # (1, 2) is not a x3-orbit mod 4
        KummerCover(F3, 4, (F3.element(0), F3.element(1)), ((1, 2), (3, 1)), (0, 0))
    with pytest.raises(ValueError):  # level sums 1 mod 2
        KummerCover(F3, 2, (F3.element(0),), ((1,),), None)
    with pytest.raises(ValueError):  # orbit length != s
        KummerCover(F3, 4, (F3.element(0), F3.element(1)), ((1,), (3,)), (0,))


def test_cover_local_data():
    cover = two_level_cover()
    assert cover.s == 2
    assert cover.is_pure()
    assert cover.m_at(0) == 4
    assert cover.m_at(2) == 4
    assert cover.m_at(INF) == 1
    assert cover.orbit_at(INF) == (0, 0)
    rad = cover.radicand(0)
    assert rad.degree == 4
    assert rad.multiplicity_at(F3.element(0)) == 3


def test_step_factor_recursion():
    # z_{l} = z_{l-1}^p * step, so b^(l) = p b^(l-1) + m e
    cover = two_level_cover()
    for level in (0, 1):
        es = cover.step_exponents(level)
        for orbit, e in zip(cover.orbits, es):
            assert orbit[level] == 3 * orbit[level - 1] + 4 * e


def test_content_hash_is_stable_and_injective_on_the_data():
    a = two_level_cover().content_hash()
    assert a == two_level_cover().content_hash()
    assert len(a) == 16
    assert a != two_level_cover().embed(F9).content_hash()  # r enters the hash


def golden_datum():
    sig = sigdata.canonicalize(
        sigdata.Signature(
            3,
            2,
            (
                sigdata.SigPoint("B0", 0, 1),
                sigdata.SigPoint("B0", 0, 1),
                sigdata.SigPoint("B0", 0, 0),
            ),
        )
    )
    data = search.search_field(sig, F3)
    assert len(data) == 1
    return data[0]


def test_golden_omega_is_cartier_fixed():
    datum = golden_datum()
    omega = omega_form(datum, 0)
    assert omega.h == rat(F3, [1], [0, 2, 1])  # dx / (x (x - 1)) times z
    assert is_cartier_fixed(omega)
    image = cartier_kummer(datum.cover, omega)
    assert image.level == 0 and image.h == omega.h


def test_combination_linearity_under_cartier():
    datum = golden_datum()
    combo = omega_combination(datum)
    doubled = combo + combo
    assert cartier_combination(doubled) == doubled  # C(2 w) = 2 C(w) for 2 = (-1)^p


def test_phi_basis_golden():
    datum = golden_datum()
    phis = phi_basis(datum)
    assert len(phis) == 1
    assert is_cartier_fixed(phis[0])


def test_phi_basis_two_levels():
    sig = sigdata.canonicalize(
        sigdata.Signature(
            3,
            4,
            (
                sigdata.SigPoint("B0", 0, 3),
                sigdata.SigPoint("B0", 0, 0),
                sigdata.SigPoint("B0", 0, 0),
                sigdata.SigPoint("new", 1, 1),
            ),
        )
    )
    data = search.search_field(sig, F3)
    assert len(data) == 1
    phis = phi_basis(data[0])
    assert len(phis) == 2
    assert all(is_cartier_fixed(ph) for ph in phis)


def trivial_cover(descriptor, taus):
    # m = 1: z = 1 identically, forms are plain rational differentials
    return KummerCover(descriptor, 1, taus, tuple((0,) for _ in taus), None)


def test_expansion_matches_series_at():
    tau = F5.element(2)
    cover = trivial_cover(F5, (tau,))
    h = rat(F5, [1, 3], [1, 0, 1])
    ser = expand_combination(cover, (h,), 0, 6)
    oracle = series_at(h, tau, 6)
    for n in range(0, 7):
        assert ser.base.coeff(n) == oracle.coeff(n)
    assert ser.eps.is_zero()


def test_expansion_dual_channel_is_the_directional_derivative():
    tau = F5.element(2)
    delta = F5.element(3)
    cover = trivial_cover(F5, (tau,))
    h = rat(F5, [1, 3], [1, 0, 1])
    ser = expand_combination(cover, (h,), 0, 5, delta={0: delta})
    base_oracle = series_at(h, tau, 6)
    deriv_oracle = series_at(h.derivative(), tau, 6)
    for n in range(0, 6):
        assert ser.base.coeff(n) == base_oracle.coeff(n)
        assert ser.eps.coeff(n) == delta * deriv_oracle.coeff(n)


def test_expansion_theta_channel_is_additive():
    tau = F5.element(2)
    cover = trivial_cover(F5, (tau,))
    h = rat(F5, [1, 3], [1, 0, 1])
    theta = rat(F5, [2], [1, 1])
    ser = expand_combination(cover, (h,), 0, 5, eps_hs=(theta,))
    oracle = series_at(theta, tau, 6)
    for n in range(0, 6):
        assert ser.eps.coeff(n) == oracle.coeff(n)


@pytest.mark.parametrize("center", [0, 1, 2, INF])
@pytest.mark.parametrize("level", [0, 1])
def test_honest_order_matches_closed_formula(center, level):
    cover = two_level_cover()
    h = rat(F3, [1], [0, 2, 1])  # 1/(x(x-1))
    form = KummerForm(cover, level, h)
    assert ord_at_critical(form, center) == ord_single_form(form, center)


def test_order_requires_a_nonzero_form():
    cover = two_level_cover()
    zero = rat(F3, [0], [1])
    with pytest.raises(ValueError):
        ord_at_critical(KummerForm(cover, 0, zero), 0)


def test_expansion_extends_the_field_when_needed():
    # radicand leading constant 2 at tau = 2 is not a 4th power in F_3
    cover = two_level_cover()
    h = rat(F3, [1], [1])
    ser = expand_combination(cover, (h, rat(F3, [0], [1])), 2, 4)
    assert ser.descriptor.p == 3
    assert ser.descriptor.r > 1
