import pytest
from hypothesis import given, settings, strategies as st

from hflab.errors import InvalidCocycle, InvalidDatum, TheoremViolation
from hflab.hopf import (HopfData, algebra_of_dual, coradical_filtration, cocycle_twist,
                        dual_hopf, filtration_dims, group_algebra, integral_space,
                        inverse_cocycle_for_twist, is_hopf_subalgebra, is_normal_subalgebra,
                        is_semisimple, semisimplicity_evidence, trivial_cocycle, trivial_hopf,
                        verify_cleaving_pair, verify_cocycle, verify_hopf)
from hflab.linalg import ExactMatrix, ExactSubspace, trace_form_radical
from hflab.qls import QLSDatum, build_fiber, char_identity, sweedler_datum

from conftest import group_only

HOPF_ENTRIES = {"associativity", "unitality", "coassociativity", "counitality",
                "comultiplication_multiplicative", "counit_multiplicative", "antipode_axiom",
                "antipode_antihomomorphism", "antipode_bijective"}


def identity_fiber(d):
    return build_fiber(d, char_identity(d)).hopf


def radical_power_filtration(c: HopfData) -> list:
    """Independent oracle: corad_n = (rad(C*)^(n+1))^perp, via products of radical spans."""
    A = algebra_of_dual(c)
    rad = trace_form_radical(A)
    dims, power = [], rad
    while True:
        dims.append(c.dim - power.dim)
        if power.dim == 0:
            return dims
        prods = [A.mul(u, v) for u in power.basis() for v in rad.basis()]
        power = ExactSubspace.span([p for p in prods if p], c.dim, c.conductor)


def ideal_generated_by_x(h: HopfData, d: QLSDatum) -> int:
    """Dimension of the two-sided ideal spanned by monomials containing some x."""
    return sum(1 for lab in h.basis_labels if "x" in lab)


def test_group_algebra_is_hopf():
    rep = verify_hopf(group_algebra([2, 3]))
    assert rep.passed
    assert {e.name for e in rep.entries} == HOPF_ENTRIES


def test_group_algebra_input_validation():
    with pytest.raises(InvalidDatum):
        group_algebra([])
    with pytest.raises(InvalidDatum):
        group_algebra([0])


def test_trivial_hopf():
    k = trivial_hopf(3)
    assert k.dim == 1 and verify_hopf(k).passed


def test_broken_antipode_detected():
    h = group_algebra([3])
    bad = HopfData(h.dim, h.basis_labels, h.conductor, h.mult, h.unit, h.comult, h.counit,
                   ExactMatrix.identity(3))
    rep = verify_hopf(bad)
    assert not rep.entry("antipode_axiom").passed
    assert rep.entry("associativity").passed


@pytest.mark.parametrize("d", [sweedler_datum(), QLSDatum(1, 3, ((1,),)),
                               QLSDatum(2, 2, ((1, 1), (1, 1))), group_only(2), group_only(6)],
                         ids=["sweedler", "taft3", "klein", "group2", "group6"])
def test_identity_fibers_are_hopf(d):
    h = identity_fiber(d)
    rep = verify_hopf(h)
    assert rep.passed, rep.failures()
    assert verify_hopf(dual_hopf(h)).passed


def test_dual_is_involution():
    h = identity_fiber(QLSDatum(1, 3, ((1,),)))
    assert dual_hopf(dual_hopf(h)).same_structure(h)


def test_json_round_trip():
    h = identity_fiber(QLSDatum(1, 3, ((1,),)))
    assert HopfData.from_json(h.to_json()).same_structure(h)


@pytest.mark.parametrize("d,rad", [(sweedler_datum(), 2), (QLSDatum(1, 3, ((1,),)), 6),
                                   (QLSDatum(2, 2, ((1, 1), (1, 1))), 12), (group_only(6), 0)])
def test_radical_dimension(d, rad):
    h = identity_fiber(d)
    ev = semisimplicity_evidence(h)
    assert ev["radical_dim"] == rad == ideal_generated_by_x(h, d)
    assert ev["semisimple_by_integral"] == (rad == 0)
    assert is_semisimple(h) == (rad == 0)


def test_sweedler_integral():
    h = identity_fiber(sweedler_datum())
    lam = integral_space(h, "left").basis()[0]
    assert not h.eps(lam)
    for i in range(h.dim):
        e = h.basis_vector(i)
        expected = {k: v * h.eps(e) for k, v in lam.items()} if h.eps(e) else {}
        assert h.mul(e, lam) == expected


def test_integral_dimension_violation():
    h = group_algebra([2])
    zero_mult = HopfData(2, h.basis_labels, 1, {}, h.unit, h.comult, h.counit, h.antipode)
    with pytest.raises(TheoremViolation):
        integral_space(zero_mult, "left")


@pytest.mark.parametrize("d,dims", [(sweedler_datum(), [2, 4]), (QLSDatum(1, 3, ((1,),)), [3, 6, 9]),
                                    (QLSDatum(2, 2, ((1, 1), (1, 1))), [4, 12, 16]),
                                    (group_only(2), [2])])
def test_coradical_filtration(d, dims):
    c = dual_hopf(identity_fiber(d))
    chain = coradical_filtration(c)
    assert filtration_dims(chain) == dims
    assert radical_power_filtration(c) == dims


def test_filtration_is_coalgebra_filtration():
    c = dual_hopf(identity_fiber(QLSDatum(1, 3, ((1,),))))
    chain = coradical_filtration(c)
    D = c.dim
    for n, Cn in enumerate(chain):
        if n:
            assert Cn.contains_subspace(chain[n - 1])
        target = ExactSubspace.span(
            [{i * D + j: u[i] * v[j] for i in u for j in v}
             for k in range(n + 1) for u in chain[k].basis() for v in chain[n - k].basis()],
            D * D, c.conductor)
        for v in Cn.basis():
            flat = {i * D + j: coef for (i, j), coef in c.delta(v).items()}
            assert target.contains(flat)


def test_trivial_cocycle_twist_is_identity():
    h = identity_fiber(QLSDatum(2, 2, ((1, 1), (1, 1))))
    sigma = trivial_cocycle(h)
    assert verify_cocycle(h, sigma).passed
    assert cocycle_twist(h, sigma).same_structure(h)


def test_invalid_cocycle_rejected():
    h = identity_fiber(sweedler_datum())
    sigma = trivial_cocycle(h)
    vals = dict(sigma.values)
    vals[(1, 1)] = vals[(1, 1)] * 2
    from hflab.hopf import CocycleData
    bad = CocycleData(h, vals, dict(sigma.inverse_values))
    assert not verify_cocycle(h, bad).passed
    with pytest.raises(InvalidCocycle):
        cocycle_twist(h, bad)


def test_hopf_subalgebra_and_normality():
    h = group_algebra([4])
    one = h.one_scalar()
    sub = ExactSubspace.span([{0: one}, {2: one}], 4)
    assert is_hopf_subalgebra(h, sub)
    assert is_normal_subalgebra(h, sub)
    assert not is_hopf_subalgebra(h, ExactSubspace.span([{0: one}, {1: one}], 4))


def test_group_like_not_normal_in_sweedler():
    h = identity_fiber(sweedler_datum())
    one = h.one_scalar()
    g = h.basis_labels.index("g1")
    sub = ExactSubspace.span([{0: one}, {g: one}], 4)
    assert is_hopf_subalgebra(h, sub)
    assert not is_normal_subalgebra(h, sub)


def test_cleaving_pair_trivial_extension():
    h = group_algebra([3])
    k = trivial_hopf(1)
    one = h.one_scalar()
    xi = ExactMatrix(3, 3, [{i: one} for i in range(3)], 1)
    chi = ExactMatrix(3, 1, [{0: one}], 1)
    rep = verify_cleaving_pair(xi, chi, h, h, k)
    assert rep.passed


@settings(max_examples=20)
@given(st.lists(st.integers(1, 4), min_size=1, max_size=2))
def test_semisimplicity_is_self_dual_for_groups(orders):
    h = group_algebra(orders)
    assert is_semisimple(h) and is_semisimple(dual_hopf(h))
    assert dual_hopf(dual_hopf(h)).same_structure(h)


@pytest.mark.parametrize("d", [sweedler_datum(), QLSDatum(1, 3, ((1,),))], ids=["sweedler", "taft3"])
def test_semisimplicity_dual_agrees(d):
    h = identity_fiber(d)
    assert is_semisimple(h) == is_semisimple(dual_hopf(h)) is False


def test_twist_then_untwist(klein):
    from hflab.qls import bicharacter_table, pulled_back_cocycle
    h = identity_fiber(klein)
    sigma = pulled_back_cocycle(h, klein, bicharacter_table(klein, [["1", "-1"], ["1", "1"]]))
    hs = cocycle_twist(h, sigma)
    assert verify_hopf(hs).passed
    assert not hs.same_structure(h)
    back = cocycle_twist(hs, inverse_cocycle_for_twist(sigma, hs))
    assert back.same_structure(h)
