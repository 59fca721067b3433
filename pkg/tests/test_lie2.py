import gmpy2
import pytest

from cartan_courant.battery import Battery
from cartan_courant.courant import CourantAlgebroid, Limits
from cartan_courant.exactpoly import PolyForm
from cartan_courant.lie2 import GradedElement, Lie2Algebra, _koszul, lada_markl, lie2_identities, lie2_route_checks
from cartan_courant.modelfile import load_model
from conftest import FIXTURES, bundled, courant
from test_cartan import poly, sec

SMALL = Limits(pairs=60, triples=40, quads=16, quints=6)


def lie2(name, **kw):
    return Lie2Algebra(courant(name), **kw)


def one_form(m, **coeffs):
    """``one_form(m, x1="x2")`` is x2 dx1."""
    return PolyForm(m.variables, 1, {(m.variables.index(k),): poly(m, v) for k, v in coeffs.items()})


def test_skew_bracket_examples(d8, flat):
    L = lie2("d8-hyperbolic")
    e = sec(d8, "x1*u2 + v3")
    assert L.skew_bracket(e, e).is_zero()
    assert L.skew_bracket(sec(d8, "u1"), sec(d8, "u2")) == sec(d8, "x1*v3")
    assert lie2("flat-abelian").skew_bracket(sec(flat, "u1"), sec(flat, "u3 + v2")).is_zero()


def test_t_form_examples(d8, flat):
    L = lie2("d8-hyperbolic")
    u1, u2, u3 = sec(d8, "u1"), sec(d8, "u2"), sec(d8, "u3")
    # each cyclic term pairs to x1: <x1 v3, u3>, <x1 v1, u1>, <x1 v2, u2>
    assert L.t_form(u1, u2, u3) == poly(d8, "1/2*x1")
    assert L.t_form(u1, u2, u1).is_zero()
    assert lie2("flat-abelian").t_form(sec(flat, "u1"), sec(flat, "u2"), sec(flat, "v3")).is_zero()


def test_script_jacobiator_routes(d8):
    L = lie2("d8-hyperbolic")
    for a, b, c in Battery(d8).tuples(3, 30, tag="routes"):
        assert L.script_jacobiator(a, b, c) == L.script_jacobiator_via_j(a, b, c)
        assert L.script_jacobiator(a, b, c) == L.script_jacobiator_explicit(a, b, c)
    e = sec(d8, "x2*u1 + u3")
    assert L.script_jacobiator(e, sec(d8, "u2"), e).is_zero()


def test_flat_l3_vanishes_on_constant_sections(flat):
    L = lie2("flat-abelian")
    basis = [flat.basis_section(i) for i in range(flat.d)]
    for a in basis:
        for b in basis:
            for c in basis:
                assert L.l3(*(GradedElement(0, e) for e in (a, b, c))).is_zero()


def test_flat_l3_is_minus_d_of_t(flat):
    # on the flat model J = 0, so l3 = -D T; T is not constant on
    # non-constant sections
    L = lie2("flat-abelian")
    args = (sec(flat, "u2"), sec(flat, "u4"), sec(flat, "x1*x2*v4"))
    assert L.t_form(*args) == poly(flat, "-1/4*x1")
    assert L.script_jacobiator(*args) == sec(flat, "1/4*v1")
    assert L.l3(*(GradedElement(0, e) for e in args)).value == one_form(flat, x1="1/4")


def test_l2_examples(d8):
    L = lie2("d8-hyperbolic")
    u1 = GradedElement(0, sec(d8, "u1"))
    assert L.l2(u1, L.zero(1)).is_zero()
    assert L.l2(u1, GradedElement(1, one_form(d8, x1="1"))).is_zero()
    # [[u1, x1 v1]] = 1/2 (v1 - 0)
    assert L.l2(u1, GradedElement(1, one_form(d8, x1="x1"))).value == one_form(d8, x1="1/2")
    assert L.l2(GradedElement(1, one_form(d8, x1="1")), GradedElement(1, one_form(d8, x2="1"))) is None


def test_l1_is_rho_star(d8):
    L = lie2("d8-hyperbolic")
    assert L.l1(GradedElement(1, one_form(d8, x3="x1"))).value == sec(d8, "x1*v3")
    with pytest.raises(ValueError):
        L.l1(GradedElement(0, sec(d8, "u1")))


def test_graded_element_degree_check(d8):
    with pytest.raises(ValueError):
        GradedElement(1, sec(d8, "u1"))
    with pytest.raises(ValueError):
        GradedElement(2, sec(d8, "u1"))


def test_koszul_sign():
    # antisymmetric convention: even elements anticommute, odd ones commute
    assert _koszul((1, 0), [0, 0]) == -1
    assert _koszul((1, 0), [1, 1]) == 1
    assert _koszul((2, 0, 1), [1, 0, 1]) == -1


@pytest.mark.parametrize("name", ["flat-abelian", "d8-hyperbolic", "sl2-borel", "sl3-borel", "sl4-grassmannian"])
def test_lie2_identities(name):
    L = lie2(name)
    rep = lie2_identities(L, Battery(L.model), SMALL)
    assert rep.passed, rep.to_text()


def test_doubled_l3_detected():
    spec = load_model(FIXTURES / "d8-double-l3.model")
    assert spec.corrupt == "double-l3"
    L = Lie2Algebra(CourantAlgebroid(spec.model), l3_scale=2)
    rep = lie2_identities(L, Battery(spec.model), SMALL)
    assert not rep["l3_jacobi_anomaly"].passed
    assert rep["l3_jacobi_anomaly"].witness


def test_negated_l3_fails():
    # the identities fix the sign of l3 as well as its scale
    L = lie2("d8-hyperbolic", l3_scale=-1)
    rep = lie2_identities(L, Battery(L.model), SMALL)
    assert not rep["l3_jacobi_anomaly"].passed


def test_lada_markl_vanishes_for_honest_lie_algebra(flat):
    L = lie2("flat-abelian")
    xs = [GradedElement(0, flat.basis_section(i)) for i in (0, 1, 5)]
    assert lada_markl(L, xs).is_zero()


@pytest.mark.parametrize("name", ["d8-hyperbolic", "flat-abelian", "sl2-borel", "sl3-borel"])
def test_route_checks(name):
    L = lie2(name)
    rep = lie2_route_checks(L, Battery(L.model), SMALL)
    for check in ("skew_bracket_forms", "skew_bracket_expanded", "t_antisymmetry", "t_expanded", "script_jacobiator_routes"):
        assert rep[check].passed, rep.to_text()
    assert rep["t_expanded_printed_sign"].advisory


def test_printed_sign_of_t_fails_on_nonabelian():
    L = lie2("sl2-borel")
    rep = lie2_route_checks(L, Battery(L.model), SMALL)
    assert not rep["t_expanded_printed_sign"].passed


def test_explicit_l3_inherits_closed_form_mismatch():
    L = lie2("sl3-borel")
    m = L.model
    args = (sec(m, "E12"), sec(m, "E13"), sec(m, "E21"))
    assert L.script_jacobiator(*args) != L.script_jacobiator_explicit(*args)
