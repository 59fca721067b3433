import random

import gmpy2
import pytest

from cartan_courant.battery import Battery, random_p_section, random_poly, random_section
from cartan_courant.cartan import CartanModel, bianchi_check, vf_apply, vf_bracket
from cartan_courant.exactpoly import PolyForm, parse_poly
from conftest import bundled

GAUGE_MODELS = ["d8-hyperbolic", "sl2-borel", "sl3-borel", "sl4-grassmannian", "flat-abelian"]


def sec(m, text):
    """Section from 'poly*name + ...' text."""
    from cartan_courant.modelfile import _linear_in_basis

    p = parse_poly(text, m.variables + m.names)
    return m.section(_linear_in_basis(p, m.variables, m.names))


def poly(m, text):
    return parse_poly(text, m.variables)


def test_d8_curvature(d8):
    k = d8.curvature()
    assert k[(0, 1)] == sec(d8, "x3*v1")
    assert k[(1, 2)] == sec(d8, "-x1*v1")
    assert set(k) == {(0, 1), (1, 2)}
    assert d8.kappa_component(1, 0) == sec(d8, "-x3*v1")


def test_flat_and_one_dimensional_curvature(flat, sl2):
    assert flat.curvature() == {}
    assert sl2.curvature() == {}


def test_anchor_examples(d8):
    zero = poly(d8, "0")
    assert d8.anchor(sec(d8, "v3 + x1*v2")) == (zero,) * 4
    assert d8.anchor(sec(d8, "u1")) == (poly(d8, "1"), zero, zero, zero)
    assert d8.anchor(sec(d8, "x2*u3 + v1")) == (zero, zero, poly(d8, "x2"), zero)


@pytest.mark.parametrize("name", GAUGE_MODELS)
def test_gauge_is_normalized(name):
    m = bundled(name).model
    for i, A in enumerate(m.gauge):
        X = m.constant_section(m.transversal[i])
        assert m.is_p_valued(A - X)


@pytest.mark.parametrize("name", GAUGE_MODELS)
def test_anchor_of_frame(name):
    m = bundled(name).model
    rng = random.Random(11)
    X = [random_poly(rng, m.variables) for _ in range(m.n)]
    assert m.anchor(m.frame_section(X)) == tuple(X)
    assert m.anchor(random_p_section(m, rng)) == (m._zero,) * m.n


def test_rho_star_examples(d8, sl2):
    assert d8.rho_star(PolyForm(d8.variables, 1, {(0,): d8._one})) == sec(d8, "v1")
    assert d8.rho_star(PolyForm.zero(d8.variables, 1)).is_zero()
    assert sl2.rho_star(PolyForm(sl2.variables, 1, {(0,): sl2._one})) == sec(sl2, "1/4*Xp")


@pytest.mark.parametrize("name", GAUGE_MODELS)
def test_rho_star_defining_property(name):
    m = bundled(name).model
    rng = random.Random(5)
    for _ in range(5):
        coeffs = [random_poly(rng, m.variables) for _ in range(m.n)]
        s = m.rho_star(coeffs)
        assert m.is_pperp_valued(s)
        e = random_section(m, rng)
        assert m.pairing(s, e) == sum((c * x for c, x in zip(coeffs, m.anchor(e))), m._zero)
        assert m.rho_star_inverse(s) == PolyForm(m.variables, 1, {(i,): c for i, c in enumerate(coeffs)})


def test_d_operator(d8):
    assert d8.d_operator(poly(d8, "x1")) == sec(d8, "v1")
    assert d8.d_operator(poly(d8, "7/3")).is_zero()
    rng = random.Random(2)
    f, g = random_poly(rng, d8.variables), random_poly(rng, d8.variables)
    assert d8.d_operator(f * g) == d8.d_operator(g) * f + d8.d_operator(f) * g


@pytest.mark.parametrize("name", GAUGE_MODELS)
def test_nabla_metric_and_leibniz(name):
    m = bundled(name).model
    rng = random.Random(9)
    for _ in range(6):
        X = tuple(random_poly(rng, m.variables) for _ in range(m.n))
        a, b = random_section(m, rng), random_section(m, rng)
        f = random_poly(rng, m.variables)
        assert vf_apply(X, m.pairing(a, b)) == m.pairing(m.nabla(X, a), b) + m.pairing(a, m.nabla(X, b))
        assert m.nabla(X, a * f) == m.nabla(X, a) * f + a * vf_apply(X, f)
        assert m.nabla(tuple(c * f for c in X), a) == m.nabla(X, a) * f


def test_nabla_flat_constant(flat):
    X = tuple(flat.coordinate(i) for i in range(4))
    assert flat.nabla(X, sec(flat, "u1 + 3*v2")).is_zero()


def test_kappa_on_sections(d8):
    assert d8.kappa(sec(d8, "u1"), sec(d8, "u2")) == sec(d8, "x3*v1")
    assert d8.kappa(sec(d8, "v1 + x2*v3"), sec(d8, "u2")).is_zero()
    e = sec(d8, "x1*u1 + u2 + x4*u3")
    assert d8.kappa(e, e).is_zero()


@pytest.mark.parametrize("name", ["d8-hyperbolic", "sl3-borel", "sl4-grassmannian"])
def test_kappa_horizontal(name):
    m = bundled(name).model
    rng = random.Random(4)
    for _ in range(8):
        assert m.kappa(random_p_section(m, rng), random_section(m, rng)).is_zero()


def test_atiyah_examples(flat, d8):
    assert flat.atiyah_bracket(sec(flat, "u1"), sec(flat, "u2")).is_zero()
    assert d8.atiyah_bracket(sec(d8, "u1"), sec(d8, "u2")) == sec(d8, "-x3*v1")


@pytest.mark.parametrize("name", GAUGE_MODELS)
def test_atiyah_lie_algebroid(name):
    m = bundled(name).model
    bat = Battery(m, random_count=3)
    rng = random.Random(1)
    br = m.atiyah_bracket
    for _ in range(8):
        a, b, c = (bat.sections[rng.randrange(len(bat.sections))] for _ in range(3))
        f = bat.functions[0]
        assert br(a, b) == -br(b, a)
        assert m.anchor(br(a, b)) == vf_bracket(m.anchor(a), m.anchor(b))
        assert br(a, b * f) == br(a, b) * f + b * vf_apply(m.anchor(a), f)
        assert (br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))).is_zero()


@pytest.mark.parametrize("name", GAUGE_MODELS + ["d8-skew-kappa"])
def test_bianchi_holds_on_shipped_models(name):
    assert bianchi_check(bundled(name).model).passed


def test_synthetic_bianchi_violation_located(d8):
    kappa = {(0, 1): sec(d8, "x3*v1")}
    m = CartanModel(d8.algebra, d8.subalgebra, d8.variables, d8.transversal, curvature=kappa)
    res = bianchi_check(m)
    assert not res.passed
    assert res.witness == {"component": "x1,x2,x3", "residual": "v1"}


def test_constant_synthetic_curvature_is_bianchi(d8):
    kappa = {(0, 1): sec(d8, "v3"), (2, 3): sec(d8, "2*v1")}
    m = CartanModel(d8.algebra, d8.subalgebra, d8.variables, d8.transversal, curvature=kappa)
    assert bianchi_check(m).passed


@pytest.mark.parametrize("name", GAUGE_MODELS)
def test_model_validate(name):
    assert bundled(name).model.validate().passed
