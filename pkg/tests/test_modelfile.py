import pytest

from cartan_courant.modelfile import (
    ModelFileError,
    ModelValidationError,
    bundled_model,
    bundled_models_dir,
    load_model,
    parse_model,
    validate_model,
)
from conftest import FIXTURES

MINIMAL = """\
name: tiny
[algebra]
basis: u1 v1
form: u1 v1 = 1
[subalgebra]
span: v1
[chart]
coordinates: x1
transversal: u1
"""


def test_bundled_models_load():
    names = sorted(p.stem for p in bundled_models_dir().glob("*.model"))
    assert names == ["d8-hyperbolic", "d8-skew-kappa", "flat-abelian", "sl2-borel", "sl3-borel", "sl4-grassmannian"]
    for name in names:
        spec = load_model(bundled_model(name))
        assert spec.name == name
        assert validate_model(spec).passed


def test_sl2_borel_is_coisotropic_and_graded():
    spec = load_model(bundled_model("sl2-borel"))
    assert spec.model.coisotropic
    assert spec.grading is not None
    assert spec.grading.degree == (-1, 0, 1)


def test_d8_is_lagrangian_with_four_coordinates():
    spec = load_model(bundled_model("d8-hyperbolic"))
    assert spec.model.n == 4
    assert len(spec.model.pperp) == spec.subalgebra.dim == 4


def test_minimal_model():
    spec = parse_model(MINIMAL)
    assert spec.name == "tiny"
    assert spec.corrupt is None
    assert validate_model(spec).passed


@pytest.mark.parametrize(
    "text,line",
    [
        (MINIMAL.replace("form: u1 v1 = 1", "form: u1 w1 = 1"), 4),
        (MINIMAL.replace("span: v1", "span: x1*v1^2"), 6),
        (MINIMAL + "[bogus]\n", 10),
        (MINIMAL.replace("transversal: u1", "transversal: u1 +"), 9),
        (MINIMAL + "[control]\ncorrupt: everything\n", 11),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ModelFileError) as err:
        parse_model(text, "m.model")
    assert err.value.line == line
    assert str(err.value).startswith(f"m.model:{line}")


def test_missing_section_is_an_error():
    with pytest.raises(ModelFileError):
        parse_model(MINIMAL.split("[chart]")[0])


def test_non_jacobi_fixture_names_triple():
    with pytest.raises(ModelValidationError) as err:
        load_model(FIXTURES / "sl2-broken-jacobi.model")
    assert "jacobi" in str(err.value)
    assert "(Xm, H, Xp)" in str(err.value)


def test_non_bianchi_fixture_rejected():
    with pytest.raises(ModelValidationError) as err:
        load_model(FIXTURES / "d8-bianchi-broken.model")
    assert "bianchi" in str(err.value)
    spec = load_model(FIXTURES / "d8-bianchi-broken.model", validate=False)
    assert spec.model.synthetic


def test_corruption_switch():
    assert load_model(FIXTURES / "d8-drop-nabla.model").corrupt == "drop-nabla-term"
    assert load_model(FIXTURES / "sl4-flipped-pontryagin.model").corrupt == "flip-jacobiator-sign"
