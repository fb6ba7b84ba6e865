import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thermoecon.core import StatePoint
from thermoecon.eos import (
    CurieEos,
    IdealAnalogEos,
    IdealGasEos,
    LinearElasticityEos,
    MODEL_REGISTRY,
    finite_difference_partials,
    model_from_params,
)
from thermoecon.errors import (
    DomainBoundsError,
    NegativeDemandError,
    ParamsFormatError,
    SingularInversionError,
)


# -- worked example values --------------------------------------------------

def test_linear_surface_evaluation(linear_model):
    assert linear_model.qd_of(8.0, 60.0) == pytest.approx(130.0, abs=1e-12)
    assert linear_model.qd_of(10.0, 50.0) == pytest.approx(100.0, abs=1e-12)


def test_linear_inversions_recover_the_point(linear_model):
    assert linear_model.pr_of(130.0, 60.0) == pytest.approx(8.0, rel=1e-12)
    assert linear_model.phi_of(130.0, 8.0) == pytest.approx(60.0, rel=1e-12)


def test_linear_choke_price(linear_model):
    assert linear_model.choke_price(50.0) == pytest.approx(30.0, abs=1e-12)
    # demand vanishes exactly there
    assert linear_model.qd_of(30.0, 50.0) == 0.0


def test_linear_baseline_elasticities(linear_model):
    el = linear_model.elasticities()
    assert el.e_pr == pytest.approx(-0.5)
    assert el.e_phi == pytest.approx(1.0)


def test_linear_partials_are_constant(linear_model):
    p = linear_model.partials(8.0, 60.0)
    assert p.dqd_dpr == -5.0
    assert p.dqd_dphi == 2.0


# -- domain handling --------------------------------------------------------

def test_tiny_negative_roundoff_clamps_to_zero(linear_model):
    qd = linear_model.qd_of(30.0 + 1e-13, 50.0)
    assert qd == 0.0


def test_genuinely_negative_demand_raises(linear_model):
    with pytest.raises(NegativeDemandError) as exc:
        linear_model.qd_of(40.0, 50.0)
    assert exc.value.code == "ERR_NEGATIVE_DEMAND"


@pytest.mark.parametrize("pr, phi", [(0.0, 50.0), (-1.0, 50.0), (10.0, 0.0), (10.0, -3.0)])
def test_qd_of_requires_positive_inputs(linear_model, pr, phi):
    with pytest.raises(DomainBoundsError):
        linear_model.qd_of(pr, phi)


def test_pr_of_rejects_negative_quantity(linear_model):
    with pytest.raises(DomainBoundsError):
        linear_model.pr_of(-1.0, 50.0)


def test_pr_of_rejects_non_positive_implied_price(linear_model):
    # far beyond any admissible quantity at this wealth
    with pytest.raises(DomainBoundsError):
        linear_model.pr_of(10_000.0, 50.0)


def test_phi_of_singular_when_wealth_has_no_effect():
    flat = LinearElasticityEos(q0=100.0, pr0=10.0, phi0=50.0, beta_pr=0.0, kappa_phi=0.05)
    with pytest.raises(SingularInversionError) as exc:
        flat.phi_of(100.0, 10.0)
    assert exc.value.code == "ERR_SINGULAR"


def test_phi_of_rejects_non_positive_implied_wealth(linear_model):
    with pytest.raises(DomainBoundsError):
        linear_model.phi_of(1.0, 1.0)


def test_elasticities_undefined_at_zero_demand(linear_model):
    with pytest.raises(DomainBoundsError):
        linear_model.point_elasticities(30.0, 50.0)


# -- construction guards ----------------------------------------------------

@pytest.mark.parametrize(
    "kwargs, fragment",
    [
        (dict(q0=0.0), "q0"),
        (dict(q0=-5.0), "q0"),
        (dict(pr0=0.0), "pr0"),
        (dict(phi0=float("nan")), "phi0"),
        (dict(beta_pr=-0.01), "beta_pr"),
        (dict(kappa_phi=0.0), "kappa_phi"),
        (dict(kappa_phi=float("inf")), "kappa_phi"),
    ],
)
def test_linear_construction_rejects_bad_parameters(kwargs, fragment):
    base = dict(q0=100.0, pr0=10.0, phi0=50.0, beta_pr=0.02, kappa_phi=0.05)
    base.update(kwargs)
    with pytest.raises(ParamsFormatError) as exc:
        LinearElasticityEos(**base)
    assert fragment in str(exc.value)


@pytest.mark.parametrize("n", [0, -2, 2.5])
def test_analog_population_must_be_positive_integer(n):
    with pytest.raises(ParamsFormatError):
        IdealAnalogEos(n=n)


def test_gas_and_curie_construction_guards():
    with pytest.raises(ParamsFormatError):
        IdealGasEos(n_amount=-1.0)
    with pytest.raises(ParamsFormatError):
        CurieEos(curie_c=0.0)


# -- parameter documents ----------------------------------------------------

def test_params_round_trip_for_every_model(linear_model):
    models = [
        linear_model,
        IdealAnalogEos(n=7),
        IdealGasEos(n_amount=2.0),
        CurieEos(curie_c=12.0),
    ]
    for model in models:
        again = model_from_params(model.name, model.to_params())
        assert again == model


def test_from_params_rejects_missing_and_extra_keys():
    with pytest.raises(ParamsFormatError):
        LinearElasticityEos.from_params({"q0": 100.0})
    with pytest.raises(ParamsFormatError):
        LinearElasticityEos.from_params(
            dict(q0=100.0, pr0=10.0, phi0=50.0, beta_pr=0.02, kappa_phi=0.05, bogus=1.0)
        )
    with pytest.raises(ParamsFormatError):
        CurieEos.from_params({"curie_c": 1.0, "extra": 2.0})


def test_unknown_model_kind():
    with pytest.raises(ParamsFormatError) as exc:
        model_from_params("nope", {})
    assert "nope" in str(exc.value)


def test_analog_accepts_whole_float_population():
    assert IdealAnalogEos.from_params({"n": 10.0}).n == 10
    with pytest.raises(ParamsFormatError):
        IdealAnalogEos.from_params({"n": 10.5})


def test_gas_constant_defaults():
    gas = IdealGasEos.from_params({"n_amount": 1.0})
    assert gas.gas_constant == pytest.approx(8.314462618)


# -- hyperbolic surfaces ----------------------------------------------------

def test_analog_surface_and_inversions():
    model = IdealAnalogEos(n=10)
    assert model.qd_of(5.0, 50.0) == pytest.approx(100.0)
    assert model.pr_of(100.0, 50.0) == pytest.approx(5.0)
    assert model.phi_of(100.0, 5.0) == pytest.approx(50.0)


def test_analog_unit_elasticities():
    # pr*qd = n*phi makes both log-slopes exactly +/-1 everywhere
    el = IdealAnalogEos(n=3).point_elasticities(2.0, 40.0)
    assert el.e_pr == pytest.approx(-1.0, rel=1e-12)
    assert el.e_phi == pytest.approx(1.0, rel=1e-12)


def test_curie_demand_rises_with_price():
    model = CurieEos(curie_c=50.0)
    p = model.partials(2.0, 10.0)
    assert p.dqd_dpr > 0
    assert p.dqd_dphi < 0
    el = model.point_elasticities(2.0, 10.0)
    assert el.e_pr == pytest.approx(1.0, rel=1e-12)
    assert el.e_phi == pytest.approx(-1.0, rel=1e-12)


@pytest.mark.parametrize(
    "model",
    [IdealAnalogEos(n=5), IdealGasEos(n_amount=1.5), CurieEos(curie_c=20.0)],
    ids=["analog", "gas", "curie"],
)
def test_hyperbolic_models_have_no_choke_price(model):
    with pytest.raises(DomainBoundsError):
        model.choke_price(50.0)


def test_exact_heat_form_split(linear_model):
    assert not linear_model.exact_heat_form()
    assert IdealAnalogEos(n=2).exact_heat_form()
    assert IdealGasEos(n_amount=1.0).exact_heat_form()
    assert CurieEos(curie_c=3.0).exact_heat_form()


def test_registry_names():
    assert set(MODEL_REGISTRY) == {"linear", "ideal-analog", "ideal-gas", "curie"}
    for name, cls in MODEL_REGISTRY.items():
        assert cls.name == name


# -- residuals and the dual derivative routes -------------------------------

def test_residual_and_on_surface(linear_model):
    on = StatePoint(qd=130.0, pr=8.0, phi=60.0)
    off = StatePoint(qd=131.0, pr=8.0, phi=60.0)
    assert linear_model.residual(on) == pytest.approx(0.0, abs=1e-12)
    assert linear_model.on_surface(on)
    assert linear_model.residual(off) == pytest.approx(1.0)
    assert not linear_model.on_surface(off)


@pytest.mark.parametrize(
    "model, pr, phi",
    [
        (LinearElasticityEos(q0=100.0, pr0=10.0, phi0=50.0, beta_pr=0.02, kappa_phi=0.05), 8.0, 60.0),
        (IdealAnalogEos(n=10), 5.0, 50.0),
        (IdealGasEos(n_amount=2.0), 3.0, 300.0),
        (CurieEos(curie_c=50.0), 2.0, 10.0),
    ],
    ids=["linear", "analog", "gas", "curie"],
)
def test_analytic_partials_match_finite_differences(model, pr, phi):
    exact = model.partials(pr, phi)
    fd = finite_difference_partials(model, pr, phi)
    assert fd.dqd_dpr == pytest.approx(exact.dqd_dpr, rel=1e-6)
    assert fd.dqd_dphi == pytest.approx(exact.dqd_dphi, rel=1e-6)


def test_price_primitive_differentiates_back_to_price(linear_model):
    h = 1e-6
    for model, qd, phi in [
        (linear_model, 100.0, 50.0),
        (IdealAnalogEos(n=10), 120.0, 50.0),
        (IdealGasEos(n_amount=2.0), 40.0, 300.0),
        (CurieEos(curie_c=50.0), 8.0, 10.0),
    ]:
        slope = (model.pr_primitive(qd + h, phi) - model.pr_primitive(qd - h, phi)) / (2 * h)
        assert slope == pytest.approx(model.pr_of(qd, phi), rel=1e-6)


# -- property: round trips over random linear surfaces ----------------------

@settings(max_examples=60, deadline=None)
@given(
    q0=st.floats(10.0, 200.0),
    pr0=st.floats(2.0, 50.0),
    phi0=st.floats(5.0, 100.0),
    beta_scale=st.floats(0.05, 1.0),
    kappa_scale=st.floats(0.2, 2.0),
    u=st.floats(-0.05, 0.05),
    v=st.floats(-0.05, 0.05),
)
def test_linear_round_trip_property(q0, pr0, phi0, beta_scale, kappa_scale, u, v):
    model = LinearElasticityEos(
        q0=q0, pr0=pr0, phi0=phi0,
        beta_pr=beta_scale / phi0, kappa_phi=kappa_scale / pr0,
    )
    pr = pr0 * (1.0 + u)
    phi = phi0 * (1.0 + v)
    qd = model.qd_of(pr, phi)
    assert qd > 0
    assert model.pr_of(qd, phi) == pytest.approx(pr, rel=1e-10)
    assert model.phi_of(qd, pr) == pytest.approx(phi, rel=1e-10)
