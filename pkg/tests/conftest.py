import pytest

from thermoecon import IdealAnalogEos, LinearElasticityEos


@pytest.fixture
def linear_model():
    """The worked-example surface used throughout the docs."""
    return LinearElasticityEos(q0=100.0, pr0=10.0, phi0=50.0, beta_pr=0.02, kappa_phi=0.05)


@pytest.fixture
def analog_model():
    return IdealAnalogEos(n=10)
