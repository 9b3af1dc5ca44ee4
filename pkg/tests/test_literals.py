import pytest
from hypothesis import given, strategies as st
from src.models.distribution import Bernoulli, FiniteDiscrete, Gaussian, Mixture, Poisson
from src.models.errors import InvalidDistributionError, LiteralSyntaxError
from src.utils.literals import format_distribution, parse_distribution


@pytest.mark.parametrize("text, expected", [
    ("bern(0.25)", Bernoulli(0.25)),
    ("BERN( 1 )", Bernoulli(1.0)),
    ("gauss(-0.5, 2)", Gaussian(-0.5, 2.0)),
    ("pois(1e3)", Poisson(1000.0)),
    ("disc(0:0.4, 1:0.6, 2:0.0)", FiniteDiscrete((0.0, 1.0, 2.0), (0.4, 0.6, 0.0))),
    ("mix(0.995*gauss(0,1) + 0.005*gauss(100,1))",
     Mixture((0.995, 0.005), (Gaussian(0.0, 1.0), Gaussian(100.0, 1.0)))),
])
def test_parse(text, expected):
    assert parse_distribution(text) == expected


@pytest.mark.parametrize("text", ["bern(0.5", "gauss(0)", "bern(0.5) extra", "beta(1,2)", "bern(#)", ""])
def test_syntax_errors(text):
    with pytest.raises(LiteralSyntaxError):
        parse_distribution(text)


def test_syntax_error_reports_position():
    with pytest.raises(LiteralSyntaxError) as info:
        parse_distribution("gauss(0;1)")
    assert info.value.position == 7


def test_parameter_errors_are_not_syntax_errors():
    with pytest.raises(InvalidDistributionError):
        parse_distribution("bern(1.5)")


def test_mixture_literal_round_trip():
    d = Mixture((0.25, 0.75), (Poisson(5000.0), Poisson(10000.0)))
    assert format_distribution(d) == "mix(0.25*pois(5000.0) + 0.75*pois(10000.0))"
    assert parse_distribution(format_distribution(d)) == d


@given(st.floats(min_value=-1e6, max_value=1e6), st.floats(min_value=1e-6, max_value=1e6))
def test_gaussian_literal_round_trip(mean, std):
    d = Gaussian(mean, std)
    assert parse_distribution(d.to_literal()) == d


@given(st.floats(min_value=0.0, max_value=1.0))
def test_bernoulli_literal_round_trip(p):
    d = Bernoulli(p)
    assert parse_distribution(d.to_literal()) == d
