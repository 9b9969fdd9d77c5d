"""Model registry, automatic guesses, and the least-squares solver."""
import math

import numpy as np
import pytest

from fpcavity import (
    FitResult,
    MODELS,
    Trace,
    auto_initial_guess,
    decay_histogram,
    fit,
)
from fpcavity.fitting import _jacobian, _step_floors


def _clean_case(name):
    if name == "lorentzian":
        x = np.linspace(-1e6, 5e6, 201)
        true = {"amplitude": 1000.0, "center": 2e6, "fwhm": 5e5,
                "offset": 50.0}
    elif name == "inverted_lorentzian":
        x = np.linspace(-6e7, 6e7, 201)
        true = {"baseline": 1414.0, "depth": 1273.0, "center": 3e6,
                "fwhm": 1.2e7}
    elif name == "power_law":
        x = np.geomspace(1.0, 1e4, 50)
        true = {"scale": 1000.0, "exponent": 0.5, "offset": 20.0}
    elif name == "sqrt_offset":
        x = np.geomspace(5e-8, 2e-6, 12)
        true = {"slope": 6.4e9, "offset": 3.3e6}
    elif name == "exp_decay":
        x = np.linspace(0.0, 5.5e-3, 120)
        true = {"amplitude": 1000.0, "lifetime": 1.1e-3, "offset": 40.0}
    else:
        x = np.linspace(-5.0, 5.0, 60)
        true = {"slope": -3.0, "intercept": 7.0}
    spec = MODELS[name]
    vector = np.array([true[p] for p in spec.parameters])
    return x, spec.function(x, vector), true


@pytest.mark.parametrize("name", sorted(MODELS))
def test_clean_round_trip(name):
    x, y, true = _clean_case(name)
    result = fit(name, x, y)
    assert result.converged
    for parameter, value in true.items():
        fitted = result.parameters[parameter]
        scale = max(abs(value), 1e-12)
        assert abs(fitted - value) / scale < 1e-6, (parameter, fitted, value)


def test_noisy_decay_with_poisson_weights():
    t = np.linspace(0.0, 5e-3, 100)
    trace = decay_histogram(1.1e-3, t, 20000, 0.05, background=0.002,
                            seed=1)
    result = fit("exp_decay", trace, weights="poisson")
    assert result.converged
    assert result.parameters["lifetime"] == pytest.approx(1.1e-3, rel=0.05)
    err = result.standard_errors["lifetime"]
    assert math.isfinite(err) and err > 0.0
    assert err < 0.1 * result.parameters["lifetime"]


def test_jacobian_matches_analytic_lorentzian():
    spec = MODELS["lorentzian"]
    x = np.linspace(-1e6, 5e6, 101)
    params = np.array([1000.0, 2e6, 5e5, 50.0])
    amplitude, center, fwhm, _ = params
    floors = _step_floors(spec, x, spec.function(x, params))
    numeric = _jacobian(spec, x, params, floors)
    shape = 1.0 / (1.0 + (2.0 * (x - center) / fwhm) ** 2)
    analytic = np.column_stack([
        shape,
        amplitude * shape**2 * 8.0 * (x - center) / fwhm**2,
        amplitude * shape**2 * 8.0 * (x - center) ** 2 / fwhm**3,
        np.ones_like(x),
    ])
    for j in range(4):
        scale = np.max(np.abs(analytic[:, j]))
        assert np.max(np.abs(numeric[:, j] - analytic[:, j])) < 1e-4 * scale


def test_auto_guess_flat_data_raises():
    x = np.linspace(0.0, 1.0, 50)
    flat = np.full_like(x, 5.0)
    with pytest.raises(ValueError):
        auto_initial_guess("lorentzian", x, flat)
    with pytest.raises(ValueError):
        auto_initial_guess("inverted_lorentzian", x, flat)


def test_exp_decay_guess_exact_on_uniform_grid():
    # block-sum construction is exact for a clean decay on a uniform grid,
    # constant background included
    x = np.linspace(0.0, 6e-3, 90)
    y = 850.0 * np.exp(-x / 1.3e-3) + 120.0
    guess = auto_initial_guess("exp_decay", x, y)
    assert guess["amplitude"] == pytest.approx(850.0, rel=1e-9)
    assert guess["lifetime"] == pytest.approx(1.3e-3, rel=1e-9)
    assert guess["offset"] == pytest.approx(120.0, rel=1e-9)


def test_weight_validation():
    x = np.linspace(0.0, 1.0, 20)
    y = 2.0 * x + 1.0
    with pytest.raises(ValueError):
        fit("linear", x, y, weights="bogus")
    with pytest.raises(ValueError):
        fit("linear", x, y, weights=np.ones(5))
    with pytest.raises(ValueError):
        fit("linear", x, y, weights=-np.ones_like(y))


def test_unknown_model():
    with pytest.raises(ValueError):
        fit("gaussian", np.arange(5.0), np.arange(5.0))


def test_partial_guess_merges_with_auto():
    x, y, true = _clean_case("lorentzian")
    result = fit("lorentzian", x, y, initial_guess={"center": 1.9e6})
    assert result.converged
    assert result.parameters["center"] == pytest.approx(2e6, rel=1e-6)
    with pytest.raises(ValueError):
        fit("lorentzian", x, y, initial_guess={"middle": 2e6})


def test_sequence_guess_length():
    x, y, _ = _clean_case("linear")
    result = fit("linear", x, y, initial_guess=[-2.0, 5.0])
    assert result.converged
    with pytest.raises(ValueError):
        fit("linear", x, y, initial_guess=[-2.0, 5.0, 1.0])


def test_x_range_excludes_corrupted_points():
    x, y, true = _clean_case("exp_decay")
    corrupted = y.copy()
    corrupted[x > 4e-3] = 9e9  # detector railed late in the record
    result = fit("exp_decay", x, corrupted, x_range=(0.0, 4e-3))
    assert result.converged
    assert result.parameters["lifetime"] == pytest.approx(
        true["lifetime"], rel=1e-6)


def test_iteration_cap_reported():
    x, y, _ = _clean_case("lorentzian")
    result = fit("lorentzian", x, y,
                 initial_guess={"amplitude": 300.0, "center": 0.5e6,
                                "fwhm": 2e6, "offset": 0.0},
                 max_iterations=1)
    assert not result.converged
    assert result.iterations == 1


def test_zero_dof_yields_nan_errors():
    spec = MODELS["lorentzian"]
    x = np.array([-5e5, 0.0, 5e5, 1e6])
    y = spec.function(x, np.array([100.0, 2e5, 6e5, 10.0]))
    result = fit("lorentzian", x, y)
    assert all(math.isnan(e) for e in result.standard_errors.values())
    as_dict = result.to_dict()
    assert as_dict["standard_errors"]["amplitude"] is None
    assert as_dict["parameters"]["amplitude"] is not None


def test_too_few_points():
    with pytest.raises(ValueError):
        fit("lorentzian", np.arange(3.0), np.arange(3.0))


def test_trace_input_and_evaluate():
    x = np.linspace(0.0, 10.0, 30)
    y = -1.5 * x + 4.0
    trace = Trace(x=x, y=y)
    result = fit("linear", trace)
    assert isinstance(result, FitResult)
    assert np.allclose(result.evaluate(x), y, rtol=0.0, atol=1e-9)
    with pytest.raises(ValueError):
        fit("linear", trace, y)
