"""Nonlinear least-squares fits for the measurement models.

A small registry of named models (Lorentzian peak and dip, power law,
square-root broadening, exponential decay, straight line) with automatic
initial guesses, fitted by a damped Gauss-Newton loop with
central-difference Jacobians.  Parameter uncertainties come from the usual
linearized covariance s^2 (J^T W J)^-1.

The solver is deliberately plain: normal equations with a Levenberg
damping term, multiplicative step control, and a relative step-size
convergence test.  It handles every model here in well under the iteration
cap on clean and noisy data alike.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .trace import Trace

# parameter kinds set the finite-difference step floor for a parameter
# whose current value is near zero: "x" and "y" scale with the data spans,
# "slope" with their ratio, "unit" is order one
_KINDS = ("y", "x", "unit", "slope")


@dataclass(frozen=True)
class ModelSpec:
    name: str
    parameters: tuple[str, ...]
    kinds: tuple[str, ...]
    positive: frozenset[str]
    function: Callable[[np.ndarray, np.ndarray], np.ndarray]
    guess: Callable[[np.ndarray, np.ndarray], np.ndarray]


def _lorentzian(x, p):
    amplitude, center, fwhm, offset = p
    u = 2.0 * (x - center) / fwhm
    return amplitude / (1.0 + u * u) + offset


def _inverted_lorentzian(x, p):
    baseline, depth, center, fwhm = p
    u = 2.0 * (x - center) / fwhm
    return baseline - depth / (1.0 + u * u)


def _power_law(x, p):
    scale, exponent, offset = p
    return scale * np.power(x, exponent) + offset


def _sqrt_offset(x, p):
    slope, offset = p
    return slope * np.sqrt(x) + offset


def _exp_decay(x, p):
    amplitude, lifetime, offset = p
    return amplitude * np.exp(-x / lifetime) + offset


def _linear(x, p):
    slope, intercept = p
    return slope * x + intercept


def _peak_width(x, y, level, above: bool) -> float:
    inside = np.nonzero(y >= level if above else y <= level)[0]
    if inside.size >= 2:
        width = abs(x[inside[-1]] - x[inside[0]])
        if width > 0.0:
            return width
    span = np.ptp(x)
    return span / 10.0 if span > 0.0 else 1.0


def _guess_lorentzian(x, y):
    offset = float(np.min(y))
    amplitude = float(np.max(y)) - offset
    if amplitude <= 0.0:
        raise ValueError("cannot guess a Lorentzian from flat data")
    center = float(x[np.argmax(y)])
    fwhm = _peak_width(x, y, offset + 0.5 * amplitude, above=True)
    return np.array([amplitude, center, fwhm, offset])


def _guess_inverted_lorentzian(x, y):
    baseline = float(np.max(y))
    depth = baseline - float(np.min(y))
    if depth <= 0.0:
        raise ValueError("cannot guess a dip from flat data")
    center = float(x[np.argmin(y)])
    fwhm = _peak_width(x, y, baseline - 0.5 * depth, above=False)
    return np.array([baseline, depth, center, fwhm])


def _guess_power_law(x, y):
    keep = (x > 0.0) & (y > 0.0)
    if np.count_nonzero(keep) < 2:
        raise ValueError("power-law guess needs at least two positive points")
    slope, intercept = np.polyfit(np.log(x[keep]), np.log(y[keep]), 1)
    return np.array([math.exp(intercept), slope, 0.0])


def _guess_sqrt_offset(x, y):
    if np.any(x < 0.0):
        raise ValueError("sqrt model needs x >= 0")
    design = np.column_stack([np.sqrt(x), np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return np.asarray(coef, dtype=float)


def _guess_exp_decay(x, y):
    # average over thirds: the successive differences of the three block
    # sums cancel a constant background exactly, and on a uniform grid the
    # ratio d1/d2 equals exp(-L/tau) with L the block length
    third = len(x) // 3
    if third >= 1:
        s1 = float(np.sum(y[:third]))
        s2 = float(np.sum(y[third:2 * third]))
        s3 = float(np.sum(y[2 * third:3 * third]))
        d1, d2 = s1 - s2, s2 - s3
        if d1 > 0.0 and d2 > 0.0 and d1 > d2:
            block = x[third] - x[0]
            lifetime = block / math.log(d1 / d2)
            decay = np.exp(-x[:third] / lifetime)
            amplitude = d1 / ((1.0 - math.exp(-block / lifetime))
                              * float(np.sum(decay)))
            offset = (s3 - amplitude
                      * float(np.sum(np.exp(-x[2 * third:3 * third]
                                            / lifetime)))) / third
            if amplitude > 0.0 and lifetime > 0.0:
                return np.array([amplitude, lifetime, offset])
    # fallback for short or very noisy records
    offset = float(np.min(y))
    amplitude = float(y[0]) - offset
    if amplitude <= 0.0:
        raise ValueError("cannot guess a decay from non-decaying data")
    span = np.ptp(x)
    return np.array([amplitude, span / 3.0 if span > 0.0 else 1.0, offset])


def _guess_linear(x, y):
    slope, intercept = np.polyfit(x, y, 1)
    return np.array([slope, intercept])


MODELS: dict[str, ModelSpec] = {
    spec.name: spec for spec in (
        ModelSpec("lorentzian", ("amplitude", "center", "fwhm", "offset"),
                  ("y", "x", "x", "y"), frozenset({"fwhm"}),
                  _lorentzian, _guess_lorentzian),
        ModelSpec("inverted_lorentzian",
                  ("baseline", "depth", "center", "fwhm"),
                  ("y", "y", "x", "x"), frozenset({"fwhm"}),
                  _inverted_lorentzian, _guess_inverted_lorentzian),
        ModelSpec("power_law", ("scale", "exponent", "offset"),
                  ("y", "unit", "y"), frozenset({"scale"}),
                  _power_law, _guess_power_law),
        ModelSpec("sqrt_offset", ("slope", "offset"),
                  ("slope", "y"), frozenset(),
                  _sqrt_offset, _guess_sqrt_offset),
        ModelSpec("exp_decay", ("amplitude", "lifetime", "offset"),
                  ("y", "x", "y"), frozenset({"amplitude", "lifetime"}),
                  _exp_decay, _guess_exp_decay),
        ModelSpec("linear", ("slope", "intercept"),
                  ("slope", "y"), frozenset(),
                  _linear, _guess_linear),
    )
}


def _model(name: str) -> ModelSpec:
    try:
        return MODELS[name]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; "
                         f"choose from {sorted(MODELS)}") from None


def _step_floors(spec: ModelSpec, x, y) -> np.ndarray:
    def span(values):
        extent = float(np.ptp(values))
        if extent > 0.0:
            return extent
        peak = float(np.max(np.abs(values)))
        return peak if peak > 0.0 else 1.0

    xspan, yspan = span(x), span(y)
    table = {"x": xspan, "y": yspan, "unit": 1.0, "slope": yspan / xspan}
    return np.array([table[kind] for kind in spec.kinds])


def _jacobian(spec: ModelSpec, x, params, floors) -> np.ndarray:
    jac = np.empty((len(x), len(params)))
    for j in range(len(params)):
        h = 1e-6 * max(abs(params[j]), floors[j])
        upper = params.copy()
        lower = params.copy()
        upper[j] += h
        lower[j] -= h
        jac[:, j] = (spec.function(x, upper) - spec.function(x, lower)) \
            / (2.0 * h)
    return jac


def auto_initial_guess(model: str, x, y) -> dict[str, float]:
    """Data-driven starting parameters for a registered model."""
    spec = _model(model)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    values = spec.guess(x, y)
    return dict(zip(spec.parameters, (float(v) for v in values)))


@dataclass(frozen=True)
class FitResult:
    """Outcome of a least-squares fit.

    ``residual_sum_of_squares`` is the weighted sum entering the cost
    function; standard errors are NaN when the normal matrix is singular
    or the fit has no spare degrees of freedom.
    """

    model: str
    parameters: dict[str, float]
    standard_errors: dict[str, float]
    residual_sum_of_squares: float
    converged: bool
    iterations: int

    def evaluate(self, x):
        """Model curve at the fitted parameters."""
        spec = _model(self.model)
        vector = np.array([self.parameters[n] for n in spec.parameters])
        return spec.function(np.asarray(x, dtype=float), vector)

    def to_dict(self) -> dict:
        def clean(mapping):
            return {k: (None if math.isnan(v) else v)
                    for k, v in mapping.items()}

        return {
            "model": self.model,
            "parameters": clean(self.parameters),
            "standard_errors": clean(self.standard_errors),
            "residual_sum_of_squares": self.residual_sum_of_squares,
            "converged": self.converged,
            "iterations": self.iterations,
        }


def _resolve_weights(weights, y) -> np.ndarray:
    if weights is None:
        return np.ones_like(y)
    if isinstance(weights, str):
        if weights != "poisson":
            raise ValueError(f"unknown weighting {weights!r}")
        return 1.0 / np.maximum(y, 1.0)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != y.shape:
        raise ValueError("weights must match the data length")
    if np.any(weights < 0.0):
        raise ValueError("weights must be >= 0")
    return weights


def fit(model: str, trace_or_x, y=None, *, initial_guess=None, weights=None,
        x_range: tuple[float, float] | None = None,
        max_iterations: int = 200, tolerance: float = 1e-10) -> FitResult:
    """Fit a registered model to data.

    Accepts either a :class:`~fpcavity.trace.Trace` or separate x and y
    arrays.  ``initial_guess`` may be a full or partial parameter dict
    (missing entries fall back to the automatic guess) or a plain sequence
    in registry order.  ``weights`` is None, "poisson" (1/max(y, 1)), or an
    explicit array; ``x_range`` restricts the fit window.
    """
    spec = _model(model)
    if isinstance(trace_or_x, Trace):
        if y is not None:
            raise ValueError("pass either a trace or x and y, not both")
        x, y = trace_or_x.x, trace_or_x.y
    else:
        if y is None:
            raise ValueError("y data is required when x is an array")
        x = trace_or_x
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d arrays of equal length")
    if x_range is not None:
        lo, hi = x_range
        keep = (x >= lo) & (x <= hi)
        x, y = x[keep], y[keep]

    k = len(spec.parameters)
    if len(x) < k:
        raise ValueError(f"model {model!r} needs at least {k} points")

    if initial_guess is None:
        params_map = auto_initial_guess(model, x, y)
    elif isinstance(initial_guess, dict):
        unknown = set(initial_guess) - set(spec.parameters)
        if unknown:
            raise ValueError(f"unknown parameters {sorted(unknown)} "
                             f"for model {model!r}")
        if set(initial_guess) == set(spec.parameters):
            params_map = dict(initial_guess)
        else:
            params_map = auto_initial_guess(model, x, y)
            params_map.update(initial_guess)
    else:
        values = list(initial_guess)
        if len(values) != k:
            raise ValueError(f"model {model!r} takes {k} parameters "
                             f"{spec.parameters}")
        params_map = dict(zip(spec.parameters, values))
    params = np.array([float(params_map[n]) for n in spec.parameters])
    for name in spec.positive:
        if params[spec.parameters.index(name)] <= 0.0:
            raise ValueError(f"initial {name} must be positive")

    w = _resolve_weights(weights, y)
    floors = _step_floors(spec, x, y)

    def cost_of(p):
        r = y - spec.function(x, p)
        return float(np.sum(w * r * r)), r

    cost, residual = cost_of(params)
    damping = 1e-3
    converged = False
    iteration = 0
    while iteration < max_iterations:
        iteration += 1
        jac = _jacobian(spec, x, params, floors)
        jtw = jac.T * w
        normal = jtw @ jac
        gradient = jtw @ residual
        diagonal = np.diag(normal).copy()
        diagonal[diagonal <= 0.0] = max(np.max(diagonal), 1.0)
        try:
            step = np.linalg.solve(normal + damping * np.diag(diagonal),
                                   gradient)
        except np.linalg.LinAlgError:
            damping *= 10.0
            if damping > 1e12:
                break
            continue
        trial = params + step
        for name in spec.positive:
            j = spec.parameters.index(name)
            if trial[j] <= 0.0:
                trial[j] = 0.1 * params[j]
        trial_cost, trial_residual = cost_of(trial)
        if trial_cost <= cost:
            relative = np.max(np.abs(trial - params)
                              / np.maximum(np.abs(params), floors))
            params, cost, residual = trial, trial_cost, trial_residual
            damping = max(damping / 3.0, 1e-12)
            if relative < tolerance or cost == 0.0:
                converged = True
                break
        else:
            damping *= 10.0
            if damping > 1e12:
                break

    jac = _jacobian(spec, x, params, floors)
    normal = (jac.T * w) @ jac
    errors = np.full(k, math.nan)
    dof = len(x) - k
    if dof > 0:
        try:
            covariance = (cost / dof) * np.linalg.inv(normal)
            variances = np.diag(covariance)
            if np.all(variances >= 0.0):
                errors = np.sqrt(variances)
        except np.linalg.LinAlgError:
            pass

    return FitResult(
        model=model,
        parameters=dict(zip(spec.parameters, (float(p) for p in params))),
        standard_errors=dict(zip(spec.parameters,
                                 (float(e) for e in errors))),
        residual_sum_of_squares=cost,
        converged=converged,
        iterations=iteration,
    )
