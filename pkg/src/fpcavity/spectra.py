"""Synthetic spectroscopy signals.

Generators for the standard measurement set on a narrow-line emitter:
excitation scans across the inhomogeneous profile, saturation curves,
spectral-hole scans, power broadening, and pulsed-decay histograms.  Every
generator returns a :class:`~fpcavity.trace.Trace` whose noise model and
seed are recorded alongside the data, so a simulated file can be re-created
exactly.
"""
from __future__ import annotations

import math

import numpy as np

from .ensemble import SpectralPopulation, expected_ions_in_bandwidth, sfs_spectrum
from .trace import Trace

NOISE_MODELS = ("none", "poisson")


def _check_noise(noise: str) -> None:
    if noise not in NOISE_MODELS:
        raise ValueError(f"unknown noise model {noise!r}; "
                         f"choose from {NOISE_MODELS}")


def _apply_noise(mean: np.ndarray, noise: str, seed: int | None) -> np.ndarray:
    if noise == "none":
        return mean
    rng = np.random.default_rng(seed)
    return rng.poisson(np.clip(mean, 0.0, None)).astype(float)


def lorentzian_profile(x, center: float, fwhm: float):
    """Unit-peak Lorentzian 1 / (1 + (2 (x - c) / fwhm)^2)."""
    if fwhm <= 0.0:
        raise ValueError("fwhm must be positive")
    u = 2.0 * (np.asarray(x, dtype=float) - center) / fwhm
    return 1.0 / (1.0 + u * u)


def ple_scan(inhomogeneous_fwhm: float, center_frequency: float,
             amplitude: float, background: float, grid,
             population: SpectralPopulation | None = None,
             probe_fwhm: float | None = None,
             noise: str = "none", seed: int | None = None) -> Trace:
    """Excitation spectrum across the inhomogeneous line.

    The smooth part is a Lorentzian of the given width on a flat
    background.  With a ``population`` (and a ``probe_fwhm``), the curve is
    additionally modulated by the relative fluctuation of the finite ion
    count inside the probe window, i.e. the statistical fine structure that
    a real scan over a fixed ion ensemble shows.
    """
    _check_noise(noise)
    if amplitude < 0.0 or background < 0.0:
        raise ValueError("amplitude and background must be >= 0")
    grid = np.asarray(grid, dtype=float)
    mean = amplitude * lorentzian_profile(grid, center_frequency,
                                          inhomogeneous_fwhm)
    if population is not None:
        if probe_fwhm is None:
            raise ValueError("probe_fwhm is required with a population")
        placed = sfs_spectrum(population, probe_fwhm, grid,
                              seed=0 if seed is None else seed)
        expected = np.array([
            expected_ions_in_bandwidth(population, f, probe_fwhm)
            for f in grid])
        fluctuation = np.where(expected > 0.0,
                               placed.y / np.where(expected > 0.0,
                                                   expected, 1.0),
                               1.0)
        mean = mean * fluctuation
    mean = mean + background
    return Trace(x=grid, y=_apply_noise(mean, noise, seed),
                 noise_model=noise, seed=seed)


def saturation_curve(powers, scale: float, exponent: float,
                     background: float = 0.0, noise: str = "none",
                     seed: int | None = None) -> Trace:
    """Emission rate versus excitation power, R = scale * P^exponent + bg.

    A sub-linear exponent (0 < exponent <= 1) models the onset of
    saturation over the sampled power range.
    """
    _check_noise(noise)
    powers = np.asarray(powers, dtype=float)
    if np.any(powers <= 0.0):
        raise ValueError("powers must be positive")
    if not 0.0 < exponent <= 1.0:
        raise ValueError("exponent must be in (0, 1]")
    if scale < 0.0 or background < 0.0:
        raise ValueError("scale and background must be >= 0")
    mean = scale * powers**exponent + background
    return Trace(x=powers, y=_apply_noise(mean, noise, seed),
                 noise_model=noise, seed=seed)


def hole_spectrum(detunings, n_teeth: int, tooth_power: float,
                  hole_fwhm: float, rate_scale: float,
                  noise: str = "none", seed: int | None = None) -> Trace:
    """Spectral-hole scan after frequency-comb burning.

    Burning with ``n_teeth`` comb teeth of ``tooth_power`` each and probing
    with the full comb gives a baseline rate_scale * N * sqrt(P) away from
    the hole, dipping to rate_scale * sqrt(N P) when all teeth align with
    their holes; the dip has a Lorentzian shape of width ``hole_fwhm``.
    The off/on ratio is sqrt(N), the comb's ensemble-averaging gain.
    """
    _check_noise(noise)
    if n_teeth < 1:
        raise ValueError("n_teeth must be >= 1")
    if tooth_power <= 0.0:
        raise ValueError("tooth_power must be positive")
    if rate_scale < 0.0:
        raise ValueError("rate_scale must be >= 0")
    detunings = np.asarray(detunings, dtype=float)
    baseline = rate_scale * n_teeth * math.sqrt(tooth_power)
    floor = rate_scale * math.sqrt(n_teeth * tooth_power)
    mean = baseline - (baseline - floor) * lorentzian_profile(
        detunings, 0.0, hole_fwhm)
    return Trace(x=detunings, y=_apply_noise(mean, noise, seed),
                 noise_model=noise, seed=seed)


def hole_width_to_homogeneous(hole_fwhm: float,
                              laser_fwhm: float = 0.0) -> float:
    """Homogeneous linewidth from a measured hole width.

    A hole is twice the homogeneous width plus the laser contribution per
    side: Gamma_h = hole/2 - laser.  The hole must be wider than twice the
    laser linewidth for the conversion to make sense.
    """
    if hole_fwhm <= 0.0:
        raise ValueError("hole_fwhm must be positive")
    if laser_fwhm < 0.0:
        raise ValueError("laser_fwhm must be >= 0")
    if hole_fwhm <= 2.0 * laser_fwhm:
        raise ValueError("hole width must exceed twice the laser linewidth")
    return 0.5 * hole_fwhm - laser_fwhm


def power_broadening(power, sqrt_coefficient: float,
                     zero_power_fwhm: float):
    """Power-broadened linewidth coeff * sqrt(P) + Gamma_0."""
    power = np.asarray(power, dtype=float)
    if np.any(power < 0.0):
        raise ValueError("power must be >= 0")
    if sqrt_coefficient < 0.0 or zero_power_fwhm < 0.0:
        raise ValueError("coefficients must be >= 0")
    out = sqrt_coefficient * np.sqrt(power) + zero_power_fwhm
    return float(out) if out.ndim == 0 else out


def decay_histogram(effective_lifetime: float, time_bins, shots: int,
                    amplitude: float, background: float = 0.0,
                    noise: str = "poisson",
                    seed: int | None = None) -> Trace:
    """Photon-arrival histogram of a pulsed decay measurement.

    Per-bin mean counts are shots * (amplitude * exp(-t / tau) +
    background); with the default Poisson noise each bin is an independent
    draw, matching a counting experiment of ``shots`` repetitions.
    """
    _check_noise(noise)
    if effective_lifetime <= 0.0:
        raise ValueError("effective_lifetime must be positive")
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if amplitude < 0.0 or background < 0.0:
        raise ValueError("amplitude and background must be >= 0")
    time_bins = np.asarray(time_bins, dtype=float)
    if np.any(time_bins < 0.0):
        raise ValueError("time bins must be >= 0")
    mean = shots * (amplitude * np.exp(-time_bins / effective_lifetime)
                    + background)
    return Trace(x=time_bins, y=_apply_noise(mean, noise, seed),
                 noise_model=noise, seed=seed)
