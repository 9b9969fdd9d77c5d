"""Count-rate and signal-to-noise planning for single-ion detection.

Composes the cavity and emitter models into detected photon rates for a
pulsed excite-then-collect cycle, and sweeps particle diameter and
repetition rate over the supported cavity operating modes to find the best
operating point.

Operating modes:

contact      mirrors nearly touching; only the pumped transition is
             resonant and collected, with the lowest length jitter
open_single  longer cavity tuned so both transitions are simultaneously
             resonant; only the pumped transition is collected
open_double  same cavity, both transitions collected

``transitions[0]`` is the pumped transition throughout; it is the
collected channel in contact and open_single modes.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .core import CavityGeometry, Nanoparticle, _JsonRecord
from .ensemble import ChannelStrength, channel_strengths
from .optics import (
    double_resonance,
    outcoupling_efficiency,
    particle_scattering_loss,
)

PLAN_MODES = ("contact", "open_single", "open_double")

CONTACT_LENGTH = 2.5e-6
CONTACT_JITTER = 0.8e-12
OPEN_JITTER = 2.5e-12

SWEEP_COLUMNS = ("d_np_nm", "f_rep_hz", "mode", "rate_cps", "snr")


@dataclass(frozen=True)
class DetectionChain(_JsonRecord):
    """Photon path from the cavity output to counted clicks.

    path_transmission: fiber and filter transmission (fraction)
    detector_efficiency: detector quantum efficiency (fraction)
    dark_rate: detector dark counts (counts/s)
    """

    path_transmission: float
    detector_efficiency: float
    dark_rate: float

    def __post_init__(self):
        if not 0.0 < self.path_transmission <= 1.0:
            raise ValueError("path_transmission must be in (0, 1]")
        if not 0.0 < self.detector_efficiency <= 1.0:
            raise ValueError("detector_efficiency must be in (0, 1]")
        if self.dark_rate < 0.0:
            raise ValueError("dark_rate must be >= 0")


@dataclass(frozen=True)
class PulseScheme(_JsonRecord):
    """Excite-then-collect timing of one detection cycle.

    excitation_time: pump pulse length (s), detection gated off
    detection_time: collection window (s)
    excited_population: excited-state population after the pump pulse
    """

    excitation_time: float
    detection_time: float
    excited_population: float

    def __post_init__(self):
        if self.excitation_time <= 0.0 or self.detection_time <= 0.0:
            raise ValueError("cycle times must be positive")
        if not 0.0 < self.excited_population <= 1.0:
            raise ValueError("excited_population must be in (0, 1]")

    @property
    def repetition_rate(self) -> float:
        return 1.0 / (self.excitation_time + self.detection_time)


def pulsed_rate(scheme: PulseScheme, effective_purcell: float,
                free_space_lifetime: float) -> float:
    """Photons emitted into the cavity mode per second of pulsed cycling.

    Per cycle the ion emits into the mode with probability F / (F + 1)
    once it decays; the exponential factor is the chance it decays inside
    the detection window, with the lifetime shortened by (F + 1).
    """
    if effective_purcell < 0.0:
        raise ValueError("effective_purcell must be >= 0")
    if free_space_lifetime <= 0.0:
        raise ValueError("free_space_lifetime must be positive")
    decayed = -math.expm1(-(effective_purcell + 1.0) * scheme.detection_time
                          / free_space_lifetime)
    return (scheme.excited_population * scheme.repetition_rate
            * effective_purcell / (effective_purcell + 1.0) * decayed)


def detected_rate(emitted_rate: float, outcoupling: float,
                  chain: DetectionChain) -> float:
    """Counted rate after outcoupling, path losses, and the detector."""
    if emitted_rate < 0.0:
        raise ValueError("emitted_rate must be >= 0")
    if not 0.0 <= outcoupling <= 1.0:
        raise ValueError("outcoupling must be in [0, 1]")
    return (emitted_rate * outcoupling * chain.path_transmission
            * chain.detector_efficiency)


def photon_path_efficiency(outcoupling: float,
                           chain: DetectionChain) -> float:
    """End-to-end probability that a cavity photon becomes a click."""
    if not 0.0 <= outcoupling <= 1.0:
        raise ValueError("outcoupling must be in [0, 1]")
    return outcoupling * chain.path_transmission * chain.detector_efficiency


def snr(signal_rate: float, dark_rate: float,
        integration_time: float = 1.0) -> float:
    """Shot-noise signal-to-noise of a rate against detector dark counts."""
    if signal_rate < 0.0 or dark_rate < 0.0:
        raise ValueError("rates must be >= 0")
    if integration_time <= 0.0:
        raise ValueError("integration_time must be positive")
    if dark_rate == 0.0:
        return math.inf if signal_rate > 0.0 else 0.0
    return (signal_rate * integration_time
            / math.sqrt(dark_rate * integration_time))


@dataclass(frozen=True)
class SweepRow(_JsonRecord):
    """One operating point of the design sweep.

    ``rate`` is the detected count rate; ``effective_purcell`` is the
    summed enhancement over the resonant transitions at this point.
    """

    diameter: float
    repetition_rate: float
    mode: str
    rate: float
    snr: float
    effective_purcell: float


def _shared_lifetime(transitions) -> float:
    lifetimes = {t.free_space_lifetime for t in transitions}
    first = next(iter(lifetimes))
    if any(abs(t - first) > 1e-9 * first for t in lifetimes):
        raise ValueError("transitions must share one excited-state lifetime")
    return first


def _mode_setup(mode: str, particle: Nanoparticle, transitions, budgets,
                radius_of_curvature: float, contact_length: float,
                contact_jitter: float, open_jitter: float):
    """Geometry, channel strengths, and collection weights for one mode."""
    if mode == "contact":
        pumped = transitions[0]
        order = max(1, round(2.0 * contact_length / pumped.wavelength))
        geometry = CavityGeometry(radius_of_curvature, contact_length,
                                  order, contact_jitter)
        enhanced, bare = [pumped], [budgets[0]]
        collected = [True]
    elif mode in ("open_single", "open_double"):
        if len(transitions) != 2:
            raise ValueError(f"mode {mode!r} needs exactly two transitions")
        resonance = double_resonance(transitions[0].wavelength,
                                     transitions[1].wavelength)
        geometry = CavityGeometry(radius_of_curvature,
                                  resonance.cavity_length,
                                  resonance.mode_order_1, open_jitter)
        enhanced, bare = list(transitions), list(budgets)
        collected = [True, mode == "open_double"]
    else:
        raise ValueError(f"unknown mode {mode!r}; choose from {PLAN_MODES}")

    channels = channel_strengths(particle, geometry, enhanced, bare)
    outcouplings = []
    for transition, budget in zip(enhanced, bare):
        loaded = budget.with_particle(particle_scattering_loss(
            particle.diameter, transition.wavelength))
        outcouplings.append(outcoupling_efficiency(loaded))
    return channels, outcouplings, collected


def mode_detected_rate(channels: list[ChannelStrength], outcouplings,
                       collected, scheme: PulseScheme,
                       free_space_lifetime: float,
                       chain: DetectionChain) -> float:
    """Detected rate with the decay shared over all resonant channels.

    The decay accelerates by the summed enhancement of every resonant
    transition; only the collected channels contribute clicks, each
    weighted by its branching into the mode and its own outcoupling.
    """
    total = math.fsum(c.strength for c in channels)
    decayed = -math.expm1(-(total + 1.0) * scheme.detection_time
                          / free_space_lifetime)
    collect = math.fsum(
        channel.strength * eta
        for channel, eta, keep in zip(channels, outcouplings, collected)
        if keep)
    return (scheme.excited_population * scheme.repetition_rate * decayed
            * collect / (total + 1.0)
            * chain.path_transmission * chain.detector_efficiency)


def sweep_grid(diameters, repetition_rates, modes, transitions, budgets,
               radius_of_curvature: float, chain: DetectionChain,
               excitation_time: float, excited_population: float,
               contact_length: float = CONTACT_LENGTH,
               contact_jitter: float = CONTACT_JITTER,
               open_jitter: float = OPEN_JITTER,
               integration_time: float = 1.0) -> list[SweepRow]:
    """Detected rate and SNR over diameter, repetition rate, and mode.

    ``budgets`` are bare-cavity budgets in transition order; each grid
    point loads them with that diameter's scattering loss.  Repetition
    rates must leave a positive detection window after the excitation
    pulse.
    """
    if isinstance(modes, str):
        modes = (modes,)
    lifetime = _shared_lifetime(transitions)
    rows = []
    for mode in modes:
        for diameter in diameters:
            # only the diameter enters the rate; doping is a placeholder
            particle = Nanoparticle(diameter=diameter,
                                    dopant_concentration=0.5)
            channels, outcouplings, collected = _mode_setup(
                mode, particle, transitions, budgets, radius_of_curvature,
                contact_length, contact_jitter, open_jitter)
            total = math.fsum(c.strength for c in channels)
            for f_rep in repetition_rates:
                window = 1.0 / f_rep - excitation_time
                if window <= 0.0:
                    raise ValueError(
                        "repetition period must exceed the excitation time")
                scheme = PulseScheme(excitation_time, window,
                                     excited_population)
                rate = mode_detected_rate(channels, outcouplings, collected,
                                          scheme, lifetime, chain)
                rows.append(SweepRow(
                    diameter=diameter,
                    repetition_rate=f_rep,
                    mode=mode,
                    rate=rate,
                    snr=snr(rate, chain.dark_rate, integration_time),
                    effective_purcell=total,
                ))
    return rows


def best_operating_point(rows) -> SweepRow:
    """Row with the highest rate; ties go to the gentlest settings."""
    rows = list(rows)
    if not rows:
        raise ValueError("no sweep rows to choose from")
    best = min(rows, key=lambda r: (-r.rate, r.repetition_rate,
                                    r.diameter, r.mode))
    if best.rate <= 0.0:
        raise ValueError("sweep produced no usable operating point")
    return best


def write_sweep_csv(rows, path) -> Path:
    """Write sweep rows as CSV with the canonical column set."""
    path = Path(path)
    with open(path, "w", newline="\n") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            writer.writerow([
                repr(round(row.diameter * 1e9, 9)),
                repr(round(row.repetition_rate, 9)),
                row.mode,
                repr(float(row.rate)),
                repr(float(row.snr)),
            ])
    return path
