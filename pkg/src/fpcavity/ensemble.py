"""Monte Carlo statistics of emitters inside a nanoparticle.

Two sampling problems live here.  The geometric one: dipole orientation and
standing-wave position of ions distributed through a sphere resting on the
mirror, which turns the best-case Purcell factor into an ensemble
distribution.  The spectral one: how many ions of an inhomogeneously
broadened, hyperfine-split population fall inside a probe window, and the
statistical fine structure a narrow probe sees when scanned across the line.

Sampling uses a counter-based generator (Philox) keyed on (seed, domain,
block), so results are bitwise reproducible for a fixed seed regardless of
how many workers split the sample range.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import CavityGeometry, Nanoparticle, Transition, _JsonRecord
from .optics import (
    LossBudget,
    cavity_linewidth,
    finesse,
    mode_waist,
    particle_scattering_loss,
)
from .purcell import degradation_factors, effective_purcell, nominal_purcell
from .trace import Trace

THREAD_ENV_VAR = "FPCAVITY_THREADS"

_BLOCK = 4096
# entropy-domain tags keep the independent sampling tasks on distinct streams
_DOMAIN_ENSEMBLE = 0
_DOMAIN_ION_COUNT = 1
_DOMAIN_SFS = 2


def _rng(seed: int, domain: int, index: int) -> np.random.Generator:
    sequence = np.random.SeedSequence(entropy=(seed, domain, index))
    return np.random.Generator(np.random.Philox(sequence))


def _worker_count(n_workers: int | None) -> int:
    if n_workers is None:
        n_workers = int(os.environ.get(THREAD_ENV_VAR, "1"))
    if n_workers < 1:
        raise ValueError("n_workers must be >= 1")
    return n_workers


def default_antinode_offset(wavelength: float,
                            penetration_fraction: float = 0.1) -> float:
    """Distance from the mirror surface to the first field antinode.

    A hard mirror puts the antinode at lambda/4; field penetration into the
    coating pulls it toward the surface by ``penetration_fraction`` of a
    wavelength.
    """
    if not 0.0 <= penetration_fraction < 0.25:
        raise ValueError("penetration_fraction must be in [0, 0.25)")
    return wavelength * (0.25 - penetration_fraction)


def sample_orientation_factor(rng: np.random.Generator,
                              size: int | None = None):
    """Projection factor |d . e|^2 of an isotropic dipole on a fixed axis.

    Dipole directions are drawn uniformly on the sphere via normalized
    Gaussian vectors; the mean of the factor is exactly 1/3.
    """
    n = 1 if size is None else size
    vectors = rng.normal(size=(n, 3))
    factor = vectors[:, 0] ** 2 / np.sum(vectors**2, axis=1)
    return float(factor[0]) if size is None else factor


def sample_height(diameter: float, rng: np.random.Generator,
                  size: int | None = None):
    """Height above the mirror of a uniform point in a resting sphere.

    The cross-section area of a sphere of diameter D at height z goes as
    z (D - z), which is a Beta(2, 2) profile scaled to [0, D].
    """
    if diameter <= 0.0:
        raise ValueError("diameter must be positive")
    n = 1 if size is None else size
    heights = diameter * rng.beta(2.0, 2.0, size=n)
    return float(heights[0]) if size is None else heights


def standing_wave_factor(height, wavelength: float, antinode_offset: float):
    """Intensity factor sin^2(2 pi (z + z0) / lambda) of the standing wave."""
    if wavelength <= 0.0:
        raise ValueError("wavelength must be positive")
    return np.sin(2.0 * math.pi * (np.asarray(height) + antinode_offset)
                  / wavelength) ** 2


def sample_position_factor(diameter: float, wavelength: float,
                           antinode_offset: float, rng: np.random.Generator,
                           size: int | None = None):
    """Standing-wave factor for random emitter heights in the particle."""
    heights = sample_height(diameter, rng, size=size)
    factor = standing_wave_factor(heights, wavelength, antinode_offset)
    return float(factor) if size is None else factor


@dataclass(frozen=True)
class ChannelStrength(_JsonRecord):
    """Deterministic part of one transition's Purcell factor.

    ``strength`` is branching * F_P * bad-emitter * jitter, i.e. the value
    an ideally placed, ideally oriented ion would see.
    """

    wavelength: float
    strength: float


def channel_strengths(particle: Nanoparticle, geometry: CavityGeometry,
                      transitions, budgets, jitter_sigma: float | None = None,
                      refractive_index: float = 1.0) -> list[ChannelStrength]:
    """Per-transition deterministic Purcell prefactors.

    Budgets are the bare-cavity budgets in transition order; the particle's
    own scattering loss is added here before the finesse is taken.  With
    ``jitter_sigma=None`` the geometry's rms length jitter applies.
    """
    if jitter_sigma is None:
        jitter_sigma = geometry.rms_length_jitter
    channels = []
    for transition, bare in zip(transitions, budgets, strict=True):
        budget = bare.with_particle(particle_scattering_loss(
            particle.diameter, transition.wavelength))
        finesse_value = finesse(budget)
        waist = mode_waist(transition.wavelength,
                           geometry.radius_of_curvature,
                           geometry.cavity_length)
        kappa = cavity_linewidth(geometry.cavity_length, budget)
        nominal = nominal_purcell(transition.wavelength, finesse_value,
                                  waist, refractive_index)
        degradation = degradation_factors(
            transition, kappa, finesse_value=finesse_value,
            jitter_sigma=jitter_sigma)
        channels.append(ChannelStrength(
            wavelength=transition.wavelength,
            strength=effective_purcell(transition, nominal, degradation)))
    return channels


@dataclass(frozen=True)
class EnsembleStats(_JsonRecord):
    """Effective-Purcell distribution over ions in one particle."""

    mean: float
    std: float
    max: float
    n_samples: int
    seed: int


def _ensemble_block(seed: int, block: int, count: int, diameter: float,
                    channels, offsets) -> tuple[float, float]:
    rng = _rng(seed, _DOMAIN_ENSEMBLE, block)
    orientation = sample_orientation_factor(rng, size=count)
    heights = sample_height(diameter, rng, size=count)
    total = np.zeros(count)
    for channel, offset in zip(channels, offsets):
        total += channel.strength * standing_wave_factor(
            heights, channel.wavelength, offset)
    samples = orientation * total
    return float(np.sum(samples)), float(np.sum(samples * samples))


def ensemble_purcell_stats(particle: Nanoparticle, geometry: CavityGeometry,
                           transitions, budgets, n_samples: int = 20000,
                           seed: int = 0, jitter_sigma: float | None = None,
                           antinode_offset_fraction: float = 0.15,
                           refractive_index: float = 1.0,
                           n_workers: int | None = None) -> EnsembleStats:
    """Monte Carlo distribution of the summed effective Purcell factor.

    Each sample is one ion: a shared random dipole orientation and a shared
    random height, multiplied into every transition's deterministic channel
    strength (jitter and bad-emitter factors are deterministic).  The
    ``max`` field is the analytic ceiling with orientation and position
    factors set to 1, not a sample maximum.

    The sample range is split into fixed blocks with independent
    counter-based streams; any ``n_workers`` gives bitwise identical
    results.  ``n_workers=None`` reads the FPCAVITY_THREADS environment
    variable, defaulting to 1.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    workers = _worker_count(n_workers)
    channels = channel_strengths(particle, geometry, transitions, budgets,
                                 jitter_sigma=jitter_sigma,
                                 refractive_index=refractive_index)
    offsets = [antinode_offset_fraction * c.wavelength for c in channels]
    n_blocks = (n_samples + _BLOCK - 1) // _BLOCK
    counts = [min(_BLOCK, n_samples - b * _BLOCK) for b in range(n_blocks)]

    def run(block: int) -> tuple[float, float]:
        return _ensemble_block(seed, block, counts[block], particle.diameter,
                               channels, offsets)

    if workers == 1:
        partials = [run(b) for b in range(n_blocks)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(run, range(n_blocks)))

    # reduce strictly in block order so the result is worker-independent
    total = math.fsum(p[0] for p in partials)
    total_sq = math.fsum(p[1] for p in partials)
    mean = total / n_samples
    variance = max(0.0, (total_sq - n_samples * mean * mean)
                   / (n_samples - 1))
    return EnsembleStats(
        mean=mean,
        std=math.sqrt(variance),
        max=math.fsum(c.strength for c in channels),
        n_samples=n_samples,
        seed=seed,
    )


def total_ion_count(particle: Nanoparticle) -> int:
    """Number of dopant ions in the particle from volume and doping."""
    return round(particle.volume * particle.cation_density
                 * particle.dopant_concentration)


def default_hyperfine_classes() -> tuple[tuple[float, float], ...]:
    """Default hyperfine transition classes as (offset Hz, weight) pairs.

    Two isotopes at natural abundance, each with 3 ground and 3 excited
    hyperfine levels giving 9 equally weighted transition classes.  The
    splitting magnitudes are round-number placeholders on the tens-of-MHz
    scale; replace them with measured values for quantitative class-resolved
    work.  Because the offsets are tiny against the inhomogeneous width,
    bulk ion-count estimates are insensitive to the exact numbers.
    """
    isotopes = (
        (0.478, (0.0, 30e6, 75e6), (0.0, 35e6, 80e6)),
        (0.522, (0.0, 75e6, 190e6), (0.0, 90e6, 200e6)),
    )
    classes = []
    for abundance, ground, excited in isotopes:
        weight = abundance / (len(ground) * len(excited))
        for g in ground:
            for e in excited:
                classes.append((e - g, weight))
    return tuple(classes)


@dataclass(frozen=True)
class SpectralPopulation(_JsonRecord):
    """Ion population over the inhomogeneous line.

    total_ions: ions in the particle
    inhomogeneous_fwhm: Lorentzian inhomogeneous width (Hz)
    center_frequency: line center (Hz); 0 for detuning-relative work
    hyperfine_offsets: (offset Hz, weight) transition classes, weights
    summing to 1
    """

    total_ions: int
    inhomogeneous_fwhm: float
    center_frequency: float = 0.0
    hyperfine_offsets: tuple = ((0.0, 1.0),)

    def __post_init__(self):
        if self.total_ions < 1:
            raise ValueError("total_ions must be >= 1")
        if self.inhomogeneous_fwhm <= 0.0:
            raise ValueError("inhomogeneous_fwhm must be positive")
        classes = tuple((float(off), float(w))
                        for off, w in self.hyperfine_offsets)
        if not classes:
            raise ValueError("hyperfine_offsets must not be empty")
        if any(w <= 0.0 for _, w in classes):
            raise ValueError("hyperfine class weights must be positive")
        if abs(math.fsum(w for _, w in classes) - 1.0) > 1e-6:
            raise ValueError("hyperfine class weights must sum to 1")
        object.__setattr__(self, "hyperfine_offsets", classes)


def _draw_ion_frequencies(population: SpectralPopulation,
                          rng: np.random.Generator) -> np.ndarray:
    offsets = np.array([off for off, _ in population.hyperfine_offsets])
    weights = np.array([w for _, w in population.hyperfine_offsets])
    edges = np.cumsum(weights)
    edges[-1] = 1.0  # guard the top edge against rounding
    classes = np.searchsorted(edges, rng.random(population.total_ions),
                              side="right")
    # Lorentzian inhomogeneous profile via inverse CDF
    u = rng.random(population.total_ions)
    centers = (population.center_frequency + offsets[classes]
               + 0.5 * population.inhomogeneous_fwhm
               * np.tan(math.pi * (u - 0.5)))
    return centers


def expected_ions_in_bandwidth(population: SpectralPopulation,
                               probe_frequency: float,
                               bandwidth: float) -> float:
    """Analytic expectation of the ion count inside the probe window."""
    if bandwidth <= 0.0:
        raise ValueError("bandwidth must be positive")
    half = 0.5 * population.inhomogeneous_fwhm
    lo = probe_frequency - 0.5 * bandwidth
    hi = probe_frequency + 0.5 * bandwidth

    def cdf(delta):
        return 0.5 + math.atan(delta / half) / math.pi

    expectation = 0.0
    for offset, weight in population.hyperfine_offsets:
        center = population.center_frequency + offset
        expectation += weight * (cdf(hi - center) - cdf(lo - center))
    return population.total_ions * expectation


@dataclass(frozen=True)
class IonCountStats(_JsonRecord):
    """Distribution of ions addressed inside a probe window."""

    mean: float
    std: float
    n_draws: int
    seed: int


def ions_in_bandwidth(population: SpectralPopulation, probe_frequency: float,
                      bandwidth: float, seed: int = 0,
                      n_draws: int = 300) -> IonCountStats:
    """Monte Carlo count of ions falling inside the probe window.

    Each draw places every ion at a Lorentzian-distributed frequency
    shifted by a weighted hyperfine class, then counts the ions inside
    [probe - bw/2, probe + bw/2]; the count carries Poisson-like
    statistics.
    """
    if bandwidth <= 0.0:
        raise ValueError("bandwidth must be positive")
    if n_draws < 2:
        raise ValueError("n_draws must be >= 2")
    lo = probe_frequency - 0.5 * bandwidth
    hi = probe_frequency + 0.5 * bandwidth
    counts = np.empty(n_draws)
    for draw in range(n_draws):
        rng = _rng(seed, _DOMAIN_ION_COUNT, draw)
        centers = _draw_ion_frequencies(population, rng)
        counts[draw] = np.count_nonzero((centers >= lo) & (centers <= hi))
    return IonCountStats(mean=float(np.mean(counts)),
                         std=float(np.std(counts, ddof=1)),
                         n_draws=n_draws, seed=seed)


def sfs_spectrum(population: SpectralPopulation, probe_fwhm: float,
                 grid, rate_per_ion: float = 1.0, seed: int = 0) -> Trace:
    """Statistical fine structure of a fixed ion placement.

    One seeded placement of all ions; the trace value at each grid point is
    ``rate_per_ion`` times the number of ions within half a probe width of
    that frequency.  The same seed always reproduces the same structure.
    """
    if probe_fwhm <= 0.0:
        raise ValueError("probe_fwhm must be positive")
    if rate_per_ion < 0.0:
        raise ValueError("rate_per_ion must be >= 0")
    grid = np.asarray(grid, dtype=float)
    rng = _rng(seed, _DOMAIN_SFS, 0)
    centers = np.sort(_draw_ion_frequencies(population, rng))
    half = 0.5 * probe_fwhm
    left = np.searchsorted(centers, grid - half, side="left")
    right = np.searchsorted(centers, grid + half, side="right")
    counts = (right - left).astype(float)
    return Trace(x=grid, y=rate_per_ion * counts,
                 noise_model="ion-placement", seed=seed)
