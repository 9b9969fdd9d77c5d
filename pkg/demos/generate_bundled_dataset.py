"""Regenerate the bundled hole-width-versus-power dataset.

The packaged CSV under ``src/fpcavity/data`` holds a synthetic power
series of the homogeneous linewidth extracted from spectral-hole scans:
y = alpha * sqrt(P) + Gamma_0 with Gaussian scatter.  Fitting it with the
``sqrt_offset`` model recovers the zero-power linewidth; the toolkit's
fit command uses it as a worked example.

Run from the repository root:

    python3 demos/generate_bundled_dataset.py
"""
from pathlib import Path

import numpy as np

from fpcavity import Trace, power_broadening, write_trace

SQRT_COEFFICIENT = 6.4e9   # Hz per sqrt(W)
ZERO_POWER_FWHM = 3.3e6    # Hz
NOISE_SIGMA = 6e5          # Hz, extraction scatter per point
SEED = 7

OUT = (Path(__file__).resolve().parent.parent
       / "src" / "fpcavity" / "data" / "hole_width_vs_power.csv")


def main() -> None:
    powers = np.geomspace(5e-8, 2e-6, 12)
    widths = power_broadening(powers, SQRT_COEFFICIENT, ZERO_POWER_FWHM)
    rng = np.random.default_rng(SEED)
    noisy = widths + rng.normal(0.0, NOISE_SIGMA, size=powers.size)
    trace = Trace(x=powers, y=noisy, noise_model="gaussian", seed=SEED)
    sidecar = write_trace(trace, OUT, metadata={
        "quantity": "homogeneous linewidth (Hz) vs excitation power (W)",
        "sqrt_coefficient": SQRT_COEFFICIENT,
        "zero_power_fwhm": ZERO_POWER_FWHM,
        "noise_sigma": NOISE_SIGMA,
    })
    print(f"wrote {OUT}")
    print(f"sidecar {sidecar}")
    print(f"true zero-power linewidth {ZERO_POWER_FWHM / 1e6:.2f} MHz")


if __name__ == "__main__":
    main()
