"""Plan a single-ion detection run.

Sweeps particle diameter and pulse repetition rate over the three cavity
operating modes, prints the best operating point of each mode, and shows
how long an integration the SNR target needs.  Writes the full sweep to
demos/output/.
"""
import math
from pathlib import Path

from fpcavity import (
    DetectionChain,
    LossBudget,
    Transition,
    best_operating_point,
    snr,
    sweep_grid,
    write_sweep_csv,
)

T_BLUE = Transition(wavelength=580.8e-9, branching_ratio=0.007,
                    homogeneous_linewidth=3.3e6, free_space_lifetime=2e-3)
T_RED = Transition(wavelength=611e-9, branching_ratio=0.36,
                   homogeneous_linewidth=680e9, free_space_lifetime=2e-3)
BUDGETS = [LossBudget(25.0, 200.0, 134.04), LossBudget(25.0, 200.0, 436.39)]
CHAIN = DetectionChain(path_transmission=0.8, detector_efficiency=0.65,
                       dark_rate=20.0)

DIAMETERS = tuple(d * 1e-9 for d in range(40, 101, 10))
REPETITION_RATES = tuple(float(f) for f in range(500, 6001, 500))
MODES = ("contact", "open_single", "open_double")


def main() -> None:
    rows = sweep_grid(DIAMETERS, REPETITION_RATES, MODES, [T_BLUE, T_RED],
                      BUDGETS, 25e-6, CHAIN, excitation_time=1e-6,
                      excited_population=0.5)
    print(f"swept {len(rows)} operating points "
          f"({len(DIAMETERS)} diameters x {len(REPETITION_RATES)} "
          f"repetition rates x {len(MODES)} modes)\n")

    print("best operating point per mode:")
    for mode in MODES:
        best = best_operating_point(r for r in rows if r.mode == mode)
        print(f"  {mode:<12} {best.diameter * 1e9:3.0f} nm at "
              f"{best.repetition_rate / 1e3:.1f} kHz -> "
              f"{best.rate:6.1f} counts/s  (F_eff "
              f"{best.effective_purcell:.2f}, SNR {best.snr:.1f} in 1 s)")

    best = best_operating_point(rows)
    print(f"\noverall best: {best.mode}, {best.diameter * 1e9:.0f} nm, "
          f"{best.repetition_rate / 1e3:.1f} kHz")
    print("the contact cavity wins: the pumped line keeps its small waist "
          "and low jitter, and nothing is spent on the red mode")

    print("\nintegration time to reach a given SNR at the best point "
          f"({best.rate:.0f} counts/s against {CHAIN.dark_rate:.0f} Hz "
          "dark):")
    for target in (5.0, 10.0, 53.7):
        # SNR grows as sqrt(t): t = (target / snr(1 s))^2
        t = (target / snr(best.rate, CHAIN.dark_rate)) ** 2
        print(f"  SNR {target:5.1f} -> {t * 1e3:8.2f} ms")

    # sanity: a dark count contributes sqrt(dark * t) noise, so even the
    # leanest row here clears SNR 5 within a second
    weakest = min(rows, key=lambda r: r.rate)
    print(f"\nweakest row still gives SNR "
          f"{snr(weakest.rate, CHAIN.dark_rate):.1f} in 1 s "
          f"({weakest.mode}, {weakest.diameter * 1e9:.0f} nm, "
          f"{weakest.repetition_rate / 1e3:.1f} kHz, "
          f"{weakest.rate:.1f} counts/s)")

    out_dir = Path(__file__).parent / "output"
    out_dir.mkdir(exist_ok=True)
    out = write_sweep_csv(rows, out_dir / "detection_sweep.csv")
    print(f"wrote the full sweep to {out}")


if __name__ == "__main__":
    main()
