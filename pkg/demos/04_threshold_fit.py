"""Fit the detection curve of a noisy synthetic observer.

Generates binomial responses from a known logistic (threshold r=24.4),
refits it from the data alone, and reads thresholds off the curve. With
matplotlib installed, also draws the classic percent-detected-vs-r figure.
"""

import math

import numpy as np

from chromavib import ObservationBin, curve_csv, fit_sigmoid, threshold_at

TRUE_ALPHA, TRUE_BETA = 24.4, 0.3

rng = np.random.default_rng(42)
rs = np.linspace(1.0, 40.0, 8)
bins = []
for r in rs:
    p = 1.0 / (1.0 + math.exp(-TRUE_BETA * (r - TRUE_ALPHA)))
    bins.append(ObservationBin(float(r), 200, int(rng.binomial(200, p))))

print("r      detected/trials")
for b in bins:
    print(f"{b.r:5.2f}  {b.n_detected:3d}/{b.n_trials}")

curve = fit_sigmoid(bins)
print(f"\nfit: alpha={curve.alpha:.3f} (true {TRUE_ALPHA}), "
      f"beta={curve.beta:.4f} (true {TRUE_BETA}), converged={curve.converged}")
print(f"r at 50% detection: {threshold_at(curve, 0.5):.3f}")
print(f"r at 75% detection: {threshold_at(curve, 0.75):.3f}")
print(f"r at 95% detection: {threshold_at(curve, 0.95):.3f}")

grid = np.linspace(1.0, 40.0, 100)
open("demos/fitted_curve.csv", "w").write(curve_csv(curve, grid))
print("\nwrote demos/fitted_curve.csv")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit(0)

fig, ax = plt.subplots(figsize=(6, 4))
ax.plot([b.r for b in bins], [b.n_detected / b.n_trials for b in bins], "bo",
        label="observed proportion")
ax.plot(grid, [curve.probability(r) for r in grid], "b-", label="fitted sigmoid")
ax.axvline(curve.alpha, color="gray", ls=":", label=f"r50 = {curve.alpha:.1f}")
ax.set_xlabel("amplitude ratio r")
ax.set_ylabel("P(flicker reported)")
ax.legend()
fig.tight_layout()
fig.savefig("demos/fitted_curve.png", dpi=150)
print("wrote demos/fitted_curve.png")
