"""Acceptance suite: the binding end-to-end criteria, one test per criterion.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion lines.
Each test pins its tolerance and runtime budget explicitly.
"""

import json
import math
import random
import time

import numpy as np
import pytest

from chromavib.colorimetry import (
    Chromaticity,
    XYZ_to_linear_sRGB,
    chromaticity_of,
    xyY_to_XYZ,
)
from chromavib.macadam import builtin_atlas, endpoint_coords
from chromavib.pairs import (
    _pair_ok,
    default_stimulus_set,
    rank_displayable,
)
from chromavib.psychometrics import ObservationBin, fit_sigmoid, threshold_at
from chromavib.session import run_simulation

ATLAS = builtin_atlas()


def _report(name: str, detail: str, elapsed: float, budget: float):
    status = "PASS" if elapsed < budget else "FAIL"
    print(f"[{status}] {name}: {detail} ({elapsed:.2f}s < {budget:g}s)")
    assert elapsed < budget, f"{name} exceeded {budget}s budget ({elapsed:.2f}s)"


def test_colorimetry_round_trip():
    """10k random xyY round trips within 1e-12; D65 white hits linear white."""
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(10_000):
        y = rng.uniform(0.01, 0.99)
        x = rng.uniform(0.0, 1.0 - y)
        Y = rng.uniform(0.01, 1.0)
        c = Chromaticity(x, y)
        t = xyY_to_XYZ(c, Y)
        back = chromaticity_of(t)
        worst = max(worst, abs(back.x - x), abs(back.y - y))
        assert t.Y == Y
    assert worst < 1e-12

    white = XYZ_to_linear_sRGB(xyY_to_XYZ(Chromaticity(0.3127, 0.3290), 1.0))
    dev = max(abs(v - 1.0) for v in white.channels())
    assert dev < 2e-3
    elapsed = time.perf_counter() - t0
    _report(
        "colorimetry round trip",
        f"worst xy error {worst:.2e}, white deviation {dev:.1e}",
        elapsed,
        1.0,
    )


def test_endpoint_formula_oracle():
    """All 25 ellipses x r in {0,1,5,24.4,40} match brute force to 1e-12."""
    t0 = time.perf_counter()
    checked = 0
    for e in ATLAS:
        for r in (0.0, 1.0, 5.0, 24.4, 40.0):
            # brute force, written out from scratch rather than shared code
            rad = e.theta_deg * math.pi / 180.0
            ox = r * e.a * math.sin(rad)
            oy = r * e.a * math.cos(rad)
            (px, py), (mx, my) = endpoint_coords(e, r)
            assert abs(px - (e.center.x + ox)) < 1e-12
            assert abs(py - (e.center.y + oy)) < 1e-12
            assert abs(mx - (e.center.x - ox)) < 1e-12
            assert abs(my - (e.center.y - oy)) < 1e-12
            # midpoint and separation laws
            assert abs((px + mx) / 2 - e.center.x) < 1e-15
            assert abs((py + my) / 2 - e.center.y) < 1e-15
            sep = math.hypot(px - mx, py - my)
            assert abs(sep - 2 * r * e.a) <= 1e-12 * (2 * r * e.a)
            checked += 1
    elapsed = time.perf_counter() - t0
    _report(
        "endpoint formula oracle", f"{checked} (ellipse, r) combinations", elapsed, 1.0
    )


def test_gamut_accounting():
    """Displayable-center census, 64-item sweep ledger, prefix-interval law."""
    t0 = time.perf_counter()
    ranked = rank_displayable(ATLAS, 0.4)
    displayable = sorted(e.id for e, _ in ranked)
    assert len(displayable) >= 8

    sset = default_stimulus_set()
    assert len(sset.pairs) + len(sset.rejected) == 64

    for e in ATLAS:
        seen_bad = False
        for i in range(1000):
            if _pair_ok(e, 50.0 * i / 999.0, 0.4):
                assert not seen_bad, f"gamut interval has a gap for ellipse {e.id}"
            else:
                seen_bad = True
    elapsed = time.perf_counter() - t0
    _report(
        "gamut accounting",
        f"{len(displayable)} displayable centers {displayable}; "
        f"{len(sset.pairs)} pairs + {len(sset.rejected)} rejected = 64 "
        f"(reference experiment used 46 of an unpublished grid; informative only); "
        f"prefix interval holds on 25x1000 samples",
        elapsed,
        5.0,
    )


def test_threshold_recovery():
    """Synthetic binomial observer at alpha=24.4: recovered within +/-5%."""
    t0 = time.perf_counter()
    alpha_true, beta_true = 24.4, 0.3
    rng = np.random.default_rng(42)
    bins = []
    for r in np.linspace(1.0, 40.0, 8):
        p = 1.0 / (1.0 + math.exp(-beta_true * (r - alpha_true)))
        bins.append(ObservationBin(float(r), 200, int(rng.binomial(200, p))))
    curve = fit_sigmoid(bins)
    assert curve.converged
    err = abs(curve.alpha - alpha_true) / alpha_true
    assert err <= 0.05
    assert threshold_at(curve, 0.5) == curve.alpha  # exact, logit(0.5) == 0
    elapsed = time.perf_counter() - t0
    _report(
        "threshold recovery",
        f"alpha {curve.alpha:.3f} vs 24.4 ({100 * err:.2f}% error), "
        f"threshold_at(0.5) exact",
        elapsed,
        1.0,
    )


def test_end_to_end_simulation(tmp_path):
    """92-trial schedule, step observer at r=24.4, bracketed threshold,
    zero false alarms, byte-identical session round trip."""
    t0 = time.perf_counter()
    result = run_simulation(tmp_path, n_pairs=46, n_catch=46, seed=0, step_r=24.4)
    assert result.checks["trial_count"], "schedule is not 46+46=92 trials"
    assert result.checks["fit_converged"]
    assert result.checks["threshold_bracketed"], (
        f"threshold {result.report['threshold_50']} outside {result.bracket}"
    )
    assert result.checks["zero_false_alarms"]
    assert result.checks["session_round_trip"]
    elapsed = time.perf_counter() - t0
    _report(
        "end-to-end simulation",
        f"threshold_50 {result.report['threshold_50']:.3f} in "
        f"({result.bracket[0]:.3f}, {result.bracket[1]:.3f}), "
        f"false alarms {result.report['n_false_alarm']}/46, files round-trip",
        elapsed,
        5.0,
    )


def test_human_data_sanity():
    """Fit is order-invariant, monotone, and safe on degenerate data."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    rs = np.linspace(1.0, 40.0, 8)
    bins = [
        ObservationBin(
            float(r), 50,
            int(rng.binomial(50, 1.0 / (1.0 + math.exp(-0.3 * (r - 24.4))))),
        )
        for r in rs
    ]

    reference = fit_sigmoid(bins)
    shuffled = bins[:]
    random.Random(3).shuffle(shuffled)
    assert abs(fit_sigmoid(shuffled).log_likelihood - reference.log_likelihood) < 1e-9

    split = [ObservationBin(bins[0].r, 20, min(bins[0].n_detected, 20)),
             ObservationBin(bins[0].r, 30, bins[0].n_detected - min(bins[0].n_detected, 20))]
    assert abs(fit_sigmoid(split + bins[1:]).log_likelihood - reference.log_likelihood) < 1e-9

    probs = [reference.probability(r) for r in np.linspace(0, 50, 100)]
    assert all(b >= a for a, b in zip(probs, probs[1:]))

    flat = fit_sigmoid([ObservationBin(float(r), 10, 0) for r in rs])
    assert flat.converged is False and math.isnan(flat.alpha)

    elapsed = time.perf_counter() - t0
    _report(
        "human-data sanity",
        "order-invariant, split-invariant, monotone, degenerate-safe",
        elapsed,
        5.0,
    )
