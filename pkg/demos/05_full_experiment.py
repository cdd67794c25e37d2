"""A whole experiment in library calls: schedule, observers, persist, analyze.

Simulates ten participants answering the same 92-trial schedule (46 vibration
pairs + 46 catches), each with a session file on disk, then pools their
responses per amplitude and fits the detection curve -- the same shape the
aggregate analysis of a real study takes.
"""

import math
import tempfile
from pathlib import Path

import numpy as np

from chromavib import (
    ExperimentConfig,
    ObservationBin,
    SessionStore,
    analyze_session,
    build_schedule,
    catch_report,
    fit_sigmoid,
    make_report,
    stimulus_set_from_config,
    threshold_at,
)
from chromavib.session import _subset_pairs, save_schedule

TRUE_ALPHA, TRUE_BETA = 24.4, 0.3   # the simulated population's threshold
N_PARTICIPANTS = 10

cfg = ExperimentConfig(seed=7)
sset = stimulus_set_from_config(cfg)
sub = _subset_pairs(sset, 46)
schedule = build_schedule(sub, 46, seed=cfg.seed)
print(f"schedule: {schedule.n_trials} trials, seed {schedule.seed}, "
      f"{schedule.alternation_hz} Hz alternation, "
      f"{schedule.square_cm} cm square at {schedule.distance_cm} cm")

workdir = Path(tempfile.mkdtemp(prefix="chromavib_demo_"))
save_schedule(schedule, workdir / "schedule.json")

rng = np.random.default_rng(99)
records = []
for who in range(N_PARTICIPANTS):
    store = SessionStore.create(
        workdir / f"session_p{who:02d}.jsonl", schedule, cfg.hash(),
        participant_label=f"P{who:02d}",
    )
    for t in schedule.trials:
        if t.kind == "vibration":
            p = 1.0 / (1.0 + math.exp(-TRUE_BETA * (t.pair.r - TRUE_ALPHA)))
        else:
            p = 0.02  # occasional stray false alarm
        store.append(t.index, bool(rng.random() < p),
                     response_ms=int(rng.integers(400, 1400)))
    records.append(store.record)

# Single-session analysis of the first participant...
curve1, catch1 = analyze_session(records[0], schedule)
print(f"\nparticipant P00 alone: converged={curve1.converged}"
      + (f", r50={curve1.alpha:.2f}" if curve1.converged else ""))

# ...and the pooled fit across all ten.
by_r: dict[float, list[int]] = {}
flat = []
for rec in records:
    for resp in rec.responses:
        t = schedule.trials[resp.trial_index]
        if t.kind == "vibration":
            tally = by_r.setdefault(t.pair.r, [0, 0])
            tally[0] += 1
            tally[1] += int(resp.detected)
        flat.append((t.kind == "catch", resp.detected))
bins = [ObservationBin(r, n, k) for r, (n, k) in sorted(by_r.items())]
curve = fit_sigmoid(bins)
report = make_report(curve, catch_report(flat))

print(f"\npooled over {N_PARTICIPANTS} participants "
      f"({sum(b.n_trials for b in bins)} vibration trials):")
print(f"  threshold r50: {report['threshold_50']:.2f}   (true {TRUE_ALPHA})")
print(f"  r at 75%:      {threshold_at(curve, 0.75):.2f}")
print(f"  false alarms:  {report['n_false_alarm']}/{report['n_catch']} "
      f"(suspect: {report['suspect']})")

print(f"\nsession files in {workdir}")
print("resume-safe: reopening P00 reproduces its record exactly:",
      SessionStore.open(workdir / "session_p00.jsonl").record == records[0])
