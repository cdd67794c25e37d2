"""Experiment orchestration: schedules, response records, analysis.

A schedule interleaves vibration trials (one per stimulus pair) with catch
trials (static single colors, used to measure false-alarm responding) in a
seeded shuffle, inserting a rest break after every fifth trial.  Responses
append to a JSON-lines session file, one canonical-JSON record per line with
a header line first, so a crashed session can resume and files round-trip
byte-identically.

Catch stimuli reuse the fused color of a pair, keeping catch and vibration
trials visually matched in mean color.  Trials are self-paced: a stimulus
stays up until the observer answers.
"""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import dataclass, replace
from pathlib import Path

from .colorimetry import EncodedSRGB
from .macadam import builtin_atlas
from .pairs import (
    CenterOutOfGamut,
    ColorVibrationPair,
    DEFAULT_GRID_SIZE,
    DEFAULT_LUMINANCE,
    R_CAP,
    StimulusSet,
    build_stimulus_set,
    default_r_grid,
    max_in_gamut_r,
    pair_from_dict,
    pair_to_dict,
    rank_displayable,
)
from .psychometrics import (
    CatchReport,
    ObservationBin,
    PsychometricCurve,
    catch_report,
    fit_sigmoid,
    make_report,
)

SCHEMA_VERSION = 1

# Alternation at 30 Hz = one color per frame on a 60 Hz display, comfortably
# above the ~25 Hz critical color fusion frequency.
DEFAULT_ALTERNATION_HZ = 30.0
DEFAULT_SQUARE_CM = 15.0
DEFAULT_DISTANCE_CM = 60.0
BREAK_EVERY = 5


class EmptyStimulusSet(ValueError):
    pass


class DuplicateResponse(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


class IncompleteSession(ValueError):
    pass


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, no whitespace, strict floats."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


# --- configuration ----------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    """Knobs for stimulus construction and presentation.

    colors: "auto8" picks the eight ellipses with the largest in-gamut
    amplitude reach; otherwise an explicit tuple of atlas ids.  r_grid:
    "auto" builds each color's amplitude grid from its own gamut reach;
    otherwise an explicit {id: amplitudes} mapping.  catch_count None means
    one catch trial per pair.
    """

    Y: float = DEFAULT_LUMINANCE
    colors: str | tuple[int, ...] = "auto8"
    r_grid: str | dict[int, tuple[float, ...]] = "auto"
    catch_count: int | None = None
    seed: int = 0
    alternation_hz: float = DEFAULT_ALTERNATION_HZ
    square_cm: float = DEFAULT_SQUARE_CM
    distance_cm: float = DEFAULT_DISTANCE_CM
    px_per_cm: float | None = None

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "Y": self.Y,
            "colors": self.colors if self.colors == "auto8" else list(self.colors),
            "r_grid": self.r_grid
            if self.r_grid == "auto"
            else {str(k): list(v) for k, v in sorted(self.r_grid.items())},
            "catch_count": self.catch_count,
            "seed": self.seed,
            "alternation_hz": self.alternation_hz,
            "square_cm": self.square_cm,
            "distance_cm": self.distance_cm,
            "display": {"px_per_cm": self.px_per_cm},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        colors = d.get("colors", "auto8")
        r_grid = d.get("r_grid", "auto")
        return cls(
            Y=d.get("Y", DEFAULT_LUMINANCE),
            colors=colors if colors == "auto8" else tuple(colors),
            r_grid=r_grid
            if r_grid == "auto"
            else {int(k): tuple(v) for k, v in r_grid.items()},
            catch_count=d.get("catch_count"),
            seed=d.get("seed", 0),
            alternation_hz=d.get("alternation_hz", DEFAULT_ALTERNATION_HZ),
            square_cm=d.get("square_cm", DEFAULT_SQUARE_CM),
            distance_cm=d.get("distance_cm", DEFAULT_DISTANCE_CM),
            px_per_cm=d.get("display", {}).get("px_per_cm"),
        )

    def hash(self) -> str:
        return hashlib.sha256(canonical_json(self.to_dict()).encode()).hexdigest()


def load_config(path: str | Path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as f:
        return ExperimentConfig.from_dict(json.load(f))


def stimulus_set_from_config(cfg: ExperimentConfig) -> StimulusSet:
    """Resolve a config into a concrete stimulus set."""
    atlas = builtin_atlas()
    if cfg.colors == "auto8":
        chosen = [e for e, _ in rank_displayable(atlas, cfg.Y)[:8]]
    else:
        by_id = {e.id: e for e in atlas}
        chosen = [by_id[nid] for nid in cfg.colors]

    if cfg.r_grid == "auto":
        grid = {}
        for e in chosen:
            try:
                grid[e.id] = default_r_grid(max_in_gamut_r(e, cfg.Y))
            except CenterOutOfGamut:
                # undisplayable center: keep the requested color in the
                # ledger by attempting a stock grid (all will be rejected)
                grid[e.id] = default_r_grid(R_CAP / 0.95, DEFAULT_GRID_SIZE)
    else:
        grid = {nid: list(rs) for nid, rs in cfg.r_grid.items()}
    return build_stimulus_set(chosen, grid, cfg.Y)


# --- schedule ----------------------------------------------------------------

@dataclass(frozen=True)
class Trial:
    """One presentation: a vibration pair or a static catch color."""

    index: int
    kind: str
    pair: ColorVibrationPair | None = None
    catch_color: EncodedSRGB | None = None
    break_after: bool = False

    def __post_init__(self):
        if self.kind == "vibration":
            ok = self.pair is not None and self.catch_color is None
        elif self.kind == "catch":
            ok = self.pair is None and self.catch_color is not None
        else:
            raise ValueError(f"unknown trial kind {self.kind!r}")
        if not ok:
            raise ValueError(f"{self.kind} trial must carry exactly its own payload")


@dataclass(frozen=True)
class Schedule:
    trials: tuple[Trial, ...]
    seed: int
    alternation_hz: float = DEFAULT_ALTERNATION_HZ
    square_cm: float = DEFAULT_SQUARE_CM
    distance_cm: float = DEFAULT_DISTANCE_CM

    @property
    def n_trials(self) -> int:
        return len(self.trials)


def build_schedule(
    sset: StimulusSet,
    catch_count: int,
    seed: int,
    *,
    alternation_hz: float = DEFAULT_ALTERNATION_HZ,
    square_cm: float = DEFAULT_SQUARE_CM,
    distance_cm: float = DEFAULT_DISTANCE_CM,
) -> Schedule:
    """Shuffle vibration and catch trials together with a seeded PRNG.

    Catch stimuli are the fused colors of the pairs, cycled if catch_count
    exceeds the pair count.  A break follows every fifth trial except the
    last.
    """
    if catch_count < 0:
        raise ValueError(f"catch_count must be >= 0, got {catch_count}")
    if not sset.pairs:
        raise EmptyStimulusSet("stimulus set has no displayable pairs")

    items: list[tuple[str, object]] = [("vibration", p) for p in sset.pairs]
    items += [
        ("catch", sset.pairs[i % len(sset.pairs)].fused_srgb)
        for i in range(catch_count)
    ]
    random.Random(seed).shuffle(items)

    n = len(items)
    trials = []
    for i, (kind, payload) in enumerate(items):
        brk = (i + 1) % BREAK_EVERY == 0 and i + 1 < n
        if kind == "vibration":
            trials.append(Trial(i, kind, pair=payload, break_after=brk))
        else:
            trials.append(Trial(i, kind, catch_color=payload, break_after=brk))
    return Schedule(
        tuple(trials),
        seed,
        alternation_hz=alternation_hz,
        square_cm=square_cm,
        distance_cm=distance_cm,
    )


def schedule_to_dict(s: Schedule) -> dict:
    out = []
    for t in s.trials:
        d = {"index": t.index, "kind": t.kind, "break_after": t.break_after}
        if t.kind == "vibration":
            d["pair"] = pair_to_dict(t.pair)
        else:
            d["color"] = list(t.catch_color.codes())
        out.append(d)
    return {
        "schema_version": SCHEMA_VERSION,
        "seed": s.seed,
        "alternation_hz": s.alternation_hz,
        "square_cm": s.square_cm,
        "distance_cm": s.distance_cm,
        "trials": out,
    }


def schedule_from_dict(d: dict) -> Schedule:
    trials = []
    for td in d["trials"]:
        if td["kind"] == "vibration":
            trials.append(
                Trial(td["index"], "vibration", pair=pair_from_dict(td["pair"]),
                      break_after=td["break_after"])
            )
        else:
            trials.append(
                Trial(td["index"], "catch", catch_color=EncodedSRGB(*td["color"]),
                      break_after=td["break_after"])
            )
    return Schedule(
        tuple(trials),
        d["seed"],
        alternation_hz=d["alternation_hz"],
        square_cm=d["square_cm"],
        distance_cm=d["distance_cm"],
    )


def save_schedule(s: Schedule, path: str | Path) -> None:
    Path(path).write_text(canonical_json(schedule_to_dict(s)) + "\n", encoding="utf-8")


def load_schedule(path: str | Path) -> Schedule:
    with open(path, encoding="utf-8") as f:
        return schedule_from_dict(json.load(f))


# --- responses ----------------------------------------------------------------

@dataclass(frozen=True)
class Response:
    trial_index: int
    detected: bool
    response_ms: int
    achieved_hz: float | None = None  # UI-reported swap cadence, for audit


@dataclass(frozen=True)
class SessionRecord:
    """Responses collected against one schedule (referenced by seed + config hash)."""

    seed: int
    config_hash: str
    n_trials: int
    participant_label: str = ""
    responses: tuple[Response, ...] = ()

    @property
    def answered(self) -> frozenset[int]:
        return frozenset(r.trial_index for r in self.responses)

    @property
    def completed(self) -> bool:
        return len(self.responses) == self.n_trials


def record_response(
    rec: SessionRecord,
    trial_index: int,
    detected: bool,
    response_ms: int,
    achieved_hz: float | None = None,
) -> SessionRecord:
    """Append one response, enforcing bounds and single-answer-per-trial."""
    if not 0 <= trial_index < rec.n_trials:
        raise IndexOutOfRange(
            f"trial_index {trial_index} outside 0..{rec.n_trials - 1}"
        )
    if trial_index in rec.answered:
        raise DuplicateResponse(f"trial {trial_index} already answered")
    resp = Response(trial_index, bool(detected), int(response_ms), achieved_hz)
    return replace(rec, responses=rec.responses + (resp,))


def analyze_session(
    rec: SessionRecord, schedule: Schedule
) -> tuple[PsychometricCurve, CatchReport]:
    """Bin vibration responses by exact r, fit the sigmoid, tally catches."""
    if not rec.completed:
        raise IncompleteSession(
            f"{len(rec.responses)} of {rec.n_trials} trials answered"
        )
    if rec.n_trials != schedule.n_trials or rec.seed != schedule.seed:
        raise ValueError("session record does not match this schedule")

    by_r: dict[float, list[int]] = {}
    flat: list[tuple[bool, bool]] = []
    for resp in sorted(rec.responses, key=lambda x: x.trial_index):
        trial = schedule.trials[resp.trial_index]
        if trial.kind == "vibration":
            tally = by_r.setdefault(trial.pair.r, [0, 0])
            tally[0] += 1
            tally[1] += int(resp.detected)
            flat.append((False, resp.detected))
        else:
            flat.append((True, resp.detected))

    bins = [ObservationBin(r, n, k) for r, (n, k) in sorted(by_r.items())]
    return fit_sigmoid(bins), catch_report(flat)


# --- JSONL persistence ---------------------------------------------------------

def _response_to_dict(r: Response) -> dict:
    d = {
        "type": "response",
        "trial_index": r.trial_index,
        "detected": r.detected,
        "response_ms": r.response_ms,
    }
    if r.achieved_hz is not None:
        d["achieved_hz"] = r.achieved_hz
    return d


class SessionStore:
    """Append-only JSON-lines store for one session.

    Line 1 is a header carrying the schedule reference; each later line is
    one response.  All lines are canonical JSON, so a load/rewrite cycle
    reproduces the file byte for byte.
    """

    def __init__(self, path: str | Path, header: dict, record: SessionRecord):
        self.path = Path(path)
        self.header = header
        self.record = record

    @classmethod
    def create(
        cls,
        path: str | Path,
        schedule: Schedule,
        config_hash: str,
        participant_label: str = "",
        created_utc: str | None = None,
    ) -> "SessionStore":
        path = Path(path)
        if path.exists():
            raise FileExistsError(f"{path} already exists; use open() to resume")
        header = {
            "type": "header",
            "schema_version": SCHEMA_VERSION,
            "seed": schedule.seed,
            "config_hash": config_hash,
            "n_trials": schedule.n_trials,
            "participant_label": participant_label,
            "created_utc": created_utc
            or time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        }
        record = SessionRecord(
            seed=schedule.seed,
            config_hash=config_hash,
            n_trials=schedule.n_trials,
            participant_label=participant_label,
        )
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(canonical_json(header) + "\n")
        return cls(path, header, record)

    @classmethod
    def open(cls, path: str | Path) -> "SessionStore":
        path = Path(path)
        with open(path, encoding="utf-8") as f:
            lines = [json.loads(line) for line in f if line.strip()]
        if not lines or lines[0].get("type") != "header":
            raise ValueError(f"{path} is not a session file (missing header line)")
        header = lines[0]
        record = SessionRecord(
            seed=header["seed"],
            config_hash=header["config_hash"],
            n_trials=header["n_trials"],
            participant_label=header.get("participant_label", ""),
        )
        for d in lines[1:]:
            if d.get("type") != "response":
                continue
            record = record_response(
                record,
                d["trial_index"],
                d["detected"],
                d["response_ms"],
                d.get("achieved_hz"),
            )
        return cls(path, header, record)

    def append(
        self,
        trial_index: int,
        detected: bool,
        response_ms: int,
        achieved_hz: float | None = None,
    ) -> SessionRecord:
        """Validate, persist, and apply one response."""
        rec = record_response(
            self.record, trial_index, detected, response_ms, achieved_hz
        )
        with open(self.path, "a", encoding="utf-8") as f:
            f.write(canonical_json(_response_to_dict(rec.responses[-1])) + "\n")
        self.record = rec
        return rec

    def rewrite(self, path: str | Path) -> None:
        """Re-serialize header + responses; equals the original byte for byte."""
        with open(path, "w", encoding="utf-8") as f:
            f.write(canonical_json(self.header) + "\n")
            for r in self.record.responses:
                f.write(canonical_json(_response_to_dict(r)) + "\n")


# --- end-to-end synthetic run ---------------------------------------------------

@dataclass(frozen=True)
class SimulationResult:
    workdir: Path
    schedule_path: Path
    session_path: Path
    report: dict
    bracket: tuple[float, float]
    checks: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _subset_pairs(sset: StimulusSet, n_pairs: int) -> StimulusSet:
    if len(sset.pairs) < n_pairs:
        raise ValueError(
            f"stimulus set has {len(sset.pairs)} pairs, need {n_pairs}"
        )
    kept = sset.pairs[:n_pairs]
    grid: dict[int, list[float]] = {}
    for p in kept:
        grid.setdefault(p.source_id, []).append(p.r)
    return StimulusSet(kept, (), {k: tuple(v) for k, v in grid.items()}, sset.Y)


def run_simulation(
    workdir: str | Path,
    n_pairs: int = 46,
    n_catch: int = 46,
    seed: int = 0,
    step_r: float = 24.4,
    config: ExperimentConfig | None = None,
) -> SimulationResult:
    """Deterministic end-to-end dry run for CI.

    Builds the stock stimulus set, keeps the first `n_pairs` pairs, schedules
    them with `n_catch` catch trials, answers every trial with a step
    observer (flicker reported iff r > step_r, never on catches), analyzes,
    and self-checks: trial count, threshold bracketed by the grid values
    adjacent to step_r, zero false alarms, and byte-identical session-file
    round trip.
    """
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    cfg = replace(config or ExperimentConfig(), seed=seed)

    full = stimulus_set_from_config(cfg)
    sub = _subset_pairs(full, n_pairs)
    schedule = build_schedule(
        sub,
        n_catch,
        seed,
        alternation_hz=cfg.alternation_hz,
        square_cm=cfg.square_cm,
        distance_cm=cfg.distance_cm,
    )
    schedule_path = workdir / "schedule.json"
    save_schedule(schedule, schedule_path)

    session_path = workdir / "session.jsonl"
    if session_path.exists():
        session_path.unlink()
    store = SessionStore.create(
        session_path, schedule, cfg.hash(), participant_label="step-observer"
    )
    for t in schedule.trials:
        detected = t.kind == "vibration" and t.pair.r > step_r
        store.append(t.index, detected, response_ms=500)

    curve, catch = analyze_session(store.record, schedule)
    report = make_report(curve, catch)
    (workdir / "report.json").write_text(
        canonical_json(report) + "\n", encoding="utf-8"
    )

    rs = sorted({p.r for p in sub.pairs})
    lo = max(r for r in rs if r <= step_r)
    hi = min(r for r in rs if r > step_r)

    reopened = SessionStore.open(session_path)
    round_trip_path = workdir / "session.roundtrip.jsonl"
    reopened.rewrite(round_trip_path)
    byte_identical = round_trip_path.read_bytes() == session_path.read_bytes()

    checks = {
        "trial_count": schedule.n_trials == n_pairs + n_catch,
        "fit_converged": curve.converged,
        "threshold_bracketed": curve.converged and lo < curve.alpha < hi,
        "zero_false_alarms": catch.false_alarm_rate == 0.0,
        "session_round_trip": byte_identical,
    }
    return SimulationResult(
        workdir, schedule_path, session_path, report, (lo, hi), checks
    )
