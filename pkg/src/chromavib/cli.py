"""Command-line entry points: atlas, pairs, schedule, serve, analyze, simulate."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .macadam import atlas_table
from .pairs import stimulus_set_from_dict, stimulus_set_to_dict
from .psychometrics import curve_csv, make_report
from .server import ServerContext, serve_forever
from .session import (
    ExperimentConfig,
    SessionStore,
    analyze_session,
    build_schedule,
    canonical_json,
    load_config,
    load_schedule,
    run_simulation,
    save_schedule,
    stimulus_set_from_config,
)


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_cfg(path: str | None) -> ExperimentConfig:
    return load_config(path) if path else ExperimentConfig()


def cmd_atlas(args) -> int:
    _write_or_print(atlas_table(), args.out)
    return 0


def cmd_pairs(args) -> int:
    cfg = _load_cfg(args.config)
    sset = stimulus_set_from_config(cfg)
    _write_or_print(canonical_json(stimulus_set_to_dict(sset)) + "\n", args.out)
    print(
        f"{len(sset.pairs)} pairs, {len(sset.rejected)} rejected "
        f"(colors {sset.color_ids}, Y={sset.Y})",
        file=sys.stderr,
    )
    return 0


def cmd_schedule(args) -> int:
    cfg = _load_cfg(args.config)
    if args.pairs:
        with open(args.pairs, encoding="utf-8") as f:
            sset = stimulus_set_from_dict(json.load(f))
    else:
        sset = stimulus_set_from_config(cfg)
    catch = cfg.catch_count if cfg.catch_count is not None else len(sset.pairs)
    schedule = build_schedule(
        sset,
        catch,
        cfg.seed,
        alternation_hz=cfg.alternation_hz,
        square_cm=cfg.square_cm,
        distance_cm=cfg.distance_cm,
    )
    save_schedule(schedule, args.out)
    print(
        f"{schedule.n_trials} trials ({len(sset.pairs)} vibration + {catch} catch) "
        f"-> {args.out}",
        file=sys.stderr,
    )
    return 0


def cmd_serve(args) -> int:
    cfg = _load_cfg(args.config)
    schedule = load_schedule(args.schedule)
    session_path = Path(args.session)
    if session_path.exists():
        store = SessionStore.open(session_path)
        print(
            f"resuming {session_path} ({len(store.record.responses)}"
            f"/{store.record.n_trials} answered)",
            file=sys.stderr,
        )
    else:
        store = SessionStore.create(
            session_path, schedule, cfg.hash(), participant_label=args.participant
        )
    ctx = ServerContext(
        schedule=schedule,
        store=store,
        px_per_cm=cfg.px_per_cm,
        ui_dir=Path(args.ui).resolve() if args.ui else None,
    )
    serve_forever(ctx, args.host, args.port)
    return 0


def cmd_analyze(args) -> int:
    schedule = load_schedule(args.schedule)
    store = SessionStore.open(args.session)
    curve, catch = analyze_session(store.record, schedule)
    report = make_report(curve, catch)
    text = canonical_json(report) + "\n"
    _write_or_print(text, args.out)
    if args.out:
        print(text, end="")
    if args.csv:
        rs = sorted({t.pair.r for t in schedule.trials if t.kind == "vibration"})
        grid = np.linspace(min(rs), max(rs), 100)
        Path(args.csv).write_text(curve_csv(curve, grid), encoding="utf-8")
    return 0


def cmd_simulate(args) -> int:
    result = run_simulation(
        args.workdir,
        n_pairs=args.pairs_count,
        n_catch=args.catch_count,
        seed=args.seed,
        step_r=args.step_r,
        config=_load_cfg(args.config),
    )
    for name, ok in result.checks.items():
        print(f"[{'PASS' if ok else 'FAIL'}] {name}")
    print(
        f"threshold_50={result.report['threshold_50']} "
        f"bracket=({result.bracket[0]:.4f}, {result.bracket[1]:.4f}) "
        f"false_alarm_rate={result.report['false_alarm_rate']}"
    )
    return 0 if result.ok else 1


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="chromavib",
        description="Color-vibration pair generation and flicker-threshold experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("atlas", help="dump the built-in ellipse table")
    p.add_argument("--out")
    p.set_defaults(func=cmd_atlas)

    p = sub.add_parser("pairs", help="build a stimulus set from a config")
    p.add_argument("--config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("schedule", help="build and save a trial schedule")
    p.add_argument("--config")
    p.add_argument("--pairs", help="use a precomputed stimulus set JSON")
    p.add_argument("--out", default="schedule.json")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("serve", help="host the session API and static UI")
    p.add_argument("--schedule", required=True)
    p.add_argument("--session", required=True)
    p.add_argument("--config")
    p.add_argument("--participant", default="")
    p.add_argument("--ui", help="directory with the browser UI build")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("analyze", help="fit the psychometric curve from a session")
    p.add_argument("--session", required=True)
    p.add_argument("--schedule", required=True)
    p.add_argument("--out")
    p.add_argument("--csv", help="also write a (r, fitted_P) curve CSV")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="synthetic end-to-end run for CI")
    p.add_argument("--workdir", default="simulation")
    p.add_argument("--pairs-count", type=int, default=46)
    p.add_argument("--catch-count", type=int, default=46)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step-r", type=float, default=24.4)
    p.add_argument("--config")
    p.set_defaults(func=cmd_simulate)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
