// Full-protocol run against the real session server: a 92-trial schedule
// (46 vibration + 46 catch) answered through the app with a simulated 60 Hz
// display, checking stimulus timing per trial and exactly-once delivery.

import { spawn, execFileSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ExperimentApp } from "../src/app.js";
import { median } from "../src/refresh.js";

const PY_BUILD = `
import sys
from chromavib.session import (ExperimentConfig, build_schedule, save_schedule,
                               stimulus_set_from_config, _subset_pairs)
cfg = ExperimentConfig(seed=123)
sub = _subset_pairs(stimulus_set_from_config(cfg), 46)
save_schedule(build_schedule(sub, 46, cfg.seed), sys.argv[1] + "/schedule.json")
`;

let workdir: string;
let server: ChildProcess;
let base: string;

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), "chromavib-ui-"));
  execFileSync("python3", ["-c", PY_BUILD, workdir]);
  server = spawn("python3", [
    "-m", "chromavib.cli", "serve",
    "--schedule", join(workdir, "schedule.json"),
    "--session", join(workdir, "session.jsonl"),
    "--participant", "ui-integration",
    "--port", "0",
  ]);
  base = await new Promise<string>((resolve, reject) => {
    let buf = "";
    const onData = (chunk: Buffer) => {
      buf += chunk.toString();
      const m = buf.match(/serving on (http:\/\/[\d.]+:\d+)\//);
      if (m) resolve(m[1]);
    };
    server.stdout!.on("data", onData);
    server.stderr!.on("data", (c: Buffer) => (buf += c.toString()));
    server.on("exit", (code) => reject(new Error(`server died: ${code}\n${buf}`)));
    setTimeout(() => reject(new Error(`server never came up:\n${buf}`)), 15000);
  });
}, 20000);

afterAll(() => {
  server?.kill();
  rmSync(workdir, { recursive: true, force: true });
});

describe("92-trial session against the live server", () => {
  it("runs the whole protocol with correct timing and delivery", async () => {
    const api = new ApiClient(base);
    const clock = { t: 5000 };
    let warnings = 0;
    const app = new ExperimentApp(api, 60, {
      render: () => undefined,
      showBreak: () => undefined,
      showDone: () => undefined,
      warn: (on) => on && warnings++,
      now: () => clock.t,
    });
    const pump = (frames: number) => {
      for (let i = 0; i < frames; i++) {
        clock.t += 1000 / 60;
        app.frame(clock.t);
      }
    };

    const meta = await api.session();
    expect(meta.n_trials).toBe(92);
    expect(meta.answered).toEqual([]);

    await app.start();
    let vibrationTrials = 0;
    let catchTrials = 0;
    let guard = 0;
    while (app.state !== "done" && guard++ < 300) {
      if (app.state === "break") {
        await app.key(" ");
        continue;
      }
      const runner = app.runner!;
      pump(24); // ~400 ms of stimulus
      if (runner.payload.kind === "catch") {
        catchTrials++;
        expect(runner.engine.swapCount).toBe(0);
      } else {
        vibrationTrials++;
        const med = median(runner.engine.swapIntervalsMs());
        expect(med).toBeGreaterThan(16.7 - 2);
        expect(med).toBeLessThan(16.7 + 2);
      }
      // arbitrary but deterministic observer; catches always "no flicker"
      const detected =
        runner.payload.kind === "vibration" && runner.payload.trial_index % 3 === 0;
      await app.key(detected ? "f" : "j");
    }

    expect(app.state).toBe("done");
    expect(vibrationTrials).toBe(46);
    expect(catchTrials).toBe(46);
    expect(warnings).toBe(0); // 60 Hz display achieves the full 30 Hz

    // every response arrived exactly once
    const after = await api.session();
    expect(after.completed).toBe(true);
    expect(after.answered).toEqual([...Array(92).keys()]);

    // a replayed response is recognized as a duplicate, not re-recorded
    const replay = await api.postResponse(
      { trial_index: 0, detected: true, response_ms: 1 },
      0,
      0,
    );
    expect(replay).toBe("duplicate");

    const report = await api.report();
    expect(report.n_catch).toBe(46);
    expect(report.false_alarm_rate).toBe(0);
  }, 30000);

  it("warns when the display cannot reach 25 Hz alternation", async () => {
    // separate app on a fake 40 Hz panel, driving one vibration trial dry
    // (no postResponse: we only inspect the warning surface)
    const api = new ApiClient(base);
    let vibIndex = -1;
    for (let i = 0; i < 92 && vibIndex < 0; i++) {
      const t = await api.trial(i);
      if (t.kind === "vibration") vibIndex = i;
    }
    const payload = await api.trial(vibIndex);
    const { TrialRunner } = await import("../src/trial.js");
    const clock = { t: 0 };
    const runner = new TrialRunner(payload, 40, {
      render: () => undefined,
      now: () => clock.t,
    });
    for (let i = 0; i < 80; i++) {
      clock.t += 25; // 40 Hz frames
      runner.frame(clock.t);
    }
    expect(runner.engine.achievedAlternationHz()!).toBeCloseTo(20, 1);
    expect(runner.cadenceWarning).toBe(true);
  });
});
