// DOM bootstrap: calibration screen, fullscreen stimulus square, keyboard,
// frame loop. All behavior lives in the imported modules; this file only
// wires them to the page.

import { ApiClient, Rgb8 } from "./api.js";
import { ExperimentApp } from "./app.js";
import { CREDIT_CARD_WIDTH_CM, pxPerCmFromRuler, squarePx } from "./calibration.js";
import { RefreshEstimator } from "./refresh.js";

const $ = (id: string) => document.getElementById(id) as HTMLElement;

const api = new ApiClient("");
const estimator = new RefreshEstimator();

function setSquareColor(color: Rgb8): void {
  $("stim").style.backgroundColor = `rgb(${color[0]}, ${color[1]}, ${color[2]})`;
}

async function boot(): Promise<void> {
  const meta = await api.session();
  $("participant").textContent = meta.participant_label || "(unlabeled)";
  $("progress").textContent = `${meta.answered.length}/${meta.n_trials} answered`;

  // Calibration: drag the slider until the on-screen bar matches a credit
  // card held against the display. Skipped when the server already knows
  // the pixel pitch.
  const slider = $("ruler-slider") as HTMLInputElement;
  const bar = $("ruler-bar");
  const updateBar = () => {
    bar.style.width = `${slider.value}px`;
    $("ruler-label").textContent =
      `${slider.value} px over ${CREDIT_CARD_WIDTH_CM} cm`;
  };
  slider.addEventListener("input", updateBar);
  updateBar();
  if (meta.square_px !== null) {
    $("calibration").classList.add("hidden");
  }

  $("start").addEventListener("click", async () => {
    const pxCm =
      meta.px_per_cm ?? pxPerCmFromRuler(parseFloat(slider.value));
    const edge = meta.square_px ?? squarePx(meta.square_cm, pxCm);
    const stim = $("stim");
    stim.style.width = `${edge}px`;
    stim.style.height = `${edge}px`;

    $("setup").classList.add("hidden");
    $("stage").classList.remove("hidden");
    await document.documentElement.requestFullscreen().catch(() => undefined);

    // measure the refresh rate for ~1 s before trials begin
    await new Promise<void>((done) => {
      const warm = (t: number) => {
        estimator.frame(t);
        if (estimator.sampleCount < 60) requestAnimationFrame(warm);
        else done();
      };
      requestAnimationFrame(warm);
    });
    const refreshHz = estimator.estimateHz() ?? 60;
    $("refresh").textContent = `${refreshHz.toFixed(1)} Hz display`;

    const app = new ExperimentApp(api, refreshHz, {
      render: setSquareColor,
      showBreak: () => {
        $("break-screen").classList.remove("hidden");
      },
      showDone: (report) => {
        $("stage").classList.add("hidden");
        $("done").classList.remove("hidden");
        $("report").textContent = report
          ? report.converged && report.threshold_50 !== null
            ? `threshold r50 = ${report.threshold_50.toFixed(1)}   ` +
              `false alarms ${report.n_false_alarm}/${report.n_catch}` +
              (report.suspect ? "   (suspect session)" : "")
            : "fit did not converge; see the analysis CLI"
          : "session saved; analysis pending on the server";
      },
      warn: (active) => $("warning").classList.toggle("hidden", !active),
      now: () => performance.now(),
    });

    window.addEventListener("keydown", (ev) => {
      if (ev.key === " ") ev.preventDefault();
      if (ev.key === " " && app.state === "break") {
        $("break-screen").classList.add("hidden");
      }
      void app.key(ev.key);
    });

    const loop = (t: number) => {
      estimator.frame(t);
      app.frame(t);
      if (app.state !== "done") requestAnimationFrame(loop);
    };
    await app.start();
    requestAnimationFrame(loop);
  });
}

void boot();
