"""Sigmoid psychometric fitting for flicker-detection data.

Detection probability is modeled as a two-parameter logistic in the vibration
amplitude r,

    P(r) = 1 / (1 + exp(-beta * (r - alpha))),

fit by maximum likelihood under a binomial model on pooled trials (responses
are pooled across observers before fitting, not averaged into proportions).
No lapse or guess parameters: catch trials are excluded from the fit entirely
and summarized separately as a false-alarm rate.

The optimizer is a coarse grid over (alpha, log beta) followed by damped
Newton refinement, which makes the fit deterministic and start-point free.
Log-likelihoods omit the binomial coefficients, so they are invariant under
re-binning trials with the same totals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GRADIENT_TOL = 1e-8
SUSPECT_FALSE_ALARM_RATE = 0.2

# log-slope bounds during refinement; e**15 is already a step function at
# the amplitude scales involved, and exp() stays finite
_LBETA_MIN, _LBETA_MAX = -30.0, 15.0


class NotConverged(ValueError):
    """Threshold queried on a curve whose fit did not converge."""


class NoCatchTrials(ValueError):
    """Catch report requested for a session containing no catch trials."""


@dataclass(frozen=True)
class ObservationBin:
    """Detection counts at one amplitude: n_detected of n_trials saw flicker."""

    r: float
    n_trials: int
    n_detected: int

    def __post_init__(self):
        if self.n_trials < 1:
            raise ValueError(f"n_trials must be >= 1, got {self.n_trials}")
        if not 0 <= self.n_detected <= self.n_trials:
            raise ValueError(
                f"n_detected={self.n_detected} outside [0, {self.n_trials}]"
            )


@dataclass(frozen=True)
class PsychometricCurve:
    """Fitted logistic; alpha is the P=0.5 amplitude, beta > 0 the slope.

    When converged is False (degenerate or unbracketed data) alpha and beta
    may be NaN and must not be interpreted.
    """

    alpha: float
    beta: float
    converged: bool
    log_likelihood: float

    def probability(self, r: float) -> float:
        z = self.beta * (r - self.alpha)
        if z >= 0:
            return 1.0 / (1.0 + math.exp(-z))
        ez = math.exp(z)
        return ez / (1.0 + ez)


@dataclass(frozen=True)
class CatchReport:
    n_catch: int
    n_false_alarm: int
    false_alarm_rate: float


def _loglik(alpha: float, lbeta: float, r, n, k) -> float:
    z = math.exp(lbeta) * (r - alpha)
    # log sigma(z) = -log(1+e^-z); log(1-sigma(z)) = -log(1+e^z)
    return float(np.sum(-k * np.logaddexp(0.0, -z) - (n - k) * np.logaddexp(0.0, z)))


def _grad_hess(alpha: float, lbeta: float, r, n, k):
    beta = math.exp(lbeta)
    z = beta * (r - alpha)
    p = 1.0 / (1.0 + np.exp(-np.clip(z, -700.0, 700.0)))
    resid = k - n * p
    w = n * p * (1.0 - p)
    sum_resid = float(np.sum(resid))
    g = np.array([-beta * sum_resid, float(np.sum(resid * z))])
    h_aa = -beta * beta * float(np.sum(w))
    h_ab = -beta * sum_resid + beta * float(np.sum(w * z))
    h_bb = float(np.sum(resid * z)) - float(np.sum(w * z * z))
    return g, np.array([[h_aa, h_ab], [h_ab, h_bb]])


def _grid_start(r, n, k, n_alpha=101, n_lbeta=61):
    alphas = np.linspace(float(r.min()), float(r.max()), n_alpha)
    lbetas = np.linspace(-4.0, 2.0, n_lbeta)
    z = np.exp(lbetas)[:, None, None] * (r[None, None, :] - alphas[None, :, None])
    ll = np.sum(-k * np.logaddexp(0.0, -z) - (n - k) * np.logaddexp(0.0, z), axis=-1)
    i, j = np.unravel_index(np.argmax(ll), ll.shape)
    return float(alphas[j]), float(lbetas[i])


def _ascent_step(g, hess):
    # Modified Newton: floor the Hessian eigenvalues strictly below zero so
    # the step is always an ascent direction.  Near a regular maximum the
    # Hessian is already negative definite and this is the exact Newton step;
    # on the beta->inf ridge of quasi-separated data it degrades gracefully
    # into a long step along the flat direction.
    evals, evecs = np.linalg.eigh(hess)
    floor = -max(1e-8, 1e-8 * float(np.abs(evals).max()))
    evals = np.minimum(evals, floor)
    return -(evecs @ ((evecs.T @ g) / evals))


def fit_sigmoid(bins: list[ObservationBin]) -> PsychometricCurve:
    """Maximum-likelihood logistic fit over observation bins.

    Needs at least two distinct amplitudes, and data on both sides of 50%
    detection to be trustworthy; otherwise the curve comes back with
    converged=False (all-identical responses additionally flag alpha/beta
    as NaN rather than raising).
    """
    if not bins:
        raise ValueError("no observation bins")
    r = np.array([b.r for b in bins], dtype=float)
    n = np.array([b.n_trials for b in bins], dtype=float)
    k = np.array([b.n_detected for b in bins], dtype=float)

    total_k = float(k.sum())
    if total_k == 0.0 or total_k == float(n.sum()) or len(set(r.tolist())) < 2:
        return PsychometricCurve(math.nan, math.nan, False, math.nan)

    alpha, lbeta = _grid_start(r, n, k)
    grad_norm = math.inf
    for _ in range(300):
        g, hess = _grad_hess(alpha, lbeta, r, n, k)
        grad_norm = float(np.hypot(g[0], g[1]))
        if grad_norm < GRADIENT_TOL:
            break
        step = _ascent_step(g, hess)

        def _trial(t: float) -> tuple[float, float]:
            return (
                float(alpha + t * step[0]),
                float(np.clip(lbeta + t * step[1], _LBETA_MIN, _LBETA_MAX)),
            )

        # backtrack: never accept a step that lowers the likelihood
        current = _loglik(alpha, lbeta, r, n, k)
        t = 1.0
        while t > 1e-12 and _loglik(*_trial(t), r, n, k) < current - 1e-15:
            t *= 0.5
        if t <= 1e-12:
            break  # numerically flat in every useful direction
        alpha, lbeta = _trial(t)

    props = k / n
    bracketed = bool(np.any(props < 0.5)) and bool(np.any(props > 0.5))
    converged = grad_norm < GRADIENT_TOL and bracketed
    return PsychometricCurve(
        alpha, math.exp(lbeta), converged, _loglik(alpha, lbeta, r, n, k)
    )


def threshold_at(curve: PsychometricCurve, p: float) -> float:
    """Amplitude detected with probability p; threshold_at(c, 0.5) == alpha."""
    if not curve.converged:
        raise NotConverged("cannot read thresholds off a non-converged fit")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0, 1), got {p}")
    return curve.alpha + math.log(p / (1.0 - p)) / curve.beta


def catch_report(trials: list[tuple[bool, bool]]) -> CatchReport:
    """Summarize (is_catch, detected) outcomes into a false-alarm rate."""
    n_catch = sum(1 for is_catch, _ in trials if is_catch)
    if n_catch == 0:
        raise NoCatchTrials("session contains no catch trials")
    n_fa = sum(1 for is_catch, detected in trials if is_catch and detected)
    return CatchReport(n_catch, n_fa, n_fa / n_catch)


def make_report(
    curve: PsychometricCurve,
    catch: CatchReport,
    suspect_threshold: float = SUSPECT_FALSE_ALARM_RATE,
) -> dict:
    """Analysis summary as a JSON-safe dict (non-finite floats become None)."""

    def _num(v: float):
        return v if isinstance(v, (int, float)) and math.isfinite(v) else None

    return {
        "schema_version": 1,
        "alpha": _num(curve.alpha),
        "beta": _num(curve.beta),
        "converged": curve.converged,
        "log_likelihood": _num(curve.log_likelihood),
        "threshold_50": _num(curve.alpha) if curve.converged else None,
        "n_catch": catch.n_catch,
        "n_false_alarm": catch.n_false_alarm,
        "false_alarm_rate": catch.false_alarm_rate,
        "suspect": catch.false_alarm_rate > suspect_threshold,
        "suspect_threshold": suspect_threshold,
    }


def curve_csv(curve: PsychometricCurve, r_values) -> str:
    """Two-column CSV (r, fitted_P) for plotting."""
    lines = ["r,fitted_P"]
    for r in r_values:
        lines.append(f"{float(r):.6g},{curve.probability(float(r)):.8g}")
    return "\n".join(lines) + "\n"
