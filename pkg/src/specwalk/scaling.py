"""Envelope extraction, decay-law fitting, and the quantum/classical ratio.

The quantum return oscillates, so its decay is read off the envelope of
local maxima. Decay exponents come from least squares in log-log space;
the stretched-exponential model fixes the stretch at 1/2 because a free
three-parameter fit over a decade of data is ill-conditioned. The
efficiency ratio divides the log of the quantum envelope by the log of
the classical return: it equals the exponent ratio for power laws and
tends to sqrt(2) for the Lifshits family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_HALF_WIDTH = 3
DEFAULT_TAIL_FRACTION = 0.1


@dataclass(frozen=True)
class Envelope:
    """Local maxima (times, values) of a sampled series."""

    times: np.ndarray
    values: np.ndarray
    half_width: int


def extract_envelope(times, values, half_width: int = DEFAULT_HALF_WIDTH) -> Envelope:
    """Keep points beating every neighbor within half_width grid indices.

    Comparison is strict against earlier neighbors and non-strict against
    later ones, so a plateau keeps its first point and ties resolve to the
    earliest occurrence. A monotone non-increasing series keeps only its
    initial point. The result is never empty: the first occurrence of the
    global maximum always qualifies.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if half_width < 1:
        raise ValueError(f"half_width must be >= 1, got {half_width}")
    n = len(v)
    if n < 2 * half_width + 1:
        raise ValueError(
            f"series of {n} points is too short for half_width={half_width}"
        )
    keep = []
    for i in range(n):
        left = v[max(0, i - half_width):i]
        right = v[i + 1:i + 1 + half_width]
        if (left < v[i]).all() and (right <= v[i]).all():
            keep.append(i)
    if not keep:  # unreachable for finite data; safety net
        keep = [int(np.argmax(v))]
    idx = np.array(keep)
    return Envelope(times=t[idx], values=v[idx], half_width=half_width)


# -- decay-law fits -----------------------------------------------------------

@dataclass(frozen=True)
class PowerLawFit:
    """ln v = exponent * ln t + intercept over the window."""

    exponent: float
    intercept: float
    stderr: float
    residual: float
    window: tuple[float, float]
    npoints: int


@dataclass(frozen=True)
class StretchedExpFit:
    """ln v = prefactor_exponent * ln t - decay_coeff * t**stretch + intercept."""

    prefactor_exponent: float
    decay_coeff: float
    intercept: float
    stderr: float
    residual: float
    window: tuple[float, float]
    npoints: int
    stretch: float = 0.5
    warning: str | None = None


def _fit_window(times, values, window):
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    lo, hi = window
    if not lo < hi:
        raise ValueError(f"bad fit window {window}: need lo < hi")
    mask = (t >= lo) & (t <= hi)
    if mask.sum() < 5:
        raise ValueError(f"only {int(mask.sum())} points in window {window}; need >= 5")
    if np.any(v[mask] <= 0):
        raise ValueError(f"non-positive values inside fit window {window}")
    return t[mask], v[mask]


def _lstsq_stats(design, y):
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    resid_vec = design @ coef - y
    rms = float(np.sqrt(np.mean(resid_vec**2)))
    n, k = design.shape
    if n > k:
        sigma2 = float(resid_vec @ resid_vec) / (n - k)
        cov = sigma2 * np.linalg.inv(design.T @ design)
        stderr = float(np.sqrt(max(cov[0, 0], 0.0)))
    else:
        stderr = float("nan")
    return coef, rms, stderr


def fit_power_law(times, values, window) -> PowerLawFit:
    """Least-squares line in (ln t, ln v); the slope is the decay exponent."""
    t, v = _fit_window(times, values, window)
    x, y = np.log(t), np.log(v)
    design = np.column_stack([x, np.ones_like(x)])
    coef, rms, stderr = _lstsq_stats(design, y)
    return PowerLawFit(exponent=float(coef[0]), intercept=float(coef[1]),
                       stderr=stderr, residual=rms,
                       window=(float(window[0]), float(window[1])), npoints=len(t))


def fit_stretched_exp(times, values, window) -> StretchedExpFit:
    """Fit ln v = a ln t - c sqrt(t) + k with the stretch fixed at 1/2.

    The decay coefficient is expected positive; when the unconstrained
    optimum puts it at or below zero the fit is returned with a
    model-mismatch warning instead of being clamped.
    """
    t, v = _fit_window(times, values, window)
    y = np.log(v)
    design = np.column_stack([np.log(t), -np.sqrt(t), np.ones_like(t)])
    coef, rms, stderr = _lstsq_stats(design, y)
    a, c, k = (float(val) for val in coef)
    warning = None
    if c <= 0:
        warning = f"model mismatch: fitted decay coefficient {c:.3g} is not positive"
    return StretchedExpFit(prefactor_exponent=a, decay_coeff=c, intercept=k,
                           stderr=stderr, residual=rms,
                           window=(float(window[0]), float(window[1])),
                           npoints=len(t), warning=warning)


# -- efficiency ratio ---------------------------------------------------------

@dataclass(frozen=True)
class EfficiencyRatioSeries:
    """Pointwise ln(quantum envelope) / ln(classical return) on the shared grid.

    Points where either curve touches 1 (zero log) or leaves (0, 1) are
    excluded and counted, per the excluded_points field.
    """

    times: np.ndarray
    values: np.ndarray
    asymptotic: float
    excluded_points: int


def efficiency_ratio_series(classical_times, classical_values,
                            envelope) -> EfficiencyRatioSeries:
    """Ratio of decay logs, with the envelope interpolated log-linearly.

    The envelope may be an Envelope or a (times, values) pair; a
    non-oscillatory quantum series can be passed directly as its own
    envelope. Evaluation is restricted to the envelope's time range (no
    extrapolation). The asymptotic value is the mean over the last decade
    of surviving points.
    """
    if isinstance(envelope, Envelope):
        env_t, env_v = envelope.times, envelope.values
    else:
        env_t, env_v = (np.asarray(a, dtype=float) for a in envelope)
    ct = np.asarray(classical_times, dtype=float)
    cv = np.asarray(classical_values, dtype=float)
    if np.any(env_v <= 0):
        raise ValueError("envelope values must be positive for log interpolation")
    pos = env_t > 0
    env_t, env_v = env_t[pos], env_v[pos]
    if len(env_t) < 2:
        raise ValueError("need at least two positive-time envelope points")

    in_range = (ct >= env_t[0]) & (ct <= env_t[-1]) & (ct > 0)
    t = ct[in_range]
    p = cv[in_range]
    env = np.exp(np.interp(np.log(t), np.log(env_t), np.log(env_v)))
    valid = (p > 0) & (p < 1) & (env > 0) & (env < 1)
    excluded = int(in_range.sum() - valid.sum())
    t, p, env = t[valid], p[valid], env[valid]
    if len(t) == 0:
        raise ValueError("no valid points: series must lie strictly inside (0, 1)")
    ratio = np.log(env) / np.log(p)
    tail = t >= t[-1] / 10.0
    return EfficiencyRatioSeries(times=t, values=ratio,
                                 asymptotic=float(ratio[tail].mean()),
                                 excluded_points=excluded)


def detect_crossover(times, values) -> float | None:
    """First time the ratio crosses 1 from below, linearly interpolated."""
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    for i in range(len(v) - 1):
        if not (np.isfinite(v[i]) and np.isfinite(v[i + 1])):
            continue
        if v[i] < 1.0 <= v[i + 1]:
            if v[i + 1] == 1.0:
                return float(t[i + 1])
            frac = (1.0 - v[i]) / (v[i + 1] - v[i])
            return float(t[i] + frac * (t[i + 1] - t[i]))
    return None


@dataclass(frozen=True)
class SaturationStats:
    """Mean and worst absolute deviation over the tail of a series."""

    mean: float
    fluctuation: float
    tail_points: int


def saturation(values, tail_fraction: float = DEFAULT_TAIL_FRACTION) -> SaturationStats:
    if not 0 < tail_fraction <= 0.5:
        raise ValueError(f"tail_fraction must be in (0, 0.5], got {tail_fraction}")
    v = np.asarray(values, dtype=float)
    k = max(1, int(round(tail_fraction * len(v))))
    tail = v[-k:]
    mean = float(tail.mean())
    return SaturationStats(mean=mean,
                           fluctuation=float(np.abs(tail - mean).max()),
                           tail_points=k)


# -- aggregate report ---------------------------------------------------------

@dataclass(frozen=True)
class EfficiencyReport:
    """Everything one experiment concludes about transport efficiency."""

    classical_fit: PowerLawFit | StretchedExpFit | None = None
    quantum_fit: PowerLawFit | StretchedExpFit | None = None
    ratio: EfficiencyRatioSeries | None = None
    saturation_classical: SaturationStats | None = None
    saturation_quantum: SaturationStats | None = None
    crossover_time: float | None = None


def _fit_lines(prefix, fit):
    if fit is None:
        return []
    lines = [f"{prefix}_model = " +
             ("power_law" if isinstance(fit, PowerLawFit) else "stretched_exp")]
    if isinstance(fit, PowerLawFit):
        lines.append(f"{prefix}_exponent = {repr(fit.exponent)}")
    else:
        lines.append(f"{prefix}_prefactor_exponent = {repr(fit.prefactor_exponent)}")
        lines.append(f"{prefix}_decay_coeff = {repr(fit.decay_coeff)}")
        lines.append(f"{prefix}_stretch = {repr(fit.stretch)}")
        if fit.warning:
            lines.append(f"{prefix}_warning = {fit.warning}")
    lines.append(f"{prefix}_intercept = {repr(fit.intercept)}")
    lines.append(f"{prefix}_stderr = {repr(fit.stderr)}")
    lines.append(f"{prefix}_residual = {repr(fit.residual)}")
    lines.append(f"{prefix}_window = {repr(fit.window[0])},{repr(fit.window[1])}")
    lines.append(f"{prefix}_points = {fit.npoints}")
    return lines


def report_text(report: EfficiencyReport) -> str:
    """Flat key = value rendering of an EfficiencyReport."""
    lines = []
    lines += _fit_lines("classical", report.classical_fit)
    lines += _fit_lines("quantum", report.quantum_fit)
    if report.ratio is not None:
        lines.append(f"delta_p_asymptotic = {repr(report.ratio.asymptotic)}")
        lines.append(f"delta_p_excluded_points = {report.ratio.excluded_points}")
    if report.crossover_time is not None:
        lines.append(f"crossover_time = {repr(report.crossover_time)}")
    if report.saturation_classical is not None:
        s = report.saturation_classical
        lines.append(f"saturation_classical_mean = {repr(s.mean)}")
        lines.append(f"saturation_classical_fluctuation = {repr(s.fluctuation)}")
    if report.saturation_quantum is not None:
        s = report.saturation_quantum
        lines.append(f"saturation_quantum_mean = {repr(s.mean)}")
        lines.append(f"saturation_quantum_fluctuation = {repr(s.fluctuation)}")
    return "\n".join(lines) + "\n"


def ratio_csv(ratio: EfficiencyRatioSeries) -> str:
    lines = ["t,delta_p"]
    lines.extend(f"{repr(float(t))},{repr(float(v))}"
                 for t, v in zip(ratio.times, ratio.values))
    return "\n".join(lines) + "\n"
