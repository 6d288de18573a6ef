"""Least-squares fitting of pulse-chain and logistic-sum models, plus OLS.

The nonlinear fits run a damped least-squares (Levenberg-Marquardt)
loop with a numerically differentiated Jacobian. Width parameters are
optimized in log space so they stay positive; amplitudes are free to go
negative. Initial guesses come from peak detection on a smoothed copy
of the series.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import (
    LogisticComponent,
    SolitonChainModel,
    SolitonComponent,
    chain_eval,
    logistic_eval,
)

# half-maximum half-width w of sech^2(k t) satisfies k w = ln(1 + sqrt(2))
_HALF_MAX_CONST = float(np.log(1.0 + np.sqrt(2.0)))

_DAMPING_START = 1e-3
_DAMPING_MAX = 1e12
_REL_SSE_TOL = 1e-10
_GRAD_TOL = 1e-8
_MAX_ITERATIONS = 500


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled series: strictly increasing constant-step times."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or v.ndim != 1:
            raise ValueError("times and values must be 1-D")
        if t.size != v.size:
            raise ValueError("times and values differ in length")
        if t.size == 0:
            raise ValueError("empty series")
        if t.size > 1:
            steps = np.diff(t)
            if np.any(steps <= 0.0):
                raise ValueError("times must be strictly increasing")
            h = steps[0]
            if np.any(np.abs(steps - h) > 1e-9 * max(1.0, abs(h))):
                raise ValueError("times must be uniformly spaced")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return int(self.times.size)

    @property
    def dt(self) -> float:
        if self.times.size < 2:
            return 1.0
        return float(self.times[1] - self.times[0])


@dataclass(frozen=True)
class RegressionResult:
    """Simple OLS summary: y = B x + C with the usual diagnostics."""

    slope: float
    intercept: float
    t_values: np.ndarray          # (t for slope, t for intercept)
    r_squared: float
    adjusted_r_squared: float
    n_observations: int
    residuals: np.ndarray

    def to_dict(self) -> dict:
        return {
            "B": self.slope,
            "C": self.intercept,
            "t_values": self.t_values.tolist(),
            "r2": self.r_squared,
            "adj_r2": self.adjusted_r_squared,
            "n": self.n_observations,
        }


@dataclass(frozen=True)
class FitResult:
    """Outcome of a nonlinear chain fit.

    ``standard_errors`` line up with the flat parameter vector
    (beta, then A, k, center per component, in center order).
    """

    model: SolitonChainModel
    sse: float
    iterations: int
    converged: bool
    standard_errors: np.ndarray
    sse_history: tuple[float, ...]


@dataclass(frozen=True)
class ChainInit:
    """Initial chain guess; ``fallback`` marks equally spaced centers
    substituted for peaks that could not be detected."""

    model: SolitonChainModel
    fallback: bool


@dataclass(frozen=True)
class LogisticSumFit:
    """Fitted sum of logistic steps over a flat baseline."""

    components: tuple[LogisticComponent, ...]
    baseline: float
    sse: float
    iterations: int
    converged: bool


def ols(x, y) -> RegressionResult:
    """Closed-form simple regression of y on x with an intercept."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-D and equally long")
    n = x.size
    if n < 3:
        raise ValueError("need at least 3 observations")
    x_mean = float(x.mean())
    y_mean = float(y.mean())
    sxx = float(((x - x_mean) ** 2).sum())
    if sxx == 0.0:
        raise ValueError("zero-variance x")
    sxy = float(((x - x_mean) * (y - y_mean)).sum())
    slope = sxy / sxx
    intercept = y_mean - slope * x_mean
    residuals = y - (slope * x + intercept)
    sse = float((residuals ** 2).sum())
    sst = float(((y - y_mean) ** 2).sum())
    r2 = 1.0 if sst == 0.0 else 1.0 - sse / sst
    adj_r2 = 1.0 - (1.0 - r2) * (n - 1) / (n - 2)
    sigma2 = sse / (n - 2)
    se_slope = np.sqrt(sigma2 / sxx)
    se_intercept = np.sqrt(sigma2 * (1.0 / n + x_mean ** 2 / sxx))
    def t_ratio(coef, se):
        if se > 0.0:
            return coef / se
        return 0.0 if coef == 0.0 else np.inf * np.sign(coef)

    t_slope = t_ratio(slope, se_slope)
    t_intercept = t_ratio(intercept, se_intercept)
    return RegressionResult(
        slope=slope,
        intercept=intercept,
        t_values=np.array([t_slope, t_intercept]),
        r_squared=r2,
        adjusted_r_squared=adj_r2,
        n_observations=n,
        residuals=residuals,
    )


def line_fit(x, y) -> tuple[float, float, float]:
    """(slope, intercept, r_squared) of a straight line, valid for n >= 2."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2:
        raise ValueError("need at least 2 points")
    x_mean = x.mean()
    y_mean = y.mean()
    sxx = float(((x - x_mean) ** 2).sum())
    if sxx == 0.0:
        raise ValueError("zero-variance x")
    slope = float(((x - x_mean) * (y - y_mean)).sum()) / sxx
    intercept = float(y_mean - slope * x_mean)
    sst = float(((y - y_mean) ** 2).sum())
    sse = float(((y - slope * x - intercept) ** 2).sum())
    r2 = 1.0 if sst == 0.0 else 1.0 - sse / sst
    return slope, intercept, r2


def _moving_average(values: np.ndarray, window: int) -> np.ndarray:
    window = max(3, int(window))
    if window % 2 == 0:
        window += 1
    if window >= values.size:
        window = values.size if values.size % 2 == 1 else values.size - 1
    if window < 3:
        return values.copy()
    pad = window // 2
    padded = np.pad(values, pad, mode="edge")
    kernel = np.full(window, 1.0 / window)
    return np.convolve(padded, kernel, mode="valid")


def _local_maxima(values: np.ndarray) -> list[int]:
    idx = []
    for i in range(1, values.size - 1):
        if values[i] > values[i - 1] and values[i] >= values[i + 1]:
            idx.append(i)
    return idx


def _half_max_width(values: np.ndarray, peak: int, left_bound: int,
                    right_bound: int) -> float:
    """Distance from the peak to half height, averaged over usable sides.

    Walks stay inside [left_bound, right_bound] so a neighboring pulse
    cannot poison the estimate. A side that never crosses half height
    inside its territory is dropped; if both sides are dropped the
    largest territory distance serves as a lower-bound width.
    """
    half = values[peak] / 2.0
    widths = []
    j = peak
    while j + 1 <= right_bound and values[j + 1] >= half:
        j += 1
    if j + 1 <= right_bound:
        widths.append(j + 1 - peak)
    j = peak
    while j - 1 >= left_bound and values[j - 1] >= half:
        j -= 1
    if j - 1 >= left_bound:
        widths.append(peak - (j - 1))
    if not widths:
        return float(max(right_bound - peak, peak - left_bound, 1))
    return float(np.mean(widths))


def initialize_components(series: TimeSeries, n: int) -> ChainInit:
    """Peak-detection starting guess for an n-pulse chain.

    The vertical shift starts at the series minimum; centers sit on the
    n largest well-separated maxima of the smoothed, shift-removed
    values, amplitudes on the peak heights, and widths follow from the
    half-maximum width. Falls back to equal spacing (flagged) when fewer
    than n peaks are found.
    """
    if n < 1:
        raise ValueError("component count must be at least 1")
    if len(series) < 8 * n:
        raise ValueError(f"series too short for {n} components")
    values = series.values
    times = series.times
    dt = series.dt
    beta = float(values.min())
    smooth = _moving_average(values - beta, len(series) // 20)
    candidates = _local_maxima(smooth)
    # larger amplitude wins; equal amplitudes resolved by earlier time
    candidates.sort(key=lambda i: (-smooth[i], i))
    min_sep = max(2, len(series) // (2 * n))
    chosen: list[int] = []
    for i in candidates:
        if all(abs(i - j) >= min_sep for j in chosen):
            chosen.append(i)
        if len(chosen) == n:
            break
    fallback = len(chosen) < n
    components = []
    ordered = sorted(chosen)
    for i in chosen:
        pos = ordered.index(i)
        left_bound = 0 if pos == 0 else (i + ordered[pos - 1]) // 2
        right_bound = (values.size - 1 if pos == len(ordered) - 1
                       else (i + ordered[pos + 1]) // 2)
        # smoothing locates the peak; the raw value prices it
        amplitude = float(values[i] - beta)
        width = _half_max_width(smooth, i, left_bound, right_bound) * dt
        components.append(SolitonComponent(
            amplitude=amplitude if amplitude != 0.0 else 1e-12,
            k=_HALF_MAX_CONST / width,
            center=float(times[i]),
        ))
    if fallback:
        span = times[-1] - times[0]
        amplitude = float(values.max() - beta)
        amplitude = amplitude if amplitude != 0.0 else 1e-12
        width = span / (4.0 * n)
        have = {round(c.center, 9) for c in components}
        i = 0
        while len(components) < n:
            center = times[0] + span * (i + 0.5) / n
            i += 1
            if round(float(center), 9) in have:
                continue
            components.append(SolitonComponent(
                amplitude=amplitude / n,
                k=_HALF_MAX_CONST / width,
                center=float(center),
            ))
    model = SolitonChainModel(beta=beta, components=tuple(components))
    return ChainInit(model=model, fallback=fallback)


def _numeric_jacobian(residual_fn, params: np.ndarray) -> np.ndarray:
    """Central-difference Jacobian, step 1e-6 relative to each parameter."""
    m = residual_fn(params).size
    jac = np.empty((m, params.size))
    for j in range(params.size):
        h = 1e-6 * max(abs(params[j]), 1.0)
        up = params.copy()
        up[j] += h
        down = params.copy()
        down[j] -= h
        jac[:, j] = (residual_fn(up) - residual_fn(down)) / (2.0 * h)
    return jac


def levenberg_marquardt(residual_fn, p0, max_iterations: int = _MAX_ITERATIONS):
    """Damped least squares minimizing sum(residual_fn(p)^2).

    The damping factor starts at 1e-3, shrinks 10x after an accepted
    step and grows 10x after a rejected one. Converged when the relative
    SSE drop of an accepted step falls below 1e-10 or the gradient
    max-norm falls below 1e-8. Returns best-so-far on stall.
    """
    params = np.asarray(p0, dtype=float).copy()
    residual = residual_fn(params)
    if not np.all(np.isfinite(residual)):
        raise ValueError("residuals are not finite at the starting point")
    sse = float(residual @ residual)
    damping = _DAMPING_START
    history = [sse]
    converged = False
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        jac = _numeric_jacobian(residual_fn, params)
        grad = jac.T @ residual
        if float(np.abs(2.0 * grad).max()) < _GRAD_TOL:
            converged = True
            break
        jtj = jac.T @ jac
        diag = np.diag(jtj).copy()
        diag[diag <= 0.0] = 1.0
        accepted = False
        while damping < _DAMPING_MAX:
            try:
                step = np.linalg.solve(jtj + damping * np.diag(diag), -grad)
            except np.linalg.LinAlgError:
                step = None
            if step is not None and np.all(np.isfinite(step)):
                trial = params + step
                trial_residual = residual_fn(trial)
                trial_sse = float(trial_residual @ trial_residual)
                if np.isfinite(trial_sse) and trial_sse <= sse:
                    accepted = True
                    break
            damping *= 10.0
        if not accepted:
            break
        drop = (sse - trial_sse) / max(sse, np.finfo(float).tiny)
        params = trial
        residual = trial_residual
        sse = trial_sse
        history.append(sse)
        damping = max(damping / 10.0, 1e-15)
        if drop < _REL_SSE_TOL:
            converged = True
            break
    return params, residual, sse, iterations, converged, history


def _chain_pack(model: SolitonChainModel, fix_beta: bool) -> np.ndarray:
    flat = [] if fix_beta else [model.beta]
    for comp in model.components:
        flat.extend([comp.amplitude, np.log(comp.k), comp.center])
    return np.asarray(flat, dtype=float)


def _chain_unpack(params: np.ndarray, fix_beta: bool,
                  beta_fixed: float) -> SolitonChainModel:
    if fix_beta:
        beta = beta_fixed
        body = params
    else:
        beta = float(params[0])
        body = params[1:]
    components = []
    for i in range(0, body.size, 3):
        amplitude = float(body[i])
        components.append(SolitonComponent(
            amplitude=amplitude if amplitude != 0.0 else 1e-300,
            # clamp keeps exp finite when a degenerate fit runs the
            # log-width out of range
            k=float(np.exp(np.clip(body[i + 1], -50.0, 50.0))),
            center=float(body[i + 2]),
        ))
    return SolitonChainModel(beta=beta, components=tuple(components))


def _standard_errors(residual_fn, params: np.ndarray, sse: float) -> np.ndarray:
    """Asymptotic per-parameter errors from the Jacobian at the solution.

    Parameters lying along a numerically singular direction of J'J get
    an infinite error; that is how degenerate fits (for example a pulse
    whose amplitude collapsed to zero) are flagged.
    """
    jac = _numeric_jacobian(residual_fn, params)
    dof = jac.shape[0] - params.size
    if dof <= 0:
        return np.full(params.size, np.inf)
    sigma2 = sse / dof
    w, v = np.linalg.eigh(jac.T @ jac)
    w_max = float(w.max()) if w.size else 0.0
    keep = w > w_max * 1e-12 if w_max > 0.0 else np.zeros_like(w, dtype=bool)
    errors = np.empty(params.size)
    for j in range(params.size):
        weights = v[j] ** 2
        total = float(weights.sum())
        if not keep.any() or float(weights[~keep].sum()) > 1e-12 * max(total, 1e-300):
            errors[j] = np.inf
        else:
            errors[j] = np.sqrt(sigma2 * float((weights[keep] / w[keep]).sum()))
    return errors


def fit_soliton_chain(series: TimeSeries, n: int | None = None,
                      init: SolitonChainModel | None = None,
                      fix_beta: bool = False,
                      select_by_aic: bool = False,
                      max_iterations: int = _MAX_ITERATIONS) -> FitResult:
    """Fit beta + sum of A_i sech^2(k_i (t - c_i)) to the series.

    Widths are optimized as log(k). Components in the result are ordered
    by center, with standard errors permuted to match; a width's error
    is mapped back from log space as k * se(log k). With
    ``select_by_aic`` the count ``n`` becomes an upper bound and the fit
    with the lowest SSE-based information criterion wins.
    """
    if not np.all(np.isfinite(series.values)):
        raise ValueError("series contains non-finite values")
    if select_by_aic:
        if n is None:
            raise ValueError("AIC selection needs a maximum component count")
        best = None
        for count in range(1, n + 1):
            candidate = fit_soliton_chain(series, count, fix_beta=fix_beta,
                                          max_iterations=max_iterations)
            m = len(series)
            p = (0 if fix_beta else 1) + 3 * count
            aic = m * np.log(max(candidate.sse, 1e-300) / m) + 2 * p
            if best is None or aic < best[0]:
                best = (aic, candidate)
        return best[1]
    if init is None:
        if n is None:
            raise ValueError("give a component count or an initial model")
        init = initialize_components(series, n).model
    n = len(init.components)
    if len(series) <= 3 * n + 1:
        raise ValueError(f"series too short to fit {n} components")

    times = series.times
    values = series.values
    beta_fixed = init.beta

    def residual_fn(params):
        model = _chain_unpack(params, fix_beta, beta_fixed)
        return chain_eval(model, times) - values

    p0 = _chain_pack(init, fix_beta)
    params, _, sse, iterations, converged, history = levenberg_marquardt(
        residual_fn, p0, max_iterations)
    errors = _standard_errors(residual_fn, params, sse)

    # map log-width errors back to width errors, then order by center
    offset = 0 if fix_beta else 1
    beta = beta_fixed if fix_beta else float(params[0])
    raw = []
    for i in range(n):
        base = offset + 3 * i
        amplitude = float(params[base])
        k = float(np.exp(np.clip(params[base + 1], -50.0, 50.0)))
        center = float(params[base + 2])
        err = (errors[base], k * errors[base + 1], errors[base + 2])
        raw.append(((amplitude, k, center), err))
    raw.sort(key=lambda item: item[0][2])
    components = tuple(
        SolitonComponent(
            amplitude=a if a != 0.0 else 1e-300,
            k=k,
            center=c,
        )
        for (a, k, c), _ in raw
    )
    err_flat = [] if fix_beta else [float(errors[0])]
    for _, err in raw:
        err_flat.extend(err)
    return FitResult(
        model=SolitonChainModel(beta=beta, components=components),
        sse=sse,
        iterations=iterations,
        converged=converged,
        standard_errors=np.asarray(err_flat),
        sse_history=tuple(history),
    )


def soliton_to_logistic(comp: SolitonComponent) -> LogisticComponent:
    """Pulse (A, k, c) to the logistic step whose derivative it is."""
    return LogisticComponent(
        x_sat=2.0 * comp.amplitude / comp.k,
        s=2.0 * comp.k,
        t0=comp.center,
    )


def logistic_to_soliton(comp: LogisticComponent) -> SolitonComponent:
    """Logistic step (x_sat, s, t0) to its derivative pulse."""
    return SolitonComponent(
        amplitude=comp.x_sat * comp.s / 4.0,
        k=comp.s / 2.0,
        center=comp.t0,
    )


def fit_logistic_sum(cumulative: TimeSeries, n: int,
                     max_iterations: int = _MAX_ITERATIONS) -> LogisticSumFit:
    """Fit baseline + sum of logistic steps to cumulative data.

    The series is differenced, decomposed into pulses, and the mapped
    logistic parameters (x_sat = 2A/k, s = 2k, t0 = c) are then refined
    directly against the cumulative values with the same optimizer.
    """
    if not np.all(np.isfinite(cumulative.values)):
        raise ValueError("series contains non-finite values")
    if len(cumulative) <= 3 * n + 1:
        raise ValueError(f"series too short to fit {n} steps")
    times = cumulative.times
    values = cumulative.values
    dt = cumulative.dt

    derivative = np.gradient(values, dt)
    chain = fit_soliton_chain(TimeSeries(times, derivative), n,
                              max_iterations=max_iterations)
    steps = [soliton_to_logistic(c) for c in chain.model.components]

    def eval_sum(components, baseline):
        out = np.full(times.shape, baseline, dtype=float)
        for comp in components:
            out += logistic_eval(comp, times)
        return out

    baseline0 = float(np.mean(values - eval_sum(steps, 0.0)))

    def unpack(params):
        comps = []
        for i in range(n):
            base = 1 + 3 * i
            comps.append(LogisticComponent(
                x_sat=max(float(params[base]), 1e-300),
                s=float(np.exp(params[base + 1])),
                t0=float(params[base + 2]),
            ))
        return comps, float(params[0])

    def residual_fn(params):
        comps, baseline = unpack(params)
        return eval_sum(comps, baseline) - values

    p0 = [baseline0]
    for comp in steps:
        p0.extend([comp.x_sat, np.log(comp.s), comp.t0])
    params, _, sse, iterations, converged, _ = levenberg_marquardt(
        residual_fn, np.asarray(p0), max_iterations)
    comps, baseline = unpack(params)
    comps.sort(key=lambda c: c.t0)
    return LogisticSumFit(
        components=tuple(comps),
        baseline=baseline,
        sse=sse,
        iterations=iterations,
        converged=converged,
    )
