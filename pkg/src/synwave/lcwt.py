"""Continuous wavelet transform with logistic-derivative wavelets.

The mother wavelet is a derivative of the standard logistic sigmoid
sigma(t) = 1/(1 + e^-t):

    order 2:  sigma'' = sigma (1 - sigma) (1 - 2 sigma)        (odd)
    order 3:  sigma''' = sigma (1 - sigma) (1 - 6 sigma + 6 sigma^2)  (even)

Both integrate to zero over the line (admissible). The transform is the
L2-normalized correlation

    W(a, b) = a^(-1/2) sum_t x(t) psi((t - b) / a) dt

computed over a log-spaced scale grid with reflection padding at the
boundaries. ``extract_waves`` repeats a locate / fit / subtract loop on
the scalogram maximum, yielding sech^2 pulse estimates whose sign-
homogeneous groups (wave trains) carry a linear peak trend, and
``redundancy_split`` turns the two trains into nonnegative opposing
series whose difference reconstructs the extracted signal content.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fit import TimeSeries, fit_soliton_chain, line_fit
from .models import SolitonChainModel, SolitonComponent, soliton_eval, _sigmoid

DEFAULT_WAVELET_ORDER = 3
DEFAULT_NUM_SCALES = 64
DEFAULT_MAX_WAVES = 10
DEFAULT_ENERGY_STOP = 0.05
# retention gate for candidate waves, in units of the differenced
# residual's robust noise level
DEFAULT_SNR = 5.0

# nominal wavelet support is SUPPORT_PER_SCALE * a samples wide; kernels
# are truncated at KERNEL_RADIUS_PER_SCALE * a where the tails are below
# 1e-8 of the peak
SUPPORT_PER_SCALE = 10.0
KERNEL_RADIUS_PER_SCALE = 15.0

# half-maximum half-width w of sech^2(k t) has k w = ln(1 + sqrt(2))
_HALF_WIDTH_CONST = float(np.log(1.0 + np.sqrt(2.0)))

_KAPPA_CACHE: dict[int, float] = {}


@dataclass(frozen=True)
class Scalogram:
    """Wavelet coefficients over (scale, translation)."""

    translations: np.ndarray
    scales: np.ndarray
    coefficients: np.ndarray      # shape (len(scales), len(translations))

    def __post_init__(self):
        b = np.asarray(self.translations, dtype=float)
        a = np.asarray(self.scales, dtype=float)
        w = np.asarray(self.coefficients, dtype=float)
        if a.ndim != 1 or np.any(a <= 0.0) or np.any(np.diff(a) <= 0.0):
            raise ValueError("scales must be positive and strictly increasing")
        if w.shape != (a.size, b.size):
            raise ValueError("coefficient shape does not match the grids")
        if not np.all(np.isfinite(w)):
            raise ValueError("non-finite wavelet coefficients")
        object.__setattr__(self, "translations", b)
        object.__setattr__(self, "scales", a)
        object.__setattr__(self, "coefficients", w)


@dataclass(frozen=True)
class WaveEstimate:
    """One extracted pulse plus the scalogram cell that seeded it."""

    amplitude: float
    k: float
    center: float
    scalogram_peak: tuple[float, float, float]    # (scale, translation, |W|)

    def to_component(self) -> SolitonComponent:
        return SolitonComponent(self.amplitude, self.k, self.center)

    def to_dict(self) -> dict:
        a, b, w = self.scalogram_peak
        return {
            "amplitude": self.amplitude,
            "k": self.k,
            "center": self.center,
            "scalogram_peak": {"scale": a, "translation": b, "abs_w": w},
        }


@dataclass(frozen=True)
class WaveTrain:
    """Sign-homogeneous waves ordered by center, with their peak trend."""

    sign: str                                  # "positive" | "negative"
    waves: tuple[WaveEstimate, ...]
    trend: dict | None                         # slope, intercept, r_squared

    def to_dict(self) -> dict:
        return {
            "sign": self.sign,
            "waves": [w.to_dict() for w in self.waves],
            "trend": self.trend,
        }


@dataclass(frozen=True)
class ExtractionResult:
    """Waves retained by the extraction loop plus the leftover series."""

    waves: tuple[WaveEstimate, ...]
    residual: TimeSeries
    energy_history: tuple[float, ...]
    low_confidence: bool


@dataclass(frozen=True)
class RedundancyDecomposition:
    """Pointwise split total = historical - synergetic, both parts >= 0."""

    historical: np.ndarray
    synergetic: np.ndarray
    total: np.ndarray
    positive_role: str


def mother_wavelet(order: int, t):
    """Order-th derivative of the logistic sigmoid, zero-mean over the line."""
    t_arr = np.asarray(t, dtype=float)
    sig = _sigmoid(t_arr)
    if order == 2:
        out = sig * (1.0 - sig) * (1.0 - 2.0 * sig)
    elif order == 3:
        out = sig * (1.0 - sig) * (1.0 - 6.0 * sig + 6.0 * sig * sig)
    else:
        raise ValueError(f"unsupported wavelet order {order} (use 2 or 3)")
    return float(out) if np.ndim(out) == 0 else out


def default_scales(n_samples: int, num: int = DEFAULT_NUM_SCALES) -> np.ndarray:
    """Log grid over nominal support widths of 4 samples .. n_samples / 2."""
    if n_samples < 2:
        raise ValueError("need at least 2 samples")
    a_min = 4.0 / SUPPORT_PER_SCALE
    a_max = max((n_samples / 2.0) / SUPPORT_PER_SCALE, a_min * 1.5)
    return np.geomspace(a_min, a_max, num)


def cwt(series: TimeSeries, scales=None, order: int = DEFAULT_WAVELET_ORDER) -> Scalogram:
    """L2-normalized wavelet coefficients at every (scale, sample time).

    Boundaries are handled by reflecting the series over half the widest
    kernel support. The per-scale correlations run through one shared
    FFT of the padded signal, which keeps the result deterministic and
    fast for wide kernels.
    """
    if len(series) < 2:
        raise ValueError("series too short for a transform")
    if scales is None:
        scales = default_scales(len(series))
    scales = np.asarray(scales, dtype=float)
    if np.any(scales <= 0.0):
        raise ValueError("scales must be positive")
    x = series.values
    n = x.size
    dt = series.dt
    radius_max = int(np.ceil(KERNEL_RADIUS_PER_SCALE * scales.max()))
    pad = radius_max
    padded = np.pad(x, pad, mode="reflect")
    nfft = 1 << int(np.ceil(np.log2(padded.size + 2 * radius_max + 1)))
    spectrum = np.fft.rfft(padded, nfft)
    coefficients = np.empty((scales.size, n))
    for row, a in enumerate(scales):
        radius = max(int(np.ceil(KERNEL_RADIUS_PER_SCALE * a)), 2)
        u = np.arange(-radius, radius + 1, dtype=float)
        kernel = mother_wavelet(order, u / a) * (dt / np.sqrt(a))
        # correlation = convolution with the reversed kernel
        kernel_fft = np.fft.rfft(kernel[::-1], nfft)
        conv = np.fft.irfft(spectrum * kernel_fft, nfft)
        coefficients[row, :] = conv[pad + radius: pad + radius + n]
    return Scalogram(series.times.copy(), scales, coefficients)


def wavelet_scale_constant(order: int = DEFAULT_WAVELET_ORDER) -> float:
    """Calibration constant kappa with k = kappa / a_peak for sech^2 pulses.

    Found once per wavelet order by locating the scalogram peak of a
    synthetic unit pulse on a dense scale grid; cached afterwards.
    """
    if order in _KAPPA_CACHE:
        return _KAPPA_CACHE[order]
    k_ref = 0.05
    n = 1601
    times = np.arange(n, dtype=float)
    center = (n - 1) / 2.0
    pulse = soliton_eval(SolitonComponent(1.0, k_ref, center), times)
    scales = np.geomspace(2.0, 120.0, 512)
    scalogram = cwt(TimeSeries(times, pulse), scales, order)
    peak_scale, _, _ = _peak_cell(scalogram)
    kappa = k_ref * peak_scale
    _KAPPA_CACHE[order] = kappa
    return kappa


def _peak_cell(s: Scalogram, min_edge_scales: float = 0.0) -> tuple[float, float, float]:
    """(scale, translation, |W|) at the global |W| maximum.

    ``min_edge_scales`` masks cells closer than that many scale units to
    either series end, where reflection padding makes coefficients
    unreliable; the mask is dropped if it would empty the scalogram.
    Exact ties resolve to the earliest translation, then the smallest
    scale.
    """
    magnitude = np.abs(s.coefficients)
    if min_edge_scales > 0.0:
        b = s.translations
        step = b[1] - b[0] if b.size > 1 else 1.0
        offsets = (b - b[0]) / step
        span = offsets[-1]
        margin = min_edge_scales * s.scales[:, None]
        mask = (offsets[None, :] >= margin) & (span - offsets[None, :] >= margin)
        if mask.any():
            magnitude = np.where(mask, magnitude, -1.0)
    peak = float(magnitude.max())
    rows, cols = np.nonzero(magnitude == peak)
    order = np.lexsort((rows, cols))
    i, j = int(rows[order[0]]), int(cols[order[0]])
    return float(s.scales[i]), float(s.translations[j]), peak


def dominant_wave(s: Scalogram, series: TimeSeries,
                  order: int = DEFAULT_WAVELET_ORDER,
                  min_edge_scales: float = 0.5) -> WaveEstimate:
    """Strongest pulse in the scalogram, refined against the series.

    The peak search skips the boundary fringe (cells closer to a series
    end than half their scale). The winning cell seeds (A, k, c) with c
    at its translation, k from the scale calibration, and A from a
    two-parameter linear solve over a pulse-plus-offset template; a
    single-component chain fit then refines the triple on the series.
    """
    scale, translation, peak = _peak_cell(s, min_edge_scales)
    if peak <= 0.0:
        raise ValueError("all-zero scalogram")
    kappa = wavelet_scale_constant(order)
    k0 = kappa / scale
    template = soliton_eval(SolitonComponent(1.0, k0, translation), series.times)
    design = np.column_stack([template, np.ones(len(series))])
    (a0, offset0), *_ = np.linalg.lstsq(design, series.values, rcond=None)
    if a0 == 0.0 or not np.isfinite(a0):
        a0 = 1e-12
    init = SolitonChainModel(
        beta=float(offset0),
        components=(SolitonComponent(float(a0), k0, translation),),
    )
    result = fit_soliton_chain(series, init=init)
    comp = result.model.components[0]
    return WaveEstimate(
        amplitude=comp.amplitude,
        k=comp.k,
        center=comp.center,
        scalogram_peak=(scale, translation, peak),
    )


def _centered_energy(values: np.ndarray) -> float:
    """Sum of squares about the mean; offsets carry no wave content."""
    return float(((values - values.mean()) ** 2).sum())


def _diff_noise_sigma(values: np.ndarray) -> float:
    """Robust noise level from first differences (smooth structure drops out)."""
    d = np.diff(values)
    mad = np.median(np.abs(d - np.median(d)))
    return float(1.4826 * mad / np.sqrt(2.0))


def _refit_sane(waves, series: TimeSeries) -> bool:
    """Reject degenerate refits: centers outside the window or pulses so
    wide they act as a baseline trend proxy."""
    span = float(series.times[-1] - series.times[0])
    margin = 0.25 * span
    lo = float(series.times[0]) - margin
    hi = float(series.times[-1]) + margin
    k_min = _HALF_WIDTH_CONST / (2.0 * span)
    return all(lo <= w.center <= hi and w.k >= k_min for w in waves)


def _candidate_cells(s: Scalogram, count: int, min_edge_scales: float = 0.5,
                     min_separation: float = 5.0) -> list[tuple[float, float, float]]:
    """Strongest local |W| maxima, separated in translation.

    Cells inside the boundary fringe are skipped (same rule as the peak
    search); ties order by translation then scale.
    """
    magnitude = np.abs(s.coefficients)
    b = s.translations
    step = b[1] - b[0] if b.size > 1 else 1.0
    offsets = (b - b[0]) / step
    span = offsets[-1]
    interior = np.ones_like(magnitude, dtype=bool)
    if min_edge_scales > 0.0:
        margin = min_edge_scales * s.scales[:, None]
        fringe_ok = ((offsets[None, :] >= margin)
                     & (span - offsets[None, :] >= margin))
        if fringe_ok.any():
            interior = fringe_ok
    local = np.ones_like(magnitude, dtype=bool)
    local[:, 1:] &= magnitude[:, 1:] >= magnitude[:, :-1]
    local[:, :-1] &= magnitude[:, :-1] >= magnitude[:, 1:]
    candidates = np.argwhere(local & interior & (magnitude > 0.0))
    ranked = sorted(
        ((float(magnitude[i, j]), float(b[j]), float(s.scales[i]))
         for i, j in candidates),
        key=lambda cell: (-cell[0], cell[1], cell[2]),
    )
    chosen: list[tuple[float, float, float]] = []
    for w, trans, scale in ranked:
        if all(abs(trans - t) >= min_separation * step for _, t, _ in chosen):
            chosen.append((w, trans, scale))
        if len(chosen) == count:
            break
    return [(scale, trans, w) for w, trans, scale in chosen]


def _joint_refit(series: TimeSeries, waves: list[WaveEstimate],
                 candidate: WaveEstimate, beta0: float) -> tuple[list[WaveEstimate], float]:
    """Refit all retained pulses plus the candidate against the series.

    Matching-pursuit back-fitting: overlapping pulses settle into their
    joint least-squares positions instead of accumulating greedy bias.
    Seed scalogram peaks follow their wave by center order.
    """
    pool = sorted(waves + [candidate], key=lambda w: w.center)
    init = SolitonChainModel(
        beta=beta0,
        components=tuple(w.to_component() for w in pool),
    )
    result = fit_soliton_chain(series, init=init)
    refit = [
        WaveEstimate(
            amplitude=comp.amplitude,
            k=comp.k,
            center=comp.center,
            scalogram_peak=seed.scalogram_peak,
        )
        for seed, comp in zip(pool, result.model.components)
    ]
    return refit, result.model.beta


def _seed_estimate(cell: tuple[float, float, float], series: TimeSeries,
                   order: int) -> WaveEstimate:
    """Map one scalogram cell to a raw pulse estimate.

    k comes from the scale calibration, the center from the translation,
    and the amplitude from a linear pulse-plus-offset solve.
    """
    scale, translation, peak = cell
    k0 = wavelet_scale_constant(order) / scale
    template = soliton_eval(SolitonComponent(1.0, k0, translation), series.times)
    design = np.column_stack([template, np.ones(len(series))])
    (a0, _), *_ = np.linalg.lstsq(design, series.values, rcond=None)
    if not np.isfinite(a0) or a0 == 0.0:
        a0 = 1e-12
    return WaveEstimate(
        amplitude=float(a0),
        k=k0,
        center=translation,
        scalogram_peak=(scale, translation, peak),
    )


def extract_waves(series: TimeSeries, max_waves: int = DEFAULT_MAX_WAVES,
                  energy_stop: float = DEFAULT_ENERGY_STOP,
                  scales=None, order: int = DEFAULT_WAVELET_ORDER,
                  snr: float = DEFAULT_SNR) -> ExtractionResult:
    """Iteratively locate, fit, and subtract the strongest pulse.

    Each pass transforms the current residual, seeds candidates at the
    strongest scalogram maxima, and keeps whichever joint refit of the
    retained pulses explains the most energy. The loop stops when the rms of
    the centered residual falls below ``energy_stop`` of the original
    rms, when ``max_waves`` are retained, or when the next candidate
    fails the retention gate (peak below ``snr`` noise levels, or no
    energy reduction). ``energy_history`` records centered sums of
    squares, which are asserted non-increasing; ``low_confidence``
    flags runs that left more than half of that energy unexplained.
    """
    if max_waves < 1:
        raise ValueError("max_waves must be at least 1")
    if not 0.0 < energy_stop < 1.0:
        raise ValueError("energy_stop must lie in (0, 1)")
    if scales is None:
        scales = default_scales(len(series))
    scales = np.asarray(scales, dtype=float)

    residual = series.values.copy()
    original_energy = _centered_energy(residual)
    history = [original_energy]
    waves: list[WaveEstimate] = []
    beta_hat = float(series.values.mean())
    if original_energy > 0.0:
        while len(waves) < max_waves:
            if np.sqrt(history[-1] / original_energy) < energy_stop:
                break
            current = TimeSeries(series.times, residual)
            scalogram = cwt(current, scales, order)
            cells = _candidate_cells(scalogram, count=3)
            noise = _diff_noise_sigma(residual)
            seeds = []
            for cell in cells:
                seed = _seed_estimate(cell, current, order)
                if noise > 0.0 and abs(seed.amplitude) < snr * noise:
                    continue
                seeds.append(seed)
            if not seeds:
                break
            best = None
            for seed in seeds:
                refit, beta_new = _joint_refit(series, waves, seed, beta_hat)
                if not _refit_sane(refit, series):
                    continue
                reconstruction = np.zeros(len(series))
                for wave in refit:
                    reconstruction += soliton_eval(wave.to_component(),
                                                   series.times)
                energy = _centered_energy(series.values - reconstruction)
                if energy > history[-1]:
                    continue
                if best is None or energy < best[0]:
                    best = (energy, refit, beta_new, reconstruction)
            if best is None:
                break
            next_energy, waves, beta_hat, reconstruction = best
            residual = series.values - reconstruction
            history.append(next_energy)
    explained = 1.0 - history[-1] / original_energy if original_energy > 0 else 0.0
    return ExtractionResult(
        waves=tuple(waves),
        residual=TimeSeries(series.times, residual),
        energy_history=tuple(history),
        low_confidence=explained < 0.5,
    )


def group_wave_trains(waves) -> list[WaveTrain]:
    """Partition waves by amplitude sign and fit each train's peak trend."""
    trains = []
    for sign, keep in (("positive", lambda a: a >= 0.0),
                       ("negative", lambda a: a < 0.0)):
        members = sorted(
            (w for w in waves if keep(w.amplitude)),
            key=lambda w: w.center,
        )
        if not members:
            continue
        trend = None
        if len(members) >= 2:
            slope, intercept, r2 = line_fit(
                [w.center for w in members],
                [w.amplitude for w in members],
            )
            trend = {"slope": slope, "intercept": intercept, "r_squared": r2}
        trains.append(WaveTrain(sign=sign, waves=tuple(members), trend=trend))
    return trains


def redundancy_split(trains, series_length: int, times=None,
                     positive_role: str = "historical") -> RedundancyDecomposition:
    """Split the wave trains into opposing nonnegative series.

    The positive-amplitude reconstruction and the magnitude of the
    negative-amplitude reconstruction become the historical and
    synergetic parts; ``positive_role`` picks which is which (the sign
    convention differs between readings, so it stays configurable).
    The total is always historical - synergetic.
    """
    if positive_role not in ("historical", "synergetic"):
        raise ValueError("positive_role must be 'historical' or 'synergetic'")
    if times is None:
        times = np.arange(series_length, dtype=float)
    else:
        times = np.asarray(times, dtype=float)
    positive = np.zeros(times.shape)
    negative = np.zeros(times.shape)
    for train in trains:
        for wave in train.waves:
            part = soliton_eval(wave.to_component(), times)
            if wave.amplitude >= 0.0:
                positive += part
            else:
                negative += part
    if positive_role == "historical":
        historical = positive
        synergetic = -negative
    else:
        historical = -negative
        synergetic = positive
    return RedundancyDecomposition(
        historical=historical,
        synergetic=synergetic,
        total=historical - synergetic,
        positive_role=positive_role,
    )


def scalogram_to_csv(s: Scalogram, path, comments=()) -> None:
    """CSV matrix with scales down the rows and translations across."""
    with open(path, "w", encoding="utf-8") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write("scale," + ",".join(repr(b) for b in s.translations.tolist()) + "\n")
        for i, a in enumerate(s.scales.tolist()):
            row = ",".join(repr(v) for v in s.coefficients[i].tolist())
            fh.write(f"{a!r},{row}\n")


def _heat_color(z: float) -> str:
    """Diverging blue-white-red map for z in [-1, 1]."""
    z = min(max(z, -1.0), 1.0)
    if z >= 0.0:
        r, g, b = 255, round(255 * (1 - z)), round(255 * (1 - z))
    else:
        r, g, b = round(255 * (1 + z)), round(255 * (1 + z)), 255
    return f"#{r:02x}{g:02x}{b:02x}"


def scalogram_to_svg(s: Scalogram, path, cell: int = 4, comments=()) -> None:
    """Static heatmap of the coefficients, rows = scales (largest on top)."""
    n_scales, n_trans = s.coefficients.shape
    peak = float(np.abs(s.coefficients).max())
    norm = peak if peak > 0 else 1.0
    width = n_trans * cell
    height = n_scales * cell
    parts = [f"<!-- {line} -->" for line in comments]
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">'
    )
    for i in range(n_scales):
        y = (n_scales - 1 - i) * cell
        for j in range(n_trans):
            color = _heat_color(s.coefficients[i, j] / norm)
            parts.append(
                f'<rect x="{j * cell}" y="{y}" width="{cell}" '
                f'height="{cell}" fill="{color}"/>'
            )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
