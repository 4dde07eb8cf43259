"""The six step-detection pipelines: single side, low-level, high-level fusion."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import AlgorithmId, DetectorParams, PeakSet, Recording, ScalarSeries, Side
from .peaks import detect_peaks
from .preprocess import NormalizationContext, magnitude, min_max_normalize, moving_average

try:  # optional speedup; the pure-Python paths are semantically identical
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None


class LowLevelMode(Enum):
    SUM = "sum"
    DIFF = "diff"


class HighLevelMode(Enum):
    INTERSECT = "intersect"
    UNION = "union"


@dataclass(frozen=True)
class StepDetection:
    """Result of running one detector on one recording. Each peak is one step."""

    algorithm: AlgorithmId
    steps: PeakSet
    count: int

    def __post_init__(self):
        if self.count != len(self.steps):
            raise ValueError("count must equal the number of detected steps")


def smoothed_magnitude(rec: Recording, side: Side, window: float) -> ScalarSeries:
    return moving_average(magnitude(rec.side(side)), window)


def fused_signal(rec: Recording, mode: LowLevelMode, params: DetectorParams) -> ScalarSeries:
    """Pointwise sum or absolute difference of the smoothed magnitudes, re-smoothed."""
    if params.smooth_fused is None:
        raise ValueError("low-level fusion requires smooth_fused")
    n_l = smoothed_magnitude(rec, Side.LEFT, params.smooth_single)
    n_r = smoothed_magnitude(rec, Side.RIGHT, params.smooth_single)
    if len(n_l) != len(n_r):
        raise ValueError("left and right signals must be aligned sample-for-sample")
    if mode is LowLevelMode.SUM:
        combined = n_r.values + n_l.values
    else:
        combined = np.abs(n_r.values - n_l.values)
    return moving_average(n_l.with_values(combined), params.smooth_fused)


def detect_single_side(
    rec: Recording, side: Side, params: DetectorParams, ctx: NormalizationContext
) -> StepDetection:
    """magnitude -> moving average -> corpus min-max normalize -> peak detection."""
    sig = min_max_normalize(smoothed_magnitude(rec, side, params.smooth_single), ctx)
    steps = detect_peaks(sig, params.min_peak_amp, params.min_peak_gap)
    alg = AlgorithmId.NO_FUSION_LEFT if side is Side.LEFT else AlgorithmId.NO_FUSION_RIGHT
    return StepDetection(algorithm=alg, steps=steps, count=len(steps))


def fuse_low_level(
    rec: Recording, mode: LowLevelMode, params: DetectorParams, ctx: NormalizationContext
) -> StepDetection:
    """Combine the smoothed magnitudes before detection.

    ``ctx`` must be fitted on the fused signals of the corpus, not the
    per-sensor ones.
    """
    sig = min_max_normalize(fused_signal(rec, mode, params), ctx)
    steps = detect_peaks(sig, params.min_peak_amp, params.min_peak_gap)
    alg = AlgorithmId.LOW_LEVEL_SUM if mode is LowLevelMode.SUM else AlgorithmId.LOW_LEVEL_DIFF
    return StepDetection(algorithm=alg, steps=steps, count=len(steps))


def _intersect_pairs_py(tl_all, al_all, tr_all, ar_all, max_dist):
    n_l = len(tl_all)
    n_r = len(tr_all)
    out_t = np.empty(n_l)
    out_a = np.empty(n_l)
    m = 0
    for i in range(n_l):
        tl, al = tl_all[i], al_all[i]
        # Nearest right peak; equidistant neighbors resolve to the earlier one.
        q = np.searchsorted(tr_all, tl)
        j = -1
        if q > 0:
            j = q - 1
        if q < n_r and (j < 0 or tr_all[q] - tl < tl - tr_all[j]):
            j = q
        if abs(tl - tr_all[j]) > max_dist:
            continue
        tr, ar = tr_all[j], ar_all[j]
        # tl must be strictly the nearest left peak to tr; the nearest other
        # left peak sits among the immediate neighbors of tr's insertion point.
        d = abs(tl - tr)
        p = np.searchsorted(tl_all, tr)
        best_other = np.inf
        for k in range(-2, 2):
            cand = p + k
            if 0 <= cand < n_l and cand != i:
                dd = abs(tl_all[cand] - tr)
                if dd < best_other:
                    best_other = dd
        if not d < best_other:
            continue
        if ar >= al:
            out_t[m] = tr
            out_a[m] = ar
        else:
            out_t[m] = tl
            out_a[m] = al
        m += 1
    return out_t[:m], out_a[:m]


def _union_keep_py(times, amps, order, min_dist):
    n = times.size
    alive = np.ones(n, dtype=np.bool_)
    keep = np.zeros(n, dtype=np.bool_)
    for k in range(order.size):
        i = order[k]
        if not alive[i]:
            continue
        keep[i] = True
        ti = times[i]
        j = i
        while j < n and times[j] - ti <= min_dist:
            alive[j] = False
            j += 1
        j = i - 1
        while j >= 0 and ti - times[j] <= min_dist:
            alive[j] = False
            j -= 1
    return keep


if njit is not None:
    _intersect_pairs = njit(cache=True)(_intersect_pairs_py)
    _union_keep = njit(cache=True)(_union_keep_py)
else:  # pragma: no cover
    _intersect_pairs = _intersect_pairs_py
    _union_keep = _union_keep_py


def intersect_fuse(t_left: PeakSet, t_right: PeakSet, max_dist: float) -> PeakSet:
    """Keep mutually-nearest left/right peak pairs within ``max_dist``.

    For each left peak with some right peak within ``max_dist``, take the
    nearest such right peak; accept the pair only when the left peak is
    strictly the nearest left peak to that right peak. The higher-amplitude
    member of the pair is emitted (ties go to the right sensor).
    """
    if max_dist < 0:
        raise ValueError("max_dist must be >= 0")
    if len(t_left) == 0 or len(t_right) == 0:
        return PeakSet.empty()
    out_t, out_a = _intersect_pairs(
        t_left.times, t_left.amplitudes, t_right.times, t_right.amplitudes, float(max_dist)
    )
    # The same right peak may be emitted for several left peaks; it carries
    # the same amplitude every time, so deduplicating by time is enough.
    times, first = np.unique(out_t, return_index=True)
    return PeakSet(times=times, amplitudes=out_a[first])


def union_fuse(t_left: PeakSet, t_right: PeakSet, min_dist: float) -> PeakSet:
    """Greedy pooled selection: highest-amplitude peak wins, neighbors within
    ``min_dist`` (inclusive) are dropped. Ties go to the right sensor, then to
    the earlier time.
    """
    if min_dist < 0:
        raise ValueError("min_dist must be >= 0")
    times = np.concatenate([t_left.times, t_right.times])
    amps = np.concatenate([t_left.amplitudes, t_right.amplitudes])
    src = np.concatenate([np.zeros(len(t_left)), np.ones(len(t_right))])
    by_time = np.argsort(times, kind="stable")
    times, amps, src = times[by_time], amps[by_time], src[by_time]
    order = np.lexsort((times, -src, -amps))
    keep = _union_keep(times, amps, order, float(min_dist))
    return PeakSet(times=times[keep], amplitudes=amps[keep])


def detect_high_level(
    rec: Recording, mode: HighLevelMode, params: DetectorParams, ctx: NormalizationContext
) -> StepDetection:
    """Per-wrist single-side pipeline (shared parameters), then event fusion."""
    sides = {}
    for side in (Side.LEFT, Side.RIGHT):
        sig = min_max_normalize(smoothed_magnitude(rec, side, params.smooth_single), ctx)
        sides[side] = detect_peaks(sig, params.min_peak_amp, params.min_peak_gap)
    if mode is HighLevelMode.INTERSECT:
        if params.fuse_max_dist is None:
            raise ValueError("intersection fusion requires fuse_max_dist")
        if params.fuse_max_dist > params.min_peak_gap:
            raise ValueError("fuse_max_dist must not exceed min_peak_gap")
        steps = intersect_fuse(sides[Side.LEFT], sides[Side.RIGHT], params.fuse_max_dist)
        alg = AlgorithmId.HIGH_LEVEL_INTERSECT
    else:
        if params.fuse_min_dist is None:
            raise ValueError("union fusion requires fuse_min_dist")
        steps = union_fuse(sides[Side.LEFT], sides[Side.RIGHT], params.fuse_min_dist)
        alg = AlgorithmId.HIGH_LEVEL_UNION
    return StepDetection(algorithm=alg, steps=steps, count=len(steps))


def run_detector(
    alg: AlgorithmId, rec: Recording, params: DetectorParams, ctx: NormalizationContext
) -> StepDetection:
    """Dispatch over the six detector variants.

    ``ctx`` must match the algorithm family: per-sensor smoothed magnitudes for
    single-side and high-level, fused signals for low-level.
    """
    if alg is AlgorithmId.NO_FUSION_LEFT:
        return detect_single_side(rec, Side.LEFT, params, ctx)
    if alg is AlgorithmId.NO_FUSION_RIGHT:
        return detect_single_side(rec, Side.RIGHT, params, ctx)
    if alg is AlgorithmId.LOW_LEVEL_SUM:
        return fuse_low_level(rec, LowLevelMode.SUM, params, ctx)
    if alg is AlgorithmId.LOW_LEVEL_DIFF:
        return fuse_low_level(rec, LowLevelMode.DIFF, params, ctx)
    if alg is AlgorithmId.HIGH_LEVEL_INTERSECT:
        return detect_high_level(rec, HighLevelMode.INTERSECT, params, ctx)
    if alg is AlgorithmId.HIGH_LEVEL_UNION:
        return detect_high_level(rec, HighLevelMode.UNION, params, ctx)
    raise ValueError(f"unknown algorithm: {alg}")
