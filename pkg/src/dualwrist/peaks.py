"""First-order-difference peak detection with amplitude and gap gates."""
from __future__ import annotations

import bisect

import numpy as np

from .core import PeakSet, ScalarSeries

try:  # optional speedup; the pure-Python path is semantically identical
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None


def candidate_peaks(series: ScalarSeries) -> PeakSet:
    """Every local maximum of the series.

    A peak is a sample where the first-order difference turns from positive to
    negative; a plateau of equal maxima contributes its first sample only.
    Endpoints are never peaks.
    """
    v = series.values
    if len(v) < 3:
        raise ValueError("need at least 3 samples for peak detection")
    d = np.diff(v)
    nz = np.flatnonzero(d)
    if len(nz) < 2:
        return PeakSet.empty()
    sel = (d[nz[:-1]] > 0) & (d[nz[1:]] < 0)
    idx = nz[:-1][sel] + 1
    return PeakSet(times=series.t0 + idx / series.rate, amplitudes=v[idx])


def _greedy_keep_py(times: np.ndarray, order: np.ndarray, min_gap: float) -> np.ndarray:
    keep = np.zeros(len(times), dtype=np.bool_)
    kept_times: list = []
    for i in order:
        ti = times[i]
        pos = bisect.bisect_left(kept_times, ti)
        if pos > 0 and ti - kept_times[pos - 1] <= min_gap:
            continue
        if pos < len(kept_times) and kept_times[pos] - ti <= min_gap:
            continue
        kept_times.insert(pos, ti)
        keep[i] = True
    return keep


if njit is not None:

    @njit(cache=True)
    def _greedy_keep_fast(times, order, min_gap):  # pragma: no cover - mirrors _greedy_keep_py
        n = times.size
        keep = np.zeros(n, dtype=np.bool_)
        kept = np.empty(n)
        m = 0
        for k in range(order.size):
            i = order[k]
            t = times[i]
            lo, hi = 0, m
            while lo < hi:
                mid = (lo + hi) // 2
                if kept[mid] < t:
                    lo = mid + 1
                else:
                    hi = mid
            if lo > 0 and t - kept[lo - 1] <= min_gap:
                continue
            if lo < m and kept[lo] - t <= min_gap:
                continue
            for j in range(m, lo, -1):
                kept[j] = kept[j - 1]
            kept[lo] = t
            m += 1
            keep[i] = True
        return keep

else:  # pragma: no cover
    _greedy_keep_fast = None


def suppress_peaks(peaks: PeakSet, min_amp: float, min_gap: float) -> PeakSet:
    """Amplitude gate followed by greedy min-gap thinning.

    Peaks are visited in descending amplitude (ties: earlier time first); a
    peak survives when it sits strictly more than ``min_gap`` from every peak
    kept so far.
    """
    sel = peaks.amplitudes >= min_amp
    t = peaks.times[sel]
    a = peaks.amplitudes[sel]
    if len(t) == 0:
        return PeakSet.empty()
    order = np.lexsort((t, -a))
    if _greedy_keep_fast is not None:
        keep = _greedy_keep_fast(t, order, float(min_gap))
    else:
        keep = _greedy_keep_py(t, order, min_gap)
    return PeakSet(times=t[keep], amplitudes=a[keep])


def detect_peaks(series: ScalarSeries, min_amp: float, min_gap: float) -> PeakSet:
    """Local maxima filtered by minimum amplitude and minimum inter-peak gap."""
    if min_gap < 0:
        raise ValueError("min_gap must be >= 0")
    return suppress_peaks(candidate_peaks(series), min_amp, min_gap)
