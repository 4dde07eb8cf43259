"""Corpus-level detection engine with caching.

Runs the same pipelines as :mod:`dualwrist.fusion` but caches smoothed
signals, normalization contexts, and peak candidates across recordings and
parameter grid points, which is what makes exhaustive tuning affordable.
Results are identical to the plain per-recording functions.
"""
from __future__ import annotations

from typing import Dict, Iterable, Tuple

from .core import AlgorithmId, DetectorParams, PeakSet, Recording, ScalarSeries, Side
from .fusion import (
    HighLevelMode,
    LowLevelMode,
    StepDetection,
    fused_signal,
    intersect_fuse,
    smoothed_magnitude,
    union_fuse,
)
from .peaks import candidate_peaks, suppress_peaks
from .preprocess import NormalizationContext, fit_normalization, min_max_normalize

_LOW_LEVEL_MODE = {
    AlgorithmId.LOW_LEVEL_SUM: LowLevelMode.SUM,
    AlgorithmId.LOW_LEVEL_DIFF: LowLevelMode.DIFF,
}


class CorpusEngine:
    """Caching evaluator for the six detectors over a fixed corpus.

    Normalization contexts are always fitted over the whole corpus (all
    samples), keyed by the signal family they describe: per-sensor smoothed
    magnitudes for single-side and high-level pipelines, fused signals for
    low-level pipelines.
    """

    def __init__(self, recordings: Iterable[Recording]):
        self.recordings = {r.id: r for r in recordings}
        if not self.recordings:
            raise ValueError("corpus must not be empty")
        self._smoothed: Dict[Tuple, ScalarSeries] = {}
        self._fused: Dict[Tuple, ScalarSeries] = {}
        self._ctx: Dict[Tuple, NormalizationContext] = {}
        self._candidates: Dict[Tuple, PeakSet] = {}
        self._filtered: Dict[Tuple, PeakSet] = {}
        self._counts: Dict[Tuple, int] = {}
        # Grid searches sweep one signal family at a time, so bounded caches
        # only pay a recompute at family transitions.
        self._signal_cap = 3 * len(self.recordings) + 8

    @staticmethod
    def _bounded(cache: Dict, cap: int) -> Dict:
        if len(cache) > cap:
            cache.clear()
        return cache

    # -- signal caches ------------------------------------------------------

    def _single(self, rid: str, side: Side, window: float) -> ScalarSeries:
        key = (rid, side, window)
        if key not in self._smoothed:
            self._bounded(self._smoothed, self._signal_cap)[key] = smoothed_magnitude(
                self.recordings[rid], side, window
            )
        return self._smoothed[key]

    def _fused_signal(self, rid: str, mode: LowLevelMode, params: DetectorParams) -> ScalarSeries:
        key = (rid, mode, params.smooth_single, params.smooth_fused)
        if key not in self._fused:
            self._bounded(self._fused, self._signal_cap)[key] = fused_signal(
                self.recordings[rid], mode, params
            )
        return self._fused[key]

    # -- normalization contexts --------------------------------------------

    def context_single(self, window: float) -> NormalizationContext:
        """Context over both wrists of every recording at this smoothing window."""
        key = ("single", window)
        if key not in self._ctx:
            self._ctx[key] = fit_normalization(
                self._single(rid, side, window)
                for rid in self.recordings
                for side in (Side.LEFT, Side.RIGHT)
            )
        return self._ctx[key]

    def context_fused(self, mode: LowLevelMode, params: DetectorParams) -> NormalizationContext:
        key = ("fused", mode, params.smooth_single, params.smooth_fused)
        if key not in self._ctx:
            self._ctx[key] = fit_normalization(
                self._fused_signal(rid, mode, params) for rid in self.recordings
            )
        return self._ctx[key]

    def context_for(self, alg: AlgorithmId, params: DetectorParams) -> NormalizationContext:
        if alg in _LOW_LEVEL_MODE:
            return self.context_fused(_LOW_LEVEL_MODE[alg], params)
        return self.context_single(params.smooth_single)

    # -- peak candidates ----------------------------------------------------

    def _normalized_candidates(self, key: Tuple, series: ScalarSeries, ctx: NormalizationContext) -> PeakSet:
        if key not in self._candidates:
            self._bounded(self._candidates, self._signal_cap)[key] = candidate_peaks(
                min_max_normalize(series, ctx)
            )
        return self._candidates[key]

    def _side_peaks(self, rid: str, side: Side, params: DetectorParams) -> PeakSet:
        """Filtered single-side peaks; small cache keyed by the peak parameters."""
        fkey = (rid, side, params.smooth_single, params.min_peak_amp, params.min_peak_gap)
        hit = self._filtered.get(fkey)
        if hit is not None:
            return hit
        ctx = self.context_single(params.smooth_single)
        cand = self._normalized_candidates(
            (rid, side, params.smooth_single),
            self._single(rid, side, params.smooth_single),
            ctx,
        )
        out = suppress_peaks(cand, params.min_peak_amp, params.min_peak_gap)
        if len(self._filtered) > 4096:
            self._filtered.clear()
        self._filtered[fkey] = out
        return out

    # -- detection ----------------------------------------------------------

    def steps(self, alg: AlgorithmId, rid: str, params: DetectorParams) -> PeakSet:
        if alg is AlgorithmId.NO_FUSION_LEFT:
            return self._side_peaks(rid, Side.LEFT, params)
        if alg is AlgorithmId.NO_FUSION_RIGHT:
            return self._side_peaks(rid, Side.RIGHT, params)
        if alg in _LOW_LEVEL_MODE:
            mode = _LOW_LEVEL_MODE[alg]
            ctx = self.context_fused(mode, params)
            cand = self._normalized_candidates(
                (rid, mode, params.smooth_single, params.smooth_fused),
                self._fused_signal(rid, mode, params),
                ctx,
            )
            return suppress_peaks(cand, params.min_peak_amp, params.min_peak_gap)
        t_l = self._side_peaks(rid, Side.LEFT, params)
        t_r = self._side_peaks(rid, Side.RIGHT, params)
        if alg is AlgorithmId.HIGH_LEVEL_INTERSECT:
            if params.fuse_max_dist is None:
                raise ValueError("intersection fusion requires fuse_max_dist")
            return intersect_fuse(t_l, t_r, params.fuse_max_dist)
        if alg is AlgorithmId.HIGH_LEVEL_UNION:
            if params.fuse_min_dist is None:
                raise ValueError("union fusion requires fuse_min_dist")
            return union_fuse(t_l, t_r, params.fuse_min_dist)
        raise ValueError(f"unknown algorithm: {alg}")

    def count(self, alg: AlgorithmId, rid: str, params: DetectorParams) -> int:
        key = (alg, rid, params)
        if key not in self._counts:
            self._counts[key] = len(self.steps(alg, rid, params))
        return self._counts[key]

    def detect(self, alg: AlgorithmId, rid: str, params: DetectorParams) -> StepDetection:
        steps = self.steps(alg, rid, params)
        return StepDetection(algorithm=alg, steps=steps, count=len(steps))
