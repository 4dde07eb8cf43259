"""Declarative session configuration: simulator spec, parameter grids, CV setup.

One versioned JSON file drives simulate/tune runs. Unknown keys are errors.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

from .core import DetectorParams, WalkTask
from .simulate import DEFAULT_TASK_COUNTS, CorpusSpec
from .tuning import ParamGrid

CONFIG_VERSION = 1

_TOP_KEYS = {"version", "corpus", "cv", "grid", "params"}
_CORPUS_KEYS = {"seed", "tasks"}
_CV_KEYS = {"folds", "seed"}
_GRID_KEYS = {
    "smooth_single",
    "smooth_fused",
    "min_peak_amp",
    "min_peak_gap",
    "fuse_max_dist",
    "fuse_min_dist",
}


def default_config() -> dict:
    grid = ParamGrid()
    return {
        "version": CONFIG_VERSION,
        "corpus": {
            "seed": 42,
            "tasks": {task.value: n for task, n in DEFAULT_TASK_COUNTS.items()},
        },
        "cv": {"folds": 5, "seed": 0},
        "grid": {name: list(getattr(grid, name)) for name in sorted(_GRID_KEYS)},
    }


def _reject_unknown(d: dict, allowed: set, where: str) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise ValueError(f"unknown config key(s) in {where}: {sorted(unknown)}")


def validate_config(cfg: dict) -> dict:
    if not isinstance(cfg, dict):
        raise ValueError("config must be a JSON object")
    _reject_unknown(cfg, _TOP_KEYS, "top level")
    if cfg.get("version") != CONFIG_VERSION:
        raise ValueError(f"unsupported config version {cfg.get('version')!r}")
    if "corpus" in cfg:
        _reject_unknown(cfg["corpus"], _CORPUS_KEYS, "corpus")
        tasks = cfg["corpus"].get("tasks", {})
        known = {t.value for t in WalkTask}
        _reject_unknown(tasks, known, "corpus.tasks")
    if "cv" in cfg:
        _reject_unknown(cfg["cv"], _CV_KEYS, "cv")
    if "grid" in cfg:
        _reject_unknown(cfg["grid"], _GRID_KEYS, "grid")
    if "params" in cfg:
        for alg, params in cfg["params"].items():
            DetectorParams.from_dict(params)  # raises on unknown fields
    return cfg


def load_config(path) -> dict:
    with open(path) as f:
        cfg = json.load(f)
    return validate_config(cfg)


def corpus_spec_from_config(cfg: dict, seed_override: Optional[int] = None) -> CorpusSpec:
    corpus = cfg.get("corpus", {})
    tasks = corpus.get("tasks")
    counts = (
        {WalkTask(name): int(n) for name, n in tasks.items()}
        if tasks is not None
        else dict(DEFAULT_TASK_COUNTS)
    )
    seed = seed_override if seed_override is not None else corpus.get("seed", 42)
    return CorpusSpec(task_counts=counts, seed=int(seed))


def grid_from_config(cfg: dict) -> ParamGrid:
    grid_cfg = cfg.get("grid")
    if not grid_cfg:
        return ParamGrid()
    defaults = ParamGrid()
    kwargs = {
        name: tuple(grid_cfg.get(name, getattr(defaults, name))) for name in _GRID_KEYS
    }
    return ParamGrid(**kwargs)


def write_config(cfg: dict, path) -> None:
    with open(Path(path), "w") as f:
        json.dump(cfg, f, indent=2, sort_keys=True)
        f.write("\n")
