"""CSV/JSON persistence for profiles, wave solutions and reports.

A profile is stored as ``<stem>.csv`` with columns ``x,u`` plus a sidecar
``<stem>.json``. Floats are written with ``repr`` so a round trip is exact and
repeated runs give byte-identical files.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .bvp import WaveSolution
from .grid import Grid, Profile
from .kernel import Kernel


def _stem(path) -> Path:
    p = Path(path)
    return p.with_suffix("") if p.suffix in (".csv", ".json") else p


def write_profile(path, g: Grid, p: Profile, meta: dict | None = None) -> Path:
    stem = _stem(path)
    stem.parent.mkdir(parents=True, exist_ok=True)
    with open(stem.with_suffix(".csv"), "w") as fh:
        fh.write("x,u\n")
        for x, u in zip(g.x, p.values):
            fh.write(f"{float(x)!r},{float(u)!r}\n")
    side = {"a": g.a, "h": g.h, "n": g.n, "left_ext": p.left_ext, "right_ext": p.right_ext}
    side.update(meta or {})
    stem.with_suffix(".json").write_text(json.dumps(side, indent=2, sort_keys=True) + "\n")
    return stem.with_suffix(".csv")


def read_profile(path) -> tuple[Grid, Profile, dict]:
    stem = _stem(path)
    meta = json.loads(stem.with_suffix(".json").read_text())
    data = np.loadtxt(stem.with_suffix(".csv"), delimiter=",", skiprows=1, ndmin=2)
    n = data.shape[0]
    g = Grid(a=float(meta["a"]), h=float(meta["h"]), n=int(meta.get("n", n)))
    if g.n != n:
        raise ValueError(f"sidecar declares {g.n} nodes but the CSV has {n}")
    return g, Profile(data[:, 1], float(meta["left_ext"]), float(meta["right_ext"])), meta


def write_solution(path, sol: WaveSolution) -> Path:
    meta = {
        "theta": sol.theta,
        "c": sol.c,
        "tau": sol.tau,
        "residual_norm": sol.residual_norm,
        "nonlinearity": sol.nonlinearity,
        "kernel": sol.kernel.describe(),
        "newton_iterations_total": sol.newton_iterations_total,
        "continuation_steps": sol.continuation_steps,
    }
    return write_profile(path, sol.grid, sol.profile, meta)


def read_solution(path) -> WaveSolution:
    g, p, meta = read_profile(path)
    return WaveSolution(
        grid=g,
        profile=p,
        c=float(meta["c"]),
        tau=float(meta["tau"]),
        theta=float(meta["theta"]),
        kernel=Kernel.from_description(meta["kernel"]),
        nonlinearity=meta.get("nonlinearity", "bistable"),
        residual_norm=float(meta["residual_norm"]),
        newton_iterations_total=int(meta.get("newton_iterations_total", 0)),
        continuation_steps=int(meta.get("continuation_steps", 0)),
    )


def write_json(path, obj: dict) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return p
