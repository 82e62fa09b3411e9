"""Reaction terms f(u, v) with v = phi * u, and their partial derivatives."""
from __future__ import annotations

import numpy as np

NONLINEARITIES = ("bistable", "ignition")


def bistable(u, v, theta):
    """``1_{u >= 0} u (u - theta)(1 - v)`` and its partials in u and v."""
    u = np.asarray(u, dtype=float)
    on = u >= 0
    f = np.where(on, u * (u - theta) * (1 - v), 0.0)
    fu = np.where(on, (2 * u - theta) * (1 - v), 0.0)
    fv = np.where(on, -u * (u - theta), 0.0)
    return f, fu, fv


def ignition(u, v, theta):
    """``(u - theta)(1 - v)`` where ``u >= theta``, zero below.

    The indicator is frozen when differentiating (semi-smooth Newton).
    """
    u = np.asarray(u, dtype=float)
    on = u >= theta
    f = np.where(on, (u - theta) * (1 - v), 0.0)
    fu = np.where(on, 1 - v, 0.0)
    fv = np.where(on, -(u - theta), 0.0)
    return f, fu, fv


def get(name: str):
    if name == "bistable":
        return bistable
    if name == "ignition":
        return ignition
    raise ValueError(f"unknown nonlinearity {name!r}; expected one of {NONLINEARITIES}")
