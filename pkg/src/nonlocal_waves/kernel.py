"""Convolution kernels: nonnegative, unit mass, positive at the origin.

A kernel is a base profile (one of a few symmetric families, or a tabulated
node/value list) together with a focusing scale ``sigma``; the evaluated
function is ``phi_sigma(x) = phi(x / sigma) / sigma``. Every kernel is
truncated where the discarded mass drops below ``TAIL_MASS`` and renormalized
to unit mass on the truncated support.
"""
from __future__ import annotations

import csv
import functools
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy import integrate, special

FAMILIES = ("gaussian", "tophat", "laplace", "tabulated")
TAIL_MASS = 1e-13


@dataclass(frozen=True)
class KernelMoments:
    m1_abs: float
    m2: float
    sup_deriv_unit: float
    value_at_zero: float


@dataclass(frozen=True)
class Kernel:
    """Immutable kernel description.

    ``width`` is the family shape parameter of the base (``sigma = 1``)
    kernel: standard deviation for ``gaussian``, full support length for
    ``tophat``, exponential scale for ``laplace``. Tabulated kernels carry
    their nodes and values instead.
    """

    family: str
    sigma: float = 1.0
    width: float = 1.0
    nodes: tuple[float, ...] = field(default=(), repr=False)
    values: tuple[float, ...] = field(default=(), repr=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if self.family == "tabulated":
            _check_table(self.nodes, self.values)
        elif not self.width > 0:
            raise ValueError("width must be positive")

    # -- construction --------------------------------------------------

    @classmethod
    def gaussian(cls, sigma: float = 1.0, std: float = 1.0) -> Kernel:
        return cls("gaussian", sigma=sigma, width=std)

    @classmethod
    def tophat(cls, sigma: float = 1.0, width: float = 1.0) -> Kernel:
        return cls("tophat", sigma=sigma, width=width)

    @classmethod
    def laplace(cls, sigma: float = 1.0, scale: float = 1.0) -> Kernel:
        return cls("laplace", sigma=sigma, width=scale)

    @classmethod
    def tabulated(cls, nodes, values, sigma: float = 1.0) -> Kernel:
        return cls(
            "tabulated",
            sigma=sigma,
            nodes=tuple(float(x) for x in nodes),
            values=tuple(float(v) for v in values),
        )

    @classmethod
    def from_csv(cls, path, sigma: float = 1.0) -> Kernel:
        """Load a two-column ``x,value`` table (optional header row)."""
        nodes, values = [], []
        with open(Path(path), newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                try:
                    x, v = float(row[0]), float(row[1])
                except ValueError:
                    if nodes:
                        raise
                    continue  # header
                nodes.append(x)
                values.append(v)
        return cls.tabulated(nodes, values, sigma=sigma)

    def base(self) -> Kernel:
        return replace(self, sigma=1.0)

    def describe(self) -> dict:
        d = {"family": self.family, "sigma": self.sigma}
        if self.family == "tabulated":
            d["nodes"] = list(self.nodes)
            d["values"] = list(self.values)
        else:
            d["width"] = self.width
        return d

    @classmethod
    def from_description(cls, d: dict) -> Kernel:
        if d["family"] == "tabulated":
            return cls.tabulated(d["nodes"], d["values"], sigma=d.get("sigma", 1.0))
        return cls(d["family"], sigma=d.get("sigma", 1.0), width=d.get("width", 1.0))

    # -- evaluation ----------------------------------------------------

    @property
    def truncation_radius(self) -> float:
        return self.sigma * _base_radius(self)

    @property
    def symmetric(self) -> bool:
        if self.family != "tabulated":
            return True
        nodes = np.asarray(self.nodes)
        return bool(
            np.allclose(nodes, -nodes[::-1]) and np.allclose(self.values, self.values[::-1])
        )

    def __call__(self, x):
        return eval_kernel(self, x)


def _check_table(nodes, values):
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    if nodes.ndim != 1 or nodes.shape != values.shape or nodes.size < 2:
        raise ValueError("tabulated kernel needs matching 1-d node/value arrays")
    if np.any(np.diff(nodes) <= 0):
        raise ValueError("tabulated kernel nodes must be strictly increasing")
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise ValueError("tabulated kernel values must be finite and nonnegative")
    if not nodes[0] < 0 < nodes[-1] or not np.interp(0.0, nodes, values) > 0:
        raise ValueError("tabulated kernel must be positive at 0")


def _base_radius(k: Kernel) -> float:
    if k.family == "gaussian":
        return math.sqrt(2.0) * k.width * float(special.erfcinv(TAIL_MASS))
    if k.family == "laplace":
        return k.width * math.log(1.0 / TAIL_MASS)
    if k.family == "tophat":
        return 0.5 * k.width
    return float(max(-k.nodes[0], k.nodes[-1]))


def _raw_base(k: Kernel, z: np.ndarray) -> np.ndarray:
    """Unnormalized base profile (sigma = 1)."""
    if k.family == "gaussian":
        s = k.width
        return np.exp(-0.5 * (z / s) ** 2) / (s * math.sqrt(2.0 * math.pi))
    if k.family == "laplace":
        b = k.width
        return np.exp(-np.abs(z) / b) / (2.0 * b)
    if k.family == "tophat":
        return np.where(np.abs(z) <= 0.5 * k.width, 1.0 / k.width, 0.0)
    return np.interp(z, k.nodes, k.values, left=0.0, right=0.0)


def _breakpoints(k: Kernel) -> list[float]:
    r = _base_radius(k)
    if k.family == "tabulated":
        return [x for x in k.nodes if -r < x < r]
    return [0.0]


@functools.lru_cache(maxsize=256)
def _normalizer(k: Kernel) -> float:
    """1 / (mass of the truncated base profile); independent of sigma."""
    b = k.base()
    r = _base_radius(b)
    pts = _breakpoints(b)
    mass, _ = integrate.quad(
        lambda z: float(_raw_base(b, np.asarray(z))),
        -r,
        r,
        points=pts or None,
        limit=max(200, 4 * len(pts)),
        epsabs=1e-15,
        epsrel=1e-13,
    )
    return 1.0 / mass


def eval_kernel(k: Kernel, x):
    """phi_sigma(x) after truncation and renormalization (vectorized)."""
    x = np.asarray(x, dtype=float)
    z = x / k.sigma
    r = _base_radius(k)
    out = _raw_base(k, z) * (_normalizer(k.base()) / k.sigma)
    out = np.where(np.abs(z) <= r, out, 0.0)
    return out if out.ndim else float(out)


def focus(k: Kernel, sigma: float) -> Kernel:
    """Rescale the base kernel by ``sigma`` (composes with any existing scale)."""
    if not sigma > 0:
        raise ValueError("focusing scale must be positive")
    return replace(k, sigma=k.sigma * sigma)


def mass_within(k: Kernel, r: float) -> float:
    """Normalized mass of the kernel on [-r, r]."""
    if r <= 0:
        return 0.0
    rt = k.truncation_radius
    if r >= rt:
        return 1.0
    pts = [p * k.sigma for p in _breakpoints(k.base()) if -r < p * k.sigma < r]
    m, _ = integrate.quad(
        lambda x: float(eval_kernel(k, x)),
        -r,
        r,
        points=pts or None,
        limit=max(200, 4 * len(pts)),
        epsabs=1e-14,
        epsrel=1e-12,
    )
    return min(m, 1.0)


def tail_mass(k: Kernel, r: float) -> float:
    """Mass outside [-r, r]."""
    return max(0.0, 1.0 - mass_within(k, r))


def _sup_derivative(k: Kernel) -> float:
    """sup of |phi_sigma'| on (-1, 1)."""
    n = _normalizer(k.base())
    if k.family == "gaussian":
        s = k.width * k.sigma
        xs = min(s, 1.0)  # |phi'| peaks at one standard deviation
        return n * xs * math.exp(-0.5 * (xs / s) ** 2) / (s**3 * math.sqrt(2.0 * math.pi))
    if k.family == "laplace":
        b = k.width * k.sigma
        return n / (2.0 * b * b)
    if k.family == "tophat":
        # jump discontinuity inside (-1, 1) means no bounded derivative
        return math.inf if 0.5 * k.width * k.sigma < 1.0 else 0.0
    x = np.arange(-1.0, 1.0 + 5e-5, 1e-4)
    return float(np.max(np.abs(np.diff(eval_kernel(k, x)))) / 1e-4)


@functools.lru_cache(maxsize=256)
def moments(k: Kernel) -> KernelMoments:
    """Absolute first moment, second moment, derivative bound and phi(0)."""
    r = k.truncation_radius
    pts = [p * k.sigma for p in _breakpoints(k.base())]
    pts = [p for p in pts if -r < p < r] or None
    quad = functools.partial(
        integrate.quad, a=-r, b=r, points=pts, limit=400, epsabs=1e-12, epsrel=1e-12
    )
    m1, _ = quad(lambda x: abs(x) * float(eval_kernel(k, x)))
    m2, _ = quad(lambda x: x * x * float(eval_kernel(k, x)))
    return KernelMoments(
        m1_abs=m1,
        m2=m2,
        sup_deriv_unit=_sup_derivative(k),
        value_at_zero=float(eval_kernel(k, 0.0)),
    )
