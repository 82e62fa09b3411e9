"""Uniform box grids, extended profiles and the discrete convolution phi * u.

Outside the box ``[-a, a]`` a profile takes constant extension values
(``1`` on the left and ``0`` on the right for the travelling-wave problem);
inside it is the piecewise-linear interpolant of its nodal values.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .kernel import Kernel, eval_kernel


@dataclass(frozen=True)
class Grid:
    a: float
    h: float
    n: int

    def __post_init__(self):
        if self.n % 2 != 1 or self.n < 3:
            raise ValueError("grid needs an odd node count >= 3")

    @property
    def x(self) -> np.ndarray:
        half = (self.n - 1) // 2
        return np.arange(-half, half + 1) * self.h

    @property
    def center(self) -> int:
        return (self.n - 1) // 2

    def refine(self) -> Grid:
        return Grid(self.a, self.h / 2, 2 * self.n - 1)


@dataclass
class Profile:
    values: np.ndarray
    left_ext: float = 1.0
    right_ext: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)

    def __add__(self, other: Profile) -> Profile:
        return Profile(
            self.values + other.values,
            self.left_ext + other.left_ext,
            self.right_ext + other.right_ext,
        )

    def __rmul__(self, alpha: float) -> Profile:
        return Profile(alpha * self.values, alpha * self.left_ext, alpha * self.right_ext)

    def copy(self) -> Profile:
        return Profile(self.values.copy(), self.left_ext, self.right_ext)


def make_grid(a: float, h_target: float) -> Grid:
    """Largest spacing ``h <= h_target`` with ``a / h`` an integer.

    The node count is then odd and ``x = 0`` is a node.
    """
    if not a > 0:
        raise ValueError("half-length a must be positive")
    if not 0 < h_target < a:
        raise ValueError("need 0 < h_target < a")
    half = math.ceil(a / h_target * (1 - 1e-12))
    return Grid(a=float(a), h=a / half, n=2 * half + 1)


def extend_value(p: Profile, g: Grid, x):
    """Evaluate the extended profile at arbitrary points (vectorized)."""
    x = np.asarray(x, dtype=float)
    inside = np.interp(x, g.x, p.values)
    out = np.where(x < -g.a, p.left_ext, np.where(x > g.a, p.right_ext, inside))
    return out if out.ndim else float(out)


def quadrature_rule(k: Kernel, h: float, refine: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Trapezoid nodes and weights for integrals against ``k``.

    The step is at most ``min(h, R/200)`` and divides ``h`` so quadrature
    points line up with the interpolation nodes; ``refine`` divides it
    further. Weights are rescaled to sum to one so constants are reproduced
    exactly.
    """
    r = k.truncation_radius
    target = min(h, r / 200.0)
    dy = h / (math.ceil(h / target * (1 - 1e-12)) * int(refine))
    q = math.ceil(r / dy * (1 - 1e-12))
    y = np.arange(-q, q + 1) * dy
    w = np.full(y.size, dy)
    w[0] = w[-1] = 0.5 * dy
    w = w * eval_kernel(k, y)
    return y, w / w.sum()


def convolve(k: Kernel, p: Profile, g: Grid, refine: int = 1) -> Profile:
    """Reference path: direct quadrature of phi * u at every node."""
    y, w = quadrature_rule(k, g.h, refine)
    samples = extend_value(p, g, g.x[:, None] - y[None, :])
    return Profile(samples @ w, p.left_ext, p.right_ext)


@dataclass(frozen=True)
class ConvolutionOperator:
    """The quadrature of :func:`convolve` assembled as an affine map.

    ``(phi * u)_i = (W @ values)_i + left[i] * left_ext + right[i] * right_ext``
    """

    W: sparse.csr_matrix = field(repr=False)
    left: np.ndarray = field(repr=False)
    right: np.ndarray = field(repr=False)

    def apply(self, values: np.ndarray, left_ext: float = 1.0, right_ext: float = 0.0):
        return self.W @ values + left_ext * self.left + right_ext * self.right

    def __call__(self, p: Profile) -> Profile:
        return Profile(self.apply(p.values, p.left_ext, p.right_ext), p.left_ext, p.right_ext)


@functools.lru_cache(maxsize=32)
def convolution_operator(k: Kernel, g: Grid) -> ConvolutionOperator:
    y, w = quadrature_rule(k, g.h)
    n = g.n
    xs = g.x[:, None] - y[None, :]
    ww = np.broadcast_to(w, xs.shape)
    left = np.where(xs < -g.a, ww, 0.0).sum(axis=1)
    right = np.where(xs > g.a, ww, 0.0).sum(axis=1)

    mask = (xs >= -g.a) & (xs <= g.a)
    rows = np.broadcast_to(np.arange(n)[:, None], xs.shape)[mask]
    s = (xs[mask] + g.a) / g.h
    j = np.clip(np.floor(s).astype(int), 0, n - 2)
    t = s - j
    wm = ww[mask]
    data = np.concatenate([wm * (1 - t), wm * t])
    W = sparse.coo_matrix(
        (data, (np.concatenate([rows, rows]), np.concatenate([j, j + 1]))), shape=(n, n)
    ).tocsr()
    W.sum_duplicates()
    return ConvolutionOperator(W, left, right)
