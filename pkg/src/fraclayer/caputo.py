"""Discrete Caputo derivative of order ``beta`` in (1, 2) on arbitrary meshes.

``D^beta u(x_i) = 1/Gamma(2-beta) int_0^{x_i} (x_i - t)**(1-beta) u''(t) dt``
with ``u''`` on each interval ``(x_{j-1}, x_j)`` replaced by twice the
second divided difference on ``x_{j-1}, x_j, x_{j+1}`` and the kernel
integrated exactly. The scheme is exact for polynomials of degree two.
Row ``i`` touches nodes ``0 .. i+1``, so interior rows form a lower
Hessenberg matrix. The derivative is anchored at the left endpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels

__all__ = ["CaputoOperator", "Mesh", "apply", "build_operator", "second_differences"]

MESH_KINDS = ("uniform", "graded", "shishkin")
SIDES = ("left", "right", "both")


@dataclass(frozen=True, eq=False)
class Mesh:
    """Strictly increasing nodes ``0 = x_0 < ... < x_N = L``."""

    nodes: np.ndarray
    kind: str = "custom"
    r: float = 1.0
    side: str = "left"
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        x = np.asarray(self.nodes, dtype=float)
        if x.ndim != 1 or x.size < 3:
            raise ValueError("a mesh needs at least two intervals")
        if x[0] != 0.0:
            raise ValueError("mesh must start at 0")
        if not np.all(np.diff(x) > 0.0):
            raise ValueError("mesh nodes must be strictly increasing")
        x.setflags(write=False)
        object.__setattr__(self, "nodes", x)

    @property
    def n(self) -> int:
        return self.nodes.size - 1

    @property
    def length(self) -> float:
        return float(self.nodes[-1])

    @classmethod
    def uniform(cls, n: int, length: float = 1.0) -> "Mesh":
        x = length * np.arange(n + 1) / n
        x[-1] = length
        return cls(x, kind="uniform")

    @classmethod
    def graded(cls, n: int, r: float = 2.0, side: str = "left", length: float = 1.0) -> "Mesh":
        """``x_i = L (i/N)**r`` toward ``side``; ``both`` mirrors a left-graded half."""
        if r < 1.0:
            raise ValueError(f"grading exponent must be >= 1, got {r}")
        if side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}, got {side!r}")
        if side == "left":
            x = length * (np.arange(n + 1) / n) ** r
        elif side == "right":
            x = length - length * ((n - np.arange(n + 1)) / n) ** r
        else:
            if n % 2:
                raise ValueError("graded(both) needs an even interval count")
            half = n // 2
            lhs = 0.5 * length * (np.arange(half + 1) / half) ** r
            x = np.concatenate([lhs, length - lhs[-2::-1]])
        x[0], x[-1] = 0.0, length
        return cls(x, kind="graded", r=float(r), side=side)

    @classmethod
    def shishkin(cls, n: int, eps: float, sigma: float = 2.0, side: str = "left", length: float = 1.0) -> "Mesh":
        """Piecewise uniform mesh, half the intervals inside ``tau = sigma eps ln N``."""
        if side not in ("left", "right"):
            raise ValueError("shishkin meshes refine one side")
        if n % 2:
            raise ValueError("shishkin mesh needs an even interval count")
        tau = min(0.5 * length, sigma * eps * math.log(n))
        half = n // 2
        fine = tau * np.arange(half + 1) / half
        coarse = tau + (length - tau) * np.arange(1, half + 1) / half
        x = np.concatenate([fine, coarse])
        if side == "right":
            x = length - x[::-1]
        x[0], x[-1] = 0.0, length
        return cls(x, kind="shishkin", side=side, meta={"tau": tau, "eps": eps, "sigma": sigma})

    def scaled(self, c: float) -> "Mesh":
        return Mesh(self.nodes * c, kind=self.kind, r=self.r, side=self.side, meta=dict(self.meta))


def second_difference_stencils(x: np.ndarray):
    """Node offset and weights of ``2 u[x_l, x_{l+1}, x_{l+2}]`` per interval.

    Interval ``j`` (between ``x_{j-1}`` and ``x_j``) uses ``l = j - 1``; the
    last interval reuses ``l = N - 2``.
    """
    n = x.size - 1
    left = np.arange(n)
    left[-1] = n - 2
    ha = x[left + 1] - x[left]
    hb = x[left + 2] - x[left + 1]
    cm = 2.0 / (ha * (ha + hb))
    c0 = -2.0 / (ha * hb)
    cp = 2.0 / (hb * (ha + hb))
    return left, cm, c0, cp


@dataclass(frozen=True, eq=False)
class CaputoOperator:
    """Discrete ``D^beta`` on a mesh, stored in factored form.

    ``kernel`` is ``(N+1) x N``: exact integrals of the fractional kernel over
    each interval. Applying the operator takes second divided differences
    first, which keeps constants and linears exactly in the null space.
    ``weights`` is the equivalent dense nodal matrix used for assembly.
    """

    beta: float
    mesh: Mesh
    kernel: np.ndarray

    def __call__(self, values) -> np.ndarray:
        return apply(self, values)

    @cached_property
    def weights(self) -> np.ndarray:
        n = self.mesh.n
        k = self.kernel
        _, cm, c0, cp = second_difference_stencils(self.mesh.nodes)
        w = np.zeros((n + 1, n + 1))
        body = slice(0, n - 1)
        w[:, 0 : n - 1] += k[:, body] * cm[body]
        w[:, 1:n] += k[:, body] * c0[body]
        w[:, 2 : n + 1] += k[:, body] * cp[body]
        last = k[:, n - 1]
        w[:, n - 2] += last * cm[n - 1]
        w[:, n - 1] += last * c0[n - 1]
        w[:, n] += last * cp[n - 1]
        w.setflags(write=False)
        return w

    def row(self, i: int) -> np.ndarray:
        """Nodal weights of row ``i``, support ``0 .. min(i+1, N)``."""
        return self.weights[i, : min(i + 1, self.mesh.n) + 1]


def build_operator(mesh: Mesh, beta: float) -> CaputoOperator:
    if not 1.0 < beta < 2.0:
        raise ValueError(f"beta must lie in (1, 2), got {beta}")
    k = _kernels.caputo_kernel(mesh.nodes, float(beta))
    k.setflags(write=False)
    return CaputoOperator(float(beta), mesh, k)


def second_differences(x: np.ndarray, u: np.ndarray) -> np.ndarray:
    """``2 u[x_l, x_{l+1}, x_{l+2}]`` per interval, as a difference of slopes."""
    left, *_ = second_difference_stencils(x)
    slopes = np.diff(u) / np.diff(x)
    return 2.0 * (slopes[left + 1] - slopes[left]) / (x[left + 2] - x[left])


def apply(op: CaputoOperator, values) -> np.ndarray:
    """Nodal values of the discrete Caputo derivative (node 0 gives 0)."""
    v = np.asarray(values, dtype=float)
    if v.shape != (op.mesh.n + 1,):
        raise ValueError(f"expected {op.mesh.n + 1} nodal values, got shape {v.shape}")
    return op.kernel @ second_differences(op.mesh.nodes, v)
