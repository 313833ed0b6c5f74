"""Finite-difference solution of the model boundary value problems.

Supported problems (``beta = 2 - alpha``):

``classical_cd``          ``-eps u'' - u' = f`` (standard three-point scheme)
``convection_diffusion``  ``-eps D^beta u - u' = f``
``reaction_diffusion``    ``-eps D^beta u + u = f``
``stretched_layer_conv``  ``D^beta V + V' = 0`` on ``[0, eps**(-1/(1-alpha))]``, ``V(0)=1``
``stretched_layer_reac``  ``D^beta V = V`` on ``[0, eps**(-1/(2-alpha))]``, ``V(0)=1``

The first-order term is upwinded toward ``x = 1``. Every interior row has
support on nodes ``0 .. i+1``, so the system is dense lower Hessenberg and is
solved by bottom-up elimination in O(N^2).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .caputo import Mesh, build_operator
from .layers import (
    classical_conv_layer,
    conv_layer_correction,
    conv_layer_correction_general,
    vstar_half_closed,
)

__all__ = [
    "Constant",
    "ConvergenceRow",
    "GrowthWarning",
    "LinearSystem",
    "MonomialSum",
    "ProblemSpec",
    "SingularPivotError",
    "Solution",
    "assemble",
    "converge_study",
    "default_mesh",
    "exact_solution",
    "make_mesh",
    "solve_bvp",
]

KINDS = (
    "classical_cd",
    "convection_diffusion",
    "reaction_diffusion",
    "stretched_layer_conv",
    "stretched_layer_reac",
)
GROWTH_LIMIT = 1e8
RESIDUAL_RTOL = 1e-10

SingularPivotError = _kernels.SingularPivotError


class GrowthWarning(RuntimeWarning):
    """Elimination growth factor above :data:`GROWTH_LIMIT`."""


@dataclass(frozen=True)
class Constant:
    value: float

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.full_like(np.asarray(x, dtype=float), self.value)


@dataclass(frozen=True)
class MonomialSum:
    """``sum c_k x**p_k`` given as ``((c_1, p_1), (c_2, p_2), ...)``."""

    terms: tuple

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for coef, power in self.terms:
            out += coef * x**power if power != 0 else coef
        return out


@dataclass(frozen=True)
class ProblemSpec:
    kind: str
    alpha: float = 0.5
    eps: float = 1e-2
    rhs: Constant | MonomialSum = Constant(-1.0)
    left_bc: float = 0.0
    right_bc: float = 0.0
    domain_length: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown problem kind {self.kind!r}; expected one of {KINDS}")
        if not isinstance(self.rhs, (Constant, MonomialSum)):
            raise TypeError(f"unsupported right-hand side {self.rhs!r}")
        if self.kind == "classical_cd":
            if self.alpha != 0.0:
                raise ValueError("classical_cd has alpha = 0")
        elif not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        # eps = 0 is admitted as the degenerate reduced problem
        if not 0.0 <= self.eps <= 1.0:
            raise ValueError(f"eps must lie in [0, 1], got {self.eps}")
        if self.kind.startswith("stretched") and self.eps <= 0.0:
            raise ValueError("stretched problems need eps > 0")
        if not self.domain_length > 0.0:
            raise ValueError("domain_length must be positive")

    @property
    def beta(self) -> float:
        return 2.0 - self.alpha

    @classmethod
    def classical(cls, eps: float, rhs=Constant(-1.0)) -> "ProblemSpec":
        return cls("classical_cd", alpha=0.0, eps=eps, rhs=rhs)

    @classmethod
    def convection(cls, alpha: float, eps: float, rhs=Constant(-1.0)) -> "ProblemSpec":
        return cls("convection_diffusion", alpha=alpha, eps=eps, rhs=rhs)

    @classmethod
    def reaction(cls, alpha: float, eps: float, rhs=Constant(-1.0)) -> "ProblemSpec":
        return cls("reaction_diffusion", alpha=alpha, eps=eps, rhs=rhs)

    @classmethod
    def stretched_conv(cls, alpha: float, eps: float) -> "ProblemSpec":
        length = eps ** (-1.0 / (1.0 - alpha))
        return cls("stretched_layer_conv", alpha, eps, Constant(0.0), 1.0, 0.0, length)

    @classmethod
    def stretched_reac(cls, alpha: float, eps: float) -> "ProblemSpec":
        length = eps ** (-1.0 / (2.0 - alpha))
        return cls("stretched_layer_reac", alpha, eps, Constant(0.0), 1.0, 0.0, length)


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """Interior equations: ``matrix @ u[1:N] = rhs``; ``rows`` spans all nodes."""

    matrix: np.ndarray
    rhs: np.ndarray
    rows: np.ndarray
    forcing: np.ndarray
    mesh: Mesh


@dataclass(frozen=True, eq=False)
class Solution:
    mesh: Mesh
    values: np.ndarray
    residual_norm: float
    bc_error: float
    growth: float

    @property
    def x(self) -> np.ndarray:
        return self.mesh.nodes


def _second_derivative_rows(mesh: Mesh) -> np.ndarray:
    # three-point 2 u[x_{i-1}, x_i, x_{i+1}] on interior nodes
    x = mesh.nodes
    n = mesh.n
    rows = np.zeros((n - 1, n + 1))
    hl = np.diff(x)[:-1]
    hr = np.diff(x)[1:]
    i = np.arange(n - 1)
    rows[i, i] = 2.0 / (hl * (hl + hr))
    rows[i, i + 1] = -2.0 / (hl * hr)
    rows[i, i + 2] = 2.0 / (hr * (hl + hr))
    return rows


def assemble(p: ProblemSpec, mesh: Mesh) -> LinearSystem:
    """Dense lower-Hessenberg system for the interior nodal values."""
    if not math.isclose(mesh.length, p.domain_length, rel_tol=1e-12):
        raise ValueError(f"mesh length {mesh.length} does not match domain {p.domain_length}")
    n = mesh.n
    x = mesh.nodes
    if p.kind == "classical_cd":
        diffusion = _second_derivative_rows(mesh)
    else:
        diffusion = np.array(build_operator(mesh, p.beta).weights[1:n])
    coef = 1.0 if p.kind.startswith("stretched") else p.eps
    rows = -coef * diffusion
    i = np.arange(n - 1)
    if p.kind in ("classical_cd", "convection_diffusion", "stretched_layer_conv"):
        h = np.diff(x)[1:]
        rows[i, i + 1] += 1.0 / h
        rows[i, i + 2] -= 1.0 / h
    else:
        rows[i, i + 1] += 1.0
    forcing = p.rhs(x[1:n])
    rhs = forcing - rows[:, 0] * p.left_bc - rows[:, n] * p.right_bc
    return LinearSystem(rows[:, 1:n].copy(), rhs, rows, forcing, mesh)


def solve_bvp(p: ProblemSpec, mesh: Mesh | None = None) -> Solution:
    mesh = default_mesh(p) if mesh is None else mesh
    system = assemble(p, mesh)
    interior, growth = _kernels.hessenberg_solve(system.matrix, system.rhs)
    if growth > GROWTH_LIMIT:
        warnings.warn(f"elimination growth factor {growth:.3g} exceeds {GROWTH_LIMIT:g}", GrowthWarning, stacklevel=2)
    residual = float(np.max(np.abs(system.matrix @ interior - system.rhs), initial=0.0))
    bnorm = float(np.max(np.abs(system.rhs), initial=0.0))
    if residual > RESIDUAL_RTOL * max(bnorm, np.finfo(float).tiny):
        warnings.warn(f"residual {residual:.3g} above {RESIDUAL_RTOL:g} * |b| = {RESIDUAL_RTOL * bnorm:.3g}", RuntimeWarning, stacklevel=2)
    values = np.concatenate([[p.left_bc], interior, [p.right_bc]])
    bc_error = abs(values[0] - p.left_bc) + abs(values[-1] - p.right_bc)
    values.setflags(write=False)
    return Solution(mesh, values, residual, bc_error, growth)


def make_mesh(kind: str, n: int, *, r: float = 2.0, side: str = "left", length: float = 1.0, eps: float | None = None) -> Mesh:
    if kind == "uniform":
        return Mesh.uniform(n, length)
    if kind == "graded":
        return Mesh.graded(n, r, side, length)
    if kind == "shishkin":
        if eps is None:
            raise ValueError("shishkin mesh needs eps")
        return Mesh.shishkin(n, eps, side=side if side != "both" else "left", length=length)
    raise ValueError(f"unknown mesh kind {kind!r}")


def default_mesh_params(p: ProblemSpec) -> dict:
    if p.kind == "classical_cd":
        return {"kind": "shishkin", "side": "left"}
    if p.kind in ("reaction_diffusion", "stretched_layer_reac"):
        return {"kind": "graded", "r": 2.0, "side": "both"}
    return {"kind": "graded", "r": 2.0, "side": "left"}


def default_mesh(p: ProblemSpec, n: int = 1024) -> Mesh:
    params = default_mesh_params(p)
    return make_mesh(params.pop("kind"), n, length=p.domain_length, eps=p.eps, **params)


def exact_solution(p: ProblemSpec) -> Callable[[np.ndarray], np.ndarray] | None:
    """Semi-analytic reference solution when one exists, else ``None``."""
    homogeneous = p.left_bc == 0.0 and p.right_bc == 0.0 and p.domain_length == 1.0
    unit_load = isinstance(p.rhs, Constant) and p.rhs.value == -1.0
    if p.kind == "classical_cd" and homogeneous and unit_load and 0.0 < p.eps < 1.0:
        return lambda x: np.asarray(x, dtype=float) - 1.0 + classical_conv_layer(np.asarray(x, dtype=float), p.eps)
    if p.kind == "convection_diffusion" and homogeneous and unit_load and 0.0 < p.eps < 1.0:
        # x - 1 solves the equation exactly (D^beta kills linears), the layer is homogeneous
        if p.alpha == 0.5:
            return lambda x: np.asarray(x, dtype=float) - 1.0 + conv_layer_correction(np.asarray(x, dtype=float), p.eps)
        return lambda x: np.asarray(x, dtype=float) - 1.0 + conv_layer_correction_general(np.asarray(x, dtype=float), p.eps, p.alpha)
    if p.kind == "stretched_layer_conv" and p.alpha == 0.5 and 0.0 < p.eps < 1.0:
        right = vstar_half_closed(p.domain_length)
        return lambda xi: 1.0 - vstar_half_closed(np.asarray(xi, dtype=float)) / right
    return None


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    error: float
    order: float | None


def _restrict(fine: Solution, coarse_x: np.ndarray) -> np.ndarray:
    fx = fine.mesh.nodes
    idx = np.searchsorted(fx, coarse_x)
    idx = np.clip(idx, 0, fx.size - 1)
    if np.array_equal(fx[idx], coarse_x):
        return fine.values[idx]
    return np.interp(coarse_x, fx, fine.values)


def converge_study(
    p: ProblemSpec,
    ns: Sequence[int],
    *,
    mesh_kind: str | None = None,
    r: float = 2.0,
    side: str | None = None,
    exact: Callable[[np.ndarray], np.ndarray] | None = None,
    reference_n: int | None = None,
) -> list[ConvergenceRow]:
    """Max nodal errors over a mesh family and observed orders.

    The reference is ``exact`` if given, else :func:`exact_solution`, else a
    solution on ``reference_n`` intervals (default ``2 * max(ns)``) of the
    same mesh family, compared at the coarse nodes.
    """
    ns = list(ns)
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("interval counts must increase")
    params = default_mesh_params(p)
    kind = mesh_kind or params["kind"]
    side = side or params.get("side", "left")

    def mesh_for(n: int) -> Mesh:
        return make_mesh(kind, n, r=r, side=side, length=p.domain_length, eps=p.eps)

    ref_fn = exact if exact is not None else exact_solution(p)
    ref_sol = None
    if ref_fn is None:
        ref_sol = solve_bvp(p, mesh_for(reference_n or 2 * ns[-1]))
    rows: list[ConvergenceRow] = []
    prev = None
    for n in ns:
        sol = solve_bvp(p, mesh_for(n))
        ref = ref_fn(sol.x) if ref_fn is not None else _restrict(ref_sol, sol.x)
        err = float(np.max(np.abs(sol.values - ref)))
        order = None
        if prev is not None and err > 0.0 and prev[1] > 0.0:
            order = math.log(prev[1] / err) / math.log(n / prev[0])
        rows.append(ConvergenceRow(n, err, order))
        prev = (n, err)
    return rows
