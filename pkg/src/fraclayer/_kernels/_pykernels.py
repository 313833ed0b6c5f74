"""Numpy implementations of the O(N^2) kernels (fallback backend)."""

from __future__ import annotations

import numpy as np

from ..specfun import gamma


class SingularPivotError(ArithmeticError):
    """Zero pivot met during Hessenberg elimination."""

    def __init__(self, index: int, pivot: float) -> None:
        super().__init__(f"singular pivot {pivot!r} at unknown {index}")
        self.index = index
        self.pivot = pivot


def caputo_kernel(x: np.ndarray, beta: float) -> np.ndarray:
    """Exact kernel integrals ``kappa[i, j-1]`` for node ``i`` and interval ``j``.

    ``((x_i - x_{j-1})**g - (x_i - x_j)**g) / Gamma(1 + g)`` with
    ``g = 2 - beta``, zero for intervals right of ``x_i``.
    """
    x = np.ascontiguousarray(x, dtype=float)
    g = 2.0 - beta
    scale = 1.0 / gamma(1.0 + g)
    h = np.diff(x)
    b = x[:, None] - x[None, 1:]
    bpos = np.where(b > 0.0, b, 1.0)
    # a**g - b**g = b**g expm1(g log1p(h/b)) avoids cancellation far from the diagonal
    diag = np.clip(h[None, :] + b, 0.0, None) ** g
    kappa = np.where(b > 0.0, bpos**g * np.expm1(g * np.log1p(h[None, :] / bpos)), diag)
    return np.where(b >= 0.0, kappa * scale, 0.0)


def hessenberg_solve(a: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, float]:
    """Solve a lower-Hessenberg system by bottom-up elimination, no pivoting.

    Returns the solution and the growth factor ``max|reduced| / max|a|``.
    """
    m = np.array(a, dtype=float, copy=True)
    y = np.array(rhs, dtype=float, copy=True)
    n = y.size
    amax = float(np.abs(m).max()) if n else 0.0
    growth = amax
    for k in range(n - 1, 0, -1):
        piv = m[k, k]
        if piv == 0.0 or not np.isfinite(piv):
            raise SingularPivotError(k, piv)
        f = m[k - 1, k] / piv
        if f != 0.0:
            m[k - 1, :k] -= f * m[k, :k]
            y[k - 1] -= f * y[k]
            m[k - 1, k] = 0.0
            growth = max(growth, float(np.abs(m[k - 1, :k]).max()))
    if n and (m[0, 0] == 0.0 or not np.isfinite(m[0, 0])):
        raise SingularPivotError(0, m[0, 0])
    sol = np.empty(n)
    for i in range(n):
        sol[i] = (y[i] - m[i, :i] @ sol[:i]) / m[i, i]
    return sol, (growth / amax if amax else 1.0)
