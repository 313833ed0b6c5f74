"""Semi-analytic layer functions of the two fractional model problems.

Convection-diffusion (order ``2 - alpha``, layer at ``x = 0``): the layer IVP
in the stretched variable ``xi = x / eps**(1/(1-alpha))`` has solution
``V(xi) = 1 + theta * V*(xi)``; for ``alpha = 1/2``,
``V*(xi) = xi * E_{1/2,2}(-sqrt(xi)) = erfcx(sqrt(xi)) + 2 sqrt(xi/pi) - 1``.

Reaction-diffusion: the left layer ``V0`` lives in
``xi = x / eps**(1/(2-alpha))`` and decays like ``xi**(alpha-1)``; the right
layer is modelled by ``(1 - mu) exp(-(1 - x) / eps**(1/(2-alpha)))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _ddouble as dd
from .laplace import conv_layer_transform, reac_layer0_transform_reduced, talbot_invert
from .specfun import erfcx, mittag_leffler

__all__ = [
    "LayerContext",
    "RegimeAgreementError",
    "classical_conv_layer",
    "conv_layer_correction",
    "conv_layer_correction_general",
    "conv_layer_limit",
    "fit_theta_conv",
    "fit_theta_conv_general",
    "mu_reac",
    "reac_layer0",
    "reac_layer1_model",
    "reduced_solution",
    "vstar_half_closed",
    "vstar_half_series",
]

VSTAR_SERIES_MAX_XI = 30.0
REAC_OVERLAP = (2.0, 8.0)
REAC_AGREEMENT_TOL = 1e-5


class RegimeAgreementError(ArithmeticError):
    """Mittag-Leffler and transform evaluations of a layer disagree."""


@dataclass(frozen=True)
class LayerContext:
    """Scalings shared by the layer functions for one ``(alpha, eps)`` pair."""

    alpha: float
    eps: float

    def __post_init__(self) -> None:
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha}")

    @property
    def stretch_conv(self) -> float:
        return 1.0 / (1.0 - self.alpha)

    @property
    def stretch_reac(self) -> float:
        return 1.0 / (2.0 - self.alpha)

    def xi_conv(self, x):
        return np.asarray(x, dtype=float) / self.eps**self.stretch_conv

    def xi_reac(self, x):
        return np.asarray(x, dtype=float) / self.eps**self.stretch_reac

    @property
    def theta(self) -> float:
        if self.alpha == 0.5:
            return fit_theta_conv(self.eps)
        return fit_theta_conv_general(self.eps, self.alpha)

    @property
    def mu(self) -> float:
        return mu_reac(self.eps, self.alpha)


def reduced_solution(x):
    """Solution ``U(x) = x - 1`` of ``-U' = -1``, ``U(1) = 0``."""
    return np.asarray(x, dtype=float) - 1.0 if np.ndim(x) else float(x) - 1.0


def classical_conv_layer(x, eps: float):
    """Exponential layer ``(exp(-x/eps) - exp(-1/eps)) / (1 - exp(-1/eps))``."""
    xa = np.asarray(x, dtype=float)
    tail = math.exp(-1.0 / eps)  # underflows to 0 for small eps, which is fine
    out = (np.exp(-xa / eps) - tail) / (1.0 - tail)
    out = np.where(xa >= 1.0, 0.0, out)
    return out if np.ndim(x) else float(out)


def vstar_half_series(xi, n_terms: int, *, return_flag: bool = False):
    """Power series of ``V*`` for ``alpha = 1/2``, truncated at ``n_terms``.

    ``sum_{k>=1} xi**k / k! - sum_{k>=1} xi**(k+1/2) / Gamma(k+3/2)``

    The two sums are ``O(exp(xi))`` and cancel down to ``O(sqrt(xi))``, so
    terms and partial sums are carried in double-double arithmetic. Limited
    to ``xi <= 30``. With ``return_flag`` a second value reports convergence:
    the last term added is below ``1e-15`` of the partial sum.
    """
    xa = np.asarray(xi, dtype=float)
    if np.any(xa < 0.0):
        raise ValueError("xi must be nonnegative")
    if np.any(xa > VSTAR_SERIES_MAX_XI):
        raise ValueError(f"series limited to xi <= {VSTAR_SERIES_MAX_XI}; use vstar_half_closed")
    if n_terms < 1:
        raise ValueError("n_terms must be positive")
    flat = dd.from_double(xa.ravel())
    # p_k = xi**k / k!, q_k = xi**(k+1/2) / Gamma(k+3/2); q_1 = 4 xi sqrt(xi) / (3 sqrt(pi))
    p = flat
    q = dd.mul(flat, dd.sqrt_double(flat[0]))
    q = dd.div_double(dd.div((4.0 * q[0], 4.0 * q[1]), _sqrt_pi_like(flat[0])), 3.0)
    total = dd.add(p, dd.neg(q))
    last = total
    for k in range(2, n_terms + 1):
        p = dd.div_double(dd.mul(p, flat), float(k))
        q = dd.div_double(dd.mul(q, flat), k + 0.5)
        last = dd.add(p, dd.neg(q))
        total = dd.add(total, last)
    value = dd.to_double(total).reshape(xa.shape)
    converged = np.abs(dd.to_double(last)).reshape(xa.shape) <= 1e-15 * np.abs(value)
    converged |= xa == 0.0
    if xa.ndim == 0:
        value, converged = float(value), bool(converged)
    return (value, converged) if return_flag else value


def _sqrt_pi_like(ref: np.ndarray):
    return np.full_like(ref, dd.SQRT_PI[0]), np.full_like(ref, dd.SQRT_PI[1])


def vstar_half_closed(xi):
    """Closed form ``erfcx(sqrt(xi)) + 2 sqrt(xi/pi) - 1``, overflow-free."""
    if np.ndim(xi):
        return np.array([vstar_half_closed(v) for v in np.asarray(xi, dtype=float).ravel()]).reshape(np.shape(xi))
    xi = float(xi)
    if xi < 0.0:
        raise ValueError(f"xi must be nonnegative, got {xi}")
    r = math.sqrt(xi)
    return erfcx(r) + 2.0 * r / math.sqrt(math.pi) - 1.0


def fit_theta_conv(eps: float) -> float:
    """Slope ``theta = -1 / V*(1/eps**2)`` that makes ``V(1/eps**2) = 0``."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return -1.0 / vstar_half_closed(1.0 / eps**2)


def conv_layer_correction(x, eps: float):
    """Layer correction ``1 - V*(x/eps**2) / V*(1/eps**2)`` for ``alpha = 1/2``."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    xa = np.asarray(x, dtype=float)
    if np.any((xa < 0.0) | (xa > 1.0)):
        raise ValueError("x must lie in [0, 1]")
    denom = vstar_half_closed(1.0 / eps**2)
    out = 1.0 - vstar_half_closed(xa / eps**2) / denom
    out = np.where(xa == 1.0, 0.0, out)
    return out if np.ndim(x) else float(out)


def conv_layer_limit(x0):
    """Pointwise small-eps limit ``1 - sqrt(x0)`` of the layer correction."""
    return 1.0 - np.sqrt(x0) if np.ndim(x0) else 1.0 - math.sqrt(x0)


def _conv_ivp(alpha: float, theta: float, xi: float) -> float:
    return talbot_invert(conv_layer_transform(alpha, theta), xi)


def fit_theta_conv_general(eps: float, alpha: float) -> float:
    """Slope for general ``alpha`` from ``V(1/eps**(1/(1-alpha))) = 0``.

    The transform is affine in ``theta``, so two inversions and one linear
    solve fix it.
    """
    ctx = LayerContext(alpha, eps)
    if alpha == 0.0:
        raise ValueError("alpha = 0 is the classical case; use classical_conv_layer")
    right = float(ctx.xi_conv(1.0))
    v0 = _conv_ivp(alpha, 0.0, right)
    v1 = _conv_ivp(alpha, 1.0, right)
    return -v0 / (v1 - v0)


def conv_layer_correction_general(x, eps: float, alpha: float):
    """Convection layer correction for any ``alpha`` in (0, 1) via inversion."""
    ctx = LayerContext(alpha, eps)
    theta = fit_theta_conv_general(eps, alpha)
    fn = conv_layer_transform(alpha, theta)
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(xa)
    for i, xv in enumerate(xa):
        if xv <= 0.0:
            out[i] = 1.0
        elif xv >= 1.0:
            out[i] = 0.0
        else:
            out[i] = talbot_invert(fn, float(ctx.xi_conv(xv)))
    return out.reshape(np.shape(x)) if np.ndim(x) else float(out[0])


def _reac_layer0_ml(xi: float, alpha: float) -> float:
    a = 2.0 - alpha
    z = xi**a
    return mittag_leffler(a, 1.0, z) - xi * mittag_leffler(a, 2.0, z)


def _reac_layer0_transform(xi: float, alpha: float) -> float:
    return talbot_invert(reac_layer0_transform_reduced(alpha), xi)


def reac_layer0(xi, alpha: float):
    """Decaying left layer ``V0`` of ``D^{2-alpha} V = V``, ``V(0)=1``, ``V'(0)=-1``.

    ``E_{2-alpha,1}(xi**(2-alpha)) - xi E_{2-alpha,2}(xi**(2-alpha))`` up to
    ``xi = 8``; above, the two terms grow like ``exp(xi)`` and cancel, so the
    reduced transform is inverted instead. In the overlap window ``[2, 8]``
    both are computed and :class:`RegimeAgreementError` is raised if they
    disagree by more than ``1e-5`` relative.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if np.ndim(xi):
        flat = [reac_layer0(v, alpha) for v in np.asarray(xi, dtype=float).ravel()]
        return np.array(flat).reshape(np.shape(xi))
    xi = float(xi)
    if xi < 0.0:
        raise ValueError(f"xi must be nonnegative, got {xi}")
    if xi == 0.0:
        return 1.0
    lo, hi = REAC_OVERLAP
    if xi < lo:
        return _reac_layer0_ml(xi, alpha)
    if xi > hi:
        return _reac_layer0_transform(xi, alpha)
    ml = _reac_layer0_ml(xi, alpha)
    tr = _reac_layer0_transform(xi, alpha)
    if abs(ml - tr) > REAC_AGREEMENT_TOL * abs(tr):
        raise RegimeAgreementError(f"V0({xi}): Mittag-Leffler {ml!r} vs transform {tr!r}")
    return ml


def mu_reac(eps: float, alpha: float) -> float:
    """``mu = V0`` evaluated at ``x = 1``, i.e. at ``xi = eps**(-1/(2-alpha))``."""
    ctx = LayerContext(alpha, eps)
    return reac_layer0(float(ctx.xi_reac(1.0)), alpha)


def reac_layer1_model(x, eps: float, alpha: float, mu: float):
    """Exponential right-layer model ``(1 - mu) exp(-(1 - x) / eps**(1/(2-alpha)))``."""
    width = eps ** (1.0 / (2.0 - alpha))
    out = (1.0 - mu) * np.exp(-(1.0 - np.asarray(x, dtype=float)) / width)
    return out if np.ndim(x) else float(out)
