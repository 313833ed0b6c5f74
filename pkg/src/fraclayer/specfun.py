"""Real special functions: Gamma, erfc, erfcx and the Mittag-Leffler function.

The Mittag-Leffler function ``E_{a,b}(z) = sum_k z**k / Gamma(a*k + b)`` is
evaluated by one of three regimes, picked from ``x = |z|**(1/a)``:

``series``
    Taylor series, for small ``x`` (no cancellation worth mentioning).
``asymptotic``
    Residues of the poles of ``s**(a-b) / (s**a - z)`` on the principal
    sheet plus the algebraic tail ``-sum_k z**-k / Gamma(b - a*k)``.
``talbot``
    Numerical inversion of the same Laplace transform at ``t = 1`` with the
    principal-sheet poles subtracted analytically.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GAMMA_OVERFLOW",
    "GammaPoleError",
    "MLParams",
    "MittagLefflerAccuracyWarning",
    "erfc",
    "erfcx",
    "gamma",
    "mittag_leffler",
    "mittag_leffler_regime",
    "ml_regime",
    "rgamma",
]

# Largest x with Gamma(x) finite in binary64.
GAMMA_OVERFLOW = 171.62437695630272

_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_SQRT_PI = math.sqrt(math.pi)


class GammaPoleError(ValueError):
    """Gamma evaluated at a nonpositive integer."""


class MittagLefflerAccuracyWarning(RuntimeWarning):
    """Two evaluation regimes of the Mittag-Leffler function disagree."""


def _sinpi(x: float) -> float:
    # sin(pi*x) with exact argument reduction
    r = x - 2.0 * round(x / 2.0)  # r in [-1, 1]
    sign = 1.0
    if r < 0.0:
        r, sign = -r, -1.0
    if r > 0.5:
        r = 1.0 - r
    return sign * math.sin(math.pi * r)


def _gamma_lanczos(x: float) -> float:
    # valid for x >= 0.5
    z = x - 1.0
    acc = _LANCZOS_C[0]
    for k in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    # split the power so t**(z+0.5) does not overflow before exp(-t) applies
    half = t ** (0.5 * (z + 0.5))
    return _SQRT_2PI * acc * (half * math.exp(-t)) * half


def gamma(x: float) -> float:
    """Gamma function of a real argument.

    Raises :class:`GammaPoleError` at nonpositive integers and
    :class:`OverflowError` above :data:`GAMMA_OVERFLOW`.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"gamma: non-finite argument {x!r}")
    if x == math.floor(x):
        if x <= 0.0:
            raise GammaPoleError(f"gamma has a pole at {x:g}")
        if x <= 171.0:
            return float(math.factorial(int(x) - 1))
    if x > GAMMA_OVERFLOW:
        raise OverflowError(f"gamma({x:g}) overflows (threshold {GAMMA_OVERFLOW})")
    if x < 0.5:
        return math.pi / (_sinpi(x) * _gamma_lanczos(1.0 - x))
    return _gamma_lanczos(x)


def rgamma(x: float) -> float:
    """Reciprocal Gamma, an entire function: zero at the poles of Gamma."""
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    if x > GAMMA_OVERFLOW:
        return 0.0
    if x < -170.0:
        # 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi; Gamma(1-x) may overflow
        lg = math.lgamma(1.0 - x)
        return _sinpi(x) * math.exp(lg) / math.pi
    return 1.0 / gamma(x)


def erfc(x: float) -> float:
    """Complementary error function."""
    return math.erfc(x)


# erfcx switches to the continued fraction above this point
_ERFCX_CF_ONSET = 6.0


def _erfcx_cf(x: float) -> float:
    # erfcx(x) = 1/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    # evaluated by the modified Lentz method
    tiny = 1e-300
    f = x
    c = x
    d = 0.0
    for n in range(1, 5000):
        an = 0.5 * n
        d = x + an * d
        d = 1.0 / (d if d != 0.0 else tiny)
        c = x + an / c
        if c == 0.0:
            c = tiny
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return 1.0 / (_SQRT_PI * f)


def erfcx(x: float) -> float:
    """Scaled complementary error function ``exp(x**2) * erfc(x)``.

    Overflow-free for every ``x >= 0``; for very negative ``x`` the true value
    overflows and ``inf`` is returned.
    """
    x = float(x)
    if x < 0.0:
        if x < -26.7:
            return math.inf
        return 2.0 * math.exp(x * x) - erfcx(-x)
    if x < _ERFCX_CF_ONSET:
        return math.exp(x * x) * math.erfc(x)
    return _erfcx_cf(x)


@dataclass(frozen=True)
class MLParams:
    """Arguments of ``E_{a,b}(z)``."""

    a: float
    b: float
    z: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and math.isfinite(self.b) and math.isfinite(self.z)):
            raise ValueError("Mittag-Leffler parameters must be finite")
        if self.a <= 0.0:
            raise ValueError(f"Mittag-Leffler parameter a must be positive, got {self.a}")


# Regime thresholds, in terms of x = |z|**(1/a).
ML_SERIES_MAX_POS = 15.0
ML_SERIES_MAX_NEG = 4.0
ML_ASYMPTOTIC_MIN_NEG = 40.0
ML_SERIES_MAX_TERMS = 500
ML_TALBOT_NODES = 64

REGIMES = ("series", "asymptotic", "talbot")


class _SeriesDiverged(ArithmeticError):
    pass


class _AsymptoticInadequate(ArithmeticError):
    pass


def _ml_term(z: float, k: int, a: float, b: float) -> float:
    arg = a * k + b
    if arg < 160.0:
        zk = z**k
        if math.isfinite(zk):
            return zk * rgamma(arg)
    if z == 0.0:
        return 0.0
    logmag = k * math.log(abs(z)) - math.lgamma(arg)
    sign = -1.0 if (z < 0.0 and k % 2) else 1.0
    return sign * math.exp(logmag)


def _ml_series(a: float, b: float, z: float) -> float:
    terms = [rgamma(b)]
    total = terms[0]
    prev_small = False
    for k in range(1, ML_SERIES_MAX_TERMS + 1):
        term = _ml_term(z, k, a, b)
        terms.append(term)
        total += term
        small = abs(term) <= 1e-16 * abs(total)
        if small and prev_small:
            # exact summation of the rounded terms
            return math.fsum(terms)
        prev_small = small
    raise _SeriesDiverged(f"series for E_{{{a},{b}}}({z}) needs more than {ML_SERIES_MAX_TERMS} terms")


def _is_int(v: float) -> bool:
    return v == math.floor(v)


def _principal_poles(a: float, b: float, z: float) -> list[complex]:
    """Poles of s**(a-b)/(s**a - z) lying on the principal sheet.

    A pole exactly on the negative real axis is kept only when the transform
    has no branch cut there (a and b integers), otherwise it is left to the
    contour, which encloses the whole negative axis.
    """
    if z == 0.0:
        return []
    r = abs(z) ** (1.0 / a)
    argz = 0.0 if z > 0 else math.pi
    single_valued = _is_int(a) and _is_int(b)
    poles: list[complex] = []
    seen_pi = False
    kmax = int(math.ceil(a)) + 1
    for k in range(-kmax, kmax + 1):
        phi = (argz + 2.0 * math.pi * k) / a
        if abs(phi) < math.pi - 1e-12:
            poles.append(cmath.rect(r, phi))
        elif abs(abs(phi) - math.pi) <= 1e-12 and single_valued and not seen_pi:
            seen_pi = True
            poles.append(complex(-r, 0.0))
    return poles


def _pole_weight(s0: complex, a: float, b: float) -> complex:
    # residue of s**(a-b)/(s**a - z) at s0, i.e. s0**(1-b)/a
    return s0 ** (1.0 - b) / a


def _ml_residues(a: float, b: float, z: float) -> float:
    total = 0j
    for s0 in _principal_poles(a, b, z):
        total += _pole_weight(s0, a, b) * cmath.exp(s0)
    return total.real


def _ml_asymptotic(a: float, b: float, z: float) -> float:
    tail = 0.0
    prev = math.inf
    min_term = math.inf
    converged = False
    for k in range(1, 4000):
        arg = b - a * k
        zk = z ** (-k)
        if zk == 0.0:
            converged = True
            break
        term = zk * rgamma(arg) if arg > -160.0 else _rgamma_times(zk, arg)
        mag = abs(term)
        if mag > prev and mag > 0.0 and k > 2:
            break
        tail -= term
        if mag != 0.0:
            prev = mag
            min_term = min(min_term, mag)
        if mag != 0.0 and mag <= 1e-17 * abs(tail):
            converged = True
            break
    value = _ml_residues(a, b, z) + tail
    scale = max(abs(value), abs(tail))
    if not converged and min_term > 1e-14 * scale:
        raise _AsymptoticInadequate(f"algebraic tail of E_{{{a},{b}}}({z}) does not reach tolerance")
    return value


def _rgamma_times(zk: float, arg: float) -> float:
    # zk / Gamma(arg) for very negative arg, via logs
    if abs(zk) == 0.0:
        return 0.0
    s = _sinpi(arg)
    if s == 0.0:
        return 0.0
    lg = math.lgamma(1.0 - arg) + math.log(abs(zk)) + math.log(abs(s)) - math.log(math.pi)
    sign = math.copysign(1.0, zk) * math.copysign(1.0, s)
    return sign * math.exp(lg)


def _ml_talbot(a: float, b: float, z: float) -> float:
    from .laplace import TransformFn, talbot_invert

    poles = _principal_poles(a, b, z)
    weights = [_pole_weight(s0, a, b) for s0 in poles]

    def reduced(s: np.ndarray) -> np.ndarray:
        out = s ** (a - b) / (s**a - z)
        for s0, w in zip(poles, weights):
            out = out - w / (s - s0)
        return out

    fn = TransformFn(reduced, name=f"ML({a},{b},{z}) minus poles")
    # the reduced transform carries rounding error of the subtracted poles
    size = 1.0 + abs(rgamma(b)) + sum(abs(w * cmath.exp(s0)) for s0, w in zip(poles, weights))
    residual = talbot_invert(fn, 1.0, ML_TALBOT_NODES, atol=1e-13 * size)
    return _ml_residues(a, b, z) + residual


def ml_regime(a: float, b: float, z: float) -> str:
    """Regime that :func:`mittag_leffler` uses first for these parameters."""
    if z == 0.0:
        return "series"
    x = abs(z) ** (1.0 / a)
    if z > 0.0:
        return "series" if x <= ML_SERIES_MAX_POS else "asymptotic"
    if x <= ML_SERIES_MAX_NEG:
        return "series"
    if x >= ML_ASYMPTOTIC_MIN_NEG:
        return "asymptotic"
    return "talbot"


_REGIME_FN = {"series": _ml_series, "asymptotic": _ml_asymptotic, "talbot": _ml_talbot}


def mittag_leffler_regime(a: float, b: float, z: float, regime: str) -> float:
    """Evaluate ``E_{a,b}(z)`` by a forced regime, without fallback.

    Used to probe agreement between regimes near their switch points.
    """
    MLParams(a, b, z)
    if regime not in _REGIME_FN:
        raise ValueError(f"unknown regime {regime!r}; expected one of {REGIMES}")
    if z == 0.0:
        return rgamma(b)
    return _REGIME_FN[regime](float(a), float(b), float(z))


def mittag_leffler(a: float, b: float, z: float, *, check: bool = False) -> float:
    """Two-parameter Mittag-Leffler function ``E_{a,b}(z)`` for real ``z``.

    With ``check=True`` the value is recomputed by a second regime and a
    :class:`MittagLefflerAccuracyWarning` is emitted when the two differ by
    more than ``1e-8`` relative; the primary value is returned regardless.
    """
    p = MLParams(float(a), float(b), float(z))
    a, b, z = p.a, p.b, p.z
    if z == 0.0:
        return rgamma(b)
    regime = ml_regime(a, b, z)
    try:
        value = _REGIME_FN[regime](a, b, z)
    except (_SeriesDiverged, _AsymptoticInadequate):
        regime = "talbot"
        value = _ml_talbot(a, b, z)
    if check:
        other = "talbot" if regime != "talbot" else (
            "series" if abs(z) ** (1.0 / a) < 2 * ML_SERIES_MAX_NEG else "asymptotic"
        )
        try:
            alt = _REGIME_FN[other](a, b, z)
        except (_SeriesDiverged, _AsymptoticInadequate, ArithmeticError):
            alt = None
        if alt is not None and abs(alt - value) > 1e-8 * max(abs(value), 1e-300):
            warnings.warn(
                f"E_{{{a},{b}}}({z}): {regime}={value!r} vs {other}={alt!r}",
                MittagLefflerAccuracyWarning,
                stacklevel=2,
            )
    return value
