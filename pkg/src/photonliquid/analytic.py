"""Closed-form second-order coherence functions.

All analytic curves are built as :class:`ExponentialMixture` objects; the
``g2_*`` functions evaluate those mixtures.  ``g2_cascade_closed_form`` keeps
the hand-simplified trigonometric expressions for N = 2, 3, 4 as an
independent check of the roots-of-unity sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy import integrate, optimize, signal, special

from .errors import DomainError
from .mixture import ExponentialMixture

__all__ = [
    "MollowParams",
    "Extremum",
    "incoherent_2ls_mixture",
    "heitler_mixture",
    "mollow_mixture",
    "erlang_cascade_mixture",
    "roots_of_unity",
    "g2_incoherent_2ls",
    "g2_heitler",
    "g2_mollow",
    "g2_erlang_cascade",
    "g2_cascade_closed_form",
    "g2_short_time",
    "short_time_prefactor",
    "find_first_max",
    "mollow_first_max",
    "g2_with_jitter",
]

MOLLOW_THRESHOLD_RTOL = 1e-6


def _check_tau(tau):
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise DomainError("delay tau must be non-negative")
    return tau


def _out(values):
    values = np.asarray(values, dtype=float)
    return float(values) if values.ndim == 0 else values


def _positive(name, value):
    if not (np.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be positive and finite, got {value}")


# --------------------------------------------------------------------------
# two-level emitters


def incoherent_2ls_mixture(pump, gamma):
    _positive("pump", pump)
    _positive("gamma", gamma)
    return ExponentialMixture([-1.0], [pump + gamma], label="incoherent 2LS")


def g2_incoherent_2ls(pump, gamma, tau):
    """``1 - exp(-(P + gamma) tau)`` for an incoherently pumped two-level system."""
    return _out(incoherent_2ls_mixture(pump, gamma).evaluate(_check_tau(tau)))


def heitler_mixture(gamma):
    _positive("gamma", gamma)
    return ExponentialMixture([-2.0, 1.0], [gamma, 2 * gamma], label="Heitler")


def g2_heitler(gamma, tau):
    """Weak coherent drive: ``(1 - exp(-gamma tau))**2``."""
    return _out(heitler_mixture(gamma).evaluate(_check_tau(tau)))


@dataclass(frozen=True)
class MollowParams:
    """Resonantly driven two-level system: decay ``gamma`` and drive ``omega``."""

    gamma: float
    omega: float

    def __post_init__(self):
        if not (self.gamma > 0 and self.omega >= 0):
            raise DomainError("MollowParams needs gamma > 0 and omega >= 0")

    @property
    def regime(self):
        x = 8 * self.omega - self.gamma
        if abs(x) / self.gamma < MOLLOW_THRESHOLD_RTOL:
            return "threshold"
        return "oscillatory" if x > 0 else "hyperbolic"

    @property
    def gamma_m(self):
        """Real splitting ``sqrt(gamma**2 - (8 omega)**2)``; NaN above threshold."""
        d = self.gamma**2 - (8 * self.omega) ** 2
        return float(np.sqrt(d)) if d >= 0 else float("nan")

    @property
    def omega_m(self):
        """Oscillation frequency ``sqrt((8 omega)**2 - gamma**2)``; NaN below threshold."""
        d = (8 * self.omega) ** 2 - self.gamma**2
        return float(np.sqrt(d)) if d >= 0 else float("nan")


def mollow_mixture(params: MollowParams) -> ExponentialMixture:
    """Strong-drive g2 as a mixture for all three regimes.

    Above threshold the hyperbolic form is continued with ``gamma_M = i Omega_M``,
    which gives the oscillatory prefactor ``3 gamma / Omega_M``; exactly at
    threshold the two poles merge into ``1 - exp(-3 g t/4) (1 + 3 g t/4)``.
    """
    g = params.gamma
    regime = params.regime
    if regime == "threshold":
        return ExponentialMixture(
            [-1.0, -0.75 * g], [0.75 * g, 0.75 * g], powers=[0, 1], label="Mollow threshold"
        )
    if regime == "hyperbolic":
        split = complex(params.gamma_m)
    else:
        split = 1j * params.omega_m
    ratio = 3 * g / split
    amps = [-0.5 * (1 + ratio), -0.5 * (1 - ratio)]
    decays = [(3 * g - split) / 4, (3 * g + split) / 4]
    return ExponentialMixture(amps, decays, label=f"Mollow {regime}")


def g2_mollow(params: MollowParams, tau):
    return _out(mollow_mixture(params).evaluate(_check_tau(tau)))


def mollow_first_max(params: MollowParams):
    """Location ``4 pi / Omega_M`` and height ``1 + exp(-3 pi gamma / Omega_M)``."""
    if params.regime != "oscillatory":
        return None
    om = params.omega_m
    return Extremum(4 * np.pi / om, 1 + np.exp(-3 * np.pi * params.gamma / om))


# --------------------------------------------------------------------------
# incoherent cascades


def roots_of_unity(n):
    """``exp(2 pi i p / n)`` for ``p = 0..n-1``, each from its exact angle."""
    angles = 2 * np.pi * np.arange(n) / n
    return np.cos(angles) + 1j * np.sin(angles)


def erlang_cascade_mixture(n, gamma=1.0):
    """``1 + sum_{p=1}^{N-1} z^p exp(-gamma (1 - z^p) tau)`` with ``z = exp(2 pi i/N)``."""
    if int(n) != n or n < 1:
        raise DomainError(f"number of stages must be a positive integer, got {n}")
    _positive("gamma", gamma)
    z = roots_of_unity(int(n))[1:]
    return ExponentialMixture(z, gamma * (1 - z), label=f"Erlang cascade N={n}")


def _erlang_series(n, x):
    """``N exp(-x) sum_j x**(jN+N-1) / (jN+N-1)!``, the same function without cancellation.

    Only used for ``x <= N``; there every term is a Poisson probability and
    the sum is positive, so the tiny plateau values keep full relative precision.
    """
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return x.copy()
    xmax = float(np.max(x))
    jmax = int((xmax + 12 * np.sqrt(xmax) + 40) / n) + 1
    m = n * np.arange(jmax) + (n - 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        logx = np.log(x)[..., None]
        logterms = m * logx - x[..., None] - special.gammaln(m + 1)
    return n * np.exp(logterms).sum(axis=-1)


def g2_erlang_cascade(n, gamma, tau):
    """g2 of an N-stage Erlang renewal stream (one pump plus N-1 cascade steps).

    Values for ``gamma tau <= N`` come from the positive Poisson resummation of
    the roots-of-unity sum, so the ``tau**(N-1)`` plateau is resolved to full
    relative precision; beyond that the roots-of-unity mixture is used.
    """
    mix = erlang_cascade_mixture(n, gamma)
    tau = _check_tau(tau)
    n = int(n)
    x = gamma * tau
    if n == 1:
        return _out(np.ones_like(x))
    out = np.empty_like(x)
    small = x <= n
    out[small] = _erlang_series(n, x[small])
    out[~small] = mix.evaluate(tau[~small])
    return _out(out)


def g2_cascade_closed_form(n, gamma, tau):
    """Hand-simplified cascade g2 for N = 2, 3 and 4."""
    _positive("gamma", gamma)
    tau = _check_tau(tau)
    x = gamma * tau
    if n == 2:
        out = -np.expm1(-2 * x)
    elif n == 3:
        out = 1 - 2 * np.sin(np.sqrt(3) / 2 * x + np.pi / 6) * np.exp(-1.5 * x)
    elif n == 4:
        out = 1 - np.exp(-2 * x) - 2 * np.exp(-x) * np.sin(x)
    else:
        raise DomainError(f"closed form available for N in {{2, 3, 4}}, got {n}")
    return _out(out)


def short_time_prefactor(n):
    return n**2 / factorial(n)


def g2_short_time(n, gamma, tau):
    """Leading small-delay term ``(N**2 / N!) (gamma tau)**(N-1)``.

    The exponent is the number of cascade steps ``N - 1``; this is what the
    expansions of the N = 2, 3, 4 closed forms give.
    """
    if int(n) != n or n < 2:
        raise DomainError("short-time law needs N >= 2")
    tau = np.asarray(tau, dtype=float)
    return _out(short_time_prefactor(int(n)) * (gamma * tau) ** (n - 1))


# --------------------------------------------------------------------------
# maxima and detector jitter


class Extremum(NamedTuple):
    tau: float
    value: float


def find_first_max(
    curve: Callable, window, n_scan: int = 4001, xtol: float = 1e-10, noise: float = 1e-12
) -> Optional[Extremum]:
    """First interior local maximum of ``curve`` inside ``window``.

    A uniform scan brackets the first peak whose prominence exceeds
    ``noise * max|g2|`` (rounding ripple on flat tails is not a maximum);
    golden-section search then refines it.  Returns ``None`` when the curve
    has no interior maximum in the window.
    """
    lo, hi = map(float, window)
    if not (0 < lo < hi):
        raise DomainError(f"search window must satisfy 0 < lo < hi, got {window}")
    f = curve.evaluate if isinstance(curve, ExponentialMixture) else curve
    t = np.linspace(lo, hi, n_scan)
    y = np.asarray(f(t), dtype=float)
    peaks, _ = signal.find_peaks(y, prominence=noise * max(np.max(np.abs(y)), 1e-300))
    if len(peaks) == 0:
        return None
    i = peaks[0]
    res = optimize.minimize_scalar(
        lambda u: -float(f(u)), bracket=(t[i - 1], t[i], t[i + 1]), method="golden", tol=xtol
    )
    return Extremum(float(res.x), float(-res.fun))


def g2_with_jitter(curve: Callable, sigma_d, tau):
    """Expected g2 seen through Gaussian timing noise of std ``sigma_d`` per photon.

    The pair delay picks up noise of std ``sqrt(2) sigma_d``; ``curve`` is
    evaluated at ``|tau + noise|`` since g2 is even in the delay.
    """
    f = curve.evaluate if isinstance(curve, ExponentialMixture) else curve
    tau = np.asarray(tau, dtype=float)
    s = np.sqrt(2.0) * sigma_d
    if s == 0:
        return _out(np.asarray(f(np.abs(tau)), dtype=float))

    def one(t0):
        def integrand(u):
            return float(f(abs(t0 + u))) * np.exp(-0.5 * (u / s) ** 2)

        pts = [-t0] if abs(t0) < 8 * s else None
        val, _ = integrate.quad(integrand, -10 * s, 10 * s, points=pts, limit=200)
        return val / (s * np.sqrt(2 * np.pi))

    return _out(np.array([one(t0) for t0 in tau.ravel()]).reshape(tau.shape))
