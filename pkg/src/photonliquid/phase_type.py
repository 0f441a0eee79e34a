"""Erlang and hypoexponential waiting-time distributions.

A photon is emitted after one excitation step followed by ``N - 1`` cascade
steps, each exponentially distributed.  The waiting time between photons is
therefore the sum of ``N`` independent exponentials with rates
``(P, gamma_2, ..., gamma_N)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DomainError, PoleError
from .mixture import ExponentialMixture, partial_fraction_terms

__all__ = [
    "StageRates",
    "as_rates",
    "pdf",
    "pdf_mixture",
    "laplace",
    "mean_rate",
    "sample_intervals",
    "make_rng",
    "GENERATOR",
    "DEGENERACY_RTOL",
]

#: Identity of the bit generator used for every random draw.
GENERATOR = "numpy.random.PCG64"

#: Rates closer than this (relative) are merged into one higher-order pole.
DEGENERACY_RTOL = 1e-9


@dataclass(frozen=True)
class StageRates:
    """Ordered stage rates; index 0 is the excitation (pump) rate."""

    rates: tuple

    def __post_init__(self):
        r = tuple(float(x) for x in np.atleast_1d(np.asarray(self.rates, dtype=float)))
        if len(r) < 1:
            raise DomainError("at least one stage rate is required")
        if not all(np.isfinite(x) and x > 0 for x in r):
            raise DomainError(f"stage rates must be positive and finite, got {r}")
        object.__setattr__(self, "rates", r)

    @classmethod
    def erlang(cls, n, gamma=1.0):
        if int(n) != n or n < 1:
            raise DomainError(f"number of stages must be a positive integer, got {n}")
        return cls((float(gamma),) * int(n))

    @property
    def n(self):
        return len(self.rates)

    @property
    def mean_interval(self):
        return float(sum(1.0 / x for x in self.rates))

    def as_array(self):
        return np.array(self.rates)

    def scaled(self, factor):
        return StageRates(tuple(factor * x for x in self.rates))

    def clusters(self, rtol=DEGENERACY_RTOL):
        """Group (sorted) rates that are equal within ``rtol``.

        Returns ``(values, multiplicities)`` with each value the cluster mean.
        """
        r = np.sort(self.as_array())
        groups = [[r[0]]]
        for x in r[1:]:
            if abs(x - groups[-1][-1]) <= rtol * x:
                groups[-1].append(x)
            else:
                groups.append([x])
        return np.array([np.mean(g) for g in groups]), np.array([len(g) for g in groups])


RatesLike = Union[StageRates, Sequence[float], np.ndarray, float]


def as_rates(rates: RatesLike) -> StageRates:
    return rates if isinstance(rates, StageRates) else StageRates(rates)


def mean_rate(rates: RatesLike) -> float:
    """Long-run emission rate ``1 / sum(1/rate_i)`` of the renewal stream."""
    return 1.0 / as_rates(rates).mean_interval


def pdf_mixture(rates: RatesLike) -> ExponentialMixture:
    """Waiting-time density as an exponential mixture with zero baseline.

    Degenerate rates are merged into higher-order poles, so the pure Erlang
    case is the single term ``gamma**N tau**(N-1) exp(-gamma tau) / (N-1)!``.
    """
    st = as_rates(rates)
    values, mult = st.clusters()
    scale = float(np.prod(np.sort(st.as_array())))
    amps, decays, powers = partial_fraction_terms(scale, -values, mult)
    keep = amps != 0
    return ExponentialMixture(amps[keep], decays[keep], powers[keep], baseline=0.0, label="waiting-time density")


def pdf(rates: RatesLike, tau):
    """Density of the waiting time between consecutive photons."""
    tau_arr = np.asarray(tau, dtype=float)
    if np.any(tau_arr < 0):
        raise DomainError("waiting time must be non-negative")
    out = np.maximum(pdf_mixture(rates).evaluate(tau_arr), 0.0)
    return float(out) if out.ndim == 0 else out


def laplace(rates: RatesLike, s):
    """``prod_i rate_i / (s + rate_i)``; exactly 1 at ``s = 0``."""
    r = as_rates(rates).as_array()
    s_arr = np.asarray(s, dtype=complex)
    denom = s_arr[..., None] + r
    if np.any(denom == 0):
        raise PoleError(f"laplace transform evaluated at a pole s = {s}")
    out = np.prod(r / denom, axis=-1)
    return complex(out) if out.ndim == 0 else out


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def sample_intervals(rates: RatesLike, count: int, seed) -> np.ndarray:
    """Draw ``count`` waiting times, each a sum of one exponential per stage.

    Each stage is sampled by inverse transform, ``-log(U) / rate`` with
    ``U`` uniform on (0, 1].
    """
    st = as_rates(rates)
    count = int(count)
    if count < 0:
        raise DomainError("count must be non-negative")
    rng = make_rng(seed)
    total = np.zeros(count)
    for rate in st.rates:
        u = 1.0 - rng.random(count)
        total -= np.log(u) / rate
    return total
