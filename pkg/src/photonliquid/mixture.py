"""Sums of (possibly polynomially weighted) complex exponentials.

Every analytic g2 route in the package produces an :class:`ExponentialMixture`

    f(tau) = baseline + sum_k a_k * tau**p_k * exp(-lambda_k * tau)

so that evaluation, maximum search and export share one code path.  The
``tau**p`` factor only appears for higher-order poles (Erlang densities,
the Mollow threshold, clustered renewal poles).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np

from .errors import NumericError

__all__ = ["ExponentialMixture", "partial_fraction_terms"]

#: Largest imaginary part tolerated when a mixture is evaluated as a real function.
REAL_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ExponentialMixture:
    amplitudes: np.ndarray
    decays: np.ndarray
    powers: np.ndarray = None
    baseline: float = 1.0
    label: str = field(default="", compare=False)

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.amplitudes, dtype=complex))
        lam = np.atleast_1d(np.asarray(self.decays, dtype=complex))
        if a.shape != lam.shape or a.ndim != 1:
            raise ValueError("amplitudes and decays must be 1-d arrays of equal length")
        p = np.zeros(a.shape, dtype=int) if self.powers is None else np.asarray(self.powers, dtype=int)
        if p.shape != a.shape or np.any(p < 0):
            raise ValueError("powers must be non-negative integers, one per term")
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "decays", lam)
        object.__setattr__(self, "powers", p)
        object.__setattr__(self, "baseline", float(self.baseline))

    def __len__(self):
        return len(self.amplitudes)

    @property
    def terms(self):
        """List of ``(amplitude, decay, power)`` triples."""
        return list(zip(self.amplitudes, self.decays, self.powers))

    def evaluate_complex(self, tau):
        tau = np.asarray(tau, dtype=float)
        t = tau[..., None]
        vals = self.amplitudes * t**self.powers * np.exp(-self.decays * t)
        return self.baseline + vals.sum(axis=-1)

    def imaginary_residue(self, tau):
        """Largest ``|Im f(tau)|`` on the given points."""
        return float(np.max(np.abs(self.evaluate_complex(tau).imag), initial=0.0))

    def evaluate(self, tau):
        """Real values of the mixture; raises if conjugate pairing is broken."""
        z = self.evaluate_complex(tau)
        scale = 1.0 + np.abs(z.real)
        if np.any(np.abs(z.imag) > REAL_TOLERANCE * scale):
            raise NumericError("mixture is not real: conjugate terms are unpaired")
        return z.real

    __call__ = evaluate

    def laplace(self, s):
        """Laplace transform at complex frequency ``s`` (baseline contributes 1/s)."""
        s = np.asarray(s, dtype=complex)
        ss = s[..., None]
        fact = np.array([factorial(int(k)) for k in self.powers], dtype=float)
        out = (self.amplitudes * fact / (ss + self.decays) ** (self.powers + 1)).sum(axis=-1)
        if self.baseline:
            out = out + self.baseline / s
        return out

    def value_at_zero(self):
        return float((self.baseline + self.amplitudes[self.powers == 0].sum()).real)

    def slowest_decay(self):
        """Smallest real part among the decays (the mixing rate)."""
        if len(self) == 0:
            return np.inf
        return float(self.decays.real.min())


def partial_fraction_terms(scale, roots, multiplicities=None):
    """Inverse Laplace transform of ``scale / prod_j (s - roots[j])**m_j``.

    Returns ``(amplitudes, decays, powers)`` ready for :class:`ExponentialMixture`.
    Taylor coefficients of the cofactor at each root are built from the
    binomial series of every ``(s - root_j)**-m_j`` factor, so no polynomial
    coefficients are ever formed.
    """
    roots = np.asarray(roots, dtype=complex)
    mult = np.ones(len(roots), dtype=int) if multiplicities is None else np.asarray(multiplicities, dtype=int)
    amps, decays, powers = [], [], []
    for k, (rho, m) in enumerate(zip(roots, mult)):
        series = np.zeros(m, dtype=complex)
        series[0] = scale
        for j, (rj, mj) in enumerate(zip(roots, mult)):
            if j == k:
                continue
            d = rho - rj
            factor = np.array(
                [(-1) ** n * comb(mj + n - 1, n) * d ** (-mj - n) for n in range(m)], dtype=complex
            )
            series = np.convolve(series, factor)[:m]
        for n in range(m):
            q = m - n
            amps.append(series[n] / factorial(q - 1))
            decays.append(-rho)
            powers.append(q - 1)
    return np.array(amps, dtype=complex), np.array(decays, dtype=complex), np.array(powers, dtype=int)
