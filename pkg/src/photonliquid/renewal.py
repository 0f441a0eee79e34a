"""g2 of a renewal stream from the poles of its Laplace transform.

For a stationary renewal process with waiting-time transform ``W(s)`` and
mean rate ``r``,

    G(s) = W(s) / (r (1 - W(s))),

and for phase-type waiting times ``1 - W(s)`` is ``Q(s) / prod(s + rate_i)``
with ``Q(s) = prod(s + rate_i) - prod(rate_i)``.  ``Q`` has an exact root at
``s = 0`` (the baseline 1); the remaining ``N - 1`` roots give the relaxation
rates and their residues the amplitudes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericError, PoleError
from .mixture import ExponentialMixture, partial_fraction_terms
from .phase_type import RatesLike, as_rates, laplace, mean_rate

__all__ = ["PoleSet", "g2_laplace", "find_poles", "renewal_mixture", "g2_from_renewal"]

CLUSTER_RTOL = 1e-7
NEWTON_RTOL = 1e-13
NEWTON_MAXITER = 100


@dataclass(frozen=True)
class PoleSet:
    """Non-zero poles of the g2 transform with their inverse-Laplace coefficients.

    ``coefficients[k][j]`` multiplies ``tau**j exp(poles[k] tau)``; for a
    simple pole it is a single entry equal to the residue.
    """

    poles: np.ndarray
    multiplicities: np.ndarray
    coefficients: tuple
    rate_scale: float

    @property
    def residues(self):
        return np.array([c[0] for c in self.coefficients], dtype=complex)

    @property
    def order(self):
        return int(np.sum(self.multiplicities))

    def to_mixture(self, label="renewal"):
        amps, decays, powers = [], [], []
        for p, coeffs in zip(self.poles, self.coefficients):
            for j, c in enumerate(coeffs):
                amps.append(c)
                decays.append(-p)
                powers.append(j)
        return ExponentialMixture(amps, decays, powers, baseline=1.0, label=label)


def g2_laplace(rates: RatesLike, s):
    """Transform of g2: ``W(s) / (r (1 - W(s)))``."""
    st = as_rates(rates)
    w = np.asarray(laplace(st, s))
    gap = 1 - w
    if np.any(np.abs(gap) <= 1e-14 * np.maximum(1, np.abs(w))):
        raise PoleError(f"g2 transform evaluated at a pole s = {s}")
    out = w / (mean_rate(st) * gap)
    return complex(out) if out.ndim == 0 else out


def _q_and_derivative(u, a):
    """``prod(u + a) - prod(a)`` and its derivative, in product form."""
    f = u + a
    n = len(a)
    prefix = np.ones(n + 1, dtype=complex)
    suffix = np.ones(n + 1, dtype=complex)
    for i in range(n):
        prefix[i + 1] = prefix[i] * f[i]
        suffix[n - 1 - i] = suffix[n - i] * f[n - 1 - i]
    deriv = sum(prefix[i] * suffix[i + 1] for i in range(n))
    return prefix[n] - np.prod(a), deriv


def _cluster(roots, rtol):
    """Group roots whose mutual distance is below ``rtol`` (relative to max(|root|, 1))."""
    remaining = list(range(len(roots)))
    groups = []
    while remaining:
        i = remaining.pop(0)
        members = [i]
        scale = max(abs(roots[i]), 1.0)
        for j in list(remaining):
            if abs(roots[j] - roots[i]) <= rtol * scale:
                members.append(j)
                remaining.remove(j)
        groups.append(members)
    return groups


def _polish(u0, a, coeffs):
    u = u0
    last_step = np.inf
    for _ in range(NEWTON_MAXITER):
        q, dq = _q_and_derivative(u, a)
        if dq == 0:
            break
        step = q / dq
        u = u - step
        if abs(step) <= NEWTON_RTOL * max(abs(u), 1.0):
            return u
        if abs(step) >= last_step and abs(step) <= 1e-10 * max(abs(u), 1.0):
            # rounding floor reached
            return u
        last_step = abs(step)
    raise NumericError(f"Newton polishing did not converge from {u0}", coefficients=coeffs)


def find_poles(rates: RatesLike) -> PoleSet:
    """Roots of ``Q(s) / s`` with their residues in the g2 transform.

    Companion-matrix eigenvalues seed Newton iterations on the product form
    of ``Q``; roots closer than ``CLUSTER_RTOL`` are merged into one
    higher-order pole.  Work is done in units of the mean stage rate.
    """
    st = as_rates(rates)
    if st.n < 2:
        raise DomainError("a renewal stream needs N >= 2 stages to have non-trivial poles")
    nu = float(np.mean(st.as_array()))
    a = st.as_array() / nu
    # In v = u + 1 the equal-rate case is v**N - 1, whose companion matrix is
    # perfectly conditioned.  The known root v = 1 (s = 0) is divided out.
    full = np.poly(1.0 - a)
    full[-1] -= np.prod(a)
    coeffs = np.zeros(len(full) - 1)
    acc = 0.0
    for i, c in enumerate(full[:-1]):
        acc = acc + c
        coeffs[i] = acc
    try:
        guesses = np.roots(coeffs) - 1.0
    except np.linalg.LinAlgError as exc:
        raise NumericError("companion eigenvalues failed", coefficients=coeffs) from exc
    if len(guesses) != st.n - 1 or not np.all(np.isfinite(guesses)):
        raise NumericError("companion matrix gave the wrong number of roots", coefficients=coeffs)

    groups = _cluster(guesses, CLUSTER_RTOL)
    roots, mult = [], []
    for g in groups:
        if len(g) == 1:
            roots.append(_polish(complex(guesses[g[0]]), a, coeffs))
        else:
            roots.append(complex(np.mean(guesses[g])))
        mult.append(len(g))
    roots = np.array(roots, dtype=complex)
    if len(roots) > 1 and len(_cluster(roots, CLUSTER_RTOL)) != len(roots):
        raise NumericError("polished roots collapsed onto each other", coefficients=coeffs)
    # enforce exact conjugate symmetry of the real polynomial's roots
    roots = np.where(np.abs(roots.imag) <= 1e-14 * np.maximum(np.abs(roots), 1), roots.real + 0j, roots)

    all_roots = np.concatenate([[0.0], roots])
    all_mult = np.concatenate([[1], mult])
    scale = np.prod(a) / (1.0 / np.sum(1.0 / a))
    amps, decays, powers = partial_fraction_terms(scale, all_roots, all_mult)
    baseline = amps[0]
    if abs(baseline - 1) > 1e-8:
        raise NumericError(f"baseline residue {baseline} differs from 1", coefficients=coeffs)

    coefficients = []
    idx = 1
    for m in mult:
        # partial_fraction_terms lists powers m-1, ..., 0 for each root
        block = amps[idx : idx + m]
        pw = powers[idx : idx + m]
        c = np.zeros(m, dtype=complex)
        c[pw] = block * nu ** pw
        coefficients.append(tuple(c))
        idx += m
    if np.any(roots.real >= 0):
        raise NumericError("found a pole with non-negative real part", coefficients=coeffs)
    return PoleSet(nu * roots, np.array(mult), tuple(coefficients), nu)


def renewal_mixture(rates: RatesLike) -> ExponentialMixture:
    st = as_rates(rates)
    if st.n == 1:
        return ExponentialMixture([], [], baseline=1.0, label="Poisson")
    return find_poles(st).to_mixture(label=f"renewal {st.rates}")


def g2_from_renewal(rates: RatesLike, tau_grid):
    """Evaluate the pole/residue mixture on a delay grid as a CorrelationCurve."""
    from .curve import CorrelationCurve

    st = as_rates(rates)
    tau = np.asarray(tau_grid, dtype=float)
    if np.any(tau < 0):
        raise DomainError("delay grid must be non-negative")
    mix = renewal_mixture(st)
    return CorrelationCurve(tau, mix.evaluate(tau), meta={"route": "renewal", "rates": list(st.rates)})
