"""Incoherent multilevel cascade as a Lindblad master equation.

Level 0 is the ground state.  An incoherent pump at rate ``P`` lifts the
system to the top level ``n - 1``; decays then walk it down one level at a
time.  g2 of the monitored transition (default ``1 -> 0``) follows from the
quantum regression theorem:

    g2(tau) = Tr(s^dag s exp(L tau)[s rho_ss s^dag]) / <s^dag s>_ss**2

Density matrices are vectorised column-major, so ``vec(A X B) = (B^T kron A) vec(X)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .curve import CorrelationCurve
from .errors import CapacityError, DomainError, NumericError
from .phase_type import RatesLike, as_rates

__all__ = ["CascadeModel", "liouvillian", "steady_state", "propagate", "g2_qrt", "MAX_LEVELS"]

MAX_LEVELS = 16


@dataclass(frozen=True)
class CascadeModel:
    """Cascade with pump ``0 -> n-1`` and decays listed from the top step down.

    ``decays[0]`` drives ``n-1 -> n-2`` and ``decays[-1]`` drives ``1 -> 0``,
    matching the stage order of :class:`~photonliquid.phase_type.StageRates`.
    """

    n_levels: int
    pump: float
    decays: tuple
    energies: tuple = None
    monitored: tuple = (1, 0)

    def __post_init__(self):
        n = int(self.n_levels)
        if n < 2:
            raise DomainError("a cascade needs at least two levels")
        decays = tuple(float(g) for g in self.decays)
        if len(decays) != n - 1:
            raise DomainError(f"{n} levels need {n - 1} decay rates, got {len(decays)}")
        if not self.pump > 0 or not all(g > 0 for g in decays):
            raise DomainError("pump and decay rates must be positive")
        energies = (0.0,) * n if self.energies is None else tuple(float(w) for w in self.energies)
        if len(energies) != n:
            raise DomainError("one energy per level is required")
        up, low = self.monitored
        if not (0 <= low < n and 0 <= up < n and up != low):
            raise DomainError(f"invalid monitored transition {self.monitored}")
        object.__setattr__(self, "n_levels", n)
        object.__setattr__(self, "pump", float(self.pump))
        object.__setattr__(self, "decays", decays)
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "monitored", (int(up), int(low)))

    @classmethod
    def from_rates(cls, rates: RatesLike, energies=None, monitored=(1, 0)):
        st = as_rates(rates)
        return cls(st.n, st.rates[0], st.rates[1:], energies, monitored)

    def jump_operators(self):
        """``(rate, operator)`` pairs: pump ``|n-1><0|`` then decays ``|i-1><i|``."""
        n = self.n_levels
        ops = []
        pump = np.zeros((n, n))
        pump[n - 1, 0] = 1.0
        ops.append((self.pump, pump))
        for step, g in enumerate(self.decays):
            upper = n - 1 - step
            c = np.zeros((n, n))
            c[upper - 1, upper] = 1.0
            ops.append((g, c))
        return ops

    def transition_operator(self):
        up, low = self.monitored
        s = np.zeros((self.n_levels, self.n_levels))
        s[low, up] = 1.0
        return s


def _vec(x):
    return np.asarray(x).reshape(-1, order="F")


def _unvec(v, n):
    return np.asarray(v).reshape((n, n), order="F")


def liouvillian(model: CascadeModel) -> np.ndarray:
    """Dense generator ``-i[H, .] + sum (k/2)(2 C . C^dag - C^dag C . - . C^dag C)``."""
    n = model.n_levels
    if n > MAX_LEVELS:
        raise CapacityError(f"dense Liouvillian limited to {MAX_LEVELS} levels, got {n}")
    eye = np.eye(n)
    h = np.diag(model.energies).astype(complex)
    L = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for k, c in model.jump_operators():
        cdc = c.conj().T @ c
        L += 0.5 * k * (2 * np.kron(c.conj(), c) - np.kron(eye, cdc) - np.kron(cdc.T, eye))
    return L


def steady_state(model: CascadeModel) -> np.ndarray:
    """Unique trace-one fixed point of the Liouvillian."""
    L = liouvillian(model)
    kernel = linalg.null_space(L, rcond=1e-10)
    if kernel.shape[1] != 1:
        raise NumericError(f"steady state is not unique (kernel dimension {kernel.shape[1]})")
    rho = _unvec(kernel[:, 0], model.n_levels)
    rho = rho / np.trace(rho)
    return 0.5 * (rho + rho.conj().T)


def propagate(model: CascadeModel, rho0, tau_grid) -> np.ndarray:
    """``exp(L tau) rho0`` at every grid delay, as an array of density matrices.

    On a uniform grid a single step propagator is reused;
    otherwise each delay gets its own matrix exponential.
    """
    n = model.n_levels
    L = liouvillian(model)
    tau = np.asarray(tau_grid, dtype=float)
    if np.any(tau < 0):
        raise DomainError("delays must be non-negative")
    v0 = _vec(rho0).astype(complex)
    out = np.empty((len(tau), n, n), dtype=complex)
    if len(tau) == 0:
        return out
    steps = np.diff(tau)
    uniform = len(tau) > 2 and np.allclose(steps, steps[0], rtol=1e-12, atol=0)
    if uniform:
        step = linalg.expm(L * steps[0])
        v = linalg.expm(L * tau[0]) @ v0 if tau[0] > 0 else v0
        for i in range(len(tau)):
            out[i] = _unvec(v, n)
            v = step @ v
    else:
        for i, t in enumerate(tau):
            out[i] = _unvec(linalg.expm(L * t) @ v0, n)
    return out


def g2_qrt(model: CascadeModel, tau_grid, return_states: bool = False):
    """g2 of the monitored transition from the quantum regression theorem."""
    rho = steady_state(model)
    s = model.transition_operator()
    sds = s.conj().T @ s
    n_ss = float(np.real(np.trace(sds @ rho)))
    conditional = s @ rho @ s.conj().T
    states = propagate(model, conditional, tau_grid)
    g2 = np.real(np.einsum("ij,tji->t", sds, states)) / n_ss**2
    curve = CorrelationCurve(
        np.asarray(tau_grid, dtype=float),
        g2,
        meta={"route": "lindblad", "pump": model.pump, "decays": list(model.decays), "monitored": list(model.monitored)},
    )
    if return_states:
        return curve, states
    return curve
