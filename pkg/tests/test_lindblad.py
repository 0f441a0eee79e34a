import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import erlang_closed
from photonliquid import CapacityError, CascadeModel, DomainError, g2_erlang_cascade, g2_qrt, liouvillian, steady_state
from photonliquid.lindblad import MAX_LEVELS, propagate

rate = st.floats(0.2, 5.0)


def populations_block(L, n):
    idx = [i * n + i for i in range(n)]
    return L[np.ix_(idx, idx)]


def random_state(n, rng):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


class TestModel:
    def test_validation(self):
        with pytest.raises(DomainError):
            CascadeModel(1, 1.0, ())
        with pytest.raises(DomainError):
            CascadeModel(3, 1.0, (1.0,))
        with pytest.raises(DomainError):
            CascadeModel(2, 0.0, (1.0,))
        with pytest.raises(DomainError):
            CascadeModel(2, 1.0, (1.0,), monitored=(1, 1))

    def test_from_rates_order(self):
        m = CascadeModel.from_rates([1.0, 2.0, 3.0])
        assert m.pump == 1.0 and m.decays == (2.0, 3.0)
        ops = m.jump_operators()
        assert ops[0][1][2, 0] == 1 and ops[1][1][1, 2] == 1 and ops[2][1][0, 1] == 1


class TestLiouvillian:
    def test_two_level_rate_block(self):
        P, g = 0.7, 1.9
        L = liouvillian(CascadeModel(2, P, (g,)))
        assert np.allclose(populations_block(L, 2), [[-P, g], [P, -g]], atol=1e-15)

    def test_three_level_spectrum(self):
        ev = np.linalg.eigvals(liouvillian(CascadeModel.from_rates([1.0, 1.0, 1.0])))
        zero = np.abs(ev) < 1e-10
        assert zero.sum() == 1
        assert np.all(ev[~zero].real < 0)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(rate, min_size=2, max_size=6), st.lists(st.floats(-10, 10), min_size=6, max_size=6))
    def test_trace_preserving(self, rates, energies):
        n = len(rates)
        L = liouvillian(CascadeModel.from_rates(rates, energies=energies[:n]))
        left = np.eye(n).reshape(-1, order="F")
        assert np.max(np.abs(left @ L)) < 1e-12
        assert np.max(np.abs(populations_block(L, n).sum(axis=0))) < 1e-12

    def test_capacity(self):
        with pytest.raises(CapacityError):
            liouvillian(CascadeModel.from_rates([1.0] * (MAX_LEVELS + 1)))

    def test_positivity_on_random_states(self):
        rng = np.random.default_rng(0)
        m = CascadeModel.from_rates([1.0, 0.5, 2.0, 1.5], energies=[0.0, 3.0, -1.0, 7.0])
        for _ in range(5):
            states = propagate(m, random_state(4, rng), np.linspace(0, 6, 31))
            for rho in states:
                assert np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))) > -1e-12
                assert abs(np.trace(rho) - 1) < 1e-12


class TestSteadyState:
    def test_equal_rates(self):
        rho = steady_state(CascadeModel.from_rates([2.0, 2.0, 2.0]))
        assert np.max(np.abs(rho - np.eye(3) / 3)) < 1e-12

    def test_unequal_rates(self):
        rho = steady_state(CascadeModel.from_rates([1.0, 2.0, 3.0]))
        assert np.max(np.abs(rho - np.diag([6.0, 2.0, 3.0]) / 11)) < 1e-12
        assert np.trace(rho) == pytest.approx(1.0, abs=1e-15)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(rate, min_size=2, max_size=7))
    def test_flux_balance(self, rates):
        # each level is occupied in proportion to its lifetime
        m = CascadeModel.from_rates(rates)
        rho = steady_state(m)
        # level order: 0 (pump), 1 (decays[-1]), ..., n-1 (decays[0])
        lifetimes = np.array([1 / m.pump] + [1 / g for g in m.decays[::-1]])
        assert np.max(np.abs(np.diag(rho).real - lifetimes / lifetimes.sum())) < 1e-10
        assert np.max(np.abs(rho - np.diag(np.diag(rho)))) < 1e-12


class TestQRT:
    def test_three_level_equal_rates(self, tau10):
        c = g2_qrt(CascadeModel.from_rates([1.0, 1.0, 1.0]), tau10)
        assert np.max(np.abs(c.values - erlang_closed(3, tau10))) < 1e-8
        assert c.values[0] == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("P, g", [(1.0, 1.0), (0.3, 2.0), (4.0, 0.5)])
    def test_two_level(self, P, g, tau10):
        c = g2_qrt(CascadeModel(2, P, (g,)), tau10)
        assert np.max(np.abs(c.values - (1 - np.exp(-(P + g) * tau10)))) < 1e-8

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_matches_erlang_cascade(self, n):
        tau = np.linspace(0, 15, 301)
        c = g2_qrt(CascadeModel.from_rates([1.3] * n), tau)
        assert np.max(np.abs(c.values - g2_erlang_cascade(n, 1.3, tau))) < 1e-8

    def test_matches_renewal_for_unequal_rates(self):
        from photonliquid import g2_from_renewal

        rates = [0.7, 2.0, 1.1, 3.5]
        tau = np.linspace(0, 12, 241)
        c = g2_qrt(CascadeModel.from_rates(rates), tau)
        assert np.max(np.abs(c.values - g2_from_renewal(rates, tau).values)) < 1e-8

    @pytest.mark.parametrize("rates", [[1.0, 1.0], [0.2, 1.0, 3.0], [1.0, 0.5, 0.5, 2.0]])
    def test_mixes_to_one(self, rates):
        t = 50 / min(rates)
        c = g2_qrt(CascadeModel.from_rates(rates), [0.0, t])
        assert abs(c.values[1] - 1) < 1e-6

    @settings(max_examples=10, deadline=None)
    @given(st.lists(st.floats(-20, 20), min_size=4, max_size=4))
    def test_independent_of_energies(self, energies):
        tau = np.linspace(0, 8, 81)
        base = g2_qrt(CascadeModel.from_rates([1.0, 2.0, 0.5, 1.5]), tau).values
        other = g2_qrt(CascadeModel.from_rates([1.0, 2.0, 0.5, 1.5], energies=energies), tau).values
        assert np.max(np.abs(base - other)) < 1e-10

    def test_coherences_stay_zero_and_trace_is_kept(self):
        m = CascadeModel.from_rates([1.0, 2.0, 3.0], energies=[0.0, 5.0, 11.0])
        tau = np.linspace(0, 10, 101)
        _, states = g2_qrt(m, tau, return_states=True)
        off = states - np.einsum("tii->ti", states)[:, :, None] * np.eye(3)
        assert np.max(np.abs(off)) < 1e-12
        tr = np.einsum("tii->t", states).real
        assert np.max(np.abs(tr - tr[0])) < 1e-12
        assert np.all(tr >= 0)

    def test_non_uniform_grid_matches_uniform(self):
        m = CascadeModel.from_rates([1.0, 1.0, 1.0])
        t = np.array([0.0, 0.3, 1.7, 4.0])
        a = propagate(m, np.diag([0.0, 0.0, 1.0]), t)
        b = propagate(m, np.diag([0.0, 0.0, 1.0]), np.linspace(0.1, 4.0, 40))
        assert np.max(np.abs(a[-1] - b[-1])) < 1e-12

    def test_other_monitored_transition(self, tau10):
        # the pump-side step of an equal-rate cascade sees the same renewal statistics
        m = CascadeModel(3, 1.0, (1.0, 1.0), monitored=(2, 1))
        assert np.max(np.abs(g2_qrt(m, tau10).values - erlang_closed(3, tau10))) < 1e-8
