import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracle
from jcreceiver.errors import DomainError, ImpossibleOutcomeError
from jcreceiver.fock import FieldState, coherent_amplitudes, fock_state
from jcreceiver.kennedy import (ALL_MAXIMA_WINDOWS, KennedyProblem, excitation_probability, idp_limit,
                                kennedy_error, kennedy_limit, max_excitation, pnrd_error, pnrd_failure,
                                run_unambiguous_chain, surviving_field)
from jcreceiver.measurement import PriorPair, coherent_overlap_pm, helstrom_bound
from jcreceiver.optimize import SearchWindow


def test_excitation_matches_dense_oracle():
    f = coherent_amplitudes(2.0)
    vec = np.zeros(oracle.DIM, dtype=complex)
    vec[:f.truncation_dim] = f.amplitudes
    for phi in (0.3, 0.7533833301, 5.0):
        ref = float(np.sum(abs(oracle.evolve(vec, phi)[1]) ** 2))
        assert abs(excitation_probability(f, phi) - ref) < 1e-12


def test_first_maximum_fixture():
    # dense-propagator oracle, window [0, 2]
    phi, p = max_excitation(coherent_amplitudes(2.0))
    assert abs(phi - 0.7533833301) < 1e-7
    assert abs(p - 0.8559080919) < 1e-9


def test_wider_windows_never_worse():
    f = coherent_amplitudes(2.0)
    assert max_excitation(f, ALL_MAXIMA_WINDOWS)[1] >= max_excitation(f)[1]


def test_vacuum_never_clicks():
    assert excitation_probability(coherent_amplitudes(0.0), np.linspace(0, 30, 50)).max() == 0.0


def test_surviving_field():
    f = coherent_amplitudes(1.0)
    p_g, post = surviving_field(f, 0.9)
    assert abs(p_g + excitation_probability(f, 0.9) - 1.0) < 1e-12
    assert abs(post.norm_sq() - 1.0) < 1e-13
    with pytest.raises(ImpossibleOutcomeError):
        surviving_field(fock_state(1), math.pi / 2)


CHAIN = {0.05: [0.9124429159, 0.9094980774, 0.9093899224],
         0.5: [0.6328680086, 0.5835439626, 0.5701901310],
         1.0: [0.5720459541, 0.5264818561, 0.5116649294]}


@pytest.mark.parametrize("alpha_sq", sorted(CHAIN))
def test_chain_fixtures(alpha_sq):
    q = [r.cumulative_Q for r in run_unambiguous_chain(KennedyProblem(math.sqrt(alpha_sq)))]
    np.testing.assert_allclose(q, CHAIN[alpha_sq], rtol=0, atol=2e-9)


@pytest.mark.parametrize("alpha_sq", np.round(np.arange(0.05, 1.51, 0.05), 2))
def test_chain_ordering(alpha_sq):
    alpha = math.sqrt(alpha_sq)
    q = [r.cumulative_Q for r in run_unambiguous_chain(KennedyProblem(alpha))]
    assert idp_limit(alpha) <= kennedy_limit(alpha) <= q[2] <= q[1] <= q[0]


def test_chain_vacuum_row():
    q = [r.cumulative_Q for r in run_unambiguous_chain(KennedyProblem(0.0))]
    assert q == [1.0, 1.0, 1.0]
    assert kennedy_limit(0.0) == idp_limit(0.0) == pnrd_failure(0.0, det_eff=0.91) == 1.0


def test_chain_survival_bookkeeping():
    chain = run_unambiguous_chain(KennedyProblem(0.8, PriorPair(0.3), rounds=4))
    surv = 1.0
    for r in chain:
        surv *= 1 - r.p_e_bar
        assert abs(r.survival - surv) < 1e-15
        assert abs(r.cumulative_Q - (1 - 0.3 * (1 - surv))) < 1e-15


def test_chain_more_rounds_keep_prefix():
    a = run_unambiguous_chain(KennedyProblem(0.7, rounds=2))
    b = run_unambiguous_chain(KennedyProblem(0.7, rounds=5))
    assert [r.cumulative_Q for r in a] == [r.cumulative_Q for r in b[:2]]


def test_chain_round_guard():
    with pytest.raises(DomainError):
        KennedyProblem(1.0, rounds=0)
    with pytest.raises(DomainError):
        KennedyProblem(1.0, rounds=7)


class OnePhotonProblem(KennedyProblem):
    @property
    def displaced_signal(self):
        return fock_state(1)


def test_exhausted_field_repeats_totals():
    # a pi/2 pulse excites the atom with certainty, so nothing survives a no-click
    chain = run_unambiguous_chain(OnePhotonProblem(0.5, rounds=3, windows=(SearchWindow(1.5, 1.65),)))
    assert chain[0].surviving_field is None
    assert abs(chain[0].p_e_bar - 1.0) < 1e-14
    assert chain[1].cumulative_Q == chain[2].cumulative_Q == chain[0].cumulative_Q
    assert chain[2].p_e_bar == 0.0


@given(st.floats(0.0, 2.0), st.floats(0.05, 0.95), st.floats(0.05, 1.0))
def test_closed_forms(alpha, eta1, det):
    pr = PriorPair(eta1)
    assert abs(kennedy_limit(alpha, pr) - (eta1 * math.exp(-4 * alpha ** 2) + 1 - eta1)) < 1e-15
    assert abs(kennedy_error(alpha, pr) - eta1 * math.exp(-4 * alpha ** 2)) < 1e-15
    assert abs(idp_limit(alpha, pr) - 2 * math.sqrt(eta1 * (1 - eta1)) * coherent_overlap_pm(alpha)) < 1e-15
    assert pnrd_failure(alpha, pr, det) >= kennedy_limit(alpha, pr) - 1e-15
    assert abs(pnrd_failure(alpha, pr, det) - pnrd_error(alpha, pr, det) - (1 - eta1)) < 1e-15


@pytest.mark.parametrize("det", [0.0, 1.1, -0.2])
def test_efficiency_guard(det):
    with pytest.raises(DomainError):
        pnrd_failure(1.0, det_eff=det)


def test_kennedy_to_helstrom_ratio_limits():
    ratio = lambda a: kennedy_error(a) / helstrom_bound(coherent_overlap_pm(a))
    assert abs(ratio(2.0) - 2.0) < 1e-6
    assert abs(ratio(1e-3) - 1.0) < 1e-2
    assert abs(ratio(0.05) - 1.0998) < 1e-3
    vals = [ratio(a) for a in np.linspace(0.05, 2.0, 40)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_second_round_series():
    alpha = 0.5
    f = coherent_amplitudes(2 * alpha)
    phi, _ = max_excitation(f)
    p_g, post = surviving_field(f, phi)
    assert abs(post.norm_sq() - 1.0) < 1e-12
    n = np.arange(f.truncation_dim)
    pops = f.populations
    for phi2 in (0.4, 1.1, 1.9):
        series = np.sum(np.sin(phi2 * np.sqrt(n)) ** 2 * np.cos(phi * np.sqrt(n)) ** 2 * pops) / p_g
        assert abs(excitation_probability(post, phi2) - series) < 1e-14


def test_no_signal_prior():
    chain = run_unambiguous_chain(KennedyProblem(1.0, PriorPair(0.0)))
    assert [r.cumulative_Q for r in chain] == [1.0, 1.0, 1.0]
    assert idp_limit(1.0, PriorPair(0.0)) == 0.0


def test_direct_evaluations():
    assert abs(idp_limit(0.5) - math.exp(-0.5)) < 1e-15
    assert abs(kennedy_limit(math.sqrt(0.5)) - (0.5 * math.exp(-2) + 0.5)) < 1e-15
    assert abs(pnrd_failure(math.sqrt(0.5), det_eff=0.91) - (0.5 * math.exp(-1.82) + 0.5)) < 1e-15
    assert abs(pnrd_failure(1.0, det_eff=1e-9) - 1.0) < 1e-8
