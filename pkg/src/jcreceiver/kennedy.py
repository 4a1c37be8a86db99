"""Unambiguous discrimination by displacement and atomic-excitation detection.

After ``D(alpha)`` the signals become ``|2 alpha>`` and the vacuum. The vacuum
never excites a ground-state atom, so every excitation click is a certain
"signal 1" verdict; a no-click leaves a surviving field that can be probed
again by a fresh atom.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, ImpossibleOutcomeError
from .fock import DEFAULT_EPS_TRUNC, CoherentLabel, FieldState, as_label, coherent_amplitudes, displace_coherent
from .jc import IMPOSSIBLE_BELOW, check_phi
from .measurement import EQUAL_PRIORS, PriorPair
from .optimize import SearchWindow, best_over_windows

MAX_ROUNDS = 6

FIRST_MAXIMUM_WINDOW = (SearchWindow(0.0, 2.0),)
ALL_MAXIMA_WINDOWS = (SearchWindow(0.0, 2.0), SearchWindow(7.8, 9.0), SearchWindow(30.0, 31.0))


def _root_n(dim):
    return np.sqrt(np.arange(dim))


def excitation_probability(field: FieldState, phi):
    """``sum_n |f_n|^2 sin^2(phi sqrt n)``; accepts an array of ``phi``."""
    pops = field.populations
    arg = np.multiply.outer(np.asarray(phi, dtype=float), _root_n(pops.size))
    p = np.sin(arg) ** 2 @ pops
    return float(p) if np.ndim(phi) == 0 else p


def max_excitation(field: FieldState, windows: Sequence[SearchWindow] = FIRST_MAXIMUM_WINDOW):
    """``(phi_star, p_e_bar)``: the largest excitation probability over the windows."""
    rep = best_over_windows(lambda phis: excitation_probability(field, phis), windows, vectorized=True)
    return rep.x_star, rep.f_star


def surviving_field(field: FieldState, phi: float):
    """Field left behind when the atom is found in ``|g>``.

    Returns ``(p_g, post)`` with ``p_g = sum cos^2(phi sqrt n) |f_n|^2`` and
    ``post`` proportional to ``cos(phi sqrt n) f_n``, scaled to unit norm.
    """
    phi = check_phi(phi)
    amps = np.cos(phi * _root_n(field.truncation_dim)) * field.amplitudes
    p_g = float(np.sum(np.abs(amps) ** 2))
    if p_g < IMPOSSIBLE_BELOW:
        raise ImpossibleOutcomeError(p_g, "the atom is certainly excited; no field survives a no-click")
    return p_g, FieldState(amps / math.sqrt(p_g), field.tail_mass)


@dataclass(frozen=True)
class KennedyProblem:
    alpha: CoherentLabel
    priors: PriorPair = EQUAL_PRIORS
    rounds: int = 3
    windows: Tuple[SearchWindow, ...] = FIRST_MAXIMUM_WINDOW
    eps_trunc: float = DEFAULT_EPS_TRUNC

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_label(self.alpha))
        if not isinstance(self.priors, PriorPair):
            object.__setattr__(self, "priors", PriorPair(self.priors))
        if not 1 <= self.rounds <= MAX_ROUNDS:
            raise DomainError(f"rounds must lie in [1, {MAX_ROUNDS}], got {self.rounds!r}")
        object.__setattr__(self, "windows", tuple(self.windows))

    @property
    def displaced_signal(self) -> FieldState:
        """``D(alpha)|alpha> = |2 alpha>``."""
        a = self.alpha.alpha
        return coherent_amplitudes(displace_coherent(a, a), self.eps_trunc)


@dataclass(frozen=True, eq=False)
class RoundOutcome:
    phi_star: float
    p_e_bar: float
    surviving_field: Optional[FieldState]
    cumulative_Q: float
    #: probability that signal 1 has produced no click through this round
    survival: float


def run_unambiguous_chain(problem: KennedyProblem) -> List[RoundOutcome]:
    """Probe ``|2 alpha>`` with up to ``problem.rounds`` fresh atoms.

    After ``k`` rounds ``Q_k = 1 - eta1 (1 - prod_j (1 - p_e_bar_j))``. The
    signal-2 branch is the vacuum throughout and never clicks. If a round
    leaves no surviving field, later rounds repeat its totals.
    """
    eta1 = problem.priors.eta1
    field = problem.displaced_signal
    survival = 1.0
    out = []
    for _ in range(problem.rounds):
        if field is None:
            last = out[-1]
            out.append(RoundOutcome(last.phi_star, 0.0, None, last.cumulative_Q, survival))
            continue
        phi, p_bar = max_excitation(field, problem.windows)
        survival *= 1.0 - p_bar
        try:
            _, field = surviving_field(field, phi)
        except ImpossibleOutcomeError:
            field = None
        q = 1.0 - eta1 * (1.0 - survival)
        out.append(RoundOutcome(phi, p_bar, field, q, survival))
    return out


def idp_limit(alpha, priors: PriorPair = EQUAL_PRIORS) -> float:
    """Ivanovic-Dieks-Peres failure probability ``2 sqrt(eta1 eta2) exp(-2 |alpha|^2)``."""
    return 2.0 * math.sqrt(priors.eta1 * priors.eta2) * math.exp(-2.0 * abs(complex(alpha)) ** 2)


def kennedy_limit(alpha, priors: PriorPair = EQUAL_PRIORS) -> float:
    """Failure probability of the ideal Kennedy receiver, ``eta1 exp(-4 |alpha|^2) + eta2``."""
    return pnrd_failure(alpha, priors, 1.0)


def kennedy_error(alpha, priors: PriorPair = EQUAL_PRIORS) -> float:
    """Error probability of the ideal Kennedy receiver, ``eta1 exp(-4 |alpha|^2)``."""
    return pnrd_error(alpha, priors, 1.0)


def _check_efficiency(det_eff):
    if not 0.0 < det_eff <= 1.0:
        raise DomainError(f"detector efficiency must lie in (0, 1], got {det_eff!r}")


def pnrd_failure(alpha, priors: PriorPair = EQUAL_PRIORS, det_eff: float = 1.0) -> float:
    """Displacement + photon counting with efficiency ``det_eff``: ``eta1 exp(-4 det_eff |alpha|^2) + eta2``.

    Losses thin the Poisson statistics of ``|2 alpha>``; no dark counts.
    """
    _check_efficiency(det_eff)
    return priors.eta1 * math.exp(-4.0 * det_eff * abs(complex(alpha)) ** 2) + priors.eta2


def pnrd_error(alpha, priors: PriorPair = EQUAL_PRIORS, det_eff: float = 1.0) -> float:
    """Error probability of the same receiver when a no-click is read as signal 2."""
    _check_efficiency(det_eff)
    return priors.eta1 * math.exp(-4.0 * det_eff * abs(complex(alpha)) ** 2)
