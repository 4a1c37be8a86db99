"""Minimum-error discrimination of ``{|alpha>, |-alpha>}`` through one ancilla atom,
and its sequential extension on the post-measurement fields."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError
from .fock import DEFAULT_EPS_TRUNC, CoherentLabel, FieldState, as_label, coherent_amplitudes, wrap_phase
from .jc import (IMPOSSIBLE_BELOW, _atom_entries, atom_state_from_ground, check_phi,
                 conditional_amplitudes, evolve_from_ground)
from .measurement import (EQUAL_PRIORS, AtomProjector, PriorPair, WeightedPair, _hermitian_eig2,
                          _offdiag_series, coherent_overlap_pm, helstrom_bound, helstrom_projector,
                          optimal_projector)
from .optimize import SearchWindow, best_over_windows

MAX_ROUNDS = 6

EQUAL_PRIOR_WINDOWS = (SearchWindow(0.0, 2.0), SearchWindow(7.5, 9.0))
BIASED_PRIOR_WINDOWS = (SearchWindow(7.5, 9.0),)
GLOBAL_WINDOW = (SearchWindow(0.0, 35.0, 8192),)


def default_windows(priors: PriorPair) -> Tuple[SearchWindow, ...]:
    return EQUAL_PRIOR_WINDOWS if priors.equal else BIASED_PRIOR_WINDOWS


@dataclass(frozen=True)
class DiscriminationProblem:
    alpha: CoherentLabel
    priors: PriorPair = EQUAL_PRIORS
    windows: Optional[Tuple[SearchWindow, ...]] = None
    eps_trunc: float = DEFAULT_EPS_TRUNC

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_label(self.alpha))
        if not isinstance(self.priors, PriorPair):
            object.__setattr__(self, "priors", PriorPair(self.priors))
        windows = default_windows(self.priors) if self.windows is None else tuple(self.windows)
        if not windows:
            raise DomainError("at least one search window is required")
        object.__setattr__(self, "windows", windows)

    @property
    def fields(self) -> Tuple[FieldState, FieldState]:
        a = self.alpha.alpha
        return coherent_amplitudes(a, self.eps_trunc), coherent_amplitudes(-a, self.eps_trunc)

    @property
    def helstrom(self) -> float:
        return helstrom_bound(coherent_overlap_pm(self.alpha.alpha), self.priors)


@dataclass(frozen=True)
class DiscriminationResult:
    phi_star: float
    gamma_star: float
    theta_star: float
    p_err: float
    helstrom: float
    d_tr: float
    window_used: SearchWindow
    degenerate: bool = False

    @property
    def deviation(self) -> float:
        return self.p_err - self.helstrom

    @property
    def projector(self) -> AtomProjector:
        return AtomProjector(self.gamma_star, self.theta_star)


#: Trace-distance gains at or below this are round-off, not information.
GAIN_FLOOR = 1e-14


def _gain(a, d, c):
    """``max(r - |m|, 0)`` for ``[[a, c], [c*, d]]``, written as ``(|c|^2 - a d) / (r + |m|)``."""
    m = np.abs(0.5 * (a + d))
    r = np.hypot(0.5 * (a - d), np.abs(c))
    num = np.maximum(np.abs(c) ** 2 - a * d, 0.0)
    den = r + m
    return np.divide(num, den, out=np.zeros_like(num, dtype=float), where=den > 0)


def _dtr(a, d, c):
    return np.maximum(np.abs(0.5 * (a + d)), np.hypot(0.5 * (a - d), np.abs(c)))


def _biased_dtr_curves(alpha: complex, priors: PriorPair, eps_trunc: float):
    """``(gain, d_tr)`` functions of ``phi`` for the signal pair, vectorized.

    With ``m`` the mean eigenvalue and ``r`` the half-splitting of
    ``eta1 rho_1 - eta2 rho_2``, ``d_tr = max(|m|, r)`` and
    ``gain = max(r - |m|, 0)``. The gain is the optimization target: ``|m|``
    is constant in ``phi`` up to round-off, which would otherwise decide the
    argmax when no measurement helps.
    """
    amps = coherent_amplitudes(alpha, eps_trunc).amplitudes
    mod = abs(alpha)
    bias = priors.bias

    def parts(phis):
        a_g, a_e, _ = _atom_entries(amps, phis)
        return bias * a_g, bias * a_e, mod * np.abs(_offdiag_series(amps, phis))

    def gain(phis):
        return _gain(*parts(phis))

    def d_tr(phis):
        return _dtr(*parts(phis))

    return gain, d_tr


def solve(problem: DiscriminationProblem) -> DiscriminationResult:
    """Optimal single-round scheme: best ``phi`` over the windows, then best ``Pi(gamma, theta)``.

    Equal priors use the closed-form trace distance (``gamma = 1``,
    ``theta = pi/2 + arg alpha``), ``p_err = (1 - D_tr)/2``. Biased priors
    maximize ``D_tr(eta1 rho_{A,alpha}, eta2 rho_{A,-alpha})`` over ``phi`` and
    then search ``gamma`` at that ``phi``; ``p_err = (1 - 2 D_tr)/2``.
    """
    alpha = problem.alpha.alpha
    priors = problem.priors
    helstrom = problem.helstrom
    if alpha == 0:
        return DiscriminationResult(problem.windows[0].lo, 1.0, math.pi / 2,
                                    min(priors.eta1, priors.eta2), helstrom,
                                    0.5 * abs(priors.bias), problem.windows[0], degenerate=True)

    gain, curve = _biased_dtr_curves(alpha, priors, problem.eps_trunc)
    rep = best_over_windows(gain, problem.windows, vectorized=True)
    d_tr = float(curve(rep.x_star))
    if priors.equal:
        gamma, theta = 1.0, wrap_phase(math.pi / 2 + cmath.phase(alpha))
    else:
        proj, _ = optimal_projector(alpha, rep.x_star, priors, problem.eps_trunc)
        gamma, theta = proj.gamma, proj.theta
    p_err = 0.5 * (1.0 - 2.0 * d_tr)
    return DiscriminationResult(rep.x_star, gamma, theta, p_err, helstrom, d_tr, rep.window)


@dataclass(frozen=True, eq=False)
class SequenceBranch:
    """Knowledge state after a string of ancilla outcomes.

    ``field1``/``field2`` are the post-measurement fields had signal 1/2 been
    sent, ``priors`` the confidence probabilities, and ``branch_prob`` the
    absolute probability of ``path``.
    """

    field1: FieldState
    field2: FieldState
    priors: PriorPair
    path: Tuple[str, ...] = ()
    branch_prob: float = 1.0
    impossible: bool = False

    @property
    def depth(self) -> int:
        return len(self.path)

    @property
    def decision_error(self) -> float:
        """Bayes error of guessing the likelier signal now, weighted by ``branch_prob``."""
        return self.branch_prob * min(self.priors.eta1, self.priors.eta2)

    @classmethod
    def root(cls, problem: DiscriminationProblem) -> "SequenceBranch":
        f1, f2 = problem.fields
        return cls(f1, f2, problem.priors)


def _projector_pair(projectors):
    if isinstance(projectors, AtomProjector):
        return projectors, projectors.complement()
    first, second = projectors
    if not np.allclose(first.matrix + second.matrix, np.eye(2), atol=1e-12):
        raise DomainError("the two projectors do not resolve the identity")
    return first, second


def branch_after_measurement(source, phi: float, projectors, labels=("0", "1")):
    """Split a branch on the outcome of one ancilla measurement.

    Parameters
    ----------
    source : DiscriminationProblem or SequenceBranch
    phi : float
        Integrated coupling of the fresh ground-state ancilla.
    projectors : AtomProjector or (AtomProjector, AtomProjector)
        A single projector is paired with its complement.
    labels : pair of str
        Appended to ``path`` for the two outcomes.

    Returns
    -------
    (SequenceBranch, SequenceBranch)
        Children for the first and second projector. A child whose outcome
        probability is below 1e-14 comes back with ``impossible=True``.
    """
    parent = SequenceBranch.root(source) if isinstance(source, DiscriminationProblem) else source
    phi = check_phi(phi)
    pair = _projector_pair(projectors)
    joints = (evolve_from_ground(parent.field1, phi), evolve_from_ground(parent.field2, phi))
    parent_fields = (parent.field1, parent.field2)
    etas = (parent.priors.eta1, parent.priors.eta2)
    children = []
    for proj, label in zip(pair, labels):
        probs, posts = [], []
        for joint, parent_field in zip(joints, parent_fields):
            amps = conditional_amplitudes(joint, proj)
            p = float(np.sum(np.abs(amps) ** 2))
            probs.append(p)
            if p >= IMPOSSIBLE_BELOW:
                posts.append(FieldState(amps / math.sqrt(p), joint.tail_mass))
            else:
                posts.append(parent_field)
        p_outcome = etas[0] * probs[0] + etas[1] * probs[1]
        path = parent.path + (label,)
        if p_outcome < IMPOSSIBLE_BELOW:
            children.append(SequenceBranch(parent.field1, parent.field2, parent.priors, path,
                                           0.0, impossible=True))
            continue
        c1 = min(1.0, etas[0] * probs[0] / p_outcome)
        children.append(SequenceBranch(posts[0], posts[1], PriorPair(c1), path,
                                       parent.branch_prob * p_outcome))
    return tuple(children)


def _weighted_dtr_curves(field1: FieldState, field2: FieldState, priors: PriorPair):
    """``(gain, d_tr)`` functions of ``phi`` for arbitrary input fields; see :func:`_biased_dtr_curves`."""
    a1, a2 = field1.amplitudes, field2.amplitudes
    dim = max(a1.size, a2.size)
    a1 = np.pad(a1, (0, dim - a1.size))
    a2 = np.pad(a2, (0, dim - a2.size))
    eta1, eta2 = priors.eta1, priors.eta2

    def parts(phis):
        g1, e1, c1 = _atom_entries(a1, phis)
        g2, e2, c2 = _atom_entries(a2, phis)
        return eta1 * g1 - eta2 * g2, eta1 * e1 - eta2 * e2, eta1 * c1 - eta2 * c2

    def gain(phis):
        return _gain(*parts(phis))

    def d_tr(phis):
        return _dtr(*parts(phis))

    return gain, d_tr


def optimize_branch(branch: SequenceBranch, windows: Sequence[SearchWindow]):
    """Best coupling and Helstrom projector for the ancilla pair of a branch.

    Returns ``(phi_star, projector, d_tr, gain, window_used)``; ``gain`` is
    ``d_tr - |eta1 - eta2| / 2``, the drop in Bayes error the measurement buys.
    """
    gain, curve = _weighted_dtr_curves(branch.field1, branch.field2, branch.priors)
    rep = best_over_windows(gain, windows, vectorized=True)
    pair = WeightedPair(atom_state_from_ground(branch.field1, rep.x_star),
                        atom_state_from_ground(branch.field2, rep.x_star), branch.priors)
    return rep.x_star, helstrom_projector(pair), float(curve(rep.x_star)), rep.f_star, rep.window


@dataclass(frozen=True)
class RoundSummary:
    round: int
    cumulative_p_err: float
    helstrom: float
    n_leaves: int
    n_impossible: int
    total_branch_prob: float


@dataclass(frozen=True, eq=False)
class SequenceReport:
    single_shot: DiscriminationResult
    rounds: Tuple[RoundSummary, ...]
    leaves: Tuple[SequenceBranch, ...]
    #: leaves after each round, ``levels[k]`` holds depth ``k + 1``
    levels: Tuple[Tuple[SequenceBranch, ...], ...] = field(default=())

    @property
    def cumulative_p_err(self) -> List[float]:
        return [r.cumulative_p_err for r in self.rounds]


def run_sequence(problem: DiscriminationProblem, rounds: int,
                 windows: Optional[Sequence[SearchWindow]] = None) -> SequenceReport:
    """Re-attack every leaf with a fresh ground-state ancilla, ``rounds`` times.

    Round 1 uses the coupling found by :func:`solve`. Later rounds pick, per
    leaf, the ``phi`` in ``windows`` (default: the problem's) that maximizes the
    weighted trace distance of the leaf's ancilla pair, and measure its
    Helstrom projector. A leaf where no ``phi`` lowers the Bayes error is
    carried to the next level unmeasured. The cumulative error is the Bayes
    error summed over the leaves.
    """
    if not 1 <= rounds <= MAX_ROUNDS:
        raise DomainError(f"rounds must lie in [1, {MAX_ROUNDS}], got {rounds!r}")
    windows = problem.windows if windows is None else tuple(windows)
    first = solve(problem)
    helstrom = first.helstrom
    leaves = (SequenceBranch.root(problem),)
    summaries, levels = [], []
    for k in range(1, rounds + 1):
        if first.degenerate:
            summaries.append(RoundSummary(k, first.p_err, helstrom, 1, 0, 1.0))
            levels.append(leaves)
            continue
        children = []
        for leaf in leaves:
            if leaf.impossible:
                continue
            if k == 1:
                phi = first.phi_star
                pair = WeightedPair(atom_state_from_ground(leaf.field1, phi),
                                    atom_state_from_ground(leaf.field2, phi), leaf.priors)
                proj = helstrom_projector(pair)
            else:
                phi, proj, _, gain, _ = optimize_branch(leaf, windows)
                if gain <= GAIN_FLOOR:
                    # no outcome in the windows can overturn the current guess
                    children.append(leaf)
                    continue
            children.extend(branch_after_measurement(leaf, phi, proj, labels=("1", "2")))
        leaves = tuple(children)
        levels.append(leaves)
        live = [b for b in leaves if not b.impossible]
        summaries.append(RoundSummary(
            k,
            float(math.fsum(b.decision_error for b in live)),
            helstrom,
            len(live),
            len(leaves) - len(live),
            float(math.fsum(b.branch_prob for b in live)),
        ))
    return SequenceReport(first, tuple(summaries), leaves, tuple(levels))


def displaced_single_round(problem: DiscriminationProblem, beta: float) -> DiscriminationResult:
    """Single-round error when both signals are displaced by ``beta`` first.

    The fields ``|beta + alpha>`` and ``|beta - alpha>`` are no longer mirror
    images, so the generic eigenvalue objective is used over the problem's
    windows together with the Helstrom projector at the optimum.
    """
    a = problem.alpha.alpha
    f1 = coherent_amplitudes(a + beta, problem.eps_trunc)
    f2 = coherent_amplitudes(-a + beta, problem.eps_trunc)
    phi, proj, d_tr, _, window = optimize_branch(SequenceBranch(f1, f2, problem.priors), problem.windows)
    return DiscriminationResult(phi, proj.gamma, proj.theta, 0.5 * (1.0 - 2.0 * d_tr),
                                problem.helstrom, d_tr, window)
