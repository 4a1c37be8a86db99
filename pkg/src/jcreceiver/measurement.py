"""Two-outcome measurements on the ancilla and the bounds they are judged against."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .errors import DomainError, UnsupportedConfigurationError
from .fock import DEFAULT_EPS_TRUNC, coherent_amplitudes, wrap_phase
from .jc import AtomState, _atom_entries, check_phi
from .optimize import SearchWindow, maximize_scalar

#: The ``chi = arctan(gamma)`` search avoids the endpoints of ``[0, pi/2]``.
CHI_MARGIN = 1e-6


@dataclass(frozen=True)
class AtomProjector:
    """Rank-1 projector onto ``(|g> + exp(i theta) gamma |e>) / sqrt(1 + gamma^2)``.

    ``gamma = inf`` stands for ``|e><e|``.
    """

    gamma: float
    theta: float = 0.0

    def __post_init__(self):
        gamma = float(self.gamma)
        if not gamma >= 0.0:
            raise DomainError(f"gamma must be non-negative, got {self.gamma!r}")
        if not math.isfinite(float(self.theta)):
            raise DomainError(f"theta must be finite, got {self.theta!r}")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "theta", wrap_phase(float(self.theta)))

    @property
    def vector(self) -> np.ndarray:
        if math.isinf(self.gamma):
            return np.array([0.0, cmath.exp(1j * self.theta)], dtype=complex)
        norm = math.hypot(1.0, self.gamma)
        return np.array([1.0 / norm, cmath.exp(1j * self.theta) * (self.gamma / norm)], dtype=complex)

    @property
    def matrix(self) -> np.ndarray:
        v = self.vector
        return np.outer(v, np.conj(v))

    def complement(self) -> "AtomProjector":
        """The orthogonal projector ``1 - Pi``."""
        if self.gamma == 0.0:
            return AtomProjector(math.inf, 0.0)
        if math.isinf(self.gamma):
            return AtomProjector(0.0, 0.0)
        return AtomProjector(1.0 / self.gamma, self.theta + math.pi)

    @classmethod
    def from_vector(cls, v) -> "AtomProjector":
        vg, ve = np.asarray(v, dtype=complex).ravel()
        if abs(vg) == 0.0:
            return cls(math.inf, cmath.phase(ve))
        with np.errstate(over="ignore"):
            # an overflowing ratio is the |e> projector
            gamma = abs(ve) / abs(vg)
        return cls(gamma, cmath.phase(ve) - cmath.phase(vg))


#: ``|+> = (|g> + i|e>)/sqrt(2)`` and ``|-> = (|g> - i|e>)/sqrt(2)``.
PI_PLUS = AtomProjector(1.0, math.pi / 2)
PI_MINUS = AtomProjector(1.0, -math.pi / 2)


@dataclass(frozen=True)
class PriorPair:
    """A priori probabilities of the two signals; ``eta2 = 1 - eta1``."""

    eta1: float = 0.5

    def __post_init__(self):
        eta1 = float(self.eta1)
        if not 0.0 <= eta1 <= 1.0:
            raise DomainError(f"eta1 must lie in [0, 1], got {self.eta1!r}")
        object.__setattr__(self, "eta1", eta1)

    @property
    def eta2(self) -> float:
        return 1.0 - self.eta1

    @property
    def equal(self) -> bool:
        return self.eta1 == 0.5

    @property
    def bias(self) -> float:
        """``eta1 - eta2``."""
        return self.eta1 - self.eta2

    def swapped(self) -> "PriorPair":
        return PriorPair(self.eta2)


EQUAL_PRIORS = PriorPair(0.5)


@dataclass(frozen=True)
class WeightedPair:
    state1: AtomState
    state2: AtomState
    priors: PriorPair = EQUAL_PRIORS

    @property
    def delta(self) -> np.ndarray:
        """``eta1 rho1 - eta2 rho2``."""
        return self.priors.eta1 * self.state1.matrix - self.priors.eta2 * self.state2.matrix


def outcome_probability(rho: AtomState, projector: AtomProjector) -> float:
    """``tr(rho Pi)``."""
    v = projector.vector
    return float(np.real(np.vdot(v, rho.matrix @ v)))


def _hermitian_eig2(a, d, c):
    """Eigenvalues ``(lam_plus, lam_minus)`` of ``[[a, c], [c*, d]]`` with real ``a, d``."""
    m = 0.5 * (a + d)
    r = np.hypot(0.5 * (a - d), np.abs(c))
    return m + r, m - r


def delta_eigenvalues(pair: WeightedPair):
    """Eigenvalues of ``eta1 rho1 - eta2 rho2``, largest first."""
    dm = pair.delta
    lp, lm = _hermitian_eig2(dm[0, 0].real, dm[1, 1].real, dm[0, 1])
    return float(lp), float(lm)


def trace_distance(pair: WeightedPair) -> float:
    """``(1/2) sum_j |lambda_j|`` for ``eta1 rho1 - eta2 rho2``.

    Computed from the closed-form 2x2 eigenvalues. Since
    ``|m + r| + |m - r| = 2 max(|m|, r)`` this is ``max(|m|, r)`` with
    ``m`` the mean eigenvalue and ``r`` the half-splitting.
    """
    lp, lm = delta_eigenvalues(pair)
    return 0.5 * (abs(lp) + abs(lm))


def projective_trace_distance(pair: WeightedPair) -> float:
    """``max_Pi |tr(Pi Delta)| - |eta1 - eta2| / 2`` over rank-1 projectors.

    Equals :func:`trace_distance` whenever ``Delta`` has eigenvalues of
    opposite sign, which is the case whenever the ancilla carries any
    information beyond the priors.
    """
    lp, lm = delta_eigenvalues(pair)
    return max(abs(lp), abs(lm)) - 0.5 * abs(pair.priors.bias)


def helstrom_projector(pair: WeightedPair) -> AtomProjector:
    """Projector onto the eigenvector of the largest eigenvalue of ``Delta``.

    Its click favours signal 1; the complement favours signal 2.
    """
    dm = pair.delta
    a, d, c = dm[0, 0].real, dm[1, 1].real, dm[0, 1]
    lp, _ = _hermitian_eig2(a, d, c)
    if abs(c) == 0.0:
        return AtomProjector(0.0) if a >= d else AtomProjector(math.inf)
    if a >= d:
        v = (lp - d, np.conj(c))
    else:
        v = (c, lp - a)
    return AtomProjector.from_vector(v)


def _real_alpha(alpha) -> float:
    a = complex(alpha)
    if a.imag != 0.0:
        raise DomainError("closed-form trace distance needs real alpha; compensate the phase in theta")
    return a.real


def _offdiag_series(amps: np.ndarray, phis):
    """``sum_n |alpha_n|^2 / sqrt(n+1) cos(phi sqrt n) sin(phi sqrt(n+1))`` for ``n < N``."""
    pops = np.abs(amps[:-1]) ** 2
    n = np.arange(amps.size)
    arg = np.multiply.outer(np.asarray(phis, dtype=float), np.sqrt(n))
    terms = np.cos(arg[..., :-1]) * np.sin(arg[..., 1:])
    return terms @ (pops / np.sqrt(n[1:]))


def closed_form_Dtr(alpha: float, phi, eps_trunc: float = DEFAULT_EPS_TRUNC):
    """Trace distance between the ancilla states left by ``|alpha>`` and ``|-alpha>``.

    ``|2 alpha sum_n alpha_n^2 / sqrt(n+1) cos(phi sqrt n) sin(phi sqrt(n+1))|``
    over the truncated basis. Accepts an array of ``phi``.
    """
    a = _real_alpha(alpha)
    amps = coherent_amplitudes(a, eps_trunc).amplitudes
    if np.ndim(phi) == 0:
        check_phi(phi)
        return float(abs(2.0 * a * _offdiag_series(amps, phi)))
    return np.abs(2.0 * a * _offdiag_series(amps, phi))


def _coherent_pair_entries(alpha: complex, phi: float, eps_trunc: float):
    """``(A_g, A_e, S)``: diagonal sums and off-diagonal series of ``rho_{A,alpha}``."""
    amps = coherent_amplitudes(alpha, eps_trunc).amplitudes
    a_g, a_e, _ = _atom_entries(amps, phi)
    return float(a_g), float(a_e), float(_offdiag_series(amps, phi))


def _knowledge_from_entries(a_g, a_e, s, alpha, gamma, theta, priors):
    # tr{Pi (eta1 rho_alpha - eta2 rho_-alpha)}; off-diagonal of rho_alpha is i conj(alpha) S
    g2 = gamma * gamma
    diag = priors.bias * (a_g + g2 * a_e)
    off = -2.0 * gamma * s * (cmath.exp(1j * theta) * complex(alpha).conjugate()).imag
    return abs(diag + off) / (1.0 + g2)


def knowledge(alpha, phi: float, projector: AtomProjector, priors: PriorPair = EQUAL_PRIORS,
              eps_trunc: float = DEFAULT_EPS_TRUNC) -> float:
    """Which-way knowledge ``|tr{Pi (eta1 rho_{A,alpha} - eta2 rho_{A,-alpha})}|``.

    Evaluated from the series

        [(eta1 - eta2) sum alpha_n^2 (cos^2(phi sqrt n) + gamma^2 sin^2(phi sqrt n))
         - 2 gamma Im(e^{i theta} alpha*) S] / (1 + gamma^2)

    with ``S`` the off-diagonal series of :func:`closed_form_Dtr`. With equal
    priors this is half of the unweighted ``|tr{Pi (rho_alpha - rho_-alpha)}|``.
    """
    phi = check_phi(phi)
    a_g, a_e, s = _coherent_pair_entries(alpha, phi, eps_trunc)
    if math.isinf(projector.gamma):
        return abs(priors.bias * a_e)
    return _knowledge_from_entries(a_g, a_e, s, alpha, projector.gamma, projector.theta, priors)


def optimal_projector(alpha, phi: float, priors: PriorPair = EQUAL_PRIORS,
                      eps_trunc: float = DEFAULT_EPS_TRUNC, grid_points: int = 2048,
                      refine_tol: float = 1e-10):
    """Best ``Pi(gamma, theta)`` for fixed ``alpha`` and ``phi``.

    ``theta`` is one of ``arg(alpha) +- pi/2`` (``+`` preferred on ties) and
    ``gamma = tan(chi)`` comes from a bounded search over ``chi``.

    Returns
    -------
    projector : AtomProjector
    knowledge : float
    """
    phi = check_phi(phi)
    a_g, a_e, s = _coherent_pair_entries(alpha, phi, eps_trunc)
    base = cmath.phase(complex(alpha))
    window = SearchWindow(CHI_MARGIN, math.pi / 2 - CHI_MARGIN, grid_points, refine_tol)
    best = None
    for theta in (base + math.pi / 2, base - math.pi / 2):
        rep = maximize_scalar(
            lambda chi: _knowledge_from_entries(a_g, a_e, s, alpha, math.tan(chi), theta, priors),
            window,
        )
        if best is None or rep.f_star > best[1]:
            best = (AtomProjector(math.tan(rep.x_star), theta), rep.f_star)
    return best


def optimal_gamma(alpha, phi: float, priors: PriorPair = EQUAL_PRIORS,
                  eps_trunc: float = DEFAULT_EPS_TRUNC):
    """``(gamma_opt, knowledge*)``; see :func:`optimal_projector`."""
    if abs(complex(alpha)) == 0.0:
        raise DomainError("optimal gamma is undefined for alpha = 0")
    proj, k = optimal_projector(alpha, phi, priors, eps_trunc)
    return proj.gamma, k


def helstrom_r_values(s: float, priors: PriorPair = EQUAL_PRIORS):
    """Per-signal error rates ``(r1, r2)`` of a Helstrom-saturating scheme."""
    eta1, eta2 = priors.eta1, priors.eta2
    root = math.sqrt(max(0.0, 1.0 - 4.0 * eta1 * eta2 * s * s))
    if root == 0.0:
        return 0.5, 0.5
    r1 = 0.5 * (1.0 - (1.0 - 2.0 * eta2 * s * s) / root)
    r2 = 0.5 * (1.0 - (1.0 - 2.0 * eta1 * s * s) / root)
    # round-off can push a rate a few ulps outside [0, 1] near s = 1
    return min(max(r1, 0.0), 1.0), min(max(r2, 0.0), 1.0)


def helstrom_bound(s: float, priors: PriorPair = EQUAL_PRIORS) -> float:
    """Minimum error probability for two pure states with overlap ``s``.

    ``(1/2)(1 - sqrt(1 - 4 eta1 eta2 s^2))``, the same as ``eta1 r1 + eta2 r2``.
    """
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"overlap must lie in [0, 1], got {s!r}")
    return 0.5 * (1.0 - math.sqrt(max(0.0, 1.0 - 4.0 * priors.eta1 * priors.eta2 * s * s)))


def coherent_overlap_pm(alpha) -> float:
    """``|<alpha|-alpha>| = exp(-2 |alpha|^2)``."""
    return math.exp(-2.0 * abs(complex(alpha)) ** 2)


def sql_homodyne(alpha, priors: PriorPair = EQUAL_PRIORS) -> float:
    """Ideal homodyne error ``erfc(sqrt(2) |alpha|) / 2`` (equal priors only)."""
    if not priors.equal:
        raise UnsupportedConfigurationError("the homodyne benchmark is defined for equal priors only")
    return 0.5 * float(erfc(math.sqrt(2.0) * abs(complex(alpha))))
