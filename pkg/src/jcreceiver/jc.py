"""Resonant Jaynes-Cummings evolution in the integrated coupling ``phi``.

The interaction only couples the pairs ``(|g, n>, |e, n-1>)``, each of which
rotates at the Rabi frequency ``sqrt(n)``. Everything here is expressed in
the dimensionless ``phi = integral of g(t) dt``.

Truncation: a joint state holds ``c_{g,0..N}`` and ``c_{e,0..N}``. The level
``|e, N>`` pairs with ``|g, N+1>``, which is outside the basis, so whatever
population would rotate into it is moved to ``tail_mass``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ImpossibleOutcomeError
from .fock import FieldState

#: Guard on the integrated coupling.
MAX_PHI = 100.0
#: Unrenormalized atomic traces are kept when the joint state's tail is at most this.
RENORMALIZE_ABOVE = 1e-10
#: Outcomes less likely than this have no normalizable post-measurement state.
IMPOSSIBLE_BELOW = 1e-14


def check_phi(phi: float) -> float:
    phi = float(phi)
    if not math.isfinite(phi) or phi < 0.0 or phi > MAX_PHI:
        raise DomainError(f"integrated coupling must lie in [0, {MAX_PHI:g}], got {phi!r}")
    return phi


def _frozen(a, dim=None):
    a = np.array(a, dtype=complex).ravel()
    if dim is not None and a.size < dim:
        a = np.concatenate([a, np.zeros(dim - a.size, dtype=complex)])
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class JointState:
    """Atom-field state ``sum_n c_{g,n}|g,n> + c_{e,n}|e,n>``."""

    g_branch: np.ndarray
    e_branch: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        dim = max(np.size(self.g_branch), np.size(self.e_branch))
        object.__setattr__(self, "g_branch", _frozen(self.g_branch, dim))
        object.__setattr__(self, "e_branch", _frozen(self.e_branch, dim))
        object.__setattr__(self, "tail_mass", float(self.tail_mass))

    @property
    def truncation_dim(self) -> int:
        return self.g_branch.size

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.g_branch) ** 2) + np.sum(np.abs(self.e_branch) ** 2))

    @classmethod
    def ground(cls, field: FieldState) -> "JointState":
        """Field ``field`` with the atom in ``|g>``."""
        return cls(field.amplitudes, np.zeros_like(field.amplitudes), field.tail_mass)


@dataclass(frozen=True)
class AtomState:
    """Reduced 2x2 density matrix of the ancilla in the ``{|g>, |e>}`` basis.

    ``coh_ge`` is the element ``<g|rho|e>``. ``renormalized`` records that the
    diagonal was rescaled to unit trace because the parent joint state had a
    noticeable truncation tail.
    """

    p_gg: float
    p_ee: float
    coh_ge: complex = 0j
    renormalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "p_gg", float(self.p_gg))
        object.__setattr__(self, "p_ee", float(self.p_ee))
        object.__setattr__(self, "coh_ge", complex(self.coh_ge))

    @property
    def matrix(self) -> np.ndarray:
        c = self.coh_ge
        return np.array([[self.p_gg, c], [c.conjugate(), self.p_ee]], dtype=complex)

    @property
    def trace(self) -> float:
        return self.p_gg + self.p_ee

    def psd_violation(self) -> float:
        """How far ``|coh|^2`` exceeds ``p_gg p_ee`` (zero or negative when PSD)."""
        return abs(self.coh_ge) ** 2 - self.p_gg * self.p_ee

    @classmethod
    def from_matrix(cls, rho) -> "AtomState":
        rho = np.asarray(rho, dtype=complex)
        return cls(rho[0, 0].real, rho[1, 1].real, rho[0, 1])


GROUND = AtomState(1.0, 0.0)
MAXIMALLY_MIXED = AtomState(0.5, 0.5)


def evolve_from_ground(field: FieldState, phi: float) -> JointState:
    """Evolve ``field (x) |g>`` for integrated coupling ``phi``.

    ``c_{g,n} = cos(phi sqrt(n)) f_n`` and
    ``c_{e,n-1} = -i sin(phi sqrt(n)) f_n``; the vacuum term is untouched.
    """
    phi = check_phi(phi)
    f = field.amplitudes
    root_n = np.sqrt(np.arange(f.size))
    g = np.cos(phi * root_n) * f
    e = np.zeros_like(f)
    e[:-1] = -1j * np.sin(phi * root_n[1:]) * f[1:]
    return JointState(g, e, field.tail_mass)


def evolve_general(joint: JointState, phi: float) -> JointState:
    """Closed-form evolution of an arbitrary joint state.

    Each pair obeys ``c_{g,n} +- c_{e,n-1} -> exp(-+ i phi sqrt(n)) (c_{g,n} +- c_{e,n-1})``,
    i.e. a rotation by ``phi sqrt(n)``. ``c_{e,N}`` keeps only its
    ``cos(phi sqrt(N+1))`` component; the rest is added to ``tail_mass``.
    """
    phi = check_phi(phi)
    g0, e0 = joint.g_branch, joint.e_branch
    dim = g0.size
    root = np.sqrt(np.arange(1, dim + 1))
    cos, sin = np.cos(phi * root), np.sin(phi * root)
    g = g0.copy()
    e = e0.copy()
    # pair n (1..N): g[n] <-> e[n-1], rotation index n-1 in cos/sin
    g[1:] = cos[:-1] * g0[1:] - 1j * sin[:-1] * e0[:-1]
    e[:-1] = -1j * sin[:-1] * g0[1:] + cos[:-1] * e0[:-1]
    e[-1] = cos[-1] * e0[-1]
    lost = float(abs(sin[-1] * e0[-1]) ** 2)
    return JointState(g, e, joint.tail_mass + lost)


def reduce_atom(joint: JointState) -> AtomState:
    """Trace out the field."""
    g, e = joint.g_branch, joint.e_branch
    p_gg = float(np.sum(np.abs(g) ** 2))
    p_ee = float(np.sum(np.abs(e) ** 2))
    coh = complex(np.sum(g * np.conj(e)))
    if joint.tail_mass > RENORMALIZE_ABOVE:
        tr = p_gg + p_ee
        return AtomState(p_gg / tr, p_ee / tr, coh / tr, renormalized=True)
    return AtomState(p_gg, p_ee, coh)


def _atom_entries(amps: np.ndarray, phis):
    """``(rho_gg, rho_ee, rho_ge)`` after evolving ``amps (x) |g>``, vectorized over ``phis``."""
    phis = np.asarray(phis, dtype=float)
    pops = np.abs(amps) ** 2
    root = np.sqrt(np.arange(amps.size))
    arg = np.multiply.outer(phis, root)
    cos, sin = np.cos(arg), np.sin(arg)
    gg = (cos ** 2) @ pops
    ee = (sin ** 2) @ pops
    ge = 1j * ((cos[..., :-1] * sin[..., 1:]) @ (amps[:-1] * np.conj(amps[1:])))
    return gg, ee, ge


def atom_state_from_ground(field: FieldState, phi: float) -> AtomState:
    """Reduced ancilla state after the interaction, without forming the joint state.

    Same result as ``reduce_atom(evolve_from_ground(field, phi))``.
    """
    phi = check_phi(phi)
    gg, ee, ge = _atom_entries(field.amplitudes, phi)
    gg, ee, ge = float(gg), float(ee), complex(ge)
    if field.tail_mass > RENORMALIZE_ABOVE:
        tr = gg + ee
        return AtomState(gg / tr, ee / tr, ge / tr, renormalized=True)
    return AtomState(gg, ee, ge)


def outcome_vector(outcome) -> np.ndarray:
    """Unit vector ``(chi_g, chi_e)`` of a rank-1 atomic outcome.

    ``outcome`` is ``"g"``, ``"e"``, an object with a ``vector`` attribute
    (e.g. :class:`~jcreceiver.measurement.AtomProjector`) or a 2-vector.
    """
    if isinstance(outcome, str):
        if outcome == "g":
            return np.array([1.0, 0.0], dtype=complex)
        if outcome == "e":
            return np.array([0.0, 1.0], dtype=complex)
        raise DomainError(f"unknown basis flag {outcome!r}")
    v = np.asarray(getattr(outcome, "vector", outcome), dtype=complex).ravel()
    if v.size != 2:
        raise DomainError("an atomic outcome is a vector of length 2")
    return v / np.linalg.norm(v)


def conditional_amplitudes(joint: JointState, outcome) -> np.ndarray:
    """Unnormalized field amplitudes ``<chi|Psi>`` for atomic outcome ``|chi>``."""
    chi = outcome_vector(outcome)
    return np.conj(chi[0]) * joint.g_branch + np.conj(chi[1]) * joint.e_branch


def project_field(joint: JointState, outcome):
    """Condition the field on an atomic outcome.

    Returns
    -------
    probability : float
        ``<Psi| (|chi><chi| (x) 1) |Psi>``.
    post_field : FieldState
        Unit-norm field state given the outcome; inherits ``tail_mass``.

    Raises
    ------
    ImpossibleOutcomeError
        If the outcome probability is below 1e-14.
    """
    amps = conditional_amplitudes(joint, outcome)
    prob = float(np.sum(np.abs(amps) ** 2))
    if prob < IMPOSSIBLE_BELOW:
        raise ImpossibleOutcomeError(prob)
    return prob, FieldState(amps / math.sqrt(prob), joint.tail_mass)


def ode_oracle_evolve(joint: JointState, phi: float, steps: int = 10_000) -> JointState:
    """Integrate the pairwise Schrodinger equations with classical RK4.

    Constant coupling ``phi`` over unit time. The basis is extended by
    ``|g, N+1>`` so ``|e, N>`` evolves exactly as in the closed form; the
    population reaching the extra level goes to ``tail_mass``. Test oracle
    only: this is orders of magnitude slower than :func:`evolve_general`.
    """
    phi = check_phi(phi)
    if steps < 100:
        raise DomainError("the RK4 oracle needs at least 100 steps")
    dim = joint.truncation_dim
    g = np.concatenate([joint.g_branch, [0.0]]).astype(complex)
    e = joint.e_branch.astype(complex)
    # coupling of g[n] <-> e[n-1] for n = 1..N+1
    w = phi * np.sqrt(np.arange(1, dim + 1))

    def rhs(g, e):
        dg = np.zeros_like(g)
        dg[1:] = -1j * w * e
        de = -1j * w * g[1:]
        return dg, de

    h = 1.0 / steps
    for _ in range(steps):
        k1g, k1e = rhs(g, e)
        k2g, k2e = rhs(g + 0.5 * h * k1g, e + 0.5 * h * k1e)
        k3g, k3e = rhs(g + 0.5 * h * k2g, e + 0.5 * h * k2e)
        k4g, k4e = rhs(g + h * k3g, e + h * k3e)
        g = g + (h / 6.0) * (k1g + 2 * k2g + 2 * k3g + k4g)
        e = e + (h / 6.0) * (k1e + 2 * k2e + 2 * k3e + k4e)
    lost = float(abs(g[-1]) ** 2)
    return JointState(g[:-1], e, joint.tail_mass + lost)
