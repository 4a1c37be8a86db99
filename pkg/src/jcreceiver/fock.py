"""Pure single-mode field states on a truncated Fock basis.

Coherent states are the only states built from a label; every other
:class:`FieldState` is produced by conditioning a joint atom-field state on
an atomic measurement outcome (see :mod:`jcreceiver.jc`).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.special import pdtrc

from .errors import DomainError

#: Smallest Fock cutoff ever used; the basis always holds ``|0>..|20>``.
MIN_CUTOFF = 20
#: Default bound on the Poisson mass discarded by truncation.
DEFAULT_EPS_TRUNC = 1e-12
#: Largest coherent amplitude accepted (mean photon number 100).
MAX_ALPHA = 10.0


@dataclass(frozen=True)
class CoherentLabel:
    """Complex amplitude ``alpha`` labelling the coherent state ``|alpha>``."""

    alpha: complex

    def __post_init__(self):
        a = complex(self.alpha)
        if not (math.isfinite(a.real) and math.isfinite(a.imag)):
            raise DomainError(f"coherent amplitude must be finite, got {self.alpha!r}")
        if abs(a) > MAX_ALPHA:
            raise DomainError(f"|alpha| = {abs(a):g} exceeds the supported maximum {MAX_ALPHA:g}")
        object.__setattr__(self, "alpha", a)

    @property
    def mean_photon_number(self) -> float:
        return abs(self.alpha) ** 2

    def __complex__(self):
        return self.alpha


LabelLike = Union[CoherentLabel, complex, float, int]


def as_label(label: LabelLike) -> CoherentLabel:
    if isinstance(label, CoherentLabel):
        return label
    return CoherentLabel(label)


@dataclass(frozen=True, eq=False)
class FieldState:
    """Pure field state ``sum_n f_n |n>`` truncated at ``n = N``.

    Attributes
    ----------
    amplitudes : ndarray of complex, shape (N + 1,)
        Fock amplitudes ``f_0 .. f_N``. Zero-padded to at least
        ``MIN_CUTOFF + 1`` entries.
    tail_mass : float
        Probability discarded by the truncation (and carried forward by
        operations derived from this state).
    """

    amplitudes: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        if amps.size < MIN_CUTOFF + 1:
            amps = np.concatenate([amps, np.zeros(MIN_CUTOFF + 1 - amps.size, dtype=complex)])
        else:
            amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        tail = float(self.tail_mass)
        if not 0.0 <= tail <= 1.0:
            raise DomainError(f"tail_mass must lie in [0, 1], got {tail!r}")
        object.__setattr__(self, "tail_mass", tail)

    @property
    def truncation_dim(self) -> int:
        return self.amplitudes.size

    @property
    def cutoff(self) -> int:
        """Highest Fock index ``N`` held by the state."""
        return self.amplitudes.size - 1

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm_sq(self) -> float:
        return float(np.sum(self.populations))

    def normalized(self) -> "FieldState":
        return FieldState(self.amplitudes / math.sqrt(self.norm_sq()), self.tail_mass)

    def padded(self, dim: int) -> "FieldState":
        if dim <= self.truncation_dim:
            return self
        extra = np.zeros(dim - self.truncation_dim, dtype=complex)
        return FieldState(np.concatenate([self.amplitudes, extra]), self.tail_mass)

    def is_real(self, atol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.amplitudes.imag) <= atol))

    def __repr__(self):
        return f"FieldState(dim={self.truncation_dim}, norm_sq={self.norm_sq():.15g}, tail_mass={self.tail_mass:.3g})"


def fock_state(n: int, dim: int = MIN_CUTOFF + 1) -> FieldState:
    """Photon-number state ``|n>`` in a basis of at least ``dim`` levels."""
    if n < 0:
        raise DomainError("photon number must be non-negative")
    amps = np.zeros(max(dim, n + 1), dtype=complex)
    amps[n] = 1.0
    return FieldState(amps)


def vacuum(dim: int = MIN_CUTOFF + 1) -> FieldState:
    return fock_state(0, dim)


def truncation_cutoff(mean_photon_number: float, eps_trunc: float = DEFAULT_EPS_TRUNC) -> int:
    """Smallest cutoff ``N >= 20`` whose Poisson tail ``P(n > N)`` is below ``eps_trunc``."""
    lam = float(mean_photon_number)
    if lam == 0.0:
        return MIN_CUTOFF
    n = MIN_CUTOFF
    while pdtrc(n, lam) >= eps_trunc:
        n += 1
    return n


def coherent_amplitudes(label: LabelLike, eps_trunc: float = DEFAULT_EPS_TRUNC) -> FieldState:
    """Truncated Fock expansion of the coherent state ``|alpha>``.

    ``f_n = exp(-|alpha|^2 / 2) alpha^n / sqrt(n!)`` for ``n <= N``, built by
    the recurrence ``f_{n+1} = f_n alpha / sqrt(n + 1)``. The cutoff is the
    smallest ``N >= 20`` leaving less than ``eps_trunc`` of Poisson mass
    beyond it; that mass is recorded as ``tail_mass``.

    Parameters
    ----------
    label : CoherentLabel or complex
        Coherent amplitude, ``|alpha| <= 10``.
    eps_trunc : float, optional
        Truncation tolerance in ``(0, 1e-6]``.
    """
    if not 0.0 < eps_trunc <= 1e-6:
        raise DomainError(f"eps_trunc must lie in (0, 1e-6], got {eps_trunc!r}")
    alpha = as_label(label).alpha
    lam = abs(alpha) ** 2
    cutoff = truncation_cutoff(lam, eps_trunc)
    steps = np.empty(cutoff + 1, dtype=complex)
    steps[0] = math.exp(-lam / 2.0)
    steps[1:] = alpha / np.sqrt(np.arange(1, cutoff + 1))
    amps = np.cumprod(steps)
    tail = float(pdtrc(cutoff, lam)) if lam > 0 else 0.0
    return FieldState(amps, tail)


def displace_coherent(label: LabelLike, shift: complex) -> CoherentLabel:
    """Coherent label after the displacement ``D(shift)``: ``alpha + shift``."""
    return CoherentLabel(as_label(label).alpha + complex(shift))


def overlap_coherent(a: LabelLike, b: LabelLike) -> float:
    """``|<a|b>| = exp(-|a - b|^2 / 2)``."""
    d = as_label(a).alpha - as_label(b).alpha
    return math.exp(-(abs(d) ** 2) / 2.0)


def inner_product(u: FieldState, v: FieldState) -> complex:
    """``<u|v>`` over the common truncated basis (shorter state zero-padded)."""
    dim = max(u.truncation_dim, v.truncation_dim)
    return complex(np.vdot(u.padded(dim).amplitudes, v.padded(dim).amplitudes))


def wrap_phase(theta: float) -> float:
    """Map an angle onto ``(-pi, pi]``."""
    w = cmath.phase(cmath.exp(1j * theta))
    return math.pi if w == -math.pi else w
