"""Near-optimal discrimination of binary coherent signals through an ancilla atom.

The field ``|alpha>`` or ``|-alpha>`` interacts with a two-level atom by the
resonant Jaynes-Cummings coupling; only the atom is measured, so the field
survives for further rounds.
"""

from .errors import DomainError, EvaluationError, ImpossibleOutcomeError, UnsupportedConfigurationError
from .fock import (CoherentLabel, FieldState, coherent_amplitudes, displace_coherent, fock_state,
                   inner_product, overlap_coherent, vacuum)
from .jc import (AtomState, JointState, atom_state_from_ground, evolve_from_ground, evolve_general,
                 ode_oracle_evolve, project_field, reduce_atom)
from .kennedy import (KennedyProblem, RoundOutcome, excitation_probability, idp_limit, kennedy_error,
                      kennedy_limit, max_excitation, pnrd_error, pnrd_failure, run_unambiguous_chain,
                      surviving_field)
from .measurement import (PI_MINUS, PI_PLUS, AtomProjector, PriorPair, WeightedPair, closed_form_Dtr,
                          helstrom_bound, helstrom_projector, knowledge, optimal_gamma, optimal_projector,
                          outcome_probability, sql_homodyne, trace_distance)
from .minerr import (DiscriminationProblem, DiscriminationResult, SequenceBranch, branch_after_measurement,
                     displaced_single_round, run_sequence, solve)
from .optimize import OptimumReport, SearchWindow, maximize_scalar, scan

__version__ = "0.1.0"
