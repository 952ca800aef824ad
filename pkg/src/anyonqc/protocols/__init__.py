"""Compiled gates, probabilistic projections, measurements, magic states and Toffoli."""

from .context import (AnyonComputer, ControllerConfig, GatePlan, ProtocolError, ProtocolOutcome,
                      compile_controlled_x, compile_times_t_gate, extended_controlled_x, staged)
from .projections import (amplify_lambda, distill_tilde0, pp_computational_subspace, pp_lambda, pp_tilde0,
                          pp_zero, pp_zero_perp, pp_zero_perp_in_lambda, residual_mass, zero_perp_bound)
from .measure import bootstrap_one_ancillas, leakage_correct, measure_basis
from .magic import (apply_toffoli, delta_gadget, erase, m1_state, m2_from_m1, m2_state, magic_p2,
                    make_magic, phase_walk, phi_prime, plus01, prepare_m1, prepare_m2, project_out_zero,
                    psi_prime, remove_component)
