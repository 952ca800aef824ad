"""Dense reference simulator for qudit registers (d prime)."""

from .oracle import (QuditState, Gate, OracleError, basis_state, oracle_apply, oracle_compare,
                     oracle_measure, tilde_state, CompareReport)
