"""Character tables, unitary irreps and fusion amplitudes."""

from .characters import (CharacterTable, OneDimRep, RepError, character_table, find_one_dim,
                         one_dim_reps)
from .irreps import Irrep, diagonalize_on_H, find_irrep, irreps, semidirect_irrep
from .fusion import (PHASE_CONVENTION, ChargePair, F_squared_formula, Fallback, FusionAmplitudeTable,
                     diagonal_irreps, fusion_F_general, fusion_F_semidirect, fusion_table_general,
                     gamma_multiplicity, invariant_vector, select_charge_pair, vacuum_amplitude)
