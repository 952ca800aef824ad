"""Flux-pair and charge-pair register simulator."""

from .register import (NORM_TOL, AnyonRegister, Branch, BudgetExceeded, FusionOutcome, ReplayChooser,
                       SampleChooser, SimError, Slot, TerminalResult, choose_branch, enumerate_branches)

__all__ = ["NORM_TOL", "AnyonRegister", "Branch", "BudgetExceeded", "FusionOutcome", "ReplayChooser",
           "SampleChooser", "SimError", "Slot", "TerminalResult", "choose_branch", "enumerate_branches"]
