"""cvdv: simulator and compiler toolkit for hybrid oscillator-qubit processors."""

from . import errors
from .fock import (
    ModeConfig,
    OperatorMatrix,
    QuantumState,
    Register,
    StateKind,
    Units,
    coherent_state,
    cutoff_bound,
    embed,
    evolve,
    fidelity,
    fock_state,
    ladder_ops,
    trace_fidelity,
    vacuum,
)
from .gates import GateSpec, build, generalized_cd, swap_gate
from .circuits import Circuit, ClassicalBranch, Measure, Reset, Simulator

__all__ = [
    "errors",
    "ModeConfig", "OperatorMatrix", "QuantumState", "Register", "StateKind",
    "Units", "coherent_state", "cutoff_bound", "embed", "evolve", "fidelity",
    "fock_state", "ladder_ops", "trace_fidelity", "vacuum",
    "GateSpec", "build", "generalized_cd", "swap_gate",
    "Circuit", "ClassicalBranch", "Measure", "Reset", "Simulator",
]

__version__ = "0.1.0"
