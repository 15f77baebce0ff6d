"""Auxiliary-level Fredkin synthesis on qudits and its post-selected linear-optical realization."""
from .core import (
    TOL,
    Circuit,
    DimensionError,
    GateOp,
    MixedRadixState,
    WireSystem,
    apply_gate,
    circuit_unitary,
    digits_to_index,
    index_to_digits,
    is_unitary,
    matrices_equal,
    project_to_subspace,
)
from .synthesis import (
    SynthesisReport,
    build_fredkin3,
    build_n_controlled_fredkin,
    make_level_exchange,
    make_partial_swap,
    make_qubit_level_cnot,
    reference_fredkin,
    reference_n_controlled_fredkin,
    verify_synthesis,
)

__version__ = "0.1.0"
