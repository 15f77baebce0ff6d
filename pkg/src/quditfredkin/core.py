"""Mixed-radix state vectors, embedded gate application and subspace projection.

Basis ordering: wire 0 is the most significant digit, so ``|c, t1, t2>`` with
dims ``(3, 2, 2)`` has index ``c * 4 + t1 * 2 + t2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Sequence

import numpy as np

TOL = 1e-10

SINGLE_QUDIT = "single-qudit"
TWO_QUBIT = "two-qubit"
OTHER = "other"
GATE_TAGS = (SINGLE_QUDIT, TWO_QUBIT, OTHER)


class DimensionError(ValueError):
    """Raised when a gate, state or level set does not fit the wire system."""


@dataclass(frozen=True)
class WireSystem:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise DimensionError("a wire system needs at least one wire")
        if any(d < 2 for d in dims):
            raise DimensionError(f"every wire dimension must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total_dim(self) -> int:
        return prod(self.dims)

    @property
    def n_wires(self) -> int:
        return len(self.dims)


def index_to_digits(index: int, system: WireSystem) -> tuple[int, ...]:
    if not 0 <= index < system.total_dim:
        raise IndexError(f"basis index {index} out of range for dims {system.dims}")
    digits = []
    for d in reversed(system.dims):
        index, r = divmod(index, d)
        digits.append(r)
    return tuple(reversed(digits))


def digits_to_index(digits: Sequence[int], system: WireSystem) -> int:
    if len(digits) != system.n_wires:
        raise DimensionError(f"expected {system.n_wires} digits, got {len(digits)}")
    index = 0
    for digit, d in zip(digits, system.dims):
        if not 0 <= digit < d:
            raise IndexError(f"digit {digit} out of range for wire dimension {d}")
        index = index * d + digit
    return index


def is_unitary(matrix: np.ndarray, tol: float = TOL) -> bool:
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)


def matrices_equal(a, b, tol: float = TOL) -> tuple[bool, float]:
    """Entrywise comparison; no global phase is factored out."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        return True, 0.0
    dev = float(np.max(np.abs(a - b)))
    return dev <= tol, dev


@dataclass(frozen=True)
class GateOp:
    wires: tuple[int, ...]
    local_dims: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)
    tag: str = OTHER
    name: str = ""

    def __post_init__(self):
        wires = tuple(int(w) for w in self.wires)
        local_dims = tuple(int(d) for d in self.local_dims)
        if len(wires) != len(local_dims):
            raise DimensionError("wires and local_dims must have equal length")
        if len(set(wires)) != len(wires):
            raise DimensionError(f"gate wires must be distinct, got {wires}")
        if self.tag not in GATE_TAGS:
            raise ValueError(f"unknown gate tag {self.tag!r}")
        m = np.array(self.matrix, dtype=complex)
        size = prod(local_dims)
        if m.shape != (size, size):
            raise DimensionError(f"matrix shape {m.shape} does not match local dims {local_dims}")
        m.setflags(write=False)
        object.__setattr__(self, "wires", wires)
        object.__setattr__(self, "local_dims", local_dims)
        object.__setattr__(self, "matrix", m)

    def check_fits(self, system: WireSystem) -> None:
        for w, d in zip(self.wires, self.local_dims):
            if not 0 <= w < system.n_wires:
                raise DimensionError(f"wire {w} out of range for {system.n_wires} wires")
            if system.dims[w] != d:
                raise DimensionError(
                    f"gate {self.name or '?'} expects dim {d} on wire {w}, system has {system.dims[w]}"
                )


@dataclass(frozen=True)
class Circuit:
    system: WireSystem
    gates: tuple[GateOp, ...] = ()

    def __post_init__(self):
        gates = tuple(self.gates)
        for g in gates:
            g.check_fits(self.system)
        object.__setattr__(self, "gates", gates)

    def count(self, tag: str) -> int:
        return sum(1 for g in self.gates if g.tag == tag)


@dataclass(frozen=True)
class MixedRadixState:
    system: WireSystem
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != self.system.total_dim:
            raise DimensionError(
                f"expected {self.system.total_dim} amplitudes, got {amps.shape[0]}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, digits: Sequence[int], system: WireSystem) -> "MixedRadixState":
        amps = np.zeros(system.total_dim, dtype=complex)
        amps[digits_to_index(digits, system)] = 1.0
        return cls(system, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def amplitude(self, digits: Sequence[int]) -> complex:
        return complex(self.amplitudes[digits_to_index(digits, self.system)])


def _apply_to_tensor(psi: np.ndarray, gate: GateOp, n_wires: int) -> np.ndarray:
    """Apply ``gate`` to a tensor of shape ``dims + batch``; wire axes come first."""
    k = len(gate.wires)
    m = gate.matrix.reshape(gate.local_dims + gate.local_dims)
    out = np.tensordot(m, psi, axes=(list(range(k, 2 * k)), list(gate.wires)))
    # tensordot puts the gate's output axes first; move them back into place
    return np.moveaxis(out, list(range(k)), list(gate.wires))


def apply_gate(state: MixedRadixState, gate: GateOp) -> MixedRadixState:
    gate.check_fits(state.system)
    psi = state.amplitudes.reshape(state.system.dims)
    out = _apply_to_tensor(psi, gate, state.system.n_wires)
    return MixedRadixState(state.system, out.reshape(-1))


def apply_circuit(circuit: Circuit, vectors: np.ndarray) -> np.ndarray:
    """Run the circuit on each column of ``vectors`` (shape ``(total_dim, batch)``)."""
    system = circuit.system
    vectors = np.asarray(vectors, dtype=complex)
    squeeze = vectors.ndim == 1
    if squeeze:
        vectors = vectors[:, None]
    if vectors.shape[0] != system.total_dim:
        raise DimensionError(f"vectors need {system.total_dim} rows, got {vectors.shape[0]}")
    psi = vectors.reshape(system.dims + (vectors.shape[1],))
    for gate in circuit.gates:
        psi = _apply_to_tensor(psi, gate, system.n_wires)
    out = psi.reshape(system.total_dim, -1)
    return out[:, 0] if squeeze else out


def circuit_action(circuit: Circuit, columns: Sequence[int]) -> np.ndarray:
    """Columns ``columns`` of the circuit unitary, without forming the full matrix."""
    cols = np.asarray(columns, dtype=int)
    basis = np.zeros((circuit.system.total_dim, cols.size), dtype=complex)
    basis[cols, np.arange(cols.size)] = 1.0
    return apply_circuit(circuit, basis)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    return apply_circuit(circuit, np.eye(circuit.system.total_dim, dtype=complex))


def embed_gate(gate: GateOp, system: WireSystem) -> np.ndarray:
    gate.check_fits(system)
    return circuit_unitary(Circuit(system, (gate,)))


def subspace_indices(system: WireSystem, kept_levels: Sequence[Sequence[int]] | dict) -> np.ndarray:
    """Basis indices whose every digit lies in the kept level set of its wire.

    ``kept_levels`` is either one level list per wire, or a mapping
    ``wire -> levels`` where unmentioned wires keep every level.
    """
    if isinstance(kept_levels, dict):
        levels = [list(range(d)) for d in system.dims]
        for w, lv in kept_levels.items():
            levels[w] = list(lv)
    else:
        levels = [list(lv) for lv in kept_levels]
    if len(levels) != system.n_wires:
        raise DimensionError(f"need a level set for each of {system.n_wires} wires")
    for lv, d in zip(levels, system.dims):
        if not lv:
            raise DimensionError("kept level set is empty")
        if any(not 0 <= x < d for x in lv) or len(set(lv)) != len(lv):
            raise DimensionError(f"invalid kept levels {lv} for wire dimension {d}")
    grids = np.meshgrid(*[np.array(sorted(lv)) for lv in levels], indexing="ij")
    idx = np.zeros(grids[0].shape, dtype=int)
    for g, d in zip(grids, system.dims):
        idx = idx * d + g
    return idx.reshape(-1)


def block_and_leakage(columns: np.ndarray, kept: np.ndarray) -> tuple[np.ndarray, float]:
    block = columns[kept, :]
    mask = np.ones(columns.shape[0], dtype=bool)
    mask[kept] = False
    discarded = columns[mask, :]
    leakage = float(np.max(np.linalg.norm(discarded, axis=0))) if discarded.size else 0.0
    return block, leakage


def project_to_subspace(u: np.ndarray, system: WireSystem, kept_levels) -> tuple[np.ndarray, float]:
    """Block of ``u`` on the kept basis states, plus the worst column leakage.

    Leakage is the largest norm, over kept input columns, of the amplitude
    that lands outside the kept subspace.
    """
    u = np.asarray(u)
    if u.shape != (system.total_dim, system.total_dim):
        raise DimensionError(f"unitary shape {u.shape} does not match total dim {system.total_dim}")
    kept = subspace_indices(system, kept_levels)
    return block_and_leakage(u[:, kept], kept)


def project_circuit(circuit: Circuit, kept_levels) -> tuple[np.ndarray, float]:
    """Same result as ``project_to_subspace(circuit_unitary(c), ...)`` at lower cost."""
    kept = subspace_indices(circuit.system, kept_levels)
    return block_and_leakage(circuit_action(circuit, kept), kept)
