"""Fredkin gates built from partial-swap gates and parked auxiliary levels.

A qudit carrier holds the first control. Levels ``{0, 1}`` are the active
(computational) pair; any level >= 2 parks the carrier so that partial-swap
gates leave the targets alone.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .core import (
    SINGLE_QUDIT,
    TOL,
    TWO_QUBIT,
    Circuit,
    GateOp,
    WireSystem,
    circuit_action,
    block_and_leakage,
    matrices_equal,
    subspace_indices,
)


def _permutation_matrix(images: list[int]) -> np.ndarray:
    """Column ``i`` is the basis vector ``images[i]``."""
    n = len(images)
    if sorted(images) != list(range(n)):
        raise ValueError("images must form a permutation")
    m = np.zeros((n, n), dtype=complex)
    m[images, np.arange(n)] = 1.0
    return m


def make_partial_swap(carrier_dim: int, wires: tuple[int, int] = (0, 1)) -> GateOp:
    """SWAP on ``{0,1} x {0,1}``; identity whenever the carrier sits at level >= 2."""
    if carrier_dim < 3:
        raise ValueError(f"partial swap needs a carrier with an auxiliary level, got dim {carrier_dim}")
    images = []
    for c in range(carrier_dim):
        for t in range(2):
            if c < 2:
                images.append(t * 2 + c)
            else:
                images.append(c * 2 + t)
    return GateOp(wires, (carrier_dim, 2), _permutation_matrix(images), TWO_QUBIT, "p-swap")


def make_level_exchange(carrier_dim: int, a: int, b: int, wire: int = 0) -> GateOp:
    if a == b or not (0 <= a < carrier_dim and 0 <= b < carrier_dim):
        raise ValueError(f"invalid levels ({a}, {b}) for dimension {carrier_dim}")
    images = list(range(carrier_dim))
    images[a], images[b] = b, a
    return GateOp((wire,), (carrier_dim,), _permutation_matrix(images), SINGLE_QUDIT, f"X[{a}<->{b}]")


def make_qubit_level_cnot(
    target_dim: int,
    target_levels: tuple[int, int] = (0, 1),
    wires: tuple[int, int] = (0, 1),
    control_wire_dim: int = 2,
) -> GateOp:
    """Exchange target levels ``a <-> b`` when the qubit control reads ``|1>``."""
    if control_wire_dim != 2:
        raise ValueError("the control of a qubit-level CNOT must be a qubit")
    a, b = target_levels
    if a == b or not (0 <= a < target_dim and 0 <= b < target_dim):
        raise ValueError(f"invalid target levels {target_levels} for dimension {target_dim}")
    images = []
    for c in range(2):
        for t in range(target_dim):
            t_out = t
            if c == 1 and t in (a, b):
                t_out = b if t == a else a
            images.append(c * target_dim + t_out)
    return GateOp(wires, (2, target_dim), _permutation_matrix(images), TWO_QUBIT, "CNOT")


def build_fredkin3() -> Circuit:
    """Control qutrit ``c`` plus targets ``t1``, ``t2`` on dims ``(3, 2, 2)``."""
    x_a = make_level_exchange(3, 0, 2, wire=0)
    gates = (
        x_a,
        make_partial_swap(3, (0, 2)),
        make_partial_swap(3, (0, 1)),
        make_partial_swap(3, (0, 2)),
        x_a,
    )
    return Circuit(WireSystem((3, 2, 2)), gates)


def parking_pairs(n: int) -> list[tuple[int, int]]:
    """Level exchanges used by the control ladder, in application order.

    The first one parks ``|0>`` in ``|2>``; afterwards each extra control flips
    the active level and the level it leaves behind is parked in the next
    auxiliary level, alternating ``1, 0, 1, ...``.
    """
    pairs = [(0, 2)]
    for k in range(2, n + 1):
        pairs.append((1 if k % 2 == 0 else 0, k + 1))
    return pairs


def build_n_controlled_fredkin(n: int) -> Circuit:
    """Wires: carrier (dim n+2), controls c2..cn, then t1, t2."""
    if n < 1:
        raise ValueError(f"need at least one control, got n={n}")
    if n == 1:
        return build_fredkin3()
    d = n + 2
    dims = (d,) + (2,) * (n - 1) + (2, 2)
    t1, t2 = n, n + 1
    pairs = parking_pairs(n)

    ladder = [make_level_exchange(d, *pairs[0], wire=0)]
    for k in range(2, n + 1):
        ladder.append(make_qubit_level_cnot(d, (0, 1), wires=(k - 1, 0)))
        ladder.append(make_level_exchange(d, *pairs[k - 1], wire=0))
    swaps = [
        make_partial_swap(d, (0, t2)),
        make_partial_swap(d, (0, t1)),
        make_partial_swap(d, (0, t2)),
    ]
    return Circuit(WireSystem(dims), tuple(ladder + swaps + ladder[::-1]))


def reference_n_controlled_fredkin(n: int) -> np.ndarray:
    """Truth-table Fredkin on ``n`` controls and two targets (all qubits)."""
    if n < 1:
        raise ValueError(f"need at least one control, got n={n}")
    size = 2 ** (n + 2)
    images = []
    for i in range(size):
        controls, t1, t2 = i >> 2, (i >> 1) & 1, i & 1
        if controls == 2**n - 1:
            t1, t2 = t2, t1
        images.append((controls << 2) | (t1 << 1) | t2)
    return _permutation_matrix(images)


def reference_fredkin() -> np.ndarray:
    return reference_n_controlled_fredkin(1)


@dataclass(frozen=True)
class SynthesisReport:
    n: int
    verified: bool
    max_deviation: float
    leakage: float
    two_qubit_count: int
    single_qudit_count: int
    carrier_dim: int
    controls_restored: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


def verify_synthesis(n: int, tol: float = TOL) -> SynthesisReport:
    circuit = build_n_controlled_fredkin(n)
    system = circuit.system
    idx = subspace_indices(system, {0: (0, 1)})
    cols = circuit_action(circuit, idx)
    block, leakage = block_and_leakage(cols, idx)
    _, deviation = matrices_equal(block, reference_n_controlled_fredkin(n), tol)

    # carrier digit of every computational input must come back unchanged
    stride = system.total_dim // system.dims[0]
    out_carrier = np.argmax(np.abs(cols), axis=0) // stride
    restored = bool(np.array_equal(out_carrier, idx // stride))

    two_q = circuit.count(TWO_QUBIT)
    single = circuit.count(SINGLE_QUDIT)
    verified = (
        deviation <= tol
        and leakage <= tol
        and restored
        and two_q == 2 * n + 1
        and single == 2 * n
        and system.dims[0] == n + 2
    )
    return SynthesisReport(n, verified, deviation, leakage, two_q, single, system.dims[0], restored)
