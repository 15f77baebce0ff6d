"""Post-selected partial-swap interferometer (two photons, six PBS, eight HWP).

Logical encoding. Control photon: level 0 = H in d, 1 = V in d, 2 = H in u.
Target photon: 0 = H in t, 1 = V in t. Detection arms for the control read
level 0/1 as H/V in 9 (or 10) and level 2 as H in 9' (or 10'); the target is
read as H/V in 11 (or 12).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import pi

import numpy as np

from ..synthesis import make_partial_swap
from .elements import HWP, PBS, Channel, ChannelBasis, Phase
from .network import InterferometerSpec, PhotonState, propagate
from .postselect import DetectionArm, PostSelectionOutcome, coincidence_tensor, enumerate_outcomes

PSWAP_PORTS = (
    "u", "d", "t",
    "1", "1'", "2", "3", "4",
    "5", "6", "7", "8", "8'",
    "9", "9'", "10", "10'", "11", "12",
)
CONTROL_INPUT = (Channel("d", "H"), Channel("d", "V"), Channel("u", "H"))
TARGET_INPUT = (Channel("t", "H"), Channel("t", "V"))


def build_pswap_interferometer() -> InterferometerSpec:
    elements = (
        PBS((("d", "1", "2"), ("u", "1'", None))),
        PBS.cube("t", None, "4", "3"),
        HWP(("1",), 45),
        HWP(("2",), 45),
        HWP(("3",), 67.5),
        HWP(("4",), 22.5),
        PBS.cube("3", "2", "5", "6"),
        PBS.cube("4", "1", "7", "8", extra=(("1'", "8'", None),)),
        HWP(("5", "6"), 67.5),
        HWP(("7", "8", "8'"), 22.5),
        PBS.cube("8", "5", "9", "10", extra=(("8'", "9'", "10'"),)),
        PBS.cube("7", "6", "11", "12"),
        HWP(("10", "10'"), 45),
        HWP(("12",), 45),
    )
    return InterferometerSpec(
        name="pswap",
        basis=ChannelBasis.from_ports(PSWAP_PORTS),
        elements=elements,
        input_ports=("u", "d", "t"),
        output_ports=("9", "9'", "10", "10'", "11", "12"),
    )


def control_arm(group: str) -> DetectionArm:
    """``group`` is "9" or "10"; its primed partner carries level 2."""
    primed = group + "'"
    return DetectionArm(
        group,
        (primed, group),
        (Channel(group, "H"), Channel(group, "V"), Channel(primed, "H")),
    )


def target_arm(port: str) -> DetectionArm:
    return DetectionArm(port, (port,), (Channel(port, "H"), Channel(port, "V")))


PSWAP_GROUPS = {
    "c": (control_arm("9"), control_arm("10")),
    "t": (target_arm("11"), target_arm("12")),
}
# control arm and target arm on opposite sides pick up a sign on the d inputs
PSWAP_FEEDFORWARD = {
    ("9", "12"): ((0, Phase(("9",), pi)),),
    ("10", "11"): ((0, Phase(("10",), pi)),),
}


@dataclass(frozen=True)
class PostSelectedGate:
    """A single interferometer plus encoding, detection arms and feedforward."""

    name: str
    spec: InterferometerSpec
    photon_labels: tuple[str, ...]
    encodings: tuple[tuple[Channel, ...], ...]
    groups: dict
    feedforward_table: dict
    ideal: np.ndarray

    @property
    def logical_dims(self) -> tuple[int, ...]:
        return tuple(len(e) for e in self.encodings)

    @property
    def n_photons(self) -> int:
        return len(self.photon_labels)

    def input_state(self, logical: np.ndarray) -> PhotonState:
        logical = np.asarray(logical, dtype=complex).reshape(self.logical_dims)
        basis = self.spec.basis
        amps = np.zeros((len(basis),) * self.n_photons, dtype=complex)
        idx = [[basis.index(ch) for ch in enc] for enc in self.encodings]
        amps[np.ix_(*idx)] = logical
        return PhotonState(self.photon_labels, basis, amps)

    def output_state(self, logical: np.ndarray) -> PhotonState:
        return propagate(self.input_state(logical), self.spec)

    def outcomes(self, logical: np.ndarray) -> list[PostSelectionOutcome]:
        return enumerate_outcomes(self.output_state(logical), self.groups, self.feedforward_table)


def pswap_gate() -> PostSelectedGate:
    return PostSelectedGate(
        name="pswap",
        spec=build_pswap_interferometer(),
        photon_labels=("c", "t"),
        encodings=(CONTROL_INPUT, TARGET_INPUT),
        groups=PSWAP_GROUPS,
        feedforward_table=PSWAP_FEEDFORWARD,
        ideal=make_partial_swap(3).matrix,
    )


# Row order of the coincidence table: (control level, target level) inputs.
TABLE1_ROWS = ((2, 0), (2, 1), (0, 0), (0, 1), (1, 0), (1, 1))
TABLE1_ROW_LABELS = ("H_u H", "H_u V", "H_d H", "H_d V", "V_d H", "V_d V")
# Column order: (control output level, target output level).
TABLE1_COLUMNS = ((2, 0), (2, 1), (0, 0), (1, 0), (0, 1), (1, 1))
TABLE1_FAMILIES = (("9", "11"), ("10", "12"), ("9", "12"), ("10", "11"))


@dataclass(frozen=True)
class Table1Cell:
    probability: float
    sign: int  # +1, -1, or 0 for an empty cell


def table1_column_label(family: tuple[str, str], column: tuple[int, int]) -> str:
    c_arm, t_arm = control_arm(family[0]), target_arm(family[1])
    c_ch = c_arm.levels[column[0]]
    t_ch = t_arm.levels[column[1]]
    return f"n_{c_ch.polarization}{c_ch.spatial} n_{t_ch.polarization}{t_ch.spatial}"


def table1(gate: PostSelectedGate | None = None, tol: float = 1e-12) -> list[list[list[Table1Cell]]]:
    """``cells[row][family][column]`` coincidence probabilities with amplitude signs."""
    gate = gate or pswap_gate()
    grid = []
    for c_in, t_in in TABLE1_ROWS:
        logical = np.zeros(gate.logical_dims, dtype=complex)
        logical[c_in, t_in] = 1.0
        out = gate.output_state(logical)
        coinc = coincidence_tensor(out.amplitudes)
        row = []
        for family in TABLE1_FAMILIES:
            cells = []
            for column in TABLE1_COLUMNS:
                c_ch = control_arm(family[0]).levels[column[0]]
                t_ch = target_arm(family[1]).levels[column[1]]
                amp = complex(coinc[out.basis.index(c_ch), out.basis.index(t_ch)])
                prob = abs(amp) ** 2
                sign = 0 if prob <= tol else (1 if amp.real > 0 else -1)
                cells.append(Table1Cell(prob, sign))
            row.append(cells)
        grid.append(row)
    return grid
