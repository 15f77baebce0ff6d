"""Three-photon Fredkin gate as a cascade of post-selected partial swaps.

The control photon is split by polarization into a parked line ``u`` (logical
0, H) and an active line ``d`` (logical 1, V). Each stage sends the control
line and one target through the partial-swap interferometer; an accepted
detection arm on the control side (9'/9 or 10'/10) becomes the next stage's
``u``/``d`` pair, and the target's arm (11 or 12) becomes its new line.
Branches are tracked separately and carry their stage history, so the same
compiled stage unitary is reused for every branch. A final cube merges each
control arm into one output mode (9'/9 -> 11, 10'/10 -> 12).

Stages 1 and 2 keep only the sign-free patterns; stage 3 keeps all four and
fixes the sign of the crossed patterns with a 0-degree HWP on the control.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..synthesis import reference_fredkin
from .elements import HWP, PBS, Channel, ChannelBasis
from .network import InterferometerSpec, NETLIST_SCHEMA_VERSION, apply_channel_unitary
from .postselect import DetectionArm, PostSelectionOutcome
from .pswap import build_pswap_interferometer

PHOTONS = ("c", "t1", "t2")
# control line channels between stages
CONTROL_LINE = (Channel("u", "H"), Channel("u", "V"), Channel("d", "H"), Channel("d", "V"))
TARGET_LINE = (Channel("t", "H"), Channel("t", "V"))
SIGN_FREE = (("9", "11"), ("10", "12"))
ALL_PATTERNS = (("9", "11"), ("10", "12"), ("9", "12"), ("10", "11"))
MERGED_MODE = {"9": "11", "10": "12"}


def _control_arm_channels(group: str) -> tuple[Channel, ...]:
    primed = group + "'"
    return (Channel(primed, "H"), Channel(primed, "V"), Channel(group, "H"), Channel(group, "V"))


@dataclass(frozen=True)
class CascadeStage:
    spec: InterferometerSpec
    target: str
    accept: tuple[tuple[str, str], ...]

    def to_dict(self) -> dict:
        return {
            "photons": ["c", self.target],
            "accept": [list(p) for p in self.accept],
            "netlist": self.spec.to_dict(),
        }


@dataclass(frozen=True)
class Branch:
    """Unnormalized role amplitudes ``[control line, t1, t2]`` after some stages."""

    history: tuple[tuple[str, str], ...]
    amplitudes: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class FredkinCascade:
    input_spec: InterferometerSpec
    stages: tuple[CascadeStage, ...]
    combiner: InterferometerSpec
    name: str = "fredkin3"
    photon_labels: tuple[str, ...] = PHOTONS

    @property
    def logical_dims(self) -> tuple[int, ...]:
        return (2, 2, 2)

    @property
    def n_photons(self) -> int:
        return 3

    @property
    def ideal(self) -> np.ndarray:
        return reference_fredkin()

    def count(self, kind: str) -> int:
        specs = [self.input_spec, self.combiner] + [s.spec for s in self.stages]
        return sum(s.count(kind) for s in specs)

    def _initial_branch(self, logical: np.ndarray) -> Branch:
        logical = np.asarray(logical, dtype=complex).reshape(self.logical_dims)
        u = self.input_spec.compiled
        basis = self.input_spec.basis
        c_in = [basis.index(("c", pol)) for pol in ("H", "V")]
        line = [basis.index(ch) for ch in CONTROL_LINE]
        # control photon: polarization on port c -> control line
        routed = u[np.ix_(line, c_in)]
        return Branch((), np.einsum("kc,cij->kij", routed, logical))

    def stage_input(self, stage: CascadeStage, branch: Branch) -> np.ndarray:
        """Distinguishable amplitudes ``[control, target, spectator pol]`` on the stage basis."""
        basis = stage.spec.basis
        roles = branch.amplitudes if stage.target == "t1" else np.swapaxes(branch.amplitudes, 1, 2)
        amps = np.zeros((len(basis), len(basis), 2), dtype=complex)
        c_idx = [basis.index(ch) for ch in CONTROL_LINE]
        t_idx = [basis.index(ch) for ch in TARGET_LINE]
        amps[np.ix_(c_idx, t_idx, [0, 1])] = roles
        return amps

    def run_stage(self, stage: CascadeStage, branch: Branch) -> list[Branch]:
        basis = stage.spec.basis
        out = apply_channel_unitary(self.stage_input(stage, branch), stage.spec.compiled, axes=[0, 1])
        # either photon may fire either detector
        coinc = out + np.swapaxes(out, 0, 1)
        children = []
        for c_group, t_port in stage.accept:
            c_idx = [basis.index(ch) for ch in _control_arm_channels(c_group)]
            t_idx = [basis.index((t_port, pol)) for pol in ("H", "V")]
            block = coinc[np.ix_(c_idx, t_idx, [0, 1])]
            if stage.target == "t2":
                block = np.swapaxes(block, 1, 2)
            children.append(Branch(branch.history + ((c_group, t_port),), block))
        return children

    def branches(self, logical: np.ndarray) -> list[list[Branch]]:
        """Branch list after the input cube and after each stage."""
        layers = [[self._initial_branch(logical)]]
        for stage in self.stages:
            layers.append([child for b in layers[-1] for child in self.run_stage(stage, b)])
        return layers

    def _merge(self, branch: Branch) -> tuple[str, np.ndarray]:
        c_group = branch.history[-1][0]
        mode = MERGED_MODE[c_group]
        basis = self.combiner.basis
        c_idx = [basis.index(ch) for ch in _control_arm_channels(c_group)]
        out_idx = [basis.index((mode, pol)) for pol in ("H", "V")]
        merged = self.combiner.compiled[np.ix_(out_idx, c_idx)]
        return mode, np.einsum("kc,cij->kij", merged, branch.amplitudes)

    def outcomes(self, logical: np.ndarray) -> list[PostSelectionOutcome]:
        outcomes = []
        for branch in self.branches(logical)[-1]:
            c_mode, block = self._merge(branch)
            t1_mode = branch.history[1][1]
            t2_mode = branch.history[2][1]
            arms = tuple(
                DetectionArm(m, (m,), (Channel(m, "H"), Channel(m, "V")))
                for m in (c_mode, t1_mode, t2_mode)
            )
            crossed = branch.history[2] not in SIGN_FREE
            block = np.array(block)
            block.setflags(write=False)
            outcomes.append(
                PostSelectionOutcome(
                    pattern=tuple(zip(self.photon_labels, (c_mode, t1_mode, t2_mode))),
                    arms=arms,
                    amplitude_block=block,
                    probability=float(np.sum(np.abs(block) ** 2)),
                    correction=((0, HWP((c_mode,), 0.0)),) if crossed else (),
                    needs_feedforward=crossed,
                    history=branch.history,
                )
            )
        return outcomes

    def to_dict(self) -> dict:
        return {
            "schema_version": NETLIST_SCHEMA_VERSION,
            "name": self.name,
            "kind": "cascade",
            "photons": list(self.photon_labels),
            "input": self.input_spec.to_dict(),
            "stages": [s.to_dict() for s in self.stages],
            "combiner": self.combiner.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FredkinCascade":
        if d.get("schema_version") != NETLIST_SCHEMA_VERSION:
            raise ValueError(f"unsupported netlist schema_version {d.get('schema_version')!r}")
        stages = tuple(
            CascadeStage(
                InterferometerSpec.from_dict(s["netlist"]),
                s["photons"][1],
                tuple(tuple(p) for p in s["accept"]),
            )
            for s in d["stages"]
        )
        return cls(
            InterferometerSpec.from_dict(d["input"]),
            stages,
            InterferometerSpec.from_dict(d["combiner"]),
            name=d["name"],
            photon_labels=tuple(d["photons"]),
        )


def build_fredkin_interferometer() -> FredkinCascade:
    input_spec = InterferometerSpec(
        name="control-split",
        basis=ChannelBasis.from_ports(("c", "u", "d")),
        elements=(PBS.cube("c", None, "u", "d"),),
        input_ports=("c",),
        output_ports=("u", "d"),
    )
    stage = build_pswap_interferometer()
    stages = (
        CascadeStage(stage, "t2", SIGN_FREE),
        CascadeStage(stage, "t1", SIGN_FREE),
        CascadeStage(stage, "t2", ALL_PATTERNS),
    )
    combiner = InterferometerSpec(
        name="control-merge",
        basis=ChannelBasis.from_ports(("9'", "9", "10'", "10", "11", "12", "x11", "x12")),
        elements=(PBS.cube("9'", "9", "11", "x11"), PBS.cube("10'", "10", "12", "x12")),
        input_ports=("9'", "9", "10'", "10"),
        output_ports=("11", "12", "x11", "x12"),
    )
    return FredkinCascade(input_spec, stages, combiner)


def load_gate_netlist(path) -> InterferometerSpec | FredkinCascade:
    """Load either a single interferometer or a cascade netlist."""
    d = json.loads(Path(path).read_text())
    if d.get("kind") == "cascade":
        return FredkinCascade.from_dict(d)
    return InterferometerSpec.from_dict(d)
