"""Coincidence post-selection, feedforward correction and logical read-out."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Mapping, Sequence

import numpy as np

from .elements import Channel, ChannelBasis
from .network import PhotonState, apply_channel_unitary


@dataclass(frozen=True)
class DetectionArm:
    """A detector group: the spatial ports it watches and its logical read-out.

    ``levels[k]`` is the channel that signals logical level ``k``.
    """

    name: str
    ports: tuple[str, ...]
    levels: tuple[Channel, ...]

    def __post_init__(self):
        object.__setattr__(self, "ports", tuple(self.ports))
        levels = tuple(ch if isinstance(ch, Channel) else Channel(*ch) for ch in self.levels)
        object.__setattr__(self, "levels", levels)
        stray = [ch for ch in levels if ch.spatial not in self.ports]
        if stray:
            raise ValueError(f"arm {self.name}: level channels {stray} outside its ports")

    @property
    def basis(self) -> ChannelBasis:
        return ChannelBasis.from_ports(self.ports)


@dataclass(frozen=True)
class PostSelectionOutcome:
    """One coincidence pattern with its (uncorrected) amplitude block.

    ``amplitude_block`` has one axis per detector slot over that slot's arm
    channels. ``history`` records earlier accepted patterns for cascades.
    """

    pattern: tuple[tuple[str, str], ...]
    arms: tuple[DetectionArm, ...]
    amplitude_block: np.ndarray = field(repr=False)
    probability: float
    correction: tuple = ()
    needs_feedforward: bool = False
    history: tuple = ()

    @property
    def pattern_dict(self) -> dict[str, str]:
        return dict(self.pattern)

    def label(self) -> str:
        return ",".join(arm for _, arm in self.pattern)


def _check_arms(groups: Mapping[str, Sequence[DetectionArm]]) -> None:
    for slot, arms in groups.items():
        seen: dict[str, str] = {}
        for arm in arms:
            for p in arm.ports:
                if p in seen:
                    raise ValueError(
                        f"slot {slot}: arms {seen[p]!r} and {arm.name!r} overlap on port {p!r}"
                    )
                seen[p] = arm.name


def coincidence_tensor(amplitudes: np.ndarray) -> np.ndarray:
    """Sum over every assignment of photons to detector slots.

    Detectors cannot tell which photon fired, so the amplitude for "slot r
    clicks in channel x_r" adds up all photon permutations.
    """
    amplitudes = np.asarray(amplitudes)
    out = np.zeros_like(amplitudes)
    for perm in permutations(range(amplitudes.ndim)):
        out = out + np.transpose(amplitudes, perm)
    return out


def enumerate_outcomes(
    state: PhotonState,
    groups: Mapping[str, Sequence[DetectionArm]],
    feedforward_table: Mapping[tuple[str, ...], tuple] | None = None,
) -> list[PostSelectionOutcome]:
    """One outcome per combination of arms, one arm per detector slot.

    ``groups`` maps slot name to its candidate arms, one slot per photon, in
    the order the logical read-out uses. ``feedforward_table`` maps an
    arm-name tuple to its correction, a tuple of ``(slot_index, element)``;
    listed patterns count as successes only when feedforward is enabled.
    """
    feedforward_table = feedforward_table or {}
    if len(groups) != len(state.photon_labels):
        raise ValueError(f"need one detector slot per photon, got {len(groups)} for {len(state.photon_labels)}")
    _check_arms(groups)
    slots = list(groups)
    coinc = coincidence_tensor(state.amplitudes)
    outcomes = []
    for arms in product(*(groups[s] for s in slots)):
        idx = [[state.basis.index(ch) for ch in arm.basis] for arm in arms]
        block = coinc[np.ix_(*idx)].copy()
        block.setflags(write=False)
        key = tuple(a.name for a in arms)
        outcomes.append(
            PostSelectionOutcome(
                pattern=tuple(zip(slots, key)),
                arms=tuple(arms),
                amplitude_block=block,
                probability=float(np.sum(np.abs(block) ** 2)),
                correction=tuple(feedforward_table.get(key, ())),
                needs_feedforward=key in feedforward_table,
            )
        )
    return outcomes


def apply_feedforward(outcome: PostSelectionOutcome) -> np.ndarray:
    block = np.asarray(outcome.amplitude_block)
    for slot, element in outcome.correction:
        u = element.matrix(outcome.arms[slot].basis)
        block = apply_channel_unitary(block, u, axes=[slot])
    return block


def decode_logical(outcome: PostSelectionOutcome, block: np.ndarray | None = None) -> np.ndarray:
    """Flattened logical amplitudes read off the arms' level channels."""
    block = apply_feedforward(outcome) if block is None else block
    idx = [[arm.basis.index(ch) for ch in arm.levels] for arm in outcome.arms]
    return np.asarray(block)[np.ix_(*idx)].reshape(-1)


def accepted(outcomes: Sequence[PostSelectionOutcome], feedforward: bool) -> list[PostSelectionOutcome]:
    return [o for o in outcomes if feedforward or not o.needs_feedforward]


def success_probability(outcomes: Sequence[PostSelectionOutcome], feedforward: bool) -> float:
    return float(sum(o.probability for o in accepted(outcomes, feedforward)))
