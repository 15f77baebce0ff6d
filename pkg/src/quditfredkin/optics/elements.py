"""Polarization channels and the linear-optical elements acting on them.

Every element is described by the spatial ports it touches. A PBS is a list
of beams ``(input, h_out, v_out)``: horizontal light leaves through
``h_out``, vertical light through ``v_out``. Port relabelling is modelled as a
channel exchange (input <-> output), which is a permutation and so unitary on
the full channel set; output ports are always empty before the element fires.
No reflection phase is attached to a PBS.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import cos, pi, radians, sin

import numpy as np

POLARIZATIONS = ("H", "V")


@dataclass(frozen=True, order=True)
class Channel:
    spatial: str
    polarization: str

    def __post_init__(self):
        if self.polarization not in POLARIZATIONS:
            raise ValueError(f"polarization must be H or V, got {self.polarization!r}")

    def __str__(self) -> str:
        return f"{self.polarization}_{self.spatial}"


class ChannelBasis:
    """Fixed ordering of channels; index lookups are O(1)."""

    def __init__(self, channels):
        self.channels = tuple(channels)
        self._index = {ch: i for i, ch in enumerate(self.channels)}
        if len(self._index) != len(self.channels):
            raise ValueError("duplicate channel in basis")

    @classmethod
    def from_ports(cls, ports) -> "ChannelBasis":
        return cls(Channel(p, pol) for p in ports for pol in POLARIZATIONS)

    def __len__(self) -> int:
        return len(self.channels)

    def __iter__(self):
        return iter(self.channels)

    def __contains__(self, ch) -> bool:
        return ch in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, ChannelBasis) and self.channels == other.channels

    def __hash__(self) -> int:
        return hash(self.channels)

    def index(self, ch: Channel | tuple[str, str]) -> int:
        if not isinstance(ch, Channel):
            ch = Channel(*ch)
        try:
            return self._index[ch]
        except KeyError:
            raise KeyError(f"channel {ch} not in basis") from None

    def ports(self) -> list[str]:
        seen = []
        for ch in self.channels:
            if ch.spatial not in seen:
                seen.append(ch.spatial)
        return seen


def hwp_matrix(theta_deg: float) -> np.ndarray:
    """Half-wave plate at ``theta_deg`` on the (H, V) basis; columns are images."""
    t = 2 * radians(theta_deg)
    return np.array([[cos(t), sin(t)], [sin(t), -cos(t)]], dtype=complex)


@dataclass(frozen=True)
class HWP:
    ports: tuple[str, ...]
    angle: float

    kind = "HWP"

    def __post_init__(self):
        object.__setattr__(self, "ports", tuple(self.ports))
        object.__setattr__(self, "angle", float(self.angle))

    def touched_ports(self) -> tuple[str, ...]:
        return self.ports

    def matrix(self, basis: ChannelBasis) -> np.ndarray:
        u = np.eye(len(basis), dtype=complex)
        local = hwp_matrix(self.angle)
        for p in self.ports:
            idx = [basis.index((p, pol)) for pol in POLARIZATIONS]
            u[np.ix_(idx, idx)] = local
        return u

    def to_dict(self) -> dict:
        return {"kind": self.kind, "ports": list(self.ports), "angle": self.angle}


@dataclass(frozen=True)
class Phase:
    ports: tuple[str, ...]
    phase: float

    kind = "PHASE"

    def __post_init__(self):
        object.__setattr__(self, "ports", tuple(self.ports))
        object.__setattr__(self, "phase", float(self.phase))

    def touched_ports(self) -> tuple[str, ...]:
        return self.ports

    def matrix(self, basis: ChannelBasis) -> np.ndarray:
        u = np.eye(len(basis), dtype=complex)
        factor = np.exp(1j * self.phase)
        if self.phase == pi:
            factor = -1.0
        for p in self.ports:
            for pol in POLARIZATIONS:
                i = basis.index((p, pol))
                u[i, i] = factor
        return u

    def to_dict(self) -> dict:
        return {"kind": self.kind, "ports": list(self.ports), "phase": self.phase}


@dataclass(frozen=True)
class PBS:
    beams: tuple[tuple[str, str | None, str | None], ...]

    kind = "PBS"

    def __post_init__(self):
        beams = tuple((b[0], b[1], b[2]) for b in self.beams)
        object.__setattr__(self, "beams", beams)
        sources = [Channel(i, pol) for i, h, v in beams for pol, out in (("H", h), ("V", v)) if out]
        targets = self.routes().values()
        if len(set(sources)) != len(sources) or len(set(targets)) != len(targets):
            raise ValueError(f"PBS ports overlap: {beams}")
        if set(sources) & set(targets):
            raise ValueError(f"PBS input and output channels overlap: {beams}")

    @classmethod
    def cube(cls, in_a: str | None, in_b: str | None, out_t: str, out_r: str, extra=()) -> "PBS":
        """Standard two-port cube: H goes straight (a->t, b->r), V crosses (a->r, b->t)."""
        if in_a is not None and in_a == in_b:
            raise ValueError("duplicate PBS input ports")
        if out_t == out_r:
            raise ValueError("duplicate PBS output ports")
        beams = []
        if in_a is not None:
            beams.append((in_a, out_t, out_r))
        if in_b is not None:
            beams.append((in_b, out_r, out_t))
        return cls(tuple(beams) + tuple(extra))

    def routes(self) -> dict[Channel, Channel]:
        out = {}
        for src, h, v in self.beams:
            if h:
                out[Channel(src, "H")] = Channel(h, "H")
            if v:
                out[Channel(src, "V")] = Channel(v, "V")
        return out

    def touched_ports(self) -> tuple[str, ...]:
        ports = []
        for beam in self.beams:
            ports.extend(p for p in beam if p)
        return tuple(ports)

    def matrix(self, basis: ChannelBasis) -> np.ndarray:
        n = len(basis)
        perm = list(range(n))
        for src, dst in self.routes().items():
            i, j = basis.index(src), basis.index(dst)
            perm[i], perm[j] = j, i
        u = np.zeros((n, n), dtype=complex)
        u[perm, np.arange(n)] = 1.0
        return u

    def to_dict(self) -> dict:
        # ports is informational; beams carry the routing
        return {
            "kind": self.kind,
            "ports": list(dict.fromkeys(self.touched_ports())),
            "beams": [list(b) for b in self.beams],
        }


def pbs_matrix(in_a, in_b, out_t, out_r, basis: ChannelBasis | None = None) -> np.ndarray:
    """Channel permutation of a single cube; the basis defaults to its own ports."""
    pbs = PBS.cube(in_a, in_b, out_t, out_r)
    if basis is None:
        basis = ChannelBasis.from_ports([p for p in (in_a, in_b, out_t, out_r) if p is not None])
    return pbs.matrix(basis)


def element_from_dict(d: dict):
    kind = d.get("kind")
    if kind == "HWP":
        return HWP(tuple(d["ports"]), d["angle"])
    if kind == "PHASE":
        return Phase(tuple(d["ports"]), d["phase"])
    if kind == "PBS":
        return PBS(tuple(tuple(b) for b in d["beams"]))
    raise ValueError(f"unknown optical element kind {kind!r}")
