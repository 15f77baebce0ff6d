"""Interferometer specs, JSON netlists and distinguishable-photon propagation."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from ..core import TOL, is_unitary
from .elements import Channel, ChannelBasis, element_from_dict

NETLIST_SCHEMA_VERSION = "1.0"


@dataclass(frozen=True)
class InterferometerSpec:
    """Ordered optical elements over a fixed channel set.

    ``basis`` covers every channel any element touches; the compiled matrix
    acts on all of it. ``input_ports`` and ``output_ports`` only name where
    light enters and where detectors sit.
    """

    name: str
    basis: ChannelBasis
    elements: tuple = ()
    input_ports: tuple[str, ...] = ()
    output_ports: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "input_ports", tuple(self.input_ports))
        object.__setattr__(self, "output_ports", tuple(self.output_ports))
        known = set(self.basis.ports())
        for el in self.elements:
            missing = [p for p in el.touched_ports() if p not in known]
            if missing:
                raise ValueError(f"{el.kind} touches ports {missing} outside the channel basis")
        for p in self.input_ports + self.output_ports:
            if p not in known:
                raise ValueError(f"port {p!r} not in the channel basis")

    @property
    def basis_in(self) -> ChannelBasis:
        return ChannelBasis.from_ports(self.input_ports)

    @property
    def basis_out(self) -> ChannelBasis:
        return ChannelBasis.from_ports(self.output_ports)

    def partial_unitary(self, n_elements: int | None = None) -> np.ndarray:
        """Product of the first ``n_elements`` element matrices (all when None)."""
        els = self.elements if n_elements is None else self.elements[:n_elements]
        u = np.eye(len(self.basis), dtype=complex)
        for el in els:
            u = el.matrix(self.basis) @ u
        return u

    @cached_property
    def compiled(self) -> np.ndarray:
        u = self.partial_unitary()
        u.setflags(write=False)
        return u

    def is_unitary(self, tol: float = TOL) -> bool:
        return is_unitary(self.compiled, tol)

    def count(self, kind: str) -> int:
        return sum(1 for el in self.elements if el.kind == kind)

    def to_dict(self) -> dict:
        return {
            "schema_version": NETLIST_SCHEMA_VERSION,
            "name": self.name,
            "channels": [[ch.spatial, ch.polarization] for ch in self.basis],
            "input_ports": list(self.input_ports),
            "output_ports": list(self.output_ports),
            "elements": [el.to_dict() for el in self.elements],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "InterferometerSpec":
        version = d.get("schema_version")
        if version != NETLIST_SCHEMA_VERSION:
            raise ValueError(f"unsupported netlist schema_version {version!r}")
        return cls(
            name=d["name"],
            basis=ChannelBasis(Channel(s, p) for s, p in d["channels"]),
            elements=tuple(element_from_dict(e) for e in d["elements"]),
            input_ports=tuple(d.get("input_ports", ())),
            output_ports=tuple(d.get("output_ports", ())),
        )


def save_netlist(spec, path: str | Path) -> None:
    Path(path).write_text(json.dumps(spec.to_dict(), indent=2) + "\n")


def load_netlist(path: str | Path) -> InterferometerSpec:
    return InterferometerSpec.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class PhotonState:
    """Joint amplitudes of labelled, distinguishable photons.

    Every photon lives on the same channel basis; ``amplitudes`` has one axis
    per photon, in ``photon_labels`` order.
    """

    photon_labels: tuple[str, ...]
    basis: ChannelBasis
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        labels = tuple(self.photon_labels)
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (len(self.basis),) * len(labels):
            raise ValueError(
                f"amplitude shape {amps.shape} does not match {len(labels)} photons "
                f"over {len(self.basis)} channels"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "photon_labels", labels)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_terms(cls, photon_labels, basis: ChannelBasis, terms) -> "PhotonState":
        """``terms`` is an iterable of ``(coefficient, (channel per photon, ...))``."""
        amps = np.zeros((len(basis),) * len(photon_labels), dtype=complex)
        for coeff, chans in terms:
            if len(chans) != len(photon_labels):
                raise ValueError("each term needs one channel per photon")
            amps[tuple(basis.index(ch) for ch in chans)] += coeff
        return cls(tuple(photon_labels), basis, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, *channels) -> complex:
        return complex(self.amplitudes[tuple(self.basis.index(ch) for ch in channels)])

    def support(self, tol: float = TOL) -> dict[tuple[Channel, ...], complex]:
        """Nonzero entries keyed by their channel tuple, in basis order."""
        out = {}
        for idx in zip(*np.nonzero(np.abs(self.amplitudes) > tol)):
            out[tuple(self.basis.channels[i] for i in idx)] = complex(self.amplitudes[idx])
        return out


def apply_channel_unitary(amplitudes: np.ndarray, u: np.ndarray, axes: Sequence[int] | None = None) -> np.ndarray:
    """Apply ``u`` to each listed photon axis (all axes by default)."""
    out = np.asarray(amplitudes, dtype=complex)
    axes = range(out.ndim) if axes is None else axes
    for ax in axes:
        out = np.moveaxis(np.tensordot(u, out, axes=([1], [ax])), 0, ax)
    return out


def propagate(state: PhotonState, spec: InterferometerSpec, n_elements: int | None = None) -> PhotonState:
    if state.basis != spec.basis:
        raise ValueError("photon state and interferometer use different channel bases")
    u = spec.compiled if n_elements is None else spec.partial_unitary(n_elements)
    return PhotonState(state.photon_labels, state.basis, apply_channel_unitary(state.amplitudes, u))
