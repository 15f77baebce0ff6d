"""Second-quantized oracle: multi-photon amplitudes from matrix permanents.

The optical simulators track photons as labelled subsystems and read
coincidences by summing over photon-to-detector assignments. This module
computes the same numbers the bosonic way, from permanents of unitary
submatrices, so the two routes can be compared.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, permutations
from math import factorial, prod, sqrt
from typing import Mapping

import numpy as np

from .core import TOL
from .optics.elements import Channel, ChannelBasis
from .optics.fredkin import FredkinCascade
from .optics.network import apply_channel_unitary
from .optics.postselect import coincidence_tensor
from .optics.pswap import PostSelectedGate


def permanent(m) -> complex:
    """Permanent by direct expansion over all permutations."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {m.shape}")
    n = m.shape[0]
    if n == 0:
        return 1.0 + 0j
    rows = np.arange(n)
    return complex(sum(np.prod(m[rows, list(p)]) for p in permutations(range(n))))


def permanents(stack: np.ndarray) -> np.ndarray:
    """Permanents of a stack of ``k x k`` matrices, shape ``(..., k, k)``."""
    stack = np.asarray(stack)
    k = stack.shape[-1]
    if stack.shape[-2] != k:
        raise ValueError(f"permanents need square matrices, got trailing shape {stack.shape[-2:]}")
    out = np.zeros(stack.shape[:-2], dtype=complex)
    rows = np.arange(k)
    for p in permutations(range(k)):
        out += np.prod(stack[..., rows, list(p)], axis=-1)
    return out


@dataclass(frozen=True)
class FockConfiguration:
    occupations: tuple[tuple[object, int], ...]

    def __post_init__(self):
        occ = self.occupations
        if isinstance(occ, Mapping):
            occ = occ.items()
        cleaned = []
        for ch, n in occ:
            if n < 0:
                raise ValueError(f"negative occupation {n} in channel {ch}")
            if n:
                cleaned.append((ch, int(n)))
        object.__setattr__(self, "occupations", tuple(cleaned))

    @classmethod
    def from_channels(cls, channels) -> "FockConfiguration":
        """One photon per listed channel; repeats add up."""
        return cls(tuple(Counter(channels).items()))

    @property
    def total_photons(self) -> int:
        return sum(n for _, n in self.occupations)

    def modes(self, basis: ChannelBasis | None = None) -> list[int]:
        """Channel indices, each repeated by its occupation."""
        out = []
        for ch, n in self.occupations:
            idx = basis.index(ch) if isinstance(ch, (Channel, tuple)) and basis is not None else int(ch)
            out.extend([idx] * n)
        return out

    def multiplicity_factor(self) -> int:
        return prod(factorial(n) for _, n in self.occupations)


def bosonic_amplitude(u, in_cfg: FockConfiguration, out_cfg: FockConfiguration,
                      basis: ChannelBasis | None = None) -> complex:
    """``<out| U |in>`` for Fock states; configurations key channels or indices."""
    if in_cfg.total_photons != out_cfg.total_photons:
        raise ValueError(
            f"photon number mismatch: {in_cfg.total_photons} in, {out_cfg.total_photons} out"
        )
    u = np.asarray(u)
    cols = in_cfg.modes(basis)
    rows = out_cfg.modes(basis)
    sub = u[np.ix_(rows, cols)]
    norm = sqrt(in_cfg.multiplicity_factor() * out_cfg.multiplicity_factor())
    return permanent(sub) / norm


def coincidence_deviation(u: np.ndarray, amplitudes: np.ndarray) -> tuple[float, int]:
    """Largest gap between the two routes over all all-distinct output channels.

    ``amplitudes`` is a distinguishable-photon input tensor over the channels
    of ``u``. Route one propagates it photon by photon and sums over photon
    orderings; route two expands it into Fock inputs and uses permanents.
    Returns the maximum deviation and the number of output patterns checked.
    """
    u = np.asarray(u)
    amps = np.asarray(amplitudes)
    k = amps.ndim
    n_ch = u.shape[0]

    inputs: dict[tuple[int, ...], complex] = {}
    for idx in zip(*np.nonzero(amps)):
        if len(set(idx)) != k:
            raise ValueError(f"input places two photons in channel(s) {idx}; only singles are supported")
        key = tuple(sorted(int(i) for i in idx))
        inputs[key] = inputs.get(key, 0j) + complex(amps[idx])

    outs = np.array(list(combinations(range(n_ch), k)), dtype=int)
    bosonic = np.zeros(len(outs), dtype=complex)
    for cols, a_in in inputs.items():
        sub = u[outs[:, :, None], np.array(cols)[None, None, :]]
        bosonic += a_in * permanents(sub)

    distinguishable = coincidence_tensor(apply_channel_unitary(amps, u))[tuple(outs.T)]
    return float(np.max(np.abs(bosonic - distinguishable))), len(outs)


@dataclass(frozen=True)
class CertificateReport:
    gate: str
    photons: int
    inputs_checked: int
    patterns_checked: int
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["passed"] = self.passed
        return d


def _basis_inputs(dims) -> list[np.ndarray]:
    n = prod(dims)
    return [np.eye(n, dtype=complex)[i] for i in range(n)]


def _certify_single(gate: PostSelectedGate, inputs, tol) -> CertificateReport:
    worst, patterns = 0.0, 0
    for logical in inputs:
        dev, n = coincidence_deviation(gate.spec.compiled, gate.input_state(logical).amplitudes)
        worst, patterns = max(worst, dev), patterns + n
    return CertificateReport(gate.name, gate.n_photons, len(inputs), patterns, worst, tol)


def _certify_cascade(cascade: FredkinCascade, inputs, tol) -> CertificateReport:
    """Each stage sees two photons in the interferometer plus a spectator in
    its own two channels; the oracle works on that widened three-photon space."""
    worst, patterns = 0.0, 0
    for logical in inputs:
        layers = cascade.branches(logical)
        for stage, layer in zip(cascade.stages, layers[:-1]):
            u = stage.spec.compiled
            n = u.shape[0]
            u_ext = np.eye(n + 2, dtype=complex)
            u_ext[:n, :n] = u
            for branch in layer:
                two = cascade.stage_input(stage, branch)
                three = np.zeros((n + 2,) * 3, dtype=complex)
                three[:n, :n, n:] = two
                dev, count = coincidence_deviation(u_ext, three)
                worst, patterns = max(worst, dev), patterns + count
    return CertificateReport(cascade.name, cascade.n_photons, len(inputs), patterns, worst, tol)


def certify_coincidence_equivalence(gate, inputs=None, tol: float = TOL) -> CertificateReport:
    """Compare both routes for every input (logical basis states by default)."""
    inputs = _basis_inputs(gate.logical_dims) if inputs is None else list(inputs)
    if isinstance(gate, FredkinCascade):
        return _certify_cascade(gate, inputs, tol)
    if isinstance(gate, PostSelectedGate):
        return _certify_single(gate, inputs, tol)
    raise TypeError(f"cannot certify {type(gate).__name__}")
