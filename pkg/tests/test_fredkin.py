import json
from collections import Counter
from math import sqrt

import numpy as np
import pytest

from quditfredkin.optics import (
    HWP,
    Channel,
    FredkinCascade,
    apply_feedforward,
    decode_logical,
    gate_fidelity,
    load_gate_netlist,
    success_probability,
)
from quditfredkin.optics.fredkin import CONTROL_LINE
from quditfredkin.synthesis import reference_fredkin

U_H, D_H, D_V = (CONTROL_LINE.index(Channel(*ch)) for ch in (("u", "H"), ("d", "H"), ("d", "V")))

# (control-line channel, t1 pol, t2 pol) carrying alpha_1..alpha_8 at each step
AFTER_INPUT = [(U_H, 0, 0), (U_H, 0, 1), (U_H, 1, 0), (U_H, 1, 1),
               (D_V, 0, 0), (D_V, 0, 1), (D_V, 1, 0), (D_V, 1, 1)]
AFTER_STAGE1 = [(U_H, 0, 0), (U_H, 0, 1), (U_H, 1, 0), (U_H, 1, 1),
                (D_H, 0, 1), (D_V, 0, 1), (D_H, 1, 1), (D_V, 1, 1)]
AFTER_STAGE2 = [(U_H, 0, 0), (U_H, 0, 1), (U_H, 1, 0), (U_H, 1, 1),
                (D_H, 0, 1), (D_H, 1, 1), (D_V, 0, 1), (D_V, 1, 1)]
AFTER_STAGE3 = [(U_H, 0, 0), (U_H, 0, 1), (U_H, 1, 0), (U_H, 1, 1),
                (D_V, 0, 0), (D_V, 1, 0), (D_V, 0, 1), (D_V, 1, 1)]

STAGE1_HISTORIES = [(("9", "11"),), (("10", "12"),)]
STAGE2_HISTORIES = [
    (("9", "11"), ("9", "11")),
    (("9", "11"), ("10", "12")),
    (("10", "12"), ("9", "11")),
    (("10", "12"), ("10", "12")),
]


def basis_input(k):
    v = np.zeros(8, dtype=complex)
    v[k] = 1.0
    return v


def expected_roles(placement, k, coeff, sign=1):
    out = np.zeros((4, 2, 2), dtype=complex)
    out[placement[k]] = coeff * (sign if k >= 4 else 1)
    return out


@pytest.fixture(scope="module")
def layers(fredkin):
    return [fredkin.branches(basis_input(k)) for k in range(8)]


@pytest.mark.parametrize("k", range(8))
def test_input_cube_encoding(layers, k):
    (branch,) = layers[k][0]
    assert np.array_equal(branch.amplitudes, expected_roles(AFTER_INPUT, k, 1.0))


@pytest.mark.parametrize("k", range(8))
def test_after_first_stage(layers, k):
    branches = layers[k][1]
    assert [b.history for b in branches] == STAGE1_HISTORIES
    for b in branches:
        assert np.max(np.abs(b.amplitudes - expected_roles(AFTER_STAGE1, k, 1 / (2 * sqrt(2))))) <= 1e-12


@pytest.mark.parametrize("k", range(8))
def test_after_second_stage(layers, k):
    branches = layers[k][2]
    assert [b.history for b in branches] == STAGE2_HISTORIES
    for b in branches:
        assert np.max(np.abs(b.amplitudes - expected_roles(AFTER_STAGE2, k, 1 / 8))) <= 1e-12


@pytest.mark.parametrize("k", range(8))
def test_after_third_stage(layers, k):
    branches = layers[k][3]
    assert len(branches) == 16
    for b in branches:
        sign = 1 if b.history[2] in (("9", "11"), ("10", "12")) else -1
        expected = expected_roles(AFTER_STAGE3, k, 1 / (16 * sqrt(2)), sign)
        assert np.max(np.abs(b.amplitudes - expected)) <= 1e-12


def test_sixteen_outcome_labels_and_signs(fredkin):
    outcomes = fredkin.outcomes(basis_input(5))
    labels = Counter(tuple(m for _, m in o.pattern) for o in outcomes)
    assert len(labels) == 8 and set(labels.values()) == {2}
    # crossed patterns are those where the control and t2 leave by different modes
    for o in outcomes:
        c_mode, _, t2_mode = (m for _, m in o.pattern)
        assert o.needs_feedforward == (c_mode != t2_mode)
    needing = {tuple(m for _, m in o.pattern) for o in outcomes if o.needs_feedforward}
    assert needing == {("11", "11", "12"), ("11", "12", "12"), ("12", "11", "11"), ("12", "12", "11")}


@pytest.mark.parametrize("k", range(8))
def test_merged_outcome_blocks(fredkin, k):
    ideal_out = reference_fredkin() @ basis_input(k)
    for o in fredkin.outcomes(basis_input(k)):
        assert o.probability == pytest.approx(1 / 512, abs=1e-12)
        raw = decode_logical(o, o.amplitude_block) * 16 * sqrt(2)
        sign = -1 if (o.needs_feedforward and k >= 4) else 1
        assert np.max(np.abs(raw - sign * ideal_out)) <= 1e-12
        fixed = decode_logical(o) * 16 * sqrt(2)
        assert np.max(np.abs(fixed - ideal_out)) <= 1e-12


def test_hwp0_correction_on_control(fredkin):
    o = next(o for o in fredkin.outcomes(basis_input(6)) if o.needs_feedforward)
    ((slot, element),) = o.correction
    assert slot == 0 and element == HWP((o.pattern[0][1],), 0.0)
    block = apply_feedforward(o)
    assert np.array_equal(block[0], o.amplitude_block[0])
    assert np.array_equal(block[1], -o.amplitude_block[1])


def test_v_h_v_input_swaps_targets(fredkin):
    # |1>_c |0>_t1 |1>_t2 -> |1>_c |1>_t1 |0>_t2
    for o in fredkin.outcomes(basis_input(0b101)):
        out = decode_logical(o)
        assert abs(out[0b110]) == pytest.approx(1 / (16 * sqrt(2)), abs=1e-12)
        assert np.sum(np.abs(out) ** 2) == pytest.approx(1 / 512, abs=1e-12)


def test_success_probability_and_fidelity(fredkin):
    rep = gate_fidelity(fredkin, trials=100)
    assert abs(rep.success_mean - 1 / 32) <= 1e-12 and rep.success_std <= 1e-12
    assert rep.min_fidelity >= 1 - 1e-12
    assert rep.accepted_patterns == 16


def test_without_feedforward_half_the_patterns(fredkin):
    outcomes = fredkin.outcomes(basis_input(3))
    assert success_probability(outcomes, True) == pytest.approx(1 / 32, abs=1e-12)
    assert success_probability(outcomes, False) == pytest.approx(1 / 64, abs=1e-12)


def test_stage_reuses_one_compiled_unitary(fredkin):
    first = fredkin.stages[0].spec.compiled
    assert all(s.spec.compiled is first for s in fredkin.stages)
    assert [s.target for s in fredkin.stages] == ["t2", "t1", "t2"]


def test_cascade_netlist_round_trip(fredkin, tmp_path):
    path = tmp_path / "fredkin3.json"
    path.write_text(json.dumps(fredkin.to_dict()))
    again = load_gate_netlist(path)
    assert isinstance(again, FredkinCascade)
    for a, b in zip(again.stages, fredkin.stages):
        assert np.max(np.abs(a.spec.compiled - b.spec.compiled)) <= 1e-12
        assert a.accept == b.accept and a.target == b.target
    v = np.random.default_rng(9).normal(size=8)
    v /= np.linalg.norm(v)
    for x, y in zip(again.outcomes(v), fredkin.outcomes(v)):
        assert x.pattern == y.pattern
        assert np.max(np.abs(x.amplitude_block - y.amplitude_block)) <= 1e-12


def test_cascade_netlist_rejects_other_schema(fredkin):
    d = fredkin.to_dict()
    d["schema_version"] = "0.9"
    with pytest.raises(ValueError):
        FredkinCascade.from_dict(d)


def test_all_compiled_matrices_unitary(fredkin):
    specs = [fredkin.input_spec, fredkin.combiner] + [s.spec for s in fredkin.stages]
    assert all(s.is_unitary() for s in specs)
