from .analysis import (
    DEFAULT_SEED,
    FidelityReport,
    ResourceEstimate,
    corrected_fidelity,
    gate_fidelity,
    random_logical_state,
    resource_calculator,
)
from .elements import HWP, PBS, Channel, ChannelBasis, Phase, element_from_dict, hwp_matrix, pbs_matrix
from .fredkin import FredkinCascade, build_fredkin_interferometer, load_gate_netlist
from .network import (
    InterferometerSpec,
    PhotonState,
    apply_channel_unitary,
    load_netlist,
    propagate,
    save_netlist,
)
from .postselect import (
    DetectionArm,
    PostSelectionOutcome,
    accepted,
    apply_feedforward,
    coincidence_tensor,
    decode_logical,
    enumerate_outcomes,
    success_probability,
)
from .pswap import PostSelectedGate, build_pswap_interferometer, pswap_gate, table1

