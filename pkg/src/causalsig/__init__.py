"""Signalling and causal-influence quantifiers for bipartite quantum gates."""

from .channels import (
    Channel,
    HermitianMap,
    SystemDims,
    UnitaryGate,
    apply,
    channel_from_unitary,
    compose,
    gate_zoo,
    haar_gate,
    haar_unitary,
    identity_channel,
    load_gate,
    local_gate,
    marginal_to_b,
    random_channel,
    stinespring,
    swap_probe,
    swap_probe_gate,
    tensor,
    trace_channel,
)
from .quantifiers import (
    BoundReport,
    QuantifierResult,
    SolverFailure,
    causal_influence,
    check_bounds,
    check_continuity_bound,
    diamond_norm,
    dnorm_lower_bound,
    is_no_causal_influence,
    is_no_signalling,
    signalling,
)
from .sdp import SdpProblem, SdpSolution, embed_hermitian, solve
from .witness import (
    WitnessReport,
    cnot_causal_witness,
    dephasing_gap,
    measurement_channel,
    sm_cnot,
)

__version__ = "0.1.0"
