"""q-deformed entangled states and teleportation with a classical key channel."""
from .algebra import (
    AmplitudeMatrix,
    QAmplitudeMatrix,
    bell_matrix,
    bell_q_decompose,
    bell_q_matrix,
    bell_q_state,
    deformed_bipartite_state,
    is_entangled,
    js_qubit,
    q_unentangled_check,
    verify_generator_algebra,
)
from .channel import ClassicalPayload, RecoveryResult, decode, encode, recover_amplitudes, validate_key
from .circuit import (
    ChannelSpec,
    InfoQubit,
    Protocol,
    Shape,
    TeleportRecord,
    apply_cnot,
    apply_hadamard,
    bob_stats,
    fidelity_closed,
    fidelity_extrema,
    teleport,
)
from .deformation import (
    DeformationProfile,
    ProfileSet,
    eval_profile,
    gamma_for_info,
    product_for_bell_basis,
    product_for_state,
    split_product,
)
from .qnum import DeformationParam, new_param, qnumber

__version__ = "0.1.0"
