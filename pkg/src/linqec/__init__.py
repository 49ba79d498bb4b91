"""Linear-optical error correction for polarization qubits and coherent pulses."""
from .channel import ChannelDistribution, ChannelParams, apply_channel, channel_matrix, sample_params
from .field import CoherentField
from .setups import (
    SetupTrace,
    encode_alice,
    run_fig1_corrector,
    run_fig2_corrector,
    run_fig4_passive,
    select_useful_pulse,
)
from .state import (
    ModeLabel,
    PhotonState,
    born_sample,
    equal_up_to_global_phase,
    fidelity,
    new_qubit,
    overlap,
    postselect,
    tensor_with_eve,
)

__version__ = "0.1.0"
