from .bb84 import Bb84Stats, TrialRecord, run_bb84, write_records_csv
from .coherent import (
    coherent_overlap,
    distinguishability_exact,
    distinguishability_paper,
    stokes_from_amplitudes,
    stokes_parameters,
)
from .fpb import (
    AliceState,
    FpbConfig,
    conditional_qbers,
    error_mass,
    fpb_entangle,
    fpb_eve_success_probability,
    fpb_through_corrector,
)
from .mesoscopic import MesoscopicConfig, estimate_phi, run_mesoscopic_round
