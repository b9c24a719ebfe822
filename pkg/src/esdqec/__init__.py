"""Entanglement sudden death of qubit pairs under local noise and error correction."""

from .analytic import (
    ClosedForm,
    Quantity,
    closed_form_eval,
    code_success_probability,
    esd_onset_analytic,
    esd_onset_numeric,
)
from .channels import KrausChannel, ad_kraus, combined_kraus, pd_kraus
from .codes import QecCode, get_code
from .metrics import concurrence, concurrence_xstate, fidelity_with_initial
from .pipeline import (
    ChannelKind,
    Family,
    Scenario,
    TwoQubitState,
    brute_force_pair,
    effective_logical_channel,
    evolve_pair,
    make_phi,
    make_psi,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelKind",
    "ClosedForm",
    "Family",
    "KrausChannel",
    "QecCode",
    "Quantity",
    "Scenario",
    "TwoQubitState",
    "ad_kraus",
    "brute_force_pair",
    "closed_form_eval",
    "code_success_probability",
    "combined_kraus",
    "concurrence",
    "concurrence_xstate",
    "effective_logical_channel",
    "esd_onset_analytic",
    "esd_onset_numeric",
    "evolve_pair",
    "fidelity_with_initial",
    "get_code",
    "make_phi",
    "make_psi",
    "pd_kraus",
]
