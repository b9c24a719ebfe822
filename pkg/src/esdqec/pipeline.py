"""Encode, damp and correct both halves of an entangled qubit pair.

Encoding, noise and correction all act locally on each qubit, so the whole
procedure on one side collapses to a single-qubit CPTP map (the effective
logical channel) and the pair evolves under that map tensored with itself.
:func:`brute_force_pair` simulates the full two-block register instead and is
kept as an independent check of that reduction.
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Optional

import numpy as np

from .channels import (
    KrausChannel,
    ad_kraus,
    apply_channel,
    apply_local,
    check_probability,
    combined_kraus,
    kappa_pair,
    kraus_from_choi,
    lift_to_register,
    pd_kraus,
)
from .codes import QecCode, get_code, recover, recover_register
from .qmat import dagger, ket, tensor

logger = logging.getLogger(__name__)


class ChannelKind(str, Enum):
    AD = "ad"
    PD = "pd"
    COMBINED = "combined"


class Family(str, Enum):
    PHI = "phi"
    PSI = "psi"


class ChannelConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class TwoQubitState:
    rho: np.ndarray
    alpha: float
    family: Family

    @property
    def vector(self) -> np.ndarray:
        return _pair_vector(self.family, self.alpha)


def _pair_vector(family: Family, alpha: float) -> np.ndarray:
    family = Family(family)
    if family is Family.PHI:
        return np.cos(alpha) * ket("11") + np.sin(alpha) * ket("00")
    return np.cos(alpha) * ket("10") + np.sin(alpha) * ket("01")


def make_pair(family, alpha: float) -> TwoQubitState:
    family = Family(family)
    v = _pair_vector(family, alpha)
    rho = np.outer(v, v.conj())
    rho.setflags(write=False)
    return TwoQubitState(rho, float(alpha), family)


def make_phi(alpha: float) -> TwoQubitState:
    """cos(alpha)|11> + sin(alpha)|00> as a density matrix."""
    return make_pair(Family.PHI, alpha)


def make_psi(alpha: float) -> TwoQubitState:
    """cos(alpha)|10> + sin(alpha)|01> as a density matrix."""
    return make_pair(Family.PSI, alpha)


@dataclass(frozen=True)
class Scenario:
    """Which noise acts, how strongly, and which code (if any) protects each qubit.

    For combined noise with ``kappa`` set, ``p_pd`` is derived from ``p_ad``.
    The probability a channel kind does not use is forced to 0.
    """

    channel_kind: ChannelKind
    code: Optional[str] = None
    p_ad: float = 0.0
    p_pd: float = 0.0
    kappa: Optional[float] = None

    def __post_init__(self):
        kind = ChannelKind(self.channel_kind)
        object.__setattr__(self, "channel_kind", kind)
        if self.code in ("none", ""):
            object.__setattr__(self, "code", None)
        if self.code is not None:
            get_code(self.code)
        p_ad = check_probability(self.p_ad, "p_ad")
        p_pd = check_probability(self.p_pd, "p_pd")
        if kind is ChannelKind.AD:
            p_pd = 0.0
        elif kind is ChannelKind.PD:
            p_ad = 0.0
        elif self.kappa is not None:
            p_pd = kappa_pair(p_ad, self.kappa)
        if self.kappa is not None:
            object.__setattr__(self, "kappa", float(self.kappa))
        object.__setattr__(self, "p_ad", p_ad)
        object.__setattr__(self, "p_pd", p_pd)

    @property
    def p(self) -> float:
        """The probability a sweep over this scenario varies."""
        return self.p_pd if self.channel_kind is ChannelKind.PD else self.p_ad

    def at(self, p: float) -> "Scenario":
        if self.channel_kind is ChannelKind.PD:
            return replace(self, p_pd=p)
        return replace(self, p_ad=p)

    def uncorrected(self) -> "Scenario":
        return replace(self, code=None)

    def noise_channel(self) -> KrausChannel:
        if self.channel_kind is ChannelKind.AD:
            return ad_kraus(self.p_ad)
        if self.channel_kind is ChannelKind.PD:
            return pd_kraus(self.p_pd)
        return combined_kraus(self.p_ad, self.p_pd)


DEFAULT_CODES = {
    ChannelKind.AD: "leung4",
    ChannelKind.PD: "phase3",
    ChannelKind.COMBINED: "laflamme5",
}


def _noisy_block(x: np.ndarray, code: QecCode, ops) -> np.ndarray:
    for q in range(code.n_physical):
        x = apply_local(x, ops, code.n_physical, q)
    return x


def logical_map(scenario: Scenario):
    """decode . recover . noise . encode as a plain function on 2x2 operators."""
    if scenario.code is None:
        raise ValueError("the logical map needs a code")
    code = get_code(scenario.code)
    ops = scenario.noise_channel().operators
    v = code.encoder

    def apply(x):
        return recover(_noisy_block(v @ np.asarray(x, dtype=complex) @ dagger(v), code, ops), code)

    return apply


@lru_cache(maxsize=4096)
def effective_logical_channel(scenario: Scenario) -> KrausChannel:
    """Single-qubit Kraus set equivalent to encode, damp every bit, correct, decode.

    The map is probed on the operator basis |i><j|, assembled into its Choi
    matrix and decomposed spectrally.
    """
    lam = logical_map(scenario)
    choi = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            unit = np.zeros((2, 2), dtype=complex)
            unit[i, j] = 1.0
            choi[2 * i:2 * i + 2, 2 * j:2 * j + 2] = lam(unit)
    label = f"{scenario.code}/{scenario.channel_kind.value}"
    try:
        return kraus_from_choi(choi, 2, label=label, min_eig=-1e-8)
    except ValueError as exc:
        raise ChannelConstructionError(f"effective channel for {scenario} is not CPTP: {exc}") from exc


def single_side_channel(scenario: Scenario) -> KrausChannel:
    if scenario.code is None:
        return scenario.noise_channel()
    return effective_logical_channel(scenario)


@lru_cache(maxsize=8192)
def _pair_operators(scenario: Scenario) -> np.ndarray:
    # stack of every a (x) b for the per-side Kraus set, shape (m*m, 4, 4)
    ops = np.array(single_side_channel(scenario).operators)
    m = len(ops)
    k = ops[:, None, :, None, :, None] * ops[None, :, None, :, None, :]
    k = k.reshape(m * m, 4, 4)
    k.setflags(write=False)
    return k


def evolve_pair(state: TwoQubitState, scenario: Scenario) -> np.ndarray:
    """Apply the per-qubit channel (bare or error-corrected) to both qubits."""
    k = _pair_operators(scenario)
    return (k @ state.rho @ k.conj().transpose(0, 2, 1)).sum(axis=0)


def brute_force_pair(state: TwoQubitState, scenario: Scenario) -> np.ndarray:
    """Joint simulation of both code blocks on one 2^(2n)-dimensional register."""
    noise = scenario.noise_channel()
    if scenario.code is None:
        rho = state.rho
        for q in range(2):
            rho = apply_channel(rho, lift_to_register(noise, 2, q))
        return rho

    code = get_code(scenario.code)
    n = code.n_physical
    if n >= 5:
        logger.warning("brute-force pair simulation on %d qubits (dim %d) is slow", 2 * n, 4 ** n)
    w = tensor(code.encoder, code.encoder)
    big = w @ state.rho @ dagger(w)
    for q in range(2 * n):
        big = apply_local(big, noise.operators, 2 * n, q)
    big = recover_register(big, code, 1, code.dim)
    return recover_register(big, code, 2, 1)
