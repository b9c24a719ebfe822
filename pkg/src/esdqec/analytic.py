"""Closed forms for uncorrected evolution, ESD onset and code success rates.

Everything here is either a printed formula or a thin root finder around one.
Corrected states have no closed form; :func:`esd_onset_numeric` covers them by
scanning the simulated concurrence instead.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .channels import check_probability, kappa_pair
from .metrics import concurrence
from .pipeline import ChannelKind, Family, Scenario, evolve_pair, make_pair

ONSET_GRID_STEP = 1e-3
ONSET_LAST_P = 1.0 - 1e-6
ONSET_RESOLUTION = 1e-6
ONSET_ZERO = 1e-12
ONSET_PROBE_STEPS = 10


class Quantity(str, Enum):
    CONCURRENCE = "concurrence"
    FIDELITY = "fidelity"


@dataclass(frozen=True)
class ClosedForm:
    family: Family
    channel_kind: ChannelKind
    quantity: Quantity

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "channel_kind", ChannelKind(self.channel_kind))
        object.__setattr__(self, "quantity", Quantity(self.quantity))


# (s, c) are |sin(alpha)|, |cos(alpha)|; a and d are the damping and dephasing probabilities
def _phi_c(s, c, a, d):
    return max(0.0, 2.0 * (1.0 - a) * c * (s * (1.0 - d) - c * a))


def _phi_f(s, c, a, d):
    return 1.0 - 2.0 * a * c * c + a * a * c * c - 2.0 * d * (1.0 - a) * s * s * c * c


def _psi_c(s, c, a, d):
    return 2.0 * s * c * (1.0 - a) * (1.0 - d)


def _psi_f(s, c, a, d):
    return 1.0 - a - 2.0 * d * (1.0 - a) * s * s * c * c


# the AD and PD forms are the combined ones with the other probability at 0
_FORMULAS = {
    (Family.PHI, Quantity.CONCURRENCE): _phi_c,
    (Family.PHI, Quantity.FIDELITY): _phi_f,
    (Family.PSI, Quantity.CONCURRENCE): _psi_c,
    (Family.PSI, Quantity.FIDELITY): _psi_f,
}


def closed_form_eval(cf: ClosedForm, alpha: float, p_ad: float = 0.0, p_pd: float = 0.0) -> float:
    """Uncorrected concurrence or fidelity from the printed formulas.

    The probability that ``cf.channel_kind`` does not involve is ignored.
    """
    if not isinstance(cf, ClosedForm):
        raise TypeError(f"expected a ClosedForm, got {type(cf).__name__}")
    try:
        formula = _FORMULAS[(cf.family, cf.quantity)]
    except KeyError:
        raise ValueError(f"no closed form for {cf}") from None
    a = check_probability(p_ad, "p_ad")
    d = check_probability(p_pd, "p_pd")
    if cf.channel_kind is ChannelKind.AD:
        d = 0.0
    elif cf.channel_kind is ChannelKind.PD:
        a = 0.0
    return formula(abs(math.sin(alpha)), abs(math.cos(alpha)), a, d)


def _in_open_quadrant(alpha: float) -> bool:
    return 0.0 < alpha < math.pi / 2


def esd_onset_analytic(family, channel_kind, alpha: float, kappa: Optional[float] = None) -> Optional[float]:
    """Onset probability of sudden death for uncorrected states, or None.

    A value of 1 means the concurrence only vanishes at infinite time.
    """
    family, kind = Family(family), ChannelKind(channel_kind)
    if not _in_open_quadrant(alpha):
        return None
    if family is Family.PSI or kind is ChannelKind.PD:
        return None
    t = abs(math.tan(alpha))
    if abs(t - 1.0) <= 1e-12:
        t = 1.0  # tan(pi/4) rounds to just below 1
    if kind is ChannelKind.AD:
        return min(1.0, t)
    if kappa is None:
        raise ValueError("combined-noise onset needs kappa")
    if kappa < 0:
        raise ValueError(f"kappa must be non-negative, got {kappa}")

    def gap(p):
        return p - t * (1.0 - kappa_pair(p, kappa))

    if gap(1.0) <= 0.0:
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _onset_grid():
    n = int(round(1.0 / ONSET_GRID_STEP))
    return [k * ONSET_GRID_STEP for k in range(1, n)] + [ONSET_LAST_P]


def esd_onset_numeric(scenario: Scenario, family, alpha: float) -> Optional[float]:
    """Smallest p at which the simulated concurrence dies and stays dead.

    Scans a 1e-3 grid, requires the concurrence to stay below 1e-12 for the
    next ten grid points (at least one must exist), then bisects down to 1e-6.
    Returns None when the pair is still entangled at p = 1 - 1e-6, or when
    ``alpha`` gives a product state.
    """
    if not _in_open_quadrant(alpha):
        return None
    state = make_pair(family, alpha)

    def dead(p):
        return concurrence(evolve_pair(state, scenario.at(p))) < ONSET_ZERO

    grid = _onset_grid()
    flags = {}

    def dead_at(i):
        if i not in flags:
            flags[i] = dead(grid[i])
        return flags[i]

    for i in range(len(grid)):
        if not dead_at(i):
            continue
        probe = range(i + 1, min(i + 1 + ONSET_PROBE_STEPS, len(grid)))
        # the last grid point has nothing ahead of it, so it cannot confirm death
        if len(probe) and all(dead_at(j) for j in probe):
            lo, hi = (grid[i - 1] if i > 0 else 0.0), grid[i]
            while hi - lo > ONSET_RESOLUTION:
                mid = 0.5 * (lo + hi)
                if dead(mid):
                    hi = mid
                else:
                    lo = mid
            return hi
    return None


def code_success_probability(n_bits: int, t_correctable: int, p: float) -> float:
    """Probability that at most ``t_correctable`` of ``n_bits`` bits fail."""
    if t_correctable < 0 or t_correctable > n_bits:
        raise ValueError(f"need 0 <= t <= n, got t={t_correctable}, n={n_bits}")
    p = check_probability(p)
    return sum(math.comb(n_bits, k) * p ** k * (1.0 - p) ** (n_bits - k) for k in range(t_correctable + 1))


def success_crossover(code_a=(4, 1), code_b=(9, 2), lo: float = 0.01, hi: float = 0.5, tol: float = 1e-12) -> float:
    """p where two codes have equal success probability, found by bisection on [lo, hi]."""

    def diff(p):
        return code_success_probability(*code_a, p) - code_success_probability(*code_b, p)

    f_lo = diff(lo)
    if f_lo * diff(hi) > 0:
        raise ValueError(f"success curves do not cross inside [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (diff(mid) > 0) == (f_lo > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
