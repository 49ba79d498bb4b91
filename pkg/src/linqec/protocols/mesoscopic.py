"""Polarization protocol with mesoscopic coherent states over the passive corrector.

Alice encodes a bit as a linear polarization angle ``bit * pi/2`` offset by
one of ``M`` secret basis angles.  Bob undoes the basis rotation on both
corrected pulses and reads the bit from which detector behind his PBS
receives light.  The two pulse powers also reveal the fiber mixing angle.
"""
from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field

from ..channel import ChannelParams
from ..components import pbs, rotate
from ..field import CoherentField
from ..setups import OUT_1, OUT_2, SetupTrace, run_fig4_passive, select_useful_pulse
from .coherent import rotated_coherent


def evenly_spaced_bases(m: int) -> Callable[[int], float]:
    """Default basis map k -> (k - 1) pi / (2M), k = 1..M."""
    return lambda k: (k - 1) * math.pi / (2 * m)


@dataclass(frozen=True)
class MesoscopicConfig:
    m_bases: int = 3
    alpha: complex = 2.0
    basis_angle_map: Callable[[int], float] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.m_bases < 1 or self.m_bases % 2 == 0:
            raise ValueError(f"number of bases must be a positive odd integer, got {self.m_bases}")
        angles = [self.basis_angle(k) for k in range(1, self.m_bases + 1)]
        if len(set(angles)) != len(angles):
            raise ValueError("basis angles must be distinct")
        if any(not 0 <= a < math.pi / 2 for a in angles):
            raise ValueError("basis angles must lie in [0, pi/2)")

    def basis_angle(self, k: int) -> float:
        if not 1 <= k <= self.m_bases:
            raise ValueError(f"basis index {k} outside 1..{self.m_bases}")
        fn = self.basis_angle_map or evenly_spaced_bases(self.m_bases)
        return float(fn(k))


@dataclass
class MesoscopicOutcome:
    decoded_bit: int
    port_powers: tuple[float, float]
    detector_powers: dict[str, tuple[float, float]]
    trace: SetupTrace

    def __iter__(self):
        # unpacks as (decoded_bit, port_powers, trace)
        return iter((self.decoded_bit, self.port_powers, self.trace))


def run_mesoscopic_round(
    bit: int,
    basis_index: int,
    cfg: MesoscopicConfig,
    p: ChannelParams,
    bob_basis_index: int | None = None,
) -> MesoscopicOutcome:
    """One pulse from Alice to Bob's detectors.

    ``detector_powers`` maps each output port to (D0 power, D1 power), D0
    sitting behind the H output of Bob's PBS.  With a mismatched
    ``bob_basis_index`` the powers are returned but decoding is unreliable.
    """
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    theta_a = bit * math.pi / 2 + cfg.basis_angle(basis_index)
    theta_b = -cfg.basis_angle(basis_index if bob_basis_index is None else bob_basis_index)

    pulse = CoherentField.single(*rotated_coherent(cfg.alpha, theta_a))
    out, fig4 = run_fig4_passive(pulse, p)
    trace = SetupTrace()
    trace.extend(fig4)
    f = select_useful_pulse(out)
    trace.record("useful_pulses", f)
    f = rotate(rotate(f, OUT_1, theta_b), OUT_2, theta_b)
    trace.record("bob_rotation", f)
    for port in (OUT_1, OUT_2):
        f = pbs(f, port, f"D0_{port}", f"D1_{port}")
    trace.record("detectors", f)

    detectors = {port: (f.power(port=f"D0_{port}"), f.power(port=f"D1_{port}")) for port in (OUT_1, OUT_2)}
    d0 = sum(d[0] for d in detectors.values())
    d1 = sum(d[1] for d in detectors.values())
    port_powers = (sum(detectors[OUT_1]), sum(detectors[OUT_2]))
    return MesoscopicOutcome(int(d1 > d0), port_powers, detectors, trace)


class UndefinedEstimateError(ValueError):
    pass


def estimate_phi(power_port1: float, power_port2: float) -> float:
    """Fiber mixing angle from the two corrected-pulse powers (port 1 carries sin^2)."""
    if power_port1 < 0 or power_port2 < 0:
        raise ValueError("powers must be non-negative")
    if power_port1 == 0 and power_port2 == 0:
        raise UndefinedEstimateError("no power on either output; phi cannot be estimated")
    return math.atan2(math.sqrt(power_port1), math.sqrt(power_port2))
