"""The error-correcting optical setups, stage by stage.

Single-photon (active) correctors
    ``run_fig1_corrector``: Pockels cell at Bob's input, a balanced polarization
    interferometer with two gated Pockels cells, two unbalanced interferometers
    and two half-wave plates.
    ``run_fig2_corrector``: the reduced receiver, one PBS, two gated Pockels
    cells and two unbalanced interferometers.

Coherent-state (passive) corrector
    ``run_fig4_passive``: no active element; a 50/50 coupler builds the
    time-bin pair and the receiver produces three pulses per output, of which
    only the middle one is corrected.

All pipelines return the output together with a :class:`SetupTrace` of every
intermediate state so each stage can be audited.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .channel import CHANNEL_PORT, ChannelParams, apply_channel
from .components import (
    coupler_50_50,
    delay_arm,
    hwp_swap,
    merge_ports,
    pbs,
    phase_shift,
    pockels_flip,
    rotate,
    swap_ports,
)
from .field import CoherentField
from .state import ModeVector, PhotonState

SHORT, LONG = 0, 1
OUT_1, OUT_2 = "1", "2"
DISCARD_PORT = "discard"

FIG1_STAGES = (
    "alice_output",
    "channel_output",
    "bob_pockels",
    "balanced_interferometer",
    "unbalanced_interferometers",
    "output",
)
FIG2_STAGES = (
    "alice_output",
    "channel_output",
    "bob_pbs",
    "bob_pockels",
    "unbalanced_interferometers",
    "output",
)
FIG4_STAGES = (
    "alice_input",
    "alice_arms",
    "channel_input",
    "channel_output",
    "bob_pbs",
    "bob_rotators",
    "output",
)


class PreconditionError(ValueError):
    pass


@dataclass
class SetupTrace:
    """Ordered (stage label, state snapshot) pairs."""

    stages: list[tuple[str, ModeVector]] = field(default_factory=list)

    def record(self, label: str, state: ModeVector) -> None:
        self.stages.append((label, state))

    def labels(self) -> list[str]:
        return [label for label, _ in self.stages]

    def __getitem__(self, label: str) -> ModeVector:
        for name, state in self.stages:
            if name == label:
                return state
        raise KeyError(label)

    def extend(self, other: SetupTrace, prefix: str = "") -> None:
        for label, state in other.stages:
            self.stages.append((prefix + label, state))

    def to_dict(self) -> dict[str, list[dict]]:
        return {label: state.to_records() for label, state in self.stages}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _require_fresh_qubit(q: ModeVector) -> str:
    ports = q.ports()
    if q.delays() != {0} or len(ports) != 1:
        raise PreconditionError("expected a delay-0 qubit on a single port")
    return next(iter(ports))


def encode_alice(q: PhotonState) -> PhotonState:
    """Polarization qubit -> horizontally polarized time-bin qubit on the fiber port.

    V takes the long arm, then a Pockels cell gated on the long bin turns it
    horizontal: ``a|H> + b|V>  ->  a|H>_S + b|H>_L``.
    """
    port = _require_fresh_qubit(q)
    s = delay_arm(q, port, "V")
    s = pockels_flip(s, port, LONG)
    return s.relabel(lambda k: k.with_port(CHANNEL_PORT))


def run_fig1_corrector(q: PhotonState, p: ChannelParams) -> tuple[PhotonState, SetupTrace]:
    trace = SetupTrace()
    s = encode_alice(q)
    trace.record("alice_output", s)
    s = apply_channel(s, p)
    trace.record("channel_output", s)
    s = pockels_flip(s, CHANNEL_PORT, SHORT)
    trace.record("bob_pockels", s)
    # balanced interferometer: PBS into arms h/v, gated cells, recombining PBS
    s = pbs(s, CHANNEL_PORT, "arm_h", "arm_v")
    s = pockels_flip(s, "arm_h", SHORT)
    s = pockels_flip(s, "arm_v", LONG)
    s = pbs(s, "arm_h", OUT_1, OUT_2)
    s = pbs(s, "arm_v", OUT_2, OUT_1)
    trace.record("balanced_interferometer", s)
    s = delay_arm(delay_arm(s, OUT_1, "V"), OUT_2, "V")
    trace.record("unbalanced_interferometers", s)
    s = hwp_swap(hwp_swap(s, OUT_1), OUT_2)
    trace.record("output", s)
    return s, trace


def fig2_receiver(s: PhotonState, trace: SetupTrace | None = None) -> PhotonState:
    """Bob's reduced receiver acting on the state arriving from the fiber.

    Internally the cos(phi) branch leaves on port "2"; the returned state is
    relabeled so that it is on port "1", like the full receiver.  The raw
    labeling stays visible in the trace.
    """
    trace = trace if trace is not None else SetupTrace()
    s = pbs(s, CHANNEL_PORT, OUT_2, OUT_1)
    trace.record("bob_pbs", s)
    s = pockels_flip(s, OUT_1, SHORT)
    s = pockels_flip(s, OUT_2, LONG)
    trace.record("bob_pockels", s)
    s = delay_arm(delay_arm(s, OUT_1, "H"), OUT_2, "H")
    trace.record("unbalanced_interferometers", s)
    s = swap_ports(s, OUT_1, OUT_2)
    trace.record("output", s)
    return s


def run_fig2_corrector(q: PhotonState, p: ChannelParams) -> tuple[PhotonState, SetupTrace]:
    trace = SetupTrace()
    s = encode_alice(q)
    trace.record("alice_output", s)
    s = apply_channel(s, p)
    trace.record("channel_output", s)
    return fig2_receiver(s, trace), trace


def time_multiplex(state: ModeVector, from_port: str = OUT_2, into_port: str = OUT_1, delay_offset: int = 1):
    """Fold both corrector outputs onto one port, one imbalance unit apart."""
    return merge_ports(state, from_port, into_port, delay_offset)


def run_fig4_passive(
    field_in: tuple[complex, complex] | CoherentField, p: ChannelParams
) -> tuple[CoherentField, SetupTrace]:
    """Passive corrector for a two-mode coherent pulse ``|alpha, beta>``.

    The output keeps every slot, including Alice's unused coupler port
    (``"discard"``), so power bookkeeping closes exactly.  Output port "1"
    carries the sin(phi) branch and port "2" the cos(phi) branch.
    """
    if isinstance(field_in, CoherentField):
        f = field_in
        _require_fresh_qubit(f)
        port = next(iter(f.ports()))
    else:
        port = "in"
        f = CoherentField.single(*field_in, port=port)
    trace = SetupTrace()
    trace.record("alice_input", f)

    f = pbs(f, port, "short", "long")
    f = phase_shift(f, "short", -math.pi / 2)
    f = hwp_swap(f, "long")
    f = delay_arm(f, "long", "H")  # after the HWP the whole long-arm pulse is horizontal
    trace.record("alice_arms", f)
    f = coupler_50_50(f, ("short", "long"), (DISCARD_PORT, CHANNEL_PORT))
    trace.record("channel_input", f)
    f = apply_channel(f, p)
    trace.record("channel_output", f)
    f = pbs(f, CHANNEL_PORT, OUT_2, OUT_1)
    trace.record("bob_pbs", f)
    f = rotate(rotate(f, OUT_1, -math.pi / 4), OUT_2, math.pi / 4)
    trace.record("bob_rotators", f)
    f = delay_arm(delay_arm(f, OUT_1, "H"), OUT_2, "H")
    trace.record("output", f)
    return f, trace


def select_useful_pulse(f: CoherentField) -> CoherentField:
    """Keep only the corrected middle pulses (delay 1) on the output ports."""
    return f.restrict(lambda k: k.delay == 1 and k.port in (OUT_1, OUT_2))
