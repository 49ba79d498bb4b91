"""Linear optical components as mode rewrites and 2x2 polarization unitaries.

Every function takes a :class:`~linqec.state.PhotonState` or a
:class:`~linqec.field.CoherentField` and returns a new value of the same kind.
Ports that a component does not touch pass through unchanged.
"""
from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from .field import CoherentField
from .state import ModeLabel

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


def rotation_matrix(theta: float) -> np.ndarray:
    """R(theta) acting on (H, V) amplitude pairs."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def is_unitary(u: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(u.conj().T @ u - IDENTITY)) < tol)


def apply_polarization_unitary(state, port: str | None, u: np.ndarray, delay: int | None = None):
    """Apply ``u`` to the (H, V) pair of every slot on ``port`` (all ports if None).

    A slot is (delay, port, eve): the polarization unitary never touches the
    time bin or Eve's probe.
    """
    (u00, u01), (u10, u11) = u.tolist()
    out: dict[ModeLabel, complex] = {}
    done = set()
    for label, amp in state.items():
        if (port is not None and label.port != port) or (delay is not None and label.delay != delay):
            out[label] = out.get(label, 0j) + amp
            continue
        key = (label.delay, label.port, label.eve)
        if key in done:
            continue
        done.add(key)
        h = label.with_pol("H")
        v = label.with_pol("V")
        a_h, a_v = state.amplitude(h), state.amplitude(v)
        out[h] = out.get(h, 0j) + u00 * a_h + u01 * a_v
        out[v] = out.get(v, 0j) + u10 * a_h + u11 * a_v
    return type(state)._raw(out)


def pbs(state, in_port: str, out_port_H: str, out_port_V: str):
    """Polarizing beam splitter: H goes to ``out_port_H``, V to ``out_port_V``.

    Used with two inputs (one call per input port) it also models a
    recombining PBS.
    """
    def route(k: ModeLabel) -> ModeLabel:
        if k.port != in_port:
            return k
        return k.with_port(out_port_H if k.pol == "H" else out_port_V)

    return state.relabel(route)


def pockels_flip(state, port: str, delay_gate: int):
    """Time-gated H<->V exchange; only the ``delay_gate`` bin on ``port`` is flipped."""
    def flip(k: ModeLabel) -> ModeLabel:
        if k.port == port and k.delay == delay_gate:
            return k.flipped
        return k

    return state.relabel(flip)


def delay_arm(state, port: str, pol_taking_long_path: str, amount: int = 1):
    """Unbalanced polarization interferometer on ``port``.

    The designated polarization is delayed by ``amount`` imbalance units; the
    arms carry no extra phase.
    """
    def delay(k: ModeLabel) -> ModeLabel:
        if k.port == port and k.pol == pol_taking_long_path:
            return k.with_delay(k.delay + amount)
        return k

    return state.relabel(delay)


def rotate(state, port: str | None, theta: float):
    return apply_polarization_unitary(state, port, rotation_matrix(theta))


def hwp_swap(state, port: str | None):
    """Half-wave plate modeled as the signless H<->V swap."""
    def swap(k: ModeLabel) -> ModeLabel:
        if port is None or k.port == port:
            return k.flipped
        return k

    return state.relabel(swap)


def phase_shift(state, port: str, phi: float, pol: str | None = None):
    """Multiply every amplitude on ``port`` (optionally one polarization) by exp(i*phi)."""
    factor = complex(math.cos(phi), math.sin(phi))
    out = {
        k: a * factor if k.port == port and (pol is None or k.pol == pol) else a
        for k, a in state.items()
    }
    return type(state)._raw(out)


def coupler_50_50(field: CoherentField, in_ports: Sequence[str], out_ports: Sequence[str]) -> CoherentField:
    """Symmetric fiber coupler with T = 1/sqrt(2), R = i/sqrt(2).

    ``out1 = (in1 + i in2)/sqrt(2)``, ``out2 = (i in1 + in2)/sqrt(2)`` for each
    polarization and time slot.  A missing input is vacuum.
    """
    if not isinstance(field, CoherentField):
        raise TypeError(f"coupler_50_50 acts on coherent fields, got {type(field).__name__}")
    in1, in2 = in_ports
    out1, out2 = out_ports
    r = 1 / math.sqrt(2)
    out: dict[ModeLabel, complex] = {}
    seen = set()
    for label, amp in field.items():
        if label.port not in (in1, in2):
            out[label] = out.get(label, 0j) + amp
            continue
        key = (label.pol, label.delay)
        if key in seen:
            continue
        seen.add(key)
        a1 = field.amplitude(label.with_port(in1))
        a2 = field.amplitude(label.with_port(in2))
        k1, k2 = label.with_port(out1), label.with_port(out2)
        out[k1] = out.get(k1, 0j) + r * (a1 + 1j * a2)
        out[k2] = out.get(k2, 0j) + r * (1j * a1 + a2)
    return CoherentField._raw(out)


def merge_ports(state, from_port: str, into_port: str, delay_offset: int = 1):
    """Time multiplexing: an optical delay plus a switch folds one output onto another.

    Terms on ``from_port`` move to ``into_port`` delayed by ``delay_offset``.
    """
    def move(k: ModeLabel) -> ModeLabel:
        if k.port == from_port:
            return ModeLabel(k.pol, k.delay + delay_offset, into_port, k.eve)
        return k

    return state.relabel(move)


def swap_ports(state, a: str, b: str):
    def swap(k: ModeLabel) -> ModeLabel:
        if k.port == a:
            return k.with_port(b)
        if k.port == b:
            return k.with_port(a)
        return k

    return state.relabel(swap)

