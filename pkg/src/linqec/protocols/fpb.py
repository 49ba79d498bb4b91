"""Fuchs-Peres-Brandt individual attack.

Eve's probe lives in the basis ``|+>, |->`` with ``|+-> = (|0> +- |1>)/sqrt(2)``
where ``{|0>, |1>}`` is her measurement basis, tilted by pi/8 from H/V.
Internally the probe is stored by its (plus, minus) components, so a probe
state is just a complex pair.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..channel import ChannelParams
from ..components import rotate
from ..setups import OUT_1, OUT_2, SetupTrace, run_fig2_corrector
from ..state import ModeLabel, PhotonState, new_qubit, postselect

INV_SQRT2 = 1 / math.sqrt(2)
EVE_BASIS_ANGLE = math.pi / 8


class AliceState(Enum):
    """The four BB84 polarization states with their basis and bit value."""

    H = ("rect", 0, (1.0, 0.0))
    V = ("rect", 1, (0.0, 1.0))
    PLUS = ("diag", 0, (INV_SQRT2, INV_SQRT2))
    MINUS = ("diag", 1, (INV_SQRT2, -INV_SQRT2))

    def __init__(self, basis, bit, amplitudes):
        self.basis = basis
        self.bit = bit
        self.amplitudes = amplitudes

    @property
    def label(self) -> str:
        return {"H": "H", "V": "V", "PLUS": "plus", "MINUS": "minus"}[self.name]

    @classmethod
    def from_label(cls, label: str) -> AliceState:
        return {"H": cls.H, "V": cls.V, "plus": cls.PLUS, "+": cls.PLUS, "minus": cls.MINUS, "-": cls.MINUS}[label]

    @property
    def orthogonal(self) -> AliceState:
        return {AliceState.H: AliceState.V, AliceState.V: AliceState.H,
                AliceState.PLUS: AliceState.MINUS, AliceState.MINUS: AliceState.PLUS}[self]

    def qubit(self, port: str = "in") -> PhotonState:
        return new_qubit(*self.amplitudes, port=port)

    @property
    def tagged_plus(self) -> bool:
        """Whether the undisturbed branch leaves Eve's probe in T+ (else T-)."""
        return self in (AliceState.V, AliceState.PLUS)


ALICE_STATES = tuple(AliceState)


@dataclass(frozen=True)
class FpbConfig:
    """Eve's disturbance ``p_e`` (the error probability she causes), in [0, 0.5]."""

    p_e: float

    def __post_init__(self):
        if not (0.0 <= self.p_e <= 0.5) or math.isnan(self.p_e):
            raise ValueError(f"p_e = {self.p_e!r} outside the valid range [0, 0.5]")

    @property
    def c(self) -> float:
        return math.sqrt(1 - 2 * self.p_e)

    @property
    def s(self) -> float:
        return math.sqrt(2 * self.p_e)

    @property
    def probe(self) -> tuple[float, float]:
        """Eve's initial probe C|+> + S|->."""
        return (self.c, self.s)

    @property
    def t_plus(self) -> tuple[float, float]:
        return (self.c, self.s * INV_SQRT2)

    @property
    def t_minus(self) -> tuple[float, float]:
        return (self.c, -self.s * INV_SQRT2)

    @property
    def t_e(self) -> tuple[float, float]:
        return (0.0, self.s * INV_SQRT2)

    @property
    def basis_angle(self) -> float:
        return EVE_BASIS_ANGLE


def eve_measurement_basis() -> tuple[np.ndarray, np.ndarray]:
    """Eve's ``|0>, |1>`` as (H, V) vectors of her photon."""
    c, s = math.cos(EVE_BASIS_ANGLE), math.sin(EVE_BASIS_ANGLE)
    return np.array([c, s]), np.array([-s, c])


def fpb_entangle(alice: PhotonState, cfg: FpbConfig) -> PhotonState:
    """Eve's entangling unitary applied to the photon and her probe.

    Defined on the H/V basis by ``|H>|e> -> |H>|T-> + |V>|T_E>`` and
    ``|V>|e> -> |V>|T+> + |H>|T_E>``, extended linearly.  On the diagonal
    states this gives ``|+>|T+> - |->|T_E>`` and ``|->|T-> - |+>|T_E>``.
    """
    if alice.entangled:
        raise ValueError("photon is already entangled with a probe")
    tm, tp, te = cfg.t_minus, cfg.t_plus, cfg.t_e
    out: dict[ModeLabel, complex] = {}

    def add(label: ModeLabel, amp: complex, vec: tuple[float, float]) -> None:
        for eve, coeff in zip(("plus", "minus"), vec):
            k = label.with_eve(eve)
            out[k] = out.get(k, 0j) + amp * coeff

    for label, amp in alice.items():
        other = label.flipped
        add(label, amp, tm if label.pol == "H" else tp)
        add(other, amp, te)
    return PhotonState._raw(out)


def fpb_eve_success_probability(p_e: float) -> float:
    """Probability that Eve's measurement yields Alice's bit: 0.5(1 + sqrt(2) C S)."""
    cfg = FpbConfig(p_e)
    return 0.5 * (1 + math.sqrt(2) * cfg.c * cfg.s)


def to_measurement_basis(state: PhotonState, basis: str, port: str | None = None) -> PhotonState:
    """Rotate so that the basis states of ``basis`` become H (bit 0) and V (bit 1)."""
    if basis == "rect":
        return state
    return rotate(state, port, -math.pi / 4)


def error_mass(state: PhotonState, alice: AliceState) -> float:
    """Squared norm of the component orthogonal to Alice's polarization."""
    s = to_measurement_basis(state, alice.basis)
    wrong = "V" if alice.bit == 0 else "H"
    return math.fsum(abs(a) ** 2 for k, a in s.items() if k.pol == wrong)


def eve_outcome_probabilities(state: PhotonState) -> tuple[float, float]:
    """Born probabilities of Eve's outcomes 0 and 1 (unnormalized if ``state`` is)."""
    slots: dict[tuple, list[complex]] = {}
    for k, a in state.items():
        pair = slots.setdefault((k.pol, k.delay, k.port), [0j, 0j])
        pair[0 if k.eve == "plus" else 1] += a
    p0 = math.fsum(abs(ap + am) ** 2 / 2 for ap, am in slots.values())
    p1 = math.fsum(abs(ap - am) ** 2 / 2 for ap, am in slots.values())
    return p0, p1


def eve_guess(alice_basis: str, outcome: int) -> int:
    """Map Eve's outcome to a bit guess once the basis is public.

    Outcome 0 is favoured when her probe was left in T+ (Alice sent V or +),
    outcome 1 when it was left in T- (H or -).
    """
    if alice_basis == "rect":
        return 1 if outcome == 0 else 0
    return 0 if outcome == 0 else 1


def fpb_through_corrector(
    alice_choice: AliceState | str, cfg: FpbConfig, p: ChannelParams
) -> tuple[PhotonState, SetupTrace]:
    """Attack near Alice, then the fiber and the reduced corrector.

    Eve decodes Alice's time-bin pulse perfectly, entangles her probe and
    re-encodes, which is the same as entangling before Alice's encoder.
    The trace starts with the attacked polarization qubit.
    """
    if isinstance(alice_choice, str):
        alice_choice = AliceState.from_label(alice_choice)
    joint = fpb_entangle(alice_choice.qubit(), cfg)
    out, trace = run_fig2_corrector(joint, p)
    trace.stages.insert(0, ("attacked_qubit", joint))
    return out, trace


def port_conditional_error(out: PhotonState, alice: AliceState, port: str) -> float:
    """Error probability given that the photon left through ``port``."""
    prob, cond = postselect(out, lambda k: k.port == port)
    if cond is None:
        return math.nan
    return error_mass(cond, alice)


def conditional_qbers(out: PhotonState, alice: AliceState) -> dict[str, float]:
    return {port: port_conditional_error(out, alice, port) for port in (OUT_1, OUT_2)}
