"""Stationary random birefringent fiber channel."""
from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from .components import apply_polarization_unitary

TWO_PI = 2 * math.pi
CHANNEL_PORT = "ch"


@dataclass(frozen=True)
class ChannelParams:
    """Phases ``lambda_phase``, ``xi_phase`` (wrapped to [0, 2pi)) and the
    mixing angle ``phi_mix`` (clamped to [0, pi/2])."""

    lambda_phase: float = 0.0
    xi_phase: float = 0.0
    phi_mix: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "lambda_phase", float(self.lambda_phase) % TWO_PI)
        object.__setattr__(self, "xi_phase", float(self.xi_phase) % TWO_PI)
        object.__setattr__(self, "phi_mix", min(max(float(self.phi_mix), 0.0), math.pi / 2))

    @classmethod
    def identity(cls) -> ChannelParams:
        return cls(0.0, 0.0, 0.0)


def channel_matrix(p: ChannelParams) -> np.ndarray:
    """SU(2) matrix whose first column is the fiber's action on |H>.

    Only ``U|H> = e^{i lambda} cos(phi)|H> + e^{i xi} sin(phi)|V>`` is fixed by
    the physics of the setups (every pulse enters the fiber horizontally);
    the second column is the unique SU(2) completion.
    """
    c, s = math.cos(p.phi_mix), math.sin(p.phi_mix)
    el = complex(math.cos(p.lambda_phase), math.sin(p.lambda_phase))
    ex = complex(math.cos(p.xi_phase), math.sin(p.xi_phase))
    return np.array(
        [[el * c, -ex.conjugate() * s], [ex * s, el.conjugate() * c]],
        dtype=complex,
    )


def apply_channel(state, p: ChannelParams, port: str | None = CHANNEL_PORT):
    """Apply the same U to every time bin on ``port`` (every port when None)."""
    return apply_polarization_unitary(state, port, channel_matrix(p))


@dataclass(frozen=True)
class ChannelDistribution:
    """Sampling law for :class:`ChannelParams`.

    Each field is either a fixed value or ``None`` for uniform sampling:
    phases over [0, 2pi), ``phi_mix`` over [0, pi/2].
    """

    lambda_phase: float | None = None
    xi_phase: float | None = None
    phi_mix: float | None = None

    @classmethod
    def fixed(cls, p: ChannelParams) -> ChannelDistribution:
        return cls(p.lambda_phase, p.xi_phase, p.phi_mix)

    @classmethod
    def from_mapping(cls, m: Mapping[str, object]) -> ChannelDistribution:
        """Build from ``{"phi": "uniform" | number, "lambda": ..., "xi": ...}``."""
        names = {"lambda": "lambda_phase", "xi": "xi_phase", "phi": "phi_mix"}
        kwargs = {}
        for key, value in m.items():
            if key not in names:
                raise KeyError(f"unknown channel parameter {key!r} (expected one of {sorted(names)})")
            if value is None or (isinstance(value, str) and value.strip().lower() == "uniform"):
                kwargs[names[key]] = None
            else:
                kwargs[names[key]] = float(value)
        return cls(**kwargs)

    def describe(self) -> dict[str, object]:
        return {
            "lambda": "uniform" if self.lambda_phase is None else self.lambda_phase,
            "xi": "uniform" if self.xi_phase is None else self.xi_phase,
            "phi": "uniform" if self.phi_mix is None else self.phi_mix,
        }


def sample_params(rng: np.random.Generator, config: ChannelDistribution | None = None) -> ChannelParams:
    """Draw one channel realization.

    Three uniforms are consumed on every call, fixed values or not, so the
    stream stays aligned across configurations.
    """
    config = config or ChannelDistribution()
    u_l, u_x, u_p = rng.random(3)
    lam = u_l * TWO_PI if config.lambda_phase is None else config.lambda_phase
    xi = u_x * TWO_PI if config.xi_phase is None else config.xi_phase
    phi = u_p * (math.pi / 2) if config.phi_mix is None else config.phi_mix
    return ChannelParams(lam, xi, phi)
