import math

import numpy as np
from hypothesis import strategies as st

from linqec.channel import ChannelParams
from linqec.state import ModeLabel, PhotonState, new_qubit

PORTS = ("in", "ch", "1", "2")


def random_qubit(rng) -> PhotonState:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    return new_qubit(complex(v[0]), complex(v[1]))


def random_params(rng) -> ChannelParams:
    lam, xi = rng.uniform(0, 2 * math.pi, size=2)
    return ChannelParams(lam, xi, rng.uniform(0, math.pi / 2))


def random_state(rng, n_terms=6, eve=False) -> PhotonState:
    """Normalized state over a random subset of (pol, delay, port[, eve]) modes."""
    pool = [
        ModeLabel(pol, d, port, e)
        for pol in "HV"
        for d in range(3)
        for port in PORTS
        for e in (("plus", "minus") if eve else (None,))
    ]
    idx = rng.choice(len(pool), size=min(n_terms, len(pool)), replace=False)
    amps = rng.normal(size=len(idx)) + 1j * rng.normal(size=len(idx))
    amps /= np.linalg.norm(amps)
    return PhotonState({pool[i]: complex(a) for i, a in zip(idx, amps)})


def assert_state_close(actual, expected: dict, tol=1e-12):
    """Amplitude-wise comparison against a hand-written {label: amplitude} dict."""
    labels = set(actual.labels()) | {k for k, v in expected.items() if abs(v) > 0}
    for k in labels:
        a, e = actual.amplitude(k), expected.get(k, 0j)
        assert abs(a - e) <= tol, f"{k}: got {a}, expected {e}"


def eiphase(x):
    return complex(math.cos(x), math.sin(x))


seeds = st.integers(min_value=0, max_value=2**32 - 1)
angles = st.floats(min_value=-10, max_value=10, allow_nan=False)
