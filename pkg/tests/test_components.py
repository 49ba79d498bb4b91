import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from linqec.components import (
    coupler_50_50,
    delay_arm,
    hwp_swap,
    is_unitary,
    merge_ports,
    pbs,
    phase_shift,
    pockels_flip,
    rotate,
    rotation_matrix,
)
from linqec.field import CoherentField
from linqec.state import ModeLabel, PhotonState, equal_up_to_global_phase, new_qubit

from .helpers import PORTS, angles, assert_state_close, random_state, seeds

R2 = 1 / math.sqrt(2)
L = ModeLabel

COMPONENTS = {
    "pbs": lambda s, rng: pbs(s, rng.choice(PORTS), "x", "y"),
    "pockels": lambda s, rng: pockels_flip(s, rng.choice(PORTS), int(rng.integers(3))),
    "delay": lambda s, rng: delay_arm(s, rng.choice(PORTS), rng.choice(["H", "V"])),
    "rotate": lambda s, rng: rotate(s, rng.choice(PORTS), rng.uniform(-7, 7)),
    "hwp": lambda s, rng: hwp_swap(s, rng.choice(PORTS)),
    "phase": lambda s, rng: phase_shift(s, rng.choice(PORTS), rng.uniform(-7, 7)),
}


@pytest.mark.parametrize("name", sorted(COMPONENTS))
def test_components_preserve_norm(name):
    rng = np.random.default_rng(abs(hash(name)) % 2**32)
    op = COMPONENTS[name]
    for _ in range(1000):
        s = random_state(rng, n_terms=int(rng.integers(1, 9)), eve=bool(rng.integers(2)))
        assert abs(op(s, rng).norm2() - s.norm2()) < 1e-12


def test_pbs_routes_polarizations():
    out = pbs(new_qubit(1, 0), "in", "a", "b")
    assert out.terms == {L("H", 0, "a"): 1}
    out = pbs(new_qubit(R2, R2), "in", "a", "b")
    assert out.terms == pytest.approx({L("H", 0, "a"): R2, L("V", 0, "b"): R2})
    assert out.norm2() == pytest.approx(1)


def test_pbs_ignores_other_ports():
    s = new_qubit(0.6, 0.8, port="elsewhere")
    assert pbs(s, "in", "a", "b") == s


def test_pockels_flip_on_gate():
    a, b = 0.6, 0.8j
    s = PhotonState({L("H", 0, "p"): a, L("V", 1, "p"): b})
    assert_state_close(pockels_flip(s, "p", 1), {L("H", 0, "p"): a, L("H", 1, "p"): b})
    assert pockels_flip(s, "p", 2) == s
    assert pockels_flip(s, "q", 1) == s


@given(seed=seeds, gate=st.integers(0, 2))
def test_involutions(seed, gate):
    rng = np.random.default_rng(seed)
    s = random_state(rng)
    port = PORTS[seed % len(PORTS)]
    assert pockels_flip(pockels_flip(s, port, gate), port, gate) == s
    assert hwp_swap(hwp_swap(s, port), port) == s


@given(seed=seeds, theta=angles)
def test_rotation_inverse(seed, theta):
    s = random_state(np.random.default_rng(seed))
    back = rotate(rotate(s, None, theta), None, -theta)
    for k in set(back) | set(s):
        assert abs(back.amplitude(k) - s.amplitude(k)) < 1e-12


def test_delay_arm():
    a, b = 0.6, 0.8j
    out = delay_arm(new_qubit(a, b), "in", "V")
    assert out.terms == {L("H", 0, "in"): a, L("V", 1, "in"): b}
    assert delay_arm(new_qubit(1, 0), "in", "V") == new_qubit(1, 0)


def test_rotation_examples():
    assert rotate(new_qubit(0.6, 0.8j), "in", 0) == new_qubit(0.6, 0.8j)
    assert_state_close(rotate(new_qubit(1, 0), "in", math.pi / 4), {L("H"): R2, L("V"): R2})
    alpha, theta = 1.3 - 0.4j, 0.37
    f = rotate(CoherentField.single(alpha, 0), "in", theta)
    assert f.slot(0, "in") == pytest.approx((alpha * math.cos(theta), alpha * math.sin(theta)))
    assert is_unitary(rotation_matrix(theta))


def test_hwp_swap():
    assert hwp_swap(new_qubit(1, 0), "in") == new_qubit(0, 1)
    s = new_qubit(0.6, -0.8j)
    assert hwp_swap(s, "in").terms == {L("V"): 0.6, L("H"): -0.8j}


def test_coupler_examples():
    alpha = 0.9 + 0.3j
    f = coupler_50_50(CoherentField.single(alpha, 0, port="a"), ("a", "b"), ("c", "d"))
    assert f.slot(0, "c") == pytest.approx((alpha * R2, 0))
    assert f.slot(0, "d") == pytest.approx((1j * alpha * R2, 0))
    empty = coupler_50_50(CoherentField(), ("a", "b"), ("c", "d"))
    assert empty.power() == 0


@given(seed=seeds)
def test_coupler_conserves_power(seed):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=8) + 1j * rng.normal(size=8)
    slots = {(d, p): (amps[2 * i], amps[2 * i + 1]) for i, (d, p) in enumerate([(0, "a"), (0, "b"), (1, "a"), (2, "b")])}
    f = CoherentField.from_slots(slots)
    g = coupler_50_50(f, ("a", "b"), ("c", "d"))
    assert abs(g.power() - f.power()) < 1e-12 * max(1, f.power())


def test_coupler_rejects_photons():
    with pytest.raises(TypeError):
        coupler_50_50(new_qubit(1, 0), ("in", "x"), ("c", "d"))


def test_phase_shift():
    alpha = 0.7 + 0.2j
    f = CoherentField.single(alpha, 0)
    assert phase_shift(f, "in", 0) == f
    g = phase_shift(f, "in", -math.pi / 2)
    assert g.slot(0, "in")[0] == pytest.approx(-1j * alpha, abs=1e-15)
    s = new_qubit(0.6, 0.8j)
    twice = phase_shift(phase_shift(s, "in", 0.3), "in", 1.1)
    once = phase_shift(s, "in", 1.4)
    assert_state_close(twice, once.terms)


@given(seed=seeds, phi=angles)
def test_delay_commutes_with_phase_on_other_port(seed, phi):
    s = random_state(np.random.default_rng(seed))
    a = phase_shift(delay_arm(s, "1", "V"), "2", phi)
    b = delay_arm(phase_shift(s, "2", phi), "1", "V")
    assert a == b


def test_merge_ports():
    s = PhotonState({L("H", 1, "1"): 0.6, L("V", 1, "2"): 0.8})
    m = merge_ports(s, "2", "1", 1)
    assert m.terms == {L("H", 1, "1"): 0.6, L("V", 2, "1"): 0.8}
    assert equal_up_to_global_phase(merge_ports(s, "2", "1", 0), PhotonState({L("H", 1, "1"): 0.6, L("V", 1, "1"): 0.8}))
