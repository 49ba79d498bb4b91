import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linqec.state import (
    ModeLabel,
    NormalizationError,
    PartitionError,
    PhotonState,
    StructureError,
    born_sample,
    cell_probabilities,
    equal_up_to_global_phase,
    new_qubit,
    overlap,
    postselect,
    tensor_with_eve,
)

from .helpers import random_state, seeds

R2 = 1 / math.sqrt(2)


def test_new_qubit_basis_states():
    h = new_qubit(1, 0)
    v = new_qubit(0, 1)
    assert h.terms == {ModeLabel("H", 0, "in"): 1}
    assert v.terms == {ModeLabel("V", 0, "in"): 1}


def test_new_qubit_plus_is_normalized():
    plus = new_qubit(R2, R2)
    assert abs(plus.norm2() - 1) < 1e-12
    assert len(plus) == 2


def test_new_qubit_rejects_unnormalized():
    with pytest.raises(NormalizationError):
        new_qubit(1, 1)


def test_zero_amplitudes_are_pruned():
    s = PhotonState({ModeLabel("H"): 1, ModeLabel("V"): 1e-17})
    assert s.labels() == [ModeLabel("H")]


def test_mixed_eve_structure_rejected():
    with pytest.raises(StructureError):
        PhotonState({ModeLabel("H"): R2, ModeLabel("V", eve="plus"): R2})


def test_overlap_examples():
    h, v, plus = new_qubit(1, 0), new_qubit(0, 1), new_qubit(R2, R2)
    assert overlap(plus, plus) == pytest.approx(1, abs=1e-12)
    assert overlap(h, v) == 0
    assert overlap(plus, h) == pytest.approx(R2, abs=1e-15)
    assert overlap(new_qubit(1j, 0), h) == pytest.approx(-1j)


def test_overlap_structure_mismatch():
    h = new_qubit(1, 0)
    with pytest.raises(StructureError):
        overlap(h, tensor_with_eve(h, 1, 0))


@given(seed=seeds, re=st.floats(-3, 3), im=st.floats(-3, 3))
def test_overlap_is_linear_in_second_argument(seed, re, im):
    rng = np.random.default_rng(seed)
    a, b = random_state(rng), random_state(rng)
    lam = complex(re, im)
    assert abs(overlap(a, b.scale(lam)) - lam * overlap(a, b)) < 1e-12
    assert abs(overlap(a.scale(lam), b) - lam.conjugate() * overlap(a, b)) < 1e-12


def test_global_phase_equality():
    s = new_qubit(0.6, 0.8j)
    assert equal_up_to_global_phase(s, s.scale(complex(math.cos(math.pi / 3), math.sin(math.pi / 3))))
    assert not equal_up_to_global_phase(new_qubit(1, 0), new_qubit(0, 1))
    assert not equal_up_to_global_phase(s, tensor_with_eve(s, 1, 0))


def test_postselect_examples():
    h = new_qubit(1, 0)
    prob, s = postselect(h, lambda k: k.pol == "H")
    assert prob == 1 and s == h
    prob, s = postselect(h, lambda k: k.pol == "V")
    assert prob == 0 and s is None


@settings(max_examples=50)
@given(seed=seeds)
def test_postselect_over_partition_sums_to_one(seed):
    s = random_state(np.random.default_rng(seed))
    total = sum(postselect(s, lambda k, p=p: k.port == p)[0] for p in ("in", "ch", "1", "2"))
    assert abs(total - 1) < 1e-12


def test_born_sample_single_cell():
    rng = np.random.default_rng(1)
    s = new_qubit(0.6, 0.8)
    for _ in range(20):
        cell, collapsed = born_sample(s, {"all": lambda k: True}, rng)
        assert cell == "all" and equal_up_to_global_phase(collapsed, s)


def test_born_sample_partition_must_cover():
    s = new_qubit(0.6, 0.8)
    with pytest.raises(PartitionError):
        born_sample(s, {"H": lambda k: k.pol == "H"}, np.random.default_rng(0))
    with pytest.raises(PartitionError):
        born_sample(s, {"a": lambda k: True, "b": lambda k: True}, np.random.default_rng(0))


def test_born_sample_plus_frequency():
    # binomial(n, 1/2): 3 sigma bound
    n = 100_000
    rng = np.random.default_rng(7)
    plus = new_qubit(R2, R2)
    hits = sum(born_sample(plus, lambda k: k.pol, rng)[0] == "H" for _ in range(n))
    assert abs(hits / n - 0.5) <= 3 * math.sqrt(0.25 / n)


def test_born_sample_matches_postselect_probabilities():
    n = 100_000
    rng = np.random.default_rng(11)
    s = random_state(np.random.default_rng(3), n_terms=5)
    probs = cell_probabilities(s, lambda k: k.port)
    counts = dict.fromkeys(probs, 0)
    for _ in range(n):
        counts[born_sample(s, lambda k: k.port, rng)[0]] += 1
    for cell, p in probs.items():
        assert p == pytest.approx(postselect(s, lambda k, c=cell: k.port == c)[0], abs=1e-15)
        assert abs(counts[cell] / n - p) <= 3 * math.sqrt(p * (1 - p) / n) + 1e-12


def test_tensor_with_eve():
    s = new_qubit(0.6, 0.8j)
    t = tensor_with_eve(s, 1, 0)
    assert all(k.eve == "plus" for k in t)
    assert t.norm2() == pytest.approx(1, abs=1e-12)
    c = s_ = math.sqrt(0.5)  # P_E = 0.25 gives C = S = sqrt(1/2)
    t = tensor_with_eve(s, c, s_)
    assert len(t) == 4 and t.norm2() == pytest.approx(1, abs=1e-12)
    with pytest.raises(StructureError):
        tensor_with_eve(t, 1, 0)
    with pytest.raises(NormalizationError):
        tensor_with_eve(s, 1, 1)


@given(seed=seeds, theta=st.floats(0, 2 * math.pi))
def test_tensor_preserves_norm(seed, theta):
    s = random_state(np.random.default_rng(seed))
    t = tensor_with_eve(s, math.cos(theta), 1j * math.sin(theta))
    assert abs(t.norm2() - s.norm2()) < 1e-12


def test_states_are_values():
    s = new_qubit(0.6, 0.8)
    terms = s.terms
    terms[ModeLabel("H")] = 0
    assert s.amplitude(ModeLabel("H")) == 0.6
    assert s == new_qubit(0.6, 0.8)
    assert hash(s) == hash(new_qubit(0.6, 0.8))
