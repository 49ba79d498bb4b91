"""Polarization BB84 over the corrected noisy channel, by Monte Carlo.

Each round: Alice picks one of H, V, +, -; the photon (optionally attacked)
runs through the fiber and the reduced corrector; Bob's detection port is
drawn by the Born rule and, on the key port, he measures in a random basis.
A round is sifted when the bases match and the photon left through the key
port.

Rounds are processed in fixed-size chunks, each with its own generator seeded
from ``(seed, chunk index)``, so results do not depend on the worker count.
"""
from __future__ import annotations

import csv
import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from ..channel import ChannelDistribution, sample_params
from ..setups import OUT_1, OUT_2, run_fig2_corrector, time_multiplex
from ..state import born_sample
from .fpb import ALICE_STATES, FpbConfig, eve_guess, eve_outcome_probabilities, fpb_entangle, to_measurement_basis

CHUNK_SIZE = 4096
BASES = ("rect", "diag")


@dataclass(frozen=True)
class TrialRecord:
    round: int
    alice_state: str
    alice_bit: int
    bob_basis: str
    phi_mix: float
    detected_port: str
    detected_delay: int
    bob_bit: int | None
    sifted: bool
    error: bool
    eve_guess: int | None


@dataclass(frozen=True)
class Bb84Stats:
    n_rounds: int
    n_sifted: int
    n_errors: int
    n_key_port: int
    n_eve_correct: int | None

    @property
    def sift_rate(self) -> float:
        return self.n_sifted / self.n_rounds

    @property
    def qber(self) -> float:
        return self.n_errors / self.n_sifted if self.n_sifted else math.nan

    @property
    def eve_success(self) -> float | None:
        if self.n_eve_correct is None or not self.n_sifted:
            return None
        return self.n_eve_correct / self.n_sifted

    @property
    def key_port_fraction(self) -> float:
        return self.n_key_port / self.n_rounds

    def metrics(self) -> dict[str, float | int | None]:
        qber = self.qber
        return {
            "n_rounds": self.n_rounds,
            "n_sifted": self.n_sifted,
            "n_errors": self.n_errors,
            "sift_rate": self.sift_rate,
            "qber": None if math.isnan(qber) else qber,
            "eve_success": self.eve_success,
            "key_port_fraction": self.key_port_fraction,
        }


def _bob_bit(pol: str) -> int:
    return 0 if pol == "H" else 1


def simulate_round(
    index: int,
    rng: np.random.Generator,
    cfg: FpbConfig | None,
    channel: ChannelDistribution,
    key_port: str = OUT_1,
    both_ports: bool = False,
) -> TrialRecord:
    alice = ALICE_STATES[int(rng.integers(4))]
    bob_basis = BASES[int(rng.integers(2))]
    params = sample_params(rng, channel)

    q = alice.qubit()
    if cfg is not None:
        q = fpb_entangle(q, cfg)
    out, _ = run_fig2_corrector(q, params)
    if both_ports:
        other = OUT_2 if key_port == OUT_1 else OUT_1
        out = time_multiplex(out, other, key_port)

    (port, delay), out = born_sample(out, lambda k: (k.port, k.delay), rng)
    bob_bit = guess = None
    sifted = error = False
    if port == key_port:
        measured = to_measurement_basis(out, bob_basis, port)
        pol, out = born_sample(measured, lambda k: k.pol, rng)
        bob_bit = _bob_bit(pol)
        sifted = bob_basis == alice.basis
        error = sifted and bob_bit != alice.bit
    if cfg is not None:
        p0, p1 = eve_outcome_probabilities(out)
        outcome = 0 if rng.random() * (p0 + p1) < p0 else 1
        guess = eve_guess(alice.basis, outcome)
    return TrialRecord(
        round=index,
        alice_state=alice.label,
        alice_bit=alice.bit,
        bob_basis=bob_basis,
        phi_mix=params.phi_mix,
        detected_port=port,
        detected_delay=delay,
        bob_bit=bob_bit,
        sifted=sifted,
        error=error,
        eve_guess=guess,
    )


def _run_chunk(args) -> list[TrialRecord]:
    seed, chunk, start, stop, cfg, channel, key_port, both_ports = args
    rng = np.random.default_rng([seed, chunk])
    return [simulate_round(i, rng, cfg, channel, key_port, both_ports) for i in range(start, stop)]


def summarize(records: Iterable[TrialRecord], key_port: str = OUT_1, with_eve: bool = False) -> Bb84Stats:
    n = sifted = errors = key = eve_ok = 0
    for r in records:
        n += 1
        key += r.detected_port == key_port
        if r.sifted:
            sifted += 1
            errors += r.error
            if r.eve_guess is not None:
                eve_ok += r.eve_guess == r.alice_bit
    return Bb84Stats(n, sifted, errors, key, eve_ok if with_eve else None)


def run_bb84(
    n_rounds: int,
    cfg: FpbConfig | None = None,
    channel_config: ChannelDistribution | None = None,
    seed: int = 0,
    *,
    key_port: str = OUT_1,
    both_ports: bool = False,
    workers: int = 1,
) -> tuple[Bb84Stats, list[TrialRecord]]:
    """Run ``n_rounds`` protocol rounds and return (statistics, per-round records)."""
    if n_rounds < 1:
        raise ValueError("n_rounds must be >= 1")
    channel_config = channel_config or ChannelDistribution()
    jobs = [
        (seed, c, start, min(start + CHUNK_SIZE, n_rounds), cfg, channel_config, key_port, both_ports)
        for c, start in enumerate(range(0, n_rounds, CHUNK_SIZE))
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_chunk, jobs))
    else:
        chunks = [_run_chunk(job) for job in jobs]
    records = [r for chunk in chunks for r in chunk]
    return summarize(records, key_port, with_eve=cfg is not None), records


CSV_COLUMNS = [f.name for f in fields(TrialRecord)]


def write_records_csv(records: Sequence[TrialRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for r in records:
            row = asdict(r)
            row["phi_mix"] = repr(r.phi_mix)
            writer.writerow({k: "" if v is None else v for k, v in row.items()})
