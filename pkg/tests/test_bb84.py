import csv
import math

import pytest

from linqec.channel import ChannelDistribution
from linqec.protocols.bb84 import CHUNK_SIZE, CSV_COLUMNS, run_bb84, summarize, write_records_csv
from linqec.protocols.fpb import FpbConfig, fpb_eve_success_probability


def within_3_sigma(value, p, n):
    return abs(value - p) <= 3 * math.sqrt(p * (1 - p) / n)


def test_no_eve_statistics():
    stats, records = run_bb84(20_000, seed=1)
    assert stats.n_rounds == len(records) == 20_000
    assert within_3_sigma(stats.sift_rate, 0.25, stats.n_rounds)
    assert stats.n_errors == 0 and stats.qber == 0
    assert stats.eve_success is None


def test_with_eve_statistics():
    stats, _ = run_bb84(20_000, FpbConfig(0.25), seed=2)
    assert within_3_sigma(stats.qber, 0.25, stats.n_sifted)
    assert within_3_sigma(stats.eve_success, fpb_eve_success_probability(0.25), stats.n_sifted)


def test_fixed_channel_routes_everything_to_key_port():
    stats, _ = run_bb84(2_000, channel_config=ChannelDistribution(phi_mix=0.0), seed=3)
    assert stats.key_port_fraction == 1
    assert within_3_sigma(stats.sift_rate, 0.5, stats.n_rounds)


def test_both_ports_doubles_sift_rate():
    stats, records = run_bb84(10_000, seed=4, both_ports=True)
    assert within_3_sigma(stats.sift_rate, 0.5, stats.n_rounds)
    assert stats.qber == 0
    assert {r.detected_port for r in records} == {"1"}
    assert {r.detected_delay for r in records} == {1, 2}


def test_key_port_2():
    stats, records = run_bb84(5_000, seed=5, key_port="2")
    assert all(r.detected_port == "2" for r in records if r.sifted)
    assert stats.qber == 0


def test_record_invariants():
    _, records = run_bb84(3_000, FpbConfig(0.1), seed=6)
    for r in records:
        assert not r.error or r.sifted
        assert (r.bob_bit is None) == (r.detected_port != "1")
        assert r.eve_guess in (0, 1)
        assert 0 <= r.phi_mix <= math.pi / 2


def test_same_seed_same_records():
    a = run_bb84(1_000, FpbConfig(0.2), seed=7)[1]
    b = run_bb84(1_000, FpbConfig(0.2), seed=7)[1]
    c = run_bb84(1_000, FpbConfig(0.2), seed=8)[1]
    assert a == b and a != c


def test_workers_do_not_change_results():
    n = 2 * CHUNK_SIZE + 17
    serial = run_bb84(n, FpbConfig(0.25), seed=9, workers=1)
    parallel = run_bb84(n, FpbConfig(0.25), seed=9, workers=3)
    assert serial == parallel


def test_summarize_matches_stats():
    stats, records = run_bb84(2_000, FpbConfig(0.3), seed=10)
    assert summarize(records, with_eve=True) == stats


def test_rejects_empty_run():
    with pytest.raises(ValueError):
        run_bb84(0)


def test_csv_export(tmp_path):
    _, records = run_bb84(50, FpbConfig(0.1), seed=11)
    path = tmp_path / "rounds.csv"
    write_records_csv(records, path)
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == CSV_COLUMNS
    assert len(rows) == 50
    assert float(rows[3]["phi_mix"]) == records[3].phi_mix
