"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import json
import math
import statistics
import time

import numpy as np
import pytest

from conftest import record_acceptance
from jsynth.circuit import evaluate
from jsynth.cli import main
from jsynth.formats import format_complex, write_matrix
from jsynth.gates import SIGMA, JGate, approx_block_sigma, exchange_conjugate, j_power
from jsynth.hypersphere import build_pole_map, from_coords, to_coords
from jsynth.kronecker import KroneckerQuery, default_constants, find_power
from jsynth.numerics import I2, I4, blockdiag, haar_unitary, op_norm_dist, phase_aligned_dist, random_state
from jsynth.synthesis import eigenfactor_matrix, factor_eigen, synth_blockdiag, synth_unitary

SLACK = 1e-9


def _unit_vectors():
    """1000 fixed-seed unit vectors, the last 60 with third component exactly 0."""
    rng = np.random.default_rng(2024)
    vs = [random_state(rng) for _ in range(940)]
    for k in range(60):
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        v[2] = 0
        if k % 4 == 1:
            v[3] = 0
        if k % 6 == 2:
            v[[1, 3]] = 0
        vs.append(v / np.linalg.norm(v))
    return vs


def test_universality_suite(tmp_path, capsys):
    rng = np.random.default_rng(1)
    worst_time, worst_gap, failures = 0.0, -math.inf, 0
    for k in range(20):
        target = tmp_path / f"t{k}.txt"
        out = tmp_path / f"r{k}.json"
        write_matrix(str(target), haar_unitary(rng))
        t0 = time.perf_counter()
        code = main(["synth", "--target", str(target), "--eps-step", "5e-3", "--out", str(out)])
        elapsed = time.perf_counter() - t0
        rep = json.loads(out.read_text())
        worst_time = max(worst_time, elapsed)
        gap = rep["measured_error"] - rep["total_budget"]
        worst_gap = max(worst_gap, gap)
        failures += code != 0 or elapsed > 60 or gap > SLACK
    capsys.readouterr()
    ok = record_acceptance("1 universality", failures == 0,
                           f"max time {worst_time:.2f}s, max(measured - budget) {worst_gap:.3g}")
    assert ok


def test_kronecker_suite():
    rng = np.random.default_rng(2)
    alphas = default_constants()
    times, hits = [], 0
    for _ in range(100):
        q = KroneckerQuery(alphas, rng.uniform(0, 2 * math.pi, 2), 1e-2, 10**8)
        t0 = time.perf_counter()
        r = find_power(q)
        times.append(time.perf_counter() - t0)
        hits += (not r.exhausted) and r.m <= 10**8 and r.max_error < 1e-2
    med = statistics.median(times)
    ok = record_acceptance("2 kronecker", hits == 100 and med <= 1.0,
                           f"{hits}/100 hits, median {med * 1000:.1f} ms")
    assert ok


def test_block_sigma_power():
    res = approx_block_sigma(1e-2)
    j3 = j_power(JGate.default(), res.m)
    err = op_norm_dist(j3, blockdiag(SIGMA, I2))
    err4 = op_norm_dist(np.linalg.matrix_power(j3, 4), I4)
    ok = record_acceptance("3 block sigma power", err <= 2e-2 and err4 <= 8e-2,
                           f"m3 = {res.m}, error {err:.3g}, fourth power {err4:.3g}")
    assert ok


def test_hypersphere_round_trip():
    vs = _unit_vectors()
    degenerate = sum(1 for v in vs if v[2] == 0)
    worst = 0.0
    for v in vs:
        c, gauge = to_coords(v)
        worst = max(worst, float(np.abs(from_coords(c) - np.exp(-1j * gauge) * v).max()))
    ok = record_acceptance("4 round trip", worst <= 1e-12 and degenerate >= 50 and len(vs) == 1000,
                           f"worst {worst:.2g}, {degenerate} degenerate")
    assert ok


def test_pole_mapping():
    worst_zero, worst_mod = 0.0, 0.0
    for v in _unit_vectors():
        image = build_pole_map(v).r @ v
        worst_zero = max(worst_zero, float(np.abs(image[:3]).max()))
        worst_mod = max(worst_mod, abs(abs(image[3]) - 1))
    ok = record_acceptance("5 pole mapping", worst_zero <= 1e-10 and worst_mod <= 1e-10,
                           f"zeroing {worst_zero:.2g}, modulus {worst_mod:.2g}")
    assert ok


def test_block_diagonal_closure():
    rng = np.random.default_rng(6)
    worst_gap = -math.inf
    for _ in range(50):
        u, v = haar_unitary(rng, 2), haar_unitary(rng, 2)
        seq = synth_blockdiag(u, v, 5e-3)
        gap = phase_aligned_dist(evaluate(seq), blockdiag(u, v)) - seq.total_budget
        worst_gap = max(worst_gap, gap)
    empty = len(synth_blockdiag(I2, I2, 5e-3)) == 0
    ok = record_acceptance("6 block-diagonal closure", worst_gap <= SLACK and empty,
                           f"max(measured - budget) {worst_gap:.3g}, identity empty {empty}")
    assert ok


def test_exchange_identity():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        a, b = np.exp(1j * rng.uniform(0, 2 * math.pi, 2))
        d = np.diag([a, b])
        direct = SIGMA @ d @ np.linalg.inv(SIGMA)
        worst = max(worst, float(np.abs(direct - np.diag([b, a])).max()),
                    float(np.abs(exchange_conjugate(d) - np.diag([b, a])).max()))
    ok = record_acceptance("7 exchange identity", worst <= 1e-15, f"worst {worst:.2g}")
    assert ok


def test_eigenfactor_reconstruction():
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(100):
        g = haar_unitary(rng)
        factors = [eigenfactor_matrix(v, eta) for v, eta in factor_eigen(g)]
        for order in ([0, 1, 2, 3], [3, 2, 1, 0], list(rng.permutation(4))):
            prod = I4
            for k in order:
                prod = prod @ factors[k]
            worst = max(worst, float(np.abs(prod - g).max()))
    ok = record_acceptance("8 eigenfactor reconstruction", worst <= 1e-9, f"worst {worst:.2g}")
    assert ok


def test_state_preparation(tmp_path, capsys):
    rng = np.random.default_rng(9)
    worst_budget, failures = 0.0, 0
    for k in range(100):
        state = tmp_path / f"s{k}.txt"
        state.write_text(" ".join(format_complex(z) for z in random_state(rng)) + "\n")
        out = tmp_path / f"p{k}.json"
        code = main(["prepare", "--state", str(state), "--eps-step", "5e-3", "--out", str(out)])
        rep = json.loads(out.read_text())
        worst_budget = max(worst_budget, rep["total_budget"])
        failures += code != 0 or rep["fidelity"] < 1 - rep["total_budget"] or rep["total_budget"] > 0.2
    capsys.readouterr()
    ok = record_acceptance("9 state preparation", failures == 0,
                           f"max budget {worst_budget:.3g}, {failures} failures")
    assert ok


def test_bench_determinism(tmp_path, capsys):
    outs = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        main(["bench", "--trials", "3", "--eps-step", "1e-2,5e-3", "--seed", "42", "--out", str(path)])
        outs.append(path.read_bytes())
    capsys.readouterr()
    ok = record_acceptance("10 determinism", outs[0] == outs[1] and outs[0].count(b"\n") == 7,
                           f"{len(outs[0])} bytes")
    assert ok


def test_monotone_refinement():
    rng = np.random.default_rng(11)
    pairs = []
    for _ in range(5):
        g = haar_unitary(rng)
        pairs.append((synth_unitary(g, 1e-2).measured_error, synth_unitary(g, 1e-3).measured_error))
    ok = record_acceptance("11 monotone refinement", all(fine <= coarse for coarse, fine in pairs),
                           ", ".join(f"{c:.3g}->{f:.3g}" for c, f in pairs))
    assert ok
