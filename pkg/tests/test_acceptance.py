"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Every tolerance is pinned here; a red criterion means the contract is not
met, never that the bar moved.
"""

import math
import time

import mpmath as mp
import numpy as np
import pytest

from v2vsec.channel import FadingModel, PowerBudget, awgn_capacity, db_to_linear
from v2vsec.cli import main
from v2vsec.ergodic import (
    ErgodicSpec,
    constant_power_capacity,
    draw_channel_states,
    estimate_on_states,
)
from v2vsec.kinematics import VehicleState, kmh_to_ms, safety_distance_full
from v2vsec.protocol import (
    LinkScenario,
    RelayCandidate,
    select_relay,
)
from v2vsec.scenario import load_scenario, run_protocol_trace, trace_to_csv
from v2vsec.secrecy import (
    LinkGeometry,
    RelayConfig,
    WiretapNoise,
    fading_secrecy,
    gaussian_wiretap,
    geometric_secrecy,
    relay_secrecy,
    velocity_secrecy,
)
from v2vsec.sweeps import read_sweep_csv


def _report(capsys, num, name, ok, elapsed, limit):
    status = "PASS" if ok and elapsed < limit else "FAIL"
    with capsys.disabled():
        print(f"[criterion {num}] {status}: {name} ({elapsed:.2f}s, limit {limit:g}s)")
    assert ok
    assert elapsed < limit


def test_criterion_1_speed_ordering(capsys):
    t0 = time.perf_counter()
    pn0 = db_to_linear(70.0)
    vtau = [
        velocity_secrecy(pn0, 1.0, kmh_to_ms(kmh), 0.2, 1000.0, 3.5).clamped
        for kmh in (80.0, 100.0, 120.0)
    ]
    theta_variant = geometric_secrecy(pn0, 1.0, LinkGeometry(r=1000.0, theta=0.1), 3.5).clamped
    ok = vtau[0] > vtau[1] > vtau[2] and theta_variant >= 0.0
    _report(capsys, 1, "clamped capacity falls 80 > 100 > 120 km/h (d = v*tau variant)",
            ok, time.perf_counter() - t0, 1.0)


def test_criterion_2_parameter_monotonicity(capsys):
    t0 = time.perf_counter()
    speeds = np.linspace(5.0, 50.0, 100)
    alphas = (1.4, 2.0, 4.0)
    pn0_dbs = (40.0, 50.0, 60.0, 70.0)
    taus = (0.1, 0.2, 0.4)
    r = 1000.0

    raw = np.empty((len(speeds), len(alphas), len(pn0_dbs), len(taus)))
    for i, v in enumerate(speeds):
        for j, alpha in enumerate(alphas):
            for k, pn0_db in enumerate(pn0_dbs):
                for l, tau in enumerate(taus):
                    assert v * tau < r
                    raw[i, j, k, l] = velocity_secrecy(
                        db_to_linear(pn0_db), 1.0, v, tau, r, alpha
                    ).raw
    violations = (
        int(np.sum(np.diff(raw, axis=0) >= 0))   # decreasing in v
        + int(np.sum(np.diff(raw, axis=2) <= 0))  # increasing in P/N0
        + int(np.sum(np.diff(raw, axis=3) >= 0))  # decreasing in tau
    )
    _report(capsys, 2, f"speed/power/tau monotonicity on 3600-cell grid ({violations} violations)",
            violations == 0, time.perf_counter() - t0, 5.0)


def test_criterion_3_reduction_identities(capsys):
    t0 = time.perf_counter()
    ok = True

    ok &= geometric_secrecy(1e6, 1.0, LinkGeometry(r=777.0, theta=1.0), 2.3).raw == 0.0
    ok &= gaussian_wiretap(42.0, WiretapNoise(n_m=3.0, n_w=3.0)).raw == 0.0

    rng = np.random.default_rng(31)
    for _ in range(25):
        p = float(rng.uniform(0.5, 1e6))
        n0 = float(rng.uniform(0.1, 10.0))
        x, y = float(rng.uniform(0.0, 3.0)), float(rng.uniform(0.0, 3.0))
        off = relay_secrecy(
            RelayConfig(p_a=p, p_r=0.0, h_ab=x * x, h_rb=0.4, h_ae=y * y, h_re=0.6,
                        sigma_b2=n0, sigma_e2=n0, w=1.0)
        ).raw
        ref = fading_secrecy(p, n0, x, y).raw
        ok &= abs(off - ref) <= 1e-12 * max(abs(ref), 1e-300)

        v = float(rng.uniform(1.0, 50.0))
        a = float(rng.uniform(1.0, 10.0))
        tau = float(rng.uniform(0.05, 1.0))
        state = VehicleState(speed=v, accel=a)
        full = safety_distance_full(state, state, tau)
        ok &= abs(full - v * tau) <= 1e-12 * (v * tau)

    _report(capsys, 3, "reduction identities hold to 1e-12 relative",
            ok, time.perf_counter() - t0, 1.0)


def _mp_velocity_secrecy(p, n0, v, tau, r, alpha):
    d = mp.mpf(v) * mp.mpf(tau)
    twoa = 2 * mp.mpf(alpha)
    snr_b = mp.mpf(p) / (mp.mpf(n0) * d**twoa)
    snr_e = mp.mpf(p) / (mp.mpf(n0) * mp.mpf(r) ** twoa)
    return (mp.log(1 + snr_b) - mp.log(1 + snr_e)) / mp.log(2)


def test_criterion_4_arbitrary_precision_oracle(capsys):
    t0 = time.perf_counter()
    mp.mp.dps = 40
    rng = np.random.default_rng(97)
    worst = 0.0
    for _ in range(1000):
        v = float(rng.uniform(5.0, 50.0))
        tau = float(rng.uniform(0.05, 0.5))
        r = float(rng.uniform(500.0, 5000.0))
        alpha = float(rng.uniform(1.0, 4.0))
        p = db_to_linear(float(rng.uniform(30.0, 80.0)))
        got = velocity_secrecy(p, 1.0, v, tau, r, alpha).raw
        want = float(_mp_velocity_secrecy(p, 1.0, v, tau, r, alpha))
        worst = max(worst, abs(got - want) / abs(want))
    hand = velocity_secrecy(db_to_linear(70.0), 1.0, 22.22, 0.2, 1000.0, 1.4).raw
    ok = worst < 1e-9 and f"{hand:.4g}" == "17.17"
    _report(capsys, 4, f"1000-tuple oracle cross-check (worst rel err {worst:.1e})",
            ok, time.perf_counter() - t0, 10.0)


def test_criterion_5_ergodic_estimator(capsys):
    t0 = time.perf_counter()
    ok = True
    detail = []
    for p_db in range(6, 25, 2):
        p = db_to_linear(float(p_db))
        spec = ErgodicSpec(legit_fading=FadingModel.rayleigh(), p_budget=p, n_samples=100_000)
        a, b = draw_channel_states(spec)
        res = estimate_on_states(a, b, p)
        awgn = awgn_capacity(PowerBudget(p_linear=p, n0_linear=1.0), 1.0)
        jensen = res.capacity - awgn <= res.ci_halfwidth
        power = abs(res.achieved_avg_power - p) / p <= 0.01
        beats = res.capacity >= constant_power_capacity(a, b, p)
        ok &= jensen and power and beats
        if not (jensen and power and beats):
            detail.append(f"{p_db}dB j={jensen} p={power} b={beats}")
    _report(capsys, 5, "ergodic: Jensen bound, 1% power budget, beats constant baseline"
            + ("; " + "; ".join(detail) if detail else ""),
            ok, time.perf_counter() - t0, 60.0)


ACCEL_SCENARIO = """\
[link]
r_m = 1000
alpha = 1.4
tau_s = 0.2
pn0_db = 70

[thresholds]
band.0 = 0, inf, 16.0

[csi]
{lines}
"""


def _scenario_text(index):
    """One of 50 deterministic scenario files spanning the decision modes."""
    rng = np.random.default_rng(1_000 + index)
    r = float(rng.uniform(200.0, 2000.0))
    alpha = float(rng.choice([1.4, 2.0, 2.5]))
    tau_ms = int(rng.choice([100, 200, 400]))
    pn0_db = int(rng.choice([50, 60, 70]))
    threshold = float(rng.uniform(2.0, 14.0))
    speeds = np.round(rng.uniform(6.0, 45.0, size=rng.integers(5, 20)), 2)
    lines = "\n".join(
        f"line.{i} = CSI1|B|{i + 1}|{i * 100}|23|-60|-90|30|{s}"
        for i, s in enumerate(speeds)
    )
    relay = ""
    if index % 2 == 0:
        relay = (
            f"\n[relay.jam]\nh_rb = {rng.uniform(0, 0.05):.4g}\n"
            f"h_re = {rng.uniform(0.5, 2.0):.4g}\np_max = {rng.uniform(1, 10):.4g}\n"
        )
    return (
        f"[link]\nr_m = {r:.6g}\nalpha = {alpha}\ntau_s = {tau_ms / 1000}\n"
        f"pn0_db = {pn0_db}\n\n[thresholds]\nband.0 = 0, inf, {threshold:.6g}\n"
        f"{relay}\n[csi]\n{lines}\n"
    )


def test_criterion_6_protocol_determinism_and_correctness(capsys, tmp_path):
    t0 = time.perf_counter()
    ok = True

    for index in range(50):
        path = tmp_path / f"scn_{index}.ini"
        path.write_text(_scenario_text(index), encoding="utf-8")
        scenario = load_scenario(path)
        first = trace_to_csv(run_protocol_trace(scenario))
        second = trace_to_csv(run_protocol_trace(scenario))
        ok &= first == second
        p = scenario.link.budget.p_linear
        for rec in run_protocol_trace(scenario):
            d = rec.decision
            if d.mode == "direct":
                ok &= rec.cs_clamped >= d.threshold_used
            elif d.mode == "power_boost":
                ok &= d.cs_achieved >= d.threshold_used
                prev_db = (d.boost_iterations - 1) * scenario.config.boost_step_db
                prev = velocity_secrecy(
                    p * db_to_linear(prev_db), 1.0, rec.speed_mps,
                    scenario.link.tau, scenario.link.r, scenario.link.alpha,
                ).clamped
                ok &= prev < d.threshold_used

    # accelerating 80 -> 120 km/h: the direct -> fallback flip must sit at the
    # bisection root of velocity_secrecy(v) = threshold
    speeds = [22.25 + 0.05 * i for i in range(222)]
    lines = "\n".join(
        f"line.{i} = CSI1|B|{i + 1}|{i * 100}|23|-60|-90|30|{s:.2f}"
        for i, s in enumerate(speeds)
    )
    path = tmp_path / "accel.ini"
    path.write_text(ACCEL_SCENARIO.format(lines=lines), encoding="utf-8")
    records = run_protocol_trace(load_scenario(path))
    flipped = [rec.speed_mps for rec in records if rec.decision.mode != "direct"]
    ok &= bool(flipped)
    observed = min(flipped)

    lo, hi = 22.25, 33.3
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if velocity_secrecy(1e7, 1.0, mid, 0.2, 1000.0, 1.4).clamped >= 16.0:
            lo = mid
        else:
            hi = mid
    ok &= abs(observed - hi) <= 0.1

    _report(capsys, 6, "50 deterministic traces, minimal boosts, crossing matches bisection",
            ok, time.perf_counter() - t0, 5.0)


def test_criterion_7_relay_selection_argmax(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    ok = True
    for _ in range(100):
        scenario = LinkScenario(
            r=float(rng.uniform(100.0, 2000.0)),
            alpha=float(rng.uniform(1.0, 2.5)),
            tau=float(rng.uniform(0.1, 0.4)),
            budget=PowerBudget.from_db(float(rng.uniform(50.0, 80.0))),
        )
        speed = float(rng.uniform(10.0, 40.0))
        cands = tuple(
            RelayCandidate(
                relay_id=f"r{i}",
                h_rb=float(10.0 ** rng.uniform(-6.0, 0.0)),
                h_re=float(10.0 ** rng.uniform(-6.0, 0.0)),
                p_max=float(10.0 ** rng.uniform(-1.0, 1.5)),
            )
            for i in range(int(rng.integers(1, 5)))
        )
        sel = select_relay(cands, scenario, speed)

        d = speed * scenario.tau
        p_a = scenario.budget.p_linear
        n0 = scenario.budget.n0_linear
        h_ab = d ** (-2.0 * scenario.alpha)
        h_ae = scenario.r ** (-2.0 * scenario.alpha)
        grid_best = {}
        for cand in cands:
            p_r = np.linspace(0.0, cand.p_max, 10_000)
            cap = np.maximum(
                np.log2(1.0 + p_a * h_ab / (p_r * cand.h_rb + n0))
                - np.log2(1.0 + p_a * h_ae / (p_r * cand.h_re + n0)),
                0.0,
            )
            grid_best[cand.relay_id] = float(cap.max())

        winner_grid = grid_best[sel.relay_id]
        ok &= abs(sel.capacity - winner_grid) <= 1e-3 * max(winner_grid, 1e-12)
        for relay_id, best in grid_best.items():
            if relay_id != sel.relay_id:
                ok &= sel.capacity >= best - 1e-9 * max(best, 1.0)
    _report(capsys, 7, "relay argmax within 0.1% of exhaustive grid on 100 candidate sets",
            ok, time.perf_counter() - t0, 30.0)


def test_criterion_8_cs_cipher(capsys):
    t0 = time.perf_counter()
    from v2vsec.csenc import CsKey, encrypt
    from v2vsec.sweeps import run_cs_demo

    lines = run_cs_demo(n=256, m=64, k=8, trials=500, seed=20_240_808)
    correct_rate = float(lines[1].split(",")[6])
    wrong_rate = float(lines[2].split(",")[6])

    key = CsKey(seed=55, n=256, m=64)
    rng = np.random.default_rng(56)
    linear = True
    for _ in range(20):
        x1, x2 = rng.standard_normal(256), rng.standard_normal(256)
        lhs = encrypt(x1 + x2, key)
        rhs = encrypt(x1, key) + encrypt(x2, key)
        linear &= bool(
            np.all(np.abs(lhs - rhs) <= 1e-12 * np.maximum(np.abs(rhs), 1.0))
        )

    ok = correct_rate >= 0.99 and wrong_rate <= 0.01 and linear
    _report(
        capsys, 8,
        f"cipher round-trip {correct_rate:.3f} >= 0.99, wrong-key {wrong_rate:.3f} <= 0.01, linear",
        ok, time.perf_counter() - t0, 30.0,
    )


def test_criterion_9_output_contract(capsys, tmp_path):
    t0 = time.perf_counter()
    args = ["sweep", "--from", "5", "--to", "20", "--step", "0.5",
            "--alpha", "4,2,1.4", "--theta", "0.1"]
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    ok = main(args + ["--out", str(out1)]) == 0
    ok &= main(args + ["--out", str(out2)]) == 0
    text = out1.read_text(encoding="utf-8")
    ok &= out1.read_bytes() == out2.read_bytes()

    from v2vsec.sweeps import rows_to_csv

    ok &= rows_to_csv(read_sweep_csv(text)) == text

    erg = ["ergodic-compare", "--from", "8", "--to", "12", "--step", "2",
           "--samples", "5000", "--seed", "11"]
    e1, e2 = tmp_path / "e1.csv", tmp_path / "e2.csv"
    ok &= main(erg + ["--out", str(e1)]) == 0
    ok &= main(erg + ["--out", str(e2)]) == 0
    ok &= e1.read_bytes() == e2.read_bytes()

    _report(capsys, 9, "CSV round-trips through the strict parser; re-runs byte-identical",
            ok, time.perf_counter() - t0, 30.0)
