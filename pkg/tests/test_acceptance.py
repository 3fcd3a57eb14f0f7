"""End-to-end acceptance gate.

One test per contract criterion, each printing a single pass/fail line with
the measured numbers (run pytest with -s to see them on success). Tolerances
are pinned here and nowhere else.
"""

import hashlib
import math
import subprocess
import sys
import time
from math import isqrt, log

import numpy as np
import psutil
import pytest

from toeplitznum import (
    E_of_N,
    bound_report,
    census_upto,
    eta_N,
    exp_sum,
    fourier_check,
    limiting_frequencies,
    omega_segment,
    omega_single,
    sieve_primes,
    sigma_N,
    verify_toeplitz,
)

from conftest import FIVE_SPECS

BASES = (2, 3, 10)


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"[criterion {num}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {num} failed: {detail}"


def test_c1_sieve_equals_trial_division_oracle():
    limit = 10**5
    t0 = time.perf_counter()
    primes = sieve_primes(isqrt(limit))
    mismatches = 0
    for spec in FIVE_SPECS.values():
        block = omega_segment(1, limit + 1, spec, primes)
        oracle = np.fromiter(
            (omega_single(n, spec) for n in range(1, limit + 1)), dtype=np.uint8, count=limit
        )
        mismatches += int(np.count_nonzero(block.values != oracle))
    elapsed = time.perf_counter() - t0
    _report(
        1,
        mismatches == 0 and elapsed < 10.0,
        f"segment vs trial division on [1, 1e5], 5 prime sets: "
        f"{mismatches} mismatches in {elapsed:.1f} s (budget 10 s)",
    )


def test_c2_toeplitz_constraint_holds():
    violations = 0
    combos = 0
    for spec in FIVE_SPECS.values():
        for base in BASES:
            report = verify_toeplitz(10**6, base, spec, p_limit=10**3)
            violations += len(report.violations)
            combos += 1
    _report(
        2,
        violations == 0,
        f"a_n = a_np over n <= 1e6, P-primes <= 1e3, {combos} (spec, base) combos: "
        f"{violations} violations",
    )


def test_c3_fourier_inversion_identity():
    worst = 0.0
    for spec in FIVE_SPECS.values():
        for base in BASES:
            worst = max(worst, fourier_check(10**5, base, spec))
    _report(3, worst < 1e-9, f"max inversion deviation at N=1e5 over all combos: {worst:.3e}")


def test_c4_nonequidistributed_case_exact_targets():
    t0 = time.perf_counter()
    spec = FIVE_SPECS["cofinite:2"]
    freqs = limiting_frequencies(spec, 2)
    exact_err = float(np.max(np.abs(freqs - np.array([2 / 3, 1 / 3]))))

    cen = census_upto(spec, 2, 10**7)
    census_err = float(np.max(np.abs(cen.frequencies() - np.array([2 / 3, 1 / 3]))))

    series = exp_sum(10**7, 1, 2, spec, checkpoints=[10**7])
    ratio = series.points[-1].value.real / 10**7
    elapsed = time.perf_counter() - t0

    ok = (
        exact_err < 1e-12
        and census_err < 5e-3
        and abs(ratio - 1 / 3) < 0.02 * (1 / 3)
        and elapsed < 60.0
    )
    _report(
        4,
        ok,
        f"limiting freqs off (2/3, 1/3) by {exact_err:.2e}; census@1e7 off by "
        f"{census_err:.2e}; S(1e7;1/2)/N = {ratio:.5f} vs 1/3; {elapsed:.1f} s (budget 60 s)",
    )


def test_c5_equidistributed_case_decay():
    spec = FIVE_SPECS["empty"]
    grid = [10**4, 10**5, 10**6, 10**7]
    report = bound_report(spec, 2, grid)
    eps = [row.eps_max for row in report.rows]
    ratios = [row.ratio for row in report.rows]

    decreasing = all(a > b for a, b in zip(eps, eps[1:]))
    small_at_top = eps[-1] < 1e-3
    # the bound's constant is unspecified; require each decade step to move
    # the ratio by less than a factor 10
    step_factors = [max(a / b, b / a) for a, b in zip(ratios, ratios[1:])]
    bounded_steps = all(f < 10.0 for f in step_factors)

    # cross-check the N=1e4 census against direct factorization
    counts = np.bincount(
        [omega_single(n, spec) % 2 for n in range(1, 10**4 + 1)], minlength=2
    )
    cen = census_upto(spec, 2, 10**4)
    oracle_ok = counts.tolist() == cen.counts.tolist()

    _report(
        5,
        decreasing and small_at_top and bounded_steps and oracle_ok,
        f"eps_max {['%.2e' % e for e in eps]} strictly decreasing={decreasing}, "
        f"final<1e-3={small_at_top}; ratio step factors "
        f"{['%.1f' % f for f in step_factors]} all<10={bounded_steps}; "
        f"1e4 census matches factorization={oracle_ok}",
    )


def test_c6_sigma_over_log_converges():
    grid = [10**4, 10**5, 10**6]
    mertens = math.exp(np.euler_gamma)

    all_devs = [abs(sigma_N(FIVE_SPECS["all"], 2, 1, n).over_log.real - mertens) for n in grid]
    all_monotone = all(a > b for a, b in zip(all_devs, all_devs[1:]))
    all_final = all_devs[-1] < 0.02 * mertens

    target = mertens / 3  # lone Q-factor (1 - 1/2)/(1 + 1/2)
    cof_vals = [sigma_N(FIVE_SPECS["cofinite:2"], 2, 1, n).over_log.real for n in grid]
    cof_ok = all(abs(v - target) < 0.02 * target for v in cof_vals)

    _report(
        6,
        all_monotone and all_final and cof_ok,
        f"sigma/log N (all primes) deviations from e^gamma {['%.1e' % d for d in all_devs]} "
        f"monotone={all_monotone}, within 2% at 1e6={all_final}; "
        f"cofinite:2 values {['%.4f' % v for v in cof_vals]} all within 2% of "
        f"{target:.4f}={cof_ok}",
    )


def test_c7_eta_majorant():
    spec = FIVE_SPECS["cofinite:2"]
    n = 10**6
    res = eta_N(spec, n)
    lhs = sum(log(q) / q for q in spec.finite_Q() if q <= n)  # = log(2)/2
    rhs = 5 * res.value * log(n)
    ok = res.value <= 0.08 and lhs <= rhs
    _report(
        7,
        ok,
        f"eta(1e6) = {res.value:.4f} (<= 0.08), majorant check "
        f"{lhs:.4f} <= 5*eta*log N = {rhs:.4f}",
    )


def test_c8_throughput_memory_and_parallel_determinism(tmp_path):
    n = 10**8
    segment = 1 << 20
    # live per-segment arrays: cofactors int64 (8 B) + factor counts, digits,
    # membership masks and encode temps (~7 B) = 15 B per element
    footprint = 15 * segment
    budget_s = 300.0

    base_cmd = [
        sys.executable, "-m", "toeplitznum.cli", "digits",
        "--spec", "finite:2,3", "--base", "2", "--n", str(n), "--segment", str(segment),
    ]
    probe = subprocess.run(
        [sys.executable, "-c",
         "import toeplitznum.cli, numpy, psutil; print(psutil.Process().memory_info().rss)"],
        capture_output=True, text=True, check=True,
    )
    baseline = int(probe.stdout)

    serial_path, par_path = tmp_path / "serial.txt", tmp_path / "par.txt"
    t0 = time.perf_counter()
    proc = subprocess.Popen(
        base_cmd + ["--workers", "1", "--out", str(serial_path)],
        stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
    )
    tracker = psutil.Process(proc.pid)
    peak = 0
    while proc.poll() is None:
        try:
            peak = max(peak, tracker.memory_info().rss)
        except psutil.NoSuchProcess:
            break
        time.sleep(0.02)
    serial_s = time.perf_counter() - t0
    assert proc.returncode == 0
    delta = peak - baseline

    result = subprocess.run(
        base_cmd + ["--workers", "8", "--out", str(par_path)],
        stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
    )
    assert result.returncode == 0

    h_serial = hashlib.sha256(serial_path.read_bytes()).hexdigest()
    h_par = hashlib.sha256(par_path.read_bytes()).hexdigest()

    ok = serial_s < budget_s and delta < 1.5 * footprint and h_serial == h_par
    _report(
        8,
        ok,
        f"1e8 digits in {serial_s:.1f} s (budget {budget_s:.0f} s); peak RSS delta "
        f"{delta / 1e6:.1f} MB vs 1.5x footprint {1.5 * footprint / 1e6:.1f} MB; "
        f"8-worker run byte-identical={h_serial == h_par}",
    )
