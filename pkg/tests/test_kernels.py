"""The numba and numpy kernel flavours must agree bit for bit."""

import os
import subprocess
import sys

import numpy as np
import pytest

from pslopt import kernels

from .conftest import random_spins


@pytest.mark.parametrize("n", [2, 3, 4, 17, 64, 255, 1000])
def test_sidelobes_and_aacf_agree(rng, n):
    psi = random_spins(rng, n)
    np.testing.assert_array_equal(kernels.aacf_numba(psi), kernels.aacf_numpy(psi))
    np.testing.assert_array_equal(kernels.sidelobes_numba(psi), kernels.sidelobes_numpy(psi))
    assert kernels.sidelobes_numba(psi).dtype == np.int32


@pytest.mark.parametrize("n", [2, 3, 8, 9, 101, 512])
def test_flip_agrees(rng, n):
    psi = random_spins(rng, n)
    for f in range(n):
        a, b = psi.copy(), psi.copy()
        oa, ob = kernels.sidelobes_numba(a), kernels.sidelobes_numba(b)
        kernels.flip_numba(f, a, oa)
        kernels.flip_numpy(f, b, ob)
        np.testing.assert_array_equal(a, b)
        np.testing.assert_array_equal(oa, ob)


@pytest.mark.parametrize(
    "values",
    [
        [1],
        [1, 2, 3],
        list(range(-5000, 5000)),
        [65535, 65536, -65537],
        [2**31 - 1, -(2**31 - 1), 2**30 + 7],
        [123456] * 5000,
    ],
    ids=["one", "small", "wide-range", "word-boundary", "int32-extremes", "many-large"],
)
def test_evaluate_agrees_and_is_exact(values):
    omega = np.array(values, dtype=np.int32)
    hi, lo, peak = kernels.evaluate_numba(omega)
    expected = sum(int(v) ** 4 for v in values)
    assert kernels.join_words(hi, lo) == expected
    assert kernels.evaluate_numpy(omega) == (expected, max(abs(v) for v in values))
    assert peak == max(abs(v) for v in values)


def test_word_split_round_trip():
    for value in (0, 1, 2**64 - 1, 2**64, 2**100 + 12345):
        assert kernels.join_words(*kernels.split_words(value)) == value
    with pytest.raises(OverflowError):
        kernels.split_words(2**128)


@pytest.mark.parametrize("n", [2, 5, 64, 300])
def test_scan_agrees(rng, n):
    psi = random_spins(rng, n)
    omega = kernels.sidelobes_numpy(psi)
    cost, psl = kernels.evaluate_numpy(omega)
    for start in (0, n // 2, n - 1):
        for count in (1, n):
            a, b = psi.copy(), psi.copy()
            oa, ob = omega.copy(), omega.copy()
            ba, bb = psi.copy(), psi.copy()
            hi, lo = kernels.split_words(cost)
            pos, hi, lo, best_a, probes_a = kernels.scan_numba(a, oa, start, count, hi, lo, psl, ba)
            res_b = kernels.scan_numpy(b, ob, start, count, cost, psl, bb)
            assert (int(pos), kernels.join_words(hi, lo), int(best_a), int(probes_a)) == res_b
            np.testing.assert_array_equal(a, b)
            np.testing.assert_array_equal(oa, ob)
            np.testing.assert_array_equal(ba, bb)


def _run_with_env(code, **env):
    full = dict(os.environ, **env)
    return subprocess.run(
        [sys.executable, "-c", code], env=full, capture_output=True, text=True, check=True
    ).stdout.strip()


_RUN = (
    "from pslopt import RunConfig, run, BACKEND;"
    "r = run(RunConfig(length=48, seed=5, budget_seconds=60, max_iterations=400));"
    "print(BACKEND, r.best_psl, r.final_cost, r.iterations, r.kicks, r.best_sequence)"
)


def test_numpy_fallback_reproduces_numba_run():
    numba_out = _run_with_env(_RUN, PSLOPT_DISABLE_NUMBA="0").split()
    numpy_out = _run_with_env(_RUN, PSLOPT_DISABLE_NUMBA="1").split()
    assert numba_out[0] == "numba" and numpy_out[0] == "numpy"
    assert numba_out[1:] == numpy_out[1:]


def test_debug_checks_catch_stale_sidelobes():
    code = (
        "from pslopt import BinarySequence, compute_sidelobes, flip_update\n"
        "s = BinarySequence([1, 1, 1, -1, 1])\n"
        "o = compute_sidelobes(BinarySequence([1, 1, 1, 1, 1]))\n"
        "try:\n    flip_update(2, s, o)\nexcept AssertionError:\n    print('caught')\n"
    )
    assert _run_with_env(code, PSLOPT_DEBUG_CHECKS="1") == "caught"
    assert _run_with_env(code, PSLOPT_DEBUG_CHECKS="0") == ""
