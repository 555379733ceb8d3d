"""Hot numeric kernels, in a numba flavour and a pure-numpy flavour.

Both flavours share signatures and produce bit-identical results. The
unsuffixed names (``aacf``, ``sidelobes``, ``flip``) and the ``*_exact``
wrappers dispatch to the backend picked in :mod:`pslopt._accel`; the
suffixed variants stay importable so the benchmark can compare them.

Conventions: spins are ``int8`` (+1/-1); the sidelobe array ``omega`` is
``int32`` with ``omega[i] = C_{n-i-1}``; fitness is the exact integer
``sum(omega**4)``, carried through the numba kernels as a (hi, lo) pair of
``uint64`` words.
"""

import numpy as np

from ._accel import USE_NUMBA, njit

_U32 = np.uint64(32)
_M32 = np.uint64(0xFFFFFFFF)
_ONE = np.uint64(1)
_ZERO = np.uint64(0)
_TWO = np.uint64(2)
_SMALL = 1 << 16  # |v| below this keeps v**4 inside one uint64 word
_I64_MAX = (1 << 63) - 1


def join_words(hi, lo):
    return (int(hi) << 64) | int(lo)


def split_words(value):
    value = int(value)
    if value < 0 or value >> 128:
        raise OverflowError(f"fitness {value} does not fit in 128 bits")
    return np.uint64(value >> 64), np.uint64(value & 0xFFFFFFFFFFFFFFFF)


# --------------------------------------------------------------------------
# numba flavour


@njit(cache=True, nogil=True)
def aacf_numba(psi):
    n = psi.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for u in range(n):
        acc = 0
        for j in range(n - u):
            acc += psi[j] * psi[j + u]
        out[u] = acc
    return out


@njit(cache=True, nogil=True)
def sidelobes_numba(psi):
    n = psi.shape[0]
    omega = np.empty(n - 1, dtype=np.int32)
    for i in range(n - 1):
        shift = n - i - 1
        acc = 0
        for j in range(i + 1):
            acc += psi[j] * psi[j + shift]
        omega[i] = acc
    return omega


@njit(cache=True, nogil=True)
def flip_numba(f, psi, omega):
    n = psi.shape[0]
    d_min = min(n - f - 1, f)
    d_max = max(n - f, f)
    s = 2 * psi[f]
    if 2 * f <= n - 1:
        for q in range(d_max - d_min - 1):
            omega[d_min + q] -= s * psi[n - q - 1]
        for q in range(n - d_max):
            omega[d_max + q - 1] -= s * (psi[2 * f - q] + psi[q])
    else:
        for q in range(d_max - d_min):
            omega[d_min + q] -= s * psi[q]
        for q in range(n - d_max - 1):
            omega[d_max + q] -= s * (psi[d_max - d_min + q] + psi[n - q - 1])
    psi[f] = -psi[f]


@njit(cache=True, nogil=True)
def _quartic_wide(a):
    # a**4 as (hi, lo) for 0 <= a < 2**31
    v2 = np.uint64(a) * np.uint64(a)
    h = v2 >> _U32
    l = v2 & _M32
    cross = _TWO * h * l
    lo = l * l
    add = (cross & _M32) << _U32
    out_lo = lo + add
    carry = _ONE if out_lo < lo else _ZERO
    out_hi = h * h + (cross >> _U32) + carry
    return out_hi, out_lo


@njit(cache=True, nogil=True)
def evaluate_numba(omega):
    hi = _ZERO
    lo = _ZERO
    peak = 0
    for i in range(omega.shape[0]):
        a = abs(np.int64(omega[i]))
        if a > peak:
            peak = a
        if a < _SMALL:
            v2 = np.uint64(a * a)
            t = v2 * v2
            lo += t
            if lo < t:
                hi += _ONE
        else:
            t_hi, t_lo = _quartic_wide(a)
            lo += t_lo
            if lo < t_lo:
                hi += _ONE
            hi += t_hi
    return hi, lo, peak


@njit(cache=True, nogil=True)
def scan_numba(psi, omega, start, count, cost_hi, cost_lo, best_psl, best_seq):
    """Probe single flips at ``start, start+1, ...`` (mod n), ``count`` of them.

    Returns ``(position, hi, lo, best_psl, probes)``; ``position`` is -1 when
    no probe had strictly smaller fitness, in which case psi/omega are left
    as they came in.
    """
    n = psi.shape[0]
    for i in range(count):
        f = (start + i) % n
        flip_numba(f, psi, omega)
        hi, lo, peak = evaluate_numba(omega)
        if peak < best_psl:
            best_psl = peak
            best_seq[:] = psi
        if hi < cost_hi or (hi == cost_hi and lo < cost_lo):
            return f, hi, lo, best_psl, i + 1
        flip_numba(f, psi, omega)
    return -1, cost_hi, cost_lo, best_psl, count


# --------------------------------------------------------------------------
# numpy flavour


def aacf_numpy(psi):
    n = psi.shape[0]
    wide = psi.astype(np.int64)
    return np.correlate(wide, wide, mode="full")[n - 1:].copy()


def sidelobes_numpy(psi):
    return aacf_numpy(psi)[:0:-1].astype(np.int32)


def flip_numpy(f, psi, omega):
    n = psi.shape[0]
    s = 2 * np.int32(psi[f])
    if 2 * f <= n - 1:
        omega[f:n - 1 - f] -= s * psi[n - 1:2 * f:-1]
        omega[n - 1 - f:n - 1] -= s * (psi[2 * f:f:-1].astype(np.int32) + psi[:f])
    else:
        lo = n - 1 - f
        omega[lo:f] -= s * psi[:f - lo]
        omega[f:n - 1] -= s * (psi[2 * f - n + 1:f].astype(np.int32) + psi[n - 1:f:-1])
    psi[f] = -psi[f]


def evaluate_numpy(omega):
    mags = np.abs(omega.astype(np.int64))
    peak = int(mags.max()) if mags.size else 0
    if mags.size * peak**4 <= _I64_MAX:
        sq = mags * mags
        fitness = int(np.dot(sq, sq))
    else:
        fitness = sum(int(m) ** 4 for m in mags.tolist())
    return fitness, peak


def scan_numpy(psi, omega, start, count, cost, best_psl, best_seq):
    n = psi.shape[0]
    for i in range(count):
        f = (start + i) % n
        flip_numpy(f, psi, omega)
        fitness, peak = evaluate_numpy(omega)
        if peak < best_psl:
            best_psl = peak
            best_seq[:] = psi
        if fitness < cost:
            return f, fitness, best_psl, i + 1
        flip_numpy(f, psi, omega)
    return -1, cost, best_psl, count


# --------------------------------------------------------------------------
# backend-neutral entry points (exact Python ints for fitness)


def evaluate_exact(omega):
    """Return ``(fitness, psl)`` as Python ints."""
    if USE_NUMBA:
        hi, lo, peak = evaluate_numba(omega)
        return join_words(hi, lo), int(peak)
    return evaluate_numpy(omega)


def scan_exact(psi, omega, start, count, cost, best_psl, best_seq):
    """Backend-neutral scan; returns ``(position, cost, best_psl, probes)``."""
    if USE_NUMBA:
        hi, lo = split_words(cost)
        pos, hi, lo, best_psl, probes = scan_numba(
            psi, omega, start, count, hi, lo, best_psl, best_seq
        )
        return int(pos), join_words(hi, lo), int(best_psl), int(probes)
    return scan_numpy(psi, omega, start, count, cost, best_psl, best_seq)


if USE_NUMBA:
    aacf = aacf_numba
    sidelobes = sidelobes_numba
    flip = flip_numba
else:
    aacf = aacf_numpy
    sidelobes = sidelobes_numpy
    flip = flip_numpy
