"""Brute-force references for testing.

Nothing here calls into :mod:`pslopt.kernels` or :mod:`pslopt.flip`; the
point is to have a second, definition-level route to every number the fast
paths produce.
"""

import numpy as np

from ._accel import njit
from .errors import ContractError
from .sequence import BinarySequence, SidelobeArray

MAX_EXHAUSTIVE_LENGTH = 24


def oracle_aacf(spins):
    """``[C_0, ..., C_{n-1}]`` as Python ints, straight from the definition."""
    b = [int(x) for x in np.asarray(spins).tolist()]
    n = len(b)
    return [sum(b[j] * b[j + u] for j in range(n - u)) for u in range(n)]


def oracle_sidelobes(seq):
    c = oracle_aacf(seq.spins)
    n = len(c)
    return SidelobeArray([c[n - i - 1] for i in range(n - 1)])


def oracle_psl(seq):
    return max(abs(c) for c in oracle_aacf(seq.spins)[1:])


def oracle_fitness(seq):
    return sum(c**4 for c in oracle_aacf(seq.spins)[1:])


def oracle_sidelobes_batch(rows):
    """Reversed sidelobes of every row of a ``(m, n)`` ±1 matrix.

    Same definition as :func:`oracle_sidelobes`, summed over all rows at
    once for each shift.
    """
    rows = np.asarray(rows, dtype=np.int64)
    n = rows.shape[1]
    out = np.empty((rows.shape[0], n - 1), dtype=np.int64)
    for i in range(n - 1):
        u = n - i - 1
        out[:, i] = (rows[:, : n - u] * rows[:, u:]).sum(axis=1)
    return out


def all_flips(spins):
    """``(n, n)`` matrix whose row ``f`` is ``spins`` with element ``f`` negated."""
    spins = np.asarray(spins, dtype=np.int64)
    rows = np.tile(spins, (spins.shape[0], 1))
    np.fill_diagonal(rows, -spins)
    return rows


def oracle_flip(f, seq):
    """Negate element ``f`` of a copy and recompute everything from scratch."""
    spins = seq.spins.copy()
    spins[f] = -spins[f]
    flipped = BinarySequence(spins)
    return flipped, oracle_sidelobes(flipped)


@njit(cache=True)
def _bounded_search(n, bound, out):
    # Depth-first fill from both ends (0, n-1, 1, n-2, ...). c[u] holds the
    # partial sum of C_u over pairs with both ends assigned, known[u] their
    # count; a branch dies once |c[u]| exceeds bound by more than the number
    # of C_u terms still open. b[0] = b[1] = +1 is fixed: negation and
    # alternating negation map any solution onto one with that prefix.
    order = np.empty(n, dtype=np.int64)
    lo = 0
    hi = n - 1
    for d in range(n):
        if d % 2 == 0:
            order[d] = lo
            lo += 1
        else:
            order[d] = hi
            hi -= 1
    b = np.zeros(n, dtype=np.int64)
    c = np.zeros(n, dtype=np.int64)
    known = np.zeros(n, dtype=np.int64)
    tried = np.zeros(n + 1, dtype=np.int64)
    depth = 0
    while depth >= 0:
        if depth == n:
            for i in range(n):
                out[i] = b[i]
            return True
        p = order[depth]
        if b[p] != 0:
            # undo the value placed on the previous visit
            for q in range(n):
                if q != p and b[q] != 0:
                    u = abs(p - q)
                    c[u] -= b[p] * b[q]
                    known[u] -= 1
            b[p] = 0
        fixed = p == 0 or p == 1
        if tried[depth] == 2 or (fixed and tried[depth] == 1):
            tried[depth] = 0
            depth -= 1
            continue
        v = 1 if tried[depth] == 0 else -1
        tried[depth] += 1
        ok = True
        for q in range(n):
            if q != p and b[q] != 0:
                u = abs(p - q)
                c[u] += v * b[q]
                known[u] += 1
                if abs(c[u]) - (n - u - known[u]) > bound:
                    ok = False
        b[p] = v
        if ok:
            depth += 1
            tried[depth] = 0
    return False


def exhaustive_min_psl(n):
    """True minimum PSL over all length-``n`` sequences and one witness.

    Tries bounds 1, 2, ... with a pruned depth-first search; the first bound
    that admits a sequence is the optimum.
    """
    if not 2 <= n <= MAX_EXHAUSTIVE_LENGTH:
        raise ContractError(f"exhaustive search supports 2 <= n <= {MAX_EXHAUSTIVE_LENGTH}, got {n}")
    out = np.zeros(n, dtype=np.int64)
    for bound in range(1, n):
        if _bounded_search(n, bound, out):
            witness = BinarySequence(out.astype(np.int8))
            return oracle_psl(witness), witness
    raise AssertionError("unreachable: the all-ones sequence has PSL n - 1")
