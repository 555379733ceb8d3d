"""In-place single-flip update of a sequence and its sidelobe array.

Negating element ``f`` changes ``C_u`` by ``-2 b_f (b_{f+u} + b_{f-u})``
(missing neighbours count as zero). In reversed indexing that touches
``omega[i]`` for ``i >= min(f, n-1-f)``, with one neighbour term up to
``max(f, n-1-f)`` and two from there on. One pass, no allocation.
"""

from dataclasses import dataclass

import numpy as np

from . import _accel, kernels
from .errors import ContractError


@dataclass(frozen=True)
class FlipGeometry:
    f: int
    delta_min: int
    delta_max: int
    branch: bool

    @classmethod
    def of(cls, f, n):
        _check_position(f, n)
        return cls(f, min(n - f - 1, f), max(n - f, f), 2 * f <= n - 1)


def _check_position(f, n):
    if not 0 <= f < n:
        raise ContractError(f"flip position {f} outside [0, {n})")


def flip_update(f, seq, omega):
    """Negate ``seq[f]`` and bring ``omega`` along, in O(n).

    ``omega`` must equal ``compute_sidelobes(seq)`` on entry; that is not
    checked (it would cost O(n^2)) unless ``PSLOPT_DEBUG_CHECKS`` is set.
    """
    f = int(f)
    _check_position(f, len(seq))
    kernels.flip(f, seq.spins, omega.values)
    if _accel.DEBUG_CHECKS:
        _assert_coherent(seq, omega)


def flip_many(positions, seq, omega):
    """Sequential :func:`flip_update` over ``positions``, validated up front."""
    n = len(seq)
    positions = [int(p) for p in positions]
    for p in positions:
        _check_position(p, n)
    for p in positions:
        kernels.flip(p, seq.spins, omega.values)
    if _accel.DEBUG_CHECKS:
        _assert_coherent(seq, omega)


def _assert_coherent(seq, omega):
    expected = kernels.sidelobes(seq.spins)
    if not np.array_equal(expected, omega.values):
        raise AssertionError("sidelobe array out of sync with sequence")
