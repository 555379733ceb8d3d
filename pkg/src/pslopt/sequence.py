"""Binary sequences, their aperiodic autocorrelation and the PSL cost.

A length-``n`` sequence has sidelobes ``C_1 .. C_{n-1}``. They are stored
reversed, ``omega[i] = C_{n-i-1}``, so that entry ``i`` is a sum of exactly
``i + 1`` products; this is the layout the flip engine updates in place.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .errors import ContractError, ParseError

_ALPHABETS = ({"+": 1, "-": -1}, {"1": 1, "0": -1})


class BinarySequence:
    """A ±1 sequence of length ``n > 1`` backed by an ``int8`` array.

    The array is owned by the instance; the flip engine negates entries of
    ``spins`` in place, everything else treats it as read-only.
    """

    __slots__ = ("spins",)

    def __init__(self, spins):
        arr = np.asarray(spins)
        if arr.ndim != 1:
            raise ContractError("a binary sequence is one-dimensional")
        if arr.shape[0] < 2:
            raise ContractError(f"length must be > 1, got {arr.shape[0]}")
        if not np.all((arr == 1) | (arr == -1)):
            bad = int(np.flatnonzero((arr != 1) & (arr != -1))[0])
            raise ContractError(f"element {bad} is {arr[bad]!r}, expected +1 or -1")
        self.spins = np.array(arr, dtype=np.int8)

    @classmethod
    def random(cls, n, rng):
        if n < 2:
            raise ContractError(f"length must be > 1, got {n}")
        return cls(np.where(rng.integers(0, 2, size=n) == 1, 1, -1))

    @classmethod
    def ones(cls, n):
        return cls(np.ones(n, dtype=np.int8))

    @classmethod
    def from_text(cls, text):
        return parse_sequence(text)

    @classmethod
    def read(cls, path):
        return parse_sequence(Path(path).read_text())

    def to_text(self):
        return "".join("+" if s > 0 else "-" for s in self.spins.tolist())

    def write(self, path):
        Path(path).write_text(self.to_text() + "\n")

    def copy(self):
        return BinarySequence(self.spins.copy())

    def __len__(self):
        return int(self.spins.shape[0])

    def __eq__(self, other):
        if not isinstance(other, BinarySequence):
            return NotImplemented
        return np.array_equal(self.spins, other.spins)

    __hash__ = None

    def __repr__(self):
        text = self.to_text()
        if len(text) > 40:
            text = text[:37] + "..."
        return f"BinarySequence(n={len(self)}, {text!r})"


class SidelobeArray:
    """The ``n - 1`` reversed sidelobes of a sequence, as ``int32``."""

    __slots__ = ("values",)

    def __init__(self, values):
        arr = np.asarray(values)
        if arr.ndim != 1 or arr.shape[0] < 1:
            raise ContractError("sidelobe array needs at least one entry")
        self.values = np.array(arr, dtype=np.int32)

    @property
    def owner_length(self):
        return int(self.values.shape[0]) + 1

    def copy(self):
        return SidelobeArray(self.values.copy())

    def tolist(self):
        return self.values.tolist()

    def __len__(self):
        return int(self.values.shape[0])

    def __eq__(self, other):
        if not isinstance(other, SidelobeArray):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    __hash__ = None

    def __repr__(self):
        return f"SidelobeArray({self.values.tolist()!r})"


@dataclass(frozen=True)
class CostReport:
    fitness: int
    psl: int


def parse_sequence(text):
    """Parse one line of ``+``/``-`` (or ``1``/``0``) into a sequence.

    A single trailing newline is allowed. Mixing the two alphabets is
    rejected at the first character that disagrees with the first one.
    """
    line = text[:-1] if text.endswith("\n") else text
    if line.endswith("\r"):
        line = line[:-1]
    alphabet = None
    spins = []
    for pos, ch in enumerate(line, start=1):
        if alphabet is None:
            alphabet = next((a for a in _ALPHABETS if ch in a), None)
            if alphabet is None:
                raise ParseError(f"unexpected character {ch!r} at position {pos}", pos)
        if ch not in alphabet:
            raise ParseError(f"unexpected character {ch!r} at position {pos}", pos)
        spins.append(alphabet[ch])
    if len(spins) < 2:
        raise ParseError(f"sequence length must be > 1, got {len(spins)}")
    return BinarySequence(np.array(spins, dtype=np.int8))


def compute_aacf(seq, u):
    """``C_u = sum_j b_j b_{j+u}`` for one shift ``0 <= u < n``."""
    n = len(seq)
    if not 0 <= u < n:
        raise ContractError(f"shift {u} outside [0, {n})")
    s = seq.spins.astype(np.int64)
    return int(np.dot(s[: n - u], s[u:]))


def aacf(seq):
    """All of ``C_0 .. C_{n-1}`` as an ``int64`` array (mainlobe first)."""
    return kernels.aacf(seq.spins)


def compute_sidelobes(seq):
    return SidelobeArray(kernels.sidelobes(seq.spins))


def evaluate(omega):
    """Quartic fitness and PSL of a sidelobe array, in one pass."""
    fitness, psl = kernels.evaluate_exact(omega.values)
    return CostReport(fitness, psl)


def psl_direct(seq):
    """``max_{0<u<n} |C_u|``, from the AACF in natural shift order."""
    return int(np.abs(aacf(seq)[1:]).max())
