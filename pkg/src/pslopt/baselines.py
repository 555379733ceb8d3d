"""Classical low-PSL constructions used as comparison baselines.

m-sequences (maximal-length LFSR output), Legendre sequences, Rudin-Shapiro
sequences, and cyclic rotations of any of them.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContractError
from .sequence import BinarySequence, psl_direct

FAMILIES = ("random", "mseq", "legendre", "rudin-shapiro")


@dataclass(frozen=True)
class PrimitivePolynomial:
    """A degree-``d`` polynomial over GF(2); bit ``k`` of ``mask`` is the
    coefficient of ``x**k``."""

    degree: int
    mask: int

    def __post_init__(self):
        if self.degree < 1:
            raise ContractError(f"degree must be positive, got {self.degree}")
        if self.mask >> self.degree != 1:
            raise ContractError(f"mask {self.mask:#x} is not of exact degree {self.degree}")
        if not self.mask & 1:
            raise ContractError("constant term must be set")

    @classmethod
    def from_exponents(cls, *exponents):
        mask = 0
        for e in exponents:
            mask |= 1 << e
        mask |= 1
        return cls(max(exponents), mask)

    @property
    def period(self):
        return (1 << self.degree) - 1

    def exponents(self):
        return [k for k in range(self.degree, -1, -1) if self.mask >> k & 1]

    def __str__(self):
        terms = []
        for k in self.exponents():
            terms.append("1" if k == 0 else "x" if k == 1 else f"x^{k}")
        return " + ".join(terms)

    def is_primitive(self):
        """True iff ``x`` has multiplicative order ``2**d - 1`` modulo self."""
        if self.degree > 32:
            raise ContractError("primitivity check limited to degree <= 32")
        order = self.period
        if _gf2_powmod(2, order, self.mask) != 1:
            return False
        return all(_gf2_powmod(2, order // p, self.mask) != 1 for p in _prime_factors(order))


def _gf2_mulmod(a, b, mod):
    deg = mod.bit_length() - 1
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a >> deg & 1:
            a ^= mod
    return out


def _gf2_powmod(base, exp, mod):
    deg = mod.bit_length() - 1
    result = 1
    # reduce base first; 2 == x is already reduced for deg >= 2
    while base.bit_length() - 1 >= deg and base:
        base ^= mod << (base.bit_length() - 1 - deg)
    while exp:
        if exp & 1:
            result = _gf2_mulmod(result, base, mod)
        base = _gf2_mulmod(base, base, mod)
        exp >>= 1
    return result


def _prime_factors(m):
    factors = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            factors.append(p)
            while m % p == 0:
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        factors.append(m)
    return factors


def is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


# One known primitive polynomial per degree (listed by nonzero exponents).
PRIMITIVE_POLYNOMIALS = {
    p.degree: p
    for p in (
        PrimitivePolynomial.from_exponents(2, 1, 0),
        PrimitivePolynomial.from_exponents(3, 1, 0),
        PrimitivePolynomial.from_exponents(4, 1, 0),
        PrimitivePolynomial.from_exponents(5, 2, 0),
        PrimitivePolynomial.from_exponents(6, 1, 0),
        PrimitivePolynomial.from_exponents(7, 1, 0),
        PrimitivePolynomial.from_exponents(8, 4, 3, 2, 0),
        PrimitivePolynomial.from_exponents(9, 4, 0),
        PrimitivePolynomial.from_exponents(10, 3, 0),
        PrimitivePolynomial.from_exponents(11, 2, 0),
        PrimitivePolynomial.from_exponents(12, 6, 4, 1, 0),
        PrimitivePolynomial.from_exponents(13, 4, 3, 1, 0),
        PrimitivePolynomial.from_exponents(14, 10, 6, 1, 0),
        PrimitivePolynomial.from_exponents(15, 1, 0),
        PrimitivePolynomial.from_exponents(16, 12, 3, 1, 0),
        PrimitivePolynomial.from_exponents(17, 3, 0),
    )
}

# Best published PSL of m-sequences (best polynomial and rotation) next to
# the hill climber's reported PSL, keyed by degree. Comparison targets only.
TABLE_I = {
    13: (8191, 85, 77),
    14: (16383, 125, 115),
    15: (32767, 175, 171),
    16: (65535, 258, 254),
    17: (131071, 363, 360),
}


def primitive_polynomial(degree):
    try:
        return PRIMITIVE_POLYNOMIALS[degree]
    except KeyError:
        raise ContractError(f"no built-in primitive polynomial of degree {degree}") from None


def primitive_polynomials(degree):
    """Every primitive polynomial of the given degree (exhaustive, slow)."""
    top = 1 << degree
    for middle in range(0, top, 2):
        poly = PrimitivePolynomial(degree, top | middle | 1)
        if poly.is_primitive():
            yield poly


def mseq(poly, init=1):
    """One period of the LFSR sequence for ``poly``, 1 -> +1 and 0 -> -1.

    ``init`` holds the first ``d`` output bits, bit ``k`` being output ``k``.
    The recurrence is ``s[t+d] = sum_{k<d} c_k s[t+k]`` over GF(2).
    """
    if isinstance(poly, int):
        poly = primitive_polynomial(poly)
    d = poly.degree
    if not 0 < init < (1 << d):
        raise ContractError(f"initial state must be a nonzero {d}-bit value")
    taps = poly.mask & ((1 << d) - 1)
    state = init
    out = np.empty(poly.period, dtype=np.int8)
    high = d - 1
    for t in range(poly.period):
        out[t] = state & 1
        feedback = (state & taps).bit_count() & 1
        state = (state >> 1) | (feedback << high)
    return BinarySequence(np.where(out == 1, 1, -1))


def legendre(p):
    """Quadratic-residue sequence mod an odd prime; index 0 is +1."""
    p = int(p)
    if p % 2 == 0 or not is_prime(p):
        raise ContractError(f"{p} is not an odd prime")
    residue = np.zeros(p, dtype=bool)
    x = np.arange(1, p, dtype=np.int64)
    residue[(x * x) % p] = True
    residue[0] = True
    return BinarySequence(np.where(residue, 1, -1))


def rudin_shapiro(k):
    """Length ``2**k``; element ``i`` is -1 iff ``i`` has an odd number of
    (overlapping) ``11`` pairs in binary."""
    if k < 1:
        raise ContractError(f"k must be >= 1 (length 2**k > 1), got {k}")
    i = np.arange(1 << k, dtype=np.uint64)
    pairs = np.bitwise_count(i & (i >> np.uint64(1)))
    return BinarySequence(np.where(pairs % 2 == 0, 1, -1))


def rotate(seq, s):
    """Element ``i`` of the result is element ``(i + s) mod n`` of ``seq``."""
    return BinarySequence(np.roll(seq.spins, -(int(s) % len(seq))))


def best_rotation_psl(seq):
    """``(shift, psl)`` of the rotation with the lowest aperiodic PSL.

    Naive: one full AACF per rotation, O(n^3) overall.
    """
    best = None
    for s in range(len(seq)):
        psl = psl_direct(rotate(seq, s))
        if best is None or psl < best[1]:
            best = (s, psl)
    return best


def periodic_acf(seq):
    """Periodic autocorrelation ``sum_j b_j b_{(j+u) mod n}`` for all ``u``."""
    s = seq.spins.astype(np.int64)
    return np.array([int(np.dot(s, np.roll(s, -u))) for u in range(len(s))])


def mseq_degree(n):
    """Degree ``d`` with ``2**d - 1 == n``, or ``None``."""
    n = int(n)
    d = (n + 1).bit_length() - 1
    return d if d >= 2 and (1 << d) - 1 == n else None


def generate(family, n, rng=None):
    """Baseline of length ``n`` by family name (the CLI vocabulary)."""
    if family == "random":
        if rng is None:
            raise ContractError("random family needs an rng")
        return BinarySequence.random(n, rng)
    if family == "mseq":
        d = mseq_degree(n)
        if d is None:
            raise ContractError(f"m-sequences need length 2**d - 1, got {n}")
        return mseq(primitive_polynomial(d))
    if family == "legendre":
        return legendre(n)
    if family == "rudin-shapiro":
        k = n.bit_length() - 1
        if n < 2 or 1 << k != n:
            raise ContractError(f"Rudin-Shapiro sequences need a power-of-two length, got {n}")
        return rudin_shapiro(k)
    raise ContractError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
