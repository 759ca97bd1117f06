"""Binary expansions, Hamming weights, and the scalar weighting inequalities.

For x in [0, 1]:  (1+x)^a >= 1 + a x^a  when a >= 1, and the reverse
inequality holds for exponents in [0, 1].  These two facts drive the
weighted inequality bounds; ``lemma1_check`` exposes the signed slack.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnientError

LEMMA_ATOL = 1e-12


@dataclass(frozen=True)
class BinaryVector:
    """Bits of a nonnegative integer, least-significant coefficient first."""

    bits: tuple

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise UnientError(f"bits must be 0/1, got {bits}")
        object.__setattr__(self, "bits", bits)

    def value(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))


def binary_vector(j: int, n: int) -> BinaryVector:
    """Length-n binary expansion of j, least-significant bit first."""
    j = int(j)
    n = int(n)
    if j < 0:
        raise UnientError(f"j must be nonnegative, got {j}")
    if n < 0:
        raise UnientError(f"length must be nonnegative, got {n}")
    if j >= 2 ** n:
        raise OverflowError(f"{j} does not fit in {n} bits")
    return BinaryVector(tuple((j >> i) & 1 for i in range(n)))


def hamming_weight(v) -> int:
    """Number of ones in a BinaryVector (or in the binary expansion of an int)."""
    if isinstance(v, BinaryVector):
        return sum(v.bits)
    return int(v).bit_count()


def lemma1_check(x: float, exponent: float, mode: str) -> float:
    """Signed slack (1+x)^e - (1 + e x^e) of the weighting inequality.

    mode="alpha" requires exponent >= 1 and the slack is nonnegative;
    mode="beta" requires exponent in [0, 1] and the slack is nonpositive
    (both up to LEMMA_ATOL).
    """
    x = float(x)
    exponent = float(exponent)
    if not 0.0 <= x <= 1.0:
        raise UnientError(f"x must lie in [0, 1], got {x}")
    if mode == "alpha":
        if exponent < 1.0:
            raise UnientError(f"alpha mode needs exponent >= 1, got {exponent}")
    elif mode == "beta":
        if not 0.0 <= exponent <= 1.0:
            raise UnientError(f"beta mode needs exponent in [0, 1], got {exponent}")
    else:
        raise UnientError(f"mode must be 'alpha' or 'beta', got {mode!r}")
    return (1.0 + x) ** exponent - (1.0 + exponent * x ** exponent)
