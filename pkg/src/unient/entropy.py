"""Unified-(q,s) entropy and its one-parameter limit families.

All entropies are in nats.  The two-parameter family

    S(rho) = [(tr rho^q)^s - 1] / ((1 - q) s)

is evaluated directly away from its singular lines and delegated to the
closed-form limits near them: the Renyi family as s -> 0, the Tsallis family
at s = 1, and the von Neumann entropy as q -> 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularParametersError

REGIME_ATOL = 1e-6       # distance to a singular line that triggers delegation
EIG_CUTOFF = 1e-15       # eigenvalues below this are excluded from sums

GENERIC = "generic"
RENYI_LIMIT = "renyi_limit"
TSALLIS_VALUE = "tsallis_value"
VON_NEUMANN_LIMIT = "von_neumann_limit"


def classify_regime(q: float, s: float) -> str:
    if abs(q - 1.0) < REGIME_ATOL:
        return VON_NEUMANN_LIMIT
    if abs(s) < REGIME_ATOL:
        return RENYI_LIMIT
    if abs(s - 1.0) < REGIME_ATOL:
        return TSALLIS_VALUE
    return GENERIC


@dataclass(frozen=True)
class UnifiedParams:
    """The (q, s) parameter pair with its limit-regime classification."""

    q: float
    s: float
    regime: str = field(init=False)

    def __post_init__(self):
        q = float(self.q)
        s = float(self.s)
        if q < 0 or s < 0:
            raise SingularParametersError(f"q and s must be nonnegative, got ({q}, {s})")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "regime", classify_regime(q, s))


def _probabilities(spectrum) -> np.ndarray:
    vals = np.asarray(getattr(spectrum, "eigenvalues", spectrum), dtype=np.float64)
    return np.clip(vals, 0.0, 1.0)


def _trace_power(lam: np.ndarray, q: float) -> float:
    """tr rho^q over the numerically nonzero part of the spectrum.

    At q = 0 this is rank counting: tr rho^0 = rank.
    """
    lam = lam[lam > EIG_CUTOFF]
    if q == 0.0:
        return float(lam.size)
    return float(np.sum(lam ** q))


def von_neumann_entropy(spectrum) -> float:
    """-sum(lam ln lam), with 0 ln 0 = 0."""
    lam = _probabilities(spectrum)
    lam = lam[lam > EIG_CUTOFF]
    return float(-np.sum(lam * np.log(lam)))


def renyi_entropy(spectrum, q: float) -> float:
    """ln(tr rho^q) / (1 - q); delegates to von Neumann at q = 1."""
    if abs(q - 1.0) < REGIME_ATOL:
        return von_neumann_entropy(spectrum)
    return math.log(_trace_power(_probabilities(spectrum), q)) / (1.0 - q)


def tsallis_entropy(spectrum, q: float) -> float:
    """(tr rho^q - 1) / (1 - q); delegates to von Neumann at q = 1."""
    if abs(q - 1.0) < REGIME_ATOL:
        return von_neumann_entropy(spectrum)
    return (_trace_power(_probabilities(spectrum), q) - 1.0) / (1.0 - q)


def unified_entropy(spectrum, params: UnifiedParams) -> float:
    """Unified-(q,s) entropy of a spectrum, in nats.

    The generic formula is used away from the singular lines; within
    REGIME_ATOL of q = 1, s = 0, or s = 1 the corresponding closed-form
    limit is evaluated instead, which avoids catastrophic cancellation in
    the (1-q)s denominator.
    """
    if params.q == 0.0 and params.s == 0.0:
        raise SingularParametersError("unified entropy is singular at q = s = 0")
    regime = params.regime
    if regime == VON_NEUMANN_LIMIT:
        return von_neumann_entropy(spectrum)
    if regime == RENYI_LIMIT:
        return renyi_entropy(spectrum, params.q)
    if regime == TSALLIS_VALUE:
        return tsallis_entropy(spectrum, params.q)
    trq = _trace_power(_probabilities(spectrum), params.q)
    return (trq ** params.s - 1.0) / ((1.0 - params.q) * params.s)
