"""Special functions: the polylogarithm normalizer F(z, s) in log space.

F(z, s) = sum_{n>=1} z^n / n^s is the normalizing constant of the Good
distribution. All evaluation happens on ln F with z carried as log_z < 0, so
tiny z (e.g. 1e-5) and very negative s never overflow. Two regimes exist:

- SERIES: streaming log-sum-exp over the terms n*log_z - s*ln(n), processed in
  geometrically growing numpy blocks.
- WOOD: for s below WOOD_THRESHOLD the zeta-sum component vanishes and
  F(z, s) ~ Gamma(1 - s) * (-log_z)^(s - 1).
"""

import logging
import math
from typing import Callable

import numpy as np
from scipy.special import digamma, gammaln

from libgood.exceptions import CapExceededError, DomainError
from libgood.types import (
    SERIES_LOG_TOLERANCE,
    SERIES_MAX_TERMS,
    WOOD_THRESHOLD,
    LogPolylogValue,
    Regime,
)

logger = logging.getLogger(__name__)

_FIRST_BLOCK = 64
_MAX_BLOCK = 65_536


def log_gamma(x: float) -> float:
    """Return ln Gamma(x) for x > 0.

    Raises:
        DomainError: If x <= 0 or x is not finite
    """
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return float(gammaln(x))


def _check_log_z(log_z: float) -> None:
    if not (math.isfinite(log_z) and log_z < 0.0):
        raise DomainError(f"log_z must be negative (0 < z < 1), got {log_z}")


def _stream_log_sum(
    log_term: Callable[[np.ndarray], np.ndarray],
    peak: float,
    first: int = 1,
) -> tuple[float, int]:
    """Sum exp(log_term(n)) for n >= first entirely in log space.

    Terms must be unimodal in n. Summation stops at the first index that lies
    past the peak (n >= peak and the term is not larger than its predecessor)
    whose log term is below the running log-sum by SERIES_LOG_TOLERANCE.

    Returns:
        (log of the sum, number of terms used)

    Raises:
        CapExceededError: If SERIES_MAX_TERMS is reached before stopping
    """
    total = -np.inf
    previous = np.inf
    start = first
    block = _FIRST_BLOCK

    while start <= SERIES_MAX_TERMS:
        stop = min(start + block, SERIES_MAX_TERMS + 1)
        n = np.arange(start, stop, dtype=float)
        terms = log_term(n)

        running = np.logaddexp(total, np.logaddexp.accumulate(terms))
        descending = terms <= np.concatenate(([previous], terms[:-1]))
        done = (n >= peak) & descending & (terms < running - SERIES_LOG_TOLERANCE)

        if done.any():
            idx = int(np.argmax(done))
            return float(running[idx]), int(n[idx]) - first + 1

        total = float(running[-1])
        previous = float(terms[-1])
        start = stop
        block = min(block * 2, _MAX_BLOCK)

    raise CapExceededError(
        f"Series did not reach tolerance within {SERIES_MAX_TERMS} terms",
        value=total,
        iterations=SERIES_MAX_TERMS,
    )


def _series_peak(log_z: float, s: float) -> float:
    """Index of the maximal term of z^n / n^s (1 when terms only decrease)."""
    return max(1.0, s / log_z) if s < 0 else 1.0


def log_polylog_series(log_z: float, s: float) -> LogPolylogValue:
    """Evaluate ln F(z, s) by direct log-domain summation.

    Raises:
        DomainError: If log_z >= 0
        CapExceededError: If the series needs more than SERIES_MAX_TERMS terms
    """
    _check_log_z(log_z)
    value, used = _stream_log_sum(
        lambda n: n * log_z - s * np.log(n),
        _series_peak(log_z, s),
    )
    logger.debug("ln F(%g, %g) = %.15g from %d series terms", log_z, s, value, used)
    return LogPolylogValue(value=value, regime=Regime.SERIES, terms_used=used)


def log_polylog_wood(log_z: float, s: float) -> LogPolylogValue:
    """Evaluate ln F(z, s) with the large-negative-s asymptotic form.

    ln F = ln Gamma(1 - s) + (s - 1) * ln(-log_z)

    Raises:
        DomainError: If log_z >= 0
    """
    _check_log_z(log_z)
    value = log_gamma(1.0 - s) + (s - 1.0) * math.log(-log_z)
    return LogPolylogValue(value=value, regime=Regime.WOOD, terms_used=0)


def log_polylog(log_z: float, s: float) -> LogPolylogValue:
    """Evaluate ln F(z, s), dispatching on the extreme-s threshold.

    This is the single entry point used by the distribution and inference
    modules.
    """
    if s < WOOD_THRESHOLD:
        return log_polylog_wood(log_z, s)
    return log_polylog_series(log_z, s)


def log_polylog_many(log_z: np.ndarray, s: float) -> np.ndarray:
    """Evaluate ln F elementwise, once per distinct log_z value."""
    log_z = np.asarray(log_z, dtype=float)
    unique, inverse = np.unique(log_z, return_inverse=True)
    values = np.array([log_polylog(float(lz), s).value for lz in unique])
    return values[inverse].reshape(log_z.shape)


def log_polylog_ds(log_z: float, s: float) -> float:
    """Return the derivative of ln F(z, s) with respect to s.

    dF/ds = -sum_{n>=2} z^n ln(n) / n^s, summed in log space with the same
    stopping rule as the normalizer. In the asymptotic regime the derivative
    of ln Gamma(1 - s) + (s - 1) ln(-log_z) is used instead, so the result is
    consistent with whatever log_polylog returns.
    """
    _check_log_z(log_z)
    if s < WOOD_THRESHOLD:
        return math.log(-log_z) - float(digamma(1.0 - s))

    log_weighted, _ = _stream_log_sum(
        lambda n: n * log_z - s * np.log(n) + np.log(np.log(n)),
        _series_peak(log_z, s),
        first=2,
    )
    return -math.exp(log_weighted - log_polylog(log_z, s).value)
