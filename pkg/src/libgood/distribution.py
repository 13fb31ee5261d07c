"""The Good distribution: pmf, cdf, quantile, sampling, generating functions and moments.

P(X = x) = z^(x+1) (x+1)^(-s) / F(z, s) for x = 0, 1, 2, ...

Probabilities originate in log space; linear-space accumulation sums
exponentials of log_pmf in increasing-x order.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from numpy.typing import ArrayLike

from libgood.exceptions import CapExceededError, DomainError
from libgood.specfun import log_polylog
from libgood.types import (
    DEFAULT_TH,
    QUANTILE_MASS_CEILING,
    QUANTILE_MAX_SUPPORT,
    DispersionKind,
    GoodParams,
)

logger = logging.getLogger(__name__)

_ACCUMULATE_BLOCK = 1024
_EQUI_TOLERANCE = 1e-9
_SATURATION = 1e-17  # Relative size of a mass that no longer moves the running sum


def _as_support(x: ArrayLike) -> np.ndarray:
    values = np.asarray(x)
    as_int = np.asarray(values, dtype=np.int64)
    if np.any(as_int != values) or np.any(as_int < 0):
        raise DomainError("x must contain non-negative integers")
    return as_int


def _log_norm(params: GoodParams, shift: float = 0.0) -> float:
    """ln F(z, s - shift)."""
    return log_polylog(params.log_z, params.s - shift).value


def mode(params: GoodParams) -> int:
    """Support point of maximal mass.

    The log term (x+1) log_z - s ln(x+1) peaks at x + 1 = s / log_z for s < 0.
    """
    if params.s >= 0:
        return 0
    peak = params.s / params.log_z
    candidates = np.array([max(math.floor(peak) - 1, 0), max(math.ceil(peak) - 1, 0)])
    return int(candidates[np.argmax(log_pmf(candidates, params))])


def log_pmf(x: ArrayLike, params: GoodParams) -> np.ndarray | float:
    """Natural log of the probability mass at x.

    Raises:
        DomainError: If any x is negative or fractional
    """
    support = _as_support(x)
    n = support + 1.0
    result = n * params.log_z - params.s * np.log(n) - _log_norm(params)
    return float(result) if result.ndim == 0 else result


def pmf(x: ArrayLike, params: GoodParams) -> np.ndarray | float:
    """Probability mass at x."""
    return np.exp(log_pmf(x, params))


def _continue_sum(total: float, masses: np.ndarray) -> np.ndarray:
    """Cumulative sums of masses continuing from total, matching one long cumsum."""
    return np.cumsum(np.concatenate(([total], masses)))[1:]


def _cumulative_blocks(params: GoodParams) -> Iterator[np.ndarray]:
    """Running cdf values for x = 0, 1, 2, ... in consecutive blocks.

    The stream ends once past the mode a block's last mass no longer moves
    the sum; every later cdf value equals the final total.

    Raises:
        CapExceededError: If QUANTILE_MAX_SUPPORT points do not saturate
    """
    past_mode = mode(params)
    log_f = _log_norm(params)
    total = 0.0
    start = 0

    while True:
        if start >= QUANTILE_MAX_SUPPORT:
            raise CapExceededError(
                f"Mass accumulation exceeded {QUANTILE_MAX_SUPPORT} support points",
                value=total,
                iterations=start,
            )
        n = np.arange(start, min(start + _ACCUMULATE_BLOCK, QUANTILE_MAX_SUPPORT)) + 1.0
        masses = np.exp(n * params.log_z - params.s * np.log(n) - log_f)
        block = _continue_sum(total, masses)
        total = float(block[-1])
        start += masses.size
        yield block

        if start > past_mode and masses[-1] <= total * _SATURATION:
            logger.debug("Accumulated mass saturated at %.17g after %d points", total, start)
            return


def cdf(q: ArrayLike, params: GoodParams, lower_tail: bool = True) -> np.ndarray | float:
    """P(X <= q), or P(X > q) when lower_tail is False.

    q may be negative; there is no mass below 0. Values of q beyond the point
    where the accumulated mass saturates share the saturated total.

    Raises:
        DomainError: If any q is NaN
        CapExceededError: If the mass does not saturate within QUANTILE_MAX_SUPPORT points
    """
    q_arr = np.asarray(q, dtype=float)
    if np.any(np.isnan(q_arr)):
        raise DomainError("q must not be NaN")
    q_int = np.clip(np.floor(q_arr), -1, QUANTILE_MAX_SUPPORT).astype(np.int64)
    top = int(q_int.max()) if q_int.size else -1

    blocks: list[np.ndarray] = []
    filled = 0
    if top >= 0:
        for block in _cumulative_blocks(params):
            blocks.append(block)
            filled += block.size
            if filled > top:
                break
    table = np.concatenate(blocks) if blocks else np.zeros(1)

    lower = np.where(q_int < 0, 0.0, table[np.clip(q_int, 0, table.size - 1)])
    lower = np.minimum(lower, 1.0)
    result = lower if lower_tail else 1.0 - lower
    return float(result) if result.ndim == 0 else result


def quantile(p: ArrayLike, params: GoodParams, lower_tail: bool = True) -> np.ndarray | int:
    """Smallest x with P(X <= x) >= p (right-continuous generalized inverse).

    With lower_tail False the target is 1 - p. Targets are capped at
    QUANTILE_MASS_CEILING so p = 1 resolves to a finite support point.

    Raises:
        DomainError: If any p lies outside [0, 1]
        CapExceededError: If QUANTILE_MAX_SUPPORT points do not reach the target
    """
    p_arr = np.asarray(p, dtype=float)
    if np.any(~np.isfinite(p_arr)) or np.any((p_arr < 0.0) | (p_arr > 1.0)):
        raise DomainError("p must lie in [0, 1]")

    target = p_arr if lower_tail else 1.0 - p_arr
    target = np.minimum(target, QUANTILE_MASS_CEILING)
    needed = float(target.max()) if target.size else 0.0

    blocks: list[np.ndarray] = []
    total = 0.0
    for block in _cumulative_blocks(params):
        blocks.append(block)
        total = float(block[-1])
        if total >= needed:
            break
    else:
        # Saturated: the remaining targets sit above the attainable mass
        logger.warning("Accumulated mass saturated at %.17g below target %.17g", total, needed)
        target = np.minimum(target, total)

    cumulative = np.concatenate(blocks)
    result = np.searchsorted(cumulative, target, side="left").astype(np.int64)
    return int(result) if result.ndim == 0 else result


def sample(
    n: int,
    params: GoodParams,
    th: float = DEFAULT_TH,
    seed: int | None = None,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Draw n variates by inverse transform over the tabulated cdf on [q1, q2].

    q1 = quantile(th) and q2 = quantile(1 - th); draws outside the table
    collapse onto the closed interval endpoints. Uniforms come from numpy's
    PCG64 generator seeded with seed unless an explicit rng is given.

    Raises:
        DomainError: If n < 1 or th is outside (0, 0.5)
    """
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if not 0.0 < th < 0.5:
        raise DomainError(f"th must lie in (0, 0.5), got {th}")

    q1 = quantile(th, params)
    q2 = quantile(1.0 - th, params)
    support = np.arange(q1, q2 + 1)
    table = cdf(support, params)

    generator = rng if rng is not None else np.random.default_rng(seed)
    u = generator.random(n)
    idx = np.minimum(np.searchsorted(table, u, side="left"), support.size - 1)
    return support[idx]


def _moment_ratio(params: GoodParams, shift: int, log_f: float) -> float:
    """F(z, s - shift) / F(z, s)."""
    return math.exp(_log_norm(params, shift) - log_f)


def mean(params: GoodParams) -> float:
    """E[X] = F(z, s-1) / F(z, s) - 1."""
    return _moment_ratio(params, 1, _log_norm(params)) - 1.0


def variance(params: GoodParams) -> float:
    """V[X] = F(z, s-2) / F(z, s) - (F(z, s-1) / F(z, s))^2."""
    log_f = _log_norm(params)
    r1 = _moment_ratio(params, 1, log_f)
    return _moment_ratio(params, 2, log_f) - r1 * r1


def raw_moment(k: int, params: GoodParams) -> float:
    """E[X^k] = (1/F) sum_{m=0..k} (-1)^(m+k) C(k, m) F(z, s-m)."""
    if k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    log_f = _log_norm(params)
    return math.fsum(
        (-1) ** (m + k) * math.comb(k, m) * _moment_ratio(params, m, log_f)
        for m in range(k + 1)
    )


def dispersion_index(params: GoodParams) -> float:
    """Variance to mean ratio."""
    mu = mean(params)
    if mu <= 0.0:
        raise DomainError(f"Dispersion index undefined for mean {mu}")
    return variance(params) / mu


def classify_dispersion(index: float) -> DispersionKind:
    """Label a dispersion index against the Poisson benchmark of 1."""
    if abs(index - 1.0) <= _EQUI_TOLERANCE:
        return DispersionKind.EQUI
    return DispersionKind.UNDER if index < 1.0 else DispersionKind.OVER


@dataclass(frozen=True)
class DispersionCell:
    """One (z, s) point of a dispersion grid."""

    z: float
    s: float
    index: float
    kind: DispersionKind


def dispersion_grid(z_values: ArrayLike, s_values: ArrayLike) -> list[DispersionCell]:
    """Tabulate the dispersion index over a (z, s) grid, z-major."""
    cells = []
    for z in np.asarray(z_values, dtype=float):
        for s in np.asarray(s_values, dtype=float):
            index = dispersion_index(GoodParams.from_z(float(z), float(s)))
            cells.append(DispersionCell(float(z), float(s), index, classify_dispersion(index)))
    return cells


def pgf(t: float, params: GoodParams) -> float:
    """Probability generating function G(t) = F(z t, s) / (t F(z, s)).

    Negative t goes through F(-w, s) = 2^(1-s) F(w^2, s) - F(w, s) with
    w = |t| z, so both branches use the same normalizer.

    Raises:
        DomainError: If t = 0 or |t z| >= 1
    """
    if not math.isfinite(t) or t == 0.0:
        raise DomainError(f"pgf requires a finite t != 0, got {t}")
    log_abs_t = math.log(abs(t))
    shifted = params.log_z + log_abs_t
    if not shifted < 0.0:
        raise DomainError(f"pgf requires |t * z| < 1, got t={t}, z={params.z}")

    log_shifted = log_polylog(shifted, params.s).value
    log_scale = log_shifted - _log_norm(params) - log_abs_t
    if t > 0.0:
        return math.exp(log_scale)
    log_doubled = (1.0 - params.s) * math.log(2.0) + log_polylog(2.0 * shifted, params.s).value
    return -math.exp(log_scale) * math.expm1(log_doubled - log_shifted)


def mgf(t: float, params: GoodParams) -> float:
    """Moment generating function M(t) = exp(-t) F(z e^t, s) / F(z, s).

    Raises:
        DomainError: Unless z * exp(t) < 1
    """
    shifted = params.log_z + t
    if not shifted < 0.0:
        raise DomainError(f"mgf requires z * exp(t) < 1, got t={t}, z={params.z}")
    return math.exp(log_polylog(shifted, params.s).value - _log_norm(params) - t)


def expected_frequencies(n: int, params: GoodParams, cells: int) -> np.ndarray:
    """Expected counts for x = 0 .. cells-2 plus an open last cell x >= cells-1."""
    if cells < 1:
        raise DomainError(f"cells must be positive, got {cells}")
    probs = np.asarray(pmf(np.arange(cells - 1), params), dtype=float).reshape(-1)
    tail = cdf(cells - 2, params, lower_tail=False) if cells > 1 else 1.0
    return n * np.append(probs, max(tail, 0.0))
