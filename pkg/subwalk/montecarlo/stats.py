"""
Confidence intervals for Monte Carlo estimates.
"""

import math
from typing import Sequence, Tuple

import numpy as np
from scipy.stats import norm
from scipy.stats import t as student_t

from ..exceptions import DomainError


def _check_confidence(confidence: float):
    if not 0.0 < confidence < 1.0:
        raise DomainError(f"confidence must lie in (0, 1), got {confidence}")


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    """
    Wilson score interval for a binomial proportion.

    With zero successes the upper end is the exact one-sided bound
    1 - (1 - confidence)^(1/trials) and the lower end is 0.

    Args:
        successes: Number of successes
        trials: Number of trials, at least 1
        confidence: Two-sided confidence level

    Returns:
        (lower, upper)
    """
    _check_confidence(confidence)
    if trials < 1 or not 0 <= successes <= trials:
        raise DomainError(f"invalid binomial counts {successes}/{trials}")
    if successes == 0:
        return 0.0, 1.0 - (1.0 - confidence) ** (1.0 / trials)

    z = float(norm.ppf(0.5 + 0.5 * confidence))
    p = successes / trials
    denominator = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denominator
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denominator
    return max(0.0, center - half), min(1.0, center + half)


def t_interval(
    values: Sequence[float], confidence: float = 0.95
) -> Tuple[float, float, float, float]:
    """
    Student-t interval for a mean.

    Returns:
        (mean, standard error, lower, upper)
    """
    _check_confidence(confidence)
    data = np.asarray(values, dtype=float)
    if data.size == 0:
        raise DomainError("cannot average an empty sample")
    mean = float(np.mean(data))
    if data.size == 1:
        return mean, math.inf, -math.inf, math.inf
    stderr = float(np.std(data, ddof=1)) / math.sqrt(data.size)
    quantile = float(student_t.ppf(0.5 + 0.5 * confidence, data.size - 1))
    return mean, stderr, mean - quantile * stderr, mean + quantile * stderr
