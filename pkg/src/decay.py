"""
Citation-age decay.

A citation made `interval` years after publication is worth
exp(-lambda * interval); the default lambda = 0.117 gives the weights
1, 0.89, 0.79 for intervals 0, 1, 2.

The decay constant can be re-estimated from a corpus by fitting a line to
ln(count) against citation age, over the ages at or after the peak of the
histogram (or any explicit start age).
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from src.errors import InsufficientData, InvalidRecord

logger = logging.getLogger(__name__)

DEFAULT_LAMBDA = 0.117
AUTO = 'auto'


@dataclass(frozen=True)
class DecayParams:
    lambda_: float = DEFAULT_LAMBDA

    def __post_init__(self):
        if not self.lambda_ > 0:
            raise InvalidRecord(f'lambda must be > 0, got {self.lambda_}')


@dataclass(frozen=True)
class AgeHistogram:
    """Citation age (years) -> number of citations at that age."""
    counts: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        for age, count in self.counts.items():
            if age < 0 or count < 0:
                raise InvalidRecord(f'Negative age or count in histogram: {age} -> {count}')

    def peak_age(self) -> int:
        """Age with the largest count (the smallest such age on ties)."""
        if not any(self.counts.values()):
            raise InsufficientData('Histogram has no positive counts')
        return min(self.counts, key=lambda age: (-self.counts[age], age))

    def total(self) -> int:
        return int(sum(self.counts.values()))


@dataclass(frozen=True)
class FitResult:
    lambda_: float
    r2: float
    start_age: int
    n_points: int

    def as_params(self) -> DecayParams:
        return DecayParams(self.lambda_)


def weight(interval_years, params: DecayParams = DecayParams()):
    """
    exp(-lambda * interval). Accepts a scalar or an array of intervals;
    intervals must already be clamped to >= 0.
    """
    intervals = np.asarray(interval_years, dtype=np.float64)
    assert np.all(intervals >= 0), 'Negative citation intervals must be clamped before weighting'
    weights = np.exp(-params.lambda_ * intervals)
    return float(weights) if weights.ndim == 0 else weights


def age_histogram(corpus) -> AgeHistogram:
    """Count citations per age; negative ages (preprint citations) count as age 0."""
    ages = Counter(max(0, event.interval) for event in corpus.events)
    return AgeHistogram(dict(sorted(ages.items())))


def coeff_of_determination(data: np.ndarray, model: np.ndarray) -> float:
    """1 - SSE/SST. A constant series is explained perfectly by any fit through it."""
    residuals = data - model
    ss_err = np.sum(residuals ** 2)
    ss_tot = np.sum((data - np.mean(data)) ** 2)
    if ss_tot == 0.0:
        return 1.0 if ss_err == 0.0 else 0.0
    return float(1.0 - ss_err / ss_tot)


def fit_lambda(hist: AgeHistogram, start_age: int | str = AUTO) -> FitResult:
    """
    Log-linear least squares of ln(count) on age.

    Ages below start_age and ages with a zero count are left out. The
    returned lambda is the negated slope; it is not forced positive, so a
    rising histogram gives a negative lambda for the caller to inspect.
    """
    if start_age == AUTO:
        start_age = hist.peak_age()
    start_age = int(start_age)

    points = sorted((age, count) for age, count in hist.counts.items() if age >= start_age and count > 0)
    if len(points) < 2:
        raise InsufficientData(f'Need at least two ages with positive counts from age {start_age}, '
                               f'found {len(points)}')

    ages = np.array([age for age, _ in points], dtype=np.float64)
    log_counts = np.log(np.array([count for _, count in points], dtype=np.float64))

    slope, intercept = np.polyfit(ages, log_counts, 1)
    r2 = coeff_of_determination(log_counts, slope * ages + intercept)

    # avoid reporting -0.0 for flat histograms
    lambda_ = float(-slope) + 0.0
    if lambda_ <= 0:
        logger.warning('Fitted decay constant %.6f is not positive (start age %d)', lambda_, start_age)
    return FitResult(lambda_=lambda_, r2=r2, start_age=start_age, n_points=len(points))
