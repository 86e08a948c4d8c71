"""
Citation Ranking Similarity Measure.

Citation counts are discrete and tie a lot; weighted citation scores are
continuous and rarely tie. To compare an article's popularity with its
prestige, both lists are sorted descending and walked position by position:

    - each citation-count tie group of size k sitting at positions p..p+k-1
      gets the factor F = k * CC / (CW_p + ... + CW_{p+k-1}), where CW_q is
      the weighted score at position q of the weighted list
    - the intermedium at weighted position q is CW_q * F_q
    - an article's delta is its own citation count minus the intermedium at
      its own weighted position

An article that holds the same place in both lists, alone in its tie
group, gets delta = 0. Weighted ties are broken by ascending article id so
that positions 1..N are strict.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
import pandas as pd
from scipy import stats

from src.corpus import ArticleId, ArticleScore
from src.errors import CrsmConsistencyError, DuplicateArticle, EmptyInput
from src.utils import render, write_table

logger = logging.getLogger(__name__)

CRSM_COLUMNS = ('cited_id', 'citation_count', 'weighted_citation', 'citation_rank', 'weighted_rank',
                'factor', 'intermedium', 'delta')


@dataclass(frozen=True)
class RankedTable:
    """
    rows    : (article, value), descending by value
    groups  : (start_position, size) of each run of equal values, 1-based
    rank_of : article -> competition rank (start position of its group)
    """
    rows: tuple[tuple[ArticleId, float], ...]
    groups: tuple[tuple[int, int], ...]
    rank_of: dict

    def __len__(self):
        return len(self.rows)

    def position_of(self) -> dict:
        return {article: position for position, (article, _) in enumerate(self.rows, start=1)}

    def values(self) -> np.ndarray:
        return np.array([value for _, value in self.rows], dtype=np.float64)


def rank_descending(values: Iterable[tuple[ArticleId, float]],
                    tiebreak: Callable[[ArticleId], object] | None = None) -> RankedTable:
    """
    Competition ranking (1, 2, 2, 4): ties share the rank of their first
    position. Within a tie group rows follow `tiebreak` (ascending article
    id by default); the groups themselves do not depend on it.
    """
    values = list(values)
    seen = set()
    for article, _ in values:
        if article in seen:
            raise DuplicateArticle(article)
        seen.add(article)

    tiebreak = tiebreak or (lambda article: article)
    rows = tuple(sorted(values, key=lambda row: (-row[1], tiebreak(row[0]))))

    ranks = stats.rankdata(-np.array([value for _, value in rows], dtype=np.float64), method='min').astype(int)
    starts, sizes = np.unique(ranks, return_counts=True)
    groups = tuple((int(start), int(size)) for start, size in zip(starts, sizes))
    rank_of = {article: int(rank) for (article, _), rank in zip(rows, ranks)}
    return RankedTable(rows=rows, groups=groups, rank_of=rank_of)


def rank_uniqueness(table: RankedTable) -> tuple[int, int]:
    """(number of distinct ranks, number of articles whose rank repeats an earlier one)."""
    return len(table.groups), len(table) - len(table.groups)


@dataclass(frozen=True)
class CrsmRow:
    article: ArticleId
    citation_count: int
    weighted_citation: float
    citation_rank: int
    weighted_rank: int
    factor: float
    intermedium: float
    delta: float
    weighted_position: int = 0
    group_size: int = 1
    zero_weight: bool = False

    def in_own_group_span(self) -> bool:
        """True when the weighted position lies inside the positions of its citation tie group."""
        return self.citation_rank <= self.weighted_position < self.citation_rank + self.group_size


def crsm(scores: Iterable[ArticleScore]) -> list[CrsmRow]:
    """
    Per-article delta between popularity and prestige, in citation-rank order
    (ties by article id).

    A tie group whose weighted positions all hold 0 has no factor; those
    positions get factor 0 and intermedium 0, so the affected articles report
    delta = citation count and zero_weight = True.
    """
    scores = list(scores)
    if not scores:
        raise EmptyInput('crsm needs at least one article')

    counts = rank_descending((s.article, s.citation_count) for s in scores)
    weights = rank_descending((s.article, s.weighted_citation) for s in scores)
    n = len(scores)

    cw = weights.values()
    factor = np.zeros(n, dtype=np.float64)
    zero_weight = np.zeros(n, dtype=bool)
    group_size_at = {}
    for start, size in counts.groups:
        stop = start - 1 + size
        if stop > n:
            raise CrsmConsistencyError(f'Tie group at {start} of size {size} overruns {n} weighted positions')
        count = counts.rows[start - 1][1]
        cw_sum = cw[start - 1:stop].sum()
        if cw_sum == 0:
            logger.warning('Citation tie group at rank %d (count %s) has zero weighted score', start, count)
            zero_weight[start - 1:stop] = True
        else:
            factor[start - 1:stop] = size * count / cw_sum
        for article, _ in counts.rows[start - 1:stop]:
            group_size_at[article] = size
    intermedium = cw * factor

    by_article = {s.article: s for s in scores}
    weighted_position = weights.position_of()
    rows = []
    for article, _ in counts.rows:
        score = by_article[article]
        q = weighted_position[article] - 1
        rows.append(CrsmRow(article=article,
                            citation_count=score.citation_count,
                            weighted_citation=score.weighted_citation,
                            citation_rank=counts.rank_of[article],
                            weighted_rank=weights.rank_of[article],
                            factor=float(factor[q]),
                            intermedium=float(intermedium[q]),
                            delta=float(score.citation_count - intermedium[q]),
                            weighted_position=q + 1,
                            group_size=group_size_at[article],
                            zero_weight=bool(zero_weight[q])))
    return rows


@dataclass(frozen=True)
class DeltaDistribution:
    mean: float
    std: float
    excess_kurtosis: float | None  # None when the variance is zero (not defined)
    histogram: tuple[tuple[float, int], ...]
    n: int

    @property
    def leptokurtic(self) -> bool:
        return self.excess_kurtosis is not None and self.excess_kurtosis > 0


def delta_distribution(rows: Iterable[CrsmRow], bin_width: float = 1.0) -> DeltaDistribution:
    """Population moments of the deltas and a histogram with bins centered on multiples of bin_width."""
    deltas = np.array([row.delta for row in rows], dtype=np.float64)
    if deltas.size == 0:
        raise EmptyInput('delta_distribution needs at least one row')
    assert bin_width > 0, 'bin_width must be positive'

    mean = deltas.mean()
    m2 = np.mean((deltas - mean) ** 2)
    kurtosis = None if m2 <= 1e-24 else float(stats.kurtosis(deltas, fisher=True, bias=True))

    bins = np.floor(deltas / bin_width + 0.5).astype(np.int64)
    centers, counts = np.unique(bins, return_counts=True)
    histogram = tuple((float(c * bin_width) + 0.0, int(k)) for c, k in zip(centers, counts))
    return DeltaDistribution(mean=float(mean), std=float(np.sqrt(m2)), excess_kurtosis=kurtosis,
                             histogram=histogram, n=int(deltas.size))


def within_group_spread(rows: Iterable[CrsmRow]) -> tuple[float, float] | None:
    """
    Mean and standard deviation of delta over articles that share their
    citation rank and whose weighted position stays inside their group's span.
    """
    deltas = np.array([row.delta for row in rows if row.group_size > 1 and row.in_own_group_span()])
    if deltas.size == 0:
        return None
    return float(deltas.mean()), float(deltas.std())


def crsm_to_frame(rows: Iterable[CrsmRow], digits: int = 6) -> pd.DataFrame:
    records = [(r.article, r.citation_count, render(r.weighted_citation, digits), r.citation_rank,
                r.weighted_rank, render(r.factor, digits), render(r.intermedium, digits), render(r.delta, digits))
               for r in rows]
    return pd.DataFrame(records, columns=list(CRSM_COLUMNS))


def write_crsm(rows: Iterable[CrsmRow], path, delimiter='\t'):
    return write_table(crsm_to_frame(rows), path, delimiter)
