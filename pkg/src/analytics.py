"""
Corpus-level statistics: the summary table, the citation count versus
weighted citation regression, popularity/prestige quadrants and the top-N
tables.
"""
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Literal

import numpy as np
import pandas as pd
from scipy.stats import norm

from src.corpus import ArticleId, ArticleScore, Corpus, normalize_key
from src.crsm import CrsmRow, rank_descending
from src.errors import CitedArticleOutsideUniverse, DegenerateX, EmptyInput, InsufficientData
from src.utils import render

MEDIAN = 'median'


@dataclass(frozen=True)
class CorpusSummary:
    total_articles: int
    cited_articles: int
    cited_ratio: float
    total_citations: int
    mean_citations_per_cited_article: float
    citing_articles: int
    cited_per_citing: float
    citing_journals: int = 0

    def to_frame(self) -> pd.DataFrame:
        """Two-column table laid out like a printed summary, reals at 2 dp."""
        rows = [
            ('Total number of articles', str(self.total_articles)),
            ('Number of cited articles', str(self.cited_articles)),
            ('Ratio of cited articles', f'{render(100 * self.cited_ratio, 2)}%'),
            ('Total times cited', str(self.total_citations)),
            ('Average number of citations of each cited article', render(self.mean_citations_per_cited_article, 2)),
            ('Number of citing articles', str(self.citing_articles)),
            ('Number of cited articles per citing article', render(self.cited_per_citing, 2)),
            ('Number of citing journals', str(self.citing_journals)),
        ]
        return pd.DataFrame(rows, columns=['statistic', 'value'])


def summarize_counts(total_articles: int, cited_articles: int, total_citations: int,
                     citing_articles: int, citing_journals: int = 0) -> CorpusSummary:
    return CorpusSummary(
        total_articles=total_articles,
        cited_articles=cited_articles,
        cited_ratio=cited_articles / total_articles if total_articles else 0.0,
        total_citations=total_citations,
        mean_citations_per_cited_article=total_citations / cited_articles if cited_articles else 0.0,
        citing_articles=citing_articles,
        cited_per_citing=total_citations / citing_articles if citing_articles else 0.0,
        citing_journals=citing_journals,
    )


def corpus_summary(corpus: Corpus, universe: Iterable[ArticleId]) -> CorpusSummary:
    """
    The universe is every article that could have been cited, including
    the ones that never were.
    """
    universe = {normalize_key(article) for article in universe}
    outside = set(corpus.article_pub_year) - universe
    if outside:
        raise CitedArticleOutsideUniverse(outside)
    return summarize_counts(total_articles=len(universe),
                            cited_articles=len(corpus.article_pub_year),
                            total_citations=len(corpus.events),
                            citing_articles=len(corpus.citing_articles()),
                            citing_journals=len(corpus.citing_journals()))


def linear_r2(points: Iterable[tuple[float, float]]) -> float:
    """Coefficient of determination of the least-squares line y = a + b x."""
    points = np.asarray(list(points), dtype=np.float64)
    if len(points) < 2:
        raise InsufficientData('linear_r2 needs at least two points')
    x, y = points[:, 0], points[:, 1]
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy, sxy = np.dot(dx, dx), np.dot(dy, dy), np.dot(dx, dy)
    if sxx == 0:
        raise DegenerateX('All x values are equal')
    if syy == 0:
        return 0.0
    return float(min(1.0, sxy * sxy / (sxx * syy)))


class QuadrantLabel(Enum):
    LowPop_LowPrestige = 'LowPop_LowPrestige'
    LowPop_HighPrestige = 'LowPop_HighPrestige'
    HighPop_LowPrestige = 'HighPop_LowPrestige'
    HighPop_HighPrestige = 'HighPop_HighPrestige'

    @classmethod
    def of(cls, high_pop: bool, high_prestige: bool) -> 'QuadrantLabel':
        return cls(f"{'High' if high_pop else 'Low'}Pop_{'High' if high_prestige else 'Low'}Prestige")


def _threshold(values: np.ndarray, threshold) -> float:
    return float(np.median(values)) if threshold == MEDIAN else float(threshold)


def classify_quadrants(scores: Iterable[ArticleScore], pop_threshold: float | str = MEDIAN,
                       prestige_threshold: float | str = MEDIAN) -> dict[ArticleId, QuadrantLabel]:
    """High means strictly above the threshold; thresholds default to the medians."""
    scores = list(scores)
    if not scores:
        raise EmptyInput('classify_quadrants needs at least one article')
    counts = np.array([s.citation_count for s in scores], dtype=np.float64)
    weighted = np.array([s.weighted_citation for s in scores], dtype=np.float64)
    pop_cut = _threshold(counts, pop_threshold)
    prestige_cut = _threshold(weighted, prestige_threshold)
    return {s.article: QuadrantLabel.of(s.citation_count > pop_cut, s.weighted_citation > prestige_cut)
            for s in sorted(scores, key=lambda s: s.article)}


def quadrant_counts(labels: dict[ArticleId, QuadrantLabel]) -> dict[QuadrantLabel, int]:
    counter = Counter(labels.values())
    return {label: counter.get(label, 0) for label in QuadrantLabel}


def top_n_overlap(scores: Iterable[ArticleScore], n: int) -> int:
    """Articles found in the top n of both the citation and the weighted ranking."""
    scores = list(scores)
    by_count = rank_descending((s.article, s.citation_count) for s in scores).rows[:n]
    by_weight = rank_descending((s.article, s.weighted_citation) for s in scores).rows[:n]
    return len({a for a, _ in by_count} & {a for a, _ in by_weight})


TopOrder = Literal['citation', 'weighted', 'delta_desc', 'delta_asc']

_ORDER_KEYS = {
    'citation': lambda r: (r.citation_rank, r.article),
    'weighted': lambda r: (r.weighted_position, r.article),
    'delta_desc': lambda r: (-r.delta, r.article),
    'delta_asc': lambda r: (r.delta, r.article),
}

TOP_COLUMNS = ['cited_id', 'citation_count', 'weighted_citation', 'citation_rank', 'weighted_rank',
               'intermedium', 'delta']


def top_n_report(scores: Iterable[ArticleScore], crsm_rows: Iterable[CrsmRow], n: int,
                 order: TopOrder = 'citation') -> pd.DataFrame:
    """Top n articles under `order`, both ranks shown, reals at 2 dp."""
    assert n >= 1, 'n must be >= 1'
    if order not in _ORDER_KEYS:
        raise ValueError(f'Unknown order {order!r}')
    known = {s.article for s in scores}
    rows = [row for row in crsm_rows if row.article in known]
    rows = sorted(rows, key=_ORDER_KEYS[order])[:n]
    records = [(r.article, r.citation_count, render(r.weighted_citation, 2), r.citation_rank, r.weighted_rank,
                render(r.intermedium, 2), render(r.delta, 2)) for r in rows]
    return pd.DataFrame(records, columns=TOP_COLUMNS)


def qq_points(rows: Iterable[CrsmRow]) -> list[tuple[float, float]]:
    """
    (standard normal quantile, standardized delta) pairs for a normal QQ
    plot, plotting positions (i - 0.5) / n.
    """
    deltas = np.sort(np.array([row.delta for row in rows], dtype=np.float64))
    if deltas.size == 0:
        raise EmptyInput('qq_points needs at least one row')
    std = deltas.std()
    standardized = (deltas - deltas.mean()) / std if std > 0 else np.zeros_like(deltas)
    quantiles = norm.ppf((np.arange(1, deltas.size + 1) - 0.5) / deltas.size)
    return [(float(q), float(d)) for q, d in zip(quantiles, standardized)]
