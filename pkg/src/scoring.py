"""
Weighted citation scoring.

The prestige of a cited article is the sum over its citing events of

    exp(-lambda * max(0, citation_year - pub_year)) * AI(citing_journal, citation_year)

where AI is the Article Influence of the citing journal in the citation
year, AI = 0.01 * Eigenfactor / alpha. Popularity is the plain number of
citing events. Author scores add up the prestige of their publications.
"""
import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, Literal, Mapping

import numpy as np
import pandas as pd

from src.corpus import ArticleId, ArticleScore, Corpus, article_influence, normalize_key
from src.decay import DecayParams, weight
from src.errors import InvalidConfig, InvalidRecord, UnknownArticle
from src.utils import read_table, render, write_table

logger = logging.getLogger(__name__)

SCORE_COLUMNS = ('cited_id', 'citation_count', 'weighted_citation', 'missing_journal_events')


@dataclass(frozen=True)
class MissingScorePolicy:
    """
    What to do when a citing journal has no score for the citation year.

    zero          : the citation is worth nothing
    nearest_year  : borrow the closest scored year within max_year_gap,
                    earlier year first on ties; worth nothing beyond the gap
    """
    mode: Literal['zero', 'nearest_year'] = 'zero'
    max_year_gap: int = 0

    def __post_init__(self):
        if self.mode not in ('zero', 'nearest_year'):
            raise InvalidConfig(f'Unknown missing-score policy {self.mode!r}')
        if self.max_year_gap < 0:
            raise InvalidConfig(f'max_year_gap must be >= 0, got {self.max_year_gap}')

    @classmethod
    def parse(cls, text: str) -> 'MissingScorePolicy':
        """'zero' or 'nearest:K'."""
        text = text.strip().lower()
        if text == 'zero':
            return cls()
        match = re.fullmatch(r'nearest:(\d+)', text)
        if match is None:
            raise InvalidConfig(f'Missing-score policy must be "zero" or "nearest:K", got {text!r}')
        return cls('nearest_year', int(match.group(1)))

    def __str__(self):
        return 'zero' if self.mode == 'zero' else f'nearest:{self.max_year_gap}'


class InfluenceLookup:
    """Resolves (journal, year) to an Article Influence score under a policy."""

    def __init__(self, corpus: Corpus, policy: MissingScorePolicy):
        self.scores = corpus.scores
        self.policy = policy
        self._cache = {}

    def __call__(self, journal: str, year: int) -> tuple[float, bool]:
        """Return (AI, missing)."""
        key = (journal, year)
        if key not in self._cache:
            self._cache[key] = self._resolve(journal, year)
        return self._cache[key]

    def _resolve(self, journal, year):
        score = self.scores.get((journal, year))
        if score is not None:
            return score.article_influence, False
        if self.policy.mode == 'nearest_year':
            for gap in range(1, self.policy.max_year_gap + 1):
                for candidate in (year - gap, year + gap):
                    score = self.scores.get((journal, candidate))
                    if score is not None:
                        return score.article_influence, False
        return 0.0, True


def weighted_citation(article: ArticleId, corpus: Corpus, params: DecayParams | None = DecayParams(),
                      policy: MissingScorePolicy = MissingScorePolicy()) -> ArticleScore:
    """
    Score one cited article. params=None skips the time weighting, which is
    the simplified recipe: just add up the citing journals' AI.
    """
    article = normalize_key(article)
    lookup = InfluenceLookup(corpus, policy)
    total = 0.0
    missing = clamped = 0
    events = corpus.events_for(article)
    for event in events:
        interval = event.interval
        if interval < 0:
            clamped += 1
            interval = 0
        ai, is_missing = lookup(event.citing_journal, event.citation_year)
        missing += is_missing
        total += (1.0 if params is None else weight(interval, params)) * ai
    return ArticleScore(article=article, citation_count=len(events), weighted_citation=total,
                        missing_journal_events=missing, clamped_intervals=clamped)


def score_all(corpus: Corpus, params: DecayParams | None = DecayParams(),
              policy: MissingScorePolicy = MissingScorePolicy(),
              universe: Iterable[ArticleId] | None = None) -> list[ArticleScore]:
    """
    Score every cited article in one pass over the events table, sorted by
    article id. Articles listed in `universe` but never cited get zero rows.
    """
    frame = corpus.events_frame.copy()
    lookup = InfluenceLookup(corpus, policy)

    if len(frame):
        interval = frame['citation_year'] - frame['cited_pub_year']
        frame['clamped'] = interval < 0
        interval = interval.clip(lower=0)
        resolved = [lookup(j, y) for j, y in zip(frame['citing_journal'], frame['citation_year'])]
        frame['ai'] = [ai for ai, _ in resolved]
        frame['missing'] = [missing for _, missing in resolved]
        frame['weight'] = 1.0 if params is None else weight(interval.to_numpy(), params)
        frame['contribution'] = frame['weight'] * frame['ai']
    else:
        frame = frame.assign(clamped=False, missing=False, contribution=0.0)

    grouped = frame.groupby('cited_id', sort=True).agg(
        citation_count=('citing_id', 'size'),
        weighted_citation=('contribution', 'sum'),
        missing_journal_events=('missing', 'sum'),
        clamped_intervals=('clamped', 'sum'),
    )

    scores = {article: ArticleScore(article=article,
                                    citation_count=int(row.citation_count),
                                    weighted_citation=float(row.weighted_citation),
                                    missing_journal_events=int(row.missing_journal_events),
                                    clamped_intervals=int(row.clamped_intervals))
              for article, row in grouped.iterrows()}

    for article in universe or ():
        article = normalize_key(article)
        scores.setdefault(article, ArticleScore(article=article, citation_count=0, weighted_citation=0.0))

    clamped = int(grouped['clamped_intervals'].sum()) if len(grouped) else 0
    if clamped:
        logger.warning('%d citation(s) dated before publication; interval clamped to 0', clamped)
    missing = int(grouped['missing_journal_events'].sum()) if len(grouped) else 0
    if missing:
        logger.warning('%d citation(s) from journal-years without a score (policy %s)', missing, policy)

    return [scores[article] for article in sorted(scores)]


# authors ------------------------------------------------------------------------

@dataclass(frozen=True)
class AuthorScore:
    author: str
    publications: tuple[ArticleId, ...] = ()
    weighted_citation_total: float = 0.0
    weighted_h_index: int = 0
    citation_total: int = 0
    h_index: int = 0


def weighted_h_index(values: Iterable[float]) -> int:
    """Largest h such that h values are >= h."""
    h = 0
    for rank, value in enumerate(sorted(values, reverse=True), start=1):
        if value >= rank:
            h = rank
        else:
            break
    return h


def raw_h_index(counts: Iterable[int]) -> int:
    return weighted_h_index(counts)


def author_weighted_citation(publications: Iterable[ArticleId], scores: Iterable[ArticleScore],
                             author: str = '') -> AuthorScore:
    """Total prestige and weighted h-index over one author's publications."""
    by_article = {score.article: score for score in scores}
    publications = tuple(dict.fromkeys(normalize_key(p) for p in publications))
    missing = [p for p in publications if p not in by_article]
    if missing:
        raise UnknownArticle(missing[0])

    own = [by_article[p] for p in publications]
    return AuthorScore(author=author,
                       publications=publications,
                       weighted_citation_total=float(sum(s.weighted_citation for s in own)),
                       weighted_h_index=weighted_h_index(s.weighted_citation for s in own),
                       citation_total=sum(s.citation_count for s in own),
                       h_index=raw_h_index(s.citation_count for s in own))


def author_scores(authorship: Mapping[str, Iterable[ArticleId]],
                  scores: Iterable[ArticleScore]) -> list[AuthorScore]:
    """Score every author; highest weighted total first."""
    scores = list(scores)
    results = [author_weighted_citation(pubs, scores, author=author) for author, pubs in authorship.items()]
    return sorted(results, key=lambda a: (-a.weighted_citation_total, a.author))


# score table files ----------------------------------------------------------------

def scores_to_frame(scores: Iterable[ArticleScore]) -> pd.DataFrame:
    rows = [(s.article, s.citation_count, render(s.weighted_citation, 6), s.missing_journal_events)
            for s in scores]
    return pd.DataFrame(rows, columns=list(SCORE_COLUMNS))


def write_score_table(scores: Iterable[ArticleScore], path, delimiter='\t'):
    return write_table(scores_to_frame(scores), path, delimiter)


def read_score_table(path, delimiter='\t') -> list[ArticleScore]:
    """Read a score file written by write_score_table (or hand-made with the same columns)."""
    frame = read_table(path, SCORE_COLUMNS, delimiter, required=SCORE_COLUMNS[:3])
    scores = []
    for row in frame.itertuples(index=False):
        try:
            count = int(row.citation_count)
            value = float(row.weighted_citation)
            missing = int(row.missing_journal_events) if row.missing_journal_events else 0
        except ValueError as exc:
            raise InvalidRecord(f'{path}: bad score row for {row.cited_id!r}: {exc}') from exc
        if count < 0 or not np.isfinite(value) or value < 0:
            raise InvalidRecord(f'{path}: negative or non-finite score for {row.cited_id!r}')
        scores.append(ArticleScore(article=normalize_key(row.cited_id), citation_count=count,
                                   weighted_citation=value, missing_journal_events=missing))
    return scores
