"""
In-memory citation corpus.

A corpus is a bag of citation events (one citing article referencing one
cited article) plus a table of journal-year scores. It is immutable once
built; every other module reads from it.

    events  : CitationEvent rows, sorted canonically
    scores  : (journal, year) -> JournalYearScore
    article_pub_year : cited article -> publication year
"""
import re
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import pandas as pd

from src.errors import (DuplicateScoreRow, InconsistentArticleInfluence, InconsistentPubYear, InvalidRecord,
                        MissingBothScoreForms, NonPositiveAlpha, UnknownArticle)

logger = logging.getLogger(__name__)

ArticleId = str

EVENT_COLUMNS = ('cited_id', 'cited_pub_year', 'citing_id', 'citing_journal', 'citation_year')
AI_TOLERANCE = 1e-9

_WHITESPACE = re.compile(r'\s+')


def normalize_key(raw: str) -> str:
    """Collapse runs of whitespace, strip and uppercase."""
    return _WHITESPACE.sub(' ', str(raw)).strip().upper()


def is_gregorian_year(year) -> bool:
    return isinstance(year, int) and not isinstance(year, bool) and 1000 <= year <= 9999


def article_influence(eigenfactor: float, alpha: float) -> float:
    """Per-article influence of a journal: 0.01 * EF / alpha."""
    if not alpha > 0:
        raise NonPositiveAlpha(alpha)
    if eigenfactor < 0:
        raise InvalidRecord(f'eigenfactor must be >= 0, got {eigenfactor}')
    return 0.01 * eigenfactor / alpha


@dataclass(frozen=True, order=True)
class CitationEvent:
    """One citing article referencing one cited article."""
    cited: ArticleId
    cited_pub_year: int
    citing_article: ArticleId
    citing_journal: str
    citation_year: int

    def __post_init__(self):
        for name in ('cited', 'citing_article', 'citing_journal'):
            value = normalize_key(getattr(self, name))
            if not value:
                raise InvalidRecord(f'{name} must be non-empty')
            object.__setattr__(self, name, value)
        for name in ('cited_pub_year', 'citation_year'):
            if not is_gregorian_year(getattr(self, name)):
                raise InvalidRecord(f'{name} must be a 4-digit year, got {getattr(self, name)!r}')

    @property
    def interval(self) -> int:
        """Citation year minus publication year; may be negative for preprints."""
        return self.citation_year - self.cited_pub_year


@dataclass(frozen=True)
class JournalYearScore:
    """
    Journal prestige for one census year.

    Either article_influence or the (eigenfactor, alpha) pair must be given.
    When only the pair is given, article_influence is derived from it.
    """
    journal: str
    year: int
    eigenfactor: float | None = None
    alpha: float | None = None
    article_influence: float | None = None

    def __post_init__(self):
        object.__setattr__(self, 'journal', normalize_key(self.journal))
        if not self.journal:
            raise InvalidRecord('journal must be non-empty')
        if not is_gregorian_year(self.year):
            raise InvalidRecord(f'year must be a 4-digit year, got {self.year!r}')

        has_pair = self.eigenfactor is not None and self.alpha is not None
        if self.article_influence is None and not has_pair:
            raise MissingBothScoreForms(self.journal, self.year)
        if self.alpha is not None and not self.alpha > 0:
            raise NonPositiveAlpha(self.alpha)
        if self.eigenfactor is not None and self.eigenfactor < 0:
            raise InvalidRecord(f'({self.journal}, {self.year}): negative eigenfactor')

        if has_pair:
            derived = article_influence(self.eigenfactor, self.alpha)
            if self.article_influence is None:
                object.__setattr__(self, 'article_influence', derived)
            elif abs(self.article_influence - derived) > AI_TOLERANCE * max(abs(derived), abs(self.article_influence)):
                raise InconsistentArticleInfluence(
                    f'({self.journal}, {self.year}): article_influence {self.article_influence} '
                    f'!= 0.01 * {self.eigenfactor} / {self.alpha} = {derived}')
        if self.article_influence < 0:
            raise InvalidRecord(f'({self.journal}, {self.year}): negative article_influence')

    @property
    def key(self) -> tuple[str, int]:
        return self.journal, self.year


@dataclass(frozen=True)
class ArticleScore:
    """Popularity (citation_count) and prestige (weighted_citation) of one cited article."""
    article: ArticleId
    citation_count: int
    weighted_citation: float
    missing_journal_events: int = 0
    clamped_intervals: int = 0


@dataclass(frozen=True)
class Corpus:
    events: tuple[CitationEvent, ...] = ()
    scores: Mapping[tuple[str, int], JournalYearScore] = field(default_factory=dict)
    article_pub_year: Mapping[ArticleId, int] = field(default_factory=dict)

    def __len__(self):
        return len(self.events)

    def cited_articles(self) -> list[ArticleId]:
        return sorted(self.article_pub_year)

    def citing_articles(self) -> set[ArticleId]:
        return {e.citing_article for e in self.events}

    def citing_journals(self) -> set[str]:
        return {e.citing_journal for e in self.events}

    def events_for(self, article: ArticleId) -> list[CitationEvent]:
        article = normalize_key(article)
        if article not in self.article_pub_year:
            raise UnknownArticle(article)
        return self._events_by_article.get(article, [])

    def max_article_influence(self) -> float:
        return max((s.article_influence for s in self.scores.values()), default=0.0)

    @cached_property
    def _events_by_article(self) -> dict[ArticleId, list[CitationEvent]]:
        grouped = {}
        for event in self.events:
            grouped.setdefault(event.cited, []).append(event)
        return grouped

    @cached_property
    def events_frame(self) -> pd.DataFrame:
        """Events as a DataFrame with the interchange column names."""
        rows = [(e.cited, e.cited_pub_year, e.citing_article, e.citing_journal, e.citation_year)
                for e in self.events]
        frame = pd.DataFrame(rows, columns=list(EVENT_COLUMNS))
        return frame.astype({'cited_pub_year': 'int64', 'citation_year': 'int64'})


def build_corpus(events: Iterable[CitationEvent], scores: Iterable[JournalYearScore]) -> Corpus:
    """
    Assemble a Corpus and establish its invariants.
    Input order does not matter: events are stored in canonical sorted order.
    """
    events = tuple(sorted(events))

    score_map = {}
    for score in scores:
        if score.key in score_map:
            raise DuplicateScoreRow(*score.key)
        score_map[score.key] = score
    score_map = dict(sorted(score_map.items()))

    pub_years = {}
    for event in events:
        pub_years.setdefault(event.cited, set()).add(event.cited_pub_year)
    for article, years in pub_years.items():
        if len(years) > 1:
            raise InconsistentPubYear(article, years)
    article_pub_year = {article: years.pop() for article, years in sorted(pub_years.items())}

    logger.debug('Corpus built: %d events, %d cited articles, %d score rows',
                 len(events), len(article_pub_year), len(score_map))
    return Corpus(events=events, scores=score_map, article_pub_year=article_pub_year)
