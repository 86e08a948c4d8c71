"""
Exceptions raised by the weighted citation toolkit.

Every error derives from WeightedCitationError so the command line can map
them to exit codes in one place. Errors about bad values also derive from
ValueError.
"""


class WeightedCitationError(Exception):
    """Root of all toolkit errors."""


# corpus ---------------------------------------------------------------------

class DuplicateScoreRow(WeightedCitationError, ValueError):
    def __init__(self, journal, year):
        super().__init__(f'Duplicate score row for ({journal}, {year})')
        self.journal = journal
        self.year = year


class InconsistentPubYear(WeightedCitationError, ValueError):
    def __init__(self, article, years):
        super().__init__(f'Article {article!r} appears with publication years {sorted(years)}')
        self.article = article
        self.years = tuple(sorted(years))


class UnknownArticle(WeightedCitationError, KeyError):
    def __init__(self, article):
        super().__init__(article)
        self.article = article

    def __str__(self):
        return f'Unknown article {self.article!r}'


class InvalidRecord(WeightedCitationError, ValueError):
    """A CitationEvent or JournalYearScore that breaks its own invariants."""


# ingest ---------------------------------------------------------------------

class FileUnreadable(WeightedCitationError, OSError):
    def __init__(self, path, reason):
        super().__init__(f'Cannot read {path}: {reason}')
        self.path = str(path)


class HeaderMismatch(WeightedCitationError, ValueError):
    def __init__(self, path, expected, found):
        super().__init__(f'{path}: expected header {list(expected)}, found {list(found)}')
        self.expected = tuple(expected)
        self.found = tuple(found)


class MissingBothScoreForms(WeightedCitationError, ValueError):
    def __init__(self, journal, year):
        super().__init__(f'Score row ({journal}, {year}) has neither article_influence '
                         f'nor the eigenfactor + alpha pair')


class NonPositiveAlpha(WeightedCitationError, ValueError):
    def __init__(self, alpha):
        super().__init__(f'alpha must be > 0, got {alpha}')
        self.alpha = alpha


class InconsistentArticleInfluence(WeightedCitationError, ValueError):
    pass


class ScoreParseError(WeightedCitationError, ValueError):
    pass


class AliasConflict(WeightedCitationError, ValueError):
    pass


# decay / analytics / crsm ---------------------------------------------------

class InsufficientData(WeightedCitationError, ValueError):
    pass


class EmptyInput(WeightedCitationError, ValueError):
    pass


class DuplicateArticle(WeightedCitationError, ValueError):
    def __init__(self, article):
        super().__init__(f'Duplicate article {article!r}')
        self.article = article


class CrsmConsistencyError(WeightedCitationError, RuntimeError):
    pass


class DegenerateX(WeightedCitationError, ValueError):
    pass


class CitedArticleOutsideUniverse(WeightedCitationError, ValueError):
    def __init__(self, articles):
        articles = sorted(articles)
        shown = ', '.join(articles[:5]) + (' ...' if len(articles) > 5 else '')
        super().__init__(f'{len(articles)} cited article(s) missing from the universe: {shown}')
        self.articles = tuple(articles)


# synthgen / config ----------------------------------------------------------

class InvalidSpec(WeightedCitationError, ValueError):
    pass


class InvalidConfig(WeightedCitationError, ValueError):
    pass
