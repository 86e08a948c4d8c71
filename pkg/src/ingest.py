"""
Reading and writing the interchange files.

    events file  : cited_id, cited_pub_year, citing_id, citing_journal, citation_year
    scores file  : journal, year, eigenfactor, alpha, article_influence
                   (the last three may be empty)
    alias file   : raw, canonical

All files are UTF-8, delimiter separated (tab by default) with a mandatory
header row. Malformed event rows are rejected into an IngestReport rather
than aborting the run; a malformed score row is an error.
"""
import csv
import io
import logging
import re
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping

import pandas as pd

from src.corpus import EVENT_COLUMNS, CitationEvent, Corpus, JournalYearScore, build_corpus, normalize_key
from src.errors import AliasConflict, FileUnreadable, HeaderMismatch, NonPositiveAlpha, ScoreParseError
from src.utils import read_table, write_table

logger = logging.getLogger(__name__)

SCORE_FILE_COLUMNS = ('journal', 'year', 'eigenfactor', 'alpha', 'article_influence')
ALIAS_COLUMNS = ('raw', 'canonical')

_YEAR = re.compile(r'[1-9]\d{3}')
_SKIPPED_LINE = re.compile(r'[Ss]kipping line (\d+)')

# abbreviations of JASIS / JASIST found in citing records
JASIST_ALIASES = {
    'J AM SOC INFORM SCI': 'JASIST',
    'J AM SOC INF SCI TEC': 'JASIST',
    'J AM SOC INFORMATION': 'JASIST',
    'J AM SOC INF SCI': 'JASIST',
}


@dataclass(frozen=True)
class AliasTable:
    """Raw journal name -> canonical name. Canonical names map to themselves."""
    mapping: Mapping[str, str] = field(default_factory=dict)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> 'AliasTable':
        mapping = {}
        for raw, canonical in pairs:
            raw, canonical = normalize_key(raw), normalize_key(canonical)
            if not raw or not canonical:
                raise AliasConflict('Alias entries must be non-empty')
            if mapping.get(raw, canonical) != canonical:
                raise AliasConflict(f'{raw!r} is mapped to both {mapping[raw]!r} and {canonical!r}')
            mapping[raw] = canonical
        for raw, canonical in mapping.items():
            if mapping.get(canonical, canonical) != canonical:
                raise AliasConflict(f'Canonical name {canonical!r} is itself an alias of {mapping[canonical]!r}')
        for canonical in set(mapping.values()):
            mapping[canonical] = canonical
        return cls(dict(sorted(mapping.items())))

    def get(self, journal: str) -> str:
        return self.mapping.get(journal, journal)

    def __len__(self):
        return len(self.mapping)


def default_aliases() -> AliasTable:
    return AliasTable.from_pairs(JASIST_ALIASES.items())


def normalize_journal(raw: str, aliases: AliasTable = AliasTable()) -> str:
    """Whitespace-collapsed, uppercased, alias-mapped. Unknown names pass through."""
    return aliases.get(normalize_key(raw))


@dataclass(frozen=True)
class IngestReport:
    rows_read: int = 0
    rows_rejected: int = 0
    rejects: tuple[tuple[int, str], ...] = ()
    journals_unmatched: frozenset[str] = frozenset()

    @property
    def rows_accepted(self) -> int:
        return self.rows_read - self.rows_rejected

    @property
    def clean(self) -> bool:
        return self.rows_rejected == 0

    def with_unmatched(self, journals: Iterable[str]) -> 'IngestReport':
        return replace(self, journals_unmatched=frozenset(journals))


def _is_missing(value) -> bool:
    return pd.isna(value) or str(value).strip() == ''


def _decode_lines(path: Path) -> tuple[str, list[int]]:
    """
    UTF-8 text of the file with every undecodable line blanked, and the
    numbers of those lines. An undecodable header makes the file unreadable.
    """
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise FileUnreadable(path, exc) from exc

    lines, bad = [], []
    for number, raw in enumerate(data.split(b'\n'), start=1):
        try:
            lines.append(raw.rstrip(b'\r').decode('utf-8-sig' if number == 1 else 'utf-8'))
        except UnicodeDecodeError as exc:
            if number == 1:
                raise FileUnreadable(path, exc) from exc
            bad.append(number)
            lines.append('')
    return '\n'.join(lines), bad


def _read_event_rows(path: Path, delimiter: str) -> tuple[pd.DataFrame, list[int], list[int], list[int]]:
    """
    Returns the frame of string cells, the physical line number of each
    frame row, the line numbers pandas skipped for having too many fields
    and the lines that are not valid UTF-8.
    """
    text, undecodable = _decode_lines(path)
    try:
        header = pd.read_csv(io.StringIO(text), sep=delimiter, nrows=0, quoting=csv.QUOTE_NONE, escapechar='\\')
    except pd.errors.EmptyDataError:
        raise HeaderMismatch(path, EVENT_COLUMNS, ())
    found = [str(c).strip() for c in header.columns]
    if found != list(EVENT_COLUMNS):
        raise HeaderMismatch(path, EVENT_COLUMNS, found)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always', pd.errors.ParserWarning)
        frame = pd.read_csv(io.StringIO(text), sep=delimiter, dtype=str, keep_default_na=False,
                            quoting=csv.QUOTE_NONE, escapechar='\\', skip_blank_lines=False,
                            on_bad_lines='warn', engine='python')

    too_long = sorted({int(m.group(1)) for w in caught for m in _SKIPPED_LINE.finditer(str(w.message))})
    skipped = set(too_long)
    line_numbers = [n for n in range(2, 2 + len(frame) + len(skipped)) if n not in skipped]
    return frame, line_numbers, too_long, undecodable


def _row_problem(row: dict) -> str | None:
    for column in EVENT_COLUMNS:
        if _is_missing(row[column]):
            return f'missing field: {column}'
    for column in ('cited_pub_year', 'citation_year'):
        value = str(row[column]).strip()
        if _YEAR.fullmatch(value) is None:
            return f'invalid year: {column}={value!r}'
    return None


def parse_events(path, aliases: AliasTable = AliasTable(), delimiter: str = '\t') \
        -> tuple[list[CitationEvent], IngestReport]:
    """
    One CitationEvent per well-formed row. Malformed rows are listed in the
    report with their line number and skipped.
    """
    path = Path(path)
    frame, line_numbers, too_long, undecodable = _read_event_rows(path, delimiter)

    rejects = [(line, f'wrong field count (expected {len(EVENT_COLUMNS)})') for line in too_long]
    rejects += [(line, 'invalid UTF-8') for line in undecodable]
    events = []
    rows_read = len(too_long) + len(undecodable)
    for line, row in zip(line_numbers, frame.to_dict('records')):
        if all(_is_missing(v) for v in row.values()):
            continue
        rows_read += 1
        problem = _row_problem(row)
        if problem is not None:
            rejects.append((line, problem))
            continue
        events.append(CitationEvent(cited=row['cited_id'],
                                    cited_pub_year=int(row['cited_pub_year']),
                                    citing_article=row['citing_id'],
                                    citing_journal=normalize_journal(row['citing_journal'], aliases),
                                    citation_year=int(row['citation_year'])))

    rejects.sort()
    for line, reason in rejects:
        logger.warning('%s:%d rejected (%s)', path, line, reason)
    report = IngestReport(rows_read=rows_read, rows_rejected=len(rejects), rejects=tuple(rejects))
    assert report.rows_accepted == len(events)
    return events, report


def _parse_optional_float(value, name, line, path) -> float | None:
    if _is_missing(value):
        return None
    try:
        return float(value)
    except ValueError:
        raise ScoreParseError(f'{path}:{line}: {name} is not a number: {value!r}')


def parse_scores(path, aliases: AliasTable = AliasTable(), delimiter: str = '\t') -> list[JournalYearScore]:
    """
    One JournalYearScore per row. Article Influence is derived as
    0.01 * eigenfactor / alpha when its column is empty.
    """
    path = Path(path)
    frame = read_table(path, SCORE_FILE_COLUMNS, delimiter)
    scores = []
    for line, row in enumerate(frame.itertuples(index=False), start=2):
        year = str(row.year).strip()
        if _YEAR.fullmatch(year) is None or _is_missing(row.journal):
            raise ScoreParseError(f'{path}:{line}: bad journal or year ({row.journal!r}, {row.year!r})')
        eigenfactor = _parse_optional_float(row.eigenfactor, 'eigenfactor', line, path)
        alpha = _parse_optional_float(row.alpha, 'alpha', line, path)
        influence = _parse_optional_float(row.article_influence, 'article_influence', line, path)
        if alpha is not None and not alpha > 0:
            raise NonPositiveAlpha(alpha)
        scores.append(JournalYearScore(journal=normalize_journal(row.journal, aliases), year=int(year),
                                       eigenfactor=eigenfactor, alpha=alpha, article_influence=influence))
    return scores


def parse_aliases(path, delimiter: str = '\t') -> AliasTable:
    frame = read_table(path, ALIAS_COLUMNS, delimiter)
    return AliasTable.from_pairs(zip(frame['raw'], frame['canonical']))


def find_unmatched(events: Iterable[CitationEvent], scores: Iterable[JournalYearScore]) -> set[str]:
    """Citing journals with at least one citation year that has no score row."""
    scored = {score.key for score in scores}
    return {e.citing_journal for e in events if (e.citing_journal, e.citation_year) not in scored}


def read_corpus(events_path, scores_path, aliases: AliasTable = AliasTable(), delimiter: str = '\t') \
        -> tuple[Corpus, IngestReport]:
    events, report = parse_events(events_path, aliases, delimiter)
    scores = parse_scores(scores_path, aliases, delimiter)
    report = report.with_unmatched(find_unmatched(events, scores))
    if report.journals_unmatched:
        logger.info('%d citing journal(s) lack a score for some citation year', len(report.journals_unmatched))
    return build_corpus(events, scores), report


# writers ------------------------------------------------------------------------

def _exact(value: float | None) -> str:
    return '' if value is None else repr(float(value))


def write_events(events: Iterable[CitationEvent], path, delimiter: str = '\t') -> Path:
    rows = [(e.cited, e.cited_pub_year, e.citing_article, e.citing_journal, e.citation_year) for e in events]
    return write_table(pd.DataFrame(rows, columns=list(EVENT_COLUMNS)), path, delimiter)


def write_scores(scores: Iterable[JournalYearScore], path, delimiter: str = '\t') -> Path:
    rows = [(s.journal, s.year, _exact(s.eigenfactor), _exact(s.alpha), _exact(s.article_influence))
            for s in scores]
    return write_table(pd.DataFrame(rows, columns=list(SCORE_FILE_COLUMNS)), path, delimiter)


def write_corpus(corpus: Corpus, out_dir, delimiter: str = '\t') -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    return (write_events(corpus.events, out_dir / 'events.tsv', delimiter),
            write_scores(corpus.scores.values(), out_dir / 'scores.tsv', delimiter))
