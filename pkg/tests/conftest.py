import os

os.environ.setdefault('MPLBACKEND', 'Agg')

from pathlib import Path

import pytest

from src.corpus import ArticleScore, CitationEvent, JournalYearScore
from src.scoring import read_score_table

DATASETS = Path(__file__).resolve().parent.parent / 'datasets'
WORKED_EXAMPLE = DATASETS / 'worked_example'


def event(cited, pub_year, citing, journal, year):
    return CitationEvent(cited=cited, cited_pub_year=pub_year, citing_article=citing,
                         citing_journal=journal, citation_year=year)


def ai(journal, year, value):
    return JournalYearScore(journal=journal, year=year, article_influence=value)


def scores_from_pairs(pairs):
    """ArticleScores A00, A01, ... from (count, weighted) pairs."""
    return [ArticleScore(article=f'A{i:02d}', citation_count=count, weighted_citation=weighted)
            for i, (count, weighted) in enumerate(pairs)]


def write_tsv(path, header, rows):
    path = Path(path)
    lines = ['\t'.join(header)] + ['\t'.join(str(v) for v in row) for row in rows]
    path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
    return path


@pytest.fixture
def worked_example():
    return {'events': WORKED_EXAMPLE / 'events.tsv',
            'scores': WORKED_EXAMPLE / 'scores.tsv',
            'aliases': WORKED_EXAMPLE / 'aliases.tsv'}


@pytest.fixture
def table2_scores():
    return read_score_table(DATASETS / 'table2_scores.tsv')
