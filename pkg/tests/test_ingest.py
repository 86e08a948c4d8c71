import pytest

from src.corpus import EVENT_COLUMNS
from src.errors import AliasConflict, FileUnreadable, HeaderMismatch, NonPositiveAlpha, ScoreParseError
from src.ingest import (AliasTable, SCORE_FILE_COLUMNS, default_aliases, normalize_journal, parse_aliases,
                        parse_events, parse_scores, read_corpus, write_corpus)
from tests.conftest import write_tsv


def test_worked_example_reads_clean(worked_example):
    aliases = parse_aliases(worked_example['aliases'])
    corpus, report = read_corpus(worked_example['events'], worked_example['scores'], aliases)
    assert report.clean
    assert report.rows_read == 3
    assert report.journals_unmatched == frozenset()
    assert corpus.citing_journals() == {'JASIST'}
    assert corpus.article_pub_year == {'SAMPLE A, 2005, JASIST, V56, P1': 2005}


def test_without_aliases_the_abbreviation_is_unmatched(worked_example):
    _, report = read_corpus(worked_example['events'], worked_example['scores'])
    assert report.journals_unmatched == frozenset({'J AM SOC INF SCI TEC'})


def test_bad_rows_are_reported_with_line_numbers(tmp_path):
    path = write_tsv(tmp_path / 'events.tsv', EVENT_COLUMNS, [
        ('A', 2001, 'C1', 'J', 2003),
        ('A', 'XXXX', 'C2', 'J', 2003),
        ('A', 2001, '', 'J', 2003),
        ('B', 2002, 'C3', 'J', 2004),
    ])
    events, report = parse_events(path)
    assert len(events) == 2
    assert report.rows_read == 4
    assert report.rows_rejected == 2
    assert [line for line, _ in report.rejects] == [3, 4]
    assert 'invalid year' in report.rejects[0][1]
    assert 'citing_id' in report.rejects[1][1]


def test_blank_lines_are_not_rows(tmp_path):
    path = tmp_path / 'events.tsv'
    path.write_text('\t'.join(EVENT_COLUMNS) + '\nA\t2001\tC1\tJ\t2003\n\nB\t2001\tC2\tJ\t2003\n', encoding='utf-8')
    events, report = parse_events(path)
    assert report.rows_read == 2
    assert report.clean
    assert [e.cited for e in events] == ['A', 'B']


def test_undecodable_row_is_rejected(tmp_path):
    path = tmp_path / 'events.tsv'
    path.write_bytes(('\t'.join(EVENT_COLUMNS) + '\nA\t2001\tC1\tJ\t2003\n').encode('utf-8')
                     + b'B\xff\t2001\tC2\tJ\t2003\r\nC\t2002\tC3\tJ\t2004\r\n')
    events, report = parse_events(path)
    assert [e.cited for e in events] == ['A', 'C']
    assert report.rows_read == 3
    assert report.rejects == ((3, 'invalid UTF-8'),)


def test_header_and_file_errors(tmp_path):
    with pytest.raises(FileUnreadable):
        parse_events(tmp_path / 'missing.tsv')
    path = write_tsv(tmp_path / 'events.tsv', ('cited', 'year'), [('A', 2001)])
    with pytest.raises(HeaderMismatch):
        parse_events(path)


def test_scores_parse_both_forms(tmp_path):
    path = write_tsv(tmp_path / 'scores.tsv', SCORE_FILE_COLUMNS, [
        ('JASIST', 2005, 0.5, 0.005, ''),
        ('IP&M', 2005, '', '', 0.25),
    ])
    scores = {s.journal: s for s in parse_scores(path)}
    assert scores['JASIST'].article_influence == pytest.approx(1.0)
    assert scores['IP&M'].article_influence == 0.25


def test_bad_score_row_is_an_error(tmp_path):
    path = write_tsv(tmp_path / 'scores.tsv', SCORE_FILE_COLUMNS, [('JASIST', 2005, 'lots', 0.005, '')])
    with pytest.raises(ScoreParseError):
        parse_scores(path)


def test_zero_alpha_in_a_score_file(tmp_path):
    path = write_tsv(tmp_path / 'scores.tsv', SCORE_FILE_COLUMNS, [('JASIST', 2005, 0.5, 0, '')])
    with pytest.raises(NonPositiveAlpha):
        parse_scores(path)


def test_alias_table_is_idempotent():
    aliases = default_aliases()
    for raw in ('j am soc inf sci tec', 'J AM SOC INFORM SCI', 'JASIST', 'SCIENTOMETRICS'):
        once = normalize_journal(raw, aliases)
        assert normalize_journal(once, aliases) == once
    assert normalize_journal('j  am soc inf sci', aliases) == 'JASIST'


def test_alias_conflicts():
    with pytest.raises(AliasConflict):
        AliasTable.from_pairs([('A', 'B'), ('A', 'C')])
    with pytest.raises(AliasConflict):
        AliasTable.from_pairs([('A', 'B'), ('B', 'C')])


def test_corpus_round_trip(tmp_path, worked_example):
    corpus, _ = read_corpus(worked_example['events'], worked_example['scores'],
                            parse_aliases(worked_example['aliases']))
    events_path, scores_path = write_corpus(corpus, tmp_path)
    again, report = read_corpus(events_path, scores_path)
    assert report.clean
    assert again == corpus
