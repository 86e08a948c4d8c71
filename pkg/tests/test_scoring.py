import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.corpus import ArticleScore, build_corpus
from src.crsm import rank_descending
from src.decay import DecayParams
from src.errors import NonPositiveAlpha, UnknownArticle
from src.scoring import (MissingScorePolicy, article_influence, author_scores, author_weighted_citation,
                         raw_h_index, read_score_table, score_all, weighted_citation, weighted_h_index,
                         write_score_table)
from src.synthgen import AiDistribution, GenSpec, generate
from tests.conftest import ai, event

WORKED = 1 + math.exp(-0.117) + math.exp(-0.234)


@pytest.fixture
def worked_corpus():
    events = [event('PAPER', 2005, f'C{y}', 'JASIST', y) for y in (2005, 2006, 2007)]
    return build_corpus(events, [ai('JASIST', y, 1.0) for y in (2005, 2006, 2007)])


def test_worked_example(worked_corpus):
    score = weighted_citation('paper', worked_corpus)
    assert score.citation_count == 3
    assert score.weighted_citation == pytest.approx(2.680947, abs=1e-6)
    assert score.weighted_citation == pytest.approx(WORKED, rel=1e-12)


def test_simplified_mode_sums_article_influence(worked_corpus):
    assert weighted_citation('PAPER', worked_corpus, params=None).weighted_citation == pytest.approx(3.0)


def test_article_influence():
    assert article_influence(0.5, 0.005) == pytest.approx(1.0)
    with pytest.raises(NonPositiveAlpha):
        article_influence(0.5, -1.0)


def test_preprint_citation_is_clamped():
    corpus = build_corpus([event('A', 2005, 'C1', 'J', 2003)], [ai('J', 2003, 2.0)])
    score = weighted_citation('A', corpus)
    assert score.weighted_citation == 2.0
    assert score.clamped_intervals == 1


def test_missing_score_policies():
    corpus = build_corpus([event('A', 2000, 'C1', 'J', 2005)], [ai('J', 2003, 1.0), ai('J', 2007, 3.0)])
    zero = weighted_citation('A', corpus)
    assert zero.weighted_citation == 0.0
    assert zero.missing_journal_events == 1

    near = weighted_citation('A', corpus, policy=MissingScorePolicy.parse('nearest:2'))
    # 2003 and 2007 are both two years away; the earlier year wins
    assert near.weighted_citation == pytest.approx(math.exp(-0.117 * 5) * 1.0)
    assert near.missing_journal_events == 0

    too_far = weighted_citation('A', corpus, policy=MissingScorePolicy('nearest_year', 1))
    assert too_far.weighted_citation == 0.0


def test_journal_self_citations_count_like_any_other():
    corpus = build_corpus([event('A', 2005, 'C1', 'JASIST', 2005), event('A', 2005, 'C2', 'OTHER', 2005)],
                          [ai('JASIST', 2005, 1.5), ai('OTHER', 2005, 1.5)])
    assert weighted_citation('A', corpus).weighted_citation == pytest.approx(3.0)


def test_score_all_matches_per_article_scoring():
    events = [event(f'A{i % 4}', 2000 + i % 4, f'C{i}', f'J{i % 3}', 2004 + i % 5) for i in range(30)]
    scores = [ai(f'J{j}', y, 0.1 * (j + 1) + 0.01 * y % 1) for j in range(3) for y in range(2004, 2008)]
    corpus = build_corpus(events, scores)
    policy = MissingScorePolicy.parse('nearest:1')
    batch = score_all(corpus, DecayParams(0.2), policy)
    assert [s.article for s in batch] == ['A0', 'A1', 'A2', 'A3']
    for score in batch:
        single = weighted_citation(score.article, corpus, DecayParams(0.2), policy)
        assert score.citation_count == single.citation_count
        assert score.weighted_citation == pytest.approx(single.weighted_citation, rel=1e-12)
        assert score.missing_journal_events == single.missing_journal_events


def test_score_all_adds_uncited_universe_articles(worked_corpus):
    scores = score_all(worked_corpus, universe=['PAPER', 'never cited'])
    assert [(s.article, s.citation_count) for s in scores] == [('NEVER CITED', 0), ('PAPER', 3)]


def test_empty_corpus_scores_nothing():
    assert score_all(build_corpus([], [])) == []


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(0, 20), st.integers(1, 5), st.floats(0.01, 1.0))
def test_score_all_matches_ground_truth(seed, n_articles, n_journals, lambda_):
    spec = GenSpec(seed=seed, n_articles=n_articles, n_journals=n_journals, lambda_true=lambda_,
                   citations_per_article=(0, 10))
    corpus, truth = generate(spec)
    scores = score_all(corpus, DecayParams(lambda_), universe=truth)
    assert len(corpus) <= 200
    assert {s.article for s in scores} == set(truth)
    for s in scores:
        assert s.weighted_citation == pytest.approx(truth[s.article], rel=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32), st.floats(0.1, 10.0))
def test_scaling_influence_keeps_the_ranking(seed, c):
    spec = GenSpec(seed=seed, n_articles=15, n_journals=4, ai_distribution=AiDistribution('uniform', 0.1, 2.0),
                   citations_per_article=(1, 6))
    corpus, _ = generate(spec)
    scaled = build_corpus(corpus.events, [ai(j, y, s.article_influence * c) for (j, y), s in corpus.scores.items()])
    before = rank_descending((s.article, s.weighted_citation) for s in score_all(corpus))
    after = rank_descending((s.article, s.weighted_citation) for s in score_all(scaled))
    assert [a for a, _ in before.rows] == [a for a, _ in after.rows]
    assert before.groups == after.groups


def _brute_h(values):
    return max([h for h in range(len(values) + 1) if sum(v >= h for v in values) >= h])


@settings(max_examples=1000)
@given(st.lists(st.floats(0, 60, allow_nan=False), max_size=50))
def test_weighted_h_index_matches_brute_force(values):
    assert weighted_h_index(values) == _brute_h(values)


def test_h_index_examples():
    assert weighted_h_index([]) == 0
    assert weighted_h_index([10, 8, 5, 4, 3]) == 4
    assert weighted_h_index([2.5, 2.5, 0.4]) == 2
    assert raw_h_index([25, 8, 5, 3, 3]) == 3


def test_author_aggregation():
    scores = [ArticleScore('P1', 10, 4.5), ArticleScore('P2', 6, 3.0), ArticleScore('P3', 1, 0.2)]
    author = author_weighted_citation(['p1', 'P2', 'P1', 'P3'], scores, author='Doe')
    assert author.publications == ('P1', 'P2', 'P3')
    assert author.weighted_citation_total == pytest.approx(7.7)
    assert author.weighted_h_index == 2
    assert author.h_index == 2
    with pytest.raises(UnknownArticle):
        author_weighted_citation(['P9'], scores)

    ranked = author_scores({'Roe': ['P3'], 'Doe': ['P1', 'P2']}, scores)
    assert [a.author for a in ranked] == ['Doe', 'Roe']


def test_score_table_round_trip(tmp_path, worked_corpus):
    path = write_score_table(score_all(worked_corpus), tmp_path / 'scores.tsv')
    assert path.read_text(encoding='utf-8') == \
        'cited_id\tcitation_count\tweighted_citation\tmissing_journal_events\nPAPER\t3\t2.680947\t0\n'
    again = read_score_table(path)
    assert again[0].citation_count == 3
    assert again[0].weighted_citation == pytest.approx(2.680947)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 9), st.integers(0, 4), st.integers(0, 12))
def test_one_more_citation_never_lowers_a_score(seed, k, j, age):
    corpus, truth = generate(GenSpec(seed=seed, n_articles=10, n_journals=3, citations_per_article=(0, 5)))
    article = f'A{k:06d}'
    pub_year = corpus.article_pub_year.get(article, 2000)
    extra = event(article, pub_year, 'EXTRA', f'J{j:04d}', pub_year + age)
    grown = build_corpus(list(corpus.events) + [extra], corpus.scores.values())

    before = {s.article: s for s in score_all(corpus, universe=truth)}
    after = {s.article: s for s in score_all(grown, universe=truth)}
    assert after[article].citation_count == before[article].citation_count + 1
    assert after[article].weighted_citation >= before[article].weighted_citation
    for other in truth:
        if other != article:
            assert after[other].citation_count == before[other].citation_count
            assert after[other].weighted_citation == pytest.approx(before[other].weighted_citation, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([0.05, 0.117, 1.0]))
def test_score_is_bounded_by_count_times_top_influence(seed, lambda_):
    spec = GenSpec(seed=seed, n_articles=12, n_journals=3, lambda_true=lambda_, max_age=4,
                   ai_distribution=AiDistribution('two_point', low=0.5, high=2.0), citations_per_article=(1, 5))
    corpus, _ = generate(spec)
    top = corpus.max_article_influence()
    for s in score_all(corpus, DecayParams(lambda_)):
        bound = s.citation_count * top
        events = corpus.events_for(s.article)
        if all(e.interval == 0 and corpus.scores[(e.citing_journal, e.citation_year)].article_influence == top
               for e in events):
            assert s.weighted_citation == pytest.approx(bound, rel=1e-12)
        else:
            assert s.weighted_citation < bound


def test_bound_is_reached_only_by_fresh_top_citations():
    scores = [ai('TOP', 2005, 2.0), ai('TOP', 2006, 2.0), ai('LOW', 2005, 0.5)]
    fresh = build_corpus([event('A', 2005, 'C1', 'TOP', 2005), event('A', 2005, 'C2', 'TOP', 2005)], scores)
    assert weighted_citation('A', fresh).weighted_citation == 4.0
    late = build_corpus([event('A', 2005, 'C1', 'TOP', 2005), event('A', 2005, 'C2', 'TOP', 2006)], scores)
    assert weighted_citation('A', late).weighted_citation < 4.0
    weak = build_corpus([event('A', 2005, 'C1', 'TOP', 2005), event('A', 2005, 'C2', 'LOW', 2005)], scores)
    assert weighted_citation('A', weak).weighted_citation < 4.0
