"""
Command line front end.

    validate    parse the input files and list rejected rows
    score       per-article citation counts and weighted scores, plus the corpus summary
    fit-decay   re-estimate the decay constant from the citation ages
    crsm        popularity/prestige deltas, their distribution, top tables, quadrants, QQ pairs
    report      summary, both top-N rankings with their overlap, R², quadrant counts, authors
    generate    write a seeded synthetic corpus with its ground truth

Exit codes: 0 success, 1 rejected rows or invalid input, 2 unreadable file.
"""
import functools
import logging
import sys
from pathlib import Path

import click
import matplotlib.pyplot as plt
import pandas as pd
from rich.console import Console
from rich.table import Table

from src import plots
from src.analytics import (MEDIAN, classify_quadrants, corpus_summary, linear_r2, qq_points, quadrant_counts,
                           top_n_overlap, top_n_report)
from src.config import RunConfig
from src.corpus import build_corpus, normalize_key
from src.crsm import crsm, delta_distribution, rank_descending, rank_uniqueness, within_group_spread, write_crsm
from src.decay import AUTO, age_histogram, fit_lambda
from src.errors import DegenerateX, FileUnreadable, InsufficientData, WeightedCitationError
from src.ingest import AliasTable, find_unmatched, parse_aliases, parse_events, parse_scores, read_corpus
from src.scoring import author_scores, read_score_table, score_all, write_score_table
from src.synthgen import AiDistribution, GenSpec, generate, write_generated
from src.utils import bcolors, cprint, read_table, render, write_table

logger = logging.getLogger(__name__)

STAT_COLUMNS = ['statistic', 'value']


# option helpers -----------------------------------------------------------------

def _delimiter(ctx, param, value):
    if value is None:
        return None
    return '\t' if value.lower() in ('tab', '\\t') else value


def _threshold(ctx, param, value):
    if value is None or value == MEDIAN:
        return value
    try:
        return float(value)
    except ValueError:
        raise click.BadParameter('must be "median" or a number')


def _start_age(ctx, param, value):
    if value is None or value == AUTO:
        return value
    try:
        return int(value)
    except ValueError:
        raise click.BadParameter('must be "auto" or a non-negative integer')


def input_options(func):
    options = [
        click.option('--config', 'config_path', type=click.Path(), help='YAML run configuration.'),
        click.option('--events', type=click.Path(), help='Citation events file.'),
        click.option('--scores', type=click.Path(), help='Journal-year scores file.'),
        click.option('--aliases', type=click.Path(), help='Journal alias file (raw, canonical).'),
        click.option('--delimiter', callback=_delimiter, help='Field delimiter (default tab; "tab" also accepted).'),
        click.option('--out', type=click.Path(), help='Output directory.'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def scoring_options(func):
    options = [
        click.option('--lambda', 'lambda_', type=float, help='Decay constant (default 0.117).'),
        click.option('--missing-policy', help='"zero" or "nearest:K".'),
        click.option('--simplified', is_flag=True, default=None, help='Skip the time weighting.'),
        click.option('--universe', type=click.Path(), help='File listing every article (header cited_id).'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def ranking_options(func):
    options = [
        click.option('--score-table', type=click.Path(), help='Use a precomputed score file instead of a corpus.'),
        click.option('--top', type=int, help='Rows in the top-N tables.'),
        click.option('--pop-threshold', callback=_threshold, help='Popularity cut ("median" or a number).'),
        click.option('--prestige-threshold', callback=_threshold, help='Prestige cut ("median" or a number).'),
        click.option('--plots', is_flag=True, default=None, help='Also save figures.'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def build_config(config_path=None, **flags) -> RunConfig:
    base = RunConfig.from_yaml(config_path) if config_path else RunConfig()
    renamed = {'events': 'events_path', 'scores': 'scores_path', 'aliases': 'alias_path',
               'score_table': 'score_table_path', 'authors': 'authors_path', 'universe': 'universe_path',
               'out': 'out_dir', 'top': 'top_n'}
    return base.merge(**{renamed.get(name, name): value for name, value in flags.items()})


def handle_errors(func):
    """Map toolkit errors to exit codes."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except FileUnreadable as exc:
            cprint(f'Error: {exc}', bcolors.FAIL)
            sys.exit(2)
        except WeightedCitationError as exc:
            cprint(f'Error: {exc}', bcolors.FAIL)
            sys.exit(1)
    return wrapper


# shared steps -------------------------------------------------------------------

def _aliases(cfg: RunConfig) -> AliasTable:
    return parse_aliases(cfg.alias_path, cfg.delimiter) if cfg.alias_path else AliasTable()


def _load_corpus(cfg: RunConfig, scores_required: bool = True):
    if scores_required or cfg.scores_path:
        cfg.validate('events_path', 'scores_path')
        corpus, _ = read_corpus(cfg.events_path, cfg.scores_path, _aliases(cfg), cfg.delimiter)
        return corpus
    cfg.validate('events_path')
    events, _ = parse_events(cfg.events_path, _aliases(cfg), cfg.delimiter)
    return build_corpus(events, [])


def _universe(cfg: RunConfig) -> list[str] | None:
    if cfg.universe_path is None:
        return None
    frame = read_table(cfg.universe_path, ('cited_id',), cfg.delimiter)
    return [normalize_key(a) for a in frame['cited_id'] if a.strip()]


def _authorship(cfg: RunConfig) -> dict[str, list[str]] | None:
    if cfg.authors_path is None:
        return None
    frame = read_table(cfg.authors_path, ('author', 'cited_id'), cfg.delimiter)
    authorship = {}
    for author, article in zip(frame['author'], frame['cited_id']):
        authorship.setdefault(author.strip(), []).append(article)
    return authorship


def _load_scores(cfg: RunConfig, extra_universe=()):
    """(scores, corpus or None): from a score table when given, else scored from the corpus."""
    if cfg.score_table_path:
        cfg.validate('score_table_path')
        return read_score_table(cfg.score_table_path, cfg.delimiter), None
    corpus = _load_corpus(cfg)
    universe = (_universe(cfg) or []) + [normalize_key(a) for a in extra_universe]
    return score_all(corpus, cfg.decay, cfg.policy, universe=universe or None), corpus


def _write_stats(rows, path, delimiter) -> Path:
    return write_table(pd.DataFrame(rows, columns=STAT_COLUMNS), path, delimiter)


def _print_frame(frame: pd.DataFrame, title: str):
    table = Table(title=title, show_header=True, header_style="bold magenta")
    for column in frame.columns:
        table.add_column(str(column))
    for row in frame.itertuples(index=False):
        table.add_row(*[str(v) for v in row])
    Console().print(table)


# commands -----------------------------------------------------------------------

@click.group()
@click.option('--verbose', is_flag=True, help='Debug logging.')
def cli(verbose):
    """Weighted citation toolkit."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO,
                        format='%(levelname)s %(name)s: %(message)s', force=True)


@cli.command()
@input_options
@handle_errors
def validate(config_path, **flags):
    """Parse the inputs and report rejected rows."""
    cfg = build_config(config_path, **flags).validate('events_path')
    events, report = parse_events(cfg.events_path, _aliases(cfg), cfg.delimiter)
    if cfg.scores_path:
        report = report.with_unmatched(find_unmatched(events, parse_scores(cfg.scores_path, _aliases(cfg),
                                                                           cfg.delimiter)))

    print(f'rows read: {report.rows_read}')
    print(f'rows accepted: {report.rows_accepted}')
    print(f'rows rejected: {report.rows_rejected}')
    for line, reason in report.rejects:
        cprint(f'line {line}: {reason}', bcolors.WARNING)
    for journal in sorted(report.journals_unmatched):
        cprint(f'journal without a score for some citation year: {journal}', bcolors.WARNING)

    if not report.clean:
        sys.exit(1)
    cprint('Input is clean', bcolors.OKGREEN)


@cli.command()
@input_options
@scoring_options
@handle_errors
def score(config_path, **flags):
    """Write scores.tsv and summary.tsv."""
    cfg = build_config(config_path, **flags)
    corpus = _load_corpus(cfg)
    universe = _universe(cfg)
    scores = score_all(corpus, cfg.decay, cfg.policy, universe=universe)
    summary = corpus_summary(corpus, universe if universe is not None else corpus.cited_articles())

    out = Path(cfg.out_dir)
    write_score_table(scores, out / 'scores.tsv', cfg.delimiter)
    write_table(summary.to_frame(), out / 'summary.tsv', cfg.delimiter)
    _print_frame(summary.to_frame(), 'Corpus summary')
    missing = sum(s.missing_journal_events for s in scores)
    if missing:
        cprint(f'{missing} citation(s) came from journal-years without a score', bcolors.WARNING)
    cprint(f'Scored {len(scores)} articles into {out}', bcolors.OKGREEN)


@cli.command('fit-decay')
@input_options
@click.option('--start-age', callback=_start_age, help='"auto" (histogram peak) or an age in years.')
@click.option('--plots', is_flag=True, default=None, help='Also save the histogram figure.')
@handle_errors
def fit_decay(config_path, **flags):
    """Estimate the decay constant from the citation ages."""
    cfg = build_config(config_path, **flags).validate('events_path')
    corpus = _load_corpus(cfg, scores_required=False)
    hist = age_histogram(corpus)
    fit = fit_lambda(hist, cfg.start_age)

    out = Path(cfg.out_dir)
    write_table(pd.DataFrame(sorted(hist.counts.items()), columns=['age', 'citations']),
                out / 'age_histogram.tsv', cfg.delimiter)
    _write_stats([('lambda', render(fit.lambda_, 6)), ('r2', render(fit.r2, 6)),
                  ('start_age', str(fit.start_age)), ('n_points', str(fit.n_points))],
                 out / 'decay_fit.tsv', cfg.delimiter)
    if cfg.plots:
        plt.close(plots.plot_age_histogram(hist, fit, save_locally=True, path=str(out / 'plots')))

    print(f'lambda = {render(fit.lambda_, 6)}  R² = {render(fit.r2, 6)}  '
          f'(start age {fit.start_age}, {fit.n_points} ages)')
    if fit.lambda_ <= 1e-9:
        cprint('Fitted decay constant is not positive; citations do not age in this corpus', bcolors.WARNING)


@cli.command('crsm')
@input_options
@scoring_options
@ranking_options
@handle_errors
def crsm_command(config_path, **flags):
    """Popularity vs prestige deltas."""
    cfg = build_config(config_path, **flags)
    scores, _ = _load_scores(cfg)
    rows = crsm(scores)
    distribution = delta_distribution(rows)
    spread = within_group_spread(rows)

    out = Path(cfg.out_dir)
    write_crsm(rows, out / 'crsm.tsv', cfg.delimiter)
    kurtosis = 'NotDefined' if distribution.excess_kurtosis is None else render(distribution.excess_kurtosis, 6)
    stats = [('n', str(distribution.n)), ('mean', render(distribution.mean, 6)),
             ('std', render(distribution.std, 6)), ('excess_kurtosis', kurtosis)]
    if spread is not None:
        stats += [('within_group_mean', render(spread[0], 6)), ('within_group_std', render(spread[1], 6))]
    _write_stats(stats, out / 'delta_distribution.tsv', cfg.delimiter)
    write_table(pd.DataFrame([(render(center, 6), count) for center, count in distribution.histogram],
                             columns=['bin_center', 'articles']),
                out / 'delta_histogram.tsv', cfg.delimiter)

    for order in ('delta_desc', 'delta_asc'):
        top = top_n_report(scores, rows, cfg.top_n, order)
        write_table(top, out / f'top_{order}.tsv', cfg.delimiter)
        _print_frame(top, f'Top {cfg.top_n} by {order}')

    labels = classify_quadrants(scores, cfg.pop_threshold, cfg.prestige_threshold)
    write_table(pd.DataFrame([(a, label.value) for a, label in labels.items()], columns=['cited_id', 'quadrant']),
                out / 'quadrants.tsv', cfg.delimiter)
    write_table(pd.DataFrame([(render(q, 6), render(d, 6)) for q, d in qq_points(rows)],
                             columns=['normal_quantile', 'standardized_delta']),
                out / 'qq.tsv', cfg.delimiter)
    if cfg.plots:
        plt.close(plots.plot_delta_histogram(rows, save_locally=True, path=str(out / 'plots')))

    print(f'delta mean {render(distribution.mean, 2)}, std {render(distribution.std, 4)}, '
          f'excess kurtosis {kurtosis}')
    cprint(f'CRSM over {len(rows)} articles written to {out}', bcolors.OKGREEN)


@cli.command()
@input_options
@scoring_options
@ranking_options
@click.option('--authors', type=click.Path(), help='Authorship file (author, cited_id).')
@handle_errors
def report(config_path, **flags):
    """Summary, top-N rankings, R², quadrants and authors."""
    cfg = build_config(config_path, **flags)
    authorship = _authorship(cfg)
    extra = [a for pubs in (authorship or {}).values() for a in pubs]
    scores, corpus = _load_scores(cfg, extra_universe=extra)
    out = Path(cfg.out_dir)

    if corpus is not None:
        universe = _universe(cfg)
        universe = sorted(set(universe or corpus.cited_articles()) | {normalize_key(a) for a in extra})
        summary = corpus_summary(corpus, universe)
        write_table(summary.to_frame(), out / 'summary.tsv', cfg.delimiter)
        _print_frame(summary.to_frame(), 'Corpus summary')

    rows = crsm(scores)
    for order in ('citation', 'weighted'):
        top = top_n_report(scores, rows, cfg.top_n, order)
        write_table(top, out / f'top_{order}.tsv', cfg.delimiter)
        _print_frame(top, f'Top {cfg.top_n} by {order}')

    stats = [('top_n', str(cfg.top_n)), ('top_n_overlap', str(top_n_overlap(scores, cfg.top_n)))]
    try:
        r2 = linear_r2((s.citation_count, s.weighted_citation) for s in scores)
        stats.append(('r2', render(r2, 6)))
    except (DegenerateX, InsufficientData) as exc:
        logger.warning('No regression: %s', exc)
        r2 = None
    for name, values in (('citation', [(s.article, s.citation_count) for s in scores]),
                         ('weighted', [(s.article, s.weighted_citation) for s in scores])):
        unique, repeated = rank_uniqueness(rank_descending(values))
        stats += [(f'{name}_unique_ranks', str(unique)), (f'{name}_repeated_ranks', str(repeated))]

    counts = quadrant_counts(classify_quadrants(scores, cfg.pop_threshold, cfg.prestige_threshold))
    stats += [(label.value, str(count)) for label, count in counts.items()]
    _write_stats(stats, out / 'report.tsv', cfg.delimiter)
    _print_frame(pd.DataFrame(stats, columns=STAT_COLUMNS), 'Report')

    if authorship is not None:
        frame = pd.DataFrame([(a.author, len(a.publications), render(a.weighted_citation_total, 2),
                               a.weighted_h_index, a.citation_total, a.h_index)
                              for a in author_scores(authorship, scores)],
                             columns=['author', 'publications', 'weighted_citation', 'weighted_h_index',
                                      'citation_count', 'h_index'])
        write_table(frame, out / 'authors.tsv', cfg.delimiter)
        _print_frame(frame, 'Authors')

    if cfg.plots:
        plt.close(plots.plot_count_vs_weighted(scores, r2, save_locally=True, path=str(out / 'plots')))
    cprint(f'Report written to {out}', bcolors.OKGREEN)


@cli.command('generate')
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--articles', type=int, default=100, show_default=True)
@click.option('--journals', type=int, default=10, show_default=True)
@click.option('--lambda-true', type=float, default=0.117, show_default=True)
@click.option('--first-year', type=int, default=1998, show_default=True)
@click.option('--last-year', type=int, default=2007, show_default=True)
@click.option('--min-citations', type=int, default=0, show_default=True)
@click.option('--max-citations', type=int, default=10, show_default=True)
@click.option('--max-age', type=int, default=None, help='Citation window in years (unbounded by default).')
@click.option('--ai', 'ai_kind', type=click.Choice(['uniform', 'two_point']), default='uniform', show_default=True)
@click.option('--ai-low', type=float, default=0.5, show_default=True)
@click.option('--ai-high', type=float, default=2.0, show_default=True)
@click.option('--p-high', type=float, default=0.5, show_default=True)
@click.option('--delimiter', callback=_delimiter, default='tab', show_default=True)
@click.option('--out', type=click.Path(), default='synthetic', show_default=True)
@handle_errors
def generate_command(seed, articles, journals, lambda_true, first_year, last_year, min_citations,
                     max_citations, max_age, ai_kind, ai_low, ai_high, p_high, delimiter, out):
    """Write a seeded synthetic corpus and its ground truth."""
    spec = GenSpec(seed=seed, n_articles=articles, n_journals=journals, pub_year_range=(first_year, last_year),
                   lambda_true=lambda_true, ai_distribution=AiDistribution(ai_kind, ai_low, ai_high, p_high),
                   citations_per_article=(min_citations, max_citations), max_age=max_age)
    corpus, truth = generate(spec, progress=True)
    paths = write_generated(corpus, truth, out, delimiter)
    cprint(f'{len(corpus)} events over {articles} articles: ' + ', '.join(str(p) for p in paths), bcolors.OKGREEN)


if __name__ == '__main__':
    cli()
