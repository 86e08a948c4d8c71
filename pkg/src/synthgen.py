"""
Seeded synthetic corpora with known answers.

Every random draw comes from SplitMix64, a 64-bit generator defined by its
recurrence alone, so a given GenSpec produces the same corpus on any
platform:

    state  <- state + 0x9E3779B97F4A7C15            (mod 2**64)
    z      <- (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
    z      <- (z ^ (z >> 27)) * 0x94D049BB133111EB
    output <- z ^ (z >> 31)

Uniform reals are the top 53 bits of an output scaled to [0, 1).

Draw order: for each article in id order, its publication year, its number
of citations, then per citation its age and its citing journal. Article
Influence scores are drawn afterwards for every (journal, citation year)
pair that occurs, in sorted order.

Citation ages follow the discretized exponential law P(age = k) ~ exp(-lambda k),
sampled by inverse CDF, optionally truncated to a citation window of
max_age years. The expected weighted score of each article is summed while
generating, without going through the scoring module.
"""
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import pandas as pd
from tqdm import tqdm

from src.corpus import ArticleId, CitationEvent, Corpus, JournalYearScore, build_corpus, is_gregorian_year
from src.errors import InvalidSpec
from src.ingest import write_corpus
from src.utils import write_table

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
GROUND_TRUTH_COLUMNS = ('cited_id', 'expected_weighted_citation')


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Real in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def below(self, n: int) -> int:
        """Integer in [0, n) by modulo reduction."""
        assert n >= 1
        return self.next_u64() % n

    def between(self, low: int, high: int) -> int:
        """Integer in [low, high], both ends included."""
        return low + self.below(high - low + 1)


@dataclass(frozen=True)
class AiDistribution:
    """
    uniform   : AI uniform on [low, high]
    two_point : AI = high with probability p_high, low otherwise
    """
    kind: Literal['uniform', 'two_point'] = 'uniform'
    low: float = 0.5
    high: float = 2.0
    p_high: float = 0.5

    def sample(self, rng: SplitMix64) -> float:
        u = rng.uniform()
        if self.kind == 'uniform':
            return self.low + (self.high - self.low) * u
        return self.high if u < self.p_high else self.low


@dataclass(frozen=True)
class GenSpec:
    seed: int = 0
    n_articles: int = 100
    n_journals: int = 10
    pub_year_range: tuple[int, int] = (1998, 2007)
    lambda_true: float = 0.117
    ai_distribution: AiDistribution = field(default_factory=AiDistribution)
    citations_per_article: tuple[int, int] = (0, 10)
    max_age: int | None = None

    def validate(self) -> 'GenSpec':
        if not isinstance(self.seed, int) or not 0 <= self.seed <= MASK64:
            raise InvalidSpec(f'seed must be a 64-bit unsigned integer, got {self.seed!r}')
        if self.n_articles < 0:
            raise InvalidSpec(f'n_articles must be >= 0, got {self.n_articles}')
        if self.n_journals < 1:
            raise InvalidSpec(f'n_journals must be >= 1, got {self.n_journals}')
        first, last = self.pub_year_range
        if not (is_gregorian_year(first) and is_gregorian_year(last) and first <= last):
            raise InvalidSpec(f'Bad publication year range {self.pub_year_range}')
        if not (self.lambda_true > 0 and math.isfinite(self.lambda_true)):
            raise InvalidSpec(f'lambda_true must be a positive real, got {self.lambda_true}')
        low, high = self.citations_per_article
        if not 0 <= low <= high:
            raise InvalidSpec(f'Bad citations_per_article range {self.citations_per_article}')
        if self.max_age is not None and self.max_age < 0:
            raise InvalidSpec(f'max_age must be >= 0, got {self.max_age}')
        ai = self.ai_distribution
        if ai.kind not in ('uniform', 'two_point'):
            raise InvalidSpec(f'Unknown AI distribution {ai.kind!r}')
        if not 0 <= ai.low <= ai.high:
            raise InvalidSpec(f'AI bounds must satisfy 0 <= low <= high, got ({ai.low}, {ai.high})')
        if not 0 <= ai.p_high <= 1:
            raise InvalidSpec(f'p_high must be in [0, 1], got {ai.p_high}')
        # -ln(2**-53) bounds an unbounded draw
        longest = self.max_age if self.max_age is not None else math.ceil(53 * math.log(2) / self.lambda_true)
        if last + longest > 9999:
            raise InvalidSpec('Citation years would leave the 4-digit range')
        return self


def sample_age(rng: SplitMix64, lambda_: float, max_age: int | None = None) -> int:
    """Inverse CDF of P(k) ~ exp(-lambda k), k = 0, 1, ... (up to max_age when given)."""
    u = rng.uniform()
    if max_age is not None:
        u *= -math.expm1(-lambda_ * (max_age + 1))
    age = int(math.floor(-math.log1p(-u) / lambda_))
    return age if max_age is None else min(age, max_age)


def generate(spec: GenSpec, progress: bool = False) -> tuple[Corpus, dict[ArticleId, float]]:
    """
    Build a corpus from `spec` and the weighted score every article should
    get under lambda = spec.lambda_true. Never-cited articles have a 0 entry.
    """
    spec.validate()
    rng = SplitMix64(spec.seed)
    first_year, last_year = spec.pub_year_range
    low, high = spec.citations_per_article

    drafts = []
    for i in tqdm(range(spec.n_articles), desc='articles', disable=not progress):
        article = f'A{i:06d}'
        pub_year = rng.between(first_year, last_year)
        for _ in range(rng.between(low, high)):
            age = sample_age(rng, spec.lambda_true, spec.max_age)
            journal = f'J{rng.below(spec.n_journals):04d}'
            drafts.append((article, pub_year, journal, pub_year + age))

    influence = {}
    for key in sorted({(journal, year) for *_, journal, year in drafts}):
        influence[key] = spec.ai_distribution.sample(rng)

    truth = {f'A{i:06d}': 0.0 for i in range(spec.n_articles)}
    events = []
    for k, (article, pub_year, journal, year) in enumerate(drafts):
        truth[article] += math.exp(-spec.lambda_true * (year - pub_year)) * influence[(journal, year)]
        events.append(CitationEvent(cited=article, cited_pub_year=pub_year, citing_article=f'C{k:07d}',
                                    citing_journal=journal, citation_year=year))

    scores = [JournalYearScore(journal=journal, year=year, article_influence=ai)
              for (journal, year), ai in influence.items()]
    corpus = build_corpus(events, scores)
    logger.info('Generated %d events over %d articles (seed %d)', len(events), spec.n_articles, spec.seed)
    return corpus, truth


def write_generated(corpus: Corpus, ground_truth: dict[ArticleId, float], out_dir,
                    delimiter: str = '\t') -> tuple[Path, Path, Path]:
    """events.tsv, scores.tsv and ground_truth.tsv (exact reals) in out_dir."""
    out_dir = Path(out_dir)
    events_path, scores_path = write_corpus(corpus, out_dir, delimiter)
    truth = pd.DataFrame([(article, repr(float(value))) for article, value in sorted(ground_truth.items())],
                         columns=list(GROUND_TRUTH_COLUMNS))
    truth_path = write_table(truth, out_dir / 'ground_truth.tsv', delimiter)
    return events_path, scores_path, truth_path
