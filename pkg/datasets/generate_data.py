"""
Writes a small synthetic corpus next to this file.

    python datasets/generate_data.py
"""
import os
import sys
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.synthgen import AiDistribution, GenSpec, generate, write_generated

HERE = os.path.dirname(os.path.abspath(__file__))


def small_corpus(name='synthetic_small'):
    """A desk-sized corpus: 50 articles, up to 8 citations each, two journal tiers."""
    spec = GenSpec(seed=2009, n_articles=50, n_journals=6, pub_year_range=(1998, 2007),
                   ai_distribution=AiDistribution('two_point', low=0.4, high=2.5, p_high=0.3),
                   citations_per_article=(0, 8), max_age=9)
    corpus, truth = generate(spec)
    write_generated(corpus, truth, os.path.join(HERE, name))
    print(f'{name}: {len(corpus)} events over {spec.n_articles} articles')


if __name__ == '__main__':
    small_corpus()
