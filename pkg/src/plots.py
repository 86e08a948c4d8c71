import os

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
import seaborn as sns

from src.corpus import ArticleScore
from src.crsm import CrsmRow
from src.decay import AgeHistogram, FitResult


def _save(fig, filename, save_locally, path):
    if save_locally:
        if not os.path.exists(path):
            os.makedirs(path)
        fig.savefig(os.path.join(path, filename + '.png'))


def plot_age_histogram(hist: AgeHistogram, fit: FitResult | None = None, filename='citation_ages',
                       save_locally=False, path='plots/'):
    """Citations per age, with the fitted exponential from the start age onwards."""
    ages = np.array(sorted(hist.counts))
    counts = np.array([hist.counts[a] for a in ages])

    fig, ax = plt.subplots(figsize=(8, 6))
    ax.bar(ages, counts, color='tab:blue', alpha=0.7, label='Citations')
    if fit is not None and len(ages):
        # anchor the curve at the observed count of the start age
        anchor = hist.counts.get(fit.start_age, 0)
        x = np.linspace(fit.start_age, ages.max(), 200)
        ax.plot(x, anchor * np.exp(-fit.lambda_ * (x - fit.start_age)), color='tab:red',
                label=f'exp(-{fit.lambda_:.3f} x), R² = {fit.r2:.3f}')
    ax.set_title('Citation age distribution')
    ax.set_xlabel('Citation age (years)')
    ax.set_ylabel('Citations')
    ax.legend()
    ax.grid(True)

    _save(fig, filename, save_locally, path)
    return fig


def plot_count_vs_weighted(scores: list[ArticleScore], r2: float | None = None, filename='count_vs_weighted',
                           save_locally=False, path='plots/'):
    data = pd.DataFrame({'citation_count': [s.citation_count for s in scores],
                         'weighted_citation': [s.weighted_citation for s in scores]})
    fig, ax = plt.subplots(figsize=(8, 6))
    sns.regplot(data=data, x='citation_count', y='weighted_citation', ax=ax, ci=None,
                scatter_kws={'alpha': 0.5}, line_kws={'color': 'tab:red'})
    title = 'Citation count vs weighted citation'
    ax.set_title(title if r2 is None else f'{title} (R² = {r2:.3f})')
    ax.set_xlabel('Citation count')
    ax.set_ylabel('Weighted citation')
    ax.grid(True)

    _save(fig, filename, save_locally, path)
    return fig


def plot_delta_histogram(rows: list[CrsmRow], bin_width: float = 1.0, filename='delta_histogram',
                         save_locally=False, path='plots/'):
    deltas = np.array([row.delta for row in rows], dtype=np.float64)
    fig, ax = plt.subplots(figsize=(8, 6))
    if deltas.size:
        low = np.floor(deltas.min() / bin_width + 0.5) - 0.5
        high = np.floor(deltas.max() / bin_width + 0.5) + 0.5
        sns.histplot(deltas, bins=np.arange(low, high + 1) * bin_width, ax=ax)
    ax.set_title('Difference between popularity and prestige')
    ax.set_xlabel('Delta')
    ax.set_ylabel('Articles')
    ax.grid(True)

    _save(fig, filename, save_locally, path)
    return fig
