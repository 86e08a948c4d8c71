"""
Run configuration shared by every command.

Values come from an optional YAML file (keys are the field names below;
`lambda` is accepted for `lambda_`) and are overridden by command-line flags.
"""
import os
from dataclasses import dataclass, fields, replace

import yaml

from src.analytics import MEDIAN
from src.decay import AUTO, DEFAULT_LAMBDA, DecayParams
from src.errors import FileUnreadable, InvalidConfig
from src.scoring import MissingScorePolicy

PATH_FIELDS = ('events_path', 'scores_path', 'alias_path', 'score_table_path', 'authors_path', 'universe_path')


@dataclass(frozen=True)
class RunConfig:
    events_path: str | None = None
    scores_path: str | None = None
    alias_path: str | None = None
    score_table_path: str | None = None
    authors_path: str | None = None
    universe_path: str | None = None
    lambda_: float = DEFAULT_LAMBDA
    missing_policy: str = 'zero'
    pop_threshold: float | str = MEDIAN
    prestige_threshold: float | str = MEDIAN
    out_dir: str = 'out'
    delimiter: str = '\t'
    top_n: int = 20
    start_age: int | str = AUTO
    simplified: bool = False
    plots: bool = False

    @classmethod
    def from_yaml(cls, path) -> 'RunConfig':
        try:
            with open(path, encoding='utf-8') as f:
                data = yaml.safe_load(f) or {}
        except OSError as exc:
            raise FileUnreadable(path, exc) from exc
        except yaml.YAMLError as exc:
            raise InvalidConfig(f'{path}: {exc}') from exc
        if not isinstance(data, dict):
            raise InvalidConfig(f'{path}: expected a mapping at the top level')
        if 'lambda' in data:
            data['lambda_'] = data.pop('lambda')
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidConfig(f'{path}: unknown keys {unknown}')
        return cls(**data)

    def merge(self, **overrides) -> 'RunConfig':
        """Copy with every override that is not None applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    @property
    def policy(self) -> MissingScorePolicy:
        return MissingScorePolicy.parse(str(self.missing_policy))

    @property
    def decay(self) -> DecayParams | None:
        """None in simplified mode (no time weighting)."""
        return None if self.simplified else DecayParams(self.lambda_)

    def validate(self, *required: str) -> 'RunConfig':
        """Check values; every path in `required` must be set and every set path must exist."""
        for name in required:
            if getattr(self, name) is None:
                raise InvalidConfig(f'{name} is required')
        for name in PATH_FIELDS:
            path = getattr(self, name)
            if path is not None and not os.path.isfile(path):
                raise FileUnreadable(path, 'no such file')

        if not isinstance(self.lambda_, (int, float)) or not self.lambda_ > 0:
            raise InvalidConfig(f'lambda must be > 0, got {self.lambda_!r}')
        if len(self.delimiter) != 1:
            raise InvalidConfig(f'delimiter must be a single character, got {self.delimiter!r}')
        if not isinstance(self.top_n, int) or self.top_n < 1:
            raise InvalidConfig(f'top_n must be >= 1, got {self.top_n!r}')
        if self.start_age != AUTO and not (isinstance(self.start_age, int) and self.start_age >= 0):
            raise InvalidConfig(f'start_age must be "auto" or a non-negative integer, got {self.start_age!r}')
        for name in ('pop_threshold', 'prestige_threshold'):
            value = getattr(self, name)
            if value != MEDIAN and not isinstance(value, (int, float)):
                raise InvalidConfig(f'{name} must be "median" or a number, got {value!r}')
        MissingScorePolicy.parse(str(self.missing_policy))
        return self
