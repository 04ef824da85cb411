"""
Configuration settings for hyperspectral benchmark runs.

Dataclasses for the experiment itself and for logging. Values usually come
from ConfigManager, which merges defaults, a config file, environment
variables and command-line overrides.
"""

from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from ..classifiers.specs import ClassifierSpec, parse_roster
from ..core.band_selection import GEST_MODES, SelectionConfig
from ..core.exceptions import ConfigurationError
from ..core.hsi_data import DEFAULT_LEVELS
from ..models.hsi_models import SplitSpec

DEFAULT_BAND_GRID = tuple(range(10, 101, 10))


@dataclass
class LoggingConfig:
    """Logging configuration settings."""
    level: str = "INFO"
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    file_path: Optional[str] = None
    max_file_size: int = 10 * 1024 * 1024  # 10MB
    backup_count: int = 5
    enable_console: bool = True
    enable_file: bool = True


def parse_band_counts(value: Union[None, str, int, List[int], Tuple[int, ...]]) -> Optional[Tuple[int, ...]]:
    """Accept ``10,20,30``, a single integer or a list; None keeps the default grid."""
    if value is None or value == "":
        return None
    if isinstance(value, int):
        return (value,)
    if isinstance(value, str):
        parts = [part.strip() for part in value.split(",") if part.strip()]
    else:
        parts = list(value)
    try:
        return tuple(int(part) for part in parts)
    except (TypeError, ValueError):
        raise ConfigurationError(f"band counts must be integers, got {value!r}")


@dataclass
class ExperimentConfig:
    """
    One band-count sweep over a classifier roster.

    Args:
        cube: path of the band-sequential cube
        gt: path of the ground-truth raster
        band_counts: strictly increasing band counts; None means
            10, 20, ..., 100 capped at the cube's band count
        classifiers: ``all-paper`` or a list of roster keys
        seed: global seed for the split, cross-validation and forests
        out: output directory
        max_bands: selection limit; None means the largest band count
    """
    cube: Optional[Path] = None
    gt: Optional[Path] = None
    band_counts: Optional[Tuple[int, ...]] = None
    classifiers: Union[str, List[str]] = "all-paper"
    seed: int = 0
    out: Path = Path("output")
    train_fraction: float = 0.5
    levels: int = DEFAULT_LEVELS
    max_bands: Optional[int] = None
    threshold: float = 0.0
    gest_mode: str = "mean"
    cv_folds: int = 5
    grid_search: bool = True
    standardize: bool = True
    rf_trees: int = 100
    workers: int = 1
    inline_timing: bool = False
    render_maps: bool = True
    logging: LoggingConfig = field(default_factory=LoggingConfig)

    def __post_init__(self):
        self.cube = Path(self.cube) if self.cube is not None else None
        self.gt = Path(self.gt) if self.gt is not None else None
        self.out = Path(self.out)
        self.band_counts = parse_band_counts(self.band_counts)
        self.validate()

    def validate(self):
        if self.band_counts is not None:
            if not self.band_counts:
                raise ConfigurationError("band_counts must not be empty")
            if any(n < 1 for n in self.band_counts):
                raise ConfigurationError(f"band counts must be at least 1, got {list(self.band_counts)}")
            if any(b <= a for a, b in zip(self.band_counts, self.band_counts[1:])):
                raise ConfigurationError(
                    f"band counts must be strictly increasing, got {list(self.band_counts)}"
                )
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigurationError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")
        if self.seed < 0 or self.seed >= 2 ** 64:
            raise ConfigurationError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.levels < 2:
            raise ConfigurationError(f"levels must be at least 2, got {self.levels}")
        if self.max_bands is not None and self.max_bands < 1:
            raise ConfigurationError(f"max_bands must be at least 1, got {self.max_bands}")
        if self.threshold < 0:
            raise ConfigurationError(f"threshold must be non-negative, got {self.threshold}")
        if self.gest_mode not in GEST_MODES:
            raise ConfigurationError(f"gest_mode must be one of {GEST_MODES}, got {self.gest_mode!r}")
        if self.cv_folds < 2:
            raise ConfigurationError(f"cv_folds must be at least 2, got {self.cv_folds}")
        if self.rf_trees < 1:
            raise ConfigurationError(f"rf_trees must be at least 1, got {self.rf_trees}")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be at least 1, got {self.workers}")
        roster = self.roster()
        names = [spec.name for spec in roster]
        duplicates = sorted({name for name in names if names.count(name) > 1})
        if duplicates:
            raise ConfigurationError(f"classifier roster lists {duplicates} more than once")

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "ExperimentConfig":
        """Build from a flat configuration mapping; unknown keys are ignored."""
        known = {f.name for f in fields(cls)} - {"logging", "band_counts"}
        kwargs = {key: values[key] for key in known if values.get(key) is not None}
        if "bands" in values:
            kwargs["band_counts"] = values["bands"]
        kwargs["logging"] = LoggingConfig(
            level=str(values.get("log_level") or "INFO").upper(),
            file_path=values.get("log_file") or None,
            enable_file=bool(values.get("log_file")),
        )
        try:
            return cls(**kwargs)
        except TypeError as e:
            raise ConfigurationError(f"invalid configuration: {e}")

    def resolve_band_counts(self, num_bands: int) -> Tuple[int, ...]:
        """Configured band counts, or the default grid capped at ``num_bands``."""
        if self.band_counts is not None:
            return self.band_counts
        counts: List[int] = []
        for n in DEFAULT_BAND_GRID:
            capped = min(n, num_bands)
            if not counts or capped > counts[-1]:
                counts.append(capped)
        return tuple(counts)

    def selection_config(self, num_bands: int) -> SelectionConfig:
        limit = self.max_bands
        if limit is None:
            limit = max(self.resolve_band_counts(num_bands))
        return SelectionConfig(
            max_bands=limit,
            levels=self.levels,
            threshold=self.threshold,
            gest_mode=self.gest_mode,
            workers=self.workers,
        )

    def split_spec(self) -> SplitSpec:
        return SplitSpec(train_fraction=self.train_fraction, seed=self.seed)

    def roster(self) -> List[ClassifierSpec]:
        return parse_roster(self.classifiers, seed=self.seed, rf_trees=self.rf_trees)
