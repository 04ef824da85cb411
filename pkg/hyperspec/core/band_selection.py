"""
Mutual-Information Band Selection

Greedy filter that picks spectral bands by their information about the
ground truth:

1. Compute MI(GT, band) for every band and rank bands by it.
2. Accept the top-ranked band.
3. For each further candidate, in rank order, build the approximated
   reference map G_est as the average of the accepted bands and the
   candidate.
4. Keep the candidate only if MI(GT, G_est) beats the last accepted value
   by more than the configured threshold. Rejected bands are not revisited.

All MI values are computed over labeled pixels only, after min-max
quantization of the band (or of G_est) to ``levels`` symbols.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..models.hsi_models import GroundTruthMap, HsiCube
from .exceptions import SelectionError
from .hsi_data import DEFAULT_LEVELS, check_dimensions, quantize_values
from .info_theory import mutual_information

logger = logging.getLogger(__name__)

GEST_MODES = ("mean", "pairwise")
TRACE_COLUMNS = ["band_id", "trial_mi_bits", "accepted", "cumulative_selected"]


@dataclass(frozen=True)
class SelectionConfig:
    """
    Band selection settings.

    Args:
        max_bands: stop once this many bands are accepted
        levels: quantization levels for the MI histograms
        threshold: minimum MI gain (bits) a candidate must exceed
        gest_mode: "mean" averages all accepted bands with the candidate;
            "pairwise" averages the previous G_est with the candidate
        workers: threads used to rank bands
    """
    max_bands: int = 100
    levels: int = DEFAULT_LEVELS
    threshold: float = 0.0
    gest_mode: str = "mean"
    workers: int = 1

    def __post_init__(self):
        if self.max_bands < 1:
            raise ValueError(f"max_bands must be at least 1, got {self.max_bands}")
        if self.levels < 2:
            raise ValueError(f"levels must be at least 2, got {self.levels}")
        if self.threshold < 0:
            raise ValueError(f"threshold must be non-negative, got {self.threshold}")
        if self.gest_mode not in GEST_MODES:
            raise ValueError(f"gest_mode must be one of {GEST_MODES}, got {self.gest_mode!r}")


@dataclass(frozen=True)
class TrialRecord:
    """One candidate evaluation of the greedy loop."""
    band_id: int
    trial_mi: float
    accepted: bool
    cumulative_selected: int


@dataclass(frozen=True)
class SelectionState:
    """Outcome of a selection run."""
    accepted: Tuple[int, ...]
    gest: np.ndarray
    current_mi: float
    trace: Tuple[TrialRecord, ...] = ()
    ranking: Tuple[Tuple[int, float], ...] = ()
    config: SelectionConfig = field(default_factory=SelectionConfig)

    @property
    def accepted_mi(self) -> List[float]:
        """MI after each acceptance, in acceptance order."""
        return [record.trial_mi for record in self.trace if record.accepted]

    def prefix(self, n: int) -> Tuple[int, ...]:
        return self.accepted[:n]


def _check_inputs(cube: HsiCube, gt: GroundTruthMap):
    check_dimensions(cube, gt)
    if not gt.labeled_mask.any():
        raise SelectionError("no labeled pixels")


def map_mutual_information(
    values: np.ndarray, gt: GroundTruthMap, levels: int = DEFAULT_LEVELS
) -> float:
    """MI between the ground truth and a real-valued H×W map, over labeled pixels."""
    mask = gt.labeled_mask
    if not mask.any():
        raise SelectionError("no labeled pixels")
    codes = quantize_values(values, levels)
    return mutual_information(codes[mask], gt.labels[mask])


def rank_bands_by_mi(
    cube: HsiCube, gt: GroundTruthMap, levels: int = DEFAULT_LEVELS, workers: int = 1
) -> List[Tuple[int, float]]:
    """
    Rank every band by MI with the ground truth.

    Returns:
        (band id, MI bits) pairs sorted by descending MI, ties broken by
        ascending band id
    """
    _check_inputs(cube, gt)

    def score(band: int) -> float:
        return map_mutual_information(cube.band(band), gt, levels)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            scores = list(pool.map(score, range(cube.bands)))
    else:
        scores = [score(band) for band in range(cube.bands)]

    ranking = sorted(enumerate(scores), key=lambda item: (-item[1], item[0]))
    logger.debug(f"Top-ranked bands: {ranking[:5]}")
    return [(int(band), float(mi)) for band, mi in ranking]


def build_gest(cube: HsiCube, accepted: Sequence[int]) -> np.ndarray:
    """Pixel-wise arithmetic mean of the accepted bands' raw values."""
    accepted = list(accepted)
    if not accepted:
        raise SelectionError("cannot build G_est from an empty band list")
    return cube.data[accepted].astype(np.float64).mean(axis=0)


def select_bands(
    cube: HsiCube, gt: GroundTruthMap, config: SelectionConfig = None
) -> SelectionState:
    """
    Run the greedy MI band selection.

    Args:
        cube: hyperspectral cube
        gt: ground truth of the same dimensions
        config: selection settings (defaults to SelectionConfig())

    Returns:
        SelectionState with the accepted bands, final G_est, its MI and the
        trace of every candidate tried
    """
    config = config or SelectionConfig()
    _check_inputs(cube, gt)
    logger.info(
        f"Selecting up to {config.max_bands} of {cube.bands} bands "
        f"(levels={config.levels}, threshold={config.threshold}, gest={config.gest_mode})"
    )

    ranking = rank_bands_by_mi(cube, gt, config.levels, config.workers)
    seed_band, seed_mi = ranking[0]

    accepted = [seed_band]
    gest = build_gest(cube, accepted)
    current_mi = map_mutual_information(gest, gt, config.levels)
    trace = [TrialRecord(seed_band, current_mi, True, 1)]

    for band, _ in ranking[1:]:
        if len(accepted) >= config.max_bands:
            break
        if config.gest_mode == "mean":
            trial_gest = build_gest(cube, accepted + [band])
        else:
            trial_gest = (gest + cube.band(band).astype(np.float64)) / 2.0
        trial_mi = map_mutual_information(trial_gest, gt, config.levels)

        keep = trial_mi > current_mi + config.threshold
        if keep:
            accepted.append(band)
            gest = trial_gest
            current_mi = trial_mi
        trace.append(TrialRecord(band, trial_mi, keep, len(accepted)))
        logger.debug(
            f"Band {band}: trial MI {trial_mi:.6f} bits -> {'accepted' if keep else 'rejected'}"
        )

    gest.setflags(write=False)
    logger.info(
        f"Selected {len(accepted)} bands after {len(trace)} trials; "
        f"final MI {current_mi:.4f} bits"
    )
    return SelectionState(
        accepted=tuple(accepted),
        gest=gest,
        current_mi=current_mi,
        trace=tuple(trace),
        ranking=tuple(ranking),
        config=config,
    )


def trace_to_frame(state: SelectionState) -> pd.DataFrame:
    """Selection trace as a DataFrame with the exported CSV columns."""
    rows = [
        {
            "band_id": record.band_id,
            "trial_mi_bits": record.trial_mi,
            "accepted": int(record.accepted),
            "cumulative_selected": record.cumulative_selected,
        }
        for record in state.trace
    ]
    return pd.DataFrame(rows, columns=TRACE_COLUMNS)


def write_trace_csv(state: SelectionState, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    trace_to_frame(state).to_csv(path, index=False, lineterminator="\n")
    logger.info(f"Wrote selection trace to {path}")
    return path
