"""
Band-Count Sweep Driver

Runs the full benchmark on one dataset:

1. Load the cube and ground truth.
2. Select bands once, up to the largest requested band count.
3. Split the labeled pixels once into stratified train and test sets.
4. For every band count n, keep the first n accepted bands, tune each
   roster classifier by cross-validation on the training portion, train it
   and evaluate it on the test portion.
5. Write the result tables, classification maps and models.
"""

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..classifiers.base import TrainedModel
from ..classifiers.model_selection import grid_search_cv
from ..classifiers.specs import ClassifierSpec, default_grid, roster_key, seeded_for_sweep
from ..classifiers.trainer import save_model, train_classifier
from ..models.hsi_models import GroundTruthMap, HsiCube, LabeledSampleSet
from ..utils.config import ExperimentConfig
from ..utils.map_renderer import ClassificationMap
from ..utils.report_generator import ReportGenerator
from .band_selection import SelectionState, select_bands, write_trace_csv
from .evaluation import EvalReport, evaluate
from .exceptions import ConfigurationError, DimensionMismatchError
from .hsi_data import extract_labeled_samples, load_cube, load_ground_truth, stratified_split

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepRow:
    """Result of one classifier at one band count."""
    classifier: str
    key: str
    bands_requested: int
    bands_used: int
    shortfall: bool
    spec: ClassifierSpec
    report: EvalReport
    band_ids: Tuple[int, ...] = ()


@dataclass
class SweepResult:
    config: ExperimentConfig
    cube: HsiCube
    gt: GroundTruthMap
    selection: SelectionState
    band_counts: Tuple[int, ...]
    rows: List[SweepRow] = field(default_factory=list)
    final_models: Dict[str, TrainedModel] = field(default_factory=dict)

    @property
    def dataset(self) -> str:
        return self.config.cube.stem if self.config.cube is not None else ""


class BenchmarkRunner:
    """
    Runs a band-count sweep described by an ExperimentConfig.

    The runner may also be handed an already loaded cube and ground truth,
    which is how the tests drive it without files.
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config

    def load_inputs(self) -> Tuple[HsiCube, GroundTruthMap]:
        if self.config.cube is None or self.config.gt is None:
            raise ConfigurationError("both cube and gt paths are required")
        cube = load_cube(self.config.cube)
        gt = load_ground_truth(self.config.gt, cube.shape)
        return cube, gt

    def run(self, cube: Optional[HsiCube] = None, gt: Optional[GroundTruthMap] = None) -> SweepResult:
        config = self.config
        if cube is None or gt is None:
            cube, gt = self.load_inputs()
        band_counts = config.resolve_band_counts(cube.bands)
        roster = config.roster()
        logger.info(
            f"Sweep over band counts {list(band_counts)} with {len(roster)} classifiers "
            f"(seed={config.seed})"
        )

        selection = select_bands(cube, gt, config.selection_config(cube.bands))
        samples = extract_labeled_samples(cube, gt, selection.accepted)
        train_all, test_all = stratified_split(samples, config.split_spec())

        result = SweepResult(config, cube, gt, selection, band_counts)
        largest = band_counts[-1]
        for n in band_counts:
            band_ids = selection.prefix(n)
            shortfall = len(band_ids) < n
            if shortfall:
                logger.warning(
                    f"Requested {n} bands but only {len(band_ids)} were accepted; "
                    f"using {len(band_ids)}"
                )
            train = train_all.select_bands(band_ids)
            test = test_all.select_bands(band_ids)
            logger.info(f"Band count {n}: training {len(roster)} classifiers on {len(band_ids)} bands")

            for index, spec in enumerate(roster):
                spec = seeded_for_sweep(spec, config.seed, index, n)
                row, model = self.run_classifier(spec, train, test, n, shortfall)
                result.rows.append(row)
                if n == largest:
                    result.final_models[row.key] = model
        return result

    def run_classifier(
        self,
        spec: ClassifierSpec,
        train: LabeledSampleSet,
        test: LabeledSampleSet,
        bands_requested: int,
        shortfall: bool,
    ) -> Tuple[SweepRow, TrainedModel]:
        config = self.config
        chosen = spec
        if config.grid_search:
            chosen = grid_search_cv(
                train, default_grid(spec), folds=config.cv_folds,
                seed=config.seed, standardize=config.standardize,
            )

        start = time.perf_counter()
        model = train_classifier(chosen, train, standardize=config.standardize, workers=config.workers)
        train_seconds = time.perf_counter() - start
        report = evaluate(model, test, train_seconds)
        logger.info(
            f"{spec.name} @ {train.n_features} bands: OA={report.oa:.4f} kappa={report.kappa:.4f}"
        )
        row = SweepRow(
            classifier=spec.name,
            key=roster_key(spec),
            bands_requested=bands_requested,
            bands_used=train.n_features,
            shortfall=shortfall,
            spec=chosen,
            report=report,
            band_ids=train.band_ids,
        )
        return row, model


def run_sweep(
    config: ExperimentConfig,
    cube: Optional[HsiCube] = None,
    gt: Optional[GroundTruthMap] = None,
) -> SweepResult:
    """Select bands, train and evaluate every roster entry at every band count."""
    return BenchmarkRunner(config).run(cube, gt)


def render_map(
    model: TrainedModel,
    cube: HsiCube,
    gt: GroundTruthMap,
    band_ids: Sequence[int],
    path: Optional[Union[str, Path]] = None,
) -> Tuple[ClassificationMap, ClassificationMap]:
    """
    Predict every pixel of the cube.

    Returns the full map and its masked variant (zero wherever the ground
    truth is unlabeled). With ``path`` both are written as PPM images, the
    masked one next to it with a ``_masked`` suffix.

    Raises:
        DimensionMismatchError: band_ids disagree with the model's bands or
            the ground truth does not match the cube
    """
    band_ids = tuple(int(b) for b in band_ids)
    if band_ids != model.band_ids:
        raise DimensionMismatchError(
            f"{model.name} was trained on bands {list(model.band_ids)}, got {list(band_ids)}"
        )
    if gt.shape != cube.shape:
        raise DimensionMismatchError(f"ground truth is {gt.shape}, cube is {cube.shape}")

    predictions = model.predict(cube.pixels(band_ids))
    full = ClassificationMap(cube.height, cube.width, predictions.reshape(cube.height, cube.width))
    masked = full.masked(gt)
    if path is not None:
        path = Path(path)
        full.write_ppm(path)
        masked.write_ppm(path.with_name(f"{path.stem}_masked{path.suffix or '.ppm'}"))
    return full, masked


def emit_reports(
    rows: Sequence[SweepRow],
    output_dir: Union[str, Path],
    selection: Optional[SelectionState] = None,
    inline_timing: bool = False,
    dataset: str = "",
) -> List[Path]:
    """Write sweep.csv, summary.csv and the companion tables."""
    return ReportGenerator(str(output_dir), inline_timing=inline_timing).generate_reports(
        rows, selection, dataset
    )


def write_outputs(result: SweepResult) -> List[Path]:
    """Reports, plus maps and models of the largest band count when enabled."""
    config = result.config
    written = emit_reports(
        result.rows, config.out, result.selection, config.inline_timing, result.dataset
    )
    final_rows = [row for row in result.rows if row.bands_requested == result.band_counts[-1]]

    for row in final_rows:
        model = result.final_models[row.key]
        written.append(save_model(model, config.out / "models" / f"{row.key}.json"))

    if config.render_maps:
        maps_dir = config.out / "maps"
        gt_path = maps_dir / "ground_truth.ppm"
        written.append(ClassificationMap.from_ground_truth(result.gt).write_ppm(gt_path))
        for row in final_rows:
            path = maps_dir / f"{row.key}.ppm"
            render_map(result.final_models[row.key], result.cube, result.gt, row.band_ids, path)
            written.extend([path, maps_dir / f"{row.key}_masked.ppm"])
    logger.info(f"Wrote {len(written)} output files to {config.out}")
    return written


def run_selection_only(
    config: ExperimentConfig,
    cube: Optional[HsiCube] = None,
    gt: Optional[GroundTruthMap] = None,
) -> SelectionState:
    """Band selection alone; writes selection_trace.csv into the output directory."""
    runner = BenchmarkRunner(config)
    if cube is None or gt is None:
        cube, gt = runner.load_inputs()
    selection = select_bands(cube, gt, config.selection_config(cube.bands))
    write_trace_csv(selection, config.out / "selection_trace.csv")
    return selection
