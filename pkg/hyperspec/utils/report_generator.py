"""
Report Generator for hyperspectral benchmark sweeps
Writes the sweep tables, accuracy curves, timing and a Markdown summary
"""

import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from jinja2 import Environment, FileSystemLoader

from ..classifiers.specs import spec_to_dict
from ..core.band_selection import SelectionState, trace_to_frame
from ..core.evaluation import METRIC_COLUMNS, PER_CLASS_COLUMNS
from ..core.exceptions import ReportError

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["classifier", "bands_requested", "bands_used", "shortfall", *METRIC_COLUMNS]
SUMMARY_COLUMNS = ["classifier", "bands", *METRIC_COLUMNS]
TIMING_COLUMNS = ["classifier", "bands_used", "train_seconds", "predict_seconds"]


def _params(spec) -> str:
    values = spec_to_dict(spec)
    return json.dumps(values, sort_keys=True, separators=(",", ":"))


class ReportGenerator:
    """
    Writes every output table of a sweep into one directory.

    Rows are duck-typed sweep rows with ``classifier``, ``bands_requested``,
    ``bands_used``, ``shortfall``, ``spec`` and ``report`` attributes.

    Args:
        output_dir: directory receiving the files
        inline_timing: add a ``time`` column (train + predict seconds) to
            sweep.csv and summary.csv; those files then differ between runs
    """

    def __init__(self, output_dir: str = "output", inline_timing: bool = False):
        self.output_dir = Path(output_dir)
        self.inline_timing = inline_timing
        self.template_dir = Path(__file__).parent / "templates"
        self.env = Environment(
            loader=FileSystemLoader(str(self.template_dir)),
            autoescape=False,
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )

    def _ensure_output_dir(self):
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            logger.error(f"Cannot create output directory {self.output_dir}: {e}")
            raise ReportError(f"cannot create output directory {self.output_dir}: {e}")

    def _write_frame(self, frame: pd.DataFrame, name: str) -> Path:
        path = self.output_dir / name
        try:
            frame.to_csv(path, index=False, lineterminator="\n")
        except OSError as e:
            logger.error(f"Failed to write {path}: {e}")
            raise ReportError(f"cannot write {path}: {e}")
        logger.info(f"Wrote {path}")
        return path

    def generate_reports(
        self,
        rows: Sequence[Any],
        selection: Optional[SelectionState] = None,
        dataset: str = "",
    ) -> List[Path]:
        """Write all tables; returns the written paths."""
        if not rows:
            raise ReportError("no sweep rows to report")
        self._ensure_output_dir()
        logger.info(f"Writing reports for {len(rows)} sweep rows to {self.output_dir}")

        written = [
            self._write_frame(self.sweep_frame(rows), "sweep.csv"),
            self._write_frame(self.summary_frame(rows), "summary.csv"),
            self._write_frame(self.per_class_frame(rows), "per_class.csv"),
            self._write_frame(self.curves_frame(rows), "curves.csv"),
            self._write_frame(self.timing_frame(rows), "timing.csv"),
        ]
        if selection is not None:
            written.append(self._write_frame(trace_to_frame(selection), "selection_trace.csv"))
        written.append(self.write_summary_markdown(rows, selection, dataset))
        return written

    def sweep_frame(self, rows: Sequence[Any]) -> pd.DataFrame:
        """One line per classifier × band count."""
        records = []
        for row in rows:
            record = {
                "classifier": row.classifier,
                "bands_requested": row.bands_requested,
                "bands_used": row.bands_used,
                "shortfall": int(row.shortfall),
                **row.report.to_row(self.inline_timing),
                "params": _params(row.spec),
            }
            records.append(record)
        columns = SWEEP_COLUMNS + (["time"] if self.inline_timing else []) + ["params"]
        return pd.DataFrame(records, columns=columns)

    @staticmethod
    def final_rows(rows: Sequence[Any]) -> List[Any]:
        """Rows of the largest requested band count, in roster order."""
        largest = max(row.bands_requested for row in rows)
        return [row for row in rows if row.bands_requested == largest]

    def summary_frame(self, rows: Sequence[Any]) -> pd.DataFrame:
        records = [
            {"classifier": row.classifier, "bands": row.bands_used, **row.report.to_row(self.inline_timing)}
            for row in self.final_rows(rows)
        ]
        columns = SUMMARY_COLUMNS + (["time"] if self.inline_timing else [])
        return pd.DataFrame(records, columns=columns)

    def per_class_frame(self, rows: Sequence[Any]) -> pd.DataFrame:
        records = []
        for row in rows:
            for metrics in row.report.per_class:
                records.append({"classifier": row.classifier, "bands_used": row.bands_used, **metrics.to_row()})
        return pd.DataFrame(records, columns=["classifier", "bands_used", *PER_CLASS_COLUMNS])

    def curves_frame(self, rows: Sequence[Any]) -> pd.DataFrame:
        """OA per band count (rows) and classifier (columns, roster order)."""
        order: List[str] = []
        for row in rows:
            if row.classifier not in order:
                order.append(row.classifier)
        frame = pd.DataFrame(
            [{"bands": row.bands_requested, "classifier": row.classifier, "oa": row.report.oa} for row in rows]
        )
        curves = frame.pivot(index="bands", columns="classifier", values="oa")
        curves = curves.reindex(columns=order).sort_index()
        curves.columns.name = None
        return curves.reset_index()

    def timing_frame(self, rows: Sequence[Any]) -> pd.DataFrame:
        records = [
            {
                "classifier": row.classifier,
                "bands_used": row.bands_used,
                "train_seconds": row.report.train_seconds,
                "predict_seconds": row.report.predict_seconds,
            }
            for row in rows
        ]
        return pd.DataFrame(records, columns=TIMING_COLUMNS)

    def write_summary_markdown(
        self, rows: Sequence[Any], selection: Optional[SelectionState] = None, dataset: str = ""
    ) -> Path:
        """Render summary.md as a Markdown comparison table."""
        final = self.final_rows(rows)
        template = self.env.get_template("summary.md.j2")
        content = template.render(
            dataset=dataset,
            bands=final[0].bands_used,
            rows=[
                {
                    "classifier": row.classifier,
                    "sensitivity": 100.0 * row.report.sensitivity,
                    "specificity": 100.0 * row.report.specificity,
                    "precision": 100.0 * row.report.precision,
                    "oa": 100.0 * row.report.oa,
                    "kappa": row.report.kappa,
                    "time": row.report.total_seconds,
                    "shortfall": row.shortfall,
                }
                for row in final
            ],
            inline_timing=self.inline_timing,
            selected=list(selection.accepted) if selection is not None else [],
            final_mi=selection.current_mi if selection is not None else None,
            generated_at=datetime.now().isoformat(timespec="seconds") if self.inline_timing else None,
        )
        path = self.output_dir / "summary.md"
        try:
            path.write_text(content, encoding="utf-8")
        except OSError as e:
            logger.error(f"Failed to write {path}: {e}")
            raise ReportError(f"cannot write {path}: {e}")
        logger.info(f"Wrote {path}")
        return path
