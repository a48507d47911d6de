import csv
import io
import logging
from itertools import zip_longest
from pathlib import Path

from ..storage import write_json_atomic, write_text_atomic
from .models import CharacterizationResult

logger = logging.getLogger(__name__)


def _csv_text(header: list[str], rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def write_characterization_outputs(result: CharacterizationResult, out_dir: Path) -> dict[str, Path]:
    """Write the plot datasets (CSV) and the full result (JSON) into ``out_dir``."""
    out_dir = Path(out_dir)
    paths = {
        "autocorrelation": out_dir / "autocorrelation.csv",
        "blocks": out_dir / "blocks.csv",
        "runs": out_dir / "runs.csv",
        "summary": out_dir / "characterization.json",
    }
    write_text_atomic(
        paths["autocorrelation"],
        _csv_text(["lag", "coefficient"], ((k, repr(c)) for k, c in enumerate(result.autocorrelation.coefficients, 1))),
    )
    write_text_atomic(paths["blocks"], _csv_text(["value", "count"], enumerate(result.histogram.counts)))
    runs = zip_longest(result.runs.zero_runs, result.runs.one_runs, fillvalue=0)
    write_text_atomic(
        paths["runs"],
        _csv_text(["runlength", "zeros", "ones"], ((i, zeros, ones) for i, (zeros, ones) in enumerate(runs, 1))),
    )
    write_json_atomic(paths["summary"], result.model_dump(mode="json"))
    logger.info("Wrote characterization outputs to %s", out_dir)
    return paths
