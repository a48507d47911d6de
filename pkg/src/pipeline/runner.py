import json
import logging
import time
from pathlib import Path
from typing import Any

import numpy as np

from .. import __version__
from ..characterization import characterize, write_characterization_outputs
from ..config import PipelineConfig, config_hash
from ..errors import FormatError
from ..extractor import extract_pipeline, measure_throughput
from ..nist import run_battery
from ..reports import render_report_markdown, render_text
from ..seeding import make_rng
from ..storage import write_json_atomic, write_text_atomic
from ..timetag import (
    BITS_MAGIC,
    RECORD_MAGIC,
    BitSequence,
    bits_from_records,
    read_bits_file,
    read_records,
    sniff_magic,
    write_bits,
)
from .models import StageResult
from .simulation import metadata_path, simulate

logger = logging.getLogger(__name__)

NIST_FAILED_EXIT_CODE = 3


def _require_magic(path: Path, magic: bytes) -> None:
    try:
        found = sniff_magic(path)
    except OSError as exc:
        raise FormatError(f"Cannot read {path}: {exc}") from exc
    if found != magic:
        raise FormatError(f"{path}: bad magic {found!r}, expected {magic!r}")


def _report_path(out_path: Path) -> Path:
    return out_path.with_name(out_path.name + ".report.json")


class PipelineRunner:
    def __init__(self, config: PipelineConfig, workers: int = 1) -> None:
        self.config = config
        self.workers = workers
        self.tool_version = __version__
        self.config_hash = config_hash(config)

    def _stamp(self, payload: dict[str, Any]) -> dict[str, Any]:
        return {**payload, "tool_version": self.tool_version, "config_hash": self.config_hash}

    def simulate(self, out_path: Path) -> StageResult:
        started = time.monotonic()
        out_path = Path(out_path)
        report = simulate(self.config, out_path, tool_version=self.tool_version, digest=self.config_hash)
        payload = report.model_dump(mode="json")
        write_json_atomic(metadata_path(out_path), payload)
        return StageResult(
            stage="simulate",
            success=True,
            outputs={"records": str(out_path), "metadata": str(metadata_path(out_path))},
            report=payload,
            text=render_text("simulation", payload),
            timing_ms=int((time.monotonic() - started) * 1000),
        )

    def extract(self, qttag_path: Path, out_path: Path) -> StageResult:
        started = time.monotonic()
        qttag_path, out_path = Path(qttag_path), Path(out_path)
        _require_magic(qttag_path, RECORD_MAGIC)
        records = read_records(qttag_path)
        bits = bits_from_records(records)
        write_bits(out_path, bits)
        ones = bits.count_ones()
        payload = self._stamp(
            {
                "kind": "bits",
                "records": int(records.size),
                "bits": bits.length,
                "fraction_ones": ones / bits.length if bits.length else 0.0,
            }
        )
        logger.info("Extracted %d bits from %s", bits.length, qttag_path)
        return StageResult(
            stage="extract",
            success=True,
            outputs={"bits": str(out_path)},
            report=payload,
            text=render_text("bits", payload),
            timing_ms=int((time.monotonic() - started) * 1000),
        )

    def postprocess(self, bits_path: Path, out_path: Path) -> StageResult:
        started = time.monotonic()
        bits_path, out_path = Path(bits_path), Path(out_path)
        _require_magic(bits_path, BITS_MAGIC)
        raw = read_bits_file(bits_path)
        extractor = self.config.extractor
        output, report = extract_pipeline(raw, extractor, master_seed=self.config.master_seed, workers=self.workers)
        write_bits(out_path, output)
        payload = self._stamp(report.model_dump(mode="json"))
        write_json_atomic(_report_path(out_path), payload)

        # timed on one chunk; kept out of the JSON so reports stay reproducible
        sample = raw.to_array()[: extractor.chunk_size_bits]
        throughput = measure_throughput(sample, extractor, self.config.master_seed) if sample.size else None
        if throughput:
            logger.info(
                "Extractor throughput: %.4g bit/s with shuffle, %.4g bit/s without",
                throughput["with_shuffle"],
                throughput["without_shuffle"],
            )
        return StageResult(
            stage="postprocess",
            success=True,
            outputs={"bits": str(out_path), "report": str(_report_path(out_path))},
            report=payload,
            text=render_text("extraction", payload, throughput=throughput),
            timing_ms=int((time.monotonic() - started) * 1000),
        )

    def analyze(self, bits_path: Path, out_dir: Path, reference_seed: int | None = None) -> StageResult:
        started = time.monotonic()
        bits_path, out_dir = Path(bits_path), Path(out_dir)
        _require_magic(bits_path, BITS_MAGIC)
        bits = read_bits_file(bits_path).to_array()
        result = characterize(bits, label="qrng", workers=self.workers)
        if reference_seed is not None:
            reference_bits = make_rng(reference_seed).integers(0, 2, bits.size, dtype=np.uint8)
            reference = characterize(reference_bits, label=f"prng(seed={reference_seed})", workers=self.workers)
            result = result.model_copy(update={"reference": reference.summary})
        result = result.model_copy(update={"tool_version": self.tool_version, "config_hash": self.config_hash})
        outputs = write_characterization_outputs(result, out_dir)
        payload = result.model_dump(mode="json")
        return StageResult(
            stage="analyze",
            success=True,
            outputs={name: str(path) for name, path in outputs.items()},
            report=payload,
            text=render_text("characterization", payload),
            timing_ms=int((time.monotonic() - started) * 1000),
        )

    def nist(self, bits_path: Path, out_path: Path | None = None, raw_length: int | None = None) -> StageResult:
        started = time.monotonic()
        bits_path = Path(bits_path)
        if raw_length is None:
            _require_magic(bits_path, BITS_MAGIC)
        bits: BitSequence = read_bits_file(bits_path, raw_length)
        report = run_battery(bits, self.config.battery, workers=self.workers)
        report = report.model_copy(update={"tool_version": self.tool_version, "config_hash": self.config_hash})
        payload = report.model_dump(mode="json")
        outputs = {}
        if out_path is not None:
            write_json_atomic(Path(out_path), payload)
            outputs["report"] = str(out_path)
        if not report.passed:
            logger.warning("NIST battery failed")
        return StageResult(
            stage="nist",
            success=report.passed,
            exit_code=0 if report.passed else NIST_FAILED_EXIT_CODE,
            outputs=outputs,
            report=payload,
            text=render_text("nist", payload),
            timing_ms=int((time.monotonic() - started) * 1000),
        )

    def report(self, inputs: list[Path], out_path: Path | None = None) -> StageResult:
        started = time.monotonic()
        documents: list[tuple[str, dict[str, Any]]] = []
        for path in map(Path, inputs):
            try:
                payload = json.loads(path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise FormatError(f"Cannot load report {path}: {exc}") from exc
            documents.append((path.name, payload))
        markdown = render_report_markdown(documents)
        outputs = {}
        if out_path is not None:
            write_text_atomic(Path(out_path), markdown)
            outputs["report"] = str(out_path)
        return StageResult(
            stage="report",
            success=True,
            outputs=outputs,
            report=self._stamp({"kind": "report", "documents": [name for name, _ in documents]}),
            text=markdown,
            timing_ms=int((time.monotonic() - started) * 1000),
        )
