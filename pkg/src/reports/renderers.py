import csv
import io
from typing import Any, Callable

from .template_manager import TemplateManager

_templates: TemplateManager | None = None


def templates() -> TemplateManager:
    global _templates
    if _templates is None:
        _templates = TemplateManager(section="text")
    return _templates


def _slope(fit: dict[str, Any]) -> str:
    if fit.get("slope") is None:
        return "n/a"
    stderr = fit.get("stderr")
    return f"{fit['slope']:.4f} +/- {stderr:.4f}" if stderr is not None else f"{fit['slope']:.4f}"


def nist_rows(report: dict[str, Any]) -> list[dict[str, str]]:
    """Table-2 shaped rows: test, uniformity p, proportion/threshold and result."""
    rows = []
    for outcome in report.get("outcomes", []):
        if outcome.get("skipped"):
            rows.append({"name": outcome["display_name"], "p_value": "-", "proportion": "-", "result": "Skipped"})
            continue
        rows.append(
            {
                "name": outcome["display_name"],
                "p_value": f"{outcome['uniformity_p']:.6f}",
                "proportion": f"{outcome['proportion_passing']}/{outcome['threshold']}",
                "result": "Yes" if outcome["passed"] else "No",
            }
        )
    return rows


def render_text(kind: str, payload: dict[str, Any], **extra: Any) -> str:
    match kind:
        case "characterization":
            summaries = [payload["summary"]] + ([payload["reference"]] if payload.get("reference") else [])
            return templates().render(
                "characterization", summaries=summaries, config_hash=payload.get("config_hash", ""), slope=_slope
            )
        case "nist":
            return templates().render("nist", report=payload, rows=nist_rows(payload))
        case "extraction":
            return templates().render("extraction", report=payload, throughput=extra.get("throughput"))
        case _ if templates().has_template(kind):
            return templates().render(kind, report=payload, **extra)
    return "\n".join(_render_generic(payload)) + "\n"


def render_csv(kind: str, payload: dict[str, Any]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    match kind:
        case "nist":
            writer.writerow(["test", "p_value", "proportion", "result"])
            columns = ("name", "p_value", "proportion", "result")
            writer.writerows([row[key] for key in columns] for row in nist_rows(payload))
        case "extraction":
            writer.writerow(["chunk", "input_bits", "output_bits", "shuffle_seed"])
            writer.writerows(
                [chunk["index"], chunk["input_bits"], chunk["output_bits"], chunk["shuffle_seed"]]
                for chunk in payload.get("chunks", [])
            )
        case "characterization":
            writer.writerow(["label", "bits", "mean", "entropy", "pi", "fraction_ones", "max_abs_autocorrelation"])
            for summary in [payload["summary"]] + ([payload["reference"]] if payload.get("reference") else []):
                writer.writerow(
                    [
                        summary["label"],
                        summary["bit_count"],
                        repr(summary["mean"]),
                        repr(summary["entropy"]),
                        repr(summary["pi_estimate"]),
                        repr(summary["fraction_ones"]),
                        repr(summary["max_abs_autocorrelation"]),
                    ]
                )
        case _:
            writer.writerow(["field", "value"])
            writer.writerows(_flatten(payload))
    return buffer.getvalue()


def _flatten(payload: Any, prefix: str = "") -> list[tuple[str, Any]]:
    if isinstance(payload, dict):
        rows: list[tuple[str, Any]] = []
        for key, value in payload.items():
            rows.extend(_flatten(value, f"{prefix}{key}."))
        return rows
    if isinstance(payload, list):
        return [(prefix.rstrip("."), f"list[{len(payload)}]")]
    return [(prefix.rstrip("."), payload)]


def render_report_markdown(documents: list[tuple[str, dict[str, Any]]]) -> str:
    """One markdown document from previously written JSON outputs, in the order given."""
    lines = ["# QRNG pipeline report", ""]
    renderers: dict[str, Callable[[dict[str, Any]], list[str]]] = {
        "simulation": _render_simulation,
        "extraction": _render_extraction,
        "characterization": _render_characterization,
        "nist": _render_nist,
    }
    for source, payload in documents:
        kind = str(payload.get("kind", "")) if isinstance(payload, dict) else ""
        renderer = renderers.get(kind, _render_generic)
        lines.extend([f"## {kind.capitalize() or 'Document'}: `{source}`", ""])
        if isinstance(payload, dict) and payload.get("config_hash"):
            lines.append(f"- Config hash: `{payload['config_hash']}`")
            lines.append(f"- Tool version: `{payload.get('tool_version')}`")
        lines.extend(["", *renderer(payload), ""])
    return "\n".join(lines).rstrip("\n") + "\n"


def _render_simulation(payload: dict[str, Any]) -> list[str]:
    budget = payload.get("budget", {})
    lines = [
        f"- Records: `{payload.get('record_count')}` over `{payload.get('duration_s')}` s",
        f"- Achieved rate: `{payload.get('achieved_rate', 0):.6g}` /s",
        f"- Dead-time model rate: `{budget.get('observed_rate', 0):.6g}` /s",
        f"- Channel counts: `{payload.get('channel_counts')}`",
    ]
    regime = payload.get("regime")
    if regime:
        status = "ok" if regime.get("single_excitation_ok") and regime.get("dead_time_ok") else "violated"
        lines.append(f"- Operating regime: `{status}`")
    return lines


def _render_extraction(payload: dict[str, Any]) -> list[str]:
    return [
        f"- Input bits: `{payload.get('input_bits')}`",
        f"- Output bits: `{payload.get('output_bits')}`",
        f"- Mean per chunk: `{payload.get('mean_output_bits', 0):.1f}`",
        f"- Stderr per chunk: `{payload.get('output_bits_stderr', 0):.1f}`",
        f"- Shuffle: `{payload.get('shuffle_algorithm')}`",
    ]


def _render_characterization(payload: dict[str, Any]) -> list[str]:
    summaries = [payload["summary"]] + ([payload["reference"]] if payload.get("reference") else [])
    lines = [
        "| Sequence | Bits | Mean | Entropy | Pi | Ones | Max abs autocorr |",
        "|---|---|---|---|---|---|---|",
    ]
    for summary in summaries:
        lines.append(
            f"| {summary['label']} | {summary['bit_count']} | {summary['mean']:.4f} | {summary['entropy']:.6f} "
            f"| {summary['pi_estimate']:.5f} | {summary['fraction_ones']:.5f} "
            f"| {summary['max_abs_autocorrelation']:.3e} |"
        )
    return lines


def _render_nist(payload: dict[str, Any]) -> list[str]:
    lines = ["| Test | P-value | Prop | Result |", "|---|---|---|---|"]
    lines.extend(
        f"| {row['name']} | {row['p_value']} | {row['proportion']} | {row['result']} |" for row in nist_rows(payload)
    )
    lines.extend(["", f"Overall: `{'PASS' if payload.get('passed') else 'FAIL'}`"])
    return lines


def _render_generic(payload: Any) -> list[str]:
    """Flattened field bullets for payloads without a dedicated renderer."""
    stamped = {"kind", "tool_version", "config_hash"}
    rows = [(name, value) for name, value in _flatten(payload) if name not in stamped]
    return [f"- `{name or 'value'}`: `{value}`" for name, value in rows] or ["No fields."]
