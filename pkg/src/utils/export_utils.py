"""
Export utilities for residual reports
"""

import json
import math
from typing import Any, Dict, Mapping, Sequence

from config.settings import REPORT_CONFIG
from src.utils.text_processing import format_residual

REPORT_FIELDS = (
    "model",
    "identity",
    "anchor",
    "points",
    "max_residual",
    "tolerance",
    "verdict",
    "skipped",
    "relative_residual",
    "detail",
)


class ExportUtils:
    """Utility class for serializing suite results."""

    @staticmethod
    def format_results_for_export(reports: Sequence[Any], params: Mapping[str, object]) -> Dict[str, Any]:
        """
        Format reports of one model run for export.

        Args:
            reports: ResidualReport objects in catalog order
            params: Model parameters the run used

        Returns:
            Dictionary with run metadata, per-identity rows and verdict counts
        """
        rows = [ExportUtils.report_row(report) for report in reports]
        counts: Dict[str, int] = {}
        for row in rows:
            counts[row["verdict"]] = counts.get(row["verdict"], 0) + 1
        return {
            "metadata": {"tool_name": REPORT_CONFIG["tool_name"]},
            "model": rows[0]["model"] if rows else None,
            "params": dict(sorted(params.items())),
            "reports": rows,
            "summary": dict(sorted(counts.items())),
        }

    @staticmethod
    def report_row(report: Any) -> Dict[str, Any]:
        data = report.as_dict()
        return {key: data[key] for key in REPORT_FIELDS}

    @staticmethod
    def to_json_string(data: Dict[str, Any], indent: int = REPORT_CONFIG["json_indent"]) -> str:
        """
        Convert data to a JSON string.

        Key order follows the data; no timestamps are written, so identical
        runs give identical text. Non-finite floats are written as strings,
        so the output is strict JSON.
        """
        return json.dumps(_finite(data), indent=indent, ensure_ascii=False, allow_nan=False)

    @staticmethod
    def generate_filename(model: str, file_type: str = "json") -> str:
        """Filename for a report on `model`."""
        clean = "".join(c for c in model if c.isalnum() or c in ("-", "_"))
        return f"{REPORT_CONFIG['tool_name']}_{clean}.{file_type}"

    @staticmethod
    def create_text_export(results: Dict[str, Any]) -> str:
        lines = [f"model: {results['model']}  params: {_param_text(results['params'])}"]
        for row in results["reports"]:
            lines.append(
                f"{row['identity']:<20} {row['verdict']:<12} "
                f"{format_residual(row['max_residual']):>10}  {row['anchor']}"
            )
        lines.append("summary: " + ", ".join(f"{k}={v}" for k, v in results["summary"].items()))
        return "\n".join(lines) + "\n"

    @staticmethod
    def create_markdown_export(results: Dict[str, Any]) -> str:
        """
        Create a markdown report.

        Args:
            results: Output of format_results_for_export

        Returns:
            Markdown formatted string
        """
        md_content = f"""# Identity Report: {results['model']}

**Tool:** {results['metadata']['tool_name']}
**Parameters:** {_param_text(results['params'])}

| Identity | Verdict | Max residual | Points | Anchor |
|---|---|---|---|---|
"""
        for row in results["reports"]:
            anchor = row["anchor"].replace("|", "\\|")
            md_content += (
                f"| {row['identity']} | {row['verdict']} | {format_residual(row['max_residual'])} "
                f"| {row['points']} | {anchor} |\n"
            )

        details = [row for row in results["reports"] if row["detail"]]
        if details:
            md_content += "\n## Details\n\n"
            for row in details:
                md_content += f"### {row['identity']}\n\n"
                for key, value in row["detail"].items():
                    md_content += f"- **{key}:** {value}\n"
                md_content += "\n"
        return md_content


def _finite(value: Any) -> Any:
    """Replace NaN and infinities with the strings "nan", "inf" and "-inf"."""
    if isinstance(value, float) and not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, dict):
        return {key: _finite(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(item) for item in value]
    return value


def _param_text(params: Mapping[str, object]) -> str:
    if not params:
        return "(none)"
    return ", ".join(f"{k}={v}" for k, v in params.items())


def render(results: Dict[str, Any], fmt: str) -> str:
    """Serialize formatted results as text, json or markdown."""
    renderers = {
        "text": ExportUtils.create_text_export,
        "json": lambda r: ExportUtils.to_json_string(r) + "\n",
        "markdown": ExportUtils.create_markdown_export,
    }
    return renderers[fmt](results)
