"""
Formatting utilities for report display and export
"""

import json
from fractions import Fraction
from typing import Any, Dict, Mapping, Sequence

import numpy as np
import pandas as pd

from data.processor import ReportProcessor
from algebra.reports import CheckReport
from algebra.scalars import LaurentPoly, RatFuncQ


def _default(value: Any) -> Any:
    if isinstance(value, (Fraction, RatFuncQ, LaurentPoly)):
        return str(value)
    if isinstance(value, (tuple, set, frozenset)):
        return list(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Cannot serialize {type(value).__name__}")


class ReportFormatter:
    """Handles rendering of reports as JSON documents and text tables"""

    @staticmethod
    def to_json(document: Mapping[str, Any]) -> str:
        """
        Deterministic JSON: sorted keys, exact values as strings

        Args:
            document: report document

        Returns:
            JSON text ending in a newline
        """
        return json.dumps(document, sort_keys=True, indent=2, default=_default, ensure_ascii=False) + "\n"

    @staticmethod
    def format_text(report: CheckReport, verbose: bool = False) -> str:
        """
        Plain-text rendering: title, summary and the results table

        Args:
            report: any check report
            verbose: include info entries

        Returns:
            Multi-line string
        """
        lines = [report.title, "=" * len(report.title)]
        stats = ReportProcessor.summary_stats(report)
        lines.append(", ".join(f"{key}: {value}" for key, value in stats.items()))
        lines.append("")

        df = ReportProcessor.results_frame(report)
        if not df.empty:
            display_df = ReportFormatter.format_dataframe_for_display(df)
            with pd.option_context('display.max_rows', None, 'display.max_colwidth', 80, 'display.width', 160):
                lines.append(display_df.to_string(index=False))

        if verbose and report.info:
            lines.append("")
            for key, value in sorted(report.info.items()):
                lines.append(f"{key}: {json.dumps(value, default=_default, sort_keys=True)}")
        lines.append("")
        lines.append("PASS" if report.passed else "FAIL")
        return "\n".join(lines) + "\n"

    @staticmethod
    def format_dataframe_for_display(df: pd.DataFrame) -> pd.DataFrame:
        """
        Format result columns for display

        Args:
            df: frame from ReportProcessor.results_frame

        Returns:
            DataFrame with string columns
        """
        if df.empty:
            return df

        formatted_df = df.copy()
        formatted_df['passed'] = formatted_df['passed'].map(lambda x: "ok" if x else "FAIL")
        formatted_df['witness'] = formatted_df['witness'].fillna("")
        formatted_df['elapsed_ms'] = formatted_df['elapsed_ms'].apply(
            lambda x: f"{x:.1f}" if pd.notna(x) else "")
        return formatted_df

    @staticmethod
    def error_document(exc: Exception, command: str, error_log: Sequence[str] = ()) -> Dict[str, Any]:
        """The {"error": {...}} document of an input error"""
        error: Dict[str, Any] = {"type": type(exc).__name__, "message": str(exc), "command": command}
        if getattr(exc, "field", None):
            error["field"] = exc.field
        if getattr(exc, "position", None) is not None:
            error["position"] = exc.position
        if error_log:
            error["sources"] = list(error_log)
        return {"error": error}
