"""
Chart components for Gram block ranks and check timings
"""

import logging
from pathlib import Path
from typing import Optional

import pandas as pd
import plotly.graph_objects as go

from config import CHART_COLORS, CHART_HEIGHT

logger = logging.getLogger(__name__)


class ChartComponents:
    """Handles chart creation and export"""

    @staticmethod
    def create_rank_chart(df: pd.DataFrame, title: str = "") -> Optional[go.Figure]:
        """
        Grouped bars of size, rank and corank per weight

        Args:
            df: frame from ReportProcessor.gram_frame
            title: chart title, usually the datum label

        Returns:
            Plotly figure or None if data is empty
        """
        if df.empty:
            return None

        fig = go.Figure()
        for i, column in enumerate(['size', 'rank', 'corank']):
            fig.add_trace(
                go.Bar(
                    x=df['weight'],
                    y=df[column],
                    name=column,
                    marker_color=CHART_COLORS[i % len(CHART_COLORS)],
                    hovertemplate="weight %{x}<br>" + column + ": %{y}<extra></extra>",
                )
            )
        if 'pbw_count' in df.columns:
            fig.add_trace(
                go.Scatter(
                    x=df['weight'],
                    y=df['pbw_count'],
                    mode='markers',
                    name='pbw_count',
                    marker=dict(color=CHART_COLORS[3 % len(CHART_COLORS)], size=10, symbol='diamond'),
                )
            )

        ChartComponents._configure_chart_layout(fig, title or "Gram blocks", "Weight", "Dimension")
        fig.update_layout(barmode='group')
        return fig

    @staticmethod
    def create_timing_chart(df: pd.DataFrame, title: str = "") -> Optional[go.Figure]:
        """Bar chart of elapsed_ms per check; checks without timing are left out"""
        if df.empty or 'elapsed_ms' not in df.columns:
            return None
        timed = df.dropna(subset=['elapsed_ms'])
        if timed.empty:
            return None

        colors = [CHART_COLORS[0] if passed else CHART_COLORS[3 % len(CHART_COLORS)] for passed in timed['passed']]
        fig = go.Figure(go.Bar(x=timed['label'], y=timed['elapsed_ms'], marker_color=colors))
        ChartComponents._configure_chart_layout(fig, title or "Check timings", "Check", "Elapsed (ms)")
        return fig

    @staticmethod
    def _configure_chart_layout(fig: go.Figure, title: str, xaxis_title: str, yaxis_title: str):
        fig.update_layout(
            title=title,
            xaxis_title=xaxis_title,
            yaxis_title=yaxis_title,
            height=CHART_HEIGHT,
            template="plotly_white",
            legend=dict(orientation="h", yanchor="bottom", y=1.02, xanchor="right", x=1)
        )

    @staticmethod
    def write_chart(fig: Optional[go.Figure], path: str) -> bool:
        """
        Write a figure as a standalone HTML file

        Returns:
            True if a file was written
        """
        if fig is None:
            logger.warning(f"No chart data, {path} not written")
            return False
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        fig.write_html(path, include_plotlyjs="cdn")
        logger.info(f"Chart written to {path}")
        return True
