"""
Data processor module for turning reports and Gram blocks into tables
"""

from typing import Any, Dict, List, Mapping, Sequence, Tuple
import logging

import pandas as pd

from algebra.lusztig_form import GramBlock
from algebra.reports import CheckReport

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ['label', 'passed', 'witness', 'elapsed_ms']
GRAM_COLUMNS = ['weight', 'degree', 'size', 'rank', 'corank']


class ReportProcessor:
    """Handles tabular views of verification reports"""

    @staticmethod
    def results_frame(report: CheckReport) -> pd.DataFrame:
        """
        One row per check result

        Args:
            report: any check report

        Returns:
            DataFrame with label, passed, witness and elapsed_ms columns; missing timings are NaN
        """
        rows = [
            {'label': r.label, 'passed': r.passed, 'witness': r.witness, 'elapsed_ms': r.elapsed_ms}
            for r in report.results
        ]
        df = pd.DataFrame(rows, columns=RESULT_COLUMNS)
        df['elapsed_ms'] = df['elapsed_ms'].astype('float64')
        return df

    @staticmethod
    def gram_frame(blocks: Sequence[GramBlock]) -> pd.DataFrame:
        """
        One row per weight component with size, rank and corank

        Args:
            blocks: Gram blocks

        Returns:
            DataFrame sorted by degree then weight
        """
        rows = [
            {
                'weight': ','.join(map(str, block.weight)),
                'degree': sum(block.weight),
                'size': len(block.basis),
                'rank': block.rank,
                'corank': block.corank,
            }
            for block in blocks
        ]
        df = pd.DataFrame(rows, columns=GRAM_COLUMNS)
        if df.empty:
            return df
        return df.sort_values(['degree', 'weight'], kind='mergesort').reset_index(drop=True)

    @staticmethod
    def quotient_comparison(blocks: Sequence[GramBlock], counts: Mapping[Tuple[int, ...], int]) -> pd.DataFrame:
        """Gram rank against the PBW count of the same weight"""
        df = ReportProcessor.gram_frame(blocks)
        if df.empty:
            return df
        keyed = {','.join(map(str, w)): c for w, c in counts.items()}
        df['pbw_count'] = df['weight'].map(lambda w: keyed.get(w, 0))
        df['match'] = df['rank'] == df['pbw_count']
        mismatches = int((~df['match']).sum())
        if mismatches:
            logger.warning(f"{mismatches} weights where the Gram rank differs from the PBW count")
        return df

    @staticmethod
    def summary_stats(report: CheckReport) -> Dict[str, Any]:
        """
        Calculate summary statistics of a report

        Args:
            report: any check report

        Returns:
            Dictionary of counts and timing
        """
        df = ReportProcessor.results_frame(report)
        if df.empty:
            return {'Checks': 0, 'Passed': 0, 'Failed': 0, 'Pass Rate (%)': 100.0, 'Total Time (ms)': 0.0}
        passed = int(df['passed'].sum())
        return {
            'Checks': len(df),
            'Passed': passed,
            'Failed': len(df) - passed,
            'Pass Rate (%)': round(passed / len(df) * 100, 2),
            'Total Time (ms)': round(float(df['elapsed_ms'].fillna(0).sum()), 3),
        }

    @staticmethod
    def group_by_prefix(report: CheckReport) -> pd.DataFrame:
        """Pass counts per label prefix (text before the first ':')"""
        df = ReportProcessor.results_frame(report)
        if df.empty:
            return pd.DataFrame(columns=['group', 'checks', 'passed'])
        df['group'] = df['label'].str.split(':').str[0]
        grouped = df.groupby('group', sort=True)['passed'].agg(['count', 'sum']).reset_index()
        grouped.columns = ['group', 'checks', 'passed']
        grouped['passed'] = grouped['passed'].astype(int)
        return grouped

    @staticmethod
    def failures_list(report: CheckReport) -> List[Dict[str, Any]]:
        return [{'label': r.label, 'witness': r.witness} for r in report.failures()]
