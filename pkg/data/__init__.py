"""
Data module for superquant inputs and report tables
"""

from .processor import ReportProcessor
from .loader import DatumLoader

__all__ = ['DatumLoader', 'ReportProcessor']
