"""
Chart components for superquant reports
"""

from .charts import ChartComponents

__all__ = ['ChartComponents']
