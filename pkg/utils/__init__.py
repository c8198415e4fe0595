"""
Utilities module for superquant

utils.formatters is not re-exported here: it imports data.processor.
"""

from .validators import ConfigValidator, parse_weight

__all__ = ['ConfigValidator', 'parse_weight']
