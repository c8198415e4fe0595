"""
Exact algebra for Lie superbialgebras and their quantizations
"""

from .cartan import CartanDatum, builtin
from .errors import SuperQuantError
from .liebialg import LieSBA, double
from .reports import CheckReport

__all__ = ['CartanDatum', 'builtin', 'SuperQuantError', 'LieSBA', 'double', 'CheckReport']
