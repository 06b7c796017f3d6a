"""
milnorkit - Milnor numbers over discrete valuation rings

Exact local algebra for complete-intersection germs over truncated
equal- and mixed-characteristic DVRs, with Koszul, determinacy, n = 0
vanishing-cycle and finite-field compactification checks.
"""

__version__ = "1.0.0"
__author__ = "milnorkit developers"

from .core import *
from .services import *

__all__ = [
    'BaseRing',
    'TruncatedSeries',
    'Germ',
    'LocalAlgebraService',
    'KoszulService',
    'MilnorService',
    'DeterminacyService',
    'VanishingService',
    'CompactifyService',
    'ConfigManager',
    'ReportService',
    'SelfCheckService',
]
