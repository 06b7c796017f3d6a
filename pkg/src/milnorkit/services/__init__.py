"""Services for local algebra, Milnor numbers, determinacy, vanishing cycles and sampling."""
from .local_algebra import LocalAlgebraService
from .koszul_service import KoszulService
from .milnor_service import MilnorService
from .determinacy_service import DeterminacyService
from .vanishing_service import VanishingService
from .compactify_service import CompactifyService
from .config_manager import ConfigManager
from .report_service import ReportService
from .selfcheck_service import SelfCheckService

__all__ = [
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
