"""Rings, series, data models and validators."""
from .ring import BaseRing, RingElement
from .series import TruncatedSeries
from .models import (
    AppConfig,
    JobConfig,
    Germ,
    GermDiagnostics,
    LocalIdeal,
    FiniteLengthModule,
    QuotientRing,
    FreeComplex,
    TwoTermComplex,
    MilnorReport,
    KoszulCheckReport,
    DeterminacyRun,
    EquisingularityReport,
    NewtonPolygon,
    TamenessCertificate,
    VanishingReport,
    PerturbationFamily,
    HomogenizedSystem,
    DeterminantalCount,
    IncidenceVerdict,
)
from .constants import *

__all__ = [
    'BaseRing',
    'RingElement',
    'TruncatedSeries',
    'AppConfig',
    'JobConfig',
    'Germ',
    'GermDiagnostics',
    'LocalIdeal',
    'FiniteLengthModule',
    'QuotientRing',
    'FreeComplex',
    'TwoTermComplex',
    'MilnorReport',
    'KoszulCheckReport',
    'DeterminacyRun',
    'EquisingularityReport',
    'NewtonPolygon',
    'TamenessCertificate',
    'VanishingReport',
    'PerturbationFamily',
    'HomogenizedSystem',
    'DeterminantalCount',
    'IncidenceVerdict',
]
