"""Solitary-wave decomposition and information-redundancy analysis.

Submodules: ``infotheory`` (entropy / mutual information / redundancy
over categorical data), ``models`` (closed-form evaluators and PDE
residual checks), ``fit`` (nonlinear least squares and OLS), ``lcwt``
(logistic-derivative wavelet transform and wave extraction), ``stats``
(unit-root and cointegration tests), ``synth`` (seeded generators),
``cli`` (command-line pipeline).
"""

__version__ = "0.1.0"

from .fit import TimeSeries
from .infotheory import ProbabilityTable
from .models import SolitonChainModel, SolitonComponent, LogisticComponent

__all__ = [
    "TimeSeries",
    "ProbabilityTable",
    "SolitonChainModel",
    "SolitonComponent",
    "LogisticComponent",
    "__version__",
]
