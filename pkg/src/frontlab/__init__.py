"""frontlab: propagation-regime classification, certified sub/supersolutions,
front-tracking simulation, and level-set analysis for du/dt = (u^m)_xx + f(u).
"""

from . import analysis, closedform, model, regimes, solver, waves
from .errors import FrontlabError
from .model import ModelParams
from .regimes import Regime, classify, envelopes

__version__ = "0.1.0"

__all__ = ["analysis", "closedform", "model", "regimes", "solver", "waves",
           "FrontlabError", "ModelParams", "Regime", "classify", "envelopes",
           "__version__"]
