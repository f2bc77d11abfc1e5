"""Continuous stochastic gradient optimizers with step-size search."""

from ._csgopt import *  # noqa: F401,F403
from ._csgopt import __version__  # noqa: F401
