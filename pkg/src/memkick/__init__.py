"""Discrete maps with power-law memory from kicked fractional growth equations."""

from .analysis import *  # noqa: F401,F403
from .analytic import *  # noqa: F401,F403
from .econ import *  # noqa: F401,F403
from .maps import *  # noqa: F401,F403
from .special import *  # noqa: F401,F403
from . import analysis, analytic, econ, maps, special

__version__ = "0.1.0"

__all__ = analysis.__all__ + analytic.__all__ + econ.__all__ + maps.__all__ + special.__all__
