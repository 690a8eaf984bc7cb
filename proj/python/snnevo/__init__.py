"""Evolutionary search for spiking-network agents scored by the stability of
their on-substrate learning, with behavioral fixed-point diagnostics."""

from snnevo._core import *  # noqa: F401,F403
from snnevo._core import __version__  # noqa: F401
