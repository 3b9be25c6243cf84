"""Brokerage service simulator for heterogeneous wireless access."""

from ._brokersim import *  # noqa: F401,F403
from ._brokersim import __doc__  # noqa: F401
