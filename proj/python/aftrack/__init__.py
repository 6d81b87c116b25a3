"""Transmit-gain optimization for distributed parameter tracking over a
coherent multiple-access channel."""

from aftrack._core import *  # noqa: F401,F403
from aftrack._core import __doc__  # noqa: F401
