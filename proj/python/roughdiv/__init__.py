"""Exact counts and order-of-magnitude checks for rough integers with a
divisor in an interval."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
