"""Python bindings for the fhlab C++ core."""

from ._fhlab import *  # noqa: F401,F403
from ._fhlab import __doc__  # noqa: F401
