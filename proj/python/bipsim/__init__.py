"""Two-argument wave functions on a 1D grid.

Everything lives in the compiled extension; this package just re-exports it.
"""

from bipsim._bipsim import *  # noqa: F401,F403
from bipsim._bipsim import __version__  # noqa: F401
