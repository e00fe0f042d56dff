"""Power IoU losses for bounding-box regression.

Thin wrapper around the C++ core: loss values and analytic gradients,
finite-difference checking, a descent simulator, annotation noise, and a
detection evaluation engine.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
