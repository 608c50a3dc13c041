"""Interacting particle systems on finite graph windows.

Thin package wrapper around the compiled extension; everything public lives
in ``particleforge._core``.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
