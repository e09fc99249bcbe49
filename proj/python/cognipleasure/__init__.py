"""Appraisal-driven induced pleasure inference."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
