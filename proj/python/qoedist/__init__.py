"""QoE rating distributions across a user population."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, QoeError  # noqa: F401
