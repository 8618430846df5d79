"""Brillouin anti-Stokes cooling of traveling phonons.

Rates are in the units selected by ``SystemParams(convention=...)``; frequencies
that carry an ``_hz`` suffix are ordinary frequencies.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
