"""Frequency-modulated qubit in a leaky cavity: amplitude solvers, witnesses,
non-Markovianity and quantum speed limits."""

from ._qmod_dyn import *  # noqa: F401,F403
from ._qmod_dyn import __doc__  # noqa: F401

__version__ = "0.1.0"
