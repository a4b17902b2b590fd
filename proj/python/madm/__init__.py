"""Moreau-envelope ADMM for decentralized weakly convex optimization."""

from ._madm import *  # noqa: F401,F403
from ._madm import __doc__  # noqa: F401
