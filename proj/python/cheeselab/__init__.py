"""Truncated swiss-cheese sets, annihilating boundary measures, and
square-root extension towers."""

try:
    from ._cheeselab import *  # noqa: F401,F403  (installed package layout)
    from ._cheeselab import __doc__  # noqa: F401
except ImportError:  # running against an in-tree build
    from _cheeselab import *  # noqa: F401,F403
    from _cheeselab import __doc__  # noqa: F401

__version__ = "0.1.0"
