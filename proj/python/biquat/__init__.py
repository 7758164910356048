from ._biquat import *  # noqa: F401,F403
from ._biquat import BiquatError, Biquat, Chirality

__all__ = [name for name in dir() if not name.startswith("_")]
