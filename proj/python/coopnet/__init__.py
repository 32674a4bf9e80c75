from ._coopnet import *  # noqa: F401,F403
from ._coopnet import __version__  # noqa: F401
