from .jets import *  # noqa: F403
from .diffpoly import *  # noqa: F403
