from .config import *  # noqa: F403
from .objects import *  # noqa: F403