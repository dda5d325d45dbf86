from .problem import *  # noqa: F403
from .euler import *  # noqa: F403
from .lepage import *  # noqa: F403
