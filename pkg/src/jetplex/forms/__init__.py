from .basis import *  # noqa: F403
from .jetform import *  # noqa: F403
from .source import *  # noqa: F403
