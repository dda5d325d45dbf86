from .fields import *  # noqa: F403
from .noether import *  # noqa: F403
