from .exceptions import *  # noqa: F403
from .kernel import *  # noqa: F403
from .forms import *  # noqa: F403
from .variational import *  # noqa: F403
from .symmetry import *  # noqa: F403
from .dsl import *  # noqa: F403
from .models import *  # noqa: F403
from .core import *  # noqa: F403
