from .boussinesq import *  # noqa: F403
