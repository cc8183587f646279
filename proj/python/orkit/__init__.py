"""Python bindings for orkit: instance generators, LP/MPS writers, Jacobian
plans, simplex kernels and the cutting-plane decomposition solver."""

from ._orkit import *  # noqa: F401,F403
from ._orkit import __version__  # noqa: F401
