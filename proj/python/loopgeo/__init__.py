"""Geodesic length bounds on triangulated surfaces."""

try:
    from ._loopgeo import *  # noqa: F401,F403  (installed layout)
except ImportError:
    from _loopgeo import *  # noqa: F401,F403  (in-tree build dir on sys.path)
