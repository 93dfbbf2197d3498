"""Centers of mass, moments and masses in the hyperbolic plane."""

from . import closed, hcore, lamina, linset, pmass
from .errors import *  # noqa: F401,F403
from .hcore import DirectedLine, HPoint, dist, line_through
from .lamina import Lamina, lamina_centroid, lamina_mass, lamina_moment
from .linset import LinearSet, archimedes_moment, linset_centroid, linset_mass
from .pmass import PointMass, PointMassSystem, combine, system_centroid

__version__ = "0.1.0"
