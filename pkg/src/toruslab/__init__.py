"""toruslab: numerical experiments for dispersive estimates on T^d.

Exponential sums with Schrodinger / wave phases, exact resonance counting,
Strichartz and decoupling ratio sweeps, Diophantine solution counts, the
first Picard iterate of the Schrodinger-wave coupling, and a split-step
Zakharov solver.
"""

__version__ = "0.1.0"

from .accel import backend_name, configure_threads, numba_available
from .fitting import ExponentFit, fit_exponent
from .lattice import (Annulus, Ball, Box, FrequencySet, Intersection, Shell,
                      enumerate_region, frequency_set, partition_blocks)

__all__ = [
    "__version__", "backend_name", "configure_threads", "numba_available",
    "ExponentFit", "fit_exponent", "Annulus", "Ball", "Box", "FrequencySet",
    "Intersection", "Shell", "enumerate_region", "frequency_set",
    "partition_blocks",
]
