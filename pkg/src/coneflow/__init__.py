"""coneflow: numerical tools for slow-fast systems that are monotone with
respect to rank-2 quadratic cones.

The package certifies cone-cooperativity of vector fields (algebraically and
along chord fundamental-matrix flows), computes critical and first-order slow
manifolds, classifies omega-limit sets (equilibrium versus closed orbit with
Floquet data), and runs seeded genericity sweeps over invariant boxes.
"""

from .box import Box
from .cone import ConePosition, QuadraticCone, Region
from . import errors

__version__ = "0.1.0"

__all__ = ["Box", "ConePosition", "QuadraticCone", "Region", "errors", "__version__"]
