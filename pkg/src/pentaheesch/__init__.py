"""Convex-pentagon corona search.

Catalog of the 17 convexity-constrained pentagon categories, an angle
and edge-length solver, vertex spot enumeration and classification, and
a layered corona search producing Heesch-number bounds with dead-spot
certificates.
"""

from . import catalog, corona, geom, kernels, render, solver, spots

__all__ = ["catalog", "corona", "geom", "kernels", "render", "solver",
           "spots"]

__version__ = "0.1.0"
