"""Exact incidence geometry of point sets with few ordinary hyperplanes."""
__version__ = "0.1.0"

from .errors import GeometryError  # noqa: E402
from .geom import PointConfig, ProjectivePoint, normalize  # noqa: E402

__all__ = ["GeometryError", "PointConfig", "ProjectivePoint", "normalize", "__version__"]
