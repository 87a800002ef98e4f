"""Diagrams of finite probability spaces, their entropy vectors, and exact
polyhedral geometry of the four-variable entropy cones."""

__version__ = "0.1.0"

from .errors import EntroconeError
from .indexing import IndexingCategory, lambda_n
from .spaces import FiniteProbabilitySpace, coin, entropy
from .diagrams import Diagram, entropy_vector, full_diagram

__all__ = ["EntroconeError", "IndexingCategory", "lambda_n", "FiniteProbabilitySpace",
           "coin", "entropy", "Diagram", "entropy_vector", "full_diagram", "__version__"]
