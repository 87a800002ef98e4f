"""Entropy and information vectors, polyhedral cones, and the simplex chart."""

from .vectors import EntropyVector, InfoVector, pair
from .cones import ConeSpec, abc, extremal_rays, in_cone, smc

__all__ = ["EntropyVector", "InfoVector", "pair", "ConeSpec", "abc", "extremal_rays",
           "in_cone", "smc"]
