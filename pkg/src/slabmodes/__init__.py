"""Electromagnetic mode spectra and Casimir/Lifshitz stresses for a planar
three-region dielectric system (closed cuboid cavity and open half-spaces
around a vacuum slab)."""

from . import cavity, cli, lifshitz, media, numerics, openmodes, plasmon, verify

__all__ = ["media", "numerics", "cavity", "openmodes", "lifshitz", "plasmon",
           "verify", "cli"]
__version__ = "0.1.0"
