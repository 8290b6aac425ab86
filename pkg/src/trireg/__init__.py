"""Regular K3-regular graphs: parameters, constructions, search and enumeration."""

__version__ = "0.1.0"
