"""Space-time Galerkin discretizations of the heat and wave equations in 1D."""

__version__ = "0.1.0"
