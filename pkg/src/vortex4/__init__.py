"""Point-vortex resolution toolkit: four-vortex dynamics, reduction and perturbation near equilibria."""

__version__ = "0.1.0"
