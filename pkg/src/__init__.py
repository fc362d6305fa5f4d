"""ThermoCheck: convexity and stability verification for thermodynamic potentials"""

__version__ = "1.0.0"
