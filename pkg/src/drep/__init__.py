"""drep: exact representation-homology laboratory."""

__version__ = "0.1.0"
