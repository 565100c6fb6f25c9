"""Homogeneous natural tensors of Fedosov structures, computed exactly."""

__version__ = "0.1.0"
