"""Variational ground-state estimation for the two-orbital H- ion."""

__version__ = "0.1.0"
