"""Exact solvers and scripted zombie strategies for pursuit games on graphs."""

__version__ = "0.1.0"
