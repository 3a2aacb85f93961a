"""Exact q-series laboratory for Schmidt-type partition identities."""

__version__ = "0.1.0"
