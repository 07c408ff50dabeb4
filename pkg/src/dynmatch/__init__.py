"""Deterministic dynamic matching: kernels, bounded-degree matchers and pipelines."""

__version__ = "0.1.0"
