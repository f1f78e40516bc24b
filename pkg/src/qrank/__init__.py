"""Almost affine rank-metric codes, their induced q-matroids and invariants."""

__version__ = "0.1.0"
