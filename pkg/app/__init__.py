"""qmatrix: exact computations in M2(alpha, beta) at roots of unity."""

__version__ = "0.1.0"
