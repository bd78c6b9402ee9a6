"""Numerical laboratory for the multiplicative-character trivial delta method.

The package covers exact character arithmetic, Hecke eigenvalues of the
discriminant form, Gamma-ratio asymptotics, smooth windows, an oscillatory
integral engine, the delta expansions themselves, L-function evaluation and
dual-sum transforms, and the exponent planner for the final bound.
"""

__version__ = "0.1.0"
