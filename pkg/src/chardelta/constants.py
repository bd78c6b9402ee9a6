"""Calibrated constants, frozen after a single calibration run.

Each entry notes the instance it was calibrated on.  The cli can override
them (``--set-constant``) so negative controls can tamper with a value.
"""

# Gamma-ratio lemma: |error| <= C (1 + alpha^4 + |tau|^3) / beta^2.
# Max of the normalized error at beta = 100 over alpha in {1/4, 3/4, 6} and
# |tau| <= sqrt(beta)/10 was 0.504; frozen with a 1.5x margin.
GAMMA_RATIO_C = 0.75

# Inertness of V_bump at X = 1: max_x |x^j V^(j)(x)| for j = 4 is 3.83e5
# (normalized bump, grid of 4001 points); frozen with a 1.5x margin.
BUMP_INERT_J4 = 5.8e5
# Inertness of V_eps(t = 1e4, eps = 0.05) at X = t^eps, worst order j <= 4:
# max |x^j w^(j)| / X^j = 8.6e3 (j = 4); frozen with a 1.5x margin.
VEPS_INERT_J4 = 1.3e4

# Stationary phase: relative error <= C / R.  Fresnel family
# h = Y (x - 3/2)^2 with the normalized bump, R = Y: (rel. error) * R = 8.0
# at Y = 1e4; frozen with a 1.5x margin.
STATIONARY_PHASE_C = 12.0
# Second-derivative bound |int g e^{ih}| <= C / sqrt(r) for |h''| >= r.
# Fresnel bump at r = 2Y gives |I| sqrt(r) = 6.53 (Y = 1e4); frozen with a 1.5x margin.
SECOND_DERIVATIVE_C = 9.8

# J-integral bound |J| <= C min{1, sqrt(P^2 t/(NK D))} t^eps.  Reference
# instance (t, N, P, K) = (1e4, 1e4, 150, 250), p1 = 151, p2 = 157,
# r1 = 131, r2 = 126 (D = 1), n = 0: |J| / shape = 0.945; frozen with a 1.5x margin.
J_BOUND_C = 1.42
