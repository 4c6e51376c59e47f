"""Central numerical tolerances.

Equality between two computation paths uses ``|a - b| <= REL_TOL * max(|a|, |b|) + ABS_TOL``.
"""

REL_TOL = 1e-10
ABS_TOL = 1e-12
NORM_TOL = 1e-10
MARGIN_TOL = 1e-12


def close(a, b, rel=REL_TOL, abs_=ABS_TOL):
    return abs(a - b) <= rel * max(abs(a), abs(b)) + abs_
