"""
Numeric tolerances shared by every module and property suite.

One table so that library checks and tests agree on what "equal" means.
"""

# exact polynomial arithmetic evaluated in double precision
EXACT_TOL = 1e-12

# mixed symbolic/numeric identities (brackets of brackets, divergences)
MIXED_TOL = 1e-9

# central finite-difference oracles
FD_TOL = 1e-6

# exact discrete gradient against central differences of the discretized loss
GRADIENT_FD_TOL = 1e-7

# |x| - 1 accepted when a sphere point is constructed
SPHERE_CONSTRUCT_TOL = 1e-12

# |x| - 1 accepted by geometry operations (after flow steps)
SPHERE_OP_TOL = 1e-9

# |<v, x>| <= TANGENCY_TOL * |v| for sphere tangent vectors
TANGENCY_TOL = 1e-10

# minimal pairwise distance inside an ensemble
DISTINCT_TOL = 1e-9

# numerical rank threshold relative to the largest singular value
RANK_RTOL = 1e-8

# step used by central-difference oracles
FD_STEP = 1e-6

TOLERANCES = {
    "exact": EXACT_TOL,
    "mixed": MIXED_TOL,
    "finite_difference": FD_TOL,
    "gradient_finite_difference": GRADIENT_FD_TOL,
    "sphere_construct": SPHERE_CONSTRUCT_TOL,
    "sphere_op": SPHERE_OP_TOL,
    "tangency": TANGENCY_TOL,
    "distinct": DISTINCT_TOL,
    "rank_rtol": RANK_RTOL,
}
