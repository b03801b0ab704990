"""Configuration settings for the billiard beta-function toolkit."""

from .models.tolerance import Tolerance

# Numerical tolerances
DEFAULT_TOLERANCE = Tolerance(rel=1e-12, abs=1e-14, max_refinements=20)
QUADRATURE_START_NODES = 16

# Elliptic caustics
CAUSTIC_GUARD = 1e-10  # lambda <= (1 - CAUSTIC_GUARD) * b^2
LAMBDA_FLOOR = 1e-14  # lower end of the lambda bracket, relative to b^2
LAMBDA_CEILINGS = (1e-2, 1e-4, 1e-6, 1e-8, CAUSTIC_GUARD)  # upper bracket expansion
HALF_TURN_WARNING = 1e-6  # rho in (1/2 - this, 1/2) gets an accuracy warning

# Eccentricity families
E_MAX = 0.995

# Convexity check
CONVEXITY_GRID = 4096

# Periodic orbits
ORBIT_MAX_ITERS = 5000
ORBIT_GRAD_TOL = 1e-10
ORBIT_RESTARTS = 2
ORBIT_SEED = 0
ORBIT_MAX_Q = 64  # largest denominator accepted for a variational rho

# Rotation number classification
GUTKIN_GRID_PER_N = 10_000
GUTKIN_MATCH_TOL = 1e-10
GUTKIN_ANGLE_CONVENTION = True  # compare roots against pi*rho, not rho
GUTKIN_N_MAX = 20
DIOPHANTINE_NU = 0.05
DIOPHANTINE_SIGMA = 3.0
DIOPHANTINE_N = 10_000
RATIONAL_Q_MAX = 1000
RATIONAL_TOL = 1e-12

# Checks and output
FD_STEP = 1e-4
FLOAT_FORMAT = "%.17g"
CSV_COLUMNS = ["e", "a", "b", "beta", "margin"]
