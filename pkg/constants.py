"""
Constants for the Toeplitz rank laboratory
"""

# Rank decisions
DEFAULT_RANK_TOL: float = 1e-10
LANDAU_RANK_TOL: float = 1e-8

# Quadrature
RADIAL_QUADRATURE_POINTS: int = 64
QUADRATURE_MARGIN: int = 10
BALL_QUADRATURE_POINTS: int = 32

# Weights
POINT_MERGE_TOL: float = 1e-12
UNIT_NORM_TOL: float = 1e-12
WEIGHT_KINDS = {"point", "radial", "polynomial", "grid"}

# Bases
HARMONIC_DEGREE: int = 8
FOCK_GAUSSIAN_EXPONENT: float = 0.5  # weight exp(-|z|^2 / 2)
BASIS_KINDS = {"disk", "polydisk", "fock", "harmonic", "plane-wave", "landau"}

# Rank lab
VANDERMONDE_BUDGET: int = 6144  # 4! * 4**4
RECOVERY_MERGE_TOL: float = 1e-6
RECOVERY_CONDITION_LIMIT: float = 1e13
SYMBOLIC_DEGREE_BUDGET: int = 40

# Sparse index sets
SPARSE_HORIZON: int = 10_000
SPARSE_SAMPLE_DEGREE: int = 5

# Landau levels
LANDAU_TAIL_TOL: float = 1e-14
LANDAU_SPECTRAL_TAIL_TOL: float = 1e-6
LANDAU_CONVENTIONS = {"holomorphic", "antiholomorphic", "as-printed"}
LANDAU_SPECTRUM_DIGITS: int = 50

# CLI
EXPERIMENT_KINDS = {
    "assemble",
    "rank",
    "recover",
    "vandermonde",
    "sparse",
    "landau",
    "helmholtz",
    "born",
    "suite",
}
EXIT_OK: int = 0
EXIT_USAGE: int = 1
EXIT_PROPERTY_FAILURE: int = 2

# Physics applications
LANDAU_GRID_POINTS: int = 128
LANDAU_GRAM_TOL: float = 1e-8
DQ_SMOOTHNESS_TOL: float = 0.05
HELMHOLTZ_FREQUENCY: float = 2.0
SPHERE_SAMPLING_METHODS = {"uniform", "fibonacci", "icosahedral"}
