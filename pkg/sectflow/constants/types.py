from enum import Enum

# Task types
TRANSFORM = "transform"
PERMUTATION_TEST = "test"
SIMULATION = "simulate"
SPLIT_TEST = "split"
TASK_TYPES = Enum("TASK_TYPES", [TRANSFORM, PERMUTATION_TEST, SIMULATION, SPLIT_TEST])

# Transform modes
SECT = "sect"
ECT = "ect"
TRANSFORM_MODES = Enum("TRANSFORM_MODES", [SECT, ECT])
BOTH = "both"

# Test decisions
ACCEPT = "Accept"
REJECT = "Reject"

# Exit codes, sysexits.h flavoured
EXIT_ACCEPT = 0
EXIT_REJECT = 3
EXIT_USAGE = 64
EXIT_DATA_ERROR = 65
EXIT_NO_INPUT = 66
EXIT_SOFTWARE = 70
EXIT_CONFIG = 78

# Shape and grid tolerances
UNIT_NORM_TOLERANCE = 1e-12
SNAP_TO_ZERO = 1e-15
HEIGHT_DECIMALS = 12

# Simulation defaults
SIMULATION_RADIUS = 1.8
DEFAULT_RESOLUTION = 180
MIN_RESOLUTION = 16
TUBE_RADIUS = 0.2
ARM_CENTER_X = 0.4
ARC_SAMPLES = 4096
ARC_REFINEMENT_TOLERANCE = 1e-7
NOISE_MEAN = 1.0
NOISE_SD = 0.05
MAX_EPSILON = 0.1
DEFAULT_EPSILONS = [0.0, 0.0125, 0.025, 0.0375, 0.05, 0.075, 0.1]

# Transform defaults
DEFAULT_DIRECTIONS = 72
DEFAULT_LEVELS = 100
DEFAULT_RADIUS = 1.5

# Test defaults
DEFAULT_ALPHA = 0.05
DEFAULT_PERMUTATIONS = 1000
DEFAULT_SEED = 0
MAX_EXACT_SPLITS = 1_000_000
DEFAULT_REPEATS = 100

# Image ingestion
DEFAULT_THRESHOLD = 0.5
IMAGE_EXTENSIONS = [".pgm", ".png"]
MATRIX_SUFFIX = "*.csv"
ANGLE_HEADER = "angle"
FLOAT_FORMAT = "%.17g"

# Manifest
TOOL_NAME = "sectflow"
TOOL_VERSION = "1.0.0"
MANIFEST_FILENAME = "manifest.json"

# Synthetic nodule fixtures
BENIGN = "benign"
MALIGNANT = "malignant"
NODULE_KINDS = Enum("NODULE_KINDS", [BENIGN, MALIGNANT])
NODULE_EXTENT = 0.55

# Simulation families
ARCS = "arcs"
NODULES = "nodules"
FAMILIES = Enum("FAMILIES", [ARCS, NODULES])
