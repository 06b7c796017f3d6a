"""
Application constants and default configuration values.
"""

APP_NAME = "milnorkit"
DEFAULT_CONFIG_FILE = "milnorkit.json"
DEFAULT_LOG_FILE = "milnorkit.log"
THREADS_ENV_VAR = "MILNORKIT_THREADS"

# Base ring models
EQCHAR = "eqchar"
MIXEDCHAR = "mixedchar"
MODELS = (EQCHAR, MIXEDCHAR)

# Precision policy: D starts at max(2 * deg f, 8) and doubles up to the cap
MIN_DEGREE_BOUND = 8
DEGREE_BOUND_FACTOR = 2
DEFAULT_MAX_DEGREE_BOUND = 64

# Finite determinacy: jet bound 3 * mu, default target 4 * (3 * mu)
DETERMINACY_FACTOR = 3
DEFAULT_TARGET_FACTOR = 4

# Compactification sampler
DEFAULT_EXT_DEGREE = 3
DEFAULT_SAMPLES = 100
DEFAULT_SEED = 0
DEFAULT_THREADS = 1
DEFAULT_ENUMERATION_CAP = 30_000_000
CONFIDENCE_Z = 1.96
CODIM_DECIMALS = 4
LAMBDA_AUTO = "auto"

# Provenance labels carried by reports
PROVENANCE_COMPUTED = "computed"
PROVENANCE_ORACLE = "oracle"
PROVENANCE_LEMMA = "lemma"
PROVENANCE_UNSUPPORTED = "UNSUPPORTED"
PROVENANCE_SKIPPED = "skipped"

# Germ validation flags
FLAG_NOT_ON_FIBER = "not-on-fiber"
FLAG_NOT_REGULAR_SEQUENCE = "special-fiber-not-regular-sequence"
FLAG_SMOOTH = "smooth-germ"
FLAG_FIBER_DEGENERACY = "fiber-degeneracy"
FLAG_NOT_REGULAR = "not-regular"

# Tameness status
TAME = "tame"
WILD = "wild"
UNDETERMINED = "undetermined"

# Exit codes
EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_VERIFICATION_FAILED = 2

COMMANDS = (
    "milnor",
    "koszul-check",
    "determinacy",
    "dm0",
    "compactify",
    "codim",
    "incidence",
    "selfcheck",
)

# Keys accepted in the "app_settings" section of milnorkit.json
SETTINGS_KEYS = (
    "log_file",
    "degree_bound",
    "max_degree_bound",
    "pi_precision",
    "ext_degree",
    "samples",
    "seed",
    "enumeration_cap",
    "threads",
    "progress",
)

GERM_KEYS = ("base", "n", "r", "degree_bound", "variables", "f")
BASE_KEYS = ("model", "p", "precision")
TERM_KEYS = ("c", "pi", "exp")
