JSON_SCHEMA_VERSION = 1

DEFAULT_SPEC_NAME = 'problem.yaml'

# exit codes of the command line front end
EXIT_OK = 0
EXIT_ENGINE_ERROR = 1
EXIT_PARSE_ERROR = 2
EXIT_GOLDEN_MISMATCH = 3

# field names treated as Lagrange multipliers by the fixture pipeline
MULTIPLIER_FIELD = 'gamma'
