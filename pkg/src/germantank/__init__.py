"""Population-size estimation from serial numbers (the German Tank Problem)."""
from .combinatorics import binom, binom_via_pascal, hockey_stick
from .distributions import (
    PmfTable,
    PopulationModel,
    Variable,
    brute_force_table,
    expected_max,
    expected_spread,
    max_pmf,
    max_pmf_via_cdf,
    pmf_table,
    spread_pmf,
)
from .errors import (
    DomainError,
    EnumerationTooLarge,
    GermanTankError,
    InsufficientData,
    InvalidParameter,
    SingularDesign,
    UnknownExperiment,
)
from .estimators import (
    Estimate,
    Method,
    SerialSample,
    estimate_from_sample,
    estimate_known_min,
    estimate_unknown_min,
    invert_expectation,
)

__version__ = "0.1.0"
