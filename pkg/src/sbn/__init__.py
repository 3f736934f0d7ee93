"""Strategic Bayesian networks: modelling, evaluation and game solving."""

__version__ = "0.1.0"

from .errors import (
    BindingError, CapacityError, ContractError, InternalError, SbnError,
    StructuralError,
)
from .model import (
    BoundNetwork, ChanceSpec, Cpd, DeterministicCpd, Domain, Feature,
    FeatureTableCpd, PayoffSpec, SbnGraph, StrategicSpec, StrategyFamily,
    StrategyProfile, TableCpd, UniformRangeCpd, Violation, bind,
    enumerate_profiles, payoff_vector, profile_count, topological_order,
    validate,
)
from .inference import (
    PayoffEstimate, WorldOutcome, exact_expected_payoffs,
    exact_expected_payoffs_rational, mc_expected_payoffs, sample,
)
