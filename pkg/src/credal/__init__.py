"""Credal sets over finite world spaces, computed in exact rational arithmetic.

Lower and upper probabilities and expectations, conditioning and
likelihood-based updating, coherence and belief-function checks, and
decision rules for sets of probability measures.
"""

from .belief import (
    BeliefFunction,
    MassFunction,
    NotABelief,
    b3_violation,
    belief_from_mass,
    check_b3,
    credal_set_of_belief,
    mobius_from_belief,
    mobius_transform,
    plausibility,
    zeta_transform,
)
from .coherence import (
    Cover,
    Verdict,
    check_cover_inequality,
    enumerate_covers,
    is_coherent_lower_probability,
    mixed_bound_violation,
    recover_largest_credal_set,
    satisfies_cover_property,
    superadditivity_violation,
    verify_cover,
)
from .core import (
    CredalError,
    Event,
    Gamble,
    Measure,
    SetFunction,
    SpaceMismatch,
    WorldSpace,
    ZeroConditioningEvent,
    condition_measure,
    expectation,
    indicator,
    mixture,
    to_fraction,
)
from .credal import (
    Bound,
    ConditionalCredalSet,
    CredalSet,
    EmptyCredalSet,
    Interval,
    VacuousObservation,
    convex_closure,
    equivalent_as_lower_expectation,
    lower_expectation,
    lower_probability,
    lower_probability_function,
    natural_extension,
    probability_interval,
    upper_expectation,
    upper_probability,
)
from .decision import Act, UtilityTable, compare, preference_matrix, strict_preference_certificate
from .linprog import LinearConstraint, LinearProgram, enumerate_vertices, solve_lp
from .modelfile import Model, ModelError, dumps_model, load_model, loads_model
from .updating import (
    UpdatePolicy,
    bayesian_coin_posterior,
    condition_credal,
    dilation_report,
    learn_coin,
    likelihood_filter,
    q_condition_credal,
    sequential_learn,
    update,
)

__version__ = "0.1.0"
