"""Projections of one-step Markov measures under one-block factor maps.

Build a Markov source and a letter-to-letter projection, check the fiber-row
and cycle-positivity hypotheses, evaluate the induced potential with
certified error radii, and probe the Gibbs property of the image measure
empirically.
"""

from .errors import (
    AdmissibilityError,
    CertificationError,
    EvaluationRefused,
    FiberMismatchError,
    GibbsFactorError,
    ModelError,
)
from .gibbs import BgiReport, BgiRow, InvarianceReport, bgi_sweep, invariance_suite
from .markov import (
    MarkovModel,
    RangeTwoPotential,
    cylinder_measure,
    derive_potential,
    log_cylinder_measure,
    stationary_distribution,
)
from .models import (
    EXAMPLES,
    example_system,
    expand_example,
    load_model,
    parse_model,
)
from .potential import (
    HolderReport,
    ObstructionReport,
    PerronData,
    PointSpec,
    PotentialEvaluation,
    UniformConstants,
    canonical_extension,
    evaluate,
    factorization_sequence,
    finite_range_obstruction,
    holder_variation,
    markov_approx,
    periodic_potential,
    perron_data,
    tail_completions,
    uniform_constants,
)
from .projection import (
    FactorSystem,
    H1Report,
    H2Report,
    Projection,
    build_factor_system,
    check_h1,
    check_h2,
    check_topological_markov,
    log_nu_cylinder,
    nu_cylinder,
    nu_preimage_sum,
    preimage_words,
)
from .projective import (
    SimplexPoint,
    apply_normalized,
    contraction_coefficient,
    is_row_allowable,
    projective_distance,
)
from .tmc import (
    Alphabet,
    PeriodicPoint,
    Tmc,
    Word,
    check_primitivity,
    enumerate_periodic,
    enumerate_words,
    pattern_primitivity,
    sequence_metric,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "AdmissibilityError",
    "BgiReport",
    "BgiRow",
    "CertificationError",
    "EXAMPLES",
    "EvaluationRefused",
    "FactorSystem",
    "FiberMismatchError",
    "GibbsFactorError",
    "H1Report",
    "H2Report",
    "HolderReport",
    "InvarianceReport",
    "MarkovModel",
    "ModelError",
    "ObstructionReport",
    "PeriodicPoint",
    "PerronData",
    "PointSpec",
    "PotentialEvaluation",
    "Projection",
    "RangeTwoPotential",
    "SimplexPoint",
    "Tmc",
    "UniformConstants",
    "Word",
    "apply_normalized",
    "bgi_sweep",
    "build_factor_system",
    "canonical_extension",
    "check_h1",
    "check_h2",
    "check_primitivity",
    "check_topological_markov",
    "contraction_coefficient",
    "cylinder_measure",
    "derive_potential",
    "enumerate_periodic",
    "enumerate_words",
    "evaluate",
    "example_system",
    "expand_example",
    "factorization_sequence",
    "finite_range_obstruction",
    "holder_variation",
    "invariance_suite",
    "is_row_allowable",
    "load_model",
    "log_cylinder_measure",
    "log_nu_cylinder",
    "markov_approx",
    "nu_cylinder",
    "nu_preimage_sum",
    "parse_model",
    "pattern_primitivity",
    "periodic_potential",
    "perron_data",
    "preimage_words",
    "projective_distance",
    "sequence_metric",
    "stationary_distribution",
    "tail_completions",
    "uniform_constants",
]
