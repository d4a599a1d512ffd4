"""Superrational solutions of finite normal-form games.

Pure analysis (symmetry, superrationally justifiable actions, superrational
profiles, pure Nash equilibria) is exact over the rationals. Mixed superrational
profiles are found by optimizing the diagonal expected payoff over the simplex.
Type-space modules check the epistemic conditions under which superrational
play obtains.
"""

__version__ = "0.1.0"

from .errors import (BadCoordinate, DifferentActionSets, DimensionMismatch, ModeMismatch,
                     NonConvergence, NotAPartition, NotTwoPlayers, ParseError,
                     SuperrationalError, TypeSetsDiffer, UnknownType)
from .game import (Game, SymmetryVerdict, as_rational, diagonal, is_symmetric,
                   permutation_violation, pure_nash, sr_justifiable_actions,
                   superrational_profiles)
from .mixed import (MixedStrategy, OptimizerConfig, SRMixedReport, diagonal_expected_payoff,
                    expected_payoff, superrational_mixed)
from .nash import NashResult, mixed_nash_2p
from .epistemic import (BayesianStrategy, FiniteDistribution, HarsanyiSpace, as_dirac,
                        is_superrational_bayesian_strategy, is_superrational_type,
                        is_superrational_type_mixed, make_superrational_space, marginal,
                        nash_epistemic_check, play, superrational_strategy)
from .bk import (BKSpace, IdentificationRelation, PlayerState, bk_outcome,
                 greatest_identification_relation, is_bk_superrational_type,
                 is_identification_relation, is_superrational_state,
                 is_superrational_state_dissimilar, make_superrational_bk_space)
