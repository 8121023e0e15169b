"""Exact finitely additive measures on eventually periodic subsets of the naturals."""

from .charges import (Charge, ChargeFamily, absolute_continuity_witness, evaluate,
                      is_absolutely_continuous, is_singular, lebesgue_decompose,
                      limit_along_decreasing)
from .compactness import (DisjointSeqGen, USACertificate, USAVerdict, USAWitness, WCVerdict,
                          dstar_census, e0_branch_search, inner_measure, psi_functional,
                          psi_tail_limsup, usa_test, weak_compactness_check)
from .domination import (NotSingular, PredicateViolation, control_coefficients,
                         control_measure, find_separating_element,
                         maximal_orthogonal_subfamily, singular_witness_sequence)
from .epset import (NATURALS, EPSet, FiniteSubalgebra, boolean_closure, complement,
                    difference, generate_subalgebra, join, meet, natural_density)
from .errors import (ChargeLabError, InvariantViolation, NotRepresentable, ParseError,
                     PeriodLimitExceeded, UniverseMismatch)
from .families import (Branch, BranchTail, CensusReport, QuasiDisjointnessViolation,
                       almost_disjoint_family, cc_predicate, quasi_disjoint_census,
                       tail_sequences)
from .instance import Instance, parse_instance, parse_instance_text
from .sequences import (ElementSequence, HypothesisFailed, QuotientSeq, bounds_mod_finite,
                        exp_rate_membership, is_quasi_disjoint, limsup_functional,
                        make_monotone, sandwich, sandwich_cutoff, seq_difference, seq_join,
                        seq_meet)

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "BranchTail",
    "CensusReport",
    "Charge",
    "ChargeFamily",
    "ChargeLabError",
    "DisjointSeqGen",
    "EPSet",
    "ElementSequence",
    "FiniteSubalgebra",
    "HypothesisFailed",
    "Instance",
    "InvariantViolation",
    "NATURALS",
    "NotRepresentable",
    "NotSingular",
    "ParseError",
    "PeriodLimitExceeded",
    "PredicateViolation",
    "QuasiDisjointnessViolation",
    "QuotientSeq",
    "USACertificate",
    "USAVerdict",
    "USAWitness",
    "UniverseMismatch",
    "WCVerdict",
    "absolute_continuity_witness",
    "almost_disjoint_family",
    "boolean_closure",
    "bounds_mod_finite",
    "cc_predicate",
    "complement",
    "control_coefficients",
    "control_measure",
    "difference",
    "dstar_census",
    "e0_branch_search",
    "evaluate",
    "exp_rate_membership",
    "find_separating_element",
    "generate_subalgebra",
    "inner_measure",
    "is_absolutely_continuous",
    "is_quasi_disjoint",
    "is_singular",
    "join",
    "lebesgue_decompose",
    "limit_along_decreasing",
    "limsup_functional",
    "make_monotone",
    "maximal_orthogonal_subfamily",
    "meet",
    "natural_density",
    "parse_instance",
    "parse_instance_text",
    "psi_functional",
    "psi_tail_limsup",
    "quasi_disjoint_census",
    "sandwich",
    "sandwich_cutoff",
    "seq_difference",
    "seq_join",
    "seq_meet",
    "singular_witness_sequence",
    "tail_sequences",
    "usa_test",
    "weak_compactness_check",
]
