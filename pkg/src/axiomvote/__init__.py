"""Multi-winner voting rules, axiom-violation measurement, and scoring-rule optimization."""

from .axioms import (
    ALL_AXIOMS,
    IMPLICATION_EDGES,
    ROOT_AXIOMS,
    AuditReport,
    AxiomId,
    ElectionContext,
    axiom_set_from_name,
    evaluate_all,
    implication_audit,
    violates,
)
from .errors import CapacityError, DataFormatError, ParameterError
from .prefs import (
    ApprovalProfile,
    DistributionSpec,
    PreferenceProfile,
    apply_relabeling,
    derive_approvals,
    read_profiles,
    rename_alternatives,
    sample_profile,
    sample_profiles,
    standard_mixture_components,
    standard_test_distributions,
    write_profiles,
)
from .rules import (
    RULE_IDS,
    Committee,
    RuleSpec,
    ScoreVector,
    canonical_committee,
    elect,
    elect_optimizing,
    elect_rsd,
    elect_scoring,
    elect_sequential,
    elect_stv,
    random_committee,
    tie_break,
)
from .search import max_violation_committee, min_violation_committee

__all__ = [name for name in dir() if not name.startswith("_")]
