"""Exhaustive search for violation-minimizing and -maximizing committees."""

from __future__ import annotations

import numpy as np

from .axioms import AxiomId, ElectionContext
from .errors import ParameterError
from .prefs import ApprovalProfile, PreferenceProfile

__all__ = ["min_violation_committee", "max_violation_committee"]


def _extreme(profile: PreferenceProfile, approvals: ApprovalProfile | None, k: int,
             axiom_set, maximize: bool):
    axioms = tuple(AxiomId(a) for a in axiom_set)
    if not axioms:
        raise ParameterError("axiom set must be non-empty")
    ctx = ElectionContext(profile, k, approvals)
    totals = ctx.violation_table(axioms).sum(axis=1)
    index = int(np.argmax(totals) if maximize else np.argmin(totals))
    # np.arg{min,max} take the first optimum, i.e. the lexicographically
    # least committee, because enumeration order is lexicographic.
    return ctx.committees[index], int(totals[index])


def min_violation_committee(profile: PreferenceProfile, approvals: ApprovalProfile | None,
                            k: int, axiom_set):
    """Exact minimizer of total axiom violations over all C(m, k) committees."""
    return _extreme(profile, approvals, k, axiom_set, maximize=False)


def max_violation_committee(profile: PreferenceProfile, approvals: ApprovalProfile | None,
                            k: int, axiom_set):
    """Exact maximizer of total axiom violations over all C(m, k) committees."""
    return _extreme(profile, approvals, k, axiom_set, maximize=True)
