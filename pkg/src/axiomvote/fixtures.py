"""Hand-built profiles exhibiting axiom independence.

Each profile has ten voters over ten alternatives and is evaluated at k=5.
They witness that certain axiom pairs cannot imply one another: a small
coalition's demands clash with what a large opposed bloc forces.
"""

from __future__ import annotations

from .prefs import PreferenceProfile

__all__ = [
    "FIXTURE_K",
    "solid_pair_profile",
    "cohesive_overlap_profile",
    "scattered_tops_profile",
]

FIXTURE_K = 5

_REVERSED = (9, 8, 7, 6, 5, 4, 3, 2, 1, 0)


def solid_pair_profile() -> PreferenceProfile:
    """Four voters solidly rank the pair {0, 1} on top (forcing it under
    Dummett's condition and under Fixed Majority's rival set), while six
    voters rank everything in reverse, making {5..9} both the unique
    Condorcet committee and a fixed-majority set."""
    return PreferenceProfile(
        10,
        (
            (0, 1, 2, 3, 4, 5, 6, 7, 8, 9),
            (0, 1, 4, 5, 6, 7, 8, 9, 2, 3),
            (0, 1, 6, 7, 8, 9, 2, 3, 4, 5),
            (0, 1, 8, 9, 2, 3, 4, 5, 6, 7),
        )
        + (_REVERSED,) * 6,
    )


def cohesive_overlap_profile() -> PreferenceProfile:
    """Four voters share the approved middle block {2, 3, 4} but each ranks a
    different alternative second; the opposed six-voter bloc is 3-cohesive on
    {5..9}. A committee can satisfy both cohesive groups while ignoring the
    common first choice 0 that Dummett's condition demands."""
    return PreferenceProfile(
        10,
        (
            (0, 6, 2, 3, 4, 5, 1, 7, 8, 9),
            (0, 7, 2, 3, 4, 5, 6, 1, 8, 9),
            (0, 8, 2, 3, 4, 5, 6, 7, 1, 9),
            (0, 9, 2, 3, 4, 5, 6, 7, 8, 1),
        )
        + (_REVERSED,) * 6,
    )


def scattered_tops_profile() -> PreferenceProfile:
    """Like ``cohesive_overlap_profile`` but the four voters' first choices
    are scattered (0, 1, 2, 3), so Dummett's condition only binds for the
    six-voter bloc while the four voters still form a 2-cohesive group on
    {3, 4} that extended justified representation protects."""
    return PreferenceProfile(
        10,
        (
            (0, 6, 2, 3, 4, 5, 1, 7, 8, 9),
            (1, 7, 2, 3, 4, 5, 6, 0, 8, 9),
            (2, 8, 1, 3, 4, 5, 6, 7, 0, 9),
            (3, 9, 2, 1, 4, 5, 6, 7, 8, 0),
        )
        + (_REVERSED,) * 6,
    )
