"""Preference profiles and samplers for the standard preference distributions.

A profile holds strict complete rankings of ``m`` alternatives (indices
``0..m-1``) by ``n`` voters. Every sampler is a pure function of
``(spec, n, m, seed)``: the same inputs always reproduce the same profile.
Seeds are plain integers (or tuples of integers for derived streams) fed to
``numpy.random.default_rng``.
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import DataFormatError, ParameterError

__all__ = [
    "PreferenceProfile",
    "ApprovalProfile",
    "DistributionSpec",
    "DISTRIBUTION_KINDS",
    "sample_profile",
    "sample_profiles",
    "child_seed",
    "rename_alternatives",
    "apply_relabeling",
    "derive_approvals",
    "standard_mixture_components",
    "standard_test_distributions",
    "write_profiles",
    "read_profiles",
    "read_profile_records",
]


@dataclass(frozen=True)
class PreferenceProfile:
    """Strict complete rankings; ``rankings[v][0]`` is voter v's favourite."""

    m: int
    rankings: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "rankings", tuple(tuple(int(a) for a in row) for row in self.rankings)
        )
        if self.m < 2:
            raise ParameterError(f"m must be >= 2, got {self.m}")
        if len(self.rankings) < 1:
            raise ParameterError("a profile needs at least one voter")
        base = tuple(range(self.m))
        for v, row in enumerate(self.rankings):
            if tuple(sorted(row)) != base:
                raise ParameterError(
                    f"voter {v}: ranking {row} is not a permutation of 0..{self.m - 1}"
                )

    @property
    def n(self) -> int:
        return len(self.rankings)

    @cached_property
    def ranking_array(self) -> np.ndarray:
        """(n, m) array; entry [v, p] is the alternative voter v ranks at position p."""
        arr = np.array(self.rankings, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def position_array(self) -> np.ndarray:
        """(n, m) array; entry [v, a] is the position of alternative a in v's ranking."""
        pos = np.argsort(self.ranking_array, axis=1)
        pos.setflags(write=False)
        return pos


@dataclass(frozen=True)
class ApprovalProfile:
    """Size-k approval sets, one per voter."""

    m: int
    k: int
    approvals: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "approvals", tuple(frozenset(int(a) for a in s) for s in self.approvals))
        if not 1 <= self.k < self.m:
            raise ParameterError(f"k must satisfy 1 <= k < m, got k={self.k}, m={self.m}")
        for v, s in enumerate(self.approvals):
            if len(s) != self.k:
                raise ParameterError(f"voter {v}: approval set has size {len(s)}, expected {self.k}")
            if s and (min(s) < 0 or max(s) >= self.m):
                raise ParameterError(f"voter {v}: approval set {sorted(s)} out of range 0..{self.m - 1}")

    @property
    def n(self) -> int:
        return len(self.approvals)

    @cached_property
    def matrix(self) -> np.ndarray:
        """(n, m) boolean approval indicator matrix."""
        mat = np.zeros((self.n, self.m), dtype=bool)
        for v, s in enumerate(self.approvals):
            mat[v, sorted(s)] = True
        mat.setflags(write=False)
        return mat


def derive_approvals(profile: PreferenceProfile, k: int) -> ApprovalProfile:
    """Each voter approves exactly their k top-ranked alternatives."""
    if not 1 <= k < profile.m:
        raise ParameterError(f"k must satisfy 1 <= k < m, got k={k}, m={profile.m}")
    return ApprovalProfile(profile.m, k, tuple(frozenset(row[:k]) for row in profile.rankings))


DISTRIBUTION_KINDS = (
    "ic",
    "iac",
    "identity",
    "mallows",
    "urn",
    "euclidean",
    "spconitzer",
    "spwalsh",
    "stratified",
    "mixed",
)

_EUCLIDEAN_DIMENSIONS = (3, 10)
_TOPOLOGIES = ("ball", "cube")
_PLACEMENTS = ("uniform", "gaussian")

# Defaults for parameters that are redrawn per profile when left unset.
URN_ALPHA_GAMMA_SHAPE = 0.8
URN_ALPHA_GAMMA_SCALE = 10.0


@dataclass(frozen=True)
class DistributionSpec:
    """A sampler identifier plus its parameters.

    Parameters left as ``None`` where a per-profile draw is standard
    (``mallows`` dispersion, ``urn`` alpha) are redrawn from their default
    distribution on every sample: dispersion uniform on [0, 1], alpha from
    Gamma(0.8, 10).
    """

    kind: str
    dispersion: float | None = None  # mallows; normalized to [0, 1]
    alpha: float | None = None  # urn; non-negative
    w: float | None = None  # stratified; in (0, 1)
    dimension: int | None = None  # euclidean
    topology: str | None = None  # euclidean: ball | cube
    placement: str | None = None  # euclidean: uniform | gaussian
    components: tuple["DistributionSpec", ...] | None = None  # mixed; None = standard 16

    def __post_init__(self):
        if self.kind not in DISTRIBUTION_KINDS:
            raise ParameterError(f"unknown distribution kind {self.kind!r}")
        allowed = {
            "mallows": {"dispersion"},
            "urn": {"alpha"},
            "stratified": {"w"},
            "euclidean": {"dimension", "topology", "placement"},
            "mixed": {"components"},
        }.get(self.kind, set())
        for name in ("dispersion", "alpha", "w", "dimension", "topology", "placement", "components"):
            if getattr(self, name) is not None and name not in allowed:
                raise ParameterError(f"{self.kind} takes no parameter {name!r}")
        if self.kind == "mallows" and self.dispersion is not None:
            if not 0.0 <= float(self.dispersion) <= 1.0:
                raise ParameterError(f"mallows dispersion must be in [0, 1], got {self.dispersion}")
        if self.kind == "urn" and self.alpha is not None:
            if float(self.alpha) < 0.0:
                raise ParameterError(f"urn alpha must be non-negative, got {self.alpha}")
        if self.kind == "stratified":
            if self.w is None:
                raise ParameterError("stratified requires a weight w")
            if not 0.0 < float(self.w) < 1.0:
                raise ParameterError(f"stratified weight must be in (0, 1), got {self.w}")
        if self.kind == "euclidean":
            if self.dimension not in _EUCLIDEAN_DIMENSIONS:
                raise ParameterError(f"euclidean dimension must be one of {_EUCLIDEAN_DIMENSIONS}")
            if self.topology not in _TOPOLOGIES:
                raise ParameterError(f"euclidean topology must be one of {_TOPOLOGIES}")
            if self.placement not in _PLACEMENTS:
                raise ParameterError(f"euclidean placement must be one of {_PLACEMENTS}")

    def label(self) -> str:
        """Canonical string form, used in wire formats and on the command line."""
        if self.kind == "mallows" and self.dispersion is not None:
            return f"mallows:{self.dispersion:g}"
        if self.kind == "urn" and self.alpha is not None:
            return f"urn:{self.alpha:g}"
        if self.kind == "stratified":
            return f"stratified:{self.w:g}"
        if self.kind == "euclidean":
            return f"euclidean:{self.dimension},{self.topology},{self.placement}"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> "DistributionSpec":
        """Parse a spec from its string form, e.g. ``urn:2.5`` or ``euclidean:3,ball,uniform``."""
        text = text.strip().lower()
        kind, _, rest = text.partition(":")
        if kind == "euclidean":
            parts = [p.strip() for p in rest.split(",")] if rest else []
            if len(parts) != 3:
                raise ParameterError(
                    f"euclidean spec must look like euclidean:3,ball,uniform, got {text!r}"
                )
            try:
                dim = int(parts[0])
            except ValueError:
                raise ParameterError(f"bad euclidean dimension {parts[0]!r}") from None
            return cls("euclidean", dimension=dim, topology=parts[1], placement=parts[2])
        if kind == "mallows":
            return cls("mallows", dispersion=float(rest) if rest else None)
        if kind == "urn":
            return cls("urn", alpha=float(rest) if rest else None)
        if kind == "stratified":
            return cls("stratified", w=float(rest) if rest else 0.5)
        if rest:
            raise ParameterError(f"distribution {kind!r} takes no parameter, got {text!r}")
        return cls(kind)


def standard_mixture_components() -> tuple[DistributionSpec, ...]:
    """The 16 concrete distributions the even mixture draws from."""
    specs = [
        DistributionSpec("ic"),
        DistributionSpec("iac"),
        DistributionSpec("identity"),
        DistributionSpec("mallows"),
        DistributionSpec("urn"),
        DistributionSpec("spconitzer"),
        DistributionSpec("spwalsh"),
        DistributionSpec("stratified", w=0.5),
    ]
    for dim in _EUCLIDEAN_DIMENSIONS:
        for topology in _TOPOLOGIES:
            for placement in _PLACEMENTS:
                specs.append(
                    DistributionSpec("euclidean", dimension=dim, topology=topology, placement=placement)
                )
    return tuple(specs)


def standard_test_distributions() -> tuple[DistributionSpec, ...]:
    """The 16 concrete distributions plus the even mixture over them."""
    return standard_mixture_components() + (DistributionSpec("mixed"),)


def child_seed(seed: int, index: int) -> int:
    """Derive a stable per-item integer seed from a base seed."""
    return int(np.random.default_rng((int(seed), int(index))).integers(1 << 63))


def sample_profile(spec: DistributionSpec, n: int, m: int, seed) -> PreferenceProfile:
    """Draw one n-voter, m-alternative profile from the named distribution."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if m < 2:
        raise ParameterError(f"m must be >= 2, got {m}")
    rng = np.random.default_rng(seed)
    rows = _sample_rows(spec, n, m, rng)
    return PreferenceProfile(m, tuple(map(tuple, rows.tolist())))


def sample_profiles(spec: DistributionSpec, n: int, m: int, count: int, seed) -> list[PreferenceProfile]:
    """Draw ``count`` independent profiles; profile i uses ``child_seed(seed, i)``."""
    return [sample_profile(spec, n, m, child_seed(seed, i)) for i in range(count)]


def apply_relabeling(profile: PreferenceProfile, permutation: Sequence[int]) -> PreferenceProfile:
    """Relabel alternative ``a`` as ``permutation[a]`` in every ranking."""
    perm = np.asarray(permutation, dtype=np.int64)
    if sorted(perm.tolist()) != list(range(profile.m)):
        raise ParameterError(f"{permutation} is not a permutation of 0..{profile.m - 1}")
    relabeled = perm[profile.ranking_array]
    return PreferenceProfile(profile.m, tuple(map(tuple, relabeled.tolist())))


def rename_alternatives(profile: PreferenceProfile, seed) -> PreferenceProfile:
    """Apply a uniformly random relabeling of the alternatives."""
    rng = np.random.default_rng(seed)
    return apply_relabeling(profile, rng.permutation(profile.m))


# ---------------------------------------------------------------------------
# samplers


def _sample_rows(spec: DistributionSpec, n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    kind = spec.kind
    if kind == "ic":
        return _ic_rows(n, m, rng)
    if kind == "iac":
        # Polya urn adding one copy per draw: uniform over anonymous profiles.
        return _urn_rows(n, m, rng, extra_mass=1.0)
    if kind == "identity":
        return np.tile(np.arange(m, dtype=np.int64), (n, 1))
    if kind == "mallows":
        return _mallows_rows(n, m, rng, spec.dispersion)
    if kind == "urn":
        alpha = spec.alpha
        if alpha is None:
            alpha = float(rng.gamma(URN_ALPHA_GAMMA_SHAPE, URN_ALPHA_GAMMA_SCALE))
        return _urn_rows(n, m, rng, extra_mass=alpha * math.factorial(m))
    if kind == "euclidean":
        return _euclidean_rows(n, m, rng, spec.dimension, spec.topology, spec.placement)
    if kind == "spconitzer":
        return _conitzer_rows(n, m, rng)
    if kind == "spwalsh":
        return _walsh_rows(n, m, rng)
    if kind == "stratified":
        return _stratified_rows(n, m, rng, spec.w)
    if kind == "mixed":
        components = spec.components or standard_mixture_components()
        pick = int(rng.integers(len(components)))
        return _sample_rows(components[pick], n, m, rng)
    raise ParameterError(f"unknown distribution kind {kind!r}")


def _ic_rows(n, m, rng):
    return rng.permuted(np.tile(np.arange(m, dtype=np.int64), (n, 1)), axis=1)


def _urn_rows(n, m, rng, extra_mass):
    """Polya-Eggenberger urn: the urn starts with all m! orders (total mass m!),
    and each drawn order is returned along with ``extra_mass`` extra copies."""
    fresh_mass = float(math.factorial(m))
    rows = np.empty((n, m), dtype=np.int64)
    for i in range(n):
        total = fresh_mass + extra_mass * i
        if i == 0 or rng.random() * total < fresh_mass:
            rows[i] = rng.permutation(m)
        else:
            rows[i] = rows[int(rng.integers(i))]
    return rows


@lru_cache(maxsize=4096)
def _mallows_phi(norm_dispersion: float, m: int) -> float:
    """Map a normalized dispersion in [0, 1] to the raw Mallows parameter.

    Normalization: the expected Kendall-tau distance from the reference is
    ``norm * m(m-1)/4``, i.e. the stated fraction of the impartial-culture
    expectation. Solved by bisection on the closed-form expectation.
    """
    if norm_dispersion <= 0.0:
        return 0.0
    if norm_dispersion >= 1.0:
        return 1.0
    target = norm_dispersion * m * (m - 1) / 4.0

    def expected(phi):
        total = 0.0
        for i in range(1, m):
            w = phi ** np.arange(i + 1, dtype=float)
            total += float((np.arange(i + 1) * w).sum() / w.sum())
        return total

    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = (lo + hi) / 2.0
        if expected(mid) < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def _mallows_rows(n, m, rng, norm_dispersion):
    """Repeated-insertion Mallows sampling around the reference 0 < 1 < ... < m-1."""
    norm = float(rng.uniform()) if norm_dispersion is None else float(norm_dispersion)
    phi = _mallows_phi(round(norm, 12), m)
    # cdfs[i-1][j]: inserting reference item i at list index j costs (i - j) inversions.
    cdfs = []
    for i in range(1, m):
        weights = phi ** np.arange(i, -1, -1, dtype=float)
        cdfs.append(np.cumsum(weights) / weights.sum())
    uniforms = rng.random((n, m - 1))
    rows = np.empty((n, m), dtype=np.int64)
    for v in range(n):
        ranking = [0]
        for i in range(1, m):
            j = int(np.searchsorted(cdfs[i - 1], uniforms[v, i - 1], side="right"))
            ranking.insert(j, i)
        rows[v] = ranking
    return rows


def _ball_points(count, dim, rng):
    direction = rng.standard_normal((count, dim))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    radius = rng.random(count) ** (1.0 / dim)
    return direction * radius[:, None]


def _euclidean_rows(n, m, rng, dim, topology, placement):
    if placement == "gaussian":
        voters = rng.standard_normal((n, dim))
        alts = rng.standard_normal((m, dim))
    elif topology == "cube":
        voters = rng.random((n, dim))
        alts = rng.random((m, dim))
    else:
        voters = _ball_points(n, dim, rng)
        alts = _ball_points(m, dim, rng)
    sq_dist = ((voters[:, None, :] - alts[None, :, :]) ** 2).sum(axis=2)
    # ascending distance; exact ties go to the lower alternative index
    return np.argsort(sq_dist, axis=1, kind="stable").astype(np.int64)


def _conitzer_rows(n, m, rng):
    """Random-peak single-peaked sampling on the axis 0 < 1 < ... < m-1."""
    peaks = rng.integers(m, size=n)
    coins = rng.random((n, m))
    rows = np.empty((n, m), dtype=np.int64)
    for v in range(n):
        lo = hi = int(peaks[v])
        rows[v, 0] = lo
        for step in range(1, m):
            if lo > 0 and hi < m - 1:
                go_left = coins[v, step] < 0.5
            else:
                go_left = lo > 0
            if go_left:
                lo -= 1
                rows[v, step] = lo
            else:
                hi += 1
                rows[v, step] = hi
    return rows


def _walsh_rows(n, m, rng):
    """Uniform sampling over all single-peaked rankings for the fixed axis."""
    coins = rng.random((n, m))
    rows = np.empty((n, m), dtype=np.int64)
    for v in range(n):
        lo, hi = 0, m - 1
        for p in range(m - 1, -1, -1):
            if lo == hi:
                rows[v, p] = lo
            elif coins[v, p] < 0.5:
                rows[v, p] = lo
                lo += 1
            else:
                rows[v, p] = hi
                hi -= 1
    return rows


def _stratified_rows(n, m, rng, w):
    """Two classes; the first floor(w*m) alternatives are ranked above the rest."""
    split = math.floor(w * m + 1e-9)
    blocks = []
    if split > 0:
        blocks.append(rng.permuted(np.tile(np.arange(split, dtype=np.int64), (n, 1)), axis=1))
    if split < m:
        blocks.append(rng.permuted(np.tile(np.arange(split, m, dtype=np.int64), (n, 1)), axis=1))
    return np.concatenate(blocks, axis=1)


# ---------------------------------------------------------------------------
# wire format: one profile per line
# {"m": int, "n": int, "dist": str, "seed": int, "rankings": [[int, ...], ...]}


def write_profiles(path, profiles: Iterable[PreferenceProfile], dist: str = "unknown", seeds=None):
    profiles = list(profiles)
    if seeds is None:
        seeds = [0] * len(profiles)
    with open(path, "w", encoding="utf-8") as fp:
        for profile, seed in zip(profiles, seeds):
            record = {
                "m": profile.m,
                "n": profile.n,
                "dist": dist,
                "seed": int(seed),
                "rankings": [list(r) for r in profile.rankings],
            }
            fp.write(json.dumps(record, separators=(",", ":")) + "\n")


def read_profile_records(path) -> list[dict]:
    records = []
    with open(path, "r", encoding="utf-8") as fp:
        for lineno, line in enumerate(fp, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"bad profile record: {exc}", line=lineno) from None
            for field in ("m", "n", "rankings"):
                if field not in record:
                    raise DataFormatError(f"profile record missing field {field!r}", line=lineno)
            try:
                profile = PreferenceProfile(int(record["m"]), tuple(map(tuple, record["rankings"])))
            except (ParameterError, TypeError, ValueError) as exc:
                raise DataFormatError(f"bad profile record: {exc}", line=lineno) from None
            if profile.n != int(record["n"]):
                raise DataFormatError(
                    f"profile record claims n={record['n']} but has {profile.n} rankings",
                    line=lineno,
                )
            record["profile"] = profile
            records.append(record)
    return records


def read_profiles(path) -> list[PreferenceProfile]:
    return [record["profile"] for record in read_profile_records(path)]
