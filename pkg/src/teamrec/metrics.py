"""Team-quality metrics and the aggregate goodness score.

All four metrics are normalized to [0, 1] so scores stay comparable across
calls. Goodness is the weighted sum divided by the total positive weight,
clamped to [0, 1]: coverage and robustness reward, redundancy and set size
penalize (default weights +1, +1, -1, -1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import Researcher, Skill
from .errors import ConfigError


@dataclass(frozen=True)
class MetricWeights:
    w_redundancy: float = -1.0
    w_set_size: float = -1.0
    w_coverage: float = 1.0
    w_robustness: float = 1.0

    def __post_init__(self) -> None:
        if self.w_coverage + self.w_robustness <= 0:
            raise ConfigError(
                "coverage and robustness weights must carry positive mass, got "
                f"{self.w_coverage} + {self.w_robustness}"
            )


@dataclass(frozen=True)
class MetricBreakdown:
    redundancy: float
    set_size_norm: float
    coverage: float
    k_robustness_norm: float
    k_robust: int
    goodness: float


@dataclass(frozen=True, eq=False)
class Team:
    """A candidate team for one call. Members are researcher ids."""

    call_id: str
    members: frozenset[str]
    per_skill_holders: dict[Skill, frozenset[str]] = field(repr=False)

    def __post_init__(self) -> None:
        if len(self.members) < 2:
            raise ValueError(f"a team needs at least two members, got {sorted(self.members)}")

    @property
    def member_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.members))


def compute_holders(
    members: list[Researcher] | tuple[Researcher, ...],
    demanded_skills: frozenset[Skill] | set[Skill],
    matcher,
) -> dict[Skill, frozenset[str]]:
    """For each demanded skill, the member ids whose interests satisfy `matcher`.

    `matcher(skill, researcher) -> bool` is the method-specific predicate
    (string match for M0/M1, taxonomy overlap for M2/M3).
    """
    return {
        skill: frozenset(r.id for r in members if matcher(skill, r))
        for skill in demanded_skills
    }


def coverage(holders: dict[Skill, frozenset[str]], demanded_skills) -> float:
    """Fraction of demanded skills held by at least one member."""
    if not demanded_skills:
        raise ValueError("coverage is undefined for an empty demand set")
    covered = sum(1 for s in demanded_skills if holders.get(s))
    return covered / len(demanded_skills)


def redundancy(holders: dict[Skill, frozenset[str]], demanded_skills) -> float:
    """Fraction of demanded skills shared by two or more members."""
    if not demanded_skills:
        raise ValueError("redundancy is undefined for an empty demand set")
    shared = sum(1 for s in demanded_skills if len(holders.get(s, ())) >= 2)
    return shared / len(demanded_skills)


def set_size_norm(team_size: int, max_team_size: int) -> float:
    """Team size normalized against `max_team_size`, clamped to 1."""
    if max_team_size < 2:
        raise ValueError(f"max_team_size must be >= 2, got {max_team_size}")
    return min(1.0, team_size / max_team_size)


def k_robustness(holders: dict[Skill, frozenset[str]], demanded_skills, team_size: int) -> int:
    """Largest k such that removing ANY k members leaves coverage unchanged.

    Closed form: min over covered skills of (holders - 1); a team covering
    nothing is vacuously robust up to the cap of team_size - 1.
    """
    if not demanded_skills:
        raise ValueError("k-robustness is undefined for an empty demand set")
    holder_counts = [len(holders.get(s, ())) for s in demanded_skills if holders.get(s)]
    if not holder_counts:
        return team_size - 1
    return min(team_size - 1, min(holder_counts) - 1)


def goodness(
    coverage_value: float,
    robustness_norm: float,
    redundancy_value: float,
    set_size_value: float,
    weights: MetricWeights,
) -> float:
    """Weighted aggregate, clamped to [0, 1].

    The divisor is the positive (reward) mass only: a perfect team scores 1
    and a team whose penalties fully offset its rewards scores 0.
    """
    for name, value in (
        ("coverage", coverage_value),
        ("robustness", robustness_norm),
        ("redundancy", redundancy_value),
        ("set_size", set_size_value),
    ):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {value}")
    total = (
        weights.w_coverage * coverage_value
        + weights.w_robustness * robustness_norm
        + weights.w_redundancy * redundancy_value
        + weights.w_set_size * set_size_value
    )
    score = total / (weights.w_coverage + weights.w_robustness)
    return min(1.0, max(0.0, score))


def breakdown_for(
    holders: dict[Skill, frozenset[str]],
    demanded_skills,
    team_size: int,
    weights: MetricWeights,
    size_norm_cap: int = 10,
) -> MetricBreakdown:
    """Full MetricBreakdown for one team against one demand set."""
    cov = coverage(holders, demanded_skills)
    red = redundancy(holders, demanded_skills)
    size = set_size_norm(team_size, size_norm_cap)
    k = k_robustness(holders, demanded_skills, team_size)
    k_norm = k / max(1, team_size - 1)
    return MetricBreakdown(
        redundancy=red,
        set_size_norm=size,
        coverage=cov,
        k_robustness_norm=k_norm,
        k_robust=k,
        goodness=goodness(cov, k_norm, red, size, weights),
    )
