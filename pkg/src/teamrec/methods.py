"""Team formation methods M0 (random), M1 (string), M2 (taxonomy).

All methods funnel through the same construction policy: rank candidates,
seed one team per rank, then greedily extend each team with the
highest-ranked candidate that still covers an unmet demanded skill. Slate
diversity comes from rotating the seed; ties always break lexicographically
by researcher id so every method is deterministic end to end.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .config import EngineConfig
from .corpus import Call, Corpus, Researcher, Skill
from .errors import InsufficientSupplyError
from .metrics import MetricBreakdown, Team, breakdown_for, compute_holders
from .skills import similarity, skill_match
from .taxonomy import Taxonomy, codes_overlap, map_profile_to_codes, map_to_codes

M0, M1, M2, M3 = "M0", "M1", "M2", "M3"
METHODS = (M0, M1, M2, M3)


@dataclass(frozen=True)
class RankedCandidate:
    researcher_id: str
    score: float
    matched_skills: frozenset[Skill]


@dataclass(frozen=True)
class TeamSlate:
    call_id: str
    teams: tuple[tuple[Team, MetricBreakdown], ...]
    method: str

    def __len__(self) -> int:
        return len(self.teams)


def make_string_matcher(t_m1: float):
    """Predicate: does the researcher hold the skill by string match at t_m1."""

    def matcher(skill: Skill, researcher: Researcher) -> bool:
        return skill_match(skill, researcher.interests, t_m1) is not None

    return matcher


def make_taxonomy_matcher(tax: Taxonomy, t_m2: float, min_depth: int = 1):
    """Predicate: do the skill's codes overlap the researcher's profile codes."""
    profile_cache: dict[str, object] = {}

    def matcher(skill: Skill, researcher: Researcher) -> bool:
        profile = profile_cache.get(researcher.id)
        if profile is None:
            profile = map_profile_to_codes(researcher.interests, tax, t_m2)
            profile_cache[researcher.id] = profile
        return codes_overlap(map_to_codes(skill, tax, t_m2), profile, tax, min_depth)

    return matcher


def _sorted_demand(call: Call) -> list[Skill]:
    return sorted(call.demanded_skills, key=lambda s: s.text)


def build_teams(
    call: Call,
    ranked: list[RankedCandidate],
    corpus: Corpus,
    matcher,
    cfg: EngineConfig,
    method: str,
) -> TeamSlate:
    """Seeded greedy coverage: one team per ranked seed, deduplicated, sorted.

    Greedy additions must cover at least one currently-uncovered demanded
    skill; a team below two members takes the best remaining candidate as
    filler or is dropped.
    """
    demand = call.demanded_skills
    teams: list[tuple[Team, MetricBreakdown]] = []
    seen: set[frozenset[str]] = set()

    for seed in ranked[: cfg.max_teams]:
        member_ids = [seed.researcher_id]
        covered = set(seed.matched_skills)
        while len(covered) < len(demand) and len(member_ids) < cfg.max_team_size:
            addition = next(
                (
                    c
                    for c in ranked
                    if c.researcher_id not in member_ids and c.matched_skills - covered
                ),
                None,
            )
            if addition is None:
                break
            member_ids.append(addition.researcher_id)
            covered |= addition.matched_skills
        if len(member_ids) < 2:
            filler = next((c for c in ranked if c.researcher_id not in member_ids), None)
            if filler is None:
                continue
            member_ids.append(filler.researcher_id)

        member_set = frozenset(member_ids)
        if member_set in seen:
            continue
        seen.add(member_set)
        members = [corpus.get_researcher(rid) for rid in sorted(member_set)]
        holders = compute_holders(members, demand, matcher)
        team = Team(call_id=call.id, members=member_set, per_skill_holders=holders)
        breakdown = breakdown_for(holders, demand, len(member_set), cfg.weights, cfg.size_norm_cap)
        teams.append((team, breakdown))

    teams.sort(key=lambda tb: -tb[1].goodness)
    return TeamSlate(call_id=call.id, teams=tuple(teams), method=method)


def m0_random_teams(call: Call, corpus: Corpus, cfg: EngineConfig) -> TeamSlate:
    """Random baseline: teams sampled with no regard to demanded skills.

    Scores still need a matcher so all methods share one goodness scale;
    the string matcher fills that role. The RNG stream is derived from
    (seed, call id), so slates do not depend on evaluation order.
    """
    researchers = sorted(corpus.researchers, key=lambda r: r.id)
    if len(researchers) < 2:
        raise InsufficientSupplyError(
            f"need at least 2 researchers to form teams, corpus has {len(researchers)}"
        )
    rng = random.Random(f"{cfg.rng_seed}:{call.id}")
    matcher = make_string_matcher(cfg.t_m1)
    demand = call.demanded_skills

    teams: list[tuple[Team, MetricBreakdown]] = []
    seen: set[frozenset[str]] = set()
    for _ in range(cfg.max_teams):
        size = rng.randint(2, min(cfg.max_team_size, len(researchers)))
        members = rng.sample(researchers, size)
        member_set = frozenset(r.id for r in members)
        if member_set in seen:
            continue
        seen.add(member_set)
        holders = compute_holders(members, demand, matcher)
        team = Team(call_id=call.id, members=member_set, per_skill_holders=holders)
        breakdown = breakdown_for(holders, demand, len(member_set), cfg.weights, cfg.size_norm_cap)
        teams.append((team, breakdown))

    teams.sort(key=lambda tb: -tb[1].goodness)
    return TeamSlate(call_id=call.id, teams=tuple(teams), method=M0)


def m1_rank_candidates(call: Call, corpus: Corpus, cfg: EngineConfig) -> list[RankedCandidate]:
    """Rank researchers by demanded skills matched at t_m1.

    Ties break by higher mean match similarity, then researcher id.
    """
    scored: list[tuple[float, float, str, frozenset[Skill]]] = []
    demand = _sorted_demand(call)
    for researcher in sorted(corpus.researchers, key=lambda r: r.id):
        matched: set[Skill] = set()
        sims: list[float] = []
        for skill in demand:
            best = skill_match(skill, researcher.interests, cfg.t_m1)
            if best is not None:
                matched.add(skill)
                sims.append(similarity(skill.text, best.text))
        if matched:
            mean_sim = sum(sims) / len(sims)
            scored.append((len(matched), mean_sim, researcher.id, frozenset(matched)))
    scored.sort(key=lambda row: (-row[0], -row[1], row[2]))
    return [RankedCandidate(rid, float(count), skills) for count, _, rid, skills in scored]


def m1_string_teams(call: Call, corpus: Corpus, cfg: EngineConfig) -> TeamSlate:
    ranked = m1_rank_candidates(call, corpus, cfg)
    return build_teams(call, ranked, corpus, make_string_matcher(cfg.t_m1), cfg, M1)


def m2_rank_candidates(
    call: Call, corpus: Corpus, tax: Taxonomy, cfg: EngineConfig
) -> list[RankedCandidate]:
    """Rank researchers by demanded skills overlapped through the taxonomy."""
    scored: list[tuple[float, str, frozenset[Skill]]] = []
    demand = _sorted_demand(call)
    demand_codes = {skill: map_to_codes(skill, tax, cfg.t_m2) for skill in demand}
    for researcher in sorted(corpus.researchers, key=lambda r: r.id):
        profile = map_profile_to_codes(researcher.interests, tax, cfg.t_m2)
        matched = frozenset(
            skill
            for skill in demand
            if codes_overlap(demand_codes[skill], profile, tax, cfg.min_depth)
        )
        if matched:
            scored.append((len(matched), researcher.id, matched))
    scored.sort(key=lambda row: (-row[0], row[1]))
    return [RankedCandidate(rid, float(count), skills) for count, rid, skills in scored]


def m2_taxonomy_teams(call: Call, corpus: Corpus, tax: Taxonomy, cfg: EngineConfig) -> TeamSlate:
    ranked = m2_rank_candidates(call, corpus, tax, cfg)
    matcher = make_taxonomy_matcher(tax, cfg.t_m2, cfg.min_depth)
    return build_teams(call, ranked, corpus, matcher, cfg, M2)
