"""Batch evaluation: quality vs volume of teams per researcher, per method.

For every (call, method) the harness computes a slate, then aggregates per
researcher: quality is the mean goodness of teams containing them, volume
is the number of slate teams containing them per call (capped at 10),
averaged over calls. Researchers in no team contribute 0 volume and are
excluded from the quality mean.

The synthetic corpus generator produces taxonomy-aligned vocabularies with
a controllable share of exact-string interests, sibling-concept interests
(reachable only through the taxonomy), and unmatchable noise, so the
separation between the four methods is constructible at desk scale.
"""

from __future__ import annotations

import random
import statistics
from dataclasses import dataclass

from .bandit import BanditModel, m3_bandit_teams, train
from .config import EngineConfig
from .corpus import Call, Corpus, Researcher, Skill, normalize_skill
from .methods import M0, M1, M2, M3, METHODS, m0_random_teams, m1_string_teams, m2_taxonomy_teams
from .skills import similarity
from .taxonomy import Taxonomy, expand_codes, map_to_codes

VOLUME_CAP = 10

# share of demandable vocabulary that circulates only through siblings:
# the string matcher can never cover these demanded skills, the taxonomy can
BRIDGE_ONLY_SHARE = 0.25
# researcher archetypes: narrow specialists hold exact phrases from two home
# topics; broad taxonomists hold sibling phrases across one school of topics
TAXONOMIST_SHARE = 0.25
TAXONOMIST_EXTRA_DRAWS = 6
TAXONOMIST_RELEVANCE_BOOST = 0.3
N_SCHOOLS = 2

_NOISE_LEFT = (
    "alpine", "baroque", "coastal", "folk", "glacial", "heritage",
    "lunar", "nomadic", "orchard", "pastoral", "tidal", "woodland",
)
_NOISE_RIGHT = (
    "basketry", "beekeeping", "calligraphy", "falconry", "gardening",
    "pottery", "puppetry", "quilting", "sailing", "tapestry", "weaving", "yodeling",
)

# commodity skills: demanded by every call, widely held, matchable by plain
# string comparison, and deliberately outside the taxonomy
_COMMODITY = ("grant writing", "student mentoring", "community outreach")
COMMODITY_HOLD_P = 0.55


@dataclass(frozen=True)
class EvalRow:
    method: str
    avg_quality_mean: float
    avg_quality_std: float
    avg_volume: float


@dataclass(frozen=True)
class SyntheticCorpusSpec:
    n_calls: int = 100
    n_researchers: int = 50
    skills_per_call: int = 4
    interests_per_researcher: int = 8
    vocabulary_size: int = 12
    overlap_ratio: float = 0.45
    seed: int = 0

    def __post_init__(self) -> None:
        if min(self.n_calls, self.n_researchers, self.skills_per_call,
               self.interests_per_researcher, self.vocabulary_size) < 1:
            raise ValueError("all synthetic corpus counts must be >= 1")
        if not 0.0 <= self.overlap_ratio <= 1.0:
            raise ValueError(f"overlap_ratio must be in [0, 1], got {self.overlap_ratio}")


def _taxonomy_families(tax: Taxonomy, separation: float = 0.7) -> list[list[str]]:
    """Groups of mutually string-distant sibling concept names.

    Eligible families sit under a non-root parent so siblings join through
    an ancestor the overlap test can see. Members closer than `separation`
    to an earlier member are dropped: sibling interests must be reachable
    through the taxonomy but NOT through the string matcher.
    """
    children_by_parent: dict[str, list[str]] = {}
    for concept in tax.concepts.values():
        if concept.depth < 2:
            continue
        for parent in concept.parents:
            if tax.concepts[parent].depth >= 1:
                children_by_parent.setdefault(parent, []).append(concept.name)

    families = []
    for parent in sorted(children_by_parent):
        names = sorted(children_by_parent[parent])
        distinct: list[str] = []
        for name in names:
            if all(similarity(name, kept) < separation for kept in distinct):
                distinct.append(name)
        if len(distinct) >= 3:
            families.append(distinct)
    return families


def _disjoint_units(tax: Taxonomy, rng: random.Random) -> list[list[str]]:
    """Families whose delta-expanded code footprints are pairwise disjoint.

    One demanded phrase will come from each unit, so a call's demanded
    skills never taxonomy-match each other; siblings inside a unit remain
    the only bridge the taxonomy matcher can see but the string matcher
    cannot. Footprints are checked empirically against the delta mapping so
    fuzzy concept-name collisions cannot leak across units.
    """
    cfg = EngineConfig()
    families = _taxonomy_families(tax)
    rng.shuffle(families)
    units: list[list[str]] = []
    used_codes: set[str] = set()
    for family in families:
        footprint: set[str] = set()
        for name in family:
            codes = map_to_codes(normalize_skill(name), tax, cfg.t_m2)
            footprint |= expand_codes(codes, tax, cfg.min_depth).codes
        if footprint & used_codes:
            continue
        used_codes |= footprint
        units.append(family)
    return units


def synthesize_corpus(spec: SyntheticCorpusSpec, tax: Taxonomy | None = None) -> Corpus:
    """Deterministic synthetic corpus drawn from taxonomy concept families."""
    if tax is None:
        from .taxonomy import load_default_taxonomy

        tax = load_default_taxonomy()
    rng = random.Random(f"synth:{spec.seed}")
    units = _disjoint_units(tax, rng)
    if not units:
        raise ValueError("taxonomy yields no usable concept families")

    # one demandable phrase per unit; the rest are taxonomy-only siblings
    vocabulary: list[str] = []
    sibling_pool: dict[str, list[str]] = {}
    for unit in units[: spec.vocabulary_size]:
        members = unit[:]
        rng.shuffle(members)
        vocabulary.append(members[0])
        sibling_pool[members[0]] = members[1:]
    vocabulary.sort()

    # bridge-only phrases are demanded by calls but never held verbatim
    n_bridge = int(len(vocabulary) * BRIDGE_ONLY_SHARE)
    bridge_only = set(rng.sample(vocabulary, n_bridge)) if n_bridge else set()
    exact_pool = [p for p in vocabulary if p not in bridge_only] or vocabulary

    noise_pool = sorted(f"{a} {b}" for a in _NOISE_LEFT for b in _NOISE_RIGHT)

    calls = []
    for i in range(spec.n_calls):
        n_vocab = min(max(1, spec.skills_per_call - 1), len(vocabulary))
        phrases = rng.sample(vocabulary, n_vocab)
        if spec.skills_per_call >= 2:
            phrases.append(rng.choice(_COMMODITY))
        calls.append(
            Call(
                id=f"CALL-{i:04d}",
                title=f"synthetic call {i}",
                synopsis="generated corpus entry",
                demanded_skills=frozenset(normalize_skill(p) for p in phrases),
                source="synthetic",
            )
        )

    # schools partition the vocabulary; each taxonomist roams one school
    shuffled = vocabulary[:]
    rng.shuffle(shuffled)
    school_size = max(1, len(shuffled) // N_SCHOOLS)
    schools = [shuffled[i : i + school_size] for i in range(0, len(shuffled), school_size)]

    researchers = []
    for j in range(spec.n_researchers):
        is_taxonomist = rng.random() < TAXONOMIST_SHARE
        home_units = rng.sample(exact_pool, min(2, len(exact_pool)))
        school = rng.choice(schools)
        relevance = spec.overlap_ratio
        draws = spec.interests_per_researcher
        # an all-noise corpus (overlap 0) must stay unmatchable end to end
        commodity_p = COMMODITY_HOLD_P if spec.overlap_ratio > 0 else 0.0
        if is_taxonomist:
            if spec.overlap_ratio > 0:
                relevance = min(1.0, spec.overlap_ratio + TAXONOMIST_RELEVANCE_BOOST)
                commodity_p = 0.9
            draws += TAXONOMIST_EXTRA_DRAWS
        interests: set[Skill] = set()
        for _ in range(draws):
            if rng.random() < relevance:
                if is_taxonomist:
                    # sibling phrases within one school: reachable through
                    # the taxonomy, invisible to the string matcher
                    anchor = rng.choice(school)
                    siblings = sibling_pool.get(anchor, ())
                    phrase = rng.choice(siblings) if siblings else anchor
                else:
                    phrase = rng.choice(home_units)
            else:
                phrase = rng.choice(noise_pool)
            interests.add(normalize_skill(phrase))
        for commodity in _COMMODITY:
            if rng.random() < commodity_p:
                interests.add(normalize_skill(commodity))
        researchers.append(
            Researcher(
                id=f"RES-{j:04d}",
                name=f"researcher {j}",
                interests=frozenset(interests),
                profile_urls=(),
            )
        )

    return Corpus(calls=tuple(calls), researchers=tuple(researchers), load_report=())


def _slates_for_method(method, corpus, tax, model, cfg):
    if method == M0:
        return [m0_random_teams(call, corpus, cfg) for call in corpus.calls]
    if method == M1:
        return [m1_string_teams(call, corpus, cfg) for call in corpus.calls]
    if method == M2:
        return [m2_taxonomy_teams(call, corpus, tax, cfg) for call in corpus.calls]
    return [m3_bandit_teams(call, corpus, tax, model, cfg) for call in corpus.calls]


def evaluate(
    corpus: Corpus,
    tax: Taxonomy,
    model: BanditModel | None = None,
    cfg: EngineConfig | None = None,
    methods=METHODS,
) -> list[EvalRow]:
    """One EvalRow per method, aggregated per researcher as described above."""
    cfg = cfg or EngineConfig()
    if M3 in methods and model is None:
        model = train(corpus, tax, cfg).model

    rows = []
    researcher_ids = [r.id for r in corpus.researchers]
    for method in methods:
        slates = _slates_for_method(method, corpus, tax, model, cfg)
        goodness_by_researcher: dict[str, list[float]] = {rid: [] for rid in researcher_ids}
        counts_by_researcher: dict[str, list[int]] = {rid: [] for rid in researcher_ids}
        for slate in slates:
            per_call_counts = {rid: 0 for rid in researcher_ids}
            for team, breakdown in slate.teams:
                for rid in team.members:
                    if per_call_counts[rid] < VOLUME_CAP:
                        per_call_counts[rid] += 1
                        goodness_by_researcher[rid].append(breakdown.goodness)
            for rid, count in per_call_counts.items():
                counts_by_researcher[rid].append(count)

        quality_samples = [
            statistics.fmean(scores)
            for rid in researcher_ids
            if (scores := goodness_by_researcher[rid])
        ]
        volume_samples = [
            statistics.fmean(counts_by_researcher[rid]) if counts_by_researcher[rid] else 0.0
            for rid in researcher_ids
        ]
        rows.append(
            EvalRow(
                method=method,
                avg_quality_mean=statistics.fmean(quality_samples) if quality_samples else 0.0,
                avg_quality_std=statistics.pstdev(quality_samples) if quality_samples else 0.0,
                avg_volume=statistics.fmean(volume_samples) if volume_samples else 0.0,
            )
        )
    return rows


def report(rows: list[EvalRow], fmt: str = "csv") -> str:
    """Render rows as CSV or a markdown table; quality to 4 decimals."""
    if not rows:
        raise ValueError("no evaluation rows to report")
    if fmt == "csv":
        lines = ["method,quality_mean,quality_std,volume"]
        for row in rows:
            lines.append(
                f"{row.method},{row.avg_quality_mean:.4f},{row.avg_quality_std:.4f},"
                f"{format(round(row.avg_volume, 4), 'g')}"
            )
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        lines = [
            "| Method | Average Quality | Average Volume |",
            "|--------|-----------------|----------------|",
        ]
        for row in rows:
            quality = f"{row.avg_quality_mean:.4f} ± {row.avg_quality_std:.4f}"
            lines.append(
                f"| {row.method} | {quality} | {format(round(row.avg_volume, 4), 'g')} |"
            )
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")
