"""M3: candidate scoring with functional-gradient-boosted regression trees.

Each boosting iteration fits a small regression tree to the residuals
(label minus current probability) of the candidate predicate; the summed
tree outputs form a potential whose sigmoid is the candidate probability.
Labels come from weak supervision over the taxonomy match ratio, optionally
topped up with accepted-team feedback pairs.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

from .config import EngineConfig
from .corpus import Call, Corpus, Researcher
from .errors import TrainingDataError, ValidationError
from .methods import M3, RankedCandidate, TeamSlate, build_teams, make_taxonomy_matcher
from .skills import skill_match
from .taxonomy import Taxonomy, codes_overlap, map_profile_to_codes, map_to_codes

FEATURE_SCHEMA_VERSION = 1
FEATURE_NAMES = (
    "shared_string_matches",
    "shared_taxonomy_codes",
    "demand_size",
    "interest_size",
    "match_ratio",
)
PSI_CLAMP = 20.0

# split-search order: taxonomy signal first so equally-good splits resolve
# toward the feature the weak labels are defined on
_SPLIT_PRIORITY = (4, 1, 0, 2, 3)

_PREDICATE_ARITIES = {"requires": 2, "interest": 2, "candidate": 2}


@dataclass(frozen=True)
class Predicate:
    """Relational fact: requires(call, skill), interest(researcher, skill),
    or the target candidate(researcher, call)."""

    name: str
    args: tuple[str, str]

    def __post_init__(self) -> None:
        if self.name not in _PREDICATE_ARITIES:
            raise ValueError(f"unknown predicate {self.name!r}")
        if len(self.args) != _PREDICATE_ARITIES[self.name]:
            raise ValueError(f"{self.name} takes {_PREDICATE_ARITIES[self.name]} args")


def corpus_predicates(corpus: Corpus) -> list[Predicate]:
    """The corpus as relational facts, in deterministic order."""
    facts: list[Predicate] = []
    for call in sorted(corpus.calls, key=lambda c: c.id):
        for skill in sorted(call.demanded_skills, key=lambda s: s.text):
            facts.append(Predicate("requires", (call.id, skill.text)))
    for researcher in sorted(corpus.researchers, key=lambda r: r.id):
        for skill in sorted(researcher.interests, key=lambda s: s.text):
            facts.append(Predicate("interest", (researcher.id, skill.text)))
    return facts


@dataclass(frozen=True)
class RelationalFeatures:
    shared_string_matches: int
    shared_taxonomy_codes: int
    demand_size: int
    interest_size: int
    match_ratio: float

    def __post_init__(self) -> None:
        if min(self.shared_string_matches, self.shared_taxonomy_codes,
               self.demand_size, self.interest_size) < 0:
            raise ValueError("feature counts must be non-negative")
        expected = self.shared_taxonomy_codes / self.demand_size if self.demand_size else 0.0
        if abs(self.match_ratio - expected) > 1e-9:
            raise ValueError(f"match_ratio {self.match_ratio} inconsistent with components")

    def vector(self) -> tuple[float, ...]:
        return (
            float(self.shared_string_matches),
            float(self.shared_taxonomy_codes),
            float(self.demand_size),
            float(self.interest_size),
            self.match_ratio,
        )


def ground_features(
    researcher: Researcher, call: Call, tax: Taxonomy, cfg: EngineConfig
) -> RelationalFeatures:
    """Deterministic relational aggregates for one (researcher, call) pair."""
    demand = sorted(call.demanded_skills, key=lambda s: s.text)
    string_matches = sum(
        1 for s in demand if skill_match(s, researcher.interests, cfg.t_m1) is not None
    )
    profile = map_profile_to_codes(researcher.interests, tax, cfg.t_m2)
    taxonomy_matches = sum(
        1
        for s in demand
        if codes_overlap(map_to_codes(s, tax, cfg.t_m2), profile, tax, cfg.min_depth)
    )
    return RelationalFeatures(
        shared_string_matches=string_matches,
        shared_taxonomy_codes=taxonomy_matches,
        demand_size=len(demand),
        interest_size=len(researcher.interests),
        match_ratio=taxonomy_matches / len(demand),
    )


@dataclass(frozen=True)
class TrainingExample:
    researcher_id: str
    call_id: str
    features: RelationalFeatures
    label: bool
    weight: float  # gradient magnitude |label - P| under the model that produced it

    @property
    def residual(self) -> float:
        return self.weight if self.label else -self.weight


@dataclass(frozen=True)
class TreeNode:
    """Internal node (feature/threshold/left/right) or leaf (value)."""

    value: float | None = None
    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    def is_leaf(self) -> bool:
        return self.value is not None

    def evaluate(self, x: tuple[float, ...]) -> float:
        node = self
        while not node.is_leaf():
            node = node.left if x[node.feature] <= node.threshold else node.right
        return node.value


@dataclass(frozen=True)
class RegressionTree:
    root: TreeNode
    max_depth: int

    def evaluate(self, x: tuple[float, ...]) -> float:
        return self.root.evaluate(x)


@dataclass
class BanditModel:
    """psi(x) = psi0 + sum of tree outputs; P(candidate) = sigmoid(psi)."""

    psi0: float = 0.0
    iterations: int = 0
    trees: list[RegressionTree] = field(default_factory=list)

    def potential(self, features: RelationalFeatures) -> float:
        x = features.vector()
        psi = self.psi0 + sum(tree.evaluate(x) for tree in self.trees)
        return max(-PSI_CLAMP, min(PSI_CLAMP, psi))

    def probability(self, features: RelationalFeatures) -> float:
        return _sigmoid(self.potential(features))


def _sigmoid(psi: float) -> float:
    if psi >= 0:
        return 1.0 / (1.0 + math.exp(-psi))
    e = math.exp(psi)
    return e / (1.0 + e)


def weak_label(features: RelationalFeatures) -> bool | None:
    """Weak supervision: strong taxonomy overlap is positive, none is negative,
    anything in between stays out of the training set."""
    if features.match_ratio >= 0.5:
        return True
    if features.match_ratio == 0:
        return False
    return None


def generate_examples(
    corpus: Corpus,
    tax: Taxonomy,
    model_so_far: BanditModel,
    positive_policy=weak_label,
    *,
    cfg: EngineConfig | None = None,
    seed: int = 0,
    max_examples: int | None = None,
    extra_positives: set[tuple[str, str]] | None = None,
    feature_cache: dict | None = None,
) -> list[TrainingExample]:
    """Label (researcher, call) pairs and weight them by gradient magnitude.

    Negatives are subsampled to at most 3x the positives so sparse corpora
    cannot collapse into an all-negative fit. Raises TrainingDataError when
    the policy yields no positives at all.
    """
    cfg = cfg or EngineConfig()
    extra_positives = extra_positives or set()
    cache = feature_cache if feature_cache is not None else {}

    positives: list[tuple[str, str, RelationalFeatures]] = []
    negatives: list[tuple[str, str, RelationalFeatures]] = []
    for call in sorted(corpus.calls, key=lambda c: c.id):
        for researcher in sorted(corpus.researchers, key=lambda r: r.id):
            key = (researcher.id, call.id)
            features = cache.get(key)
            if features is None:
                features = ground_features(researcher, call, tax, cfg)
                cache[key] = features
            label = True if key in extra_positives else positive_policy(features)
            if label is True:
                positives.append((researcher.id, call.id, features))
            elif label is False:
                negatives.append((researcher.id, call.id, features))

    if not positives:
        raise TrainingDataError("positive policy produced no positive examples")

    if len(negatives) > 3 * len(positives):
        rng = random.Random(f"{seed}:negatives")
        negatives = rng.sample(negatives, 3 * len(positives))
        negatives.sort()

    labeled = [(rid, cid, f, True) for rid, cid, f in positives]
    labeled += [(rid, cid, f, False) for rid, cid, f in negatives]
    labeled.sort(key=lambda row: (row[1], row[0]))
    if max_examples is not None and len(labeled) > max_examples:
        rng = random.Random(f"{seed}:cap")
        labeled = rng.sample(labeled, max_examples)
        labeled.sort(key=lambda row: (row[1], row[0]))

    return [
        TrainingExample(
            researcher_id=rid,
            call_id=cid,
            features=f,
            label=label,
            weight=abs((1.0 if label else 0.0) - model_so_far.probability(f)),
        )
        for rid, cid, f, label in labeled
    ]


def fit_tree(examples: list[TrainingExample], max_depth: int, min_leaf: int) -> RegressionTree:
    """Greedy variance-reduction regression tree over the residuals."""
    if len(examples) < 2 * min_leaf:
        raise ValueError(f"need at least {2 * min_leaf} examples, got {len(examples)}")
    rows = [(e.features.vector(), e.residual) for e in examples]

    def best_split(subset: list[tuple[tuple[float, ...], float]]):
        n = len(subset)
        total = sum(r for _, r in subset)
        total_sq = sum(r * r for _, r in subset)
        base_sse = total_sq - total * total / n
        best = None  # (sse, feature, threshold)
        for f in _SPLIT_PRIORITY:
            ordered = sorted(subset, key=lambda row: row[0][f])
            left_sum = 0.0
            left_sq = 0.0
            for i in range(n - 1):
                r = ordered[i][1]
                left_sum += r
                left_sq += r * r
                if ordered[i][0][f] == ordered[i + 1][0][f]:
                    continue
                n_left = i + 1
                n_right = n - n_left
                if n_left < min_leaf or n_right < min_leaf:
                    continue
                right_sum = total - left_sum
                right_sq = total_sq - left_sq
                sse = (left_sq - left_sum * left_sum / n_left) + (
                    right_sq - right_sum * right_sum / n_right
                )
                threshold = (ordered[i][0][f] + ordered[i + 1][0][f]) / 2.0
                if best is None or sse < best[0] - 1e-12:
                    best = (sse, f, threshold)
        if best is None or best[0] >= base_sse - 1e-12:
            return None
        return best

    def grow(subset: list[tuple[tuple[float, ...], float]], depth: int) -> TreeNode:
        mean = sum(r for _, r in subset) / len(subset)
        if depth >= max_depth or len(subset) < 2 * min_leaf:
            return TreeNode(value=mean)
        split = best_split(subset)
        if split is None:
            return TreeNode(value=mean)
        _, f, threshold = split
        left = [row for row in subset if row[0][f] <= threshold]
        right = [row for row in subset if row[0][f] > threshold]
        return TreeNode(
            feature=f,
            threshold=threshold,
            left=grow(left, depth + 1),
            right=grow(right, depth + 1),
        )

    return RegressionTree(root=grow(rows, 0), max_depth=max_depth)


def _mean_nll(examples: list[TrainingExample], model: BanditModel) -> float:
    total = 0.0
    for e in examples:
        p = model.probability(e.features)
        total += -math.log(p) if e.label else -math.log(1.0 - p)
    return total / len(examples)


@dataclass(frozen=True)
class TrainResult:
    model: BanditModel
    log: tuple[tuple[int, float, int], ...]  # (iteration, mean nll, n examples)


def train(
    corpus: Corpus,
    tax: Taxonomy,
    cfg: EngineConfig | None = None,
    positive_policy=weak_label,
    extra_positives: set[tuple[str, str]] | None = None,
) -> TrainResult:
    """Boosting loop: regenerate gradients under the current model, fit a tree,
    append, and log the post-iteration training NLL."""
    cfg = cfg or EngineConfig()
    if cfg.bandit_iterations < 1:
        raise ValueError("bandit_iterations must be >= 1")
    model = BanditModel(psi0=0.0, iterations=cfg.bandit_iterations)
    feature_cache: dict = {}
    log: list[tuple[int, float, int]] = []
    for iteration in range(1, cfg.bandit_iterations + 1):
        examples = generate_examples(
            corpus,
            tax,
            model,
            positive_policy,
            cfg=cfg,
            seed=cfg.rng_seed,
            extra_positives=extra_positives,
            feature_cache=feature_cache,
        )
        if len(examples) < 2 * cfg.bandit_min_leaf:
            raise TrainingDataError(
                f"corpus yields only {len(examples)} usable examples; "
                f"need at least {2 * cfg.bandit_min_leaf} (2 x min_leaf)"
            )
        tree = fit_tree(examples, cfg.bandit_max_depth, cfg.bandit_min_leaf)
        model.trees.append(tree)
        log.append((iteration, _mean_nll(examples, model), len(examples)))
    return TrainResult(model=model, log=tuple(log))


def predict(
    model: BanditModel, researcher: Researcher, call: Call, tax: Taxonomy, cfg: EngineConfig
) -> float:
    """P(candidate | features) in (0, 1)."""
    return model.probability(ground_features(researcher, call, tax, cfg))


def m3_rank_candidates(
    call: Call, corpus: Corpus, tax: Taxonomy, model: BanditModel, cfg: EngineConfig
) -> list[RankedCandidate]:
    """Researchers at or above p_min, ranked by probability then id.

    Matched skills use the taxonomy matcher so the greedy builder and the
    metric breakdowns agree on coverage.
    """
    demand = sorted(call.demanded_skills, key=lambda s: s.text)
    demand_codes = {s: map_to_codes(s, tax, cfg.t_m2) for s in demand}
    ranked: list[tuple[float, str, frozenset]] = []
    for researcher in sorted(corpus.researchers, key=lambda r: r.id):
        p = predict(model, researcher, call, tax, cfg)
        if p < cfg.p_min:
            continue
        profile = map_profile_to_codes(researcher.interests, tax, cfg.t_m2)
        matched = frozenset(
            s for s in demand if codes_overlap(demand_codes[s], profile, tax, cfg.min_depth)
        )
        ranked.append((p, researcher.id, matched))
    ranked.sort(key=lambda row: (-row[0], row[1]))
    return [RankedCandidate(rid, p, matched) for p, rid, matched in ranked]


def m3_bandit_teams(
    call: Call, corpus: Corpus, tax: Taxonomy, model: BanditModel, cfg: EngineConfig
) -> TeamSlate:
    ranked = m3_rank_candidates(call, corpus, tax, model, cfg)
    matcher = make_taxonomy_matcher(tax, cfg.t_m2, cfg.min_depth)
    return build_teams(call, ranked, corpus, matcher, cfg, M3)


def _node_to_json(node: TreeNode) -> dict:
    if node.is_leaf():
        return {"value": node.value}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _node_to_json(node.left),
        "right": _node_to_json(node.right),
    }


def _node_from_json(data: dict) -> TreeNode:
    if "value" in data:
        return TreeNode(value=data["value"])
    return TreeNode(
        feature=data["feature"],
        threshold=data["threshold"],
        left=_node_from_json(data["left"]),
        right=_node_from_json(data["right"]),
    )


def model_to_json(model: BanditModel) -> dict:
    return {
        "feature_schema_version": FEATURE_SCHEMA_VERSION,
        "psi0": model.psi0,
        "iterations": model.iterations,
        "trees": [
            {"max_depth": t.max_depth, "root": _node_to_json(t.root)} for t in model.trees
        ],
    }


def model_from_json(data: dict) -> BanditModel:
    version = data.get("feature_schema_version")
    if version != FEATURE_SCHEMA_VERSION:
        raise ValidationError(f"unsupported model feature_schema_version: {version!r}")
    return BanditModel(
        psi0=data["psi0"],
        iterations=data["iterations"],
        trees=[
            RegressionTree(root=_node_from_json(t["root"]), max_depth=t["max_depth"])
            for t in data["trees"]
        ],
    )


def save_model(model: BanditModel, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(model_to_json(model), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def load_model(path: str | Path) -> BanditModel:
    return model_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def save_training_log(log, path: str | Path) -> None:
    lines = ["iteration,nll,n_examples"]
    lines += [f"{i},{nll:.6f},{n}" for i, nll, n in log]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
