import math
import random

import pytest

from teamrec.bandit import (
    BanditModel,
    Predicate,
    RegressionTree,
    RelationalFeatures,
    TrainingExample,
    TreeNode,
    corpus_predicates,
    fit_tree,
    generate_examples,
    ground_features,
    m3_bandit_teams,
    model_from_json,
    model_to_json,
    train,
    weak_label,
)
from teamrec.config import EngineConfig
from teamrec.corpus import Call, Corpus, Researcher
from teamrec.errors import TrainingDataError

from .conftest import skillset


def features(string=0, taxo=0, demand=4, interest=4):
    return RelationalFeatures(
        shared_string_matches=string,
        shared_taxonomy_codes=taxo,
        demand_size=demand,
        interest_size=interest,
        match_ratio=taxo / demand if demand else 0.0,
    )


def example(rid, cid, f, label, model=None):
    model = model or BanditModel()
    return TrainingExample(
        researcher_id=rid,
        call_id=cid,
        features=f,
        label=label,
        weight=abs((1.0 if label else 0.0) - model.probability(f)),
    )


def separable_fixture():
    """Calls demanding concept names; half the researchers match well, half not."""
    calls = tuple(
        Call(f"C{i}", "t", "", skillset(*names))
        for i, names in enumerate(
            [
                ("supervised learning", "boosting"),
                ("reinforcement learning", "kernel methods"),
                ("firewalls", "authentication"),
                ("clustering", "anomaly detection"),
            ]
        )
    )
    researchers = tuple(
        [
            Researcher("G0", "g", skillset("supervised learning", "boosting", "reinforcement learning", "kernel methods", "clustering", "anomaly detection", "firewalls", "authentication")),
            Researcher("G1", "g", skillset("boosting", "supervised learning", "kernel methods", "reinforcement learning", "anomaly detection", "clustering", "authentication", "firewalls")),
            Researcher("G2", "g", skillset("supervised learning", "boosting", "kernel methods", "clustering", "firewalls", "reinforcement learning", "authentication", "anomaly detection")),
            Researcher("B0", "b", skillset("folk pottery")),
            Researcher("B1", "b", skillset("tidal sailing")),
            Researcher("B2", "b", skillset("glacial basketry")),
        ]
    )
    return Corpus(calls=calls, researchers=researchers)


class TestPredicates:
    def test_arity_enforced(self):
        Predicate("candidate", ("r", "c"))
        with pytest.raises(ValueError):
            Predicate("candidate", ("r",))
        with pytest.raises(ValueError):
            Predicate("likes", ("r", "c"))

    def test_corpus_view(self, small_corpus):
        facts = corpus_predicates(small_corpus)
        names = {f.name for f in facts}
        assert names == {"requires", "interest"}
        assert len(facts) == sum(len(c.demanded_skills) for c in small_corpus.calls) + sum(
            len(r.interests) for r in small_corpus.researchers
        )


class TestGroundFeatures:
    def test_perfect_overlap(self, taxonomy, cfg):
        call = Call("C", "t", "", skillset("boosting", "clustering"))
        researcher = Researcher("R", "r", skillset("boosting", "clustering"))
        f = ground_features(researcher, call, taxonomy, cfg)
        assert f.match_ratio == 1.0
        assert f.shared_string_matches == 2

    def test_disjoint_all_zero(self, taxonomy, cfg):
        call = Call("C", "t", "", skillset("glacial yodeling"))
        researcher = Researcher("R", "r", skillset("nomadic falconry"))
        f = ground_features(researcher, call, taxonomy, cfg)
        assert f.shared_string_matches == 0
        assert f.shared_taxonomy_codes == 0
        assert f.match_ratio == 0.0

    def test_nlp_kr_separation(self, nlp_kr_corpus, taxonomy, cfg):
        call = nlp_kr_corpus.calls[0]
        kr = nlp_kr_corpus.get_researcher("R-KR")
        f = ground_features(kr, call, taxonomy, cfg)
        assert f.shared_string_matches == 0
        assert f.shared_taxonomy_codes >= 1

    def test_consistency_invariant(self):
        with pytest.raises(ValueError):
            RelationalFeatures(0, 2, 4, 4, match_ratio=0.9)


class TestGenerateExamples:
    def test_untrained_model_gives_half_weights(self, taxonomy, cfg):
        corpus = separable_fixture()
        examples = generate_examples(corpus, taxonomy, BanditModel(), cfg=cfg)
        assert examples
        assert all(e.weight == pytest.approx(0.5) for e in examples)

    def test_weight_is_gradient_magnitude(self):
        model = BanditModel(psi0=math.log(9))  # P = 0.9
        e = example("r", "c", features(taxo=4), True, model)
        assert e.weight == pytest.approx(0.1)

    def test_policy_on_obvious_fixture(self, taxonomy, cfg):
        corpus = separable_fixture()
        examples = generate_examples(corpus, taxonomy, BanditModel(), cfg=cfg)
        by_label = {True: 0, False: 0}
        for e in examples:
            by_label[e.label] += 1
        assert by_label[True] == 12  # 3 strong researchers x 4 calls
        assert 0 < by_label[False] <= 3 * by_label[True]

    def test_no_positives_is_error(self, taxonomy, cfg):
        corpus = Corpus(
            calls=(Call("C", "t", "", skillset("woodland tapestry")),),
            researchers=(
                Researcher("R1", "r", skillset("lunar gardening")),
                Researcher("R2", "r", skillset("baroque calligraphy")),
            ),
        )
        with pytest.raises(TrainingDataError):
            generate_examples(corpus, taxonomy, BanditModel(), cfg=cfg)

    def test_extra_positives_override(self, taxonomy, cfg):
        corpus = separable_fixture()
        forced = {("B0", "C0")}
        examples = generate_examples(
            corpus, taxonomy, BanditModel(), cfg=cfg, extra_positives=forced
        )
        forced_example = next(e for e in examples if (e.researcher_id, e.call_id) in forced)
        assert forced_example.label is True

    def test_weak_label_bands(self):
        assert weak_label(features(taxo=2, demand=4)) is True
        assert weak_label(features(taxo=0, demand=4)) is False
        assert weak_label(features(taxo=1, demand=4)) is None


class TestFitTree:
    def test_zero_variance_single_leaf(self):
        rows = [example(f"r{i}", "c", features(taxo=2), True) for i in range(10)]
        tree = fit_tree(rows, max_depth=3, min_leaf=2)
        assert tree.root.is_leaf()
        assert tree.root.value == pytest.approx(0.5)

    def test_separable_split_on_match_ratio(self):
        rows = [example(f"p{i}", "c", features(taxo=4), True) for i in range(6)]
        rows += [example(f"n{i}", "c", features(taxo=0), False) for i in range(6)]
        tree = fit_tree(rows, max_depth=1, min_leaf=2)
        assert not tree.root.is_leaf()
        assert tree.root.feature == 4  # match_ratio wins ties by priority
        # brute-force oracle: the chosen split achieves the minimal sse
        chosen_sse = split_sse(rows, tree.root.feature, tree.root.threshold)
        best = brute_force_best_split(rows)
        assert chosen_sse == pytest.approx(best[2])

    def test_min_leaf_forces_single_leaf(self):
        rows = [example(f"r{i}", "c", features(taxo=i % 5), i % 2 == 0) for i in range(10)]
        tree = fit_tree(rows, max_depth=3, min_leaf=5)
        # a split would need 5 per side; only a perfectly balanced cut qualifies
        if not tree.root.is_leaf():
            left, right = tree.root.left, tree.root.right
            assert left.is_leaf() and right.is_leaf()

    def test_exact_min_leaf_boundary(self):
        rows = [example(f"r{i}", "c", features(taxo=2), True) for i in range(4)]
        with pytest.raises(ValueError):
            fit_tree(rows, max_depth=2, min_leaf=3)


def split_sse(rows, feature, threshold):
    vectors = [(e.features.vector(), e.residual) for e in rows]
    left = [r for v, r in vectors if v[feature] <= threshold]
    right = [r for v, r in vectors if v[feature] > threshold]
    total = 0.0
    for side in (left, right):
        mean = sum(side) / len(side)
        total += sum((r - mean) ** 2 for r in side)
    return total


def brute_force_best_split(rows):
    vectors = [(e.features.vector(), e.residual) for e in rows]
    best = None
    for f in range(5):
        values = sorted({v[f] for v, _ in vectors})
        for lo, hi in zip(values, values[1:]):
            threshold = (lo + hi) / 2
            left = [r for v, r in vectors if v[f] <= threshold]
            right = [r for v, r in vectors if v[f] > threshold]
            if not left or not right:
                continue
            sse = sum((r - sum(left) / len(left)) ** 2 for r in left) + sum(
                (r - sum(right) / len(right)) ** 2 for r in right
            )
            if best is None or sse < best[2]:
                best = (f, threshold, sse)
    return best


class TestTrain:
    def test_nll_improves_on_first_iteration(self, taxonomy):
        corpus = separable_fixture()
        cfg = EngineConfig(bandit_iterations=1, bandit_min_leaf=2)
        result = train(corpus, taxonomy, cfg)
        baseline_nll = math.log(2.0)  # psi = 0 gives P = 0.5 for every example
        assert result.log[0][1] <= baseline_nll

    def test_nll_non_increasing_first_three(self, taxonomy):
        corpus = separable_fixture()
        cfg = EngineConfig(bandit_iterations=3, bandit_min_leaf=2)
        result = train(corpus, taxonomy, cfg)
        nlls = [row[1] for row in result.log]
        assert nlls[0] >= nlls[1] >= nlls[2]

    def test_determinism(self, taxonomy):
        corpus = separable_fixture()
        cfg = EngineConfig(bandit_iterations=5, bandit_min_leaf=2, rng_seed=3)
        a = model_to_json(train(corpus, taxonomy, cfg).model)
        b = model_to_json(train(corpus, taxonomy, cfg).model)
        assert a == b

    def test_separable_reaches_full_training_accuracy(self, taxonomy):
        corpus = separable_fixture()
        cfg = EngineConfig(bandit_iterations=10, bandit_min_leaf=2)
        result = train(corpus, taxonomy, cfg)
        examples = generate_examples(corpus, taxonomy, result.model, cfg=cfg)
        for e in examples:
            p = result.model.probability(e.features)
            assert (p > 0.5) == e.label

    def test_matches_logistic_oracle_labels(self, taxonomy):
        corpus = separable_fixture()
        cfg = EngineConfig(bandit_iterations=10, bandit_min_leaf=2)
        result = train(corpus, taxonomy, cfg)
        examples = generate_examples(corpus, taxonomy, result.model, cfg=cfg)
        xs = [e.features.vector() for e in examples]
        ys = [1.0 if e.label else 0.0 for e in examples]
        weights = logistic_fit(xs, ys)
        for x, e in zip(xs, examples):
            z = weights[0] + sum(w * v for w, v in zip(weights[1:], x))
            oracle_label = z > 0
            boosted_label = result.model.probability(e.features) > 0.5
            assert boosted_label == oracle_label == e.label


def logistic_fit(xs, ys, lr=0.5, steps=4000):
    """Plain batch gradient descent on logistic loss; independent oracle."""
    dim = len(xs[0])
    weights = [0.0] * (dim + 1)
    n = len(xs)
    for _ in range(steps):
        grad = [0.0] * (dim + 1)
        for x, y in zip(xs, ys):
            z = weights[0] + sum(w * v for w, v in zip(weights[1:], x))
            z = max(-30.0, min(30.0, z))
            p = 1.0 / (1.0 + math.exp(-z))
            err = p - y
            grad[0] += err
            for j in range(dim):
                grad[j + 1] += err * x[j]
        for j in range(dim + 1):
            weights[j] -= lr * grad[j] / n
    return weights


class TestPredict:
    def test_sigmoid_identity(self):
        assert BanditModel().probability(features()) == pytest.approx(0.5)

    def test_saturation_with_clamp(self):
        model = BanditModel(psi0=1e9)
        p = model.probability(features())
        assert p >= 1 - 1e-8
        assert p < 1.0

    def test_hand_summed_leaves(self):
        tree1 = RegressionTree(root=TreeNode(value=0.7), max_depth=1)
        tree2 = RegressionTree(root=TreeNode(value=0.5), max_depth=1)
        model = BanditModel(psi0=0.0, iterations=2, trees=[tree1, tree2])
        expected = 1.0 / (1.0 + math.exp(-1.2))
        assert model.probability(features()) == pytest.approx(expected)
        assert round(expected, 4) == 0.7685

    def test_normalization(self, taxonomy, cfg):
        corpus = separable_fixture()
        model = train(corpus, taxonomy, EngineConfig(bandit_iterations=4, bandit_min_leaf=2)).model
        rng = random.Random(11)
        for _ in range(200):
            f = features(
                string=rng.randint(0, 5),
                taxo=rng.randint(0, 5),
                demand=rng.randint(1, 6),
                interest=rng.randint(1, 9),
            )
            p = model.probability(f)
            assert abs(p + (1 - p) - 1.0) <= 1e-12
            assert 0.0 < p < 1.0


class TestSerialization:
    def test_round_trip_bit_exact(self, taxonomy):
        corpus = separable_fixture()
        cfg = EngineConfig(bandit_iterations=6, bandit_min_leaf=2)
        model = train(corpus, taxonomy, cfg).model
        clone = model_from_json(model_to_json(model))
        rng = random.Random(5)
        for _ in range(1000):
            f = features(
                string=rng.randint(0, 6),
                taxo=rng.randint(0, 6),
                demand=rng.randint(1, 8),
                interest=rng.randint(1, 12),
            )
            assert clone.probability(f) == model.probability(f)

    def test_schema_version_checked(self):
        bad = model_to_json(BanditModel())
        bad["feature_schema_version"] = 99
        from teamrec.errors import ValidationError

        with pytest.raises(ValidationError):
            model_from_json(bad)


class TestM3Teams:
    def test_all_below_pmin_empty_slate(self, taxonomy, cfg):
        corpus = separable_fixture()
        model = BanditModel(psi0=-5.0)
        slate = m3_bandit_teams(corpus.calls[0], corpus, taxonomy, model, cfg)
        assert slate.teams == ()

    def test_two_complementary_researchers(self, taxonomy):
        call = Call("C", "t", "", skillset("boosting", "firewalls"))
        corpus = Corpus(
            calls=(call,),
            researchers=(
                Researcher("R-ML", "a", skillset("boosting")),
                Researcher("R-SEC", "b", skillset("firewalls")),
            ),
        )
        cfg = EngineConfig(bandit_iterations=3, bandit_min_leaf=1)
        model = train(corpus, taxonomy, cfg).model
        slate = m3_bandit_teams(call, corpus, taxonomy, model, cfg)
        assert len(slate.teams) >= 1
        top_team, top_breakdown = slate.teams[0]
        assert top_team.member_ids == ("R-ML", "R-SEC")
        assert top_breakdown.coverage == 1.0

    def test_untrained_model_ranks_all_equal(self, taxonomy, cfg):
        corpus = separable_fixture()
        model = BanditModel()
        from teamrec.bandit import m3_rank_candidates

        ranked = m3_rank_candidates(corpus.calls[0], corpus, taxonomy, model, cfg)
        assert len(ranked) == len(corpus.researchers)
        assert all(c.score == pytest.approx(0.5) for c in ranked)
        ids = [c.researcher_id for c in ranked]
        assert ids == sorted(ids)

    def test_raising_pmin_never_adds_candidates(self, taxonomy):
        corpus = separable_fixture()
        model = train(
            corpus, taxonomy, EngineConfig(bandit_iterations=5, bandit_min_leaf=2)
        ).model
        from teamrec.bandit import m3_rank_candidates

        previous = None
        for p_min in (0.3, 0.5, 0.7, 0.9):
            cfg = EngineConfig(p_min=p_min)
            ids = {c.researcher_id for c in m3_rank_candidates(corpus.calls[0], corpus, taxonomy, model, cfg)}
            if previous is not None:
                assert ids <= previous
            previous = ids
