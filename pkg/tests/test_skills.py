import random
import string

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teamrec.errors import TeamRecError
from teamrec.skills import (
    StopWordList,
    extract_skills,
    levenshtein,
    load_default_stopwords,
    ngrams,
    similarity,
    skill_match,
)

from .conftest import skill, skillset


def oracle_levenshtein(a: str, b: str) -> int:
    """Independent full-matrix dynamic program."""
    n, m = len(a), len(b)
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        table[i][0] = i
    for j in range(m + 1):
        table[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            table[i][j] = min(
                table[i - 1][j] + 1,
                table[i][j - 1] + 1,
                table[i - 1][j - 1] + cost,
            )
    return table[n][m]


def oracle_similarity(a: str, b: str) -> float:
    return 1.0 - oracle_levenshtein(a, b) / max(len(a), len(b))


class TestSimilarity:
    def test_identity(self):
        assert similarity("machine learning", "machine learning") == 1.0

    def test_hand_computed(self):
        assert similarity("abc", "abd") == pytest.approx(1 - 1 / 3)

    def test_matches_oracle_on_1000_random_pairs(self):
        rng = random.Random(42)
        alphabet = string.ascii_lowercase[:6] + " "
        for _ in range(1000):
            a = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 24))).strip() or "a"
            b = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 24))).strip() or "b"
            assert similarity(a, b) == pytest.approx(oracle_similarity(a, b), abs=0)

    def test_specific_pair_vs_oracle(self):
        assert similarity("nlp", "optimization") == oracle_similarity("nlp", "optimization")

    def test_empty_rejected(self):
        with pytest.raises(TeamRecError):
            similarity("", "x")
        with pytest.raises(TeamRecError):
            similarity("x", "")

    @given(st.text(alphabet="abcdef ", min_size=1), st.text(alphabet="abcdef ", min_size=1))
    @settings(max_examples=200)
    def test_symmetry_and_range(self, a, b):
        s = similarity(a, b)
        assert s == similarity(b, a)
        assert 0.0 <= s <= 1.0
        assert (s == 1.0) == (a == b)

    def test_levenshtein_basics(self):
        assert levenshtein("", "abc") == 3
        assert levenshtein("kitten", "sitting") == 3


class TestNgrams:
    def test_definition(self):
        assert ngrams(["a", "b", "c"], 2) == ["a b", "b c"]
        assert ngrams(["a"], 1) == ["a"]
        assert ngrams(["a", "b"], 3) == []

    @given(st.lists(st.sampled_from("abcd"), max_size=12), st.integers(1, 6))
    def test_count_property(self, tokens, n):
        assert len(ngrams(tokens, n)) == max(0, len(tokens) - n + 1)

    def test_n_zero_rejected(self):
        with pytest.raises(ValueError):
            ngrams(["a"], 0)


class TestExtractSkills:
    def test_stop_word_boundary_rule(self):
        stops = StopWordList(frozenset(["in"]))
        result = {s.text for s in extract_skills("Advances in machine learning", "", stops, 2)}
        assert "machine learning" in result
        assert "advances" in result
        assert "in" not in result
        assert "advances in" not in result

    def test_empty_inputs(self):
        stops = load_default_stopwords()
        assert extract_skills("", "", stops, 3) == set()

    def test_dedup(self):
        stops = StopWordList(frozenset(["for"]))
        result = [s for s in extract_skills("", "deep learning for deep learning", stops, 2)]
        texts = [s.text for s in result]
        assert texts.count("deep learning") == 1

    def test_synopsis_singletons_dropped_title_kept(self):
        stops = load_default_stopwords()
        result = {
            s.text
            for s in extract_skills(
                "quantum sensing", "mentions robotics once but robotics twice", stops, 1
            )
        }
        assert "quantum" in result  # title, frequency 1
        assert "robotics" in result  # synopsis, frequency 2
        assert "mentions" not in result  # synopsis, frequency 1

    def test_one_gram_set_stable_under_synopsis_permutation(self):
        stops = load_default_stopwords()
        a = extract_skills("", "alpha beta alpha beta gamma gamma", stops, 1)
        b = extract_skills("", "gamma beta alpha gamma beta alpha", stops, 1)
        assert {s.text for s in a} == {s.text for s in b}


class TestSkillMatch:
    def test_exact(self):
        best = skill_match(skill("machine learning"), skillset("machine learning"), 0.8)
        assert best is not None and best.text == "machine learning"

    def test_below_threshold(self):
        target = skillset("quantum optics")
        assert oracle_similarity("machine learning", "quantum optics") < 0.8
        assert skill_match(skill("machine learning"), target, 0.8) is None

    def test_maximum_wins(self):
        interests = skillset("machine learnin", "machine learning")
        best = skill_match(skill("machine learning"), interests, 0.8)
        assert best.text == "machine learning"

    def test_tie_breaks_lexicographically(self):
        # both differ from the pattern by one substitution in the same spot
        interests = skillset("xbc", "zbc")
        best = skill_match(skill("abc"), interests, 0.5)
        assert best.text == "xbc"

    def test_threshold_monotonicity(self):
        rng = random.Random(7)
        pool = ["machine learning", "machine learnin", "data mining", "marine biology"]
        for _ in range(50):
            pattern = skill(rng.choice(pool))
            interests = skillset(*rng.sample(pool, rng.randint(1, len(pool))))
            t1, t2 = sorted([rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0)])
            at_loose = skill_match(pattern, interests, t1)
            at_tight = skill_match(pattern, interests, t2)
            if at_tight is not None:
                assert at_loose is not None

    def test_threshold_validation(self):
        with pytest.raises(ValueError):
            skill_match(skill("a"), skillset("b"), 0.0)
