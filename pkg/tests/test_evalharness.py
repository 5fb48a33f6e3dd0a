import pytest

from teamrec.config import EngineConfig
from teamrec.corpus import Call, Corpus, Researcher, save_corpus
from teamrec.evalharness import (
    EvalRow,
    SyntheticCorpusSpec,
    evaluate,
    report,
    synthesize_corpus,
)
from teamrec.methods import M0, M1, M2
from teamrec.taxonomy import map_to_codes

from .conftest import skill, skillset


def small_spec(**overrides):
    defaults = dict(n_calls=8, n_researchers=10, seed=3)
    defaults.update(overrides)
    return SyntheticCorpusSpec(**defaults)


class TestSynthesizeCorpus:
    def test_deterministic_files(self, taxonomy, tmp_path):
        a = synthesize_corpus(small_spec(), taxonomy)
        b = synthesize_corpus(small_spec(), taxonomy)
        save_corpus(a, tmp_path / "a")
        save_corpus(b, tmp_path / "b")
        for name in ("calls.json", "researchers.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_different_seeds_differ(self, taxonomy):
        a = synthesize_corpus(small_spec(seed=1), taxonomy)
        b = synthesize_corpus(small_spec(seed=2), taxonomy)
        assert {r.interests for r in a.researchers} != {r.interests for r in b.researchers}

    def test_zero_overlap_no_matches(self, taxonomy, cfg):
        corpus = synthesize_corpus(small_spec(overlap_ratio=0.0), taxonomy)
        from teamrec.methods import m0_random_teams, m1_string_teams, m2_taxonomy_teams

        for call in corpus.calls[:3]:
            assert m1_string_teams(call, corpus, cfg).teams == ()
            assert m2_taxonomy_teams(call, corpus, taxonomy, cfg).teams == ()
            assert m0_random_teams(call, corpus, cfg).teams != ()

    def test_full_overlap_m1_coverage_achievable(self, taxonomy, cfg):
        from teamrec.methods import m1_string_teams

        corpus = synthesize_corpus(
            small_spec(n_calls=20, n_researchers=20, overlap_ratio=1.0), taxonomy
        )
        best = 0.0
        for call in corpus.calls:
            slate = m1_string_teams(call, corpus, cfg)
            for _, breakdown in slate.teams:
                best = max(best, breakdown.coverage)
        assert best == 1.0

    def test_sizes_respected(self, taxonomy):
        corpus = synthesize_corpus(small_spec(), taxonomy)
        assert len(corpus.calls) == 8
        assert len(corpus.researchers) == 10
        for researcher in corpus.researchers:
            assert researcher.interests

    def test_noise_phrases_invisible_to_taxonomy(self, taxonomy, cfg):
        from teamrec.evalharness import _COMMODITY, _NOISE_LEFT, _NOISE_RIGHT

        probes = [f"{a} {b}" for a in _NOISE_LEFT for b in _NOISE_RIGHT]
        probes += list(_COMMODITY)
        for text in probes:
            assert not map_to_codes(skill(text), taxonomy, cfg.t_m2)

    def test_validation(self):
        with pytest.raises(ValueError):
            SyntheticCorpusSpec(n_calls=0)
        with pytest.raises(ValueError):
            SyntheticCorpusSpec(overlap_ratio=1.5)


class TestEvaluate:
    def test_row_shape(self, taxonomy):
        corpus = synthesize_corpus(small_spec(), taxonomy)
        cfg = EngineConfig(bandit_min_leaf=2)
        rows = evaluate(corpus, taxonomy, cfg=cfg)
        assert [r.method for r in rows] == ["M0", "M1", "M2", "M3"]
        for row in rows:
            assert 0.0 <= row.avg_quality_mean <= 1.0
            assert 0.0 <= row.avg_volume <= 10.0

    def test_degenerate_corpus_m1_equals_m2(self, taxonomy, cfg):
        # every researcher holds exactly the one demanded concept name:
        # string and taxonomy matchers produce identical holder sets
        call = Call("C", "t", "", skillset("boosting"))
        researchers = tuple(
            Researcher(f"R{i}", "r", skillset("boosting")) for i in range(4)
        )
        corpus = Corpus(calls=(call,), researchers=researchers)
        rows = evaluate(corpus, taxonomy, cfg=cfg, methods=(M1, M2))
        by_method = {r.method: r for r in rows}
        assert by_method["M1"].avg_quality_mean == pytest.approx(
            by_method["M2"].avg_quality_mean
        )
        assert by_method["M1"].avg_volume == pytest.approx(by_method["M2"].avg_volume)

    def test_nonparticipants_count_zero_volume(self, taxonomy, cfg):
        call = Call("C", "t", "", skillset("boosting"))
        corpus = Corpus(
            calls=(call,),
            researchers=(
                Researcher("R1", "r", skillset("boosting")),
                Researcher("R2", "r", skillset("boosting")),
                Researcher("R3", "r", skillset("folk yodeling")),
            ),
        )
        rows = evaluate(corpus, taxonomy, cfg=cfg, methods=(M1,))
        # R3 is in no team: volume average pulled down by its zero
        assert rows[0].avg_volume == pytest.approx((1 + 1 + 0) / 3)

    def test_determinism(self, taxonomy):
        corpus = synthesize_corpus(small_spec(), taxonomy)
        cfg = EngineConfig(bandit_min_leaf=2, rng_seed=9)
        a = evaluate(corpus, taxonomy, cfg=cfg)
        b = evaluate(corpus, taxonomy, cfg=cfg)
        assert a == b


class TestReport:
    def test_csv_row_format(self):
        rows = [EvalRow("M0", 0.0879, 0.029, 10.0)]
        text = report(rows, "csv")
        assert text.splitlines()[0] == "method,quality_mean,quality_std,volume"
        assert text.splitlines()[1] == "M0,0.0879,0.0290,10"

    def test_markdown_shape(self):
        rows = [EvalRow(m, 0.1, 0.01, 2.5) for m in ("M0", "M1", "M2", "M3")]
        text = report(rows, "markdown")
        lines = text.splitlines()
        assert len(lines) == 6  # header + separator + 4 body rows
        assert lines[0].startswith("| Method |")

    def test_empty_rows_rejected(self):
        with pytest.raises(ValueError):
            report([], "csv")

    def test_unknown_format_rejected(self):
        with pytest.raises(ValueError):
            report([EvalRow("M0", 0, 0, 0)], "yaml")
