import json

import pytest

from teamrec.config import EngineConfig
from teamrec.corpus import Call, Corpus, Researcher, normalize_skill
from teamrec.taxonomy import load_default_taxonomy


def skill(text):
    return normalize_skill(text)


def skillset(*texts):
    return frozenset(normalize_skill(t) for t in texts)


@pytest.fixture(scope="session")
def taxonomy():
    return load_default_taxonomy()


@pytest.fixture()
def cfg():
    return EngineConfig()


@pytest.fixture()
def nlp_kr_corpus():
    """The motivating fixture: a call demanding natural language processing,
    one researcher interested in knowledge representation (taxonomy cousin),
    one in an unrelated craft."""
    call = Call(
        id="CALL-AI",
        title="language understanding systems",
        synopsis="",
        demanded_skills=skillset("natural language processing"),
    )
    return Corpus(
        calls=(call,),
        researchers=(
            Researcher("R-KR", "Kay Arr", skillset("knowledge representation")),
            Researcher("R-POT", "Pat Potter", skillset("alpine pottery")),
        ),
    )


@pytest.fixture()
def small_corpus():
    """Three calls, five researchers, concept-name vocabulary."""
    calls = (
        Call(
            "C-ML",
            "learning systems",
            "",
            skillset("supervised learning", "unsupervised learning", "boosting"),
        ),
        Call("C-SEC", "secure systems", "", skillset("authentication", "firewalls")),
        Call("C-AI", "ai planning", "", skillset("natural language processing")),
    )
    researchers = (
        Researcher("R-01", "Res One", skillset("supervised learning", "boosting")),
        Researcher("R-02", "Res Two", skillset("unsupervised learning")),
        Researcher("R-03", "Res Three", skillset("authentication", "firewalls")),
        Researcher("R-04", "Res Four", skillset("knowledge representation")),
        Researcher("R-05", "Res Five", skillset("folk weaving")),
    )
    return Corpus(calls=calls, researchers=researchers)


def write_corpus_files(tmp_path, calls, researchers):
    calls_path = tmp_path / "calls.json"
    researchers_path = tmp_path / "researchers.json"
    calls_path.write_text(json.dumps(calls), encoding="utf-8")
    researchers_path.write_text(json.dumps(researchers), encoding="utf-8")
    return calls_path, researchers_path


@pytest.fixture()
def corpus_files(tmp_path):
    calls = [
        {
            "id": "NSF-001",
            "title": "Machine learning for science",
            "synopsis": "calls for machine learning and data analytics research",
            "skills": ["machine learning", "data analytics"],
            "source": "unit-test",
        },
        {
            "id": "NSF-002",
            "title": "Secure distributed systems",
            "synopsis": "",
            "skills": ["authentication", "distributed algorithms"],
        },
    ]
    researchers = [
        {
            "id": "R-A",
            "name": "Ada Example",
            "interests": ["machine learning", "boosting"],
            "profile_urls": ["https://example.org/ada"],
        },
        {"id": "R-B", "name": "Ben Example", "interests": ["authentication"]},
        {"id": "R-C", "name": "Cal Example", "interests": ["data analytics"]},
    ]
    return write_corpus_files(tmp_path, calls, researchers)
