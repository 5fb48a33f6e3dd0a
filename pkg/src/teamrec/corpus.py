"""Data model for calls, researchers and skills, plus corpus load/persist.

A corpus is loaded from two JSON files (calls, researchers), validated, and
frozen. Records that fail validation are skipped and reported in the load
report; duplicate ids abort the load because they would poison every
downstream id reference.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from .errors import CorpusLoadError, EmptySkillError, ValidationError


def _is_word_char(ch: str) -> bool:
    # combining marks (Mn/Mc/Me) must survive or Indic scripts fall apart
    return ch.isalnum() or unicodedata.category(ch).startswith("M")


def _normalize_text(raw: str) -> str:
    """Lowercase, replace punctuation with spaces, collapse whitespace.

    Code-point-level lowercasing only; non-ASCII letters survive untouched.
    """
    lowered = raw.lower()
    cleaned = "".join(ch if _is_word_char(ch) else " " for ch in lowered)
    return " ".join(cleaned.split())


@dataclass(frozen=True)
class Skill:
    """A normalized skill phrase. `tokens` joined by single spaces equals `text`."""

    text: str
    tokens: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.text or self.text != self.text.strip():
            raise ValueError(f"skill text must be non-empty and trimmed: {self.text!r}")
        if " ".join(self.tokens) != self.text:
            raise ValueError(f"tokens {self.tokens!r} do not reproduce text {self.text!r}")


def normalize_skill(raw: str) -> Skill:
    """Build a Skill from arbitrary text. Raises EmptySkillError if nothing survives."""
    text = _normalize_text(raw)
    if not text:
        raise EmptySkillError(f"phrase normalizes to empty string: {raw!r}")
    return Skill(text=text, tokens=tuple(text.split()))


@dataclass(frozen=True)
class Call:
    """One call for proposals with its demanded skill set."""

    id: str
    title: str
    synopsis: str
    demanded_skills: frozenset[Skill]
    source: str = ""


@dataclass(frozen=True)
class Researcher:
    """One researcher profile with its interest set."""

    id: str
    name: str
    interests: frozenset[Skill]
    profile_urls: tuple[str, ...] = ()


@dataclass(frozen=True)
class LoadDiagnostic:
    """One skipped record: what it was and why it was rejected."""

    kind: str  # "call" | "researcher"
    record_id: str | None
    reason: str


@dataclass(frozen=True, eq=False)
class Corpus:
    """Immutable snapshot of calls and researchers. Safe to share across threads."""

    calls: tuple[Call, ...]
    researchers: tuple[Researcher, ...]
    load_report: tuple[LoadDiagnostic, ...] = ()

    @cached_property
    def _calls_by_id(self) -> dict[str, Call]:
        return {c.id: c for c in self.calls}

    @cached_property
    def _researchers_by_id(self) -> dict[str, Researcher]:
        return {r.id: r for r in self.researchers}

    def get_call(self, call_id: str) -> Call | None:
        return self._calls_by_id.get(call_id)

    def get_researcher(self, researcher_id: str) -> Researcher | None:
        return self._researchers_by_id.get(researcher_id)


def _read_json_array(path: Path, what: str) -> list:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusLoadError(f"cannot read {what} file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusLoadError(
            f"{path}:{exc.lineno}:{exc.colno}: malformed JSON in {what} file: {exc.msg}"
        ) from exc
    if not isinstance(data, list):
        raise CorpusLoadError(f"{path}: {what} file must be a JSON array")
    return data


def _normalize_phrases(raw_phrases: list) -> frozenset[Skill]:
    skills = set()
    for raw in raw_phrases:
        if not isinstance(raw, str):
            continue
        try:
            skills.add(normalize_skill(raw))
        except EmptySkillError:
            continue
    return frozenset(skills)


def load_corpus(
    calls_path: str | Path,
    researchers_path: str | Path,
    *,
    stopwords=None,
    max_phrase_len: int = 3,
) -> Corpus:
    """Load and validate a corpus from the two JSON files.

    Calls without a pre-extracted "skills" list get their demanded skills
    extracted from title+synopsis. Records missing mandatory fields or
    yielding zero skills are skipped into the load report. Duplicate ids
    raise ValidationError.
    """
    from . import skills as skills_mod

    if stopwords is None:
        stopwords = skills_mod.load_default_stopwords()

    raw_calls = _read_json_array(Path(calls_path), "calls")
    raw_researchers = _read_json_array(Path(researchers_path), "researchers")

    report: list[LoadDiagnostic] = []

    calls: list[Call] = []
    seen_call_ids: set[str] = set()
    for entry in raw_calls:
        if not isinstance(entry, dict):
            report.append(LoadDiagnostic("call", None, "entry is not a JSON object"))
            continue
        call_id = entry.get("id")
        if not isinstance(call_id, str) or not call_id:
            report.append(LoadDiagnostic("call", None, "missing or invalid 'id'"))
            continue
        if call_id in seen_call_ids:
            raise ValidationError(f"duplicate call id {call_id!r}")
        seen_call_ids.add(call_id)
        title = entry.get("title")
        synopsis = entry.get("synopsis")
        if not isinstance(title, str) or not isinstance(synopsis, str):
            report.append(LoadDiagnostic("call", call_id, "missing 'title' or 'synopsis'"))
            continue
        if "skills" in entry:
            if not isinstance(entry["skills"], list):
                report.append(LoadDiagnostic("call", call_id, "'skills' is not a list"))
                continue
            demanded = _normalize_phrases(entry["skills"])
        else:
            demanded = frozenset(
                skills_mod.extract_skills(title, synopsis, stopwords, max_phrase_len)
            )
        if not demanded:
            report.append(LoadDiagnostic("call", call_id, "no demanded skills after extraction"))
            continue
        source = entry.get("source") if isinstance(entry.get("source"), str) else ""
        calls.append(Call(call_id, title, synopsis, demanded, source))

    researchers: list[Researcher] = []
    seen_res_ids: set[str] = set()
    for entry in raw_researchers:
        if not isinstance(entry, dict):
            report.append(LoadDiagnostic("researcher", None, "entry is not a JSON object"))
            continue
        res_id = entry.get("id")
        if not isinstance(res_id, str) or not res_id:
            report.append(LoadDiagnostic("researcher", None, "missing or invalid 'id'"))
            continue
        if res_id in seen_res_ids:
            raise ValidationError(f"duplicate researcher id {res_id!r}")
        seen_res_ids.add(res_id)
        name = entry.get("name")
        raw_interests = entry.get("interests")
        if not isinstance(name, str) or not isinstance(raw_interests, list):
            report.append(LoadDiagnostic("researcher", res_id, "missing 'name' or 'interests'"))
            continue
        interests = _normalize_phrases(raw_interests)
        if not interests:
            report.append(LoadDiagnostic("researcher", res_id, "no usable interests"))
            continue
        urls = entry.get("profile_urls")
        profile_urls = tuple(u for u in urls if isinstance(u, str)) if isinstance(urls, list) else ()
        researchers.append(Researcher(res_id, name, interests, profile_urls))

    return Corpus(tuple(calls), tuple(researchers), tuple(report))


def save_corpus(corpus: Corpus, out_dir: str | Path) -> None:
    """Write a normalized snapshot: calls.json, researchers.json, report.json.

    Output is deterministic (sorted skill lists, fixed key order) so two
    saves of the same corpus are byte-identical.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    calls = [
        {
            "id": c.id,
            "title": c.title,
            "synopsis": c.synopsis,
            "skills": sorted(s.text for s in c.demanded_skills),
            "source": c.source,
        }
        for c in corpus.calls
    ]
    researchers = [
        {
            "id": r.id,
            "name": r.name,
            "interests": sorted(s.text for s in r.interests),
            "profile_urls": list(r.profile_urls),
        }
        for r in corpus.researchers
    ]
    report = [
        {"kind": d.kind, "record_id": d.record_id, "reason": d.reason}
        for d in corpus.load_report
    ]
    for name, payload in (
        ("calls.json", calls),
        ("researchers.json", researchers),
        ("report.json", report),
    ):
        (out / name).write_text(
            json.dumps(payload, indent=2, ensure_ascii=False, sort_keys=True) + "\n",
            encoding="utf-8",
        )
