"""Poly-hierarchical concept taxonomy and the skill -> classification-code mapping.

Two skills that never match string-wise can still land in the same subtree
(e.g. two specialties sharing a parent discipline); overlap is decided on
ancestor-expanded code sets. The bundled taxonomy is a CCS-derived subset
shipped as a versioned data file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .corpus import Skill
from .errors import ValidationError
from .skills import ngrams, similarity

MAX_CODE_NGRAM = 3


@dataclass(frozen=True)
class Concept:
    code: str
    name: str
    parents: tuple[str, ...]
    depth: int  # min distance from any root


@dataclass(frozen=True)
class CodeSet:
    """A set of classification codes (delta-mapping output)."""

    codes: frozenset[str]

    def __bool__(self) -> bool:
        return bool(self.codes)

    def __or__(self, other: "CodeSet") -> "CodeSet":
        return CodeSet(self.codes | other.codes)


EMPTY_CODESET = CodeSet(frozenset())


@dataclass(eq=False)
class Taxonomy:
    """Immutable after load; the caches tolerate concurrent idempotent writes."""

    concepts: dict[str, Concept]
    _delta_cache: dict[tuple[str, float], CodeSet] = field(default_factory=dict, repr=False)
    _ancestor_cache: dict[str, frozenset[str]] = field(default_factory=dict, repr=False)
    _expand_cache: dict[tuple[frozenset, int], "CodeSet"] = field(default_factory=dict, repr=False)

    def concept(self, code: str) -> Concept:
        try:
            return self.concepts[code]
        except KeyError:
            raise ValidationError(f"unknown taxonomy code {code!r}") from None

    def ancestors(self, code: str) -> frozenset[str]:
        """Transitive closure over parent links, excluding the code itself."""
        cached = self._ancestor_cache.get(code)
        if cached is not None:
            return cached
        seen: set[str] = set()
        stack = list(self.concept(code).parents)
        while stack:
            current = stack.pop()
            if current in seen:
                continue
            seen.add(current)
            stack.extend(self.concepts[current].parents)
        result = frozenset(seen)
        self._ancestor_cache[code] = result
        return result

    @property
    def max_depth(self) -> int:
        return max(c.depth for c in self.concepts.values())


def _compute_depths(parents_by_code: dict[str, tuple[str, ...]]) -> dict[str, int]:
    depths: dict[str, int] = {}
    in_progress: set[str] = set()

    def depth_of(code: str) -> int:
        if code in depths:
            return depths[code]
        if code in in_progress:
            raise ValidationError(f"taxonomy cycle detected through code {code!r}")
        in_progress.add(code)
        parents = parents_by_code[code]
        depths[code] = 0 if not parents else 1 + min(depth_of(p) for p in parents)
        in_progress.discard(code)
        return depths[code]

    for code in parents_by_code:
        depth_of(code)
    return depths


def _build_taxonomy(entries: list, origin: str) -> Taxonomy:
    parents_by_code: dict[str, tuple[str, ...]] = {}
    names: dict[str, str] = {}
    for entry in entries:
        if not isinstance(entry, dict):
            raise ValidationError(f"{origin}: taxonomy entry is not an object")
        code, name, parents = entry.get("code"), entry.get("name"), entry.get("parents", [])
        if not isinstance(code, str) or not isinstance(name, str) or not isinstance(parents, list):
            raise ValidationError(f"{origin}: bad taxonomy entry {entry!r}")
        if code in parents_by_code:
            raise ValidationError(f"{origin}: duplicate taxonomy code {code!r}")
        parents_by_code[code] = tuple(parents)
        names[code] = name

    for code, parents in parents_by_code.items():
        for parent in parents:
            if parent not in parents_by_code:
                raise ValidationError(f"{origin}: code {code!r} has dangling parent {parent!r}")

    depths = _compute_depths(parents_by_code)
    concepts = {
        code: Concept(code=code, name=names[code], parents=parents_by_code[code], depth=depths[code])
        for code in parents_by_code
    }
    return Taxonomy(concepts=concepts)


def load_taxonomy(path: str | Path) -> Taxonomy:
    """Load and fully link a taxonomy file; cycles and dangling parents are fatal."""
    p = Path(path)
    try:
        entries = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{p}:{exc.lineno}:{exc.colno}: malformed taxonomy JSON: {exc.msg}") from exc
    if not isinstance(entries, list):
        raise ValidationError(f"{p}: taxonomy file must be a JSON array")
    return _build_taxonomy(entries, str(p))


def load_default_taxonomy() -> Taxonomy:
    ref = resources.files("teamrec.data").joinpath("taxonomy.json")
    return _build_taxonomy(json.loads(ref.read_text(encoding="utf-8")), "bundled taxonomy")


def map_to_codes(skill: Skill, tax: Taxonomy, threshold: float) -> CodeSet:
    """delta: codes of all concepts whose name matches any 1..3-gram of the skill.

    Cached per (skill text, threshold): the matchers call this for every
    researcher x call pair.
    """
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    key = (skill.text, threshold)
    cached = tax._delta_cache.get(key)
    if cached is not None:
        return cached

    grams: list[str] = []
    for n in range(1, MAX_CODE_NGRAM + 1):
        grams.extend(ngrams(skill.tokens, n))
    if len(skill.tokens) > MAX_CODE_NGRAM:
        # long phrases must still hit concepts they equal verbatim
        grams.append(skill.text)
    matched = {
        concept.code
        for concept in tax.concepts.values()
        for gram in grams
        if similarity(gram, concept.name) >= threshold
    }
    result = CodeSet(frozenset(matched))
    tax._delta_cache[key] = result
    return result


def map_profile_to_codes(skills, tax: Taxonomy, threshold: float) -> CodeSet:
    """delta over a whole skill set: union of per-skill code sets."""
    codes: frozenset[str] = frozenset()
    for skill in skills:
        codes |= map_to_codes(skill, tax, threshold).codes
    return CodeSet(codes)


def expand_codes(codes: CodeSet, tax: Taxonomy, min_depth: int = 1) -> CodeSet:
    """Input codes plus all their ancestors, filtered to depth >= min_depth.

    Roots (depth 0) drop out at the default min_depth of 1 so that overlap
    at the very top of the tree never counts as a semantic match.
    """
    if min_depth < 0:
        raise ValueError(f"min_depth must be >= 0, got {min_depth}")
    key = (codes.codes, min_depth)
    cached = tax._expand_cache.get(key)
    if cached is not None:
        return cached
    expanded: set[str] = set()
    for code in codes.codes:
        concept = tax.concept(code)
        if concept.depth >= min_depth:
            expanded.add(code)
        expanded.update(
            anc for anc in tax.ancestors(code) if tax.concepts[anc].depth >= min_depth
        )
    result = CodeSet(frozenset(expanded))
    tax._expand_cache[key] = result
    return result


def codes_overlap(a: CodeSet, b: CodeSet, tax: Taxonomy, min_depth: int = 1) -> bool:
    """True iff the ancestor-expanded code sets intersect."""
    ea = expand_codes(a, tax, min_depth)
    if not ea:
        return False
    eb = expand_codes(b, tax, min_depth)
    return bool(ea.codes & eb.codes)
