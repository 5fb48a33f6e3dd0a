"""HTTP API: recommendations for the three use cases plus feedback capture.

State is immutable after startup (corpus, taxonomy, model); only the
feedback and recommendation logs grow, append-only, serialized through a
single lock and fsynced before the request is acknowledged. Responses are
replayable: the same request against the same corpus+model+seed returns the
same team member sets.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .bandit import BanditModel, load_model, m3_bandit_teams, model_to_json
from .config import ServiceConfig
from .corpus import Corpus, Researcher, load_corpus, normalize_skill
from .errors import EmptySkillError, InsufficientSupplyError
from .methods import (
    M0,
    M1,
    M2,
    M3,
    METHODS,
    TeamSlate,
    m0_random_teams,
    m1_string_teams,
    m2_taxonomy_teams,
)
from .skills import skill_match
from .taxonomy import (
    Taxonomy,
    codes_overlap,
    load_default_taxonomy,
    load_taxonomy,
    map_profile_to_codes,
)

USE_CASE_BY_MODE = {"researcher": "UC1", "call": "UC2", "interest": "UC3"}
MAX_K = 50


@dataclass
class ServiceState:
    corpus: Corpus
    taxonomy: Taxonomy
    model: BanditModel | None
    cfg: ServiceConfig
    corpus_version: str
    model_version: str
    issued: dict[str, dict] = field(default_factory=dict)
    _write_lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def feedback_path(self) -> Path:
        return Path(self.cfg.feedback_log)

    @property
    def recommendations_path(self) -> Path:
        return Path(self.cfg.recommendations_log)


def _fingerprint(payload) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def build_state(cfg: ServiceConfig) -> ServiceState:
    corpus = load_corpus(cfg.calls_path, cfg.researchers_path)
    taxonomy = load_taxonomy(cfg.taxonomy_path) if cfg.taxonomy_path else load_default_taxonomy()
    model = load_model(cfg.model_path) if cfg.model_path else None
    corpus_version = _fingerprint(
        {
            "calls": [[c.id, sorted(s.text for s in c.demanded_skills)] for c in corpus.calls],
            "researchers": [
                [r.id, sorted(s.text for s in r.interests)] for r in corpus.researchers
            ],
        }
    )
    model_version = _fingerprint(model_to_json(model)) if model else "untrained"
    state = ServiceState(
        corpus=corpus,
        taxonomy=taxonomy,
        model=model,
        cfg=cfg,
        corpus_version=corpus_version,
        model_version=model_version,
    )
    _reload_issued(state)
    return state


def _reload_issued(state: ServiceState) -> None:
    if state.recommendations_path.exists():
        for line in state.recommendations_path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            state.issued[record["recommendation_id"]] = record


def _append_line(path: Path, record: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")
        fh.flush()
        os.fsync(fh.fileno())


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": code, "message": message})


def _slate_for(state: ServiceState, call, method: str) -> TeamSlate:
    cfg = state.cfg.engine
    if method == M0:
        return m0_random_teams(call, state.corpus, cfg)
    if method == M1:
        return m1_string_teams(call, state.corpus, cfg)
    if method == M2:
        return m2_taxonomy_teams(call, state.corpus, state.taxonomy, cfg)
    return m3_bandit_teams(call, state.corpus, state.taxonomy, state.model, cfg)


def _team_payload(state: ServiceState, team, breakdown) -> dict:
    members = [
        {"id": rid, "name": state.corpus.get_researcher(rid).name}
        for rid in team.member_ids
    ]
    return {
        "members": members,
        "goodness": breakdown.goodness,
        "metrics": {
            "redundancy": breakdown.redundancy,
            "set_size_norm": breakdown.set_size_norm,
            "coverage": breakdown.coverage,
            "k_robustness_norm": breakdown.k_robustness_norm,
            "k_robust": breakdown.k_robust,
        },
    }


def _call_summary(call) -> dict:
    return {"id": call.id, "title": call.title}


def _interest_matches_call(state: ServiceState, interest, call, method: str) -> bool:
    """Does the free-text interest reach this call under the method's matcher?

    M0 is skill-blind, so every call qualifies and ranking falls back to
    team goodness alone. M3 runs the one-skill synthetic profile through
    the trained model's candidate test.
    """
    cfg = state.cfg.engine
    if method == M0:
        return True
    if method == M1:
        return any(
            skill_match(s, frozenset([interest]), cfg.t_m1) is not None
            for s in call.demanded_skills
        )
    if method == M3:
        from .bandit import predict

        synthetic = Researcher(
            id=f"interest:{interest.text}", name=interest.text, interests=frozenset([interest])
        )
        return predict(state.model, synthetic, call, state.taxonomy, cfg) >= cfg.p_min
    profile = map_profile_to_codes([interest], state.taxonomy, cfg.t_m2)
    demand = map_profile_to_codes(call.demanded_skills, state.taxonomy, cfg.t_m2)
    return codes_overlap(demand, profile, state.taxonomy, cfg.min_depth)


def _recommend_uc2(state: ServiceState, call, method: str, k: int) -> list[dict]:
    slate = _slate_for(state, call, method)
    teams = [_team_payload(state, t, b) for t, b in slate.teams[:k]]
    return [{"call": _call_summary(call), "teams": teams}]


def _recommend_uc1(state: ServiceState, researcher: Researcher, method: str, k: int) -> list[dict]:
    """Rank calls by the best goodness among teams containing the researcher."""
    ranked: list[tuple[float, str, list]] = []
    for call in state.corpus.calls:
        slate = _slate_for(state, call, method)
        containing = [(t, b) for t, b in slate.teams if researcher.id in t.members]
        if containing:
            ranked.append((max(b.goodness for _, b in containing), call.id, containing))
    ranked.sort(key=lambda row: (-row[0], row[1]))
    return [
        {
            "call": _call_summary(state.corpus.get_call(call_id)),
            "teams": [_team_payload(state, t, b) for t, b in teams],
        }
        for _, call_id, teams in ranked[:k]
    ]


def _recommend_uc3(state: ServiceState, interest_text: str, method: str, k: int):
    try:
        interest = normalize_skill(interest_text)
    except EmptySkillError:
        return _error(404, "SUBJECT_NOT_FOUND", "interest text normalizes to nothing")
    ranked: list[tuple[float, str, list]] = []
    for call in state.corpus.calls:
        if not _interest_matches_call(state, interest, call, method):
            continue
        slate = _slate_for(state, call, method)
        best = slate.teams[0][1].goodness if slate.teams else 0.0
        ranked.append((best, call.id, list(slate.teams)))
    ranked.sort(key=lambda row: (-row[0], row[1]))
    return [
        {
            "call": _call_summary(state.corpus.get_call(call_id)),
            "teams": [_team_payload(state, t, b) for t, b in teams],
        }
        for _, call_id, teams in ranked[:k]
    ]


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="teamrec", version="0.1.0")
    origins = [o.strip() for o in state.cfg.cors_origins.split(",") if o.strip()]
    app.add_middleware(
        CORSMiddleware,
        allow_origins=origins or ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.engine = state

    @app.get("/calls")
    def list_calls(limit: int = 100, offset: int = 0):
        items = [_call_summary(c) for c in state.corpus.calls[offset : offset + limit]]
        next_offset = offset + limit if offset + limit < len(state.corpus.calls) else None
        return {"items": items, "total": len(state.corpus.calls), "next_offset": next_offset}

    @app.get("/researchers")
    def list_researchers(limit: int = 100, offset: int = 0):
        items = [
            {"id": r.id, "name": r.name}
            for r in state.corpus.researchers[offset : offset + limit]
        ]
        total = len(state.corpus.researchers)
        next_offset = offset + limit if offset + limit < total else None
        return {"items": items, "total": total, "next_offset": next_offset}

    @app.post("/recommend")
    async def recommend(request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return _error(400, "BODY_INVALID", "request body is not valid JSON")
        mode = body.get("mode")
        subject = body.get("subject")
        method = body.get("method")
        k = body.get("k", 10)
        if mode not in USE_CASE_BY_MODE:
            return _error(400, "MODE_INVALID", f"mode must be one of {sorted(USE_CASE_BY_MODE)}")
        if method not in METHODS:
            return _error(400, "METHOD_INVALID", f"method must be one of {list(METHODS)}")
        if not isinstance(k, int) or not 1 <= k <= MAX_K:
            return _error(400, "K_INVALID", f"k must be an integer in [1, {MAX_K}]")
        if not isinstance(subject, str) or not subject:
            return _error(400, "SUBJECT_INVALID", "subject must be a non-empty string")
        if method == M3 and state.model is None:
            return _error(409, "MODEL_NOT_TRAINED", "train a model before requesting M3")

        try:
            if mode == "call":
                call = state.corpus.get_call(subject)
                if call is None:
                    return _error(404, "SUBJECT_NOT_FOUND", f"unknown call id {subject!r}")
                slates = _recommend_uc2(state, call, method, k)
            elif mode == "researcher":
                researcher = state.corpus.get_researcher(subject)
                if researcher is None:
                    return _error(404, "SUBJECT_NOT_FOUND", f"unknown researcher id {subject!r}")
                slates = _recommend_uc1(state, researcher, method, k)
            else:
                slates = _recommend_uc3(state, subject, method, k)
                if isinstance(slates, JSONResponse):
                    return slates
        except InsufficientSupplyError as exc:
            return _error(409, "INSUFFICIENT_SUPPLY", str(exc))

        recommendation_id = _fingerprint(
            {
                "request": {"mode": mode, "subject": subject, "method": method, "k": k},
                "corpus": state.corpus_version,
                "model": state.model_version,
                "bucket": int(time.time() // 3600),
            }
        )
        with state._write_lock:
            if recommendation_id not in state.issued:
                record = {
                    "recommendation_id": recommendation_id,
                    "use_case": USE_CASE_BY_MODE[mode],
                    "method": method,
                    "issued_at": datetime.now(timezone.utc).isoformat(),
                }
                _append_line(state.recommendations_path, record)
                state.issued[recommendation_id] = record
        return {
            "recommendation_id": recommendation_id,
            "method": method,
            "mode": mode,
            "slates": slates,
            "generated_at": datetime.now(timezone.utc).isoformat(),
        }

    @app.post("/feedback")
    async def feedback(request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return _error(400, "BODY_INVALID", "request body is not valid JSON")
        rec_id = body.get("recommendation_id")
        relevance = body.get("relevance")
        usefulness = body.get("usefulness")
        comment = body.get("comment", "")
        if not isinstance(rec_id, str) or rec_id not in state.issued:
            return _error(404, "RECOMMENDATION_UNKNOWN", "no such recommendation_id issued")
        for name, value in (("relevance", relevance), ("usefulness", usefulness)):
            if not isinstance(value, int) or not 1 <= value <= 5:
                return _error(400, "LIKERT_OUT_OF_RANGE", f"{name} must be an integer in [1, 5]")
        if not isinstance(comment, str):
            return _error(400, "COMMENT_INVALID", "comment must be a string")
        record = {
            "recommendation_id": rec_id,
            "relevance": relevance,
            "usefulness": usefulness,
            "comment": comment,
            "submitted_at": datetime.now(timezone.utc).isoformat(),
        }
        with state._write_lock:
            _append_line(state.feedback_path, record)
        return {"status": "recorded"}

    @app.get("/feedback/summary")
    def feedback_summary():
        records = []
        if state.feedback_path.exists():
            for line in state.feedback_path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    records.append(json.loads(line))
        total = len(records)

        def pct(count: int) -> float:
            return round(100.0 * count / total, 2) if total else 0.0

        by_relevance = {str(level): 0 for level in range(1, 6)}
        by_usefulness = {str(level): 0 for level in range(1, 6)}
        cells: dict[tuple[str, str, int, int], int] = {}
        for record in records:
            by_relevance[str(record["relevance"])] += 1
            by_usefulness[str(record["usefulness"])] += 1
            issued = state.issued.get(record["recommendation_id"], {})
            key = (
                issued.get("use_case", "unknown"),
                issued.get("method", "unknown"),
                record["relevance"],
                record["usefulness"],
            )
            cells[key] = cells.get(key, 0) + 1

        relevant = by_relevance["4"] + by_relevance["5"]
        useful = by_usefulness["4"] + by_usefulness["5"]
        return {
            "total": total,
            "by_relevance": by_relevance,
            "by_usefulness": by_usefulness,
            "relevant_share_pct": pct(relevant),
            "useful_share_pct": pct(useful),
            "cells": [
                {
                    "use_case": use_case,
                    "method": method,
                    "relevance": relevance,
                    "usefulness": usefulness,
                    "count": count,
                    "pct": pct(count),
                }
                for (use_case, method, relevance, usefulness), count in sorted(cells.items())
            ],
        }

    if state.cfg.webui_dir:
        app.mount("/", StaticFiles(directory=state.cfg.webui_dir, html=True), name="webui")

    return app


def serve(cfg: ServiceConfig) -> None:
    """Blocking entry point used by the CLI `serve` subcommand."""
    import uvicorn

    app = create_app(build_state(cfg))
    uvicorn.run(app, host="0.0.0.0", port=cfg.port, log_level="info")
