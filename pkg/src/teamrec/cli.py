"""Single entry point: ingest / recommend / train / evaluate / serve.

Exit codes: 0 success, 1 config or validation, 2 subject not found,
3 training data, 4 I/O or parse. Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bandit, evalharness, service
from .config import ServiceConfig, load_config, with_engine
from .corpus import load_corpus, save_corpus
from .errors import (
    ConfigError,
    CorpusLoadError,
    EmptySkillError,
    InsufficientSupplyError,
    TrainingDataError,
    ValidationError,
)
from .methods import METHODS

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NOT_FOUND = 2
EXIT_TRAINING_DATA = 3
EXIT_IO = 4


class SubjectNotFound(Exception):
    pass


def _corpus_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--corpus", help="snapshot directory holding calls.json and researchers.json")
    sub.add_argument("--calls", help="calls JSON file (overrides --corpus and config)")
    sub.add_argument("--researchers", help="researchers JSON file (overrides --corpus and config)")


def _resolve_corpus_paths(args, cfg: ServiceConfig) -> tuple[str, str]:
    calls = args.calls
    researchers = args.researchers
    if args.corpus:
        calls = calls or str(Path(args.corpus) / "calls.json")
        researchers = researchers or str(Path(args.corpus) / "researchers.json")
    calls = calls or cfg.calls_path
    researchers = researchers or cfg.researchers_path
    if not calls or not researchers:
        raise ConfigError("corpus not specified: pass --corpus/--calls/--researchers or set config")
    return calls, researchers


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="teamrec",
        description="Recommend research teams for calls for proposals.",
    )
    parser.add_argument("--config", help="key = value config file (default: none)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="validate a corpus and write a normalized snapshot")
    p_ingest.add_argument("--calls", required=True, help="calls JSON file")
    p_ingest.add_argument("--researchers", required=True, help="researchers JSON file")
    p_ingest.add_argument("--out", required=True, help="output snapshot directory")

    p_rec = sub.add_parser("recommend", help="print ranked teams for a subject")
    _corpus_args(p_rec)
    p_rec.add_argument("--mode", required=True, choices=["researcher", "call", "interest"],
                       help="recommend by researcher id, call id, or free-text interest")
    p_rec.add_argument("--subject", required=True, help="researcher id, call id, or interest text")
    p_rec.add_argument("--method", required=True, choices=list(METHODS), help="teaming method")
    p_rec.add_argument("-k", type=int, default=10, help="max results (default 10)")
    p_rec.add_argument("--model", help="trained model JSON (required for M3)")
    p_rec.add_argument("--taxonomy", help="taxonomy JSON (default: bundled)")
    p_rec.add_argument("--seed", type=int, help="rng seed for M0 (default from config)")
    p_rec.add_argument("--json", action="store_true", help="emit machine-readable JSON")

    p_train = sub.add_parser("train", help="train the boosted-bandit model")
    _corpus_args(p_train)
    p_train.add_argument("--iterations", type=int, default=10, help="boosting iterations (default 10)")
    p_train.add_argument("--seed", type=int, default=0, help="rng seed (default 0)")
    p_train.add_argument("--out", required=True, help="output model JSON path")
    p_train.add_argument("--log", help="training log CSV path (default: <out>.log.csv)")
    p_train.add_argument("--taxonomy", help="taxonomy JSON (default: bundled)")

    p_eval = sub.add_parser("evaluate", help="quality-vs-volume table across all four methods")
    _corpus_args(p_eval)
    p_eval.add_argument("--synthetic", action="store_true", help="evaluate on a synthetic corpus")
    p_eval.add_argument("--seed", type=int, default=0, help="seed for synthesis and M0 (default 0)")
    p_eval.add_argument("--out", help="also write the table to this file")
    p_eval.add_argument("--format", choices=["csv", "markdown"], default="csv")
    p_eval.add_argument("--taxonomy", help="taxonomy JSON (default: bundled)")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--port", type=int, help="listen port (default from config, 8080)")
    _corpus_args(p_serve)
    p_serve.add_argument("--model", help="trained model JSON for M3")
    p_serve.add_argument("--taxonomy", help="taxonomy JSON (default: bundled)")
    p_serve.add_argument("--webui", help="static assets directory to serve at /")

    return parser


def _load_taxonomy(path: str | None):
    from .taxonomy import load_default_taxonomy, load_taxonomy

    return load_taxonomy(path) if path else load_default_taxonomy()


def cmd_ingest(args, cfg: ServiceConfig) -> int:
    corpus = load_corpus(args.calls, args.researchers)
    save_corpus(corpus, args.out)
    print(
        f"ingested {len(corpus.calls)} calls, {len(corpus.researchers)} researchers, "
        f"{len(corpus.load_report)} skipped -> {args.out}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_recommend(args, cfg: ServiceConfig) -> int:
    calls_path, researchers_path = _resolve_corpus_paths(args, cfg)
    engine_overrides = {}
    if args.seed is not None:
        engine_overrides["rng_seed"] = args.seed
    cfg = with_engine(cfg, **engine_overrides) if engine_overrides else cfg

    if args.method == "M3" and not (args.model or cfg.model_path):
        raise ConfigError("method M3 needs a trained model: pass --model")

    state_cfg = ServiceConfig(
        engine=cfg.engine,
        calls_path=calls_path,
        researchers_path=researchers_path,
        taxonomy_path=args.taxonomy or cfg.taxonomy_path,
        model_path=args.model or cfg.model_path,
    )
    state = service.build_state(state_cfg)

    if args.mode == "call":
        call = state.corpus.get_call(args.subject)
        if call is None:
            raise SubjectNotFound(f"unknown call id {args.subject!r}")
        slates = service._recommend_uc2(state, call, args.method, args.k)
    elif args.mode == "researcher":
        researcher = state.corpus.get_researcher(args.subject)
        if researcher is None:
            raise SubjectNotFound(f"unknown researcher id {args.subject!r}")
        slates = service._recommend_uc1(state, researcher, args.method, args.k)
    else:
        try:
            from .corpus import normalize_skill

            normalize_skill(args.subject)
        except EmptySkillError:
            raise SubjectNotFound(f"interest {args.subject!r} normalizes to nothing")
        slates = service._recommend_uc3(state, args.subject, args.method, args.k)

    if args.json:
        # content hash without a time bucket: reruns stay byte-identical
        recommendation_id = service._fingerprint(
            {
                "request": {"mode": args.mode, "subject": args.subject,
                            "method": args.method, "k": args.k},
                "corpus": state.corpus_version,
                "model": state.model_version,
            }
        )
        payload = {
            "recommendation_id": recommendation_id,
            "mode": args.mode,
            "subject": args.subject,
            "method": args.method,
            "k": args.k,
            "slates": slates,
        }
        print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
        return EXIT_OK

    if not slates:
        print("no teams found")
        return EXIT_OK
    for slate in slates:
        call = slate["call"]
        print(f"call {call['id']}: {call['title']}")
        for rank, team in enumerate(slate["teams"], 1):
            names = ", ".join(m["name"] for m in team["members"])
            m = team["metrics"]
            print(f"  #{rank} goodness={team['goodness']:.4f} [{names}]")
            print(
                f"      coverage={m['coverage']:.2f} robustness={m['k_robustness_norm']:.2f} "
                f"redundancy={m['redundancy']:.2f} set_size={m['set_size_norm']:.2f}"
            )
    return EXIT_OK


def cmd_train(args, cfg: ServiceConfig) -> int:
    calls_path, researchers_path = _resolve_corpus_paths(args, cfg)
    corpus = load_corpus(calls_path, researchers_path)
    tax = _load_taxonomy(args.taxonomy or cfg.taxonomy_path)
    engine = with_engine(cfg, bandit_iterations=args.iterations, rng_seed=args.seed).engine
    result = bandit.train(corpus, tax, engine)
    bandit.save_model(result.model, args.out)
    log_path = args.log or f"{args.out}.log.csv"
    bandit.save_training_log(result.log, log_path)
    final_nll = result.log[-1][1]
    print(
        f"trained {len(result.model.trees)} trees on {result.log[-1][2]} examples, "
        f"final nll {final_nll:.4f} -> {args.out}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_evaluate(args, cfg: ServiceConfig) -> int:
    tax = _load_taxonomy(args.taxonomy or cfg.taxonomy_path)
    if args.synthetic:
        spec = evalharness.SyntheticCorpusSpec(seed=args.seed)
        corpus = evalharness.synthesize_corpus(spec, tax)
    else:
        calls_path, researchers_path = _resolve_corpus_paths(args, cfg)
        corpus = load_corpus(calls_path, researchers_path)
    engine = with_engine(cfg, rng_seed=args.seed).engine
    rows = evalharness.evaluate(corpus, tax, model=None, cfg=engine)
    table = evalharness.report(rows, args.format)
    sys.stdout.write(table)
    if args.out:
        Path(args.out).write_text(table, encoding="utf-8")
    return EXIT_OK


def cmd_serve(args, cfg: ServiceConfig) -> int:
    overrides = {}
    if args.port is not None:
        overrides["port"] = args.port
    if args.model:
        overrides["model_path"] = args.model
    if args.taxonomy:
        overrides["taxonomy_path"] = args.taxonomy
    if args.webui:
        overrides["webui_dir"] = args.webui
    calls_path, researchers_path = _resolve_corpus_paths(args, cfg)
    overrides["calls_path"] = calls_path
    overrides["researchers_path"] = researchers_path
    from dataclasses import replace

    service.serve(replace(cfg, **overrides))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else load_config()
        handler = {
            "ingest": cmd_ingest,
            "recommend": cmd_recommend,
            "train": cmd_train,
            "evaluate": cmd_evaluate,
            "serve": cmd_serve,
        }[args.command]
        return handler(args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SubjectNotFound as exc:
        print(f"not found: {exc}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except (TrainingDataError, InsufficientSupplyError) as exc:
        print(f"training data error: {exc}", file=sys.stderr)
        return EXIT_TRAINING_DATA
    except (CorpusLoadError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
