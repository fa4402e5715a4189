"""Command-line interface.

Subcommands: gen-synthetic, ingest, build-index, score, recommend,
whatif, simulate, serve. Global flags --config and --seed apply to every
subcommand.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import PipelineConfig
from .corpus import build_index, load_index, persist_index, read_vectors
from .errors import ConfigError, CorruptionError, GroundingError, ParseError, SchemaError
from .hei import DEFAULT_STANDARDS, load_standards, score_user
from .ingest import (
    apply_quality_filter,
    gen_synthetic_foods,
    gen_synthetic_population,
    link_and_average,
    parse_food_rows,
    read_persons_csv,
    write_foods_csv,
    write_persons_csv,
)
from .service import ServiceConfig, ServiceState, build_recommendation_payload, serve


def _load_cfg(args) -> PipelineConfig:
    return PipelineConfig.from_file(args.config) if args.config else PipelineConfig()


def _load_standards(args):
    return load_standards(args.standards) if getattr(args, "standards", None) \
        else DEFAULT_STANDARDS


def _load_users(path, standards):
    days, profiles = read_persons_csv(path)
    users, link_report = link_and_average(days, profiles)
    kept, filter_report = apply_quality_filter(users)
    return kept, link_report, filter_report


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, sort_keys=True, indent=2)
    sys.stdout.write("\n")


def cmd_gen_synthetic(args) -> int:
    users = gen_synthetic_population(args.seed, args.n)
    write_persons_csv(args.out, users)
    summary = {"persons": args.out, "n": args.n, "seed": args.seed}
    if args.foods_out:
        foods = gen_synthetic_foods(args.seed, args.n_foods)
        write_foods_csv(args.foods_out, foods)
        summary["foods"] = args.foods_out
        summary["n_foods"] = args.n_foods
    _emit(summary)
    return 0


def cmd_ingest(args) -> int:
    kept, link_report, filter_report = _load_users(args.persons, None)
    if args.out:
        write_persons_csv(args.out, kept)
    report = {
        "linked": link_report.linked,
        "dropped_missing_profile": link_report.dropped_missing_profile,
        "kept": filter_report.kept,
        "excluded_by_reason": filter_report.excluded_by_reason,
    }
    if args.report:
        Path(args.report).write_text(json.dumps(report, sort_keys=True, indent=2) + "\n",
                                     encoding="utf-8")
    _emit(report)
    return 0


def cmd_build_index(args) -> int:
    cfg = _load_cfg(args)
    items = parse_food_rows(args.foods)
    dim = args.dim or cfg.dim
    external = None
    if args.embeddings:
        external = read_vectors(args.embeddings)
        dim = external.shape[1] if args.dim is None else dim
    index = build_index(items, scheme=cfg.scheme, dim=dim, external_vectors=external)
    persist_index(index, args.out)
    _emit({"out": args.out, "items": len(index), "dim": index.dim,
           "scheme": index.scheme_id})
    return 0


def cmd_score(args) -> int:
    standards = _load_standards(args)
    kept, _, _ = _load_users(args.persons, standards)
    by_seqn = {u.seqn: u for u in kept}
    if args.seqn not in by_seqn:
        print(f"error: no user with seqn {args.seqn} after filtering", file=sys.stderr)
        return 2
    payload = score_user(by_seqn[args.seqn], standards).as_dict()
    payload["seqn"] = args.seqn
    _emit(payload)
    return 0


def _state_for(args, standards) -> ServiceState:
    cfg = _load_cfg(args)
    index = load_index(args.index)
    kept, _, _ = _load_users(args.persons, standards)
    return ServiceState(cfg=cfg, index=index, standards=standards,
                        users={u.seqn: u for u in kept}, append_path=None)


def cmd_recommend(args) -> int:
    standards = _load_standards(args)
    state = _state_for(args, standards)
    if args.seqn not in state.users:
        print(f"error: no user with seqn {args.seqn} after filtering", file=sys.stderr)
        return 2
    _emit(build_recommendation_payload(state.users[args.seqn], state, args.k))
    return 0


def cmd_whatif(args) -> int:
    from .service import whatif_response

    standards = _load_standards(args)
    state = _state_for(args, standards)
    if args.seqn not in state.users:
        print(f"error: no user with seqn {args.seqn} after filtering", file=sys.stderr)
        return 2
    payload = whatif_response(state, state.users[args.seqn].intake, args.food_code,
                              args.portion, args.mode.upper(), args.swap_base)
    _emit(payload)
    return 0


def cmd_simulate(args) -> int:
    from .evaluation import evaluate_population
    from .report import format_quantile_table, write_report_bundle

    cfg = _load_cfg(args)
    standards = _load_standards(args)
    index = load_index(args.index)
    kept, _, _ = _load_users(args.persons, standards)
    report, outcomes = evaluate_population(kept, index, cfg, args.seed, standards,
                                           ratio=args.ratio)
    paths = write_report_bundle(report, outcomes, args.out)
    sys.stdout.write(format_quantile_table(report))
    _emit({
        "n_test": report.n_test,
        "mean_delta": report.mean_delta,
        "sd_delta": report.sd_delta,
        "p_before": report.p_before,
        "p_after": report.p_after,
        "artifacts": {k: str(v) for k, v in paths.items()},
    })
    return 0


def cmd_serve(args) -> int:
    serve(ServiceConfig(
        persons_path=args.persons,
        index_dir=args.index,
        config_path=args.config,
        standards_path=args.standards,
        host=args.host,
        port=args.port,
        llm_enabled=args.llm,
        app_dir=args.app_dir,
    ))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heirec",
                                     description="Diet-quality recommendation toolkit")
    parser.add_argument("--config", help="pipeline config JSON", default=None)
    parser.add_argument("--seed", type=int, default=42, help="random seed")
    # accept the global flags after the subcommand too
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=lambda **kw:
                                argparse.ArgumentParser(parents=[common], **kw))

    p = sub.add_parser("gen-synthetic", help="write a deterministic synthetic population")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True, help="persons.csv output path")
    p.add_argument("--foods-out", default=None, help="also write a synthetic foods.csv")
    p.add_argument("--n-foods", type=int, default=200)
    p.set_defaults(func=cmd_gen_synthetic)

    p = sub.add_parser("ingest", help="parse, link, filter a persons file")
    p.add_argument("--persons", required=True)
    p.add_argument("--out", default=None, help="write kept records back to CSV")
    p.add_argument("--report", default=None, help="write the drop/filter report JSON")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("build-index", help="embed a foods file into a searchable index")
    p.add_argument("--foods", required=True)
    p.add_argument("--out", required=True, help="index output directory")
    p.add_argument("--embeddings", default=None, help="external vectors.bin to adopt")
    p.add_argument("--dim", type=int, default=None)
    p.set_defaults(func=cmd_build_index)

    p = sub.add_parser("score", help="print a user's diet-quality score")
    p.add_argument("--persons", required=True)
    p.add_argument("--seqn", type=int, required=True)
    p.add_argument("--standards", default=None)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("recommend", help="print the recommendation payload for a user")
    p.add_argument("--persons", required=True)
    p.add_argument("--index", required=True)
    p.add_argument("--seqn", type=int, required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--standards", default=None)
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("whatif", help="project one modification for a user")
    p.add_argument("--persons", required=True)
    p.add_argument("--index", required=True)
    p.add_argument("--seqn", type=int, required=True)
    p.add_argument("--food-code", type=int, required=True)
    p.add_argument("--portion", type=float, default=1.0)
    p.add_argument("--mode", default="ADD", choices=["ADD", "SWAP", "add", "swap"])
    p.add_argument("--swap-base", type=int, default=None)
    p.add_argument("--standards", default=None)
    p.set_defaults(func=cmd_whatif)

    p = sub.add_parser("simulate", help="run the offline evaluation and write reports")
    p.add_argument("--persons", required=True)
    p.add_argument("--index", required=True)
    p.add_argument("--out", required=True, help="report JSON path")
    p.add_argument("--ratio", type=float, default=None)
    p.add_argument("--standards", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="run the HTTP gateway")
    p.add_argument("--persons", required=True)
    p.add_argument("--index", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--llm", action="store_true", help="enable model explanations")
    p.add_argument("--app-dir", default=None, help="static frontend build to mount at /app")
    p.add_argument("--standards", default=None)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, SchemaError, CorruptionError, ConfigError, GroundingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
