"""``eedp`` command line.

Exit codes: 0 success, 2 usage/config error, 3 input/output error,
4 endpoint failures (the run still completes and records them).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import benchmark as bench
from .compress import compress, render
from .config import ConfigError, RunConfig
from .dag import build_eedp_dag, endpoints
from .flatten import FlattenOptions, Method, flatten
from .graph import GraphError, load_dataset, load_graph, save_graph_collection
from .harness.clients import make_client
from .harness.report import aggregate
from .harness.runner import load_records, latest_records, run_eval
from .harness.tokens import get_tokenizer
from .paths import extract_paths
from .synth import generate_merged_like

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_ENDPOINT = 0, 2, 3, 4

log = logging.getLogger("eedp")


def _emit(args, payload: dict, text: str | None = None) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    elif text is not None:
        print(text)


def cmd_flatten(args) -> int:
    g = load_graph(args.graph)
    method = Method.parse(args.method)
    opts = FlattenOptions(compress_paths=args.compress, start=args.start, seed=args.seed)
    flat = flatten(g, method, opts, get_tokenizer(args.tokenizer))
    stats = {"method": method.value, "token_count": flat.token_count, "compressed": flat.compressed,
             "chars": len(flat.text), **flat.stats}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        stem = f"{Path(args.graph).stem}.{method.value}"
        (out / f"{stem}.txt").write_text(flat.text + "\n", encoding="utf-8")
        (out / f"{stem}.stats.json").write_text(json.dumps(stats, indent=2, sort_keys=True) + "\n")
    _emit(args, {"text": flat.text, "stats": stats}, flat.text)
    return EXIT_OK


def cmd_dag(args) -> int:
    g = load_graph(args.graph)
    dag = build_eedp_dag(g, args.start)
    ends = endpoints(dag)
    doc = dag.to_dict()
    doc["endpoints"] = {"sources": sorted(ends.sources), "sinks": sorted(ends.sinks)}
    if args.out:
        Path(args.out).write_text(json.dumps(doc) + "\n")
    _emit(args, doc, json.dumps(doc))
    return EXIT_OK


def cmd_paths(args) -> int:
    g = load_graph(args.graph)
    bundle = extract_paths(g, endpoints(build_eedp_dag(g, args.start)))
    doc = bundle.to_dict()
    if args.out:
        Path(args.out).write_text(json.dumps(doc) + "\n")
    _emit(args, doc, json.dumps(doc))
    return EXIT_OK


def cmd_compress(args) -> int:
    g = load_graph(args.graph)
    bundle = extract_paths(g, endpoints(build_eedp_dag(g, args.start)))
    trees = {pair: compress(paths) for pair, paths in bundle.groups.items()}
    lines = [render(t) for t in trees.values()]
    doc = {"pairs": [{"start": a, "end": b, "tree": t.to_dict(), "text": render(t)}
                     for (a, b), t in trees.items()]}
    if args.out:
        Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


def _config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    flags = {k: getattr(args, k, None) for k in (
        "dataset", "benchmark", "seed", "sample", "per_bucket", "client", "client_seed",
        "transcript", "base_url", "model", "concurrency", "requests_per_minute", "tokenizer")}
    if getattr(args, "methods", None):
        flags["methods"] = args.methods.split(",")
    if getattr(args, "tasks", None):
        flags["tasks"] = args.tasks.split(",")
    if getattr(args, "compress", False):
        flags["compress"] = True
    return cfg.override(**flags).validate()


def cmd_bench_build(args) -> int:
    cfg = _config(args)
    if not cfg.dataset:
        raise ConfigError("a dataset path is required")
    graphs = load_dataset(cfg.dataset)
    ids = bench.subsample_graph_ids(len(graphs), cfg.sample, cfg.seed)
    bset = bench.build_benchmark(graphs, cfg.seed, cfg.per_bucket, Path(cfg.dataset).name, ids,
                                 [bench.Task(t) for t in cfg.tasks])
    manifest = bench.write_benchmark(bset, args.out, cfg.dataset)
    counts = manifest["bucket_counts"][cfg.tasks[0]]
    _emit(args, manifest, "  ".join(f"{k}: {v}" for k, v in counts.items()))
    return EXIT_OK


def _dataset_for(bench_path: Path, cfg: RunConfig) -> Path:
    if cfg.dataset:
        return Path(cfg.dataset)
    manifest = json.loads(bench.manifest_path(bench_path).read_text())
    return (bench_path.parent / manifest["dataset_path"]).resolve()


def cmd_bench_run(args) -> int:
    cfg = _config(args)
    bench_path = Path(cfg.benchmark or args.bench)
    graphs = load_dataset(_dataset_for(bench_path, cfg))
    cases = [c for c in bench.read_benchmark(bench_path) if c.task.value in cfg.tasks]
    client = make_client(cfg.client, seed=cfg.client_seed, transcript=cfg.transcript,
                         base_url=cfg.base_url, model=cfg.model, api_key_env=cfg.api_key_env,
                         timeout=cfg.timeout, max_retries=cfg.max_retries,
                         requests_per_minute=cfg.requests_per_minute)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.with_name(out.name + ".config.json").write_text(cfg.to_json())
    records = run_eval(cases, graphs, [Method.parse(m) for m in cfg.methods], client, out,
                       opts=FlattenOptions(compress_paths=cfg.compress, seed=cfg.seed),
                       tokenizer=get_tokenizer(cfg.tokenizer), concurrency=cfg.concurrency,
                       limit=args.limit)
    report = aggregate(records)
    _emit(args, report.to_dict(), report.to_text())
    return EXIT_ENDPOINT if any(r.error for r in records) else EXIT_OK


def cmd_report(args) -> int:
    report = aggregate(latest_records(load_records(args.results)))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(report.to_json(), encoding="utf-8")
        (out / "report.txt").write_text(report.to_text(), encoding="utf-8")
    _emit(args, report.to_dict(), report.to_text())
    return EXIT_OK


def cmd_gen_merged_like(args) -> int:
    graphs = generate_merged_like(args.n, args.seed)
    save_graph_collection(graphs, args.out)
    n = len(graphs)
    stats = {"graphs": n,
             "mean_nodes": sum(g.node_count for g in graphs) / n,
             "mean_arcs": sum(len(g.arcs) for g in graphs) / n}
    _emit(args, stats, f"{n} graphs, {stats['mean_nodes']:.2f} nodes, {stats['mean_arcs']:.2f} arcs")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print machine-readable JSON on stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    p = argparse.ArgumentParser(prog="eedp", description="EEDP graph flattening and edge-prediction benchmark")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_cmd(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.add_argument("graph", help="graph file in JSON graph format")
        sp.add_argument("--start", type=int, default=0, help="DAG traversal start node (default 0)")
        sp.add_argument("--out", help="output path")
        sp.set_defaults(func=func)
        return sp

    sp = graph_cmd("flatten", cmd_flatten, "flatten a graph to text")
    sp.add_argument("--method", default="eedp", help=f"one of: {', '.join(m.value for m in Method)}")
    sp.add_argument("--compress", action="store_true", help="compress EEDP paths per endpoint pair")
    sp.add_argument("--seed", type=int, default=0, help="seed for walk sequences")
    sp.add_argument("--tokenizer", default="heuristic",
                    help="'heuristic', 'bpe' (uses $EEDP_BPE_VOCAB) or a .tiktoken file path")
    graph_cmd("dag", cmd_dag, "build the EEDP DAG and report endpoints")
    graph_cmd("paths", cmd_paths, "extract endpoint-to-endpoint simple paths")
    graph_cmd("compress", cmd_compress, "compressed path text per endpoint pair")

    def run_opts(sp):
        sp.add_argument("--config", help="JSON run config; flags override its values")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--tasks", help="comma-separated: EP_CP,EP_DP")

    sp = sub.add_parser("bench-build", parents=[common], help="sample a benchmark from a dataset")
    sp.add_argument("dataset", nargs="?", help="TU dataset directory or JSON-lines graph file")
    run_opts(sp)
    sp.add_argument("--sample", type=int, help="randomly keep this many graphs")
    sp.add_argument("--per-bucket", dest="per_bucket", type=int, help="pairs per hop bucket (default 4)")
    sp.add_argument("--out", required=True, help="benchmark JSONL path")
    sp.set_defaults(func=cmd_bench_build)

    sp = sub.add_parser("bench-run", parents=[common], help="evaluate a benchmark against a client")
    sp.add_argument("bench", nargs="?", help="benchmark JSONL written by bench-build")
    run_opts(sp)
    sp.add_argument("--dataset", help="override the dataset recorded in the manifest")
    sp.add_argument("--methods", help="comma-separated flattening methods")
    sp.add_argument("--client", choices=["oracle", "random", "scripted", "openai"])
    sp.add_argument("--client-seed", dest="client_seed", type=int)
    sp.add_argument("--transcript", help="JSONL of recorded responses for the scripted client")
    sp.add_argument("--base-url", dest="base_url")
    sp.add_argument("--model")
    sp.add_argument("--concurrency", type=int)
    sp.add_argument("--rpm", dest="requests_per_minute", type=float, help="requests per minute cap")
    sp.add_argument("--compress", action="store_true")
    sp.add_argument("--tokenizer")
    sp.add_argument("--limit", type=int, help="query at most this many new records")
    sp.add_argument("--out", required=True, help="results JSONL (appended to; resumable)")
    sp.set_defaults(func=cmd_bench_run)

    sp = sub.add_parser("report", parents=[common], help="aggregate a results file")
    sp.add_argument("results")
    sp.add_argument("--out", help="directory for report.json and report.txt")
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("gen-merged-like", parents=[common], help="generate synthetic sparse directed graphs")
    sp.add_argument("--n", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True, help="JSON-lines output file")
    sp.set_defaults(func=cmd_gen_merged_like)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (OSError, GraphError, json.JSONDecodeError) as exc:
        print(f"eedp: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:  # includes ConfigError
        print(f"eedp: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
