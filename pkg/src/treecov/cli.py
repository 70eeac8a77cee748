"""Command line interface.

One binary, subcommands for generating graphs, building covers, certifying
them, querying oracles/labels/routes, and benchmark sweeps. Every artifact
embeds the run configuration that produced it and contains no timestamps, so
re-running a command with the same configuration reproduces identical bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import __version__
from .cover import (
    Cover,
    CoverError,
    best_distance_array,
    cover_from_json_obj,
    cover_to_json_obj,
    graph_distance_array,
    hst_cover_to_tree_cover,
    pair_predicate_array,
    pairwise_tree_collection,
    ramsey_cover_general,
    separator_recursion_cover,
)
from .generators import gnp_graph, grid_graph, partial_k_tree, random_tree
from .graph import (
    Graph,
    GraphError,
    UNREACHABLE,
    dump_graph_json,
    dump_graph_text,
    load_graph_json,
    load_graph_text,
)
from .queries import (
    CoverDistanceLabeling,
    GraphRoutingScheme,
    MetricRoutingOverlay,
    PairwiseDistanceOracle,
    QueryError,
    SeparatorDistanceOracle,
    cover_label_to_json_obj,
)
from .ramsey import MetricError, derive_seed
from .separator import (
    DecompositionError,
    SeparatorProvider,
    dump_pace_td,
    parse_pace_td,
    validate_decomposition,
)
from .verify import (
    BoundSpec,
    RunRecord,
    VerifyError,
    certify_cover,
    certify_oracle,
    DEFAULT_K_THRESHOLD,
    EXHAUSTIVE_CAP,
    scaling_fit,
)

_ERRORS = (CoverError, GraphError, QueryError, MetricError, VerifyError,
           DecompositionError, OSError, ValueError)


# ---------------------------------------------------------------------------
# io helpers
# ---------------------------------------------------------------------------

def _load_graph(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json"):
        return load_graph_json(text)
    return load_graph_text(text)


def _write_text(path: str, text: str) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _write_json(path: str, obj) -> None:
    _write_text(path, json.dumps(obj, sort_keys=True,
                                 separators=(",", ":")) + "\n")


def _load_cover(path: str) -> tuple[Cover, dict]:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    return cover_from_json_obj(obj["cover"]), obj.get("run_config", {})


def _run_config(args, command: str, extra: dict) -> dict:
    cfg = {"tool": "treecov", "version": __version__, "command": command,
           "seed": args.seed, "threads": args.threads}
    cfg.update(extra)
    return cfg


def _parse_ids(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(",") if tok.strip() != "")


def _parse_pairs(spec: str, n: int, seed: int) -> list[tuple[int, int]]:
    """'all', 'sample:N', or a single 'u,v'."""
    if spec == "all":
        return [(u, v) for u in range(n) for v in range(u + 1, n)]
    if spec.startswith("sample:"):
        count = int(spec.split(":", 1)[1])
        rng = random.Random(derive_seed(seed, "pairs"))
        out: list[tuple[int, int]] = []
        seen = set()
        while len(out) < count and len(seen) < n * (n - 1) // 2:
            u = rng.randrange(n)
            v = rng.randrange(n)
            if u == v:
                continue
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                continue
            seen.add((u, v))
            out.append((u, v))
        return out
    u, v = _parse_ids(spec)
    return [(u, v)]


def _emit(args, machine: str, human: str) -> None:
    print(human if args.human else machine)


def _provider_from_args(args, g: Graph) -> SeparatorProvider:
    if args.sep == "td":
        if not args.td:
            raise DecompositionError("--sep td requires --td FILE")
        with open(args.td, "r", encoding="utf-8") as fh:
            td, n = parse_pace_td(fh.read())
        if n != g.n:
            raise DecompositionError(
                f"decomposition is for n={n}, graph has n={g.n}")
        validate_decomposition(td, g)
        return SeparatorProvider("td", td=td)
    return SeparatorProvider(args.sep)


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------

def cmd_gen(args) -> int:
    if args.family == "grid":
        rows = args.rows
        cols = args.cols if args.cols else rows
        g = grid_graph(rows, cols, seed=args.seed, max_weight=args.max_weight)
        extra = {"family": "grid", "rows": rows, "cols": cols,
                 "max_weight": args.max_weight}
        td_text = None
    elif args.family == "partial-k-tree":
        g, td = partial_k_tree(args.n, args.k, seed=args.seed,
                               max_weight=args.max_weight,
                               keep_prob=args.keep_prob)
        extra = {"family": "partial-k-tree", "n": args.n, "k": args.k,
                 "max_weight": args.max_weight, "keep_prob": args.keep_prob}
        td_text = dump_pace_td(td, g.n)
    elif args.family == "random-tree":
        g = random_tree(args.n, seed=args.seed, max_weight=args.max_weight)
        extra = {"family": "random-tree", "n": args.n,
                 "max_weight": args.max_weight}
        td_text = None
    elif args.family == "gnp":
        g = gnp_graph(args.n, args.p, seed=args.seed,
                      max_weight=args.max_weight)
        extra = {"family": "gnp", "n": args.n, "p": args.p,
                 "max_weight": args.max_weight}
        td_text = None
    else:
        raise GraphError(f"unknown family {args.family!r}")
    cfg = _run_config(args, "gen", extra)
    if args.out.endswith(".json"):
        obj = json.loads(dump_graph_json(g))
        obj["run_config"] = cfg
        _write_json(args.out, obj)
    else:
        header = f"c config {json.dumps(cfg, sort_keys=True)}\n"
        _write_text(args.out, header + dump_graph_text(g))
    if td_text is not None:
        td_path = args.td_out or os.path.splitext(args.out)[0] + ".td"
        _write_text(td_path, td_text)
    _emit(args,
          f"gen family={args.family} n={g.n} m={g.m} out={args.out}",
          f"generated {args.family}: {g.n} vertices, {g.m} edges "
          f"-> {args.out}")
    return 0


# ---------------------------------------------------------------------------
# build-cover
# ---------------------------------------------------------------------------

def cmd_build_cover(args) -> int:
    g = _load_graph(args.graph)
    extra = {"graph": args.graph, "kind": args.kind, "k": args.k,
             "mode": args.mode, "full": args.full,
             "strategy": args.strategy}
    if args.mode == "pairwise":
        if not args.a:
            raise CoverError("pairwise mode requires --a with target ids")
        a_ids = _parse_ids(args.a)
        cover = pairwise_tree_collection(
            g, a_ids, args.k, args.seed, args.kind, full=args.full,
            forest_strategy=args.strategy)
        extra["a"] = list(a_ids)
    elif args.mode == "separator":
        provider = _provider_from_args(args, g)
        cover = separator_recursion_cover(
            g, args.k, args.seed, provider, args.kind, full=args.full,
            forest_strategy=args.strategy)
        extra["sep"] = args.sep
    elif args.mode == "general":
        if args.kind != "spanning":
            raise CoverError("general mode builds spanning covers only")
        cover = ramsey_cover_general(g, args.k, args.seed,
                                     forest_strategy=args.strategy)
    else:
        raise CoverError(f"unknown mode {args.mode!r}")
    if args.realize and cover.kind == "hst":
        cover = hst_cover_to_tree_cover(cover)
        extra["realized"] = True
    cfg = _run_config(args, "build-cover", extra)
    _write_json(args.out, {"run_config": cfg,
                           "cover": cover_to_json_obj(cover)})
    _emit(args,
          f"cover kind={cover.kind} full={cover.full} trees={cover.size} "
          f"total={cover.total_size} bound={cover.bound} "
          f"alpha={cover.alpha} out={args.out}",
          f"built {cover.kind} cover: {cover.size} trees, "
          f"total size {cover.total_size}, average overlap "
          f"{float(cover.average_overlap):.2f}, stretch bound {cover.bound}"
          f" -> {args.out}")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

SUITES = {
    "core": ("non-contraction", "stretch-vs-certified-bound"),
    "spanning": ("non-contraction", "stretch-vs-certified-bound",
                 "spanning-subgraph", "recursion-depth",
                 "stretch-threshold"),
    "metric": ("non-contraction", "stretch-vs-certified-bound",
               "stretch-vs-formula"),
    "hst": ("non-contraction", "stretch-vs-certified-bound",
            "stretch-vs-formula"),
}


def _stretch_ratios(g: Graph, cover: Cover) -> list[float]:
    dg = graph_distance_array(g)
    best = best_distance_array(cover, g.n)
    if cover.guarantee == "all-pairs":
        pairs = dg > 0
    else:
        a = cover.trace.get("a")
        if a is None:
            raise VerifyError("cover trace lacks its target set")
        pairs = pair_predicate_array(g, a, dg) & (dg > 0)
    out = []
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if pairs[u, v] and best[u, v] >= 0:
                out.append(float(best[u, v]) / float(dg[u, v]))
    return out


def _report_record(args, cfg: dict, record: RunRecord, path: str) -> None:
    if path.endswith(".csv"):
        from .report import write_csv
        rows = [(c.name, "pass" if c.passed else "fail",
                 json.dumps(c.detail, sort_keys=True))
                for c in record.checks]
        write_csv(path, ("check", "result", "detail"), rows, config=cfg)
    else:
        _write_json(path, {"run_config": cfg,
                           "record": record.to_json_obj()})


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    cover, _ = _load_cover(args.cover)
    record = certify_cover(g, cover, threshold_K=args.threshold_K,
                           sample_seed=args.seed)
    if args.suite:
        wanted = SUITES.get(args.suite) or tuple(_split_names(args.suite))
        have = {c.name for c in record.checks}
        missing = [w for w in wanted if w not in have]
        if missing:
            raise VerifyError(f"suite checks not applicable: {missing}")
        record.checks = [c for c in record.checks if c.name in wanted]
    cfg = _run_config(args, "verify",
                      {"graph": args.graph, "cover": args.cover,
                       "suite": args.suite, "threshold_K": args.threshold_K})
    for c in record.checks:
        detail = "" if c.passed else " " + json.dumps(c.detail,
                                                      sort_keys=True,
                                                      default=str)
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name}{detail}")
    if args.report:
        _report_record(args, cfg, record, args.report)
    if args.figures:
        from .report import stretch_figure, write_csv
        os.makedirs(args.figures, exist_ok=True)
        if g.n <= EXHAUSTIVE_CAP:
            ratios = _stretch_ratios(g, cover)
            stretch_figure(os.path.join(args.figures, "stretch.png"),
                           f"{cover.kind} cover stretch (n={g.n})",
                           ratios, bound=float(cover.bound))
            write_csv(os.path.join(args.figures, "stretch.csv"),
                      ("ratio",), [(f"{r:.6f}",) for r in ratios],
                      config=cfg)
        else:
            print(f"note figures skipped (n={g.n} above exhaustive cap)")
    _emit(args,
          f"verify passed={str(record.passed).lower()} "
          f"checks={len(record.checks)}",
          f"{'all checks passed' if record.passed else 'CHECKS FAILED'} "
          f"({len(record.checks)} run)")
    return 0 if record.passed else 1


def _split_names(text: str) -> list[str]:
    return [tok.strip() for tok in text.split(",") if tok.strip()]


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------

def cmd_oracle(args) -> int:
    g = _load_graph(args.graph)
    if args.mode == "pairwise":
        if not args.a:
            raise QueryError("pairwise oracle requires --a with target ids")
        a_ids = _parse_ids(args.a)
        oracle = PairwiseDistanceOracle(g, a_ids, args.k, args.seed)
        extra = {"mode": "pairwise", "a": list(a_ids), "k": args.k}
    else:
        provider = _provider_from_args(args, g)
        oracle = SeparatorDistanceOracle(g, args.k, args.seed, provider)
        extra = {"mode": "separator", "sep": args.sep, "k": args.k}
    extra["graph"] = args.graph
    cfg = _run_config(args, "oracle", extra)
    pairs = _parse_pairs(args.pairs, g.n, args.seed)
    rows = []
    for u, v in pairs:
        est = oracle.query(u, v)
        rows.append((u, v, "unreachable" if est is UNREACHABLE else est))
    if args.out:
        from .report import write_csv
        write_csv(args.out, ("u", "v", "estimate"), rows, config=cfg)
    elif not args.certify:
        for u, v, est in rows:
            print(f"{u},{v},{est}")
    status = 0
    if args.certify:
        a_ids = _parse_ids(args.a) if args.mode == "pairwise" else None
        record = certify_oracle(g, oracle, a_ids=a_ids)
        for c in record.checks:
            print(f"{'PASS' if c.passed else 'FAIL'} {c.name}")
        status = 0 if record.passed else 1
    _emit(args,
          f"oracle mode={args.mode} bound={oracle.bound} "
          f"stored_words={oracle.stored_words()} pairs={len(rows)}",
          f"{args.mode} oracle: bound {oracle.bound}, "
          f"{oracle.stored_words()} stored words, {len(rows)} queries")
    return status


# ---------------------------------------------------------------------------
# label
# ---------------------------------------------------------------------------

def cmd_label(args) -> int:
    cover, _ = _load_cover(args.cover)
    labeling = CoverDistanceLabeling(cover)
    cfg = _run_config(args, "label", {"cover": args.cover})
    if args.out:
        labels = [cover_label_to_json_obj(labeling.label_of(v))
                  for v in sorted(labeling.labels)]
        _write_json(args.out, {"run_config": cfg,
                               "build_id": labeling.build_id,
                               "max_words": labeling.max_label_words(),
                               "labels": labels})
    if args.query:
        u, v = _parse_ids(args.query)
        est, tid = CoverDistanceLabeling.query(labeling.label_of(u),
                                               labeling.label_of(v))
        if est is UNREACHABLE:
            print(f"{u},{v},unreachable,")
        else:
            print(f"{u},{v},{est},{tid}")
    _emit(args,
          f"label build_id={labeling.build_id} "
          f"max_words={labeling.max_label_words()}",
          f"labeling {labeling.build_id}: max label "
          f"{labeling.max_label_words()} words")
    return 0


# ---------------------------------------------------------------------------
# route
# ---------------------------------------------------------------------------

def _graph_route_rows(scheme: GraphRoutingScheme,
                      pairs: list[tuple[int, int]]) -> list[tuple]:
    """Hop-by-hop trace rows: the header is re-derived with the table
    machinery so each row shows (tree id, cursor) as the packet carries it."""
    rows = []
    for u, v in pairs:
        res = scheme.route(u, v)
        if res is None:
            rows.append((u, v, "", 0, u, "", "unreachable"))
            continue
        router = scheme.routers[res.tree_id]
        label = router.labels[v]
        cursor, _ = router.origin_header(u, label)
        cum = 0
        rows.append((u, v, res.tree_id, 0, u,
                     f"{res.tree_id}:{cursor}", cum))
        cur = u
        hop = 1
        while cur != v:
            nxt, cursor, _ = router.route_step(cur, label, cursor)
            if nxt is None:
                break
            cum += router.tree.edge_weight(cur, nxt)
            rows.append((u, v, res.tree_id, hop, nxt,
                         f"{res.tree_id}:{cursor}", cum))
            cur = nxt
            hop += 1
        if cum != res.total:
            raise QueryError("internal: trace weight mismatch")
    return rows


def cmd_route(args) -> int:
    cover, _ = _load_cover(args.cover)
    cfg_extra = {"cover": args.cover, "mode": args.mode, "pairs": args.pairs}
    if args.mode == "graph":
        if not args.graph:
            raise QueryError("graph routing requires --graph")
        g = _load_graph(args.graph)
        cfg_extra["graph"] = args.graph
        scheme = GraphRoutingScheme(g, cover)
        pairs = _parse_pairs(args.pairs, g.n, args.seed)
        if args.threads > 1:
            chunk = max(1, len(pairs) // (4 * args.threads))
            batches = [pairs[i:i + chunk]
                       for i in range(0, len(pairs), chunk)]
            with ThreadPoolExecutor(max_workers=args.threads) as pool:
                futures = [pool.submit(_graph_route_rows, scheme, b)
                           for b in batches]
                rows = [r for f in futures for r in f.result()]
        else:
            rows = _graph_route_rows(scheme, pairs)
        header = ("u", "v", "tree", "hop", "vertex", "header", "cum_weight")
        summary = (f"route mode=graph pairs={len(pairs)} "
                   f"header_words=2")
    else:
        overlay = MetricRoutingOverlay(cover)
        pairs = _parse_pairs(args.pairs, cover.n, args.seed)
        rows = []
        for u, v in pairs:
            res = overlay.route(u, v)
            cum = 0
            if not res.edges:
                rows.append((u, v, res.tree_id, 0, f"{u}-{u}", 0, 0))
            for hop, (a, b, w) in enumerate(res.edges):
                cum += w
                rows.append((u, v, res.tree_id, hop, f"{a}-{b}", w, cum))
        header = ("u", "v", "tree", "hop", "edge", "weight", "cum_weight")
        summary = (f"route mode=metric pairs={len(pairs)} "
                   f"overlay_edges={overlay.overlay_size()} header_words=3")
    cfg = _run_config(args, "route", cfg_extra)
    if args.out:
        from .report import write_csv
        write_csv(args.out, header, rows, config=cfg)
    else:
        for row in rows:
            print(",".join(str(x) for x in row))
    _emit(args, summary, summary.replace(" ", "  "))
    return 0


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

def _grid_dims(n: int) -> tuple[int, int]:
    rows = 1 << ((n - 1).bit_length() // 2)
    if n % rows:
        raise GraphError(f"grid size {n} is not rows*cols with pow2 rows")
    return rows, n // rows


def _bench_one(family: str, n: int, k: int, seed: int, width: int,
               kind: str, full: bool) -> RunRecord:
    job_seed = derive_seed(seed, "bench", family, n)
    if family == "grid":
        rows, cols = _grid_dims(n)
        g = grid_graph(rows, cols, seed=job_seed)
        provider = SeparatorProvider("heuristic")
        t_param = None
    else:
        g, td = partial_k_tree(n, width, seed=job_seed)
        provider = SeparatorProvider("td", td=td)
        t_param = width + 1
    cover = separator_recursion_cover(g, k, job_seed, provider, kind,
                                      full=full)
    config = {"family": family, "n": n, "k": k, "seed": job_seed,
              "kind": kind, "full": full}
    if t_param is not None:
        config["t"] = t_param
    stats = {"tree_count": cover.size, "total_size": cover.total_size,
             "average_overlap": str(cover.average_overlap),
             "bound": str(cover.bound)}
    return RunRecord(config, stats)


_BENCH_BOUNDS = {
    "grid": BoundSpec("grid-tree-count", "grid-tree-count", ("n", "k")),
    "partial-k-tree": BoundSpec("ktree-tree-count", "ktree-tree-count",
                                ("n", "k", "t")),
}


def cmd_bench(args) -> int:
    families = _split_names(args.families)
    sizes = [int(s) for s in _split_names(args.sizes)]
    for fam in families:
        if fam not in _BENCH_BOUNDS:
            raise VerifyError(f"bench supports {sorted(_BENCH_BOUNDS)}, "
                              f"not {fam!r}")
    os.makedirs(args.out_dir, exist_ok=True)
    jobs = [(fam, n) for fam in families for n in sizes]
    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            futures = [pool.submit(_bench_one, fam, n, args.k, args.seed,
                                   args.width, args.kind, not args.no_full)
                       for fam, n in jobs]
            records = [f.result() for f in futures]
    else:
        records = [_bench_one(fam, n, args.k, args.seed, args.width,
                              args.kind, not args.no_full)
                   for fam, n in jobs]
    by_family: dict[str, list[RunRecord]] = {}
    for (fam, _), rec in zip(jobs, records):
        by_family.setdefault(fam, []).append(rec)
    status = 0
    from .report import scaling_figure, write_csv
    for fam, recs in by_family.items():
        bound = _BENCH_BOUNDS[fam]
        cfg = _run_config(args, "bench",
                          {"family": fam, "sizes": sizes, "k": args.k,
                           "kind": args.kind, "width": args.width,
                           "full": not args.no_full})
        _write_json(os.path.join(args.out_dir, f"records-{fam}.json"),
                    {"run_config": cfg,
                     "records": [r.to_json_obj() for r in recs]})
        fit = None
        if len(recs) >= 4:
            fit = scaling_fit(recs, bound)
        rows = []
        for i, rec in enumerate(recs):
            pred = bound.evaluate(**{v: rec.config[v]
                                     for v in bound.variables})
            fitted = f"{fit.constant * pred:.3f}" if fit else ""
            rows.append((rec.config["n"], rec.stats["tree_count"],
                         rec.stats["total_size"], f"{pred:.3f}", fitted))
        write_csv(os.path.join(args.out_dir, f"counts-{fam}.csv"),
                  ("n", "tree_count", "total_size", "predictor", "fitted"),
                  rows, config=cfg)
        if fit:
            scaling_figure(
                os.path.join(args.out_dir, f"scaling-{fam}.png"),
                f"{fam}: tree count vs {bound.name}",
                [r.config["n"] for r in recs],
                fit.measured,
                [fit.constant * x for x in fit.predictors])
            line = (f"bench family={fam} constant={fit.constant:.4f} "
                    f"max_residual={fit.max_abs_residual:.4f} "
                    f"stable={str(fit.stable).lower()}")
            if not fit.stable:
                status = 1
        else:
            line = (f"bench family={fam} records={len(recs)} "
                    f"(need 4 sizes for a fit)")
        _emit(args, line, line)
    return status


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treecov",
        description="tree covers, distance oracles, labelings, and routing "
                    "for weighted graphs")
    parser.add_argument("--seed", type=int, default=0,
                        help="master seed (default 0)")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for bench/route (default 1)")
    parser.add_argument("--human", action="store_true",
                        help="human-readable summaries instead of key=value")
    # same globals accepted after the subcommand; SUPPRESS keeps the
    # subparser from clobbering values given before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    common.add_argument("--human", action="store_true",
                        default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a benchmark graph",
                       parents=[common])
    p.add_argument("--family", required=True,
                   choices=("grid", "partial-k-tree", "random-tree", "gnp"))
    p.add_argument("--rows", type=int, default=8)
    p.add_argument("--cols", type=int, default=0,
                   help="grid columns (default: same as rows)")
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--k", type=int, default=2,
                   help="clique size for partial-k-tree")
    p.add_argument("--p", type=float, default=0.1, help="gnp edge prob")
    p.add_argument("--keep-prob", type=float, default=0.7)
    p.add_argument("--max-weight", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--td-out", default=None,
                   help="tree decomposition output (partial-k-tree)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("build-cover", help="build a tree cover",
                       parents=[common])
    p.add_argument("--graph", required=True)
    p.add_argument("--kind", required=True,
                   choices=("spanning", "metric", "hst"))
    p.add_argument("--k", type=int, default=2,
                   help="size/stretch trade-off exponent")
    p.add_argument("--mode", default="separator",
                   choices=("separator", "pairwise", "general"))
    p.add_argument("--a", default=None,
                   help="comma-separated target ids (pairwise mode)")
    p.add_argument("--sep", default="heuristic",
                   choices=("td", "heuristic", "exact"))
    p.add_argument("--td", default=None, help="decomposition file (.td)")
    p.add_argument("--full", action="store_true",
                   help="glue each tree to span every vertex")
    p.add_argument("--strategy", default="hst-realization",
                   choices=("hst-realization", "spt-star"))
    p.add_argument("--realize", action="store_true",
                   help="realize hst covers as plain trees (x8 bound)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_cover)

    p = sub.add_parser("verify", help="certify a cover against its bounds",
                       parents=[common])
    p.add_argument("--graph", required=True)
    p.add_argument("--cover", required=True)
    p.add_argument("--suite", default=None,
                   help=f"named suite ({', '.join(sorted(SUITES))}) or "
                        "comma-separated check names")
    p.add_argument("--threshold-K", type=float, default=DEFAULT_K_THRESHOLD)
    p.add_argument("--report", default=None,
                   help="write the full record (.json or .csv)")
    p.add_argument("--figures", default=None,
                   help="directory for stretch histogram + ratio csv")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="build and query a distance oracle",
                       parents=[common])
    p.add_argument("--graph", required=True)
    p.add_argument("--mode", default="separator",
                   choices=("pairwise", "separator"))
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--a", default=None)
    p.add_argument("--sep", default="heuristic",
                   choices=("td", "heuristic", "exact"))
    p.add_argument("--td", default=None)
    p.add_argument("--pairs", default="all",
                   help="'all', 'sample:N', or 'u,v'")
    p.add_argument("--out", default=None, help="answers csv")
    p.add_argument("--certify", action="store_true",
                   help="exhaustively check domination and the upper bound")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("label", help="distance labels from a cover",
                       parents=[common])
    p.add_argument("--cover", required=True)
    p.add_argument("--out", default=None, help="labels json")
    p.add_argument("--query", default=None, help="'u,v' distance query")
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("route", help="simulate routing and dump hop traces",
                       parents=[common])
    p.add_argument("--graph", default=None)
    p.add_argument("--cover", required=True)
    p.add_argument("--mode", default="graph", choices=("graph", "metric"))
    p.add_argument("--pairs", default="sample:32")
    p.add_argument("--out", default=None, help="trace csv")
    p.set_defaults(func=cmd_route)

    p = sub.add_parser("bench", help="cover scaling sweep with fits",
                       parents=[common])
    p.add_argument("--families", default="grid,partial-k-tree")
    p.add_argument("--sizes", default="64,128,256,512")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--width", type=int, default=2,
                   help="partial-k-tree width parameter")
    p.add_argument("--kind", default="spanning",
                   choices=("spanning", "metric", "hst"))
    p.add_argument("--no-full", action="store_true",
                   help="skip gluing trees to full vertex sets")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
