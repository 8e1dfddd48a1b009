"""Command-line front end.

    tgfactor analyze   builtin:cycle:3
    tgfactor treegraph --builtin complete:3 --format dot --out tg.dot
    tgfactor verify    --input graph.json --seed 7 --trials 5
    tgfactor count     --input graph.json        # matrix-tree only, any digraph
    tgfactor examples                            # every builtin closed form

Exit codes: 0 pass, 1 identity failure, 2 input error, 3 guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .digraph import SUBSET_GUARD, DiGraph, is_strongly_connected
from .errors import GraphError, GuardError, VerificationError
from .factorization import DEFAULT_SEED, DEFAULT_TRIALS, Analysis, verify_all
from .fixtures import builtin_examples, builtin_graph, family_checks
from .multiedge import MultiDiGraph, Subdivision, subdivide, transfer_trees
from .operators import LIFT_GUARD, matrix_tree_det
from .spanning import edge_var
from .treegraph import build_tree_graph, check_cycle_partition, check_eulerian

log = logging.getLogger("tgfactor")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    source: str | None = None
    builtin: str | None = None
    seed: int = DEFAULT_SEED
    trials: int = DEFAULT_TRIALS
    symbolic: bool | None = None
    max_trees: int = LIFT_GUARD
    fmt: str = "text"
    out: str | None = None

    def validate(self):
        if self.seed < 0 or self.seed >= 2 ** 64:
            raise GraphError("--seed must be in 0 .. 2^64 - 1")
        if self.trials < 1:
            raise GraphError("--trials must be positive")
        if not 1 <= self.max_trees <= LIFT_GUARD:
            raise GraphError(f"--max-trees must be in 1 .. {LIFT_GUARD}")


@dataclass
class Loaded:
    graph: DiGraph
    name: str
    builtin: str | None = None
    subdivision: Subdivision | None = None


def load(cfg: RunConfig) -> Loaded:
    builtin_name = cfg.builtin
    src = cfg.source
    if src and src.startswith("builtin:"):
        builtin_name, src = src, None
    if builtin_name and src:
        raise GraphError("give either an input file or a builtin, not both")
    if builtin_name:
        builtin_name = builtin_name.removeprefix("builtin:")
        return Loaded(builtin_graph(builtin_name), f"builtin:{builtin_name}", builtin=builtin_name)
    if not src:
        raise GraphError("no input: pass --input FILE or --builtin NAME")
    try:
        text = sys.stdin.read() if src == "-" else Path(src).read_text()
    except OSError as exc:
        raise GraphError(f"cannot read {src}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"{src}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if isinstance(data, dict) and data.get("multi"):
        sub = subdivide(MultiDiGraph.from_json(data))
        return Loaded(sub.simple, src, subdivision=sub)
    return Loaded(DiGraph.from_json(data), src)


def _unit(g: DiGraph) -> dict:
    return {edge_var(e.id): 1 for e in g.edges}


def tree_counts(g: DiGraph) -> list[int]:
    unit = _unit(g)
    return [matrix_tree_det(g, [r], unit) for r in range(g.n)]


def guard(g: DiGraph, max_trees: int) -> int:
    """Refuse inputs whose tree graph would exceed ``max_trees`` vertices."""
    if g.n > SUBSET_GUARD:
        raise GuardError(f"|V| = {g.n} exceeds the subset limit {SUBSET_GUARD}")
    total = sum(tree_counts(g))
    if total > max_trees:
        raise GuardError(f"{total} spanning trees exceed the limit {max_trees}")
    return total


def _require_sc(g: DiGraph):
    if not is_strongly_connected(g):
        raise GraphError("graph is not strongly connected; only 'count' accepts it")


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


# -- commands -------------------------------------------------------------------------


def cmd_analyze(cfg: RunConfig, src: Loaded) -> tuple[dict, int]:
    g = src.graph
    _require_sc(g)
    guard(g, cfg.max_trees)
    an = Analysis.of(g)
    table = an.table
    report = {
        "command": "analyze", "input": src.name, **an.summary(),
        "strongly_connected": True,
        "degree_identity": {"lifted_dimension": an.tree_graph.n,
                            "sum_W |W| m(W)": table.degree_sum(),
                            "ok": an.tree_graph.n == table.degree_sum()},
        "multiplicities": table.to_json(),
    }
    if src.subdivision is not None:
        report["multigraph"] = _transfer(src.subdivision)
    return report, EXIT_OK if report["degree_identity"]["ok"] else EXIT_FAIL


def cmd_treegraph(cfg: RunConfig, src: Loaded) -> tuple[dict, int]:
    g = src.graph
    guard(g, cfg.max_trees)
    tg = build_tree_graph(g)
    euler = check_eulerian(tg)
    parts = check_cycle_partition(tg)
    report = {"command": "treegraph", "input": src.name, "tree_graph": tg.to_json(),
              "eulerian": euler, "cycle_partition": parts,
              "strongly_connected": tg.is_strongly_connected()}
    if cfg.fmt == "dot":
        report["dot"] = tg.to_dot()
    return report, EXIT_OK if euler["ok"] and parts["ok"] else EXIT_FAIL


def cmd_verify(cfg: RunConfig, src: Loaded) -> tuple[dict, int]:
    g = src.graph
    _require_sc(g)
    guard(g, cfg.max_trees)
    reports = verify_all(g, cfg.trials, cfg.seed, cfg.symbolic)
    out = {"command": "verify", "input": src.name, "seed": cfg.seed, "trials": cfg.trials,
           "checks": [r.to_json() for r in reports]}
    ok = all(r.ok for r in reports)
    if src.builtin:
        fam = family_checks(src.builtin, cfg.seed)
        out["examples"] = [c.to_json() for c in fam]
        ok = ok and all(c.ok for c in fam)
    if src.subdivision is not None:
        out["multigraph"] = _transfer(src.subdivision)
        ok = ok and all(row["ok"] for row in out["multigraph"]["roots"])
    out["ok"] = ok
    return out, EXIT_OK if ok else EXIT_FAIL


def cmd_count(cfg: RunConfig, src: Loaded) -> tuple[dict, int]:
    g = src.graph
    counts = tree_counts(g)
    return {"command": "count", "input": src.name,
            "strongly_connected": is_strongly_connected(g),
            "rooted_trees": {str(g.vertices[r]): c for r, c in enumerate(counts)},
            "total": sum(counts)}, EXIT_OK


def cmd_examples(cfg: RunConfig, _src) -> tuple[dict, int]:
    checks = builtin_examples(cfg.seed)
    ok = all(c.ok for c in checks)
    return {"command": "examples", "seed": cfg.seed, "ok": ok,
            "checks": [c.to_json() for c in checks]}, EXIT_OK if ok else EXIT_FAIL


def _transfer(sub: Subdivision) -> dict:
    rows = []
    for v in range(sub.base.n):
        try:
            rows.append(transfer_trees(sub, v))
        except VerificationError as exc:
            rows.append({"root": str(sub.base.vertices[v]), "ok": False, "error": str(exc)})
    return {"dropped_loops": sub.base.dropped_loops, "roots": rows}


COMMANDS = {"analyze": cmd_analyze, "treegraph": cmd_treegraph, "verify": cmd_verify,
            "count": cmd_count, "examples": cmd_examples}


# -- text rendering ---------------------------------------------------------------------


def render_text(report: dict) -> str:
    cmd = report["command"]
    lines = [f"{cmd}: {report.get('input', '')}".rstrip(": ")]
    if cmd == "analyze":
        lines.append(f"  trees: {report['trees']}   tree-graph edges: {report['tree_graph_edges']}")
        d = report["degree_identity"]
        lines.append(f"  degree identity: {d['sum_W |W| m(W)']} = {d['lifted_dimension']} "
                     f"{'ok' if d['ok'] else 'FAILS'}")
        for row in report["multiplicities"]:
            if row["m"]:
                lines.append(f"  m({{{','.join(map(str, row['W']))}}}) = {row['m']}")
    elif cmd == "treegraph":
        tg = report["tree_graph"]
        lines.append(f"  {len(tg['vertices'])} trees, {len(tg['edges'])} edges")
        lines.append(f"  eulerian: {'ok' if report['eulerian']['ok'] else 'FAILS'}")
        cp = report["cycle_partition"]
        lines.append(f"  cycle partition: {cp['cycles']} lifted cycles, "
                     f"{'ok' if cp['ok'] else 'FAILS'}")
    elif cmd == "verify":
        for c in report["checks"]:
            sym = {None: "not run", True: "holds", False: "FAILS"}[c["symbolic"]]
            passed = sum(t["ok"] for t in c["trials"])
            lines.append(f"  {'PASS' if c['ok'] else 'FAIL'} {c['check']}: "
                         f"{passed}/{len(c['trials'])} trials, symbolic {sym}")
        for c in report.get("examples", []):
            count = c["details"].get("matrix_tree")
            shown = f" = {count}" if count is not None and len(str(count)) <= 30 else ""
            lines.append(f"  {'PASS' if c['ok'] else 'FAIL'} {c['name']}{shown}")
        lines.append("  all checks pass" if report["ok"] else "  VERIFICATION FAILED")
    elif cmd == "count":
        for v, c in report["rooted_trees"].items():
            lines.append(f"  root {v}: {c}")
        lines.append(f"  total: {report['total']}")
    elif cmd == "examples":
        for c in report["checks"]:
            lines.append(f"  {'PASS' if c['ok'] else 'FAIL'} {c['name']}")
    if "multigraph" in report:
        for row in report["multigraph"]["roots"]:
            lines.append(f"  multigraph root {row['root']}: "
                         f"{row.get('trees', '?')} trees, {'ok' if row['ok'] else 'FAILS'}")
    return "\n".join(lines) + "\n"


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"
    if fmt == "dot":
        if "dot" not in report:
            raise GraphError("--format dot is only available for 'treegraph'")
        return report["dot"]
    return render_text(report)


def _failure_dump(report: dict) -> str:
    """Seed and assignment of every failing trial, for reproduction."""
    rows = []
    for c in report.get("checks", []):
        for t in c.get("trials", []):
            if not t["ok"]:
                rows.append({"check": c["check"], "trial": t["trial"], "seed": t["seed"],
                             "assignment": t.get("assignment", {})})
    return json.dumps(rows, sort_keys=True, indent=2)


# -- entry point ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tgfactor",
                                description="Tree graphs of digraphs and their determinant factorizations.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name, text in [("analyze", "strong connectivity, tree count and multiplicity table"),
                       ("treegraph", "build the tree graph with its structural checks"),
                       ("verify", "check every determinant identity"),
                       ("count", "rooted spanning tree counts by the matrix-tree theorem"),
                       ("examples", "closed forms for the builtin families")]:
        s = sub.add_parser(name, help=text)
        if name != "examples":
            s.add_argument("source", nargs="?", help="graph JSON path, '-' for stdin, or builtin:NAME")
            s.add_argument("--input", dest="input_path", help="graph JSON path")
            s.add_argument("--builtin", help="cycle:n, complete:n, bouquet:n1,n2,... or hypercube:n")
        s.add_argument("--seed", type=int, default=DEFAULT_SEED,
                       help=f"random seed (default {DEFAULT_SEED})")
        s.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
        s.add_argument("--symbolic", action="store_true", default=None,
                       help="force polynomial comparison (guarded)")
        s.add_argument("--max-trees", type=int, default=LIFT_GUARD,
                       help=f"largest tree graph to build (default {LIFT_GUARD})")
        s.add_argument("--format", dest="fmt", choices=("text", "json", "dot"), default="text")
        s.add_argument("--out", help="write the report here instead of stdout")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = RunConfig(command=args.command,
                    source=getattr(args, "input_path", None) or getattr(args, "source", None),
                    builtin=getattr(args, "builtin", None), seed=args.seed, trials=args.trials,
                    symbolic=args.symbolic, max_trees=args.max_trees, fmt=args.fmt, out=args.out)
    if getattr(args, "input_path", None) and getattr(args, "source", None):
        print("error: give the graph once (positional or --input)", file=sys.stderr)
        return EXIT_INPUT
    try:
        cfg.validate()
        src = None if cfg.command == "examples" else load(cfg)
        report, code = COMMANDS[cfg.command](cfg, src)
        text = render(report, cfg.fmt)
    except GuardError as exc:
        print(f"guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    if code == EXIT_FAIL:
        print("identity failure; reproduce with --seed "
              f"{cfg.seed}. Failing trials:\n{_failure_dump(report)}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
