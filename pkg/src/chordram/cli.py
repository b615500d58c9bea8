"""Command-line front end.

Every command prints (or writes under --out) a JSON record
{"manifest": ..., "result": ...}; the manifest digest covers the result
with wall-clock fields removed, so equal inputs give equal digests.

Exit codes: 0 success, 1 a constructive step failed, 2 budget or cap
exhausted (partial result), 3 invalid input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

from .coloring import ColoredCompleteGraph
from .constants import paper_constants, render
from .errors import BudgetExceeded, CapExceeded, EmbeddingFailure, InvalidInput
from .extremal import (
    EVEN_MAXCUT,
    K_PART,
    ODD_MAXCUT_PLUS_VERTEX,
    ExtremalKind,
    certify_lower_bound,
    k_almost_extremal_coloring,
)
from .formats import format_shorthand, graph_from_json, parse_graph_spec, to_graph6
from .graph import DEFAULT_K_MAX, SimpleGraph, almost_bipartite_index, chords_of, cycle_graph, is_bipartite
from .preparation import prepare_host
from .ramsey import ramsey_search
from .regularity import (
    AnchoredPathSpec,
    ClusterChain,
    allocate_chunks,
    chain_path_embed,
    chain_violations,
)
from .synthetic import random_chain, random_chorded_cycle, random_path_specs

EXIT_OK, EXIT_FAILED, EXIT_BUDGET, EXIT_INVALID = 0, 1, 2, 3

KINDS = {"even": EVEN_MAXCUT, "odd": ODD_MAXCUT_PLUS_VERTEX, "k-part": K_PART}

DEFAULT_SWEEP = ["C5", "C6", "C6+0-2", "C6+0-3"]


def tool_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


def _strip_wall(obj):
    if isinstance(obj, dict):
        return {k: _strip_wall(v) for k, v in obj.items() if k != "seconds"}
    if isinstance(obj, list):
        return [_strip_wall(v) for v in obj]
    return obj


def result_digest(result) -> str:
    blob = json.dumps(_strip_wall(result), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: int | None
    tool_version: str
    wall_time: float
    result_digest: str

    def to_json(self) -> dict:
        return dict(self.__dict__)


class _Partial(Exception):
    """A command stopped early; carries the partial result and exit code."""

    def __init__(self, result, code):
        super().__init__(code)
        self.result = result
        self.code = code


# ------------------------------------------------------------------ helpers


def cycle_ramsey_formula(n: int) -> int | None:
    """3n/2 - 1 for even n > 4, 2n - 1 for odd n > 4; None below that."""
    if n <= 4:
        return None
    return 3 * n // 2 - 1 if n % 2 == 0 else 2 * n - 1


def _budget_kwargs(args) -> dict:
    return {"budget_nodes": args.budget_nodes, "budget_seconds": args.budget_seconds}


def _classify(g: SimpleGraph, k_max: int) -> dict:
    try:
        num_chords = len(chords_of(g).chords)
    except InvalidInput:
        num_chords = None
    ab = almost_bipartite_index(g, k_max)
    return {
        "graph6": to_graph6(g),
        "shorthand": format_shorthand(g),
        "n": g.n,
        "edges": g.num_edges(),
        "bipartite": is_bipartite(g),
        "index": None if ab is None else ab.k,
        "index_witness": None if ab is None else sorted(ab.witness),
        "k_max": k_max,
        "max_degree": g.max_degree,
        "num_chords": num_chords,
    }


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc


def _write(out: Path | None, name: str, obj) -> str | None:
    """Write JSON under ``out``; returns the bare file name so results do not
    depend on where they were written."""
    if out is None:
        return None
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return name


def _safe_name(g: SimpleGraph) -> str:
    return (format_shorthand(g) or to_graph6(g)).replace("+", "_").replace("/", "_")


# ----------------------------------------------------------------- commands


def cmd_ramsey(args) -> dict:
    h = parse_graph_spec(args.graph)
    n_max = args.n_max if args.n_max is not None else 4 * h.n
    resume = _load_json(args.resume) if args.resume else None
    try:
        res = ramsey_search(h, n_max, method=args.method, workers=args.workers, resume=resume, **_budget_kwargs(args))
    except BudgetExceeded as exc:
        partial = {"H": args.graph, "status": "budget_exceeded", "message": str(exc), "stats": exc.stats,
                   "checkpoint": exc.checkpoint}
        partial["checkpoint_file"] = _write(args.out, "checkpoint.json", exc.checkpoint) if exc.checkpoint else None
        raise _Partial(partial, EXIT_BUDGET) from exc
    except CapExceeded as exc:
        raise _Partial({"H": args.graph, "status": "cap_exceeded", "message": str(exc)}, EXIT_BUDGET) from exc
    record = res.to_json()
    witness_file = _write(args.out, f"ramsey_{_safe_name(h)}.json", record)
    return {"H": args.graph, "r": res.value, "witness_file": witness_file, "search": record}


def cmd_classify(args) -> dict:
    return _classify(parse_graph_spec(args.graph), args.k_max)


def _colouring_from_args(args) -> ColoredCompleteGraph:
    if args.colouring:
        return ColoredCompleteGraph.from_json(_load_json(args.colouring))
    if args.kind is None or args.n is None:
        raise InvalidInput("give --colouring FILE or a construction (--kind and --n)")
    return ExtremalKind(KINDS[args.kind], args.n, args.k).build()


def cmd_construct(args) -> dict:
    c = ExtremalKind(KINDS[args.kind], args.n, args.k).build()
    return {"kind": args.kind, "n": args.n, "k": args.k, "N": c.N, "colouring": c.to_json(), "hex": c.to_hex()}


def cmd_certify(args) -> dict:
    h = parse_graph_spec(args.graph)
    c = _colouring_from_args(args)
    t0 = time.monotonic()
    cert = certify_lower_bound(c, h, args.mode)
    cert["seconds"] = round(time.monotonic() - t0, 4)
    cert["N"] = c.N
    cert["lower_bound"] = c.N + 1 if cert["verdict"] else None
    return cert


def cmd_prepare(args) -> dict:
    if args.graph is None:
        if args.seed is None:
            raise InvalidInput("a random instance needs --seed")
        g, _ = random_chorded_cycle(args.seed, (args.n_min, args.n_max), args.max_delta, args.k_max)
    else:
        g = parse_graph_spec(args.graph)
    dec = prepare_host(g, args.z, args.k_max)
    return {"input": format_shorthand(g) or to_graph6(g), "decomposition": dec.to_json(),
            "violations": dec.violations(g)}


def _chain_from_json(obj) -> ClusterChain:
    host = obj["host"]
    g = parse_graph_spec(host) if isinstance(host, str) else graph_from_json(host)
    return ClusterChain(g, tuple(tuple(c) for c in obj["clusters"]))


def cmd_embed(args) -> dict:
    if args.chain:
        chain = _chain_from_json(_load_json(args.chain))
        if not args.specs:
            raise InvalidInput("--chain needs --specs")
        specs = [AnchoredPathSpec(s["length"], s["start"], s["end"]) for s in _load_json(args.specs)]
    else:
        if args.seed is None:
            raise InvalidInput("a random chain needs --seed")
        chain = random_chain(args.ell, args.size, args.density, args.seed)
        specs = random_path_specs(chain, args.paths, args.eps, args.seed)
    lengths = [s.length for s in specs]
    alloc = allocate_chunks(lengths, chain.ell, chain.size, args.eps)
    record = {"ell": chain.ell, "cluster_size": chain.size, "specs": [s.__dict__ for s in specs],
              "allocation": alloc.to_json(), "allocation_violations": alloc.violations(lengths)}
    try:
        emb = chain_path_embed(chain, specs, alloc, args.eps, evidence_eps=args.evidence_eps, seed=args.seed)
    except EmbeddingFailure as exc:
        record["status"] = "failed"
        record["message"] = str(exc)
        raise _Partial(record, EXIT_FAILED) from exc
    record["status"] = "ok"
    record["embedding"] = emb.to_json()
    record["violations"] = chain_violations(chain, specs, alloc, emb)
    return record


def _sweep_case(task) -> dict:
    spec, k_max, budget_nodes, budget_seconds, n_cap = task
    g = parse_graph_spec(spec)
    row = {"case": spec, **_classify(g, k_max)}
    n = g.n
    base = cycle_ramsey_formula(n)
    base_src = "formula"
    if base is None:
        base = ramsey_search(cycle_graph(n), 4 * n).value
        base_src = "search"
    row["r_Cn"] = base
    row["r_Cn_source"] = base_src
    k = row["index"]
    # asymptotic value predicted by the equivalence, when one applies
    if n % 2 == 0:
        target = base if row["bipartite"] else None
    else:
        target = None if k is None else base + k - 1
    row["predicted"] = target
    lower, source, cert = base, "C_n is a subgraph", None
    colouring = None
    if n > 4 and n % 2 == 0 and not row["bipartite"]:
        colouring = ExtremalKind(EVEN_MAXCUT, n).build()
    elif n > 4 and n % 2 and k is not None and k >= 2 and n > k - 1:
        colouring = k_almost_extremal_coloring(n, k - 1)
    if colouring is not None:
        cert = certify_lower_bound(colouring, g, "structural")
        if cert["verdict"] and colouring.N + 1 > lower:
            lower, source = colouring.N + 1, f"certified colouring of K_{colouring.N}"
    row["lower_bound"] = lower
    row["lower_source"] = source
    row["certificate"] = cert
    try:
        res = ramsey_search(g, n_cap or 4 * n, budget_nodes=budget_nodes, budget_seconds=budget_seconds)
        row["r"] = res.value
        row["status"] = "computed"
        row["stats"] = res.stats
    except (BudgetExceeded, CapExceeded) as exc:
        row["r"] = None
        row["status"] = "budget_exceeded"
        row["message"] = str(exc)
    flags = []
    if lower > base:
        flags.append(f"r >= {lower} > {base} = r(C_n): equality with r(C_n) impossible")
    if row["r"] is not None:
        flags.append(f"r = {row['r']} {'=' if row['r'] == base else '!='} {base} = r(C_n)")
        if target is not None and target != base:
            flags.append(f"r {'=' if row['r'] == target else '!='} {target} = r(C_n) + k - 1")
    row["flags"] = flags
    return row


def _sweep_cases(args) -> list[str]:
    cases = list(args.cases)
    if args.n_range:
        lo, hi = args.n_range
        for n in range(lo, hi + 1):
            cases.append(f"C{n}")
            if args.family == "single":
                cases += [f"C{n}+0-{j}" for j in range(2, n // 2 + 1)]
    return cases or list(DEFAULT_SWEEP)


def cmd_sweep(args) -> dict:
    tasks = [(c, args.k_max, args.budget_nodes, args.budget_seconds, args.n_max) for c in _sweep_cases(args)]
    for t in tasks:
        parse_graph_spec(t[0])
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_sweep_case, tasks))
    else:
        rows = [_sweep_case(t) for t in tasks]
    incomplete = sum(r["status"] != "computed" for r in rows)
    out = {"rows": rows, "incomplete": incomplete}
    if incomplete:
        raise _Partial(out, EXIT_BUDGET)
    return out


def cmd_constants(args) -> dict:
    ps = paper_constants(args.delta, args.k, args.c2, args.m_reg, *([args.n_even, args.n_benevides]),
                         n_reg=args.n_reg, log_base=args.log_base)
    out = ps.to_json()
    if args.n is not None and args.num_chords is not None:
        lz = ps.log10_z(args.n, args.num_chords)
        out["log10_z"] = lz
        out["z"] = render(lz)
    return out


# -------------------------------------------------------------------- table


def _table(rows: list[dict], cols: list[str]) -> str:
    cells = [[("" if r.get(c) is None else str(r.get(c))) for c in cols] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(x.ljust(w) for x, w in zip(row, widths)) for row in cells]
    return "\n".join(line.rstrip() for line in lines)


def render_table(command: str, result: dict) -> str:
    if command == "ramsey":
        return _table([result], ["H", "r", "status", "witness_file", "checkpoint_file"])
    if command == "sweep":
        rows = [{**r, "flags": "; ".join(r["flags"])} for r in result["rows"]]
        return _table(rows, ["case", "bipartite", "index", "r_Cn", "predicted", "lower_bound", "r", "status", "flags"])
    flat = {k: v for k, v in result.items() if not isinstance(v, (dict, list))}
    return _table([{"field": k, "value": v} for k, v in flat.items()], ["field", "value"])


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-nodes", type=int, default=None)
    common.add_argument("--budget-seconds", type=float, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--out", type=Path, default=None, help="directory for result, manifest and witness files")

    p = argparse.ArgumentParser(prog="chordram", description="Ramsey numbers of cycles with chords.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ramsey", parents=[common], help="compute r(H)")
    s.add_argument("graph", help='graph6, JSON, a .json file, or "C<n>+u-v..."')
    s.add_argument("--n-max", type=int, default=None)
    s.add_argument("--method", choices=("levels", "edges"), default="levels")
    s.add_argument("--resume", default=None, help="checkpoint file from an earlier run")

    s = sub.add_parser("classify", parents=[common], help="bipartite / almost-bipartite index / degrees")
    s.add_argument("graph")
    s.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)

    s = sub.add_parser("construct", parents=[common], help="build an extremal colouring")
    s.add_argument("kind", choices=sorted(KINDS))
    s.add_argument("n", type=int)
    s.add_argument("--k", type=int, default=1)

    s = sub.add_parser("certify", parents=[common], help="certify that a colouring avoids a monochromatic H")
    s.add_argument("graph")
    s.add_argument("--kind", choices=sorted(KINDS), default=None)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--colouring", default=None, help="colouring JSON file instead of a construction")
    s.add_argument("--mode", choices=("structural", "search"), default="structural")

    s = sub.add_parser("prepare", parents=[common], help="core / connector decomposition of C_n + D")
    s.add_argument("graph", nargs="?", default=None, help="omit for a random instance (needs --seed)")
    s.add_argument("--z", type=float, required=True)
    s.add_argument("--k-max", type=int, default=3)
    s.add_argument("--n-min", type=int, default=50)
    s.add_argument("--n-max", type=int, default=2000)
    s.add_argument("--max-delta", type=int, default=6)

    s = sub.add_parser("embed", parents=[common], help="allocate and embed anchored paths through a cluster chain")
    s.add_argument("--chain", default=None, help="ClusterChain JSON file; default is a random chain (needs --seed)")
    s.add_argument("--specs", default=None, help="JSON list of {length, start, end}")
    s.add_argument("--ell", type=int, default=4)
    s.add_argument("--size", type=int, default=150)
    s.add_argument("--paths", type=int, default=3)
    s.add_argument("--density", type=float, default=0.5)
    s.add_argument("--eps", type=float, default=0.0015)
    s.add_argument("--evidence-eps", type=float, default=None, help="attach sampled regularity evidence at this eps")

    s = sub.add_parser("sweep", parents=[common], help="compare r(C_n + D) with r(C_n) over small chorded cycles")
    s.add_argument("cases", nargs="*", help=f"graph specs (default {' '.join(DEFAULT_SWEEP)})")
    s.add_argument("--n-range", type=int, nargs=2, default=None, metavar=("LO", "HI"))
    s.add_argument("--family", choices=("plain", "single"), default="plain")
    s.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)
    s.add_argument("--n-max", type=int, default=None)

    s = sub.add_parser("constants", parents=[common], help="proof constants in log space")
    s.add_argument("--delta", type=int, required=True)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--c2", type=float, default=1.0)
    s.add_argument("--m-reg", type=float, default=100.0)
    s.add_argument("--n-reg", type=float, default=None)
    s.add_argument("--n-even", type=float, default=1.0)
    s.add_argument("--n-benevides", type=float, default=1.0)
    s.add_argument("--log-base", type=float, default=2.0)
    s.add_argument("--n", type=int, default=None, help="with --num-chords, also report z")
    s.add_argument("--num-chords", type=int, default=None)
    return p


COMMANDS = {
    "ramsey": cmd_ramsey,
    "classify": cmd_classify,
    "construct": cmd_construct,
    "certify": cmd_certify,
    "prepare": cmd_prepare,
    "embed": cmd_embed,
    "sweep": cmd_sweep,
    "constants": cmd_constants,
}


def execute(args: argparse.Namespace) -> tuple[int, dict]:
    """Run a parsed command; returns (exit code, {"manifest", "result", "exit_code"} or {"error"})."""
    params = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()
              if k not in ("command", "out", "format")}
    t0 = time.monotonic()
    code = EXIT_OK
    try:
        result = COMMANDS[args.command](args)
    except _Partial as part:
        result, code = part.result, part.code
    except InvalidInput as exc:
        return EXIT_INVALID, {"error": str(exc), "type": type(exc).__name__}
    except (BudgetExceeded, CapExceeded) as exc:
        result, code = {"status": "budget_exceeded", "message": str(exc)}, EXIT_BUDGET
    except EmbeddingFailure as exc:
        result, code = {"status": "failed", "message": str(exc)}, EXIT_FAILED
    manifest = RunManifest(args.command, params, args.seed, tool_version(),
                           round(time.monotonic() - t0, 3), result_digest(result))
    record = {"manifest": manifest.to_json(), "result": result, "exit_code": code}
    _write(args.out, f"{args.command}_result.json", record)
    _write(args.out, f"{args.command}_manifest.json", manifest.to_json())
    return code, record


def run(argv=None) -> tuple[int, dict]:
    return execute(build_parser().parse_args(argv))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    code, record = execute(args)
    if "error" in record:
        print(f"error: {record['error']}", file=sys.stderr)
        return code
    if args.format == "table":
        print(render_table(args.command, record["result"]))
    else:
        print(json.dumps(record, indent=2, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
