"""ordramsey command line.

Exit codes: 0 success, 1 a verification found a forbidden copy (or a
certificate failed), 2 usage or input error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import hashlib
import logging
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional

from . import __version__
from .colorings import (
    ColoringFormatError,
    Status,
    TwoColoring,
    block_coloring,
    general_construction_chi,
    is_symmetric,
    parse,
    render_matrix,
    serialize,
    verify_avoiding,
)
from .graphs import (
    CATERPILLAR_PATTERNS,
    GraphFormatError,
    OrderedGraph,
    caterpillar_by_decomposition,
    contains_ordered_subgraph,
    enumerate_connected_graphs,
    is_connected,
)
from .ledger import ARROWS, AVOIDS, NO_WITNESS, UNKNOWN, LedgerRecord, ResultsLedger, now
from .patterns import PatternSyntaxError, parse_pattern
from .routes import (
    PreconditionError,
    chromatic_lower_bound_from_coloring,
    format_routes,
    materialize_routes,
    max_nested_matching,
    nm_free_edge_bound,
    parse_routes,
    queue_partition,
    routes_cover,
)
from .sat.backends import SOLVER_ENV, Budget, enumerate_models, get_backend
from .sat.encode import encode_arrow
from .sat.search import (
    GOOD,
    NOT_GOOD,
    Decision,
    decide_arrowing,
    goodness_check,
    nm_k3_bounds,
    nm_kn_bounds,
    ordered_ramsey,
)

EXIT_OK = 0
EXIT_FOUND = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

LEDGER_ENV = "ORDRAMSEY_LEDGER"
DEFAULT_LEDGER = "ordramsey-ledger.tsv"

log = logging.getLogger("ordramsey")


class UsageError(Exception):
    pass


# -- argument types -----------------------------------------------------------


def pattern_arg(text: str) -> OrderedGraph:
    try:
        return parse_pattern(text)
    except (PatternSyntaxError, GraphFormatError, ValueError, OSError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def budget_arg(text: str) -> Optional[float]:
    if text.lower() in ("none", "inf", "unlimited"):
        return None
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad budget {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("budget must be positive")
    return value


def read_coloring(path: str) -> tuple[TwoColoring, str]:
    text = Path(path).read_text(encoding="ascii")
    try:
        return parse(text), text
    except ColoringFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def read_graph(source: str) -> tuple[OrderedGraph, Optional[int]]:
    """A pattern expression, an ``ordered-graph v1`` file or the red graph of a coloring file.

    The second value is N when the input was a coloring.
    """
    if os.path.isfile(source):
        text = Path(source).read_text(encoding="ascii")
        if text.startswith("ordered-coloring"):
            c, _ = read_coloring(source)
            return c.red_graph(), c.N
        try:
            return OrderedGraph.from_text(text), None
        except GraphFormatError as exc:
            raise UsageError(f"{source}: {exc}") from None
    try:
        return parse_pattern(source), None
    except (PatternSyntaxError, GraphFormatError, OSError) as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(f"{source}: {exc}") from None


def write_output(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="ascii")
    else:
        sys.stdout.write(text)


def backend_from(args):
    name = args.backend
    if args.solver:
        name = "external:" + args.solver
    return get_backend(name, seed=args.seed)


def slug(text: str) -> str:
    digest = hashlib.sha1(text.encode()).hexdigest()[:8]
    return re.sub(r"[^A-Za-z0-9]+", "-", text).strip("-")[:40] + "-" + digest


# -- subcommands ------------------------------------------------------------


GEN_KINDS = {
    "nested-matching": 1,
    "star": 2,
    "path": 1,
    "join-expr": 1,
    "block-coloring": 2,
    "chi": 1,
}


def cmd_gen(args) -> int:
    want = GEN_KINDS[args.kind]
    if len(args.params) != want:
        raise UsageError(f"gen {args.kind} takes {want} parameter(s), got {len(args.params)}")
    if args.kind == "join-expr":
        g, _ = read_graph(args.params[0])
        write_output(g.to_text(), args.out)
        return EXIT_OK
    try:
        nums = [int(p) for p in args.params]
    except ValueError:
        raise UsageError(f"gen {args.kind} needs integer parameters") from None
    try:
        if args.kind == "nested-matching":
            text = parse_pattern(f"nm:{nums[0]}").to_text()
        elif args.kind == "star":
            text = parse_pattern(f"star:{nums[0]},{nums[1]}").to_text()
        elif args.kind == "path":
            text = parse_pattern(f"path:{nums[0]}").to_text()
        elif args.kind == "block-coloring":
            text = serialize(block_coloring(nums[0], nums[1]))
        else:
            text = chi_text(nums[0])
    except (PatternSyntaxError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    write_output(text, args.out)
    return EXIT_OK


def chi_text(n: int) -> str:
    """Witness coloring for NM_n versus K_3: the pinned ones for n = 4, 5, the construction from 6 on."""
    if n == 4 or n == 5:
        from importlib import resources

        name = "chi1" if n == 4 else "chi2"
        return resources.files("ordramsey.data").joinpath(f"{name}.txt").read_text(encoding="ascii")
    c = general_construction_chi(n)
    text = serialize(c)
    routes = materialize_routes(queue_partition(c.red_graph()), c.N)
    if routes is not None:
        text += format_routes(routes)
    return text


def cmd_verify(args) -> int:
    c, text = read_coloring(args.coloring)
    verdict = verify_avoiding(c, args.red, args.blue)
    if verdict.status is not Status.AVOIDING:
        print(verdict)
        return EXIT_FOUND
    print(f"avoiding (N={c.N}, red edges={c.red_count}, symmetric={'yes' if is_symmetric(c) else 'no'})")
    routes = parse_routes(text)
    if routes:
        ok = all(r.is_staircase(c.N) for r in routes) and routes_cover(routes, c.red_graph())
        print(f"routes: {len(routes)} {'cover the red edges' if ok else 'INVALID'}")
        if not ok:
            return EXIT_FOUND
    return EXIT_OK


def cmd_routes(args) -> int:
    g, n_from_coloring = read_graph(args.graph)
    N = n_from_coloring or g.n
    size, chain = max_nested_matching(g)
    part = queue_partition(g)
    print(f"vertices: {N}")
    print(f"edges: {g.edge_count}")
    print(f"max nested matching: {size} " + " ".join(f"{u},{v}" for u, v in chain))
    print(f"queue classes: {len(part.classes)}")
    k = size + 1
    if N >= 2 * k:
        bound = nm_free_edge_bound(k, N)
        print(f"NM_{k}-free edge bound: {bound} ({'tight' if bound == g.edge_count else 'slack ' + str(bound - g.edge_count)})")
    routes = materialize_routes(part, N)
    if routes is None:
        print("routes: not materialized (greedy drawing failed; the partition above is still a certificate)")
    else:
        sys.stdout.write(format_routes(routes))
    return EXIT_OK


def _decide_job(payload):
    N, red, blue, backend_name, seed, seconds, symmetry = payload
    return decide_arrowing(N, red, blue, get_backend(backend_name, seed), Budget(seconds), symmetry)


def cmd_ramsey(args) -> int:
    backend = backend_from(args)
    budget = Budget(args.budget)
    ledger = None if args.no_ledger else ResultsLedger(args.ledger)
    witness_dir = Path(args.witness_dir) if args.witness_dir else Path(args.ledger).resolve().parent / "witnesses"

    def record(d: Decision) -> None:
        if ledger is None:
            return
        witness = NO_WITNESS
        if d.arrows is False and d.witness is not None:
            witness_dir.mkdir(parents=True, exist_ok=True)
            path = witness_dir / f"{slug(args.red_text)}__{slug(args.blue_text)}__N{d.N}.txt"
            path.write_text(serialize(d.witness), encoding="ascii")
            witness = str(path.resolve())
        verdict = UNKNOWN if d.arrows is None else ARROWS if d.arrows else AVOIDS
        ledger.append(
            LedgerRecord(now(), args.red_text, args.blue_text, d.N, verdict, round(d.seconds, 3), witness,
                         __version__, backend.name, args.seed)
        )

    prior = {}
    probes = sorted({n for n in (args.lo and args.lo - 1, args.hi) if n})
    if args.jobs > 1 and len(probes) > 1:
        name = args.backend if not args.solver else "external:" + args.solver
        payloads = [(n, args.red, args.blue, name, args.seed, args.budget, not args.no_symmetry) for n in probes]
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for d in pool.map(_decide_job, payloads):
                prior[d.N] = d
                record(d)
    report = ordered_ramsey(
        args.red,
        args.blue,
        lo_hint=args.lo,
        hi_hint=args.hi,
        budget=budget,
        backend=backend,
        use_symmetry=not args.no_symmetry,
        max_n=args.max_n,
        on_decision=record,
        prior=prior,
    )
    print(report.describe())
    for N in report.unknown:
        log.warning("N=%d undecided: %s", N, report.decisions[N].diagnostic or "budget exhausted")
    return EXIT_OK if report.exact is not None else EXIT_BUDGET


def cmd_enumerate(args) -> int:
    inst = encode_arrow(args.n, args.red, args.blue)
    result = enumerate_models(inst, backend_from(args), limit=args.limit, budget=Budget(args.budget, None))
    print(len(result))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        width = len(str(len(result)))
        for i, c in enumerate(result, start=1):
            (out / f"{i:0{width}d}.txt").write_text(serialize(c), encoding="ascii")
    if result.status == "limit":
        log.warning("stopped at --limit %d; more colorings may exist", args.limit)
    if result.status == "budget":
        log.warning("budget exhausted; the count is a lower bound")
        return EXIT_BUDGET
    return EXIT_OK


def cmd_caterpillar(args) -> int:
    g, _ = read_graph(args.graph)
    if not is_connected(g):
        print("not connected: monotone caterpillars are connected")
        return EXIT_FOUND
    dec = caterpillar_by_decomposition(g)
    if dec is not None:
        print("monotone caterpillar: join(" + "+".join(f"star:{l},{r}" for l, r in dec.stars) + ")")
        return EXIT_OK
    for name, pattern in CATERPILLAR_PATTERNS.items():
        emb = contains_ordered_subgraph(g, pattern)
        if emb is not None:
            print(f"not a monotone caterpillar: pattern {name} at vertices " + ",".join(map(str, emb.map)))
            return EXIT_FOUND
    raise AssertionError("decomposition and forbidden patterns disagree")


def _goodness_job(payload):
    g, n, backend_name, seed, seconds = payload
    v = goodness_check(g, n, Budget(seconds), get_backend(backend_name, seed))
    return v.status


def cmd_scan_good(args) -> int:
    if args.max_v > 6:
        raise UsageError("--max-v is limited to 6")
    graphs = [g for v in range(args.min_v, args.max_v + 1) for g in enumerate_connected_graphs(v)]
    name = args.backend if not args.solver else "external:" + args.solver
    payloads = [(g, args.n, name, args.seed, args.budget) for g in graphs]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            statuses = list(pool.map(_goodness_job, payloads, chunksize=8))
    else:
        statuses = [_goodness_job(p) for p in payloads]
    cats = [caterpillar_by_decomposition(g) is not None for g in graphs]
    print(f"n={args.n} vertices={args.min_v}..{args.max_v} graphs={len(graphs)}")
    print("vertices\tgood-caterpillar\tgood-other\tnot-good-caterpillar\tnot-good-other\tunknown")
    for v in range(args.min_v, args.max_v + 1):
        idx = [i for i, g in enumerate(graphs) if g.n == v]
        cell = lambda s, c: sum(1 for i in idx if statuses[i] == s and cats[i] == c)
        unknown = sum(1 for i in idx if statuses[i] not in (GOOD, NOT_GOOD))
        print(f"{v}\t{cell(GOOD, True)}\t{cell(GOOD, False)}\t{cell(NOT_GOOD, True)}\t{cell(NOT_GOOD, False)}\t{unknown}")
    for i, g in enumerate(graphs):
        if statuses[i] == GOOD and not cats[i]:
            print(f"good non-caterpillar: n={g.n} edges=" + " ".join(f"{u}-{v}" for u, v in g.edges))
        if statuses[i] == NOT_GOOD and cats[i]:
            print(f"non-good caterpillar: n={g.n} edges=" + " ".join(f"{u}-{v}" for u, v in g.edges))
    if any(s not in (GOOD, NOT_GOOD) for s in statuses):
        return EXIT_BUDGET
    return EXIT_OK


def parse_params(items: list[str]) -> dict[str, int]:
    params = {}
    for item in items:
        for part in item.split(","):
            key, eq, value = part.partition("=")
            if not eq or not value.strip().isdigit():
                raise UsageError(f"bad parameter {part!r}; expected name=<int>")
            params[key.strip()] = int(value)
    return params


def cmd_bounds(args) -> int:
    params = parse_params(args.params)
    try:
        if args.family == "nm-k3":
            if set(params) != {"n"}:
                raise UsageError("nm-k3 takes n=<int>")
            lo, hi = nm_k3_bounds(params["n"])
        else:
            if set(params) != {"m", "n"}:
                raise UsageError("nm-kn takes m=<int>,n=<int> (bounds r(NM_m, K_{n+1}))")
            b = nm_kn_bounds(params["m"], params["n"])
            lo, hi = b.lo, b.hi
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"{lo} ≤ r ≤ {hi}")
    return EXIT_OK


def cmd_render(args) -> int:
    c, text = read_coloring(args.coloring)
    routes = parse_routes(text)
    if args.svg:
        write_output(render_matrix(c, "svg", routes or None), args.out)
    else:
        write_output(render_matrix(c, "ascii"), args.out)
    return EXIT_OK


def cmd_chromatic_bound(args) -> int:
    c, _ = read_coloring(args.coloring)
    try:
        bound = chromatic_lower_bound_from_coloring(c, args.k)
    except PreconditionError as exc:
        print(f"not a witness: {exc}")
        return EXIT_FOUND
    print(bound)
    return EXIT_OK


def cmd_replay(args) -> int:
    """Re-verify every stored witness of a ledger."""
    ledger = ResultsLedger(args.ledger)
    failures = checked = 0
    for rec in ledger.records():
        path = rec.witness_path
        if path is None:
            continue
        checked += 1
        try:
            c = parse(path.read_text(encoding="ascii"))
            ok = c.N == rec.N and verify_avoiding(c, parse_pattern(rec.red), parse_pattern(rec.blue)).avoiding
        except (OSError, ValueError) as exc:
            log.error("%s: %s", path, exc)
            ok = False
        if not ok:
            failures += 1
            print(f"FAILED {rec.red} {rec.blue} N={rec.N} {path}")
    print(f"{checked - failures}/{checked} witnesses re-verified")
    return EXIT_OK if failures == 0 else EXIT_FOUND


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ordramsey", description="Ordered Ramsey numbers of nested matchings and friends")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--backend", default="builtin", help="builtin, external or external:<command>")
    solver.add_argument("--solver", default=None, help=f"external DIMACS solver command (also ${SOLVER_ENV})")
    solver.add_argument("--seed", type=int, default=0)
    solver.add_argument("--budget", type=budget_arg, default=600.0, help="seconds per solver call, or 'none'")
    solver.add_argument("--jobs", type=int, default=1)

    def pair(p):
        p.add_argument("--red", type=pattern_arg, required=True, help="red pattern, e.g. nm:4")
        p.add_argument("--blue", type=pattern_arg, required=True, help="blue pattern, e.g. k:3")

    p = sub.add_parser("gen", help="write a construction")
    p.add_argument("kind", choices=sorted(GEN_KINDS))
    p.add_argument("params", nargs="*")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="check a coloring against a red and a blue pattern")
    p.add_argument("coloring")
    pair(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("routes", help="queue partition, routes and edge bound of a graph")
    p.add_argument("graph", help="pattern expression, graph file or coloring file")
    p.set_defaults(func=cmd_routes)

    p = sub.add_parser("ramsey", parents=[solver], help="exact ordered Ramsey number or a bracket")
    pair(p)
    p.add_argument("--lo", type=int, help="hint: believed value (N-1 is checked)")
    p.add_argument("--hi", type=int, help="hint: an N believed to arrow")
    p.add_argument("--max-n", type=int, default=64)
    p.add_argument("--no-symmetry", action="store_true", help="skip the symmetric witness search")
    p.add_argument("--ledger", default=os.environ.get(LEDGER_ENV, DEFAULT_LEDGER))
    p.add_argument("--no-ledger", action="store_true")
    p.add_argument("--witness-dir")
    p.set_defaults(func=cmd_ramsey)

    p = sub.add_parser("enumerate", parents=[solver], help="count all avoiding colorings of K_N")
    pair(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--limit", type=int)
    p.add_argument("--out", help="directory receiving one coloring file per model")
    p.set_defaults(func=cmd_enumerate, budget=None)

    p = sub.add_parser("caterpillar", help="monotone caterpillar recognition")
    p.add_argument("graph")
    p.set_defaults(func=cmd_caterpillar)

    p = sub.add_parser("scan-good", parents=[solver], help="goodness of all small connected ordered graphs")
    p.add_argument("--max-v", type=int, required=True)
    p.add_argument("--min-v", type=int, default=2)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_scan_good)

    p = sub.add_parser("bounds", help="closed-form brackets")
    p.add_argument("--family", choices=["nm-k3", "nm-kn"], required=True)
    p.add_argument("--params", nargs="+", required=True, help="n=6, or m=2,n=3")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("render", help="draw a coloring as a matrix")
    p.add_argument("coloring")
    p.add_argument("--svg", action="store_true")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("chromatic-bound", help="queue-graph chromatic lower bound from a witness")
    p.add_argument("coloring")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_chromatic_bound)

    p = sub.add_parser("replay", help="re-verify the witnesses recorded in a ledger")
    p.add_argument("ledger", nargs="?", default=os.environ.get(LEDGER_ENV, DEFAULT_LEDGER))
    p.set_defaults(func=cmd_replay)
    return parser


def run(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    # keep the pattern strings as typed for the ledger
    argv_list = list(sys.argv[1:] if argv is None else argv)
    for flag in ("red", "blue"):
        if hasattr(args, flag):
            setattr(args, f"{flag}_text", _flag_value(argv_list, f"--{flag}"))
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc.filename}: no such file", file=sys.stderr)
        return EXIT_USAGE


def _flag_value(argv: list[str], flag: str) -> str:
    for i, tok in enumerate(argv):
        if tok == flag and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith(flag + "="):
            return tok[len(flag) + 1 :]
    return ""


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
