"""Command-line front end: enumerate graph corpora, compute Ehrhart data
into a JSON-lines cache, run root-location checks, and export root scatters
as CSV with an optional matplotlib-rendered SVG alongside.

Exit codes: 0 success, 1 gated check failed, 2 usage or input error,
3 computation error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction

from . import __version__
from .graphs import (
    Graph,
    GraphError,
    Partition,
    canonical_key,
    complete_graph,
    complete_multipartite,
    cycle_graph,
    beta_family,
    gamma_family,
    is_tree,
    multipartite_type,
    parse_graph_line,
    path_graph,
    read_graph_file,
)
from .ehrhart import (
    EhrhartError,
    RationalPolynomial,
    binomial_poly,
    delta_vector,
    ehrhart_beta,
    ehrhart_bruteforce,
    ehrhart_complete,
    ehrhart_gamma,
    ehrhart_multipartite,
    is_gorenstein,
    symmetric_bipartite2_ehrhart,
    symmetric_complete_ehrhart,
    symmetric_tree_ehrhart,
)
from .polytopes import PolytopeError
from .roots import (
    DEFAULT_TOL,
    Root,
    RootFindingError,
    RootSet,
    Verdict,
    check_circle,
    check_narrow_strip,
    check_stability,
    check_strip,
    complex_roots,
    deviation_from_half_line,
)

CHECK_NAMES = ("strip", "stability", "circle", "narrow-strip", "half-line")
# conjectures expected to hold gate the exit code; the open question and the
# known-counterexample census are reported only
GATED_CHECKS = {"strip", "circle", "narrow-strip"}


class UsageError(Exception):
    """Bad request: unparsable input or an unsupported method/kind combination."""


class ComputeError(Exception):
    """A computation that should have succeeded did not."""


# ---------------------------------------------------------------------------
# inputs: graph files and family specs


def parse_family_spec(spec):
    """Graph plus family tag for specs like complete:5, multipartite:3,2,2,
    bipartite:p,q, alpha:p,q, beta:p,q, gamma:d,p, cycle:d, tree:path:d."""
    name, _, rest = spec.partition(":")
    try:
        if name == "complete":
            d = int(rest)
            return complete_graph(d), ("complete", (d,))
        if name in ("multipartite", "bipartite", "alpha"):
            parts = Partition.of(*(int(t) for t in rest.split(",")))
            return complete_multipartite(parts), ("multipartite", parts.parts)
        if name == "beta":
            p, q = (int(t) for t in rest.split(","))
            return beta_family(p, q), ("beta", (p, q))
        if name == "gamma":
            d, p = (int(t) for t in rest.split(","))
            return gamma_family(d, p), ("gamma", (d, p))
        if name == "cycle":
            return cycle_graph(int(rest)), ("cycle", (int(rest),))
        if name == "tree":
            shape, _, arg = rest.partition(":")
            if shape != "path":
                raise UsageError(f"unknown tree shape {shape!r} (supported: path)")
            return path_graph(int(arg)), ("tree", (int(arg),))
    except (ValueError, GraphError) as e:
        raise UsageError(f"bad family spec {spec!r}: {e}") from e
    raise UsageError(f"unknown family {name!r} in spec {spec!r}")


def load_corpus(inp):
    """List of (graph, family-or-None) from a graph file path or family spec."""
    if os.path.exists(inp):
        try:
            graphs = read_graph_file(inp)
        except GraphError as e:
            raise UsageError(f"{inp}: {e}") from e
        if not graphs:
            raise UsageError(f"{inp}: empty corpus")
        return [(g, None) for g in graphs]
    if ":" in inp:
        return [parse_family_spec(inp)]
    raise UsageError(f"input {inp!r} is neither an existing file nor a family spec")


def _detect_family(g):
    if is_tree(g):
        return ("tree", (g.d,))
    parts = multipartite_type(g)
    if parts is not None:
        if all(q == 1 for q in parts):
            return ("complete", (g.d,))
        return ("multipartite", parts.parts)
    return None


def formula_ehrhart(g, family, kind):
    """Closed-form Ehrhart polynomial, or a UsageError when none is known."""
    if family is None:
        family = _detect_family(g)
    if family is None:
        raise UsageError(f"no closed form known for graph {canonical_key(g)} (kind={kind})")
    name, params = family
    if kind == "edge":
        if name == "complete":
            return ehrhart_complete(params[0])
        if name == "multipartite":
            return ehrhart_multipartite(Partition(tuple(params)))
        if name == "beta":
            return ehrhart_beta(*params)
        if name == "gamma":
            return ehrhart_gamma(*params)
        if name == "tree":
            # the edge vectors of a tree span a unimodular simplex
            return binomial_poly(params[0] - 2, params[0] - 2)
        raise UsageError(f"no edge-polytope closed form for family {name!r}")
    if kind == "symmetric":
        if name == "tree":
            return symmetric_tree_ehrhart(params[0])
        if name == "complete":
            return symmetric_complete_ehrhart(params[0])
        if name == "multipartite":
            parts = tuple(params)
            if all(q == 1 for q in parts):
                return symmetric_complete_ehrhart(len(parts))
            if len(parts) == 2 and min(parts) == 1:
                return symmetric_tree_ehrhart(sum(parts))
            if len(parts) == 2 and min(parts) == 2:
                return symmetric_bipartite2_ehrhart(sum(parts))
            raise UsageError(f"no symmetric closed form for partition {parts}")
        raise UsageError(f"no symmetric closed form for family {name!r} (loops are not allowed)")
    raise UsageError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# cache records


def _roots_payload(rootset):
    out = []
    for r in rootset:
        out.append(
            {
                "re": r.re,
                "im": r.im,
                "mult": r.multiplicity,
                "exact": f"{r.exact.numerator}/{r.exact.denominator}" if r.is_exact else None,
                "residual": r.residual,
            }
        )
    return out


def roots_from_record(rec) -> RootSet:
    roots = []
    for item in rec["roots"]:
        exact = Fraction(item["exact"]) if item["exact"] else None
        roots.append(
            Root(re=item["re"], im=item["im"], multiplicity=item["mult"], exact=exact, residual=item["residual"])
        )
    return RootSet(rec["degree"], tuple(roots))


def compute_record(g, kind, method, family=None):
    """One cache record: exact polynomial, delta vector, roots."""
    if kind == "symmetric" and not g.simple:
        raise UsageError("symmetric edge polytopes require a simple graph")
    if method == "formula":
        poly = formula_ehrhart(g, family, kind)
    elif method == "bruteforce":
        poly = ehrhart_bruteforce(g, kind)
    elif method == "both":
        poly = formula_ehrhart(g, family, kind)
        counted = ehrhart_bruteforce(g, kind)
        if poly != counted:
            raise ComputeError(
                f"formula and count disagree for {canonical_key(g)} kind={kind}: "
                f"{poly.to_strings()} vs {counted.to_strings()}"
            )
    else:
        raise UsageError(f"unknown method {method!r}")
    rootset = complex_roots(poly)
    return {
        "graph_key": str(canonical_key(g)),
        "kind": kind,
        "graph": _graph_line(g),
        "degree": poly.degree,
        "ehrhart": poly.to_strings(),
        "delta": list(delta_vector(poly).entries),
        "roots": _roots_payload(rootset),
        "method": method,
        "version": __version__,
    }


def _graph_line(g):
    from .graphs import format_graph_line

    return format_graph_line(g)


def _record_task(args):
    line, kind, method, family = args
    g = parse_graph_line(line)
    return compute_record(g, kind, method, family)


def compute_records(pairs, kind, method, jobs):
    """Records for (graph, family) pairs, optionally across processes."""
    tasks = [(_graph_line(g), kind, method, fam) for g, fam in pairs]
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs > 1 and len(tasks) >= 8:
        import multiprocessing as mp_

        with mp_.get_context("fork").Pool(jobs) as pool:
            return pool.map(_record_task, tasks, chunksize=8)
    return [_record_task(t) for t in tasks]


def cache_path_from(args):
    return args.cache or os.environ.get("EHRHART_CACHE") or "ehrhart-cache.jsonl"


def load_cache(path):
    records = {}
    if not os.path.exists(path):
        return records
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            records[(rec["graph_key"], rec["kind"])] = rec
    return records


def save_cache(path, records):
    """Rewrite the cache sorted by (graph key, kind); stable bytes for stable
    records."""
    with open(path, "w", encoding="utf-8") as fh:
        for key in sorted(records):
            fh.write(json.dumps(records[key], sort_keys=True) + "\n")


def merge_record(cache, rec):
    """Insert rec, keeping previously stored check verdicts when the
    underlying data did not change."""
    key = (rec["graph_key"], rec["kind"])
    old = cache.get(key)
    if old and "checks" in old and old.get("ehrhart") == rec["ehrhart"]:
        rec = dict(rec)
        rec["checks"] = old["checks"]
    cache[key] = rec


# ---------------------------------------------------------------------------
# commands


def cmd_enumerate(args):
    from .graphs import enumerate_connected_simple, write_graph_file

    try:
        graphs = enumerate_connected_simple(args.order)
    except GraphError as e:
        raise UsageError(str(e)) from e
    write_graph_file(args.out, graphs)
    print(f"{len(graphs)} graphs of order {args.order} written to {args.out}")
    return 0


def cmd_compute(args):
    pairs = load_corpus(args.input)
    path = cache_path_from(args)
    cache = load_cache(path)
    records = compute_records(pairs, args.kind, args.method, args.jobs)
    for rec in records:
        merge_record(cache, rec)
    save_cache(path, cache)
    print(f"{len(records)} records ({args.kind}, {args.method}) -> {path}")
    return 0


def _verdict_for(name, rec, rootset, tol):
    if name == "strip":
        return check_strip(rootset, tol)
    if name == "stability":
        return check_stability(rootset, tol)
    if name == "circle":
        if rec["kind"] != "edge":
            return Verdict("n/a")
        g = parse_graph_line(rec["graph"])
        if multipartite_type(g) is None:
            return Verdict("n/a")
        return check_circle(rootset, g.d, tol)
    if name == "narrow-strip":
        poly = RationalPolynomial.from_strings(rec["ehrhart"])
        if not is_gorenstein(poly):
            return Verdict("n/a")
        return check_narrow_strip(rootset, tol)
    if name == "half-line":
        if rec["kind"] != "symmetric":
            return Verdict("n/a")
        dev = deviation_from_half_line(rootset)
        if dev <= tol:
            return Verdict("pass", margin=dev)
        worst = max(rootset.values(), key=lambda z: abs(z.real + 0.5))
        return Verdict("fail", worst=worst, margin=dev)
    raise UsageError(f"unknown check {name!r} (supported: {', '.join(CHECK_NAMES)})")


def cmd_check(args):
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    for c in checks:
        if c not in CHECK_NAMES:
            raise UsageError(f"unknown check {c!r} (supported: {', '.join(CHECK_NAMES)})")
    pairs = load_corpus(args.corpus)
    path = cache_path_from(args)
    cache = load_cache(path)
    missing = [(g, fam) for g, fam in pairs if (str(canonical_key(g)), args.kind) not in cache]
    if missing:
        if args.no_compute:
            raise ComputeError(f"{len(missing)} records missing from cache {path} (--no-compute)")
        for rec in compute_records(missing, args.kind, args.method, args.jobs):
            merge_record(cache, rec)
    rows = []
    counts = {c: {"pass": 0, "fail": 0, "n/a": 0} for c in checks}
    gated_failures = 0
    for g, _ in pairs:
        key = str(canonical_key(g))
        rec = cache[(key, args.kind)]
        rootset = roots_from_record(rec)
        row = {"graph_key": key, "kind": args.kind, "degree": rec["degree"]}
        stored = dict(rec.get("checks", {}))
        for c in checks:
            v = _verdict_for(c, rec, rootset, args.tol)
            counts[c][v.status] += 1
            if v.status == "fail" and c in GATED_CHECKS:
                gated_failures += 1
            row[c] = v.status
            row[f"{c}_margin"] = "" if v.margin is None else f"{v.margin:.12g}"
            row[f"{c}_worst"] = "" if v.worst is None else f"{v.worst.real:.12g}{v.worst.imag:+.12g}j"
            stored[c] = v.status
        rec = dict(rec)
        rec["checks"] = stored
        cache[(key, args.kind)] = rec
        rows.append(row)
    save_cache(path, cache)
    fields = ["graph_key", "kind", "degree"]
    for c in checks:
        fields += [c, f"{c}_margin", f"{c}_worst"]
    with open(args.report, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=fields)
        w.writeheader()
        w.writerows(rows)
    for c in checks:
        k = counts[c]
        gate = "gated" if c in GATED_CHECKS else "observational"
        print(f"check {c} ({gate}): {k['pass']} pass / {k['fail']} fail / {k['n/a']} n-a")
    print(f"report -> {args.report}")
    return 1 if gated_failures else 0


def _render_scatter(points, out, symmetric):
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "ehrhart-roots"
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    ax.scatter(xs, ys, s=14, color="#255a9b", alpha=0.85, linewidths=0)
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.axvline(0.0, color="black", linewidth=0.8)
    if symmetric:
        ax.axvline(-0.5, color="#b03a3a", linewidth=0.9, linestyle="--")
    x0 = math.floor(2 * min(xs + [-0.5])) / 2 - 0.5
    x1 = math.ceil(2 * max(xs + [0.5])) / 2 + 0.5
    y0 = math.floor(2 * min(ys + [-0.5])) / 2 - 0.5
    y1 = math.ceil(2 * max(ys + [0.5])) / 2 + 0.5
    ax.set_xlim(x0, x1)
    ax.set_ylim(y0, y1)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title("Ehrhart roots")
    fig.savefig(out, format="svg", metadata={"Date": None})
    plt.close(fig)


def cmd_export(args):
    pairs = load_corpus(args.corpus)
    path = cache_path_from(args)
    cache = load_cache(path)
    missing = [(g, fam) for g, fam in pairs if (str(canonical_key(g)), args.kind) not in cache]
    if missing:
        if args.no_compute:
            raise ComputeError(f"{len(missing)} records missing from cache {path} (--no-compute)")
        for rec in compute_records(missing, args.kind, args.method, args.jobs):
            merge_record(cache, rec)
        save_cache(path, cache)
    base, ext = os.path.splitext(args.out)
    csv_path = base + ".csv" if ext.lower() != ".csv" else args.out
    rows = []
    points = []
    for g, _ in pairs:
        rec = cache[(str(canonical_key(g)), args.kind)]
        for item in rec["roots"]:
            for _ in range(item["mult"]):
                rows.append(
                    {
                        "graph_key": rec["graph_key"],
                        "polytope": rec["kind"],
                        "D": rec["degree"],
                        "re": f"{item['re']:.12g}",
                        "im": f"{item['im']:.12g}",
                        "exact": item["exact"] or "",
                        "residual": f"{item['residual']:.12g}",
                    }
                )
                points.append((item["re"], item["im"]))
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=["graph_key", "polytope", "D", "re", "im", "exact", "residual"])
        w.writeheader()
        w.writerows(rows)
    outputs = [csv_path]
    if args.format == "svg":
        svg_path = base + ".svg"
        _render_scatter(points, svg_path, symmetric=(args.kind == "symmetric"))
        outputs.append(svg_path)
    print(f"{len(rows)} roots -> {', '.join(outputs)}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    ap = argparse.ArgumentParser(
        prog="ehrhart-roots",
        description="Ehrhart polynomials of graph polytopes and where their roots live.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="write all connected simple graphs of one order")
    p.add_argument("--order", type=int, required=True, help="number of vertices (2..8)")
    p.add_argument("out", help="output graph file")
    p.set_defaults(func=cmd_enumerate)

    def common(p):
        p.add_argument("--kind", choices=("edge", "symmetric"), default="edge")
        p.add_argument("--method", choices=("formula", "bruteforce", "both"), default="bruteforce")
        p.add_argument("--cache", help="cache path (default $EHRHART_CACHE or ehrhart-cache.jsonl)")
        p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")

    p = sub.add_parser("compute", help="compute Ehrhart data into the cache")
    p.add_argument("input", help="graph file or family spec (e.g. gamma:12,7)")
    common(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("check", help="run root-location checks over a corpus")
    p.add_argument("corpus", help="graph file or family spec")
    p.add_argument("--checks", default="strip", help=f"comma list from: {', '.join(CHECK_NAMES)}")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--report", default="conjecture-report.csv", help="per-graph verdict CSV")
    p.add_argument("--no-compute", action="store_true", help="fail instead of filling cache misses")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("export", help="export cached roots as CSV (and SVG scatter)")
    p.add_argument("corpus", help="graph file or family spec")
    p.add_argument("out", help="output path; .csv always written")
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.add_argument("--no-compute", action="store_true", help="fail instead of filling cache misses")
    common(p)
    p.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0,) else 0
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (GraphError, PolytopeError, EhrhartError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ComputeError, RootFindingError) as e:
        print(f"computation error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
