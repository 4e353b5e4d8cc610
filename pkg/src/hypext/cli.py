"""Command line interface: ``python -m hypext <command> ...``.

Results go to standard output as JSON, a short summary to standard error.
Exit codes: 0 success, 1 the checked property is false, 2 usage or input
error, 3 a search budget or size guard was hit.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from typing import Optional, Sequence

from . import acceptance
from .coloring import critical_edges, is_freely_critical, is_sharply_critical, is_t_spike, strong_coloring
from .constructions import (
    add_isolated,
    balanced_blowup,
    complete,
    complete_multipartite,
    edgeless,
    expansion,
    extension,
    weak_extensions,
)
from .distance import distance_to_complete_blowups, stability_probe
from .errors import GraphParseError, InvalidArgument, ResourceLimit
from .hypergraph import (
    HyperGraph,
    family_from_obj,
    family_to_obj,
    graph_from_dict,
    graph_to_dict,
    is_family_free,
    labels_from_dict,
)
from .lagrangian import lagrangian, monotone_threshold, sidolem_probe, sidorenko_probe
from .turan import Budget, brute_force_turan, max_blowup_edges, turan_number, verify_extremal_claim

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

DEFAULTS = {
    "seed": 0,
    "restarts": 32,
    "max_iters": 100_000,
    "tol": 1e-10,
    "max_nodes": None,
    "max_seconds": None,
    "threads": None,
    "distance_restarts": 20,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read_json(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise GraphParseError(f"cannot read file: {exc.strerror}", path) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"invalid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}", path) from exc


def _load_graph(path):
    obj = _read_json(path)
    try:
        g = graph_from_dict(obj)
    except GraphParseError as exc:
        raise GraphParseError(str(exc), path) from exc
    return g, labels_from_dict(obj)


def _load_family(path):
    obj = _read_json(path)
    try:
        return family_from_obj(obj)
    except GraphParseError as exc:
        raise GraphParseError(str(exc), path) from exc


def _vertex(token, labels, n):
    token = token.strip()
    if labels and token in labels:
        return labels.index(token)
    try:
        v = int(token)
    except ValueError:
        raise InvalidArgument(f"unknown vertex {token!r}") from None
    if not 0 <= v < n:
        raise InvalidArgument(f"vertex {v} out of range 0..{n - 1}")
    return v


def _fresh_labels(labels, count):
    taken = set(labels)
    out = []
    k = 0
    while len(out) < count:
        name = "y" if k == 0 else f"y{k}"
        k += 1
        if name not in taken:
            out.append(name)
            taken.add(name)
    return out


def _ints(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InvalidArgument(f"expected comma separated integers, got {text!r}") from None


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InvalidArgument(f"expected comma separated numbers, got {text!r}") from None


def _setting(args, config, key):
    val = getattr(args, key, None)
    if val is not None:
        return val
    if key in config:
        return config[key]
    return DEFAULTS[key]


def _load_config(path):
    if path is None:
        return {}
    obj = _read_json(path)
    if not isinstance(obj, dict):
        raise GraphParseError("config must be an object", path)
    unknown = set(obj) - set(DEFAULTS)
    if unknown:
        raise GraphParseError(f"unknown config keys {sorted(unknown)}", path)
    return obj


# -- construct ---------------------------------------------------------------


def _cmd_construct(args, config):
    kind = args.kind
    labels = None
    if kind in ("ext", "wext", "expand", "pad"):
        if not args.graph:
            raise InvalidArgument(f"construct {kind} needs --in")
        g, labels = _load_graph(args.graph)
    if kind == "ext":
        out = extension(g)
        if labels:
            labels = labels + _fresh_labels(labels, out.n - g.n)
        return _graph_result(out, labels), EXIT_OK, f"Ext: {len(out)} edges on {out.n} vertices"
    if kind == "wext":
        fam = weak_extensions(g, share_fresh=not args.no_share)
        obj = family_to_obj(fam)
        return obj, EXIT_OK, f"WExt: {len(fam)} members up to isomorphism"
    if kind == "expand":
        out = expansion(g, _need(args.r, "--r"))
    elif kind == "pad":
        out = add_isolated(g, _need(args.t, "--t"))
    elif kind == "complete":
        out = complete(_need(args.t, "--t"), _need(args.r, "--r"))
    elif kind == "edgeless":
        out = edgeless(_need(args.t, "--t"), _need(args.r, "--r"))
    else:  # blowup
        r = _need(args.r, "--r")
        if args.parts:
            out = complete_multipartite(_ints(args.parts), r)
        else:
            out = balanced_blowup(_need(args.t, "--t"), r, _need(args.n, "--n"))
    if labels and out.n >= len(labels):
        labels = labels + _fresh_labels(labels, out.n - len(labels))
    return _graph_result(out, labels), EXIT_OK, f"{kind}: {len(out)} edges on {out.n} vertices"


def _graph_result(g, labels):
    return graph_to_dict(g, labels)


def _need(value, flag):
    if value is None:
        raise InvalidArgument(f"missing {flag}")
    return value


# -- check ---------------------------------------------------------------------


def _cmd_check(args, config):
    g, labels = _load_graph(_need(args.graph, "--graph"))
    what = args.what
    if what == "free":
        fam = _load_family(_need(args.family, "--family"))
        free = is_family_free(g, fam)
        return {"check": "free", "free": free}, EXIT_OK if free else EXIT_FALSE, f"family free: {free}"
    t = _need(args.t, "--t")
    if what == "colorable":
        col = strong_coloring(g, t)
        ok = col is not None
        out = {"check": "colorable", "t": t, "colorable": ok, "coloring": [col[v] for v in range(g.n)] if ok else None}
        return out, EXIT_OK if ok else EXIT_FALSE, f"strongly {t}-colorable: {ok}"
    if what == "critical":
        crit = critical_edges(g, t)
        ok = crit is not None
        out = {"check": "critical", "t": t, "critical": ok, "critical_edges": [list(e) for e in crit] if ok else []}
        return out, EXIT_OK if ok else EXIT_FALSE, f"{t}-critical: {ok}"
    if what == "sharply-critical":
        found = is_sharply_critical(g, t)
        ok = found is not None
        out = {"check": "sharply-critical", "t": t, "found": ok}
        if ok:
            out["edge"], out["vertex"], out["report"] = list(found[0]), found[1], found[2].to_dict()
        return out, EXIT_OK if ok else EXIT_FALSE, f"sharply {t}-critical: {ok}"
    edge = tuple(sorted(_vertex(x, labels, g.n) for x in _need(args.edge, "--edge").split(",")))
    if what == "freely-critical":
        ok = is_freely_critical(g, edge, t)
        return {"check": "freely-critical", "t": t, "edge": list(edge), "freely_critical": ok}, EXIT_OK if ok else EXIT_FALSE, f"freely critical: {ok}"
    v = _vertex(_need(args.vertex, "--vertex"), labels, g.n)
    report = is_t_spike(g, edge, v, t, relabel_closure=args.relabel_closure)
    out = report.to_dict()
    out["check"] = "spike"
    return out, EXIT_OK if report.verdict else EXIT_FALSE, f"spike verdict: {report.verdict}"


# -- lagrangian and f ----------------------------------------------------------


def _cmd_lagrangian(args, config):
    g, _ = _load_graph(_need(args.graph, "--graph"))
    res = lagrangian(
        g,
        restarts=_setting(args, config, "restarts"),
        max_iters=_setting(args, config, "max_iters"),
        tol=_setting(args, config, "tol"),
        seed=_setting(args, config, "seed"),
        certify=args.certify,
    )
    return res.to_dict(), EXIT_OK, f"lambda = {res.value:.12g} ({res.mode})"


def _cmd_fcurve(args, config):
    parts = args.range.split(":")
    if len(parts) not in (2, 3):
        raise InvalidArgument("--range takes lo:hi or lo:hi:step")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        step = float(parts[2]) if len(parts) == 3 else 1.0
    except ValueError:
        raise InvalidArgument(f"bad --range {args.range!r}") from None
    rep = monotone_threshold(args.r, args.t, lo, hi, step)
    return rep.to_dict(), EXIT_OK, f"decreasing from x = {rep.threshold}"


# -- turan -----------------------------------------------------------------------


def _cmd_turan(args, config):
    fam = _load_family(_need(args.forbid, "--forbid"))
    seed = _setting(args, config, "seed")
    if args.oracle_bruteforce:
        ex, keys = brute_force_turan(args.n, fam)
        out = {
            "n": args.n,
            "r": fam.r,
            "ex_value": ex,
            "extremal_count": len(keys),
            "extremal": [{"r": k[0], "n": k[1], "edges": [list(e) for e in k[2]]} for k in keys],
            "method": "brute-force",
            "exact": True,
            "seed": seed,
        }
        return out, EXIT_OK, f"ex({args.n}) = {ex} (brute force)"
    budget = Budget(_setting(args, config, "max_nodes"), _setting(args, config, "max_seconds"))
    kwargs = dict(seed=seed, threads=_setting(args, config, "threads"), checkpoint=args.checkpoint, guard=not args.no_guard)
    if args.candidate:
        cand, _ = _load_graph(args.candidate)
        verdict = verify_extremal_claim(args.n, fam, cand, budget=budget, **kwargs)
        code = EXIT_OK if verdict.exact else EXIT_BUDGET
        return verdict.to_dict(), code, f"candidate matches: {verdict.matches}, unique: {verdict.unique}"
    rep = turan_number(args.n, fam, budget=budget, **kwargs)
    code = EXIT_OK if rep.exact else EXIT_BUDGET
    if rep.exact:
        summary = f"ex({args.n}) = {rep.ex_value}, {len(rep.extremal)} extremal up to isomorphism"
    else:
        summary = f"ex({args.n}) >= {rep.ex_value} (budget exhausted: {rep.stop_reason})"
    return rep.to_dict(), code, summary


# -- distance and probes ---------------------------------------------------------


def _cmd_distance(args, config):
    g, _ = _load_graph(_need(args.graph, "--graph"))
    mode = "exact" if args.exact else "heuristic" if args.heuristic else "auto"
    seed = _setting(args, config, "seed")
    rep = distance_to_complete_blowups(g, args.t, mode=mode, seed=seed, restarts=_setting(args, config, "distance_restarts"))
    return rep.to_dict(), EXIT_OK, f"distance {rep.value} ({rep.mode})"


def _cmd_probe(args, config):
    seed = _setting(args, config, "seed")
    if args.kind == "blowup-edges":
        rep = max_blowup_edges(_need(args.t, "--t"), _need(args.r, "--r"), _need(args.n, "--n"))
        return rep.to_dict(), EXIT_OK, f"m = {rep.value} with parts {list(rep.parts)}"
    g, _ = _load_graph(_need(args.graph, "--graph"))
    if args.kind == "stability":
        rep = stability_probe(g, _need(args.t, "--t"), args.alpha, args.eps, seed=seed)
        out = rep.to_dict()
        out["seed"] = seed
        return out, EXIT_OK, f"inequality holds: {rep.inequality_holds}, degree condition: {rep.degree_condition_holds}"
    mu = _floats(_need(args.mu, "--mu"))
    if args.kind == "sidolem":
        rep = sidolem_probe(g, mu, _need(args.u, "--u"), args.eps)
    else:
        rep = sidorenko_probe(g, mu, _need(args.t, "--t"))
    out = rep.to_dict()
    out["seed"] = seed
    code = EXIT_OK if rep.holds else EXIT_FALSE
    return out, code, f"holds: {rep.holds}"


def _cmd_suite(args, config):
    only = set(_ints(args.only)) if args.only else None
    results = []
    for crit in acceptance.CRITERIA:
        number = int(crit.__name__.rsplit("_", 1)[1])
        if only and number not in only:
            continue
        res = crit()
        print(res.line, file=sys.stderr)
        results.append(res)
    ok = all(r.passed for r in results)
    out = {"suite": "acceptance", "passed": ok, "criteria": [r.to_dict() for r in results]}
    return out, EXIT_OK if ok else EXIT_FALSE, f"{sum(r.passed for r in results)}/{len(results)} criteria passed"


# -- parser ----------------------------------------------------------------------


def build_parser():
    p = _Parser(prog="hypext", description="Hypergraph extensions, Lagrangians and Turán numbers.")
    p.add_argument("--config", help="JSON file with default budgets, tolerances and seed")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="build graphs")
    c.add_argument("kind", choices=["ext", "wext", "expand", "pad", "complete", "edgeless", "blowup"])
    c.add_argument("--in", "--graph", dest="graph")
    c.add_argument("--r", type=int)
    c.add_argument("--t", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--parts", help="comma separated part sizes for blowup")
    c.add_argument("--no-share", action="store_true", help="wext: fresh vertices are never shared")

    k = sub.add_parser("check", help="colorability, criticality, spikes, freeness")
    k.add_argument("what", choices=["colorable", "critical", "freely-critical", "spike", "sharply-critical", "free"])
    k.add_argument("--graph", "--in", dest="graph")
    k.add_argument("--t", type=int)
    k.add_argument("--edge", help="comma separated vertices or labels")
    k.add_argument("--vertex")
    k.add_argument("--family", help="forbidden family JSON for 'free'")
    k.add_argument("--relabel-closure", action="store_true")

    lg = sub.add_parser("lagrangian", help="maximum density over probability weights")
    lg.add_argument("--graph", "--in", dest="graph")
    lg.add_argument("--certify", action="store_true")
    lg.add_argument("--restarts", type=int)
    lg.add_argument("--max-iters", type=int)
    lg.add_argument("--tol", type=float)
    lg.add_argument("--seed", type=int)

    fc = sub.add_parser("fcurve", help="tabulate f and find its decreasing tail")
    fc.add_argument("--r", type=int, required=True)
    fc.add_argument("--t", type=float, required=True)
    fc.add_argument("--range", required=True, help="lo:hi[:step]")

    tu = sub.add_parser("turan", help="exact Turán number search")
    tu.add_argument("--n", type=int, required=True)
    tu.add_argument("--forbid", required=True)
    tu.add_argument("--oracle-bruteforce", action="store_true")
    tu.add_argument("--candidate", help="graph JSON to compare with the extremal graphs")
    tu.add_argument("--max-nodes", type=int)
    tu.add_argument("--max-seconds", type=float)
    tu.add_argument("--checkpoint")
    tu.add_argument("--threads", type=int)
    tu.add_argument("--no-guard", action="store_true")
    tu.add_argument("--seed", type=int)

    d = sub.add_parser("distance", help="edit distance to blowups of K_t")
    d.add_argument("--graph", "--in", dest="graph")
    d.add_argument("--t", type=int, required=True)
    mode = d.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--heuristic", action="store_true")
    d.add_argument("--seed", type=int)
    d.add_argument("--distance-restarts", type=int)

    pr = sub.add_parser("probe", help="inequality probes")
    pr.add_argument("kind", choices=["sidolem", "sidorenko", "stability", "blowup-edges"])
    pr.add_argument("--graph", "--in", dest="graph")
    pr.add_argument("--mu", help="comma separated weights")
    pr.add_argument("--u", type=int)
    pr.add_argument("--eps", type=float, default=0.1)
    pr.add_argument("--alpha", type=float, default=1.0)
    pr.add_argument("--t", type=int)
    pr.add_argument("--r", type=int)
    pr.add_argument("--n", type=int)
    pr.add_argument("--seed", type=int)

    su = sub.add_parser("suite", help="run the acceptance suite")
    su.add_argument("name", choices=["acceptance"])
    su.add_argument("--only", help="comma separated criterion numbers")
    return p


COMMANDS = {
    "construct": _cmd_construct,
    "check": _cmd_check,
    "lagrangian": _cmd_lagrangian,
    "fcurve": _cmd_fcurve,
    "turan": _cmd_turan,
    "distance": _cmd_distance,
    "probe": _cmd_probe,
    "suite": _cmd_suite,
}


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    # parser diagnostics and per-criterion suite lines go to the caller's stream
    with contextlib.redirect_stderr(stderr):
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
    try:
        config = _load_config(args.config)
        with contextlib.redirect_stderr(stderr):
            out, code, summary = COMMANDS[args.command](args, config)
    except GraphParseError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except InvalidArgument as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=stderr)
        return EXIT_BUDGET
    json.dump(out, stdout, default=_jsonable)
    stdout.write("\n")
    print(summary, file=stderr)
    return code


def _jsonable(x):
    if hasattr(x, "item"):
        return x.item()
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    if hasattr(x, "numerator"):
        return float(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def main():
    raise SystemExit(run())
