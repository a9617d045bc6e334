"""Command-line entry point.  Every command prints JSON; exit codes:
0 pass, 1 usage error, 2 certificate failure, 3 inconclusive (budget)."""
from __future__ import annotations

import argparse
import hashlib
import json
import sys

from . import __version__
from .analysis import (
    Certificate,
    NoWitnessFound,
    SearchSpaceExceeded,
    certify_triples,
    distance_certify,
    is_c4_free,
    is_c4_saturated,
    is_subgraph_embedding,
    kst_bound,
    max_independent_set,
    petersen_brute_search,
    petersen_graph,
)
from .fields import FieldError, build_base_field, extension_for_q, field_for_q, prime_power, quadratic_ext
from .graphs import (
    GraphError,
    cayley_sum_graph,
    er_graph,
    export,
    h_graph,
    subfield_construction,
    subfield_params,
)
from .iso import build_g3, verify_isomorphism
from .sidon import bose_chowla, lindstrom_shift
from .suite import RunReport, _petersen_certificate, run_suite, theta_params, write_atomic

FAMILIES = ["cayley", "er-dot", "er-alt", "h", "subfield", "g1", "g2", "g3"]


class UsageError(Exception):
    pass


def _ctx(args):
    try:
        prime_power(args.q)
    except FieldError:
        raise UsageError(f"{args.q} is not a prime power")
    return extension_for_q(args.q, args.alpha, args.beta)


def build_family(args):
    """Return (graph, ctx, extra) for --family at --q."""
    family = args.family
    if family == "subfield":
        if args.p is not None and args.t is not None:
            p, t = args.p, args.t
        else:
            p, t = subfield_params(args.q)
        g, rep = subfield_construction(p, t)
        return g, None, rep.to_dict()
    ctx = _ctx(args)
    if family in ("er-dot", "er-alt"):
        return er_graph(ctx.base, family[3:]), ctx, None
    S = bose_chowla(ctx)
    G, meta = cayley_sum_graph(S)
    if family == "cayley":
        return G, ctx, {"absolute_points": meta.absolute_points}
    if family == "h":
        return h_graph(G, meta), ctx, {"special_x": meta.special_x}
    asm = build_g3(G, S, ctx)
    return {"g1": asm.g1, "g2": asm.g2, "g3": asm.g3}[family], ctx, None


def emit(obj, fh=None):
    fh = fh or sys.stdout
    fh.write(json.dumps(obj, indent=2) + "\n")


def cmd_field(args) -> int:
    F = build_base_field(args.p, args.m)
    if args.alpha is None and args.beta is None:
        from .fields import find_primitive_quadratic

        E = find_primitive_quadratic(F)
    else:
        E = quadratic_ext(F, args.alpha, args.beta)
    emit({**E.describe(), "mu": E.mu})
    return 0


def cmd_sidon(args) -> int:
    ctx = _ctx(args)
    S = bose_chowla(ctx)
    L = lindstrom_shift(ctx, S)
    out = {**theta_params(ctx), **S.to_dict(), "lindstrom": L.to_dict()}
    if args.format == "text":
        print(f"q = {S.q}, n = {S.n}, alpha = {ctx.alpha}, beta = {ctx.beta}")
        print("A =", " ".join(map(str, S.elements)))
        print("labels (i, m_i, b_i):", " ".join(str(lab.as_tuple()) for lab in S.labels))
        print("H =", " ".join(map(str, S.H)))
        for k, v in L.to_dict().items():
            print(f"{k}: {v}")
    else:
        emit(out)
    return 0


def cmd_build(args) -> int:
    g, ctx, extra = build_family(args)
    data = export(g, args.format)
    if args.out and args.out != "-":
        digest = write_atomic(args.out, data)
        emit({"graph": g.name, "n": g.n, "edges": g.edge_count(), "format": args.format, "out": args.out, "sha256": digest, "extra": extra})
    else:
        sys.stdout.write(data.decode() + "\n")
    return 0


def cmd_check(args) -> int:
    claim = args.claim
    ctx = _ctx(args)
    S = bose_chowla(ctx)
    G, meta = cayley_sum_graph(S)
    if claim in ("c4free", "saturated", "kst"):
        if args.family is None:
            args.family = "er-dot" if claim == "kst" else "cayley"
        g, _, _ = build_family(args)
        if claim == "c4free":
            cert = is_c4_free(g, args.jobs)
        elif claim == "saturated":
            cert = is_c4_saturated(g, args.jobs)
        else:
            b = kst_bound(g.n)
            cert = Certificate("kst-bound", {"graph": g.name, "n": g.n}, b.admits(g.edge_count()), None, {"edges": g.edge_count(), "bound_floor": b.floor})
    elif claim == "distance":
        cert = distance_certify(G, S)
    elif claim == "triples":
        cert = certify_triples(S)
    elif claim == "lindstrom":
        L = lindstrom_shift(ctx, S)
        ok = L.shift_ok and L.frobenius_ok and L.special_ok is not False
        cert = Certificate("lindstrom-shift", {"q": args.q}, ok, None, L.to_dict())
    elif claim == "petersen":
        cert = _petersen_certificate(build_g3(G, S, ctx), er_graph(ctx.base, "alt"))
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(claim)
    emit(cert.to_dict())
    return {True: 0, False: 2, None: 3}[cert.passed]


def cmd_iso(args) -> int:
    ctx = _ctx(args)
    S = bose_chowla(ctx)
    G, _ = cayley_sum_graph(S)
    asm = build_g3(G, S, ctx)
    cert = verify_isomorphism(asm)
    emit({**theta_params(ctx), "stages": asm.stage_edges(), "phi": asm.phi_table(), "certificate": cert.to_dict()})
    return 0 if cert else 2


def cmd_mis(args) -> int:
    if args.family is None:
        args.family = "cayley"
    g, ctx, _ = build_family(args)
    sidon = bose_chowla(ctx) if args.family == "cayley" else None
    res = max_independent_set(g, budget=args.budget, sidon=sidon)
    emit({"graph": g.name, "n": g.n, **res.to_dict()})
    return 0 if res.method == "exact" else 3


def cmd_petersen(args) -> int:
    ctx = _ctx(args)
    if args.brute:
        er = er_graph(ctx.base, "dot")
        try:
            emb = petersen_brute_search(er, max_n=max(64, er.n))
        except SearchSpaceExceeded as exc:
            emit({"graph": er.name, "found": None, "reason": str(exc)})
            return 3
        found = emb is not None and is_subgraph_embedding(petersen_graph(), er, emb)
        emit({"graph": er.name, "found": found, "embedding": emb})
        return 0 if found else 2
    S = bose_chowla(ctx)
    G, _ = cayley_sum_graph(S)
    cert = _petersen_certificate(build_g3(G, S, ctx), er_graph(ctx.base, "alt"))
    emit(cert.to_dict())
    return {True: 0, False: 2, None: 3}[cert.passed]


def cmd_suite(args) -> int:
    try:
        prime_power(args.q)
    except FieldError:
        raise UsageError(f"{args.q} is not a prime power")
    report: RunReport = run_suite(args.q, args.alpha, args.beta, jobs=args.jobs, seed=args.seed, mis_budget=args.budget)
    if args.out:
        text = report.to_json().encode()
        write_atomic(args.out, text)
        body = report.to_json(timings=False).encode()
        summary = {
            "out": args.out,
            "exit_code": report.exit_code,
            "report_sha256_excluding_timings": hashlib.sha256(body).hexdigest(),
            "verdicts": {c.claim_id: c.verdict for c in report.certificates},
        }
        emit(summary)
    else:
        emit(report.to_dict())
    return report.exit_code


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sidonpolar", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def theta(p):
        p.add_argument("--alpha", type=int, help="theta^2 = alpha*theta + beta (element encoding)")
        p.add_argument("--beta", type=int)

    def common(p, q=True):
        if q:
            p.add_argument("--q", type=int, required=True)
        theta(p)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("field", help="base field modulus and primitive quadratic")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    theta(p)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("sidon", help="A(q,theta), labels, H and Lindstrom data")
    common(p)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.set_defaults(func=cmd_sidon)

    for name in ("build", "export"):
        p = sub.add_parser(name, help="build a graph family and write it out")
        common(p)
        p.add_argument("--family", choices=FAMILIES, required=True)
        p.add_argument("--p", type=int)
        p.add_argument("--t", type=int)
        p.add_argument("--out", help="output file (omit or '-' for stdout)")
        p.add_argument("--format", choices=["graph6", "dimacs", "edges", "labelled"], default="graph6")
        p.set_defaults(func=cmd_build)

    p = sub.add_parser("check", help="run one certifier")
    common(p)
    p.add_argument("--claim", required=True, choices=["c4free", "saturated", "distance", "triples", "petersen", "lindstrom", "kst"])
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--p", type=int)
    p.add_argument("--t", type=int)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("iso", help="stage counts, phi table and isomorphism certificate")
    common(p)
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("mis", help="maximum independent set")
    common(p)
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--p", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_mis)

    p = sub.add_parser("petersen", help="Petersen witness in G3 / ER_q")
    common(p)
    p.add_argument("--brute", action="store_true", help="backtracking search directly in ER_q")
    p.set_defaults(func=cmd_petersen)

    p = sub.add_parser("suite", help="full certificate battery for one q")
    common(p)
    p.add_argument("--out", help="write the RunReport JSON here")
    p.add_argument("--budget", type=int, help="MIS node budget")
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        return args.func(args)
    except (UsageError, FieldError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NoWitnessFound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
