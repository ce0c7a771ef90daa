"""Command-line front end. Every command prints one JSON document.

Exit codes: 0 success or verified, 1 verified false, 2 invalid input,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import acceptance, links, serialization as ser
from .errors import ResourceError, ValidationError
from .gset import fixed_point_character, gassmann_search, is_gassmann, is_isomorphic, mu
from .nslattice import BlowupP2, neg_one_classes, parse_lattice, rational_degree_classes
from .surface import mj_set, ns_character, picard_rank, virtual_ns_set

EXIT_OK, EXIT_FALSE, EXIT_INVALID, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


def _load(source: str):
    """Read JSON from a path, from stdin ("-"), or inline when it starts with '{'."""
    try:
        if source == "-":
            return json.load(sys.stdin)
        if source.lstrip().startswith("{"):
            return json.loads(source)
        return json.loads(Path(source).read_text())
    except FileNotFoundError:
        raise ValidationError(f"input file not found: {source}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON in {source}: {exc}") from None


# ---------------------------------------------------------------------------
# handlers return (document, exit code)


def cmd_gassmann_check(a):
    A = ser.gset_from_json(_load(a.a))
    B = ser.gset_from_json(_load(a.b))
    if A.group != B.group:
        raise ValidationError("the two G-sets are over different groups")
    g = is_gassmann(A, B)
    doc = {"gassmann": g, "isomorphic": is_isomorphic(A, B),
           "character_A": fixed_point_character(A).tolist(),
           "character_B": fixed_point_character(B).tolist(),
           "verdict": "gassmann" if g else "not_gassmann"}
    return doc, EXIT_OK if g else EXIT_FALSE


def cmd_gassmann_search(a):
    G = ser.group_from_json(_load(a.group))
    pairs = gassmann_search(G, a.max_degree, transitive_only=a.transitive)
    return {"group": ser.group_to_json(G), "group_order": G.order, "max_degree": a.max_degree,
            "transitive_only": a.transitive, "count": len(pairs),
            "pairs": [ser.gassmann_pair_to_json(p) for p in pairs]}, EXIT_OK


def cmd_lattice_enumerate(a):
    L = parse_lattice(a.kind)
    return ser.classlist_to_json(rational_degree_classes(L, a.j)), EXIT_OK


def cmd_lattice_neg_curves(a):
    return ser.classlist_to_json(neg_one_classes(BlowupP2(a.r))), EXIT_OK


def cmd_surface_ns_char(a):
    S = ser.model_from_json(_load(a.model))
    chi = ns_character(S)
    doc = {"tag": S.tag, "ns_character": chi.tolist(), "picard_rank": picard_rank(S)}
    if S.tag != "P2Blowup":
        expect = mu(virtual_ns_set(S))
        for Z in S.stack:
            expect = expect + fixed_point_character(Z)
        doc["mu_virtual_ns_set"] = expect.tolist()
        doc["consistent"] = bool((expect == chi).all())
    return doc, EXIT_OK if doc.get("consistent", True) else EXIT_FALSE


def cmd_surface_mj(a):
    S = ser.model_from_json(_load(a.model))
    M = mj_set(S, a.j)
    doc = ser.gset_summary(M)
    doc["j"] = a.j
    return doc, EXIT_OK


def cmd_links_c(a):
    w = ser.word_from_json(_load(a.word))
    ev = links.evaluate_word(w)
    return {"c": ser.burnside_to_json(ev.c), "ledger": ev.ledger.to_json(), "trace": ev.trace,
            "final": ser.model_to_json(ev.final)}, EXIT_OK


def cmd_links_verify_table(a):
    doc = links.verify_table(a.assignments, a.seed)
    return doc, EXIT_OK if doc["verdict"] == "ok" else EXIT_FALSE


def cmd_links_loops(a):
    S = ser.model_from_json(_load(a.model))
    rep = links.loop_invariance_check(S, a.trials, a.max_len, a.seed)
    return rep.to_json(), EXIT_OK if rep.ok else EXIT_FALSE


def cmd_links_rationality_center(a):
    w = ser.word_from_json(_load(a.word))
    ev = links.evaluate_word(w)
    return {"center": ser.burnside_to_json(links.rationality_center(w)),
            "final": ser.model_to_json(ev.final), "trace": ev.trace}, EXIT_OK


def cmd_examples_cubic(a):
    doc = links.cubic_example_suite()
    return doc, EXIT_OK if doc["verdict"] == "ok" else EXIT_FALSE


def cmd_examples_dp5_chain(a):
    doc = links.dp5_chain_example()
    return doc, EXIT_OK if doc["verdict"] == "ok" else EXIT_FALSE


def cmd_acceptance(a):
    results = acceptance.run(a.criterion or None)
    ok = all(r["passed"] for r in results)
    return {"results": results, "verdict": "ok" if ok else "failed"}, EXIT_OK if ok else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="factorcenter", description=__doc__.splitlines()[0])
    p.add_argument("-o", "--output", help="write the JSON result here instead of stdout")
    top = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    g = top.add_parser("gassmann").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    c = g.add_parser("check", help="compare two G-sets")
    c.add_argument("a")
    c.add_argument("b")
    c.set_defaults(fn=cmd_gassmann_check)
    c = g.add_parser("search", help="non-isomorphic Gassmann pairs of a group")
    c.add_argument("group")
    c.add_argument("--max-degree", type=int, required=True)
    c.add_argument("--transitive", action="store_true")
    c.set_defaults(fn=cmd_gassmann_search)

    g = top.add_parser("lattice").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    c = g.add_parser("enumerate", help="rational classes of degree j")
    c.add_argument("--kind", required=True, help="blowup:<r> or quadric")
    c.add_argument("--j", type=int, required=True)
    c.set_defaults(fn=cmd_lattice_enumerate)
    c = g.add_parser("neg-curves", help="(-1)-classes on a plane blow-up")
    c.add_argument("--r", type=int, required=True)
    c.set_defaults(fn=cmd_lattice_neg_curves)

    g = top.add_parser("surface").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    c = g.add_parser("ns-char", help="character of the Neron-Severi lattice")
    c.add_argument("model")
    c.set_defaults(fn=cmd_surface_ns_char)
    c = g.add_parser("mj", help="G-set of rational classes of degree j")
    c.add_argument("model")
    c.add_argument("--j", type=int, required=True)
    c.set_defaults(fn=cmd_surface_mj)

    g = top.add_parser("links").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    c = g.add_parser("c", help="factorization center of a word")
    c.add_argument("word")
    c.set_defaults(fn=cmd_links_c)
    c = g.add_parser("verify-table", help="delta rows and mu balance for the link table")
    c.add_argument("--assignments", type=int, default=100)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(fn=cmd_links_verify_table)
    c = g.add_parser("loops", help="random loops must have c = 0")
    c.add_argument("model")
    c.add_argument("--trials", type=int, required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--max-len", type=int, default=12)
    c.set_defaults(fn=cmd_links_loops)
    c = g.add_parser("rationality-center", help="c + [pt] for a word from the plane")
    c.add_argument("word")
    c.set_defaults(fn=cmd_links_rationality_center)

    g = top.add_parser("examples").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    g.add_parser("cubic", help="Klein-four cubic surfaces").set_defaults(fn=cmd_examples_cubic)
    g.add_parser("dp5-chain", help="loop through dP8 and dP5").set_defaults(fn=cmd_examples_dp5_chain)

    c = top.add_parser("acceptance", help="run acceptance checks")
    c.add_argument("--criterion", type=int, action="append", choices=range(1, 11))
    c.set_defaults(fn=cmd_acceptance)
    return p


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
        doc, code = args.fn(args)
    except ValidationError as exc:
        return _fail("validation_error", str(exc), EXIT_INVALID)
    except ResourceError as exc:
        return _fail("resource_error", str(exc), EXIT_RESOURCE)
    text = ser.dumps(doc)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(ser.dumps({"error": kind, "message": message, "exit_code": code}))
    return code


def main():
    sys.exit(run())
