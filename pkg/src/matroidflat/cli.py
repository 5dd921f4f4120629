"""Command-line front end.

Exit codes: 0 query answered / property holds, 1 property fails (a witness
is printed), 2 invalid input, 3 guard or budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

from . import flatness as FL
from . import pseudomod as P
from . import verify as V
from .documents import MatroidDocument, rank_table_document
from .errors import AxiomViolation, FlatFamilyMismatch, GuardExceeded, InvalidArgumentError

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_GUARD = 0, 1, 2, 3


class Outcome:
    def __init__(self, payload, lines, code=EXIT_OK):
        self.payload = payload
        self.lines = lines
        self.code = code


# ---------------------------------------------------------------------------
# helpers

def _load_doc(args) -> MatroidDocument:
    if args.corpus:
        return MatroidDocument.parse({"construction": "corpus", "name": args.corpus})
    if not args.input:
        raise InvalidArgumentError("no matroid given; use --input FILE|- or --corpus NAME")
    if args.input == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InvalidArgumentError(f"cannot read {args.input}: {exc.strerror}") from None
    return MatroidDocument.loads(text)


def _subset(m, text):
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        text = text[1:-1]
    items = [x.strip() for x in text.split(",") if x.strip()]
    return m.ground.mask(items)


def _fmt(m, mask):
    return m.ground.format(mask)


def summary(m):
    return {
        "name": m.name,
        "ground_size": m.size,
        "rank": m.full_rank,
        "flats": int(len(m.flats())),
        "cyclic_flats": int(len(m.cyclic_flats())),
    }


def _witness_lines(wit):
    if wit is None:
        return []
    members = ", ".join("{" + ",".join(x) + "}" for x in wit["members"])
    return [f"witness: {members}", f"witness delta: {wit['delta']}"]


# ---------------------------------------------------------------------------
# commands; each returns an Outcome

def cmd_rank(m, args):
    a = _subset(m, args.subset)
    r = m.rank(a)
    return Outcome({"subset": m.ground.labels_of(a), "rank": r}, [f"r({_fmt(m, a)}) = {r}"])


def cmd_closure(m, args):
    a = _subset(m, args.subset)
    c = m.closure(a)
    return Outcome({"subset": m.ground.labels_of(a), "closure": m.ground.labels_of(c)},
                   [f"cl({_fmt(m, a)}) = {_fmt(m, c)}"])


def _list_cmd(m, masks, what):
    items = [m.ground.labels_of(int(x)) for x in masks]
    lines = [f"{len(items)} {what}"]
    lines += [f"  {_fmt(m, int(x))}  rank {int(m.table[int(x)])}" for x in masks]
    return Outcome({"count": len(items), what.replace(" ", "_"): items}, lines)


def cmd_flats(m, args):
    return _list_cmd(m, m.flats(), "flats")


def cmd_cyclic_flats(m, args):
    return _list_cmd(m, m.cyclic_flats(), "cyclic flats")


def cmd_delta(m, args):
    if not args.member:
        raise InvalidArgumentError("give at least one --member")
    members = tuple(_subset(m, x) for x in args.member)
    c = FL.FlatCollection(m, members)
    d = FL.delta(c)
    return Outcome({"members": c.labels(), "delta": d},
                   [f"members: {', '.join(_fmt(m, x) for x in members)}", f"delta: {d}"])


def cmd_n_flat(m, args):
    res = FL.is_n_flat(m, args.n, budget=args.budget)
    wit = res.witness.to_json() if res.witness else None
    lines = [f"{args.n}-flat: {'yes' if res.holds else 'no'}"] + _witness_lines(wit)
    return Outcome({"n": args.n, "holds": res.holds, "witness": wit}, lines,
                   EXIT_OK if res.holds else EXIT_FAIL)


def cmd_flatness_degree(m, args):
    res = FL.flatness_degree(m, budget=args.budget, max_size=args.cap)
    body = res.to_json()
    lines = [f"flatness degree: {res.display()}"] + _witness_lines(body["witness"])
    sc = res.scope
    lines.append(f"search: {sc['search_space']}, sizes <= {sc['max_size_checked']} complete, "
                 f"{sc['nodes']} nodes")
    return Outcome(body, lines, EXIT_OK if res.certified else EXIT_GUARD)


def cmd_totally_flat(m, args):
    res = FL.flatness_degree(m, budget=args.budget, max_size=args.cap)
    if not res.certified:
        return Outcome({"totally_flat": None, "lower_bound": res.checked_up_to},
                       [f"totally flat: undecided, no violation up to size {res.checked_up_to}"], EXIT_GUARD)
    wit = res.witness.to_json() if res.witness else None
    lines = [f"totally flat: {'yes' if res.is_omega else 'no'}"] + _witness_lines(wit)
    return Outcome({"totally_flat": res.is_omega, "witness": wit}, lines,
                   EXIT_OK if res.is_omega else EXIT_FAIL)


def cmd_pseudomodular(m, args):
    rep = P.is_pseudomodular(m)
    return Outcome(rep.to_json(m.ground), [rep.describe(m.ground)],
                   EXIT_OK if rep else EXIT_FAIL)


def cmd_modular(m, args):
    rep = P.is_modular(m)
    if rep:
        lines = ["modular"]
    else:
        a, b = rep.a, rep.b
        lines = [f"not modular: A={_fmt(m, a)}, B={_fmt(m, b)}; r(A)+r(B)={m.rank(a) + m.rank(b)}, "
                 f"r(A∪B)+r(A∩B)={m.rank(a | b) + m.rank(a & b)}"]
    return Outcome(rep.to_json(m.ground), lines, EXIT_OK if rep else EXIT_FAIL)


def cmd_axioms(m, args):
    rep = m.check_axioms(exhaustive=args.exhaustive)
    body = {"ok": rep.ok}
    if not rep.ok:
        body.update({"axiom": rep.axiom, "A": m.ground.labels_of(rep.a),
                     "B": m.ground.labels_of(rep.b), "values": rep.values})
    return Outcome(body, [rep.describe(m.ground)], EXIT_OK if rep else EXIT_FAIL)


def _minor_outcome(m2, what):
    doc = rank_table_document(m2)
    return Outcome({"summary": summary(m2), "matroid": doc.to_json()},
                   [f"{what}: {m2.size} elements, rank {m2.full_rank}, {len(m2.flats())} flats",
                    doc.dumps()])


def cmd_dual(m, args):
    return _minor_outcome(m.dual(), "dual")


def cmd_restrict(m, args):
    return _minor_outcome(m.restrict(_subset(m, args.subset)), "deletion")


def cmd_contract(m, args):
    return _minor_outcome(m.contract(_subset(m, args.subset)), "contraction")


def cmd_corpus_list(args):
    entries = V.corpus_entries()
    payload = [{"name": e.name, "description": e.description} for e in entries]
    return Outcome({"entries": payload}, [f"{e.name:<10} {e.description}" for e in entries])


def cmd_corpus_run(args):
    rep = V.run_corpus(seed=args.seed, random_count=args.count)
    return Outcome(rep.to_json(), rep.table().splitlines(), EXIT_OK if rep.passed else EXIT_FAIL)


def cmd_identity_check(args):
    if args.n is not None:
        triples = [(args.n, args.l, args.m)]
    else:
        triples = [(n, l, k) for n in range(2, args.n_max + 1) for l in range(1, n) for k in range(1, n)]
    fails = []
    for n, l, k in triples:
        res = FL.binomial_identity_check(n, l, k)
        if not res.holds:
            fails.append({"n": n, "l": l, "m": k, "lhs": res.lhs, "rhs": res.rhs})
    lines = [f"checked {len(triples)} (n, l, m) triples, {len(fails)} failures"]
    if len(triples) == 1:
        res = FL.binomial_identity_check(*triples[0])
        lines.append(f"lhs = {res.lhs}, rhs = {res.rhs}")
    payload = {"checked": len(triples), "failures": fails}
    return Outcome(payload, lines, EXIT_FAIL if fails else EXIT_OK)


MATROID_COMMANDS = {
    "rank": cmd_rank,
    "closure": cmd_closure,
    "flats": cmd_flats,
    "cyclic-flats": cmd_cyclic_flats,
    "delta": cmd_delta,
    "n-flat": cmd_n_flat,
    "flatness-degree": cmd_flatness_degree,
    "totally-flat": cmd_totally_flat,
    "pseudomodular": cmd_pseudomodular,
    "modular": cmd_modular,
    "axioms": cmd_axioms,
    "dual": cmd_dual,
    "restrict": cmd_restrict,
    "contract": cmd_contract,
}


# ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON result document")
    common.add_argument("--no-timing", action="store_true", help="omit the timing field")

    src = argparse.ArgumentParser(add_help=False)
    src.add_argument("--input", metavar="FILE", help="matroid JSON document, or - for stdin")
    src.add_argument("--corpus", metavar="NAME", help="use a corpus matroid instead of --input")
    src.add_argument("--budget", type=int, default=FL.DEFAULT_BUDGET,
                     help="node budget for flatness searches (default %(default)s)")
    src.add_argument("--cap", type=int, default=None,
                     help="largest collection size searched by flatness-degree / totally-flat")

    ap = argparse.ArgumentParser(prog="matroidflat",
                                 description="Matroid flats, flatness degree and pseudomodularity.")
    sub = ap.add_subparsers(dest="command", required=True)
    parents = [common, src]

    for name in ("rank", "closure", "restrict", "contract"):
        p = sub.add_parser(name, parents=parents, help=f"{name} of a subset")
        p.add_argument("subset", help="comma-separated element labels, e.g. 1,2,3 (empty for ∅)")
    for name, text in (("flats", "list all flats"), ("cyclic-flats", "list cyclic flats"),
                       ("flatness-degree", "flatness degree φ(M)"), ("totally-flat", "is M totally flat"),
                       ("pseudomodular", "is M pseudomodular"), ("modular", "is M modular"),
                       ("dual", "dual matroid as a rank table")):
        sub.add_parser(name, parents=parents, help=text)
    p = sub.add_parser("delta", parents=parents, help="Δ of a collection of flats")
    p.add_argument("--member", action="append", metavar="SUBSET", help="a flat; repeat per member")
    p = sub.add_parser("n-flat", parents=parents, help="is M n-flat")
    p.add_argument("n", type=int)
    p = sub.add_parser("axioms", parents=parents, help="check the rank axioms")
    p.add_argument("--exhaustive", action="store_true", help="literal pairwise check (<= 12 elements)")

    p = sub.add_parser("corpus", help="regression corpus")
    csub = p.add_subparsers(dest="corpus_command", required=True)
    csub.add_parser("list", parents=[common])
    pr = csub.add_parser("run", parents=[common])
    pr.add_argument("--seed", type=int, default=0, help="seed for the random batches")
    pr.add_argument("--count", type=int, default=20, help="random matroids per batch")

    p = sub.add_parser("identity-check", parents=[common], help="binomial identity over a range")
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--n", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--m", type=int)
    return ap


def _emit(args, outcome, m, elapsed, out):
    if args.json:
        doc = {"command": args.command if args.command != "corpus" else f"corpus {args.corpus_command}"}
        if m is not None:
            doc["matroid"] = summary(m)
        doc["result"] = outcome.payload
        doc["exit_code"] = outcome.code
        if not args.no_timing:
            doc["timing"] = {"seconds": round(elapsed, 6)}
        out.write(json.dumps(doc, indent=2, ensure_ascii=False, default=_json_default) + "\n")
        return
    if m is not None:
        s = summary(m)
        label = f"{s['name']}: " if s["name"] else ""
        out.write(f"{label}{s['ground_size']} elements, rank {s['rank']}, "
                  f"{s['flats']} flats, {s['cyclic_flats']} cyclic flats\n")
    for line in outcome.lines:
        out.write(line + "\n")
    if not args.no_timing:
        out.write(f"time: {elapsed:.3f}s\n")


def _json_default(v):
    if isinstance(v, float) and math.isinf(v):
        return "omega"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def main(argv=None, out=None):
    out = out or sys.stdout
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "identity-check" and args.n is not None and (args.l is None or args.m is None):
        ap.error("--n needs --l and --m")
    t0 = time.perf_counter()
    m = None
    try:
        if args.command == "corpus":
            outcome = cmd_corpus_list(args) if args.corpus_command == "list" else cmd_corpus_run(args)
        elif args.command == "identity-check":
            outcome = cmd_identity_check(args)
        else:
            doc = _load_doc(args)
            m = doc.build(validate=args.command != "axioms")
            outcome = MATROID_COMMANDS[args.command](m, args)
    except GuardExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (InvalidArgumentError, AxiomViolation, FlatFamilyMismatch) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(args, outcome, m, time.perf_counter() - t0, out)
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())
