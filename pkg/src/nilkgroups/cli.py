"""Command-line interface.

Subcommands::

    nilkgroups analyze --group <file|family expr> --k K [--method M]
    nilkgroups harness --max-order N --k 1,2,3 [--prop ID]
    nilkgroups freeprod malnormal|example2|embed ...
    nilkgroups magnus eval --m M --k K WORD

Exit codes: 0 everything holds, 1 a counterexample or failed property,
2 usage or parse error, 3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import __version__
from .errors import BadParams, NotAGroup, OrderLimitExceeded, ParseError, SearchBudgetExceeded
from .finite import (
    DEFAULT_ORDER_CAP,
    NOT_NILPOTENT,
    from_cayley_table,
    from_permutation_generators,
    nilpotency_class,
    parse_family_expr,
    parse_permutation,
)
from .freeprod import (
    DEFAULT_NODE_CAP,
    FiniteFactor,
    FreeNilpotentFactor,
    FreeProduct,
    bounded_malnormality,
    embed_conjugates,
    embed_remark,
    example2_check,
    remark_kernel_element,
)
from .harness import (
    PROPOSITIONS,
    build_default_corpus,
    exit_status,
    find_dichotomy_witness,
    run_all,
    witness_to_dict,
)
from .magnus import MAX_CLASS, MAX_RANK, MAX_WORD_LENGTH, collect_class2, magnus_image, parse_word
from .nilk import (
    DEFAULT_SUBGROUP_CAP,
    NTK_METHODS,
    eval_mal,
    eval_nil,
    eval_subgp,
    is_csnk,
    is_ntk,
    maximal_nilk_subgroups,
)

SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# group files


def parse_group_text(text, source="<input>", order_cap=DEFAULT_ORDER_CAP):
    """Parse a Cayley-table or permutation-generator description.

    Cayley::

        name C2          (optional)
        order 2
        0 1
        1 0

    Permutations::

        name S3          (optional)
        degree 3
        (1 2)
        (1 2 3)

    Blank lines and lines starting with ``#`` are ignored.
    """
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(no, ln) for no, ln in lines if ln and not ln.startswith("#")]
    name = None
    body = []
    header = None
    for no, ln in lines:
        word, _, rest = ln.partition(" ")
        if word == "name" and header is None and name is None:
            name = rest.strip() or None
        elif word in ("order", "degree") and header is None:
            try:
                value = int(rest)
            except ValueError:
                raise ParseError(f"expected '{word} <integer>'", line=no, column=len(word) + 2)
            header = (word, value, no)
        elif header is None:
            raise ParseError("expected an 'order n' or 'degree d' header", line=no, column=1)
        else:
            body.append((no, ln))
    if header is None:
        raise ParseError(f"{source}: empty group description", line=1)
    kind, value, hline = header
    if kind == "order":
        if value < 1:
            raise ParseError("order must be positive", line=hline)
        if value > order_cap:
            raise OrderLimitExceeded(f"order {value} exceeds cap {order_cap}")
        if len(body) != value:
            where = body[value][0] if len(body) > value else (body[-1][0] + 1 if body else hline + 1)
            raise ParseError(f"expected {value} table rows, found {len(body)}", line=where)
        rows = []
        for no, ln in body:
            parts = ln.split()
            if len(parts) != value:
                raise ParseError(f"row has {len(parts)} entries, expected {value}", line=no)
            row = []
            col = 1
            for tok in parts:
                col = ln.index(tok, col - 1) + 1
                if not tok.isdigit() or int(tok) >= value:
                    raise ParseError(f"bad entry {tok!r}", line=no, column=col)
                row.append(int(tok))
            rows.append(row)
        return from_cayley_table(rows, name=name or f"table({value})", order_cap=order_cap)
    perms = []
    for no, ln in body:
        try:
            perms.append(parse_permutation(ln, value))
        except ParseError as exc:
            col = (exc.position or 0) + 1
            raise ParseError(exc.bare_message, line=no, column=col) from None
    return from_permutation_generators(value, perms, name=name, order_cap=order_cap)


def parse_group_file(path, order_cap=DEFAULT_ORDER_CAP):
    """Read a group description from ``path`` (``"-"`` for stdin)."""
    if path == "-":
        return parse_group_text(sys.stdin.read(), "<stdin>", order_cap)
    with open(path) as fh:
        return parse_group_text(fh.read(), path, order_cap)


def resolve_group(source, order_cap=DEFAULT_ORDER_CAP):
    """A file path, ``-``, or a family expression such as ``dihedral(5)``."""
    if source == "-" or os.path.exists(source):
        G = parse_group_file(source, order_cap)
        G.provenance = G.provenance or f"file:{source}"
        return G
    return parse_family_expr(source, order_cap)


# ---------------------------------------------------------------------------
# reports


def _class_value(c):
    return "NotNilpotent" if c is NOT_NILPOTENT else c


def _verdict(G, v):
    return {"holds": v.holds, "method": v.method, "witness": witness_to_dict(G, v.witness)}


def _subgroup_summary(H):
    G = H.parent
    return {"order": H.order, "generators": [G.label(g) for g in H.generators()],
            "elements": list(H.elements())}


def analyze(G, k, methods=NTK_METHODS, subgroup_cap=DEFAULT_SUBGROUP_CAP):
    """Full analysis of one group as a JSON-ready dict."""
    ntk = {m: _verdict(G, is_ntk(G, k, m, subgroup_cap)) for m in methods}
    csn = {
        "structural": _verdict(G, is_csnk(G, k, "structural", subgroup_cap)),
        "sentences": _verdict(G, is_csnk(G, k, "sentences", subgroup_cap)),
    }
    sentences = {
        "Subgp": _verdict(G, eval_subgp(G, k)),
        "Nil": _verdict(G, eval_nil(G, k)),
        "Mal": _verdict(G, eval_mal(G, k)),
    }
    maxes = maximal_nilk_subgroups(G, k, subgroup_cap)
    nt_holds = all(v["holds"] for v in ntk.values())
    dich = None
    if nt_holds and not csn["structural"]["holds"]:
        dich = witness_to_dict(G, find_dichotomy_witness(G, k, subgroup_cap))
    consistent = (
        len({v["holds"] for v in ntk.values()}) == 1
        and csn["structural"]["holds"] == csn["sentences"]["holds"]
        and (not csn["structural"]["holds"] or nt_holds)
    )
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "analysis",
        "group": {"name": G.name, "order": G.order, "provenance": G.provenance},
        "k": k,
        "nilpotency_class": _class_value(nilpotency_class(G.whole())),
        "is_ntk": ntk,
        "is_csnk": csn,
        "sentences": sentences,
        "maximal_nilk_subgroups": [_subgroup_summary(H) for H in maxes],
        "dichotomy_witness": dich,
        "consistent": consistent,
        "parameters": {"subgroup_cap": subgroup_cap},
    }


def analysis_exit(report):
    if not report["consistent"]:
        return EXIT_FAIL
    verdicts = list(report["is_ntk"].values()) + list(report["is_csnk"].values())
    return EXIT_OK if all(v["holds"] for v in verdicts) else EXIT_FAIL


def harness_report(reports, max_order, k_list, props, subgroup_cap, timings=False):
    out = []
    for r in reports:
        entry = {
            "proposition": r.proposition,
            "k": r.k,
            "status": r.status,
            "groups_checked": r.groups_checked,
            "counterexamples": r.counterexamples,
            "skipped": r.skipped,
            "observations": r.observations,
            "parameters": r.parameters,
        }
        if timings:
            entry["elapsed"] = round(r.elapsed, 3)
        out.append(entry)
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "harness",
        "parameters": {"max_order": max_order, "k": list(k_list), "propositions": list(props),
                       "subgroup_cap": subgroup_cap},
        "reports": out,
        "exit_status": exit_status(reports),
    }


def emit_report(report, fmt="text"):
    """Serialize a report dict: ``json`` (sorted keys) or a fixed-layout ``text``."""
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    return _TEXT[report["kind"]](report)


def _fmt_witness(w):
    if not w:
        return "-"
    parts = [w["kind"]]
    for name, v in sorted(w["elements"].items()):
        parts.append(f"{name}={v['label'] if isinstance(v, dict) else v}")
    for name, H in sorted(w["subgroups"].items()):
        parts.append(f"{name}=<{', '.join(H['generators'])}> (order {H['order']})")
    return " ".join(parts)


def _text_analysis(r):
    g = r["group"]
    lines = [
        f"group      {g['name']} (order {g['order']})",
        f"k          {r['k']}",
        f"class      {r['nilpotency_class']}",
    ]
    for m, v in r["is_ntk"].items():
        lines.append(f"NT_k       {m:24s} {'holds' if v['holds'] else 'fails'}  {_fmt_witness(v['witness'])}")
    for m, v in r["is_csnk"].items():
        lines.append(f"CSN_k      {m:24s} {'holds' if v['holds'] else 'fails'}  {_fmt_witness(v['witness'])}")
    for m, v in r["sentences"].items():
        lines.append(f"sentence   {m:24s} {'holds' if v['holds'] else 'fails'}  {_fmt_witness(v['witness'])}")
    lines.append(f"maximal nil_k subgroups: {len(r['maximal_nilk_subgroups'])}")
    for H in r["maximal_nilk_subgroups"]:
        lines.append(f"  order {H['order']:4d}  <{', '.join(H['generators'])}>")
    if r["dichotomy_witness"]:
        lines.append(f"dichotomy  {_fmt_witness(r['dichotomy_witness'])}")
    lines.append(f"consistent {r['consistent']}")
    return "\n".join(lines) + "\n"


def _text_harness(r):
    p = r["parameters"]
    lines = [f"harness max-order {p['max_order']}  k {','.join(map(str, p['k']))}"]
    for rep in r["reports"]:
        line = (f"{rep['status'].upper():10s} {rep['proposition']:24s} k={rep['k']}  "
                f"groups={rep['groups_checked']:4d}  counterexamples={len(rep['counterexamples'])}")
        if rep["skipped"]:
            line += f"  skipped={len(rep['skipped'])}"
        if "elapsed" in rep:
            line += f"  {rep['elapsed']:.2f}s"
        lines.append(line)
        for ce in rep["counterexamples"]:
            lines.append(f"    {ce['group']}: {ce['reason']}")
    lines.append(f"exit status {r['exit_status']}")
    return "\n".join(lines) + "\n"


def _text_generic(r):
    lines = []
    for key in sorted(r):
        if key in ("schema_version", "kind"):
            continue
        lines.append(f"{key:18s} {json.dumps(r[key], sort_keys=True)}")
    return f"[{r['kind']}]\n" + "\n".join(lines) + "\n"


_TEXT = {
    "analysis": _text_analysis,
    "harness": _text_harness,
    "magnus": _text_generic,
    "freeprod": _text_generic,
}


# ---------------------------------------------------------------------------
# free products and words


def parse_factor(text, order_cap=DEFAULT_ORDER_CAP):
    """``nilpotent:M,K`` or ``finite:<group>``."""
    kind, _, rest = text.partition(":")
    if kind == "nilpotent":
        try:
            m, k = (int(v) for v in rest.split(","))
        except ValueError:
            raise ParseError(f"expected nilpotent:M,K, got {text!r}") from None
        return FreeNilpotentFactor(m, k)
    if kind == "finite":
        return FiniteFactor(resolve_group(rest, order_cap))
    raise ParseError(f"factor must be nilpotent:M,K or finite:<group>, got {text!r}")


def _check_word_caps(w, m, k, override):
    if override:
        return
    if m > MAX_RANK or k > MAX_CLASS:
        raise BadParams(f"rank/class above {MAX_RANK}/{MAX_CLASS}; pass --no-caps to override")
    if len(w) > MAX_WORD_LENGTH:
        raise BadParams(f"word longer than {MAX_WORD_LENGTH}; pass --no-caps to override")


def cmd_magnus(args):
    w = parse_word(args.word)
    _check_word_caps(w, args.m, args.k, args.no_caps)
    series = magnus_image(w, args.m, args.k)
    report = {
        "schema_version": SCHEMA_VERSION,
        "kind": "magnus",
        "word": str(w),
        "m": args.m,
        "k": args.k,
        "series": str(series),
        "is_identity": series.is_one(),
    }
    if args.compare is not None:
        v = parse_word(args.compare)
        _check_word_caps(v, args.m, args.k, args.no_caps)
        report["compare"] = str(v)
        report["equal"] = magnus_image(w * v.inverse(), args.m, args.k).is_one()
    if args.k <= 2:
        c = collect_class2(w, args.m)
        report["class2_coordinates"] = {
            "exponents": list(c.exponents),
            "commutators": {f"[x{j},x{i}]": v for (j, i), v in c.as_dict().items()},
        }
    sys.stdout.write(emit_report(report, args.format))
    return EXIT_OK


def _default_involution(G):
    for g in range(G.order):
        if g != G.identity and G.table[g][g] == G.identity:
            return g
    raise BadParams(f"{G.name} has no element of order 2")


def cmd_freeprod(args):
    if args.action == "malnormal":
        F = parse_factor(args.factor)
        P = FreeProduct.copies(F, args.copies)
        z = P.parse(args.z)
        v = bounded_malnormality(P, z, args.radius, args.exp_bound, args.seed, args.node_cap)
        report = {
            "schema_version": SCHEMA_VERSION, "kind": "freeprod", "action": "malnormal",
            "factor": repr(F), "copies": args.copies, "z": P.format(z),
            "holds": v.holds,
            "witness": (dict(v.witness.elements) if v.witness else None),
            "bounds": v.stats,
        }
        code = EXIT_OK if v.holds else EXIT_FAIL
    elif args.action == "example2":
        A = resolve_group(args.a)
        B = resolve_group(args.b)
        x = args.x if args.x is not None else _default_involution(A)
        y = args.y if args.y is not None else _default_involution(B)
        v = example2_check(A, x, B, y)
        report = {
            "schema_version": SCHEMA_VERSION, "kind": "freeprod", "action": "example2",
            "A": A.name, "B": B.name, "x": x, "y": y, "holds": v.holds, "computed": v.stats,
        }
        code = EXIT_OK if v.holds else EXIT_FAIL
    else:
        A = FreeNilpotentFactor(args.rank, args.nil_class)
        P = FreeProduct.copies(A, args.m)
        Q = FreeProduct.copies(A, 2)
        embed = embed_conjugates if args.conjugates else embed_remark
        if args.word is not None:
            w = P.parse(args.word)
            img = embed(args.m, w, A)
            report = {
                "schema_version": SCHEMA_VERSION, "kind": "freeprod", "action": "embed",
                "m": args.m, "word": P.format(w), "image": Q.format(img),
                "map": "conjugates" if args.conjugates else "remark",
            }
            code = EXIT_FAIL if (w != P.identity and img == Q.identity) else EXIT_OK
        else:
            rnd = random.Random(args.seed)
            homs = killed = 0
            first_killed = None
            for _ in range(args.samples):
                a, b = P.random_word(rnd), P.random_word(rnd)
                if embed(args.m, P.mul(a, b), A) == Q.mul(embed(args.m, a, A), embed(args.m, b, A)):
                    homs += 1
                if a != P.identity and embed(args.m, a, A) == Q.identity:
                    killed += 1
                    first_killed = first_killed or P.format(a)
            known = None
            if args.m >= 3:
                kw = remark_kernel_element(args.m, A)
                known = {"word": P.format(kw), "killed": embed(args.m, kw, A) == Q.identity}
            report = {
                "schema_version": SCHEMA_VERSION, "kind": "freeprod", "action": "embed",
                "m": args.m, "samples": args.samples, "seed": args.seed,
                "map": "conjugates" if args.conjugates else "remark",
                "homomorphism_ok": homs, "nontrivial_killed": killed,
                "first_killed": first_killed, "known_kernel_candidate": known,
            }
            injective = not killed and not (known and known["killed"])
            code = EXIT_OK if homs == args.samples and injective else EXIT_FAIL
    sys.stdout.write(emit_report(report, args.format))
    return code


def cmd_analyze(args):
    G = resolve_group(args.group)
    methods = (args.method,) if args.method else NTK_METHODS
    report = analyze(G, args.k, methods, args.subgroup_cap)
    sys.stdout.write(emit_report(report, args.format))
    return analysis_exit(report)


def cmd_harness(args):
    k_list = [int(v) for v in args.k.split(",") if v.strip()]
    if not k_list:
        raise BadParams("--k needs at least one value")
    props = args.prop or list(PROPOSITIONS)
    corpus = build_default_corpus(args.max_order)
    reports = run_all(corpus, k_list, props, args.subgroup_cap, args.jobs)
    report = harness_report(reports, args.max_order, k_list, props, args.subgroup_cap,
                            args.timings)
    sys.stdout.write(emit_report(report, args.format))
    return report["exit_status"]


def build_parser():
    parser = argparse.ArgumentParser(prog="nilkgroups", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("analyze", help="decide NT_k / CSN_k for one group")
    p.add_argument("--group", required=True, help="group file, '-' for stdin, or e.g. dihedral(5)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=NTK_METHODS)
    p.add_argument("--subgroup-cap", type=int, default=DEFAULT_SUBGROUP_CAP)
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("harness", help="verify all propositions on the default corpus")
    p.add_argument("--max-order", type=int, default=48)
    p.add_argument("--k", default="1,2,3", help="comma-separated list")
    p.add_argument("--prop", action="append", choices=PROPOSITIONS)
    p.add_argument("--subgroup-cap", type=int, default=DEFAULT_SUBGROUP_CAP)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timings", action="store_true", help="include elapsed seconds (not deterministic)")
    common(p)
    p.set_defaults(func=cmd_harness)

    p = sub.add_parser("freeprod", help="free product experiments")
    p.add_argument("action", choices=("malnormal", "example2", "embed"))
    p.add_argument("--factor", default="nilpotent:2,2", help="nilpotent:M,K or finite:<group>")
    p.add_argument("--copies", type=int, default=2)
    p.add_argument("--z", default="0:x1 | 1:x1")
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--exp-bound", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP)
    p.add_argument("--a", default="cyclic(2)")
    p.add_argument("--b", default="cyclic(2)")
    p.add_argument("--x", type=int)
    p.add_argument("--y", type=int)
    p.add_argument("--m", type=int, default=2, help="copies in the source of embed")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--nil-class", type=int, default=2)
    p.add_argument("--word", help="FPWord to embed; random samples when omitted")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--conjugates", action="store_true",
                   help="use copy i -> a_i^-1 C a_i for every copy (injective for all m)")
    common(p)
    p.set_defaults(func=cmd_freeprod)

    p = sub.add_parser("magnus", help="words in free nilpotent groups")
    p.add_argument("action", choices=("eval",))
    p.add_argument("word")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--compare", help="second word; reports equality")
    p.add_argument("--no-caps", action="store_true")
    common(p)
    p.set_defaults(func=cmd_magnus)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except SearchBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ParseError, NotAGroup, BadParams, OrderLimitExceeded, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
