"""Command line entry point: ``cowpv <command> ...``.

Exit status: 0 success / PASS, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import cowp, pda
from .demonstrative import (
    EmbeddingError,
    check_demonstrative,
    dump_maps,
    induced_embedding,
    load_spec,
    relators_hold,
)
from .groups import (
    GroupError,
    identity_endomorphism,
    load_group,
    make_endomorphism,
    power_endomorphism,
    standard_group,
    trivial_endomorphism,
)
from .thompson import (
    ThompsonError,
    evaluate_v_word,
    evaluate_word,
    format_pair,
    in_LG,
    is_identity,
    make_context,
    parse_word,
    phi_projection,
    rotations,
)

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def load_context(args):
    """Group, theta and generating subset from the common flags."""
    theta_image = None
    path = Path(args.group)
    if path.exists():
        G, theta_image = load_group(path)
    else:
        G = standard_group(args.group)
    spec = args.theta
    if spec is None:
        theta = make_endomorphism(G, theta_image) if theta_image else identity_endomorphism(G)
    elif spec == "identity":
        theta = identity_endomorphism(G)
    elif spec == "trivial":
        theta = trivial_endomorphism(G)
    elif spec.startswith("power:"):
        theta = power_endomorphism(G, int(spec.split(":", 1)[1]))
    elif Path(spec).exists():
        _, image = load_group(spec)
        if image is None:
            raise UsageError(f"{spec}: no 'theta' field")
        theta = make_endomorphism(G, image)
    else:
        raise UsageError(f"--theta: expected identity, trivial, power:<k> or a file, got {spec!r}")
    gens = ()
    if args.gens:
        gens = tuple(G.index(n.strip()) for n in args.gens.split(",") if n.strip())
    return make_context(G, theta, gens)


def _parse_sample(text):
    if not text:
        return None
    try:
        count, length = text.lower().split("x")
        return int(count), int(length)
    except ValueError:
        raise UsageError(f"--sample: expected <count>x<len>, got {text!r}") from None


def _fmt_word(word) -> str:
    return " ".join(word) if word else "ε"


def cmd_eval(args, out):
    ctx = load_context(args)
    word = parse_word(args.word, ctx)
    x = evaluate_word(word, ctx)
    p = phi_projection(x)
    print(f"word: {_fmt_word(word)}", file=out)
    print(f"leaves: {format_pair(x)}", file=out)
    print(f"identity: {str(is_identity(x)).lower()}", file=out)
    print(f"in L_G: {str(in_LG(x)).lower()}", file=out)
    print("phi: " + " ".join(f"{d or 'ε'}:{r or 'ε'}" for d, r in p.leaves), file=out)
    return OK


def _machine(args, ctx):
    return cowp.build(ctx)


def cmd_pda(args, out):
    ctx = load_context(args)
    if args.action == "build":
        m = _machine(args, ctx)
        text = pda.export(m.pda, "structured")
        _write(args.out, text, out)
        print(f"states: {len(m.pda.states)}, transitions: {len(m.pda.transitions)}", file=out)
        return OK
    if args.action == "export":
        m = _machine(args, ctx)
        _write(args.out, pda.export(m.pda, args.format), out)
        return OK
    # accept
    if args.word is None:
        raise UsageError("pda accept needs a word")
    word = parse_word(args.word, ctx)
    if args.machine:
        machine = pda.load_structured(Path(args.machine).read_text())
    else:
        machine = _machine(args, ctx).pda
    first = None
    for j, rot in enumerate(rotations(word)):
        verdict = pda.accepts(machine, rot)
        print(f"rotation {j}: {_fmt_word(rot)}: {'accept' if verdict else 'reject'}", file=out)
        if verdict and first is None:
            first = j
    if first is None:
        print("member: no (all rotations rejected)", file=out)
    else:
        print(f"member: yes, rotation {first}", file=out)
    return OK


def _write(path, text, out):
    if path in (None, "-"):
        out.write(text)
    else:
        Path(path).write_text(text)


def cmd_crossval(args, out):
    ctx = load_context(args)
    if args.max_len < 0:
        raise UsageError("--max-len must be >= 0")
    sample = _parse_sample(args.sample)
    m = cowp.build(ctx)
    reports = cowp.cross_validate(m, args.max_len, sample, args.seed)
    bad = cowp.disagreements(reports)
    counts = {
        "words": len(reports),
        "nontrivial_accepted": sum(r.oracle_nontrivial and r.agree for r in reports),
        "trivial_rejected": sum(not r.oracle_nontrivial and r.agree for r in reports),
        "false_accepts": sum(not r.oracle_nontrivial and not r.agree for r in reports),
        "missed": sum(r.oracle_nontrivial and not r.agree for r in reports),
    }
    summary = {
        "group": list(ctx.group.names),
        "theta": [ctx.group.names[v] for v in ctx.theta.image],
        "gens": [ctx.group.names[g] for g in ctx.gens],
        "max_len": args.max_len,
        "sample": list(sample) if sample else None,
        "seed": args.seed,
        "counts": counts,
        "disagreements": [_fmt_word(r.word) for r in bad],
    }
    lines = [f"# group {','.join(summary['group'])} theta {','.join(summary['theta'])} "
             f"max_len {args.max_len} sample {args.sample or '-'} seed {args.seed}",
             "# word\toracle_nontrivial\trotation\tagree"]
    for r in reports:
        rot = "-" if r.rotation_accepted is None else str(r.rotation_accepted)
        lines.append(f"{_fmt_word(r.word)}\t{int(r.oracle_nontrivial)}\t{rot}\t{int(r.agree)}")
    lines += [f"# {k}: {v}" for k, v in counts.items()]
    if args.out:
        Path(args.out).write_text("\n".join(lines) + "\n")
        Path(args.out).with_suffix(".json").write_text(json.dumps(summary, indent=1) + "\n")
    for k, v in counts.items():
        print(f"{k}: {v}", file=out)
    print(f"disagreements: {len(bad)}", file=out)
    for r in bad[:20]:
        print(f"  {_fmt_word(r.word)}: oracle {r.oracle_nontrivial}, rotation {r.rotation_accepted}", file=out)
    return FAILED if bad else OK


def _demo_gens(args):
    if args.spec:
        spec = load_spec(args.spec)
        return spec, induced_embedding(spec)
    if not args.gen:
        raise UsageError("demo needs a spec file or --gen NAME=WORD")
    gens = {}
    for item in args.gen:
        name, _, word = item.partition("=")
        gens[name] = evaluate_v_word(word or name)
    return None, gens


def cmd_demo(args, out):
    spec, gens = _demo_gens(args)
    if args.action == "induce":
        if spec is None:
            raise UsageError("demo induce needs a spec file")
        _write(args.out, dump_maps(gens), out)
        failing = relators_hold(spec, gens)
        for r in spec.relators:
            status = "fails" if r in failing else "holds"
            print(f"relator {_fmt_word(r)}: {status}", file=out)
        return FAILED if failing else OK
    if args.node is None:
        raise UsageError("demo check needs --node")
    report = check_demonstrative(gens, args.node, args.len)
    print(report, file=out)
    return OK if report.passed else FAILED


def _add_group_flags(p):
    p.add_argument("--group", default="Z2", help="group file or a name: Z<n>, S3, klein (default Z2)")
    p.add_argument("--theta", help="identity | trivial | power:<k> | file with a 'theta' field")
    p.add_argument("--gens", help="comma-separated generating subset (element names)")


def build_parser():
    parser = argparse.ArgumentParser(prog="cowpv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a word in V_(G, theta)")
    p.add_argument("word", help="whitespace-separated symbols, e.g. 'A Bbar g1a'")
    _add_group_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("pda", help="build, run or export the co-word-problem automaton")
    p.add_argument("action", choices=("build", "accept", "export"))
    p.add_argument("word", nargs="?")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--format", default="dot", choices=("dot", "structured"))
    p.add_argument("--machine", help="structured machine file to use for accept")
    _add_group_flags(p)
    p.set_defaults(func=cmd_pda)

    p = sub.add_parser("crossval", help="compare the automaton with the tree-pair oracle")
    p.add_argument("--max-len", type=int, default=2)
    p.add_argument("--sample", help="<count>x<len> extra random words")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="report file; a .json summary is written next to it")
    _add_group_flags(p)
    p.set_defaults(func=cmd_crossval)

    p = sub.add_parser("demo", help="induced embeddings and demonstration nodes")
    p.add_argument("action", choices=("induce", "check"))
    p.add_argument("spec", nargs="?", help="embedding spec file")
    p.add_argument("--gen", action="append", help="NAME=WORD generator given by a word of V")
    p.add_argument("--node", help="candidate demonstration node (binary address)")
    p.add_argument("--len", type=int, default=8, help="maximum word length")
    p.add_argument("--out")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (UsageError, GroupError, ThompsonError, EmbeddingError, pda.PdaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
