"""Command-line entry point: ``permlogic <subcommand> ...``.

Every subcommand prints one document on stdout in the chosen format; JSON
documents carry ``schema_version``.  Progress goes to stderr.  Exit codes:
0 success, 1 usage or input error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


class InvariantViolation(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


@dataclass
class Output:
    data: dict[str, Any]
    rows: list[dict[str, Any]] = field(default_factory=list)


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if hasattr(x, "values") and hasattr(x, "n"):  # Permutation
        return str(x)
    return x


def _render(out: Output, fmt: str, command: str) -> str:
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command, **out.data}
        return json.dumps(_jsonable(doc), sort_keys=True) + "\n"
    rows = out.rows or [out.data]
    rows = [{k: _jsonable(v) for k, v in r.items()} for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        cols = list(rows[0])
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
        return buf.getvalue()
    lines = []
    for r in rows:
        lines.append("  ".join(f"{k}={json.dumps(v) if isinstance(v, (list, dict)) else v}" for k, v in r.items()))
    return "\n".join(lines) + "\n"


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _bounded(lo: int, hi: int | None = None) -> Callable[[str], int]:
    def conv(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
        if v < lo or (hi is not None and v > hi):
            raise argparse.ArgumentTypeError(f"{v} outside {lo}..{hi if hi is not None else 'inf'}")
        return v

    return conv


def parse_ns(text: str) -> list[int]:
    """'2..10' (inclusive) or '50,100' or a mix such as '2..4,8'."""
    out: list[int] = []
    try:
        for part in text.split(","):
            if ".." in part:
                a, b = part.split("..")
                out.extend(range(int(a), int(b) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad n list {text!r}")
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("n values must be positive")
    return out


def _perm(text: str):
    from .perm import Permutation

    try:
        return Permutation.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _sentence(args):
    from .fo import builtin, load_sentence, parse

    given = [x for x in (args.sentence, args.formula, args.builtin) if x]
    if len(given) != 1:
        raise UsageError("give exactly one of --sentence, --formula, --builtin")
    if args.sentence:
        try:
            return load_sentence(args.sentence)
        except OSError as exc:
            raise UsageError(f"cannot read {args.sentence}: {exc.strerror}")
    if args.formula:
        return parse(args.formula)
    name, *params = args.builtin.split(":")
    return builtin(name, *params)


def _need_seed(args) -> int:
    if args.seed is None:
        raise UsageError("--seed is required for this subcommand")
    return args.seed


# subcommands ---------------------------------------------------------------


def cmd_ballot(args) -> Output:
    from .catalan import ballot_row, catalan

    n = args.n
    row = ballot_row(n)
    c = catalan(n)
    if sum(row) != c:
        raise InvariantViolation("ballot row does not sum to the Catalan number")
    mean = Fraction(sum(r * q for r, q in enumerate(row, 2)), c)
    if mean != Fraction(catalan(n + 1), c):
        raise InvariantViolation("mean slot count differs from C_{n+1}/C_n")
    rows = [{"r": r, "q": q, "probability": Fraction(q, c), "limit": Fraction(r - 1, 2**r)} for r, q in enumerate(row, 2)]
    return Output({"n": n, "catalan": c, "row": row, "mean_slots": mean}, rows)


def cmd_sample(args) -> Output:
    from .perm import q_statistic
    from .rng import stream
    from .sampler import path_probability, sample_avoider

    seed = _need_seed(args)
    rng = stream(seed, "sample", args.n)
    rows = []
    for i in range(args.count):
        run = sample_avoider(args.n, rng, seed)
        row = {"index": i, "permutation": str(run.permutation), "q": q_statistic(run.permutation)}
        if args.path:
            row["path"] = [label for _, label in run.path]
            row["probability"] = path_probability(run)
        rows.append(row)
    return Output({"n": args.n, "seed": seed, "samples": rows}, rows)


def cmd_check(args) -> Output:
    from itertools import permutations

    from .catalan import catalan
    from .fo import to_text
    from .fo.semantics import compiled
    from .perm import Permutation, enumerate_avoiders

    sentence = _sentence(args)
    f = compiled(sentence)
    if args.perm is not None:
        holds = f(args.perm)
        return Output({"sentence": to_text(sentence), "permutation": str(args.perm), "holds": holds})
    if args.avoiders is not None:
        n = args.avoiders
        total = catalan(n)
        hits = sum(1 for p in enumerate_avoiders(n) if f(p))
        scope = "AV"
    elif args.all is not None:
        n = args.all
        hits = total = 0
        for v in permutations(range(1, n + 1)):
            total += 1
            hits += f(Permutation(v))
        scope = "S"
    else:
        raise UsageError("give one of --perm, --avoiders N, --all N")
    return Output({"sentence": to_text(sentence), "scope": scope, "n": n, "satisfying": hits, "total": total, "fraction": Fraction(hits, total)})


def cmd_ef(args) -> Output:
    from .ef import ef_win, linear_order_structure

    if args.linear:
        m, n = args.linear
        win = ef_win(linear_order_structure(m), linear_order_structure(n), args.k)
        return Output({"left": f"L{m}", "right": f"L{n}", "k": args.k, "duplicator_wins": win})
    if args.left is None or args.right is None:
        raise UsageError("give --left and --right permutations, or --linear M N")
    win = ef_win(args.left, args.right, args.k)
    return Output({"left": str(args.left), "right": str(args.right), "k": args.k, "duplicator_wins": win})


def cmd_classes(args) -> Output:
    from .classchain import Classifier, shortlex
    from .perm import enumerate_avoiders

    classifier = Classifier(args.k)
    members: dict[int, list[str]] = {}
    perms = sorted(enumerate_avoiders(args.n), key=shortlex)
    for idx, p in enumerate(perms):
        if idx % 100 == 0 and idx:
            _progress(f"classified {idx}/{len(perms)}")
        members.setdefault(classifier.class_of(p), []).append(str(p))
    classes = [members[c] for c in sorted(members)]
    rows = [{"class": i, "representative": m[0], "size": len(m), "members": m} for i, m in enumerate(classes)]
    return Output({"n": args.n, "k": args.k, "count": len(classes), "classes": classes}, rows)


def cmd_tail(args) -> Output:
    from .perm import rightmost_descent, tail_configuration

    tc = tail_configuration(args.perm, args.k)
    boxes = [sorted(b) for b in tc.boxes]
    rows = [{"box": i, "entries": b} for i, b in enumerate(boxes, 1)]
    return Output(
        {
            "permutation": str(args.perm),
            "k": args.k,
            "rightmost_descent": rightmost_descent(args.perm),
            "boxes": boxes,
            "normal_form": list(tc.normal_form()[1]),
        },
        rows,
    )


def cmd_chain(args) -> Output:
    from . import chain

    if args.mode == "iterate":
        start = chain.SimplexVector.point(args.start, args.v_max)
        res = chain.normalize_iterate(start, tol=args.tol, max_iters=args.max_iters)
        import numpy as np

        v = np.arange(2, args.v_max + 1, dtype=float)
        err = float(np.max(np.abs(res.vector.weights - (v - 1) / 2.0**v)))
        rows = [{"state": int(s), "weight": float(w)} for s, w in zip(v, res.vector.weights)]
        return Output(
            {
                "v_max": args.v_max,
                "growth_factor": res.growth_factor,
                "iterations": res.iterations,
                "converged": res.converged,
                "max_error_vs_geometric": err,
                "lost_mass": res.vector.lost_mass,
                "weights": [float(w) for w in res.vector.weights],
            },
            rows,
        )
    if args.mode == "counts":
        t = chain.path_counts(args.start, args.n)
        f = chain.first_return_counts(args.start, args.n)
        rows = [{"n": n, "paths": a, "first_returns": b} for n, (a, b) in enumerate(zip(t, f))]
        return Output({"state": args.start, "paths": t, "first_returns": f}, rows)
    z = Fraction(args.z)
    total = chain.path_series_partial(args.start, z, args.n)
    return Output({"state": args.start, "z": z, "N": args.n, "partial_sum": total if isinstance(total, Fraction) else float(total), "approx": float(total)})


def cmd_graph(args) -> Output:
    from .classchain import aperiodicity_check, build_graph, estimate_component_mass, scc_analysis

    _progress(f"building class graph k={args.k} depth={args.depth}")
    g = build_graph(args.k, args.depth)
    report = scc_analysis(g)
    cg = g.class_digraph()
    reps = {g.class_of_state[s]: str(g.states[s].class_id) for s in range(g.n_states)}
    closed = []
    for c in report.closed:
        closed.append({"classes": sorted(reps[x] for x in c), "gcd": aperiodicity_check(cg, c)})
    mass = estimate_component_mass(args.depth, args.k, g)
    for entry, m in zip(closed, mass.component_mass):
        entry["mass"] = m
    if args.export:
        with open(args.export, "w") as fh:
            fh.write(g.to_jsonl())
    rows = [{"component": i, **c} for i, c in enumerate(closed)]
    return Output(
        {
            "k": args.k,
            "depth": args.depth,
            "states": g.n_states,
            "classes": cg.number_of_nodes(),
            "edges": len(g.edge_list()),
            "conflicts": len(g.conflicts()),
            "closed": closed,
            "undetermined": [sorted(reps[x] for x in c) for c in report.undetermined],
            "unresolved_mass": mass.unresolved,
        },
        rows,
    )


def cmd_estimate(args) -> Output:
    from .classchain import estimate_probability
    from .fo import to_text

    sentence = _sentence(args)
    seed = None
    if args.mode == "mc":
        seed = _need_seed(args)
        if args.samples is None:
            raise UsageError("--samples is required in mc mode")
    try:
        ests = estimate_probability(sentence, args.ns, args.mode, args.samples or 0, seed, args.jobs, _progress)
    except ValueError as exc:
        raise UsageError(str(exc))
    rows = []
    for e in ests:
        row = {"n": e.n, "value": e.value, "low": e.low, "high": e.high}
        if e.samples is not None:
            row["samples"] = e.samples
        rows.append(row)
    return Output({"sentence": to_text(sentence), "mode": args.mode, "seed": seed, "estimates": rows}, rows)


# parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--seed", type=_bounded(0))
    common.add_argument("--jobs", type=_bounded(1, 64), default=1)

    sentence = argparse.ArgumentParser(add_help=False)
    sentence.add_argument("--sentence", help="file holding one sentence")
    sentence.add_argument("--formula", help="sentence given inline")
    sentence.add_argument("--builtin", help="library sentence, e.g. phi1, phi2, has-max, box-nonempty:2")

    p = _Parser(prog="permlogic", description="Tools for first-order properties of random 321-avoiding permutations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("ballot", parents=[common], help="ballot row q_{n,r}")
    s.add_argument("--n", type=_bounded(1, 2000), required=True)
    s.set_defaults(func=cmd_ballot)

    s = sub.add_parser("sample", parents=[common], help="uniform 321-avoiders")
    s.add_argument("--n", type=_bounded(1, 100_000), required=True)
    s.add_argument("--count", type=_bounded(1, 10**7), default=1)
    s.add_argument("--path", action="store_true", help="include slot path and its exact probability")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("check", parents=[common, sentence], help="evaluate a sentence")
    s.add_argument("--perm", type=_perm)
    s.add_argument("--avoiders", type=_bounded(1, 12), metavar="N")
    s.add_argument("--all", type=_bounded(1, 9), metavar="N")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("ef", parents=[common], help="EF game between two structures")
    s.add_argument("--left", type=_perm)
    s.add_argument("--right", type=_perm)
    s.add_argument("--linear", type=_bounded(1, 200), nargs=2, metavar=("M", "N"))
    s.add_argument("--k", type=_bounded(0, 4), required=True)
    s.set_defaults(func=cmd_ef)

    s = sub.add_parser("classes", parents=[common], help="k-equivalence classes of AV_n(321)")
    s.add_argument("--n", type=_bounded(1, 8), required=True)
    s.add_argument("--k", type=_bounded(1, 3), required=True)
    s.set_defaults(func=cmd_classes)

    s = sub.add_parser("tail", parents=[common], help="tail configuration boxes")
    s.add_argument("--perm", type=_perm, required=True)
    s.add_argument("--k", type=_bounded(1, 8), required=True)
    s.set_defaults(func=cmd_tail)

    s = sub.add_parser("chain", parents=[common], help="symbolic chain computations")
    s.add_argument("--mode", choices=("iterate", "counts", "series"), default="iterate")
    s.add_argument("--start", type=_bounded(2, 10_000), default=2)
    s.add_argument("--v-max", type=_bounded(3, 100_000), default=200)
    s.add_argument("--tol", type=float, default=1e-12)
    s.add_argument("--max-iters", type=_bounded(1, 10**7), default=100_000)
    s.add_argument("--n", type=_bounded(0, 100_000), default=25, help="path length bound or series cutoff")
    s.add_argument("--z", default="1/4")
    s.set_defaults(func=cmd_chain)

    s = sub.add_parser("graph", parents=[common], help="class-configuration graph and its components")
    s.add_argument("--k", type=_bounded(1, 3), required=True)
    s.add_argument("--depth", type=_bounded(1, 9), required=True)
    s.add_argument("--export", help="write the graph as JSON lines")
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("estimate", parents=[common, sentence], help="satisfaction probability over n")
    s.add_argument("--ns", type=parse_ns, required=True, help="e.g. 2..10 or 50,100")
    s.add_argument("--mode", choices=("exact", "mc"), default="exact")
    s.add_argument("--samples", type=_bounded(1, 10**8))
    s.set_defaults(func=cmd_estimate)
    return p


def main(argv: list[str] | None = None) -> int:
    from .fo import ParseError
    from .fo.library import UnknownBuiltinError
    from .perm import IllegalSlotError, NotAvoidingError

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        if args.command == "chain" and not args.tol > 0:
            raise UsageError("--tol must be positive")
        out = args.func(args)
    except (UsageError, ParseError, UnknownBuiltinError, NotAvoidingError, IllegalSlotError) as exc:
        print(f"permlogic {args.command}: {exc}", file=sys.stderr)
        return 1
    except (InvariantViolation, AssertionError) as exc:
        print(f"permlogic {args.command}: invariant violated: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(_render(out, args.format, args.command))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
