"""Command-line interface.

Exit codes: 0 for success or acceptance, 1 for rejection or a failed
verification, 2 for usage errors (including malformed tokens).  All
randomized commands require ``--seed`` and identical invocations with
identical seeds produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from . import automata, grammar, maga, quantum, semantics, verify
from .square import TokenError, format_string, parse_string

FORMATS = ("table", "csv", "json")


def _render_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    def fmt(cells):
        return "  ".join(str(c).ljust(w) for c, w in zip(cells, widths)).rstrip()
    lines = [fmt(headers)]
    lines += [fmt(row) for row in rows]
    return "\n".join(lines)


def _emit_rows(headers, rows, fmt, out, extra: dict | None = None):
    if fmt == "table":
        print(_render_table(headers, [[str(c) for c in r] for r in rows]), file=out)
        if extra:
            for key, value in extra.items():
                print(f"{key}: {value}", file=out)
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(headers)
        writer.writerows(rows)
        out.write(buf.getvalue())
    else:
        payload = {"rows": [dict(zip(headers, row)) for row in rows]}
        if extra:
            payload.update(extra)
        print(json.dumps(payload, indent=2), file=out)


# ------------------------------------------------------------ validate


def cmd_validate(args, out) -> int:
    symbols = parse_string(args.string)
    result = semantics.trace(args.string)
    rows = []
    for i, sym in enumerate(symbols):
        if result.failed_at is not None and i > result.failed_at:
            break
        if result.failed_at == i:
            prior = result.states[i - 1] if i else semantics.EMPTY_STATE
            determined = prior.value_of(sym.obs)
            comment = f"clash: {sym.obs.name} is already determined as {determined:+d}"
        else:
            comment = result.states[i].describe()
        rows.append(
            [str(i + 1), sym.token, sym.obs.name, f"{sym.value:+d}", comment]
        )
    if rows:
        print(
            _render_table(
                ["step", "token", "observable", "value", "determined after step"],
                rows,
            ),
            file=out,
        )
    if result.consistent:
        print("consistent", file=out)
        return 0
    print(f"inconsistent at token {result.failed_at + 1}", file=out)
    return 1


# ------------------------------------------------------------ derive


def cmd_derive(args, out) -> int:
    witness = grammar.derive_membership(args.string)
    if witness is None:
        print("no derivation: the string is not in the language", file=out)
        return 1
    rows = [
        [step.form(), step.rule.render(), step.rule.schema]
        for step in witness.steps
    ]
    print(
        _render_table(["string derived", "rule applied", "schema"], rows),
        file=out,
    )
    return 0


# ------------------------------------------------------------ grammar


def cmd_grammar(args, out) -> int:
    g = grammar.build_grammar()
    if args.dump:
        for line in g.dump_lines():
            print(line, file=out)
        return 0
    counts: dict[str, int] = {}
    for rule in g.rules:
        counts[rule.schema] = counts.get(rule.schema, 0) + 1
    rows = [[schema, str(counts[schema])] for schema in grammar.SCHEMAS]
    rows.append(["total", str(len(g.rules))])
    print(_render_table(["schema", "rules"], rows), file=out)
    print(f"generating symbols: {len(g.symbols)}", file=out)
    return 0


# ------------------------------------------------------------ dfa


def _semantic_labels(dfa: automata.Dfa) -> dict[int, str]:
    labels = {}
    for state, word in automata.shortest_words(dfa).items():
        final = semantics.final_state(word)
        labels[state] = "dead" if final is None else final.describe()
    return labels


def cmd_dfa(args, out) -> int:
    dfa = verify.minimal_dfa() if not args.raw else automata.determinize(
        grammar.to_nfa()
    )
    if args.emit == "dot":
        text = automata.to_dot(dfa, _semantic_labels(dfa))
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            out.write(text)
        return 0
    rows = [
        ["states (total)", str(dfa.num_states)],
        ["states (excluding dead)", str(dfa.live_state_count)],
        ["accepting states", str(len(dfa.accepting))],
        ["dead state", "none" if dfa.dead is None else f"q{dfa.dead}"],
    ]
    print(_render_table(["property", "value"], rows), file=out)
    return 0


# ------------------------------------------------------------ count


def cmd_count(args, out) -> int:
    report = automata.count_words(verify.minimal_dfa(), args.max_length)
    curve = automata.hv_bits(report)
    headers = ["n", "count", "cumulative", "bits"]
    rows = [
        [n, report.counts[n], report.cumulative[n], curve.bits[n]]
        for n in range(args.max_length + 1)
    ]
    extra = {"dominant_rate_estimate": report.dominant_rate_estimate}
    _emit_rows(headers, rows, args.format, out, extra if args.format != "csv" else None)
    return 0


# ------------------------------------------------------------ bound / density


def cmd_bound(args, out) -> int:
    reports = [maga.scaling_report(n) for n in range(1, args.qubits + 1)]
    headers = [
        "qubits",
        "contexts",
        "context_size",
        "lower_bound",
        "simplified_bound",
        "density",
        "density_floor",
    ]
    rows = [
        [
            r.qubits,
            r.contexts,
            r.context_size,
            r.lower_bound,
            r.simplified_bound,
            f"{r.density:.6f}" if args.format == "table" else r.density,
            f"{r.density_floor:.6f}" if args.format == "table" else r.density_floor,
        ]
        for r in reports
    ]
    _emit_rows(headers, rows, args.format, out)
    return 0


def cmd_density(args, out) -> int:
    reports = [maga.scaling_report(n) for n in range(1, args.qubits + 1)]
    headers = ["qubits", "density", "density_floor", "gap", "violates_holevo"]
    rows = []
    for r in reports:
        if args.format == "table":
            rows.append(
                [
                    r.qubits,
                    f"{r.density:.6f}",
                    f"{r.density_floor:.6f}",
                    f"{r.density_gap:.6e}",
                    str(r.violates_holevo).lower(),
                ]
            )
        else:
            rows.append(
                [r.qubits, r.density, r.density_floor, r.density_gap, r.violates_holevo]
            )
    _emit_rows(headers, rows, args.format, out)
    return 0


# ------------------------------------------------------------ sample


def cmd_sample(args, out) -> int:
    failures = 0
    for run in quantum.sample_many(args.runs, args.length, args.seed):
        line = format_string(run)
        print(line, file=out)
        if args.check and not semantics.is_consistent(run):
            print(f"rejected by the consistency oracle: {line}", file=sys.stderr)
            failures += 1
    return 1 if failures else 0


# ------------------------------------------------------------ verify


def cmd_verify(args, out) -> int:
    cfg = verify.VerifyConfig(
        seed=args.seed,
        exhaustive_len=args.exhaustive_len,
        random_strings=args.random_strings,
        random_max_len=args.random_max_len,
        invariant_len=args.invariant_len,
        maga_len=args.maga_len,
        count_max=args.count_max,
        qubits_max=args.qubits_max,
        quantum_runs=args.quantum_runs,
        quantum_run_len=args.quantum_run_len,
        quantum_trials=args.quantum_trials,
    )
    results = verify.run_suites([args.suite], cfg)
    failed = 0
    for suite in results:
        print(f"[suite {suite.suite}]", file=out)
        for check in suite.checks:
            status = "PASS" if check.passed else "FAIL"
            detail = f" ({check.detail})" if check.detail else ""
            print(f"{status} {check.name}{detail}", file=out)
            if not check.passed:
                failed += 1
    total = sum(len(s.checks) for s in results)
    print(f"[summary] {total - failed}/{total} checks passed", file=out)
    return 1 if failed else 0


# ------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pmlang",
        description="Measurement language of the Peres-Mermin square: "
        "consistency oracle, grammar, automata, memory bounds, and a "
        "quantum cross-check.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a measurement string and show the trace")
    p.add_argument("string", help='token string, e.g. "A B c ~gamma"')
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("derive", help="print a witness derivation")
    p.add_argument("string")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("grammar", help="inspect the instantiated grammar")
    p.add_argument("--dump", action="store_true", help="print every rule")
    p.set_defaults(func=cmd_grammar)

    p = sub.add_parser("dfa", help="inspect or export the automaton")
    p.add_argument("--emit", choices=("dot",), help="emit a graph description")
    p.add_argument("--raw", action="store_true", help="use the unminimized automaton")
    p.add_argument("-o", "--output", help="write to a file instead of stdout")
    p.set_defaults(func=cmd_dfa)

    p = sub.add_parser("count", help="exact word counts by length")
    p.add_argument("--max-length", type=int, required=True)
    p.add_argument("--format", choices=FORMATS, default="table")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("bound", help="memory lower bounds for n qubits")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--format", choices=FORMATS, default="table")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("density", help="information density of the bounds")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--format", choices=FORMATS, default="table")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("sample", help="sample measurement runs from the simulator")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument(
        "--check",
        action="store_true",
        help="fail if any sampled run is rejected by the consistency oracle",
    )
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument(
        "--suite", choices=("all", *verify.SUITES), required=True
    )
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--exhaustive-len", type=int, default=4)
    p.add_argument("--random-strings", type=int, default=100_000)
    p.add_argument("--random-max-len", type=int, default=12)
    p.add_argument("--invariant-len", type=int, default=5)
    p.add_argument("--maga-len", type=int, default=5)
    p.add_argument("--count-max", type=int, default=1000)
    p.add_argument("--qubits-max", type=int, default=64)
    p.add_argument("--quantum-runs", type=int, default=10_000)
    p.add_argument("--quantum-run-len", type=int, default=12)
    p.add_argument("--quantum-trials", type=int, default=1000)
    p.set_defaults(func=cmd_verify)

    return parser


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "qubits", None) is not None and args.qubits < 1:
        print("error: --qubits must be at least 1", file=sys.stderr)
        return 2
    if getattr(args, "max_length", None) is not None and args.max_length < 0:
        print("error: --max-length must be non-negative", file=sys.stderr)
        return 2
    if getattr(args, "length", None) is not None and args.length < 0:
        print("error: --length must be non-negative", file=sys.stderr)
        return 2
    try:
        return args.func(args, out)
    except TokenError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
