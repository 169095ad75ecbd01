"""Command-line interface for reproducible experiment runs.

Exit status: 0 on success, 1 on usage errors, 2 on data errors. Every
subcommand is deterministic given its flags; all randomness is seed-driven.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import anneal as anneal_mod
from . import datasets as datasets_mod
from . import metrics as metrics_mod
from .axioms import AxiomId, axiom_set_from_name, implication_audit
from .errors import CapacityError, DataFormatError, ParameterError
from .prefs import (
    DistributionSpec,
    child_seed,
    read_profiles,
    sample_profile,
    write_profiles,
)
from .rules import SEEDED_RULES, RuleSpec, elect
from .search import max_violation_committee, min_violation_committee

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self.exit_on_error_code if hasattr(self, "exit_on_error_code") else USAGE_EXIT)


def _default_threads() -> int:
    value = os.environ.get("AXIOMVOTE_THREADS", "1")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def _add_threads(parser):
    parser.add_argument("--threads", type=int, default=_default_threads(),
                        help="worker processes (default: AXIOMVOTE_THREADS or 1)")


def _parse_rules(text: str) -> list[RuleSpec]:
    return [RuleSpec(part.strip()) for part in text.split(",") if part.strip()]


def _load_profiles(path, expect_k: int | None = None):
    profiles = read_profiles(path)
    if not profiles:
        raise DataFormatError(f"{path} contains no profiles")
    m = profiles[0].m
    for i, profile in enumerate(profiles):
        if profile.m != m:
            raise DataFormatError(f"profile {i} has m={profile.m}, expected {m}")
    if expect_k is not None and not 1 <= expect_k < m:
        raise DataFormatError(f"k={expect_k} is out of range for m={m}")
    return profiles


def _write_json(path, payload):
    text = json.dumps(payload, indent=2)
    if path in (None, "-"):
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as fp:
            fp.write(text + "\n")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_sample(args) -> int:
    spec = DistributionSpec.parse(args.dist)
    seeds = [child_seed(args.seed, i) for i in range(args.count)]
    profiles = [sample_profile(spec, args.n, args.m, s) for s in seeds]
    write_profiles(args.out, profiles, dist=spec.label(), seeds=seeds)
    return 0


def _cmd_elect(args) -> int:
    spec = RuleSpec(args.rule)
    profiles = _load_profiles(args.profiles, args.k)
    if spec.id in SEEDED_RULES and args.seed is None:
        raise ParameterError(f"--seed is required for rule {spec.id}")
    committees = []
    for i, profile in enumerate(profiles):
        call_seed = (args.seed, i) if spec.id in SEEDED_RULES else None
        committees.append(elect(spec, profile, args.k, seed=call_seed))
    if args.out:
        datasets_mod.write_committees(args.out, committees, spec.label)
    else:
        for i, committee in enumerate(committees):
            print(json.dumps({"profile_index": i, "rule": spec.label, "committee": list(committee)}))
    return 0


def _evaluate_payload(payload):
    rules, k, axiom_values, seed, profiles, offset = payload
    axioms = tuple(AxiomId(v) for v in axiom_values)
    from .axioms import ElectionContext

    counts = {rule.label: np.zeros(len(axioms), dtype=np.int64) for rule in rules}
    for i, profile in enumerate(profiles):
        ctx = ElectionContext(profile, k)
        table = ctx.violation_table(axioms)
        for j, rule in enumerate(rules):
            call_seed = (seed, 101 + j, offset + i) if rule.id in SEEDED_RULES else None
            committee = elect(rule, profile, k, seed=call_seed)
            counts[rule.label] += table[ctx.committee_index(committee)]
    return {label: c.tolist() for label, c in counts.items()}


def _chunks(items, parts):
    size = max(1, (len(items) + parts - 1) // parts)
    return [(i, items[i: i + size]) for i in range(0, len(items), size)]


def _apply_renaming(profiles, seed):
    from .prefs import rename_alternatives

    return [rename_alternatives(p, (seed, 13, i)) for i, p in enumerate(profiles)]


def _cmd_evaluate(args) -> int:
    rules = _parse_rules(args.rules)
    axioms = axiom_set_from_name(args.axioms)
    profiles = _load_profiles(args.profiles, args.k)
    if args.rename:
        profiles = _apply_renaming(profiles, args.seed)
    payloads = [
        (tuple(rules), args.k, tuple(a.value for a in axioms), args.seed, chunk, offset)
        for offset, chunk in _chunks(profiles, args.threads)
    ]
    partials = metrics_mod.parallel_map(_evaluate_payload, payloads, args.threads)
    totals = {rule.label: np.zeros(len(axioms), dtype=np.int64) for rule in rules}
    for partial in partials:
        for label, counts in partial.items():
            totals[label] += np.asarray(counts, dtype=np.int64)
    report = {
        "profiles": len(profiles),
        "k": args.k,
        "axioms": [a.value for a in axioms],
        "rates": {
            label: {a.value: c / len(profiles) for a, c in zip(axioms, counts)}
            for label, counts in totals.items()
        },
        "means": {
            label: float(counts.sum()) / (len(profiles) * len(axioms))
            for label, counts in totals.items()
        },
    }
    _write_json(args.report, report)
    return 0


def _cmd_distance(args) -> int:
    rules = _parse_rules(args.rules)
    profiles = _load_profiles(args.profiles, args.k)
    if args.rename:
        profiles = _apply_renaming(profiles, args.seed)
    labels, matrix = metrics_mod.distance_matrix(rules, profiles, args.k, seed=args.seed)
    lines = ["rule," + ",".join(labels)]
    for label, row in zip(labels, matrix):
        lines.append(label + "," + ",".join(f"{value:.6f}" for value in row))
    text = "\n".join(lines) + "\n"
    if args.out_csv in (None, "-"):
        print(text, end="")
    else:
        with open(args.out_csv, "w", encoding="utf-8") as fp:
            fp.write(text)
    return 0


def _minmax_payload(payload):
    k, axiom_values, profiles, offset = payload
    axioms = tuple(AxiomId(v) for v in axiom_values)
    records = []
    for i, profile in enumerate(profiles):
        approvals = None  # derived internally from top-k
        lo_committee, lo = min_violation_committee(profile, approvals, k, axioms)
        hi_committee, hi = max_violation_committee(profile, approvals, k, axioms)
        records.append(
            {
                "profile_index": offset + i,
                "min_committee": list(lo_committee),
                "min_violations": lo,
                "max_committee": list(hi_committee),
                "max_violations": hi,
            }
        )
    return records


def _cmd_minmax(args) -> int:
    axioms = axiom_set_from_name(args.axioms)
    profiles = _load_profiles(args.profiles, args.k)
    payloads = [
        (args.k, tuple(a.value for a in axioms), chunk, offset)
        for offset, chunk in _chunks(profiles, args.threads)
    ]
    partials = metrics_mod.parallel_map(_minmax_payload, payloads, args.threads)
    with open(args.out, "w", encoding="utf-8") as fp:
        for records in partials:
            for record in records:
                fp.write(json.dumps(record, separators=(",", ":")) + "\n")
    return 0


def _cmd_anneal(args) -> int:
    axioms = axiom_set_from_name(args.axioms)
    profiles = _load_profiles(args.profiles, args.k)
    if profiles[0].m != args.m:
        raise DataFormatError(f"profiles have m={profiles[0].m}, expected --m {args.m}")
    config = anneal_mod.AnnealConfig(
        m=args.m,
        k=args.k,
        axiom_set=axioms,
        steps=args.steps,
        train_profiles=args.train_count,
        seed=args.seed,
    )
    result = anneal_mod.optimize_score_vector(config, profiles)
    _write_json(args.out, result.to_record(axiom_set_name=args.axioms))
    return 0


def _gen_dataset_payload(payload):
    spec, m, n, k, axiom_set, seed, indices = payload
    examples = []
    for i in indices:
        profile = sample_profile(spec, n, m, (seed, i, 0))
        examples.append(
            datasets_mod.make_example(profile, k, axiom_set, (seed, i, 1), spec.label())
        )
    return examples


def _cmd_gen_dataset(args) -> int:
    spec = DistributionSpec.parse(args.dist)
    if args.axioms not in datasets_mod.AXIOM_SET_NAMES:
        raise ParameterError("--axioms must be 'all' or 'root' for datasets")
    if args.dedup:
        # deduplication is inherently sequential
        examples = datasets_mod.generate_dataset(
            spec, args.m, args.n, args.k, args.count, args.axioms, args.seed, dedup=True
        )
    else:
        payloads = [
            (spec, args.m, args.n, args.k, args.axioms, args.seed,
             list(range(offset, offset + len(chunk))))
            for offset, chunk in _chunks(list(range(args.count)), args.threads)
        ]
        partials = metrics_mod.parallel_map(_gen_dataset_payload, payloads, args.threads)
        examples = [example for part in partials for example in part]
    datasets_mod.write_dataset(args.out, examples)
    return 0


def _cmd_eval_committees(args) -> int:
    axioms = axiom_set_from_name(args.axioms)
    profiles = _load_profiles(args.profiles, args.k)
    committees = datasets_mod.read_committee_records(args.committees, profiles[0].m, args.k)
    if len(committees) != len(profiles):
        raise DataFormatError(
            f"{len(committees)} committees for {len(profiles)} profiles (lengths must match)"
        )
    from .axioms import ElectionContext

    counts = np.zeros(len(axioms), dtype=np.int64)
    for profile, committee in zip(profiles, committees):
        ctx = ElectionContext(profile, args.k)
        counts += ctx.violation_table(axioms)[ctx.committee_index(committee)]
    report = {
        "profiles": len(profiles),
        "k": args.k,
        "axioms": [a.value for a in axioms],
        "rates": {a.value: c / len(profiles) for a, c in zip(axioms, counts.tolist())},
        "mean": float(counts.sum()) / (len(profiles) * len(axioms)),
    }
    _write_json(args.report, report)
    return 0


def _cmd_import_soc(args) -> int:
    with open(getattr(args, "in"), "r", encoding="utf-8") as fp:
        profile = datasets_mod.parse_soc(fp.read())
    write_profiles(args.out, [profile], dist="preflib", seeds=[0])
    return 0


def _cmd_audit(args) -> int:
    profiles = _load_profiles(args.profiles, args.k)
    report = implication_audit(profiles, args.k)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fp:
            for record in report.counterexamples:
                fp.write(json.dumps(record, separators=(",", ":")) + "\n")
    print(report.summary())
    print(f"total counterexamples: {report.total_counterexamples()}")
    return 0


# ---------------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="axiomvote", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample preference profiles")
    p.add_argument("--dist", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("elect", help="run one rule over a profile file")
    p.add_argument("--rule", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--profiles", required=True)
    p.add_argument("--out")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_elect)

    p = sub.add_parser("evaluate", help="violation rates of rules on profiles")
    p.add_argument("--rules", required=True, help="comma-separated rule ids")
    p.add_argument("--axioms", default="all", help="all | root | comma-separated axiom ids")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--profiles", required=True)
    p.add_argument("--report", help="output JSON path (default: stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rename", action="store_true",
                   help="relabel alternatives per profile (seeded) before evaluating")
    _add_threads(p)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("distance", help="pairwise rule distance matrix")
    p.add_argument("--rules", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--profiles", required=True)
    p.add_argument("--out-csv")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rename", action="store_true",
                   help="relabel alternatives per profile (seeded) before electing")
    p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("minmax", help="exhaustive min/max violation committees")
    p.add_argument("--axioms", default="all")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--profiles", required=True)
    p.add_argument("--out", required=True)
    _add_threads(p)
    p.set_defaults(func=_cmd_minmax)

    p = sub.add_parser("anneal", help="anneal a positional score vector")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--axioms", default="all")
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--train-count", type=int, default=2000)
    p.add_argument("--profiles", required=True)
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_anneal)

    p = sub.add_parser("gen-dataset", help="labelled training examples")
    p.add_argument("--dist", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--axioms", default="all", help="all | root")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dedup", action="store_true", help="skip repeated profiles")
    _add_threads(p)
    p.set_defaults(func=_cmd_gen_dataset)

    p = sub.add_parser("eval-committees", help="evaluate externally chosen committees")
    p.add_argument("--committees", required=True)
    p.add_argument("--profiles", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--axioms", default="all")
    p.add_argument("--report")
    p.set_defaults(func=_cmd_eval_committees)

    p = sub.add_parser("import-soc", help="convert a PrefLib SOC file to the profile format")
    p.add_argument("--in", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_import_soc)

    p = sub.add_parser("audit-implications", help="check the axiom implication graph")
    p.add_argument("--profiles", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--report")
    p.set_defaults(func=_cmd_audit)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_EXIT
    try:
        return args.func(args)
    except (DataFormatError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"axiomvote: data error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except (ParameterError, CapacityError) as exc:
        print(f"axiomvote: data error: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
