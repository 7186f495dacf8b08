"""Command-line interface: ``tid3 <command> ...``.

Exit status is 0 on success, 1 on data errors (unreadable or malformed input,
failed verification) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from . import dataio, model, oracle
from .config import LearnerConfig, StoppingConfig
from .dataio import BUNDLED, LoadError, PlantedRule, SynthSpec
from .intervals import Relation
from .learner import learn, prepare
from .policy import TIE_BREAKS, WITNESS_POLICIES
from .static import learn_static, static_accuracy

EXIT_OK, EXIT_DATA, EXIT_USAGE = 0, 1, 2


class DataError(Exception):
    pass


def _relations(text: str) -> tuple[Relation, ...]:
    try:
        rels = tuple(Relation.parse(t.strip()) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not rels:
        raise argparse.ArgumentTypeError("relation list is empty")
    return rels


def _rule(text: str) -> PlantedRule:
    try:
        return dataio.parse_rule(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonneg_float(text: str) -> float:
    v = float(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _pos_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _digest(path: str) -> str:
    p = Path(path)
    if p.exists():
        data = p.read_bytes()
    else:
        data = dataio.dumps(dataio.bundled(path)).encode("utf-8")
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _load_data(args: argparse.Namespace) -> dataio.TemporalDataset:
    try:
        return dataio.load_path(args.data, getattr(args, "classes", None))
    except (OSError, LoadError) as exc:
        raise DataError(f"cannot load dataset {args.data}: {exc}") from None


def _load_tree(path: str) -> model.DecisionTree:
    try:
        return model.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, model.TreeFormatError) as exc:
        raise DataError(f"cannot load tree {path}: {exc}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


# --- commands -------------------------------------------------------------------------


def cmd_train(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    ds = _load_data(args)
    cfg = LearnerConfig(
        relations=args.relations,
        tie_break=args.tie_break,
        witness_policy=args.witness,
        seed=args.seed,
        extend_domain=not args.no_extend,
        stopping=StoppingConfig(args.min_leaf, args.max_depth, args.min_gain),
    )
    t1 = time.perf_counter()
    tree = learn(ds, cfg)
    t2 = time.perf_counter()
    _write(args.out, model.dumps(tree))
    report = oracle.verify_tree(tree, ds)
    manifest_path = args.manifest or f"{args.out}.manifest.json"
    manifest: dict[str, Any] = {
        "command": "train",
        "config": cfg.to_dict(),
        "data": str(args.data),
        "classes": None if args.classes is None else str(args.classes),
        "dataset_digest": _digest(args.data),
        "seed": args.seed,
        "threads": args.threads,
        "training_accuracy": report["training_accuracy"],
        "node_count": sum(1 for _ in tree.nodes()),
        "internal_nodes": tree.n_internal,
        "depth": tree.depth,
        "outputs": {"tree": str(args.out), "manifest": manifest_path},
    }
    if args.record_timings:
        manifest["timings"] = {"load_s": t1 - t0, "learn_s": t2 - t1}
    Path(manifest_path).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    print(f"training accuracy {report['training_accuracy']:.4f}, "
          f"{manifest['node_count']} nodes, depth {tree.depth} -> {args.out}")
    return EXIT_OK


def cmd_predict(args: argparse.Namespace) -> int:
    tree = _load_tree(args.tree)
    ds = prepare(_load_data(args), tree)
    rows = ["id,class,confidence" + (",rule" if args.explain else "")]
    for t in ds.timelines:
        pred = model.classify(tree, t)
        row = f"{t.id},{pred.label},{pred.confidence:.4f}"
        if args.explain:
            row += "," + json.dumps(model.path_formula(tree, pred.leaf), ensure_ascii=False)
        rows.append(row)
        for note in pred.diagnostics:
            print(f"warning: {t.id}: {note}", file=sys.stderr)
    _write(args.out, "\n".join(rows) + "\n")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    tree = _load_tree(args.tree)
    ds = prepare(_load_data(args), tree)
    classes = sorted(set(ds.classes) | set(tree.classes))
    matrix = {a: {b: 0 for b in classes} for a in classes}
    for t in ds.timelines:
        matrix[t.label][model.classify(tree, t).label] += 1
    hits = sum(matrix[c][c] for c in classes)
    width = max(len(c) for c in classes + ["true\\pred"])
    lines = [f"accuracy {hits / len(ds):.4f} ({hits}/{len(ds)})",
             " ".join(["true\\pred".ljust(width)] + [c.rjust(width) for c in classes])]
    for a in classes:
        lines.append(" ".join([a.ljust(width)] + [str(matrix[a][b]).rjust(width) for b in classes]))
    print("\n".join(lines))
    return EXIT_OK


def cmd_rules(args: argparse.Namespace) -> int:
    tree = _load_tree(args.tree)
    print("\n".join(model.rules(tree)))
    return EXIT_OK


def cmd_export_dot(args: argparse.Namespace) -> int:
    _write(args.out, model.to_dot(_load_tree(args.tree)))
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    spec = SynthSpec(args.n, args.length, tuple(args.rule), args.default_label, args.noise, args.seed,
                     tuple(args.distractor), tuple(args.negatives.split(",")))
    try:
        doc, truth = dataio.synth(spec)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    Path(args.out).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    truth_path = args.truth or f"{args.out}.truth.json"
    Path(truth_path).write_text(json.dumps(truth, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {args.n} instances to {args.out} ({truth['n_flipped']} labels flipped), truth in {truth_path}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    tree = _load_tree(args.tree)
    ds = _load_data(args)
    report = oracle.verify_tree(tree, ds)
    print(json.dumps(report, indent=2))
    return EXIT_OK if report["ok"] else EXIT_DATA


def cmd_baseline(args: argparse.Namespace) -> int:
    table = dataio.to_static_table(_load_data(args))
    tree = learn_static(table)
    acc = static_accuracy(tree, table)
    print(f"static ID3 training accuracy {acc:.4f}")
    return EXIT_OK


# --- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tid3", description="Interval temporal logic decision trees.")
    sub = p.add_subparsers(dest="command", required=True)

    def data_args(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--data", required=True,
                        help=f"dataset JSON, CSV event table, or bundled name ({', '.join(BUNDLED)})")
        sp.add_argument("--classes", default=None, help="instance,class CSV (with a CSV event table)")

    sp = sub.add_parser("train", help="learn a tree")
    data_args(sp)
    sp.add_argument("--out", required=True)
    sp.add_argument("--manifest", default=None)
    sp.add_argument("--relations", type=_relations, default=tuple(Relation), help="e.g. A,L,Oi")
    sp.add_argument("--no-extend", action="store_true", help="do not extend the domain by two points per side")
    sp.add_argument("--min-leaf", type=_pos_int, default=1)
    sp.add_argument("--max-depth", type=int, default=None)
    sp.add_argument("--min-gain", type=_nonneg_float, default=0.0)
    sp.add_argument("--tie-break", choices=TIE_BREAKS, default="deterministic")
    sp.add_argument("--witness", choices=WITNESS_POLICIES, default="lexicographic")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--record-timings", action="store_true", help="add wall-clock timings to the manifest")
    sp.set_defaults(func=cmd_train)

    sp = sub.add_parser("predict", help="classify timelines")
    sp.add_argument("--tree", required=True)
    data_args(sp)
    sp.add_argument("--explain", action="store_true")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("eval", help="accuracy and confusion matrix")
    sp.add_argument("--tree", required=True)
    data_args(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("rules", help="print every branch as a formula")
    sp.add_argument("--tree", required=True)
    sp.set_defaults(func=cmd_rules)

    sp = sub.add_parser("export-dot", help="Graphviz rendering of a tree")
    sp.add_argument("--tree", required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_export_dot)

    sp = sub.add_parser("synth", help="generate a dataset with planted rules")
    sp.add_argument("--n", type=_pos_int, required=True)
    sp.add_argument("--length", type=int, required=True, help="domain length N")
    sp.add_argument("--rule", type=_rule, action="append", required=True, help="REL:first:second:label")
    sp.add_argument("--default-label", default="0")
    sp.add_argument("--noise", type=float, default=0.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--distractor", action="append", default=[])
    sp.add_argument("--negatives", default="first-only,second-only",
                    help="comma-separated default-class modes: first-only, second-only, both")
    sp.add_argument("--out", required=True)
    sp.add_argument("--truth", default=None)
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("verify", help="cross-check a tree against the brute-force oracle")
    sp.add_argument("--tree", required=True)
    data_args(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("baseline", help="static ID3 on the flattened table")
    data_args(sp)
    sp.set_defaults(func=cmd_baseline)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    threads = os.environ.get("TID3_THREADS")
    if threads is not None and (not threads.isdigit() or int(threads) < 1):
        parser.error(f"TID3_THREADS must be a positive integer, got {threads!r}")
    args.threads = int(threads) if threads else None
    if getattr(args, "max_depth", None) is not None and args.max_depth < 0:
        parser.error("--max-depth must be >= 0")
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
