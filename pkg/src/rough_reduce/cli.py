"""Command-line driver: train, eval, sweep, and inspect subcommands."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .eigenspace import strategy_from_name
from .model_io import load_model, save_model
from .pgm import load_dataset, split
from .pipeline import (
    PipelineConfig,
    evaluate_model,
    report_to_text,
    run_pipeline,
    sweep_dimensions,
    sweep_to_csv,
)
from .rough import (
    EXHAUSTIVE_LIMIT,
    InconsistentTableError,
    core_values,
    dependency_degree,
    greedy_reduct,
    minimize_table,
    positive_region,
    relative_reducts,
    value_reducts,
)
from .selection import attr_name, fit_selection_with_escalation
from .table import DecisionTable, reduced_rules_to_text, table_from_text, table_to_text


def _add_data_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data-dir", required=True, help="root of per-class PGM directories")
    parser.add_argument("--per-class-train", type=int, default=5,
                        help="training images per class (rest become the test set)")
    parser.add_argument("--seed", type=int, default=0, help="split and init seed")


def _add_pipeline_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--bins", type=int, default=5, help="discretization bins")
    parser.add_argument("--strategy", default="standard",
                        choices=["standard", "drop-last", "energy", "stretch", "drop-first"],
                        help="eigenvector selection strategy")
    parser.add_argument("--energy-threshold", type=float, default=0.9)
    parser.add_argument("--stretch-threshold", type=float, default=0.01)
    parser.add_argument("--drop-fraction", type=float, default=0.4)
    parser.add_argument("--eta", type=float, default=0.5, help="learning rate")
    parser.add_argument("--epochs", type=int, default=5000, help="training epoch cap")
    parser.add_argument("--no-reduct", action="store_true",
                        help="skip rough-set selection, keep all projected coordinates")


def _config_from_args(args: argparse.Namespace) -> PipelineConfig:
    strategy = strategy_from_name(
        args.strategy,
        drop_fraction=args.drop_fraction,
        energy_threshold=args.energy_threshold,
        stretch_threshold=args.stretch_threshold,
    )
    return PipelineConfig(
        strategy=strategy,
        bins=args.bins,
        learning_rate=args.eta,
        max_epochs=args.epochs,
        seed=args.seed,
        use_reduct=not args.no_reduct,
    )


def _cmd_train(args: argparse.Namespace) -> int:
    dataset = load_dataset(args.data_dir)
    train_set, test_set = split(dataset, args.per_class_train, args.seed)
    model, report = run_pipeline(train_set, test_set, _config_from_args(args))
    print(report_to_text(report, dataset.class_names), end="")
    if args.model_out:
        save_model(model, args.model_out)
        print(f"model_saved: {args.model_out}")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    model = load_model(args.model_in)
    dataset = load_dataset(args.data_dir)
    if dataset.class_names != model.class_names:
        print(
            f"warning: data classes {dataset.class_names} differ from "
            f"model classes {model.class_names}",
            file=sys.stderr,
        )
    if args.per_class_train is not None:
        _, target = split(dataset, args.per_class_train, args.seed)
    else:
        target = dataset
    report = evaluate_model(model, target)
    print(report_to_text(report, model.class_names), end="")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    dataset = load_dataset(args.data_dir)
    train_set, test_set = split(dataset, args.per_class_train, args.seed)
    q_values = [int(tok) for tok in args.qs.split(",") if tok.strip()]
    rows = sweep_dimensions(train_set, test_set, q_values, _config_from_args(args))
    csv = sweep_to_csv(rows)
    if args.out:
        Path(args.out).write_text(csv)
        print(f"sweep_saved: {args.out}")
    else:
        print(csv, end="")
    return 0


def _cmd_inspect(args: argparse.Namespace) -> int:
    if args.table:
        table = table_from_text(Path(args.table).read_text())
        print(f"table: {args.table}")
    else:
        table = _pipeline_table(args)
    _print_table_report(table)
    return 0


def _pipeline_table(args: argparse.Namespace) -> DecisionTable:
    from .eigenspace import fit_eigenspace, select

    dataset = load_dataset(args.data_dir)
    if args.per_class_train is not None:
        subset, _ = split(dataset, args.per_class_train, args.seed)
    else:
        subset = dataset
    config = _config_from_args(args)
    vectors = subset.vectors()
    space = select(fit_eigenspace(vectors), config.strategy)
    coords = (vectors - space.mean) @ space.basis
    _, table, selection, bins_used = fit_selection_with_escalation(
        coords, subset.labels(), config.bins
    )
    print(f"projected_dimension: {space.n_components}")
    print(f"bins_used: {bins_used}")
    print(f"selection: {selection.provenance}")
    kept = [attr_name(i) for i in selection.selected_indices]
    return table.project_columns(kept)


def _print_table_report(table: DecisionTable) -> None:
    print("decision table:")
    print(_indent(table_to_text(table)))
    gamma = dependency_degree(table, table.attrs)
    print(f"consistency_factor: {gamma:.6f}")
    full = positive_region(table, table.attrs)
    drop_one_core = sorted(
        (a for a in table.attrs if positive_region(table, set(table.attrs) - {a}) != full),
        key=table.attrs.index,
    )
    print(f"core: {{{', '.join(drop_one_core)}}}")
    if len(table.attrs) <= EXHAUSTIVE_LIMIT:
        reducts = relative_reducts(table)
        for i, r in enumerate(reducts):
            print(f"reduct[{i}]: {{{', '.join(table.sort_attrs(r))}}}")
    else:
        r = greedy_reduct(table)
        print(f"greedy_reduct: {{{', '.join(table.sort_attrs(r))}}}")
    if gamma < 1.0:
        print("rule minimization skipped: table is inconsistent")
        return
    print("core values:")
    print(_indent(reduced_rules_to_text(core_values(table), table.attrs, table.decision)))
    print("value reducts:")
    for rid in table.rules:
        for rule in value_reducts(table, rid):
            cells = " ".join(f"{a}={rule.cells[a]}" for a in table.sort_attrs(rule.cells))
            print(f"  rule {rid}: {cells or '(none)'} -> {rule.decision}")
    print("minimized table:")
    print(_indent(reduced_rules_to_text(minimize_table(table), table.attrs, table.decision)))


def _indent(text: str) -> str:
    return "\n".join("  " + line for line in text.rstrip("\n").split("\n"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rough-reduce",
        description="Eigenspace projection + rough-set feature selection + MLP classifier",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="fit the pipeline and report test accuracy")
    _add_data_args(p_train)
    _add_pipeline_args(p_train)
    p_train.add_argument("--model-out", help="write the trained model here")
    p_train.set_defaults(func=_cmd_train)

    p_eval = sub.add_parser("eval", help="evaluate a saved model")
    p_eval.add_argument("--data-dir", required=True)
    p_eval.add_argument("--model-in", required=True)
    p_eval.add_argument("--per-class-train", type=int, default=None,
                        help="if given, evaluate only on the test half of this split")
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.set_defaults(func=_cmd_eval)

    p_sweep = sub.add_parser("sweep", help="accuracy vs eigenvector count, as CSV")
    _add_data_args(p_sweep)
    _add_pipeline_args(p_sweep)
    p_sweep.add_argument("--qs", default="5,10,20,40",
                         help="comma-separated eigenvector counts")
    p_sweep.add_argument("--out", help="CSV output path (default: stdout)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_inspect = sub.add_parser(
        "inspect", help="print the rough-set report for a table or dataset"
    )
    p_inspect.add_argument("--table", help="decision table text file")
    p_inspect.add_argument("--data-dir", help="derive the table from this dataset instead")
    p_inspect.add_argument("--per-class-train", type=int, default=None)
    p_inspect.add_argument("--seed", type=int, default=0)
    _add_pipeline_args(p_inspect)
    p_inspect.set_defaults(func=_cmd_inspect)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "inspect" and not (args.table or args.data_dir):
        parser.error("inspect needs --table or --data-dir")
    try:
        return args.func(args)
    except (InconsistentTableError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
