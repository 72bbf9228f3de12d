"""Command-line interface for bunsetsukit."""

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

from bunsetsukit import __version__
from bunsetsukit.config import CliConfig, LearnerParams, resolve_params
from bunsetsukit.core import (
    COVERAGE_KINDS,
    predict_corpus,
    run_experiment,
    train,
)
from bunsetsukit.corpus import (
    Corpus,
    corpus_instances,
    read_corpus,
    render_sentence,
    write_corpus,
)
from bunsetsukit.errors import ArgumentError, BunsetsukitError
from bunsetsukit.evaluation import (
    combine_oracle,
    format_report,
    format_table,
    format_tsv,
    mark_errors,
    score,
)
from bunsetsukit.learners.rules import (
    DecisionListModel,
    RuleModel,
    format_decision_list,
)
from bunsetsukit.learners.tree import DecisionTreeModel
from bunsetsukit.models import load_model, save_model
from bunsetsukit.patterns import format_template_table
from bunsetsukit.registry import expand_kinds, get_learner, learners_in_order
from bunsetsukit.rulebase import exclusive_coverage
from bunsetsukit.synthetic import BoundaryRule, SyntheticConfig, generate_synthetic

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)-8s %(name)s: %(message)s"

EPILOG = """\
examples:
  bunsetsukit gen-synthetic --seed 1 -o learn.txt
  bunsetsukit train learn.txt --method method2 -o method2.json
  bunsetsukit predict test.txt --model method2.json
  bunsetsukit predict test.txt --model method2.json --render
  bunsetsukit evaluate test.txt --model method2.json --show-errors
  bunsetsukit compare --learn learn.txt --test test.txt --methods all
  bunsetsukit rules --model decision_list.json --limit 20
  bunsetsukit evaluate test.txt --model method2.json --combine tree.txt
  bunsetsukit rules --model decision_tree.json
"""


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("learner parameters")
    group.add_argument(
        "--maxent-cutoff",
        type=int,
        metavar="N",
        help="drop (feature, category) pairs seen fewer than N times (default 1)",
    )
    group.add_argument(
        "--maxent-max-iter",
        type=int,
        metavar="N",
        help="iterative-scaling budget (default 1000)",
    )
    group.add_argument(
        "--maxent-tolerance",
        type=float,
        metavar="EPS",
        help="stop when every log ratio is below EPS (default 1e-6)",
    )
    group.add_argument(
        "--tree-threshold",
        type=int,
        metavar="N",
        help="map feature values seen fewer than N times to OTHERS (default 10)",
    )
    group.add_argument(
        "--no-prune",
        action="store_const",
        const=False,
        dest="tree_prune",
        help="keep the fully grown decision tree",
    )
    group.add_argument(
        "--tree-confidence",
        type=float,
        metavar="CF",
        help="pruning confidence level (default 0.25)",
    )
    group.add_argument(
        "--tree-min-leaf",
        type=int,
        metavar="N",
        help="cases required in at least two branches of a split (default 2)",
    )


def _add_synthetic_flags(parser: argparse.ArgumentParser) -> None:
    defaults = SyntheticConfig()
    group = parser.add_argument_group("generator settings")
    for flag, dest, kind in (
        ("--sentences", "n_sentences", int),
        ("--min-length", "min_length", int),
        ("--max-length", "max_length", int),
        ("--major-pos", "n_major_pos", int),
        ("--minor-pos", "n_minor_pos", int),
        ("--semantic-codes", "n_semantic", int),
        ("--words", "n_words", int),
        ("--semantic-none-rate", "semantic_none_rate", float),
        ("--partition-rate", "partition_rate", float),
        ("--noise", "noise", float),
    ):
        group.add_argument(
            flag,
            dest=dest,
            type=kind,
            default=getattr(defaults, dest),
            help=f"(default {getattr(defaults, dest)})",
        )
    group.add_argument(
        "--rule",
        choices=[rule.value for rule in BoundaryRule],
        default=defaults.rule.value,
        help="how spaces are labeled (default %(default)s)",
    )


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with every subcommand."""
    parser = argparse.ArgumentParser(
        prog="bunsetsukit",
        description="Bunsetsu boundary identification with six supervised learners.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "-V",
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument(
        "-v", "--verbose", action="store_true", help="log debug messages"
    )
    verbosity.add_argument(
        "-q", "--quiet", action="store_true", help="log warnings and errors only"
    )
    commands = parser.add_subparsers(dest="subcommand", metavar="COMMAND")
    commands.required = True

    cmd = commands.add_parser("train", help="train a model on a labeled corpus")
    cmd.add_argument("corpus", type=Path, help="labeled corpus file")
    cmd.add_argument("-m", "--method", required=True, help="learner kind")
    cmd.add_argument("-o", "--output", type=Path, required=True, help="model file")
    _add_param_flags(cmd)

    cmd = commands.add_parser("predict", help="insert partition marks into a corpus")
    cmd.add_argument("corpus", type=Path, help="corpus file (marks are ignored)")
    cmd.add_argument("--model", type=Path, required=True, help="model file")
    cmd.add_argument("-o", "--output", type=Path, help="output file (default stdout)")
    cmd.add_argument(
        "--render",
        action="store_true",
        help="print words with | at partitions instead of the corpus format",
    )

    cmd = commands.add_parser("evaluate", help="score predictions on a gold corpus")
    cmd.add_argument("corpus", type=Path, help="gold corpus file")
    source = cmd.add_mutually_exclusive_group(required=True)
    source.add_argument("--model", type=Path, help="model file to predict with")
    source.add_argument("--predicted", type=Path, help="already-predicted corpus")
    cmd.add_argument(
        "--show-errors",
        action="store_true",
        help="print sentences with |NEED and |WRONG marks",
    )
    cmd.add_argument(
        "--combine",
        type=Path,
        metavar="PREDICTED",
        help="also score an oracle right wherever either prediction is right",
    )

    cmd = commands.add_parser("compare", help="train and score several learners")
    cmd.add_argument("--learn", type=Path, required=True, help="learning corpus")
    cmd.add_argument("--test", type=Path, required=True, help="test corpus")
    cmd.add_argument(
        "--methods",
        nargs="+",
        default=["all"],
        metavar="KIND",
        help="learner kinds, or 'all' (default)",
    )
    cmd.add_argument(
        "--format",
        dest="output_format",
        choices=("text", "tsv"),
        default="text",
        help="table format (default %(default)s)",
    )
    _add_param_flags(cmd)

    cmd = commands.add_parser("gen-synthetic", help="write a synthetic corpus")
    cmd.add_argument("-o", "--output", type=Path, help="output file (default stdout)")
    cmd.add_argument("--seed", type=int, default=0, help="generator seed")
    _add_synthetic_flags(cmd)

    commands.add_parser("templates", help="print the 152 pattern templates")

    cmd = commands.add_parser(
        "rules", help="print the ranked rules or the decision tree of a model"
    )
    cmd.add_argument(
        "--model", type=Path, required=True, help="rule-family or tree model"
    )
    cmd.add_argument(
        "--limit", type=int, metavar="N", help="print the first N lines only"
    )

    commands.add_parser("methods", help="list the registered learners")
    return parser


def _config_from_args(args: argparse.Namespace) -> CliConfig:
    """Turn parsed arguments into a CliConfig.

    Raises:
        ArgumentError: on out-of-range parameters or unknown learner kinds.

    """
    params = LearnerParams()
    if hasattr(args, "maxent_cutoff"):
        params = resolve_params(
            {
                "maxent_cutoff": args.maxent_cutoff,
                "maxent_max_iter": args.maxent_max_iter,
                "maxent_tolerance": args.maxent_tolerance,
                "tree_threshold": args.tree_threshold,
                "tree_prune": args.tree_prune,
                "tree_confidence": args.tree_confidence,
                "tree_min_leaf": args.tree_min_leaf,
            }
        )

    kinds: tuple[str, ...] = ()
    if getattr(args, "method", None) is not None:
        kinds = (get_learner(args.method).kind,)
    elif getattr(args, "methods", None) is not None:
        kinds = tuple(expand_kinds(args.methods))

    synthetic = None
    if args.subcommand == "gen-synthetic":
        synthetic = SyntheticConfig(
            n_sentences=args.n_sentences,
            min_length=args.min_length,
            max_length=args.max_length,
            n_major_pos=args.n_major_pos,
            n_minor_pos=args.n_minor_pos,
            n_semantic=args.n_semantic,
            n_words=args.n_words,
            semantic_none_rate=args.semantic_none_rate,
            rule=BoundaryRule(args.rule),
            partition_rate=args.partition_rate,
            noise=args.noise,
        )

    return CliConfig(
        subcommand=args.subcommand,
        corpus=getattr(args, "corpus", None),
        learn=getattr(args, "learn", None),
        test=getattr(args, "test", None),
        model=getattr(args, "model", None),
        output=getattr(args, "output", None),
        predicted=getattr(args, "predicted", None),
        kinds=kinds,
        params=params,
        synthetic=synthetic,
        output_format=getattr(args, "output_format", "text"),
        show_errors=getattr(args, "show_errors", False),
        limit=getattr(args, "limit", None),
        combine=getattr(args, "combine", None),
        render=getattr(args, "render", False),
        seed=getattr(args, "seed", 0),
    )


def _configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    package_logger = logging.getLogger("bunsetsukit")
    package_logger.handlers.clear()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    package_logger.addHandler(handler)
    package_logger.setLevel(level)


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    with open(output, "w", encoding="utf-8", newline="\n") as file:
        file.write(text)
    logger.info("wrote %s", output)


def _require(path: Path | None, flag: str) -> Path:
    if path is None:
        msg = f"{flag} is required"
        raise ArgumentError(msg)
    return path


def cmd_train(config: CliConfig) -> int:
    """Train one learner and save it."""
    corpus = read_corpus(_require(config.corpus, "corpus"))
    learner = train(config.kinds[0], corpus, config.params)
    save_model(learner, _require(config.output, "--output"))
    return 0


def cmd_predict(config: CliConfig) -> int:
    """Write the corpus with predicted partition marks."""
    learner = load_model(_require(config.model, "--model"))
    corpus = read_corpus(_require(config.corpus, "corpus"))
    predicted = predict_corpus(learner, corpus)
    if config.render:
        _emit("".join(render_sentence(s) + "\n" for s in predicted), config.output)
    else:
        _emit(write_corpus(predicted), config.output)
    return 0


def _check_same_morphemes(gold: Corpus, predicted: Corpus) -> None:
    if len(gold) != len(predicted):
        msg = (
            f"predicted corpus has {len(predicted)} sentences, "
            f"gold corpus has {len(gold)}"
        )
        raise ArgumentError(msg)
    for number, (g, p) in enumerate(zip(gold, predicted, strict=True), start=1):
        if g.morphemes != p.morphemes:
            msg = f"sentence {number}: predicted morphemes differ from the gold ones"
            raise ArgumentError(msg)


def _flags(corpus: Corpus) -> list[bool]:
    return [flag for sentence in corpus for flag in sentence.boundaries]


def cmd_evaluate(config: CliConfig) -> int:
    """Score a model, or an already-predicted corpus, against a gold corpus."""
    gold = read_corpus(_require(config.corpus, "corpus"))
    learner = None
    if config.model is not None:
        learner = load_model(config.model)
        predicted = predict_corpus(learner, gold)
    else:
        predicted = read_corpus(_require(config.predicted, "--predicted"))
        _check_same_morphemes(gold, predicted)

    gold_flags = _flags(gold)
    report = score(_flags(predicted), gold_flags)
    if (
        learner is not None
        and learner.kind in COVERAGE_KINDS
        and isinstance(learner.model, RuleModel)
    ):
        report = report.with_coverage(
            exclusive_coverage(learner.model.table, corpus_instances(gold))
        )
    sys.stdout.write(format_report(report))
    if config.show_errors:
        for g, p in zip(gold, predicted, strict=True):
            if g.boundaries != p.boundaries:
                sys.stdout.write(mark_errors(g, p.boundaries) + "\n")
    if config.combine is not None:
        other = read_corpus(config.combine)
        _check_same_morphemes(gold, other)
        combined = combine_oracle(_flags(predicted), _flags(other), gold_flags)
        sys.stdout.write(f"oracle combination with {config.combine}:\n")
        sys.stdout.write(format_report(score(combined, gold_flags)))
    return 0


def cmd_compare(config: CliConfig) -> int:
    """Print the method-by-split comparison table."""
    learning = read_corpus(_require(config.learn, "--learn"))
    test = read_corpus(_require(config.test, "--test"))
    rows = run_experiment(learning, test, config.kinds, config.params)
    if config.output_format == "tsv":
        sys.stdout.write(format_tsv(rows))
    else:
        sys.stdout.write(format_table(rows))
    return 0 if all(row.report is not None for row in rows) else 1


def cmd_gen_synthetic(config: CliConfig) -> int:
    """Write a synthetic labeled corpus."""
    assert config.synthetic is not None
    corpus = generate_synthetic(config.synthetic, config.seed)
    _emit(write_corpus(corpus), config.output)
    return 0


def cmd_templates(config: CliConfig) -> int:
    """Print the template table."""
    sys.stdout.write(format_template_table())
    return 0


def cmd_rules(config: CliConfig) -> int:
    """Print the ranked rules of a rule-family model, or a tree model's tree."""
    learner = load_model(_require(config.model, "--model"))
    model = learner.model
    if isinstance(model, DecisionTreeModel):
        lines = model.format_tree().splitlines(keepends=True)
        sys.stdout.write("".join(lines[: config.limit]))
        return 0
    if not isinstance(model, RuleModel):
        msg = f"{learner.kind} has neither rules nor a tree to list"
        raise ArgumentError(msg)
    if not isinstance(model, DecisionListModel):
        model = DecisionListModel(model.table)
    sys.stdout.write(format_decision_list(model, config.limit))
    return 0


def cmd_methods(config: CliConfig) -> int:
    """List the registered learners in table order."""
    for info in learners_in_order():
        family = " [rules]" if info.rule_family else ""
        print(f"{info.kind:<14} {info.title:<16} {info.description}{family}")
    return 0


COMMANDS: dict[str, Callable[[CliConfig], int]] = {
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "compare": cmd_compare,
    "gen-synthetic": cmd_gen_synthetic,
    "templates": cmd_templates,
    "rules": cmd_rules,
    "methods": cmd_methods,
}


def run_cli(argv: Sequence[str] | None = None) -> int:
    """Run one command and return its exit status.

    0 on success, 1 on a library or file error, 2 on a usage error.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    _configure_logging(args.verbose, args.quiet)
    try:
        config = _config_from_args(args)
    except ArgumentError as e:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {e}", file=sys.stderr)
        return 2

    try:
        return COMMANDS[config.subcommand](config)
    except BunsetsukitError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    """Entry point for the bunsetsukit CLI."""
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
