"""
Command-line interface: ``cogease score``, ``cogease tune``
and ``cogease explain``.

Exit codes are 0 on success, 1 on usage, input/output or
configuration errors, and 2 on validation failures.
"""

import argparse
import logging
import sys
from collections.abc import Sequence

from cogease.alignment import AlignmentResources
from cogease.config import get_config_val_or_default, load_config_file
from cogease.defaults import (
    ScoringSettings,
    audience_profile,
    audiences,
    default_max_chunk_len,
    default_max_chunks_per_clause,
    default_tuning_max_iterations,
    default_tuning_seed,
    default_tuning_step,
)
from cogease.errors import CogEaseError, EvaluationError
from cogease.evaluate import dump_report, evaluate_corpus, evaluate_pair
from cogease.ingest import (
    dump_profile,
    load_language_profile,
    load_lexicon,
    load_profile,
    load_synonyms,
    read_corpus,
)
from cogease.model import Level, UnitReport
from cogease.tuning import TuningConfig, fit_weights

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2

path_keys = ("profile", "lexicon", "terms", "stats", "synonyms", "language")


class UsageError(CogEaseError):
    """
    Command-line arguments are inconsistent.
    """


def _common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--corpus", required=True, help="Corpus in JSON Lines format.")
    parser.add_argument("--config", help="TOML configuration file.")
    parser.add_argument("--profile", help="Weight profile JSON.")
    parser.add_argument(
        "--audience",
        choices=audiences,
        help="Preset profile to use when no profile file is given. Default 'general'.",
    )
    parser.add_argument("--lexicon", help="Frequency list, token<TAB>count.")
    parser.add_argument("--terms", help="Term list, one term per line.")
    parser.add_argument("--stats", help="Language statistics JSON.")
    parser.add_argument("--synonyms", help="Synonym sets, tab-separated, one per line.")
    parser.add_argument("--language", help="Language profile TOML with stemming rules.")
    parser.add_argument(
        "--score-range",
        nargs=2,
        type=float,
        metavar=("LO", "HI"),
        help="Scale of the human scores, mapped onto [0, 1].",
    )
    parser.add_argument(
        "--strict",
        action="store_true",
        help="Fail with exit code 2 if any corpus record is invalid.",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Log more (-v for info, -vv for debug).",
    )
    return parser


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="cogease",
        description="Cognitive-ease scoring of machine translation output.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    score = commands.add_parser("score", parents=[common], help="Score a corpus.")
    score.add_argument("--out", help="Report JSON path. Default: standard output.")
    score.add_argument(
        "--summary",
        action="store_true",
        help="Print the corpus mean G to standard output.",
    )
    score.add_argument("--jobs", type=int, default=1, help="Worker processes. Default 1.")

    tune = commands.add_parser(
        "tune", parents=[common], help="Fit profile weights to human scores."
    )
    tune.add_argument("--out", required=True, help="Path for the fitted profile JSON.")
    tune.add_argument("--seed", type=int, default=default_tuning_seed)
    tune.add_argument("--max-iters", type=int, default=default_tuning_max_iterations)
    tune.add_argument("--step", type=float, default=default_tuning_step)
    tune.add_argument(
        "--freeze",
        action="append",
        default=[],
        metavar="PATH",
        help="Weight path to hold fixed, e.g. 'w' or 'alpha.word'. Repeatable.",
    )
    tune.add_argument(
        "--optimize-gamma", action="store_true", help="Also fit per-level gamma."
    )

    explain = commands.add_parser(
        "explain", parents=[common], help="Show the score breakdown of one unit."
    )
    explain.add_argument("--id", required=True, help="Unit id.")
    return parser


def _resolve_path(args: argparse.Namespace, key: str, config: dict) -> str | None:
    value = getattr(args, key)
    if value is not None:
        return value
    return get_config_val_or_default(key, None, config_dict=config.get("paths", {}))


def _load_inputs(args: argparse.Namespace) -> dict:
    config = load_config_file(args.config) if args.config else {}
    paths = {key: _resolve_path(args, key, config) for key in path_keys}

    if paths["profile"] is not None:
        profile = load_profile(paths["profile"])
    else:
        profile = audience_profile(args.audience or "general")

    lexicon = None
    if (paths["lexicon"] is None) != (paths["stats"] is None):
        raise UsageError("--lexicon and --stats must be given together.")
    if paths["lexicon"] is not None:
        lexicon = load_lexicon(paths["lexicon"], paths["terms"], paths["stats"])
    elif paths["terms"] is not None:
        raise UsageError("--terms needs --lexicon and --stats.")

    resources = AlignmentResources()
    if paths["language"] is not None:
        resources = AlignmentResources(stemmer=load_language_profile(paths["language"]))
    if paths["synonyms"] is not None:
        resources = AlignmentResources(
            stemmer=resources.stemmer, synonyms=load_synonyms(paths["synonyms"])
        )

    scoring = config.get("scoring", {})
    settings = ScoringSettings(
        max_chunk_len=get_config_val_or_default(
            "max_chunk_len", default_max_chunk_len, scoring, cast=int
        ),
        max_chunks_per_clause=get_config_val_or_default(
            "max_chunks_per_clause", default_max_chunks_per_clause, scoring, cast=int
        ),
    )
    if settings.max_chunk_len <= 0 or settings.max_chunks_per_clause <= 0:
        raise UsageError(f"Scoring settings must be positive. Got {settings}.")
    return dict(profile=profile, lexicon=lexicon, resources=resources, settings=settings)


def _read_pairs(args: argparse.Namespace):
    score_range = tuple(args.score_range) if args.score_range else None
    pairs, diagnostics = read_corpus(args.corpus, score_range)
    for d in diagnostics:
        print(f"cogease: {args.corpus}: {d}", file=sys.stderr)
    if diagnostics and args.strict:
        raise EvaluationError(
            f"{len(diagnostics)} invalid record(s) in '{args.corpus}' (--strict)."
        )
    return pairs


def cmd_score(args: argparse.Namespace) -> int:
    inputs = _load_inputs(args)
    pairs = _read_pairs(args)
    if args.jobs < 1:
        raise UsageError(f"--jobs must be at least 1. Got {args.jobs}.")
    report = evaluate_corpus(pairs, jobs=args.jobs, **inputs)
    text = dump_report(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
    elif not args.summary:
        sys.stdout.write(text)
    if args.summary:
        mean = report.corpus_mean_G
        print("nan" if mean is None else repr(mean))
    return EXIT_OK


def cmd_tune(args: argparse.Namespace) -> int:
    inputs = _load_inputs(args)
    pairs = _read_pairs(args)
    config = TuningConfig(
        max_iterations=args.max_iters,
        step=args.step,
        seed=args.seed,
        frozen=frozenset(args.freeze),
        optimize_gamma=args.optimize_gamma,
    )
    result = fit_weights(pairs, inputs.pop("profile"), config, **inputs)
    with open(args.out, "w", encoding="utf-8") as f:
        f.write(dump_profile(result.profile))

    def fmt(x):
        return "undefined" if x is None else f"{x:.6f}"

    print(f"initial_loss {result.initial_loss:.10g}")
    print(f"final_loss {result.final_loss:.10g}")
    print(f"pearson {fmt(result.initial_pearson)} -> {fmt(result.pearson)}")
    print(f"spearman {fmt(result.initial_spearman)} -> {fmt(result.spearman)}")
    print(f"iterations {result.iterations}")
    return EXIT_OK


def format_explanation(report: UnitReport, profile_name: str = "") -> str:
    """
    Render a unit's score breakdown as a plain-text table.

    Parameters
    ----------
    report
        The unit report.

    profile_name
        Profile name for the header. Default ``""``.

    Returns
    -------
    str
        One row per parameter of each active level, a
        summary row per level, and the aggregation line.
    """
    lines = [
        f"unit {report.unit_id}  reference {report.reference_index}"
        + (f"  profile {profile_name}" if profile_name else ""),
        f"{'level':<12} {'parameter':<22} {'value':>10} {'weight':>10}",
    ]
    for level in Level:
        score = report.levels.get(level)
        if score is None:
            continue
        if not score.active:
            lines.append(f"{level:<12} inactive")
            continue
        for kind, values, weights in (("P", score.P, score.alpha), ("Q", score.Q, score.beta)):
            for name, value in values.items():
                weight = weights.get(name)
                shown = "-" if weight is None else f"{weight:.6f}"
                lines.append(f"{level:<12} {kind + ' ' + name:<22} {value:>10.6f} {shown:>10}")
        lines.append(
            f"{level:<12} A={score.A:.6f} B={score.B:.6f} G={score.G:.6f} "
            f"w'={report.level_weights[level]:.6f}"
        )
    terms = " + ".join(
        f"{report.level_weights[level]:.12g}*{report.levels[level].G:.12g}"
        for level in report.level_weights
    )
    lines.append(f"G = {terms} = {report.G:.12g}")
    weakest = report.weakest_level
    if weakest is not None:
        lines.append(f"weakest level: {weakest}")
    return "\n".join(lines) + "\n"


def cmd_explain(args: argparse.Namespace) -> int:
    inputs = _load_inputs(args)
    pairs = {pair.id: pair for pair in _read_pairs(args)}
    if args.id not in pairs:
        raise EvaluationError(f"No unit with id '{args.id}' in '{args.corpus}'.")
    report = evaluate_pair(pairs[args.id], **inputs)
    sys.stdout.write(format_explanation(report, inputs["profile"].name))
    return EXIT_OK


commands = {"score": cmd_score, "tune": cmd_tune, "explain": cmd_explain}


def main(argv: Sequence[str] = None) -> int:
    """
    Run the command line.

    Parameters
    ----------
    argv
        Arguments without the program name. If ``None``,
        use ``sys.argv[1:]``.

    Returns
    -------
    int
        The exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    logging.basicConfig(
        level=max(logging.DEBUG, logging.WARNING - 10 * args.verbose),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return commands[args.command](args)
    except EvaluationError as e:
        print(f"cogease: error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (CogEaseError, ValueError, OSError) as e:
        print(f"cogease: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
