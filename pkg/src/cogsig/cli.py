"""Command-line pipeline: simulate -> ingest -> extract -> train -> evaluate -> identify.

Each subcommand is a thin deterministic wrapper over the library; stages
communicate through files, so every stage can be regression-tested on its
own.  The COGSIG_LOG environment variable controls diagnostic verbosity
only and never affects results.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

from . import bayes, model_io, simulate
from .config import (LOG_FORMAT_VERSION, TABLE_FORMAT_VERSION, PipelineConfig)
from .events import (FORMAT_JSONL, FORMAT_MACROCSV, LogParseError, SessionLog,
                     parse_event_log, serialize_event_log, validate_session)
from .features import (CaseTable, StimuliLayout, build_case_table, concat_tables,
                       parse_case_table, serialize_case_table)

log = logging.getLogger("cogsig")


class CliError(Exception):
    """Operational failure; the message names the failing input."""


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}") from None


def _sniff_format(path: str, text: str, explicit: str | None) -> str:
    if explicit and explicit != "auto":
        return explicit
    head = text.lstrip()[:64]
    if head.startswith("case,"):
        return FORMAT_MACROCSV
    if head.startswith("{"):
        return FORMAT_JSONL
    raise CliError(f"cannot determine log format of {path}; pass --format")


def _load_log(path: str, fmt: str | None, user_id: str | None = None,
              session_id: str | None = None) -> SessionLog:
    text = _read(path)
    resolved = _sniff_format(path, text, fmt)
    try:
        return parse_event_log(text, resolved,
                               user_id=user_id or "unknown",
                               session_id=session_id or os.path.basename(path))
    except LogParseError as exc:
        raise CliError(f"{path}: {exc}") from None


def _load_json_doc(path: str, loader, what: str):
    text = _read(path)
    try:
        return loader(json.loads(text))
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(f"{path}: invalid {what} document ({exc})") from None


def _load_layout(path: str | None) -> StimuliLayout:
    if path is None:
        return simulate.default_layout()
    return _load_json_doc(path, simulate.layout_from_dict, "layout")


def _config_from_args(args) -> PipelineConfig:
    try:
        return PipelineConfig(
            tick_s=args.tick,
            method=args.method,
            k=args.k,
            threshold_t=args.t,
            smoothing_alpha=args.alpha,
            split=args.split,
            log_base=args.log_base,
            drop_empty_cases=not args.keep_empty,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _add_config_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tick", type=float, default=0.01,
                        help="case window length in seconds (default 0.01)")
    parser.add_argument("--method", choices=["equal-frequency", "equal-width"],
                        default="equal-width", help="discretization method")
    parser.add_argument("--k", type=int, default=10, help="number of intervals")
    parser.add_argument("--t", type=float, default=0.1,
                        help="attribute connection threshold")
    parser.add_argument("--alpha", type=float, default=1.0,
                        help="CPT smoothing pseudo-count")
    parser.add_argument("--split", default="interleaved",
                        help="train/test split mode: interleaved or seeded:<n>")
    parser.add_argument("--log-base", type=float, default=None,
                        help="logarithm base for information measures (default: e)")
    parser.add_argument("--keep-empty", action="store_true",
                        help="keep all-NILL ticks when fitting and classifying")


def _normalize_log_base(args) -> None:
    if args.log_base is None:
        args.log_base = math.e


def _stamp(session: SessionLog) -> SessionLog:
    """Embed provenance: format version plus the config in effect."""
    meta = dict(session.meta)
    meta.setdefault("format_version", LOG_FORMAT_VERSION)
    meta.setdefault("pipeline_config",
                    json.dumps(PipelineConfig().to_dict(), sort_keys=True,
                               separators=(",", ":")))
    return SessionLog(session.user_id, session.session_id, session.events, meta)


def cmd_simulate(args) -> int:
    profiles = {"A": simulate.default_profiles()[0], "B": simulate.default_profiles()[1]}
    if args.profile in profiles:
        profile = profiles[args.profile]
    else:
        profile = _load_json_doc(args.profile, simulate.profile_from_dict, "profile")
    script = (_load_json_doc(args.script, simulate.script_from_dict, "task script")
              if args.script else simulate.default_script())
    if args.repeat > 1:
        script = script.repeated(args.repeat)
    session = simulate.generate_session(profile, script, seed=args.seed,
                                        user_id=args.user_id)
    _write(args.out, serialize_event_log(_stamp(session), args.format))
    log.info("simulated %d events for %s", len(session.events), session.user_id)
    return 0


def cmd_ingest(args) -> int:
    session = _load_log(args.input, args.format, args.user_id, args.session_id)
    _write(args.out, serialize_event_log(_stamp(session), FORMAT_JSONL))
    return 0


def cmd_extract(args) -> int:
    config = _config_from_args(args)
    layout = _load_layout(args.layout)
    tables = []
    for path in args.inputs:
        session = _load_log(path, args.format)
        try:
            tables.append(build_case_table(session, layout, config.tick_s))
        except ValueError as exc:
            raise CliError(f"{path}: {exc}") from None
    table = concat_tables(tables)
    meta = json.dumps({"format_version": TABLE_FORMAT_VERSION,
                       "config": config.to_dict()}, sort_keys=True)
    _write(args.out, serialize_case_table(table, meta_comment=meta))
    log.info("extracted %d cases from %d session(s)", len(table.rows), len(tables))
    return 0


def _load_table(path: str) -> CaseTable:
    try:
        return parse_case_table(_read(path))
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from None


def cmd_train(args) -> int:
    config = _config_from_args(args)
    table = _load_table(args.table)
    if config.drop_empty_cases:
        table = table.without_empty_rows()
    layout = _load_layout(args.layout)
    try:
        net = bayes.train_classifier(table, config.method, config.k,
                                     config.threshold_t, config.smoothing_alpha,
                                     config.log_base)
    except ValueError as exc:
        raise CliError(f"{args.table}: {exc}") from None
    _write(args.out, model_io.model_to_json(net, config, layout))
    return 0


def cmd_evaluate(args) -> int:
    config = _config_from_args(args)
    table = _load_table(args.table)
    try:
        report = bayes.run_evaluation(table, config)
    except ValueError as exc:
        raise CliError(f"{args.table}: {exc}") from None
    _write(args.out, model_io.report_to_json(report))
    print(f"accuracy={report.accuracy:.4f} train_rows={report.train_rows} "
          f"test_rows={report.test_rows}")
    return 0


def identify_session(loaded: model_io.LoadedModel, session: SessionLog):
    """Label one session with a trained model; returns (label, distribution)."""
    if loaded.layout is None:
        raise CliError("model file carries no stimuli layout; cannot extract features")
    table = build_case_table(session, loaded.layout, loaded.config.tick_s)
    if loaded.config.drop_empty_cases:
        table = table.without_empty_rows()
    if not table.rows:
        raise CliError("session produced no usable cases")
    codes = bayes.encode_cases(loaded.net, table)
    distribution = bayes.aggregate_posterior(loaded.net, codes)
    label = loaded.net.class_labels[int(distribution.argmax())]
    return label, distribution


def cmd_identify(args) -> int:
    try:
        loaded = model_io.model_from_json(_read(args.model))
    except (ValueError, KeyError) as exc:
        raise CliError(f"{args.model}: {exc}") from None
    session = _load_log(args.session, args.format)
    label, distribution = identify_session(loaded, session)
    print(f"{label} {distribution.max():.6f}")
    return 0


def cmd_validate(args) -> int:
    text = _read(args.input)
    resolved = _sniff_format(args.input, text, args.format)
    try:
        session = parse_event_log(text, resolved)
    except LogParseError as exc:
        print(f"{args.input}: {exc}", file=sys.stderr)
        return 1
    violations = validate_session(session)
    for v in violations:
        where = "header" if v.index is None else f"event {v.index}"
        print(f"{args.input}: {where}: {v.rule}"
              + (f" ({v.detail})" if v.detail else ""), file=sys.stderr)
    if violations:
        return 1
    print(f"OK: {len(session.events)} events")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cogsig",
        description="Identify users from mouse/keyboard interaction patterns.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic session log")
    p.add_argument("--profile", default="A",
                   help="builtin profile A or B, or a profile JSON path")
    p.add_argument("--script", default=None, help="task script JSON path")
    p.add_argument("--repeat", type=int, default=1, help="script repetitions")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--user-id", default="user1")
    p.add_argument("--format", choices=[FORMAT_JSONL, FORMAT_MACROCSV],
                   default=FORMAT_JSONL)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("ingest", help="normalize a log to canonical JSONL")
    p.add_argument("input")
    p.add_argument("--format", choices=["auto", FORMAT_JSONL, FORMAT_MACROCSV],
                   default="auto")
    p.add_argument("--user-id", default=None)
    p.add_argument("--session-id", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("extract", help="build the case table from session logs")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--format", choices=["auto", FORMAT_JSONL, FORMAT_MACROCSV],
                   default="auto")
    p.add_argument("--layout", default=None, help="stimuli layout JSON path")
    p.add_argument("--out", default=None)
    _add_config_args(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", help="train a classifier from a case table")
    p.add_argument("table")
    p.add_argument("--layout", default=None,
                   help="layout to embed for later identification")
    p.add_argument("--out", default=None)
    _add_config_args(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="split, train and score a case table")
    p.add_argument("table")
    p.add_argument("--out", default=None)
    _add_config_args(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("identify", help="label a session with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--session", required=True)
    p.add_argument("--format", choices=["auto", FORMAT_JSONL, FORMAT_MACROCSV],
                   default="auto")
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("validate", help="check a log against the event invariants")
    p.add_argument("input")
    p.add_argument("--format", choices=["auto", FORMAT_JSONL, FORMAT_MACROCSV],
                   default="auto")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("COGSIG_LOG", "WARNING"),
                        format="%(name)s %(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "log_base"):
        _normalize_log_base(args)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"cogsig: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
