"""Command-line front end with reproducible, scriptable I/O.

Subcommands: gen, detect, summarize, eval-cp, eval-knn, eval-noise.  Data
(JSON/CSV) goes only to the designated output file or stdout; the resolved
configuration is echoed to stderr as reusable ``key = value`` lines.

Exit codes: 0 success, 1 usage or configuration errors, 2 data or parse
errors, 3 internal errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .dataio import (
    Dataset,
    dump_json,
    format_float,
    parse_labeled_rows,
    parse_manifest,
    parse_matrix_csv,
    write_matrix_csv,
    znormalize,
)
from .errors import (
    BicsegError,
    EmptyDataset,
    InvalidInput,
    ParseError,
    SchemaError,
)
from .evaluate import (
    change_point_prf,
    knn1_accuracy,
    report_to_mapping,
    run_noise_experiment,
    summarize_dataset,
)
from .pipeline import METHODS, result_to_mapping, summarize_series
from .synth import Regime, RegimeSpec, generate_piecewise_gaussian
from .tokenizer import TokenizerConfig, detect

_CONFIG_DEFAULTS = {
    "min_window": 5,
    "max_window": 500,
    "window_step": 5,
    "stride": 10,
    "alpha": 2.0,
    "min_separation": 20,
    "epsilon": 1e-6,
    "penalty": 1.0,
    "method": "mean",
    "seed": 0,
    "sigmas": "0,0.5",
    "n_chunks": 10,
    "k": 5,
    "threads": 1,
    "format": None,
    "input": None,
    "out": None,
}
_INT_KEYS = {"min_window", "max_window", "window_step", "stride",
             "min_separation", "seed", "n_chunks", "k", "threads"}
_FLOAT_KEYS = {"alpha", "epsilon", "penalty"}


class UsageError(Exception):
    """Raised for flag/config problems; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _parse_config_file(path: str) -> dict:
    """Read ``key = value`` lines; '#' starts a comment; unknown keys rejected."""
    values: dict = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from exc
    for line_no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq:
            raise UsageError(f"{path}:{line_no}: expected 'key = value'")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_DEFAULTS:
            raise UsageError(f"{path}:{line_no}: unknown config key {key!r}")
        values[key] = _coerce_config_value(key, value, f"{path}:{line_no}")
    return values


def _coerce_config_value(key: str, value, where: str):
    if value is None:
        return None
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
    except (TypeError, ValueError):
        raise UsageError(f"{where}: invalid value for {key!r}: {value!r}") from None
    return str(value)


def _resolve_config(args) -> dict:
    """defaults <- config file <- explicit flags."""
    resolved = dict(_CONFIG_DEFAULTS)
    path = getattr(args, "config", None)
    if path:
        resolved.update(_parse_config_file(path))
    for key in _CONFIG_DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            resolved[key] = flag
    return resolved


def _print_config(resolved: dict, extra: dict | None = None) -> None:
    items = dict(resolved)
    if extra:
        items.update(extra)
    for key, value in items.items():
        if value is None:
            continue
        print(f"{key} = {value}", file=sys.stderr)


def _tokenizer_config(resolved: dict) -> TokenizerConfig:
    try:
        return TokenizerConfig(
            min_window=resolved["min_window"],
            max_window=resolved["max_window"],
            window_step=resolved["window_step"],
            stride=resolved["stride"],
            alpha=resolved["alpha"],
            min_separation=resolved["min_separation"],
            epsilon=resolved["epsilon"],
            penalty=resolved["penalty"],
        )
    except InvalidInput as exc:
        raise UsageError(str(exc)) from exc


def _sniff_delimiter(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        for raw in handle:
            if raw.strip():
                return "tab" if "\t" in raw else "comma"
    return "comma"


def _load_series(path: str, fmt: str, delimiter: str) -> list:
    if fmt == "csv":
        return [parse_matrix_csv(path)]
    if fmt == "rows":
        if delimiter == "auto":
            delimiter = _sniff_delimiter(path)
        return list(parse_labeled_rows(path, delimiter).series)
    raise UsageError(f"format must be 'rows' or 'csv', got {fmt!r}")


def _load_dataset(path: str, fmt: str, delimiter: str) -> Dataset:
    if fmt == "manifest":
        return parse_manifest(path)
    if fmt == "rows":
        if delimiter == "auto":
            delimiter = _sniff_delimiter(path)
        return parse_labeled_rows(path, delimiter)
    raise UsageError(f"format must be 'rows' or 'manifest', got {fmt!r}")


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def _parse_regime_spec(path: str) -> RegimeSpec:
    """Regime spec file: ``d = <int>`` plus repeated ``regime`` lines.

    Each regime line reads ``regime = <length> | <m1,m2,...> | <s1,s2,...>``;
    scalar means/stdevs broadcast across channels.
    """
    dim = 1
    regimes: list[Regime] = []
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise ParseError(f"cannot read spec file: {exc}") from exc
    for line_no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq:
            raise ParseError(f"{path}:{line_no}: expected 'key = value'", line=line_no)
        key = key.strip()
        value = value.strip()
        if key == "d":
            try:
                dim = int(value)
            except ValueError:
                raise ParseError(f"{path}:{line_no}: d must be an integer", line=line_no) from None
        elif key == "regime":
            parts = [p.strip() for p in value.split("|")]
            if len(parts) != 3:
                raise ParseError(
                    f"{path}:{line_no}: regime needs 'length | means | stdevs'",
                    line=line_no,
                )
            try:
                length = int(parts[0])
                mean = tuple(float(v) for v in parts[1].split(","))
                stdev = tuple(float(v) for v in parts[2].split(","))
            except ValueError:
                raise ParseError(
                    f"{path}:{line_no}: non-numeric regime field", line=line_no
                ) from None
            regimes.append(Regime(length=length, mean=mean, stdev=stdev))
        else:
            raise ParseError(f"{path}:{line_no}: unknown spec key {key!r}", line=line_no)
    if not regimes:
        raise EmptyDataset(f"{path}: no regimes defined")
    return RegimeSpec(regimes=tuple(regimes), dim=dim)


def _read_splits_json(path: str) -> list[int]:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    if isinstance(doc, dict) and "splits" in doc:
        return [int(v) for v in doc["splits"]]
    if isinstance(doc, dict) and "series" in doc and len(doc["series"]) == 1:
        return [int(v) for v in doc["series"][0]["splits"]]
    raise SchemaError(f"{path}: document has no 'splits' field")


def _cmd_gen(args) -> int:
    resolved = _resolve_config(args)
    spec = _parse_regime_spec(args.spec)
    truth_path = args.truth or args.out + ".truth.json"
    _print_config(resolved, {"spec": args.spec, "out": args.out, "truth": truth_path})
    series, splits = generate_piecewise_gaussian(spec, seed=resolved["seed"])
    write_matrix_csv(series, args.out)
    truth = {
        "length": series.length,
        "splits": splits,
        "seed": resolved["seed"],
        "d": spec.dim,
    }
    _write_text(truth_path, dump_json(truth) + "\n")
    return 0


def _cmd_detect(args) -> int:
    resolved = _resolve_config(args)
    fmt = resolved["format"] or "csv"
    _print_config(resolved, {"format": fmt})
    cfg = _tokenizer_config(resolved)
    series_list = _load_series(args.input, fmt, args.delimiter)
    entries = []
    score_rows = []
    for series in series_list:
        detection = detect(znormalize(series), cfg)
        entries.append(
            {
                "id": series.id,
                "length": series.length,
                "splits": list(detection.segmentation.splits),
            }
        )
        if args.dump_scores:
            score_rows.extend(
                (cand.position, cand.score, cand.scale) for cand in detection.scored
            )
    payload = entries[0] if fmt == "csv" else {"series": entries}
    _write_text(args.out, dump_json(payload) + "\n")
    if args.dump_scores:
        lines = ["position,score,scale"]
        lines.extend(
            f"{pos},{format_float(score)},{scale}" for pos, score, scale in score_rows
        )
        _write_text(args.dump_scores, "\n".join(lines) + "\n")
    return 0


def _cmd_summarize(args) -> int:
    resolved = _resolve_config(args)
    fmt = resolved["format"] or "csv"
    _print_config(resolved, {"format": fmt})
    cfg = _tokenizer_config(resolved)
    method = resolved["method"]
    if method not in METHODS:
        raise UsageError(f"method must be one of {METHODS}, got {method!r}")
    series_list = _load_series(args.input, fmt, args.delimiter)
    mappings = []
    for series in series_list:
        result = summarize_series(
            series,
            cfg,
            method=method,
            seed=resolved["seed"],
            n_components=resolved["k"],
            n_chunks=resolved["n_chunks"],
        )
        mappings.append(result_to_mapping(result))
    payload = mappings[0] if fmt == "csv" else {"results": mappings}
    _write_text(args.out, dump_json(payload) + "\n")
    return 0


def _cmd_eval_cp(args) -> int:
    resolved = _resolve_config(args)
    _print_config(resolved, {"pred": args.pred, "truth": args.truth, "tol": args.tol})
    predicted = _read_splits_json(args.pred)
    truth = _read_splits_json(args.truth)
    precision, recall, f1 = change_point_prf(predicted, truth, args.tol)
    payload = {"precision": precision, "recall": recall, "f1": f1, "tol": args.tol}
    print(dump_json(payload))
    return 0


def _cmd_eval_knn(args) -> int:
    resolved = _resolve_config(args)
    fmt = resolved["format"] or "rows"
    _print_config(resolved, {"format": fmt, "train": args.train, "test": args.test})
    cfg = _tokenizer_config(resolved)
    method = resolved["method"]
    if method not in METHODS:
        raise UsageError(f"method must be one of {METHODS}, got {method!r}")
    train = _load_dataset(args.train, fmt, args.delimiter)
    test = _load_dataset(args.test, fmt, args.delimiter)
    train_tokens = summarize_dataset(
        train, cfg, method, resolved["seed"],
        n_components=resolved["k"], n_chunks=resolved["n_chunks"],
    )
    test_tokens = summarize_dataset(
        test, cfg, method, resolved["seed"],
        n_components=resolved["k"], n_chunks=resolved["n_chunks"],
    )
    accuracy = knn1_accuracy(train_tokens, test_tokens, threads=resolved["threads"])
    print(dump_json({"method": method, "accuracy": accuracy}))
    return 0


def _cmd_eval_noise(args) -> int:
    resolved = _resolve_config(args)
    fmt = resolved["format"] or "rows"
    methods = [m.strip() for m in str(resolved_methods(args, resolved)).split(",") if m.strip()]
    _print_config(resolved, {"format": fmt, "train": args.train, "test": args.test,
                             "methods": ",".join(methods)})
    cfg = _tokenizer_config(resolved)
    for method in methods:
        if method not in METHODS:
            raise UsageError(f"method must be one of {METHODS}, got {method!r}")
    try:
        sigmas = [float(s) for s in str(resolved["sigmas"]).split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"invalid sigmas list: {resolved['sigmas']!r}") from None
    train = _load_dataset(args.train, fmt, args.delimiter)
    test = _load_dataset(args.test, fmt, args.delimiter)
    report = run_noise_experiment(
        train, test, sigmas, methods, cfg, seed=resolved["seed"],
        n_components=resolved["k"], n_chunks=resolved["n_chunks"],
        threads=resolved["threads"],
    )
    print(dump_json(report_to_mapping(report, cfg)))
    return 0


def resolved_methods(args, resolved) -> str:
    return args.methods if args.methods is not None else resolved["method"]


def build_parser() -> _Parser:
    parser = _Parser(prog="bicseg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_config=True):
        if with_config:
            p.add_argument("--config", help="key = value config file")
        p.add_argument("--seed", type=int, default=None)
        for key in ("min_window", "max_window", "window_step", "stride",
                    "min_separation"):
            p.add_argument(f"--{key.replace('_', '-')}", dest=key, type=int, default=None)
        for key in ("alpha", "epsilon", "penalty"):
            p.add_argument(f"--{key}", type=float, default=None)

    gen = sub.add_parser("gen", help="generate a synthetic series with ground truth")
    gen.add_argument("--spec", required=True, help="regime spec file")
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--out", required=True, help="series CSV output path")
    gen.add_argument("--truth", default=None, help="truth JSON path (default <out>.truth.json)")
    gen.add_argument("--config", help="key = value config file")
    gen.set_defaults(func=_cmd_gen)

    det = sub.add_parser("detect", help="detect splits and emit them as JSON")
    det.add_argument("--input", required=True)
    det.add_argument("--format", choices=["rows", "csv"], default=None)
    det.add_argument("--delimiter", choices=["tab", "comma", "auto"], default="auto")
    det.add_argument("--out", required=True)
    det.add_argument("--dump-scores", default=None,
                     help="write a position,score,scale CSV of all scores")
    add_common(det)
    det.set_defaults(func=_cmd_detect)

    summ = sub.add_parser("summarize", help="summarize series into token JSON")
    summ.add_argument("--input", required=True)
    summ.add_argument("--format", choices=["rows", "csv"], default=None)
    summ.add_argument("--delimiter", choices=["tab", "comma", "auto"], default="auto")
    summ.add_argument("--method", choices=list(METHODS), default=None)
    summ.add_argument("--k", type=int, default=None, help="mixture components per segment")
    summ.add_argument("--chunks", dest="n_chunks", type=int, default=None)
    summ.add_argument("--out", required=True)
    add_common(summ)
    summ.set_defaults(func=_cmd_summarize)

    cp = sub.add_parser("eval-cp", help="precision/recall/F1 of predicted splits")
    cp.add_argument("--pred", required=True)
    cp.add_argument("--truth", required=True)
    cp.add_argument("--tol", type=int, required=True)
    cp.add_argument("--config", help="key = value config file")
    cp.set_defaults(func=_cmd_eval_cp)

    knn = sub.add_parser("eval-knn", help="1-NN accuracy of summarized datasets")
    knn.add_argument("--train", required=True)
    knn.add_argument("--test", required=True)
    knn.add_argument("--format", choices=["rows", "manifest"], default=None)
    knn.add_argument("--delimiter", choices=["tab", "comma", "auto"], default="auto")
    knn.add_argument("--method", choices=list(METHODS), default=None)
    knn.add_argument("--k", type=int, default=None)
    knn.add_argument("--chunks", dest="n_chunks", type=int, default=None)
    knn.add_argument("--threads", type=int, default=None)
    add_common(knn)
    knn.set_defaults(func=_cmd_eval_knn)

    noise = sub.add_parser("eval-noise", help="noise-robustness report")
    noise.add_argument("--train", required=True)
    noise.add_argument("--test", required=True)
    noise.add_argument("--format", choices=["rows", "manifest"], default=None)
    noise.add_argument("--delimiter", choices=["tab", "comma", "auto"], default="auto")
    noise.add_argument("--sigmas", default=None, help="comma-separated noise levels")
    noise.add_argument("--methods", default=None, help="comma-separated methods")
    noise.add_argument("--k", type=int, default=None)
    noise.add_argument("--chunks", dest="n_chunks", type=int, default=None)
    noise.add_argument("--threads", type=int, default=None)
    add_common(noise)
    noise.set_defaults(func=_cmd_eval_noise)

    return parser


def run(argv=None) -> int:
    """Parse argv and execute one subcommand, mapping errors to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ParseError, EmptyDataset, SchemaError, InvalidInput, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BicsegError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run())
