"""Command line interface for good."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from rich.console import Console
from rich.table import Table

from libgood import (
    DEFAULT_TH,
    DataError,
    FitRecord,
    FitResult,
    GoodError,
    GoodParams,
    LinkFunction,
    ModelData,
    OptimizerConfig,
    cdf,
    classify_dispersion,
    dispersion_grid,
    dispersion_index,
    expected_frequencies,
    fit,
    get_dataset,
    list_datasets,
    load_covariates,
    load_csv,
    mean,
    mode,
    pmf,
    predict_with_se,
    quantile,
    raw_moment,
    sample,
    summary_report,
    variance,
)

logger = logging.getLogger("good_cli")

LOG_LEVELS = ["debug", "info", "warning", "error"]


class UsageError(GoodError):
    """Malformed command line or configuration file."""

    reason = "usage"


class FitSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    link: LinkFunction = LinkFunction.LOG
    delimiter: str = Field(default=",", min_length=1, max_length=1)


class SamplingSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    th: float = Field(default=DEFAULT_TH, gt=0.0, lt=0.5)


class OutputSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    digits: int = Field(default=6, ge=1, le=17)  # Significant digits in text mode


class LoggingSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    level: str = Field(default="warning", pattern="^(debug|info|warning|error)$")
    file: str | None = None


class CliConfig(BaseModel):
    """Contents of a --config YAML file. Command line flags take precedence."""

    model_config = ConfigDict(extra="forbid")

    optimizer: OptimizerConfig = Field(default_factory=OptimizerConfig)
    fit: FitSettings = Field(default_factory=FitSettings)
    sampling: SamplingSettings = Field(default_factory=SamplingSettings)
    output: OutputSettings = Field(default_factory=OutputSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)


def setup_logging(level: str = "warning", log_file: str | None = None) -> None:
    """Configure logging."""
    log_level = getattr(logging, level.upper(), logging.WARNING)

    handlers: list[logging.Handler] = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=log_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers,
    )


def load_config(path: str | Path) -> CliConfig:
    """Load configuration from YAML file."""
    try:
        with open(path) as f:
            data = yaml.safe_load(f) or {}
    except FileNotFoundError:
        raise UsageError(f"Config file not found: {path}") from None
    except OSError as e:
        raise UsageError(f"Cannot read config file {path}: {e.strerror}") from None
    except yaml.YAMLError as e:
        raise UsageError(f"Invalid YAML in {path}: {e}") from None
    if not isinstance(data, dict):
        raise UsageError(f"Config file {path} must contain a mapping")
    return CliConfig.model_validate(data)


# Argument parsing


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting with status 2."""

    def error(self, message: str):
        raise UsageError(message)


def _list_of(convert: Callable[[str], Any], what: str) -> Callable[[str], list]:
    def parse(text: str) -> list:
        try:
            return [convert(v) for v in text.split(",") if v.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid {what} list: {text!r}") from None

    return parse


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer: {text}")
    return value


def _add_global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    """Global flags, accepted both before and after the subcommand."""

    def default(value: Any) -> Any:
        return argparse.SUPPRESS if suppress else value

    parser.add_argument(
        "--json", action="store_true", default=default(False), help="Machine-readable output"
    )
    parser.add_argument("--seed", type=_seed, default=default(None), help="Random seed (u64)")
    parser.add_argument(
        "--config", "-c", type=Path, default=default(None), help="Path to YAML configuration file"
    )
    parser.add_argument(
        "--log-level", choices=LOG_LEVELS, default=default(None), help="Logging level"
    )
    parser.add_argument("--log-file", type=str, default=default(None), help="Log file path")


def _add_params(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--z", type=float, help="Parameter z in (0, 1)")
    group.add_argument("--log-z", type=float, help="log(z) < 0, for very small z")
    parser.add_argument("--s", type=float, required=required, help="Shape parameter s")


def _add_data_source(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--dataset", help="Embedded dataset name (see 'good datasets')")
    group.add_argument("--csv", type=Path, help="CSV file with a header row")
    parser.add_argument("--response", help="Response column (with --csv)")
    parser.add_argument(
        "--covariates", type=_list_of(str, "column"), default=[], help="Covariate columns a,b,c"
    )
    parser.add_argument("--delimiter", help="CSV delimiter (default ',')")
    parser.add_argument(
        "--link", choices=[link.value for link in LinkFunction], help="Link function (default log)"
    )
    parser.add_argument(
        "--start",
        type=_list_of(float, "number"),
        help="Starting values s,b0[,b1...] (use --start=-2,... for negative s)",
    )


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    _add_global_flags(common, suppress=True)

    parser = _Parser(
        prog="good",
        description="Good distribution toolkit - distribution queries and Good regression",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    _add_global_flags(parser, suppress=False)
    subparsers = parser.add_subparsers(dest="command", help="Command")

    # pmf
    p = subparsers.add_parser("pmf", parents=[common], help="Probability mass function")
    _add_params(p)
    p.add_argument("--x", type=_list_of(int, "integer"), required=True, help="Support points")

    # cdf
    p = subparsers.add_parser("cdf", parents=[common], help="Cumulative distribution function")
    _add_params(p)
    p.add_argument("--q", type=_list_of(float, "number"), required=True, help="Quantiles")
    p.add_argument("--upper", action="store_true", help="Upper tail P(X > q)")

    # quantile
    p = subparsers.add_parser("quantile", parents=[common], help="Quantile function")
    _add_params(p)
    p.add_argument("--p", type=_list_of(float, "number"), required=True, help="Probabilities")
    p.add_argument("--upper", action="store_true", help="Probabilities are upper tail")

    # sample
    p = subparsers.add_parser("sample", parents=[common], help="Draw random variates")
    _add_params(p)
    p.add_argument("--n", type=int, required=True, help="Number of draws")
    p.add_argument("--th", type=float, help="Tail mass left out of the table (default 1e-6)")

    # moments
    p = subparsers.add_parser(
        "moments", parents=[common], help="Mean, variance, dispersion index, raw moments"
    )
    _add_params(p, required=False)
    p.add_argument("--k", type=int, default=4, help="Highest raw moment (default 4)")
    p.add_argument("--input", help="Integer sample file ('-' for stdin) instead of --z/--s")

    # dispersion-grid
    p = subparsers.add_parser(
        "dispersion-grid", parents=[common], help="Tabulate the dispersion index over (z, s)"
    )
    p.add_argument("--z", type=_list_of(float, "number"), required=True, help="z values")
    p.add_argument("--s", type=_list_of(float, "number"), required=True, help="s values")

    # fit
    p = subparsers.add_parser("fit", parents=[common], help="Fit a Good regression")
    _add_data_source(p)
    p.add_argument(
        "--frequencies", action="store_true", help="Observed vs expected frequencies (p = 0)"
    )
    p.add_argument("--cells", type=int, help="Frequency cells, last one open (default max+2)")
    p.add_argument("--output", "-o", type=Path, help="Write the JSON fit record to a file")

    # predict
    p = subparsers.add_parser(
        "predict", parents=[common], help="Predicted means with delta-method standard errors"
    )
    _add_data_source(p, required=False)
    p.add_argument("--model", type=Path, help="JSON fit record written by 'good fit'")

    # datasets
    subparsers.add_parser(
        "datasets",
        parents=[common],
        help="List embedded datasets",
        epilog="Piglet litter data with covariates are unpublished and not embedded; "
        "fit such data from a CSV file with --csv/--response/--covariates.",
    )

    return parser


# Helpers


def _params(args: argparse.Namespace) -> GoodParams:
    if args.log_z is not None:
        return GoodParams(log_z=args.log_z, s=args.s)
    return GoodParams.from_z(args.z, args.s)


def _fmt(value: float, config: CliConfig) -> str:
    return f"{value:.{config.output.digits}g}"


def _emit_json(payload: Any) -> None:
    print(json.dumps(payload, indent=2))


def _link(args: argparse.Namespace, config: CliConfig) -> LinkFunction:
    return LinkFunction(args.link) if args.link else config.fit.link


def _delimiter(args: argparse.Namespace, config: CliConfig) -> str:
    return args.delimiter or config.fit.delimiter


def _load_data(args: argparse.Namespace, config: CliConfig) -> ModelData:
    if args.dataset:
        if args.covariates:
            raise UsageError("Embedded datasets have no covariates")
        return get_dataset(args.dataset).model_data()
    if not args.response:
        raise UsageError("--csv requires --response")
    return load_csv(args.csv, args.response, args.covariates, _delimiter(args, config))


def _start(args: argparse.Namespace) -> tuple[float, list[float]] | None:
    if not args.start:
        return None
    if len(args.start) < 2:
        raise UsageError("--start needs s and at least the intercept: s,b0[,b1...]")
    return args.start[0], args.start[1:]


def _frequency_rows(result: FitResult, data: ModelData, cells: int | None) -> list[dict]:
    if data.p:
        raise UsageError("--frequencies needs an intercept-only model")
    cells = cells or int(data.response.max()) + 2
    if cells < 2:
        raise UsageError(f"--cells must be at least 2, got {cells}")

    params = GoodParams(log_z=float(result.link.log_inverse(result.beta_hat[0])), s=result.s_hat)
    expected = expected_frequencies(data.n, params, cells)
    counts = np.bincount(data.response, minlength=cells)
    observed = np.append(counts[: cells - 1], counts[cells - 1 :].sum())

    labels = [str(x) for x in range(cells - 1)] + [f"{cells - 1}+"]
    return [
        {"x": label, "observed": int(o), "expected": float(e)}
        for label, o, e in zip(labels, observed, expected)
    ]


def _read_sample(source: str) -> np.ndarray:
    try:
        text = sys.stdin.read() if source == "-" else Path(source).read_text()
    except FileNotFoundError:
        raise DataError(f"Sample file not found: {source}") from None
    except OSError as e:
        raise DataError(f"Cannot read sample file {source}: {e.strerror}") from None
    try:
        values = np.array([int(v) for v in text.split()], dtype=np.int64)
    except ValueError as e:
        raise DataError(f"Sample must contain integers: {e}") from None
    if values.size < 2:
        raise DataError("Sample needs at least two values")
    return values


# Commands


def cmd_pmf(args: argparse.Namespace, config: CliConfig) -> int:
    values = np.atleast_1d(pmf(args.x, _params(args)))
    if args.json:
        _emit_json({"x": args.x, "pmf": values.tolist()})
    else:
        for x, v in zip(args.x, values):
            print(f"{x}\t{_fmt(v, config)}")
    return 0


def cmd_cdf(args: argparse.Namespace, config: CliConfig) -> int:
    values = np.atleast_1d(cdf(args.q, _params(args), lower_tail=not args.upper))
    if args.json:
        _emit_json({"q": args.q, "cdf": values.tolist(), "lower_tail": not args.upper})
    else:
        for q, v in zip(args.q, values):
            print(f"{q:g}\t{_fmt(v, config)}")
    return 0


def cmd_quantile(args: argparse.Namespace, config: CliConfig) -> int:
    values = np.atleast_1d(quantile(args.p, _params(args), lower_tail=not args.upper))
    if args.json:
        _emit_json({"p": args.p, "quantile": values.tolist(), "lower_tail": not args.upper})
    else:
        for p, v in zip(args.p, values):
            print(f"{p:g}\t{v}")
    return 0


def cmd_sample(args: argparse.Namespace, config: CliConfig) -> int:
    if args.seed is None:
        raise UsageError("sample requires --seed")
    th = args.th if args.th is not None else config.sampling.th
    draws = sample(args.n, _params(args), th=th, seed=args.seed)
    if args.json:
        _emit_json(draws.tolist())
    else:
        print("\n".join(str(v) for v in draws))
    return 0


def cmd_moments(args: argparse.Namespace, config: CliConfig) -> int:
    if args.input:
        values = _read_sample(args.input)
        mu = float(values.mean())
        var = float(values.var(ddof=1))
        rows: dict[str, Any] = {
            "n": int(values.size),
            "mean": mu,
            "variance": var,
            "dispersion_index": var / mu if mu > 0 else None,
        }
    else:
        if (args.z is None and args.log_z is None) or args.s is None:
            raise UsageError("moments needs --z/--log-z and --s, or --input")
        if args.k < 1:
            raise UsageError(f"--k must be positive, got {args.k}")
        params = _params(args)
        index = dispersion_index(params)
        rows = {
            "mean": mean(params),
            "variance": variance(params),
            "dispersion_index": index,
            "dispersion": classify_dispersion(index).value,
            "mode": mode(params),
        }
        for k in range(1, args.k + 1):
            rows[f"raw_moment_{k}"] = raw_moment(k, params)

    if args.json:
        _emit_json(rows)
        return 0

    table = Table(title="Moments")
    table.add_column("Quantity")
    table.add_column("Value", justify="right")
    for name, value in rows.items():
        shown = _fmt(value, config) if isinstance(value, float) else str(value)
        table.add_row(name, shown)
    Console().print(table)
    return 0


def cmd_dispersion_grid(args: argparse.Namespace, config: CliConfig) -> int:
    cells = dispersion_grid(args.z, args.s)
    if args.json:
        _emit_json(
            [{"z": c.z, "s": c.s, "index": c.index, "dispersion": c.kind.value} for c in cells]
        )
        return 0

    table = Table(title="Dispersion index")
    table.add_column("z", justify="right")
    table.add_column("s", justify="right")
    table.add_column("Index", justify="right")
    table.add_column("Dispersion")
    for c in cells:
        table.add_row(f"{c.z:g}", f"{c.s:g}", _fmt(c.index, config), c.kind.value)
    Console().print(table)
    return 0


def cmd_fit(args: argparse.Namespace, config: CliConfig) -> int:
    data = _load_data(args, config)
    result = fit(data, _link(args, config), _start(args), config.optimizer)
    report = summary_report(result, data, config.optimizer)
    frequencies = _frequency_rows(result, data, args.cells) if args.frequencies else None

    record = FitRecord.from_fit(result, report.lrts)
    if frequencies is not None:
        record.frequencies = frequencies
    if args.output:
        args.output.write_text(record.to_json())
        logger.info("Wrote fit record to %s", args.output)

    if args.json:
        print(record.to_json())
        return 0

    print(report.text)
    if frequencies is not None:
        table = Table(title="Observed and expected frequencies")
        table.add_column("x", justify="right")
        table.add_column("Observed", justify="right")
        table.add_column("Expected", justify="right")
        for row in frequencies:
            table.add_row(row["x"], str(row["observed"]), f"{row['expected']:.2f}")
        Console().print(table)
    return 0


def _read_record(path: Path) -> FitRecord:
    try:
        return FitRecord.from_json(path.read_text())
    except FileNotFoundError:
        raise DataError(f"Fit record not found: {path}") from None
    except OSError as e:
        raise DataError(f"Cannot read fit record {path}: {e.strerror}") from None
    except ValidationError as e:
        raise DataError(
            f"Invalid fit record {path}: {e.error_count()} validation error(s)"
        ) from None


def cmd_predict(args: argparse.Namespace, config: CliConfig) -> int:
    if args.model:
        result = _read_record(args.model).to_fit()
        if args.dataset:
            new_covariates = get_dataset(args.dataset).model_data().covariates
        elif args.csv:
            columns = args.covariates or list(result.covariate_names)
            new_covariates = load_covariates(args.csv, columns, _delimiter(args, config))
        else:
            new_covariates = None
    else:
        if not (args.dataset or args.csv):
            raise UsageError("predict needs --model or a data source (--dataset or --csv)")
        data = _load_data(args, config)
        result = fit(data, _link(args, config), _start(args), config.optimizer)
        new_covariates = data.covariates

    prediction = predict_with_se(result, new_covariates)
    if args.json:
        _emit_json({"fit": prediction.fit.tolist(), "se_fit": prediction.se_fit.tolist()})
    else:
        print("fit\tse.fit")
        for mu, se in zip(prediction.fit, prediction.se_fit):
            print(f"{_fmt(mu, config)}\t{_fmt(se, config)}")
    return 0


def cmd_datasets(args: argparse.Namespace, config: CliConfig) -> int:
    entries = list_datasets()
    if args.json:
        _emit_json(
            [
                {
                    "name": e.name,
                    "n": e.n,
                    "frequencies": {str(k): v for k, v in e.frequencies.items()},
                    "description": e.description,
                    "source": e.source,
                }
                for e in entries
            ]
        )
        return 0

    table = Table(title="Embedded datasets")
    table.add_column("Name")
    table.add_column("n", justify="right")
    table.add_column("Mean", justify="right")
    table.add_column("Description")
    for e in entries:
        table.add_row(e.name, str(e.n), _fmt(float(e.observations.mean()), config), e.description)
    Console().print(table)
    return 0


COMMANDS: dict[str, Callable[[argparse.Namespace, CliConfig], int]] = {
    "pmf": cmd_pmf,
    "cdf": cmd_cdf,
    "quantile": cmd_quantile,
    "sample": cmd_sample,
    "moments": cmd_moments,
    "dispersion-grid": cmd_dispersion_grid,
    "fit": cmd_fit,
    "predict": cmd_predict,
    "datasets": cmd_datasets,
}


def _report_error(reason: str, message: str) -> None:
    print(f"error: {reason}: {' '.join(message.split())}", file=sys.stderr)


def _validation_message(error: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(part) for part in e['loc']) or 'value'}: {e['msg']}"
        for e in error.errors()
    )


def run(argv: list[str] | None = None) -> int:
    """Parse argv, dispatch the subcommand and return the exit code.

    Exit codes: 0 success, 1 usage or domain error, 2 data or file I/O
    error, 3 numerical error. Errors print a single line to stderr.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = load_config(args.config) if args.config else CliConfig()
        setup_logging(
            level=args.log_level or config.logging.level,
            log_file=args.log_file or config.logging.file,
        )
        if not args.command:
            parser.print_help()
            return 1
        return COMMANDS[args.command](args, config)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0
    except GoodError as e:
        _report_error(e.reason, str(e))
        return e.exit_code
    except ValidationError as e:
        _report_error("validation", _validation_message(e))
        return 1
    except OSError as e:
        _report_error("io", f"{e.strerror or e}: {e.filename}" if e.filename else str(e))
        return 2
    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        return 130


def main() -> int:
    """Main entry point."""
    return run()
