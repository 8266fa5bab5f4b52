"""Command-line front end.

Subcommands:
  channel   -- print a channel matrix for a chosen measurement
  info      -- mutual information, accessible information, capacity, C1
  sweep     -- offset-angle sweep with optional Monte Carlo photon counting

Exit codes: 0 ok, 2 invalid arguments, 3 non-convergence, 4 output I/O error.
"""

import argparse
import json
import sys

import numpy as np

from .ensemble import PI, make_signal_set
from .experiment import sweep_offset
from .info import (
    ConvergenceError,
    OptimizerOptions,
    accessible_information,
    blahut_arimoto,
    c1_alternating,
    mutual_information,
)
from .interferometer import ImperfectionParams
from .pom import (
    ChannelMatrix,
    channel_matrix,
    davies_pom,
    min_error_pom,
    projective_pom,
)


def _load_config(path):
    if path is None:
        return {}
    if path.endswith(".toml"):
        try:
            import tomllib
        except ImportError:  # Python 3.10
            import tomli as tomllib

        with open(path, "rb") as f:
            return tomllib.load(f)
    with open(path) as f:
        return json.load(f)


def _merge(args, cfg, name, fallback):
    """Flag wins over config file; config wins over the built-in default."""
    v = getattr(args, name, None)
    if v is not None:
        return v
    return cfg.get(name, fallback)


def _emit(text, out_path):
    if out_path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    try:
        with open(out_path, "w") as f:
            f.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {out_path}: {exc}") from exc


def _format_matrix(probs, fmt):
    if fmt == "json":
        return json.dumps({"channel": probs.tolist()}, indent=2)
    if fmt == "csv":
        return "\n".join(",".join(f"{x:.6f}" for x in row) for row in probs)
    return "\n".join("  ".join(f"{x:7.4f}" for x in row) for row in probs)


def _read_channel_csv(path) -> ChannelMatrix:
    rows = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            parts = [p for p in line.replace(",", " ").split() if p]
            try:
                rows.append([float(p) for p in parts])
            except ValueError:
                if not rows:  # header line
                    continue
                raise
    return ChannelMatrix(np.asarray(rows))


def _build_channel(args, cfg):
    M = _merge(args, cfg, "M", None)
    if M is None:
        raise ValueError("--M is required")
    theta0 = _merge(args, cfg, "theta0", 0.0)
    e = make_signal_set(M, theta0)
    if getattr(args, "minerr", False):
        pom = min_error_pom(M)
    elif getattr(args, "phi", None) is not None:
        pom = projective_pom(args.phi)
    else:
        m = _merge(args, cfg, "m", None)
        if m is None:
            raise ValueError("one of --m, --minerr, --phi is required")
        pom = davies_pom(M, m)
    return e, channel_matrix(e, pom), pom


def _cmd_channel(args, cfg):
    _, ch, _ = _build_channel(args, cfg)
    _emit(_format_matrix(ch.probs, args.format), args.out)
    return 0


def _optimizer_options(args, cfg):
    return OptimizerOptions(
        tol=_merge(args, cfg, "tol", 1e-8),
        restarts=int(_merge(args, cfg, "restarts", 32)),
        seed=int(_merge(args, cfg, "seed", 0)),
    )


def _cmd_info(args, cfg):
    if args.subcommand == "mi":
        e, ch, _ = _build_channel(args, cfg)
        value = mutual_information(ch, e.prior_vector)
        payload = {"mutual_information_bits": value}
    elif args.subcommand == "access":
        M = _merge(args, cfg, "M", None)
        if M is None:
            raise ValueError("--M is required")
        e = make_signal_set(M, _merge(args, cfg, "theta0", 0.0))
        res = accessible_information(
            e, int(_merge(args, cfg, "outputs", 3)), _optimizer_options(args, cfg)
        )
        if not res.converged:
            print("error: optimizer did not converge", file=sys.stderr)
            return 3
        value = res.mutual_info
        payload = {
            "accessible_information_bits": value,
            "pom": res.pom.to_json(),
            "iterations": res.iterations,
        }
    elif args.subcommand == "capacity":
        if getattr(args, "channel", None) is not None:
            ch = _read_channel_csv(args.channel)
        else:
            _, ch, _ = _build_channel(args, cfg)
        priors, value = blahut_arimoto(ch, tol=_merge(args, cfg, "tol", 1e-9))
        payload = {"capacity_bits": value, "priors": priors.tolist()}
    elif args.subcommand == "c1":
        M = _merge(args, cfg, "M", None)
        if M is None:
            raise ValueError("--M is required")
        e = make_signal_set(M, _merge(args, cfg, "theta0", 0.0))
        res = c1_alternating(
            e, int(_merge(args, cfg, "outputs", 3)), _optimizer_options(args, cfg)
        )
        if not res.converged:
            print("error: alternating maximization did not converge", file=sys.stderr)
            return 3
        value = res.value
        payload = {
            "c1_lower_bound_bits": value,
            "priors": res.priors.tolist(),
            "pom": res.pom.to_json(),
        }
    else:  # pragma: no cover - argparse enforces choices
        raise ValueError(f"unknown info subcommand {args.subcommand}")

    if args.format == "json":
        _emit(json.dumps(payload, indent=2), args.out)
    else:
        _emit(f"{value:.9f}", args.out)
    return 0


def _imperfections(args, cfg):
    if getattr(args, "ideal_only", False):
        return None
    if getattr(args, "nominal", False):
        return ImperfectionParams.nominal()
    keys = ("visibility", "extinction", "dark_rate", "background_rate", "flux",
            "coupling")
    nominal = ImperfectionParams.nominal()
    return ImperfectionParams(
        **{k: _merge(args, cfg, k, getattr(nominal, k)) for k in keys}
    )


_PLOT_SCRIPT = """\
set datafile separator ','
set xlabel 'offset angle (rad)'
set ylabel 'mutual information (bits)'
plot '{csv}' using 1:2:3 with yerrorbars title 'simulated', \\
     '{csv}' using 1:4 with lines title 'ideal', \\
     '{csv}' using 1:5 with lines dashtype 2 title 'Neumann'
"""


def _cmd_sweep(args, cfg):
    M = _merge(args, cfg, "M", None)
    m = _merge(args, cfg, "m", None)
    if M is None or m is None:
        raise ValueError("--M and --m are required")
    step = _merge(args, cfg, "step", PI / 90)
    start = _merge(args, cfg, "start", -PI / 2)
    stop = _merge(args, cfg, "stop", PI / 2)
    result = sweep_offset(
        M,
        m,
        theta0_range=(start, stop),
        step=step,
        imp=_imperfections(args, cfg),
        window=_merge(args, cfg, "window", 1.0),
        repeats=int(_merge(args, cfg, "repeats", 5)),
        seed=int(_merge(args, cfg, "seed", 0)),
    )
    if args.format == "json":
        payload = {
            "theta0": result.theta0_grid.tolist(),
            "mi_mean": result.mi_mean.tolist(),
            "mi_std": result.mi_std.tolist(),
            "ideal_mi": result.ideal_mi.tolist(),
            "von_neumann_mi": result.von_neumann_mi.tolist(),
        }
        _emit(json.dumps(payload, indent=2), args.out)
    else:
        lines = ["theta0,mi_mean,mi_std,ideal_mi,von_neumann_mi"]
        lines += [
            ",".join(f"{x:.9g}" for x in row) for row in result.to_rows()
        ]
        _emit("\n".join(lines) + "\n", args.out)
    if args.plot_script is not None:
        if args.out is None:
            raise ValueError("--plot-script needs --out to name the data file")
        _emit(_PLOT_SCRIPT.format(csv=args.out), args.plot_script)
    return 0


def _add_format_flags(p):
    p.add_argument("--json", dest="format", action="store_const", const="json",
                   default="table")
    p.add_argument("--csv", dest="format", action="store_const", const="csv")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--config", default=None, help="JSON or TOML config file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symqubit",
        description="Symmetric qubit signal sets and optimum detection",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ch = sub.add_parser("channel", help="print a channel matrix")
    ch.add_argument("--M", type=int, default=None)
    ch.add_argument("--m", type=int, default=None)
    ch.add_argument("--minerr", action="store_true",
                    help="use the minimum-error measurement")
    ch.add_argument("--phi", type=float, default=None,
                    help="use a projective measurement at this angle")
    ch.add_argument("--theta0", type=float, default=None)
    _add_format_flags(ch)

    info = sub.add_parser("info", help="information quantities")
    info.add_argument("subcommand", choices=["mi", "access", "capacity", "c1"])
    info.add_argument("--M", type=int, default=None)
    info.add_argument("--m", type=int, default=None)
    info.add_argument("--minerr", action="store_true")
    info.add_argument("--phi", type=float, default=None)
    info.add_argument("--theta0", type=float, default=None)
    info.add_argument("--outputs", type=int, default=None)
    info.add_argument("--channel", default=None,
                      help="CSV file with a channel matrix (for capacity)")
    info.add_argument("--seed", type=int, default=None)
    info.add_argument("--restarts", type=int, default=None)
    info.add_argument("--tol", type=float, default=None)
    _add_format_flags(info)

    sw = sub.add_parser("sweep", help="offset-angle sweep")
    sw.add_argument("--M", type=int, default=None)
    sw.add_argument("--m", type=int, default=None)
    sw.add_argument("--start", type=float, default=None)
    sw.add_argument("--stop", type=float, default=None)
    sw.add_argument("--step", type=float, default=None)
    sw.add_argument("--ideal-only", action="store_true",
                    help="skip the Monte Carlo stage")
    sw.add_argument("--nominal", action="store_true",
                    help="use the nominal imperfection parameters")
    sw.add_argument("--visibility", type=float, default=None)
    sw.add_argument("--extinction", type=float, default=None)
    sw.add_argument("--dark-rate", dest="dark_rate", type=float, default=None)
    sw.add_argument("--background-rate", dest="background_rate", type=float,
                    default=None)
    sw.add_argument("--flux", type=float, default=None)
    sw.add_argument("--coupling", type=float, default=None)
    sw.add_argument("--window", type=float, default=None)
    sw.add_argument("--repeats", type=int, default=None)
    sw.add_argument("--seed", type=int, default=None)
    sw.add_argument("--plot-script", default=None,
                    help="write a gnuplot script to this path")
    _add_format_flags(sw)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config)
        if args.command == "channel":
            return _cmd_channel(args, cfg)
        if args.command == "info":
            return _cmd_info(args, cfg)
        return _cmd_sweep(args, cfg)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
