"""Command-line interface.

Subcommands:

* ``mqskew run CONFIG``   -- sweep a (tau, beta) grid, emit CSV or JSON
* ``mqskew verify``       -- built-in invariant and oracle suite
* ``mqskew depth``        -- producibility-bound scan for one value

Exit codes: 0 success, 1 configuration error, 2 numerical-consistency
error, 3 resource cap exceeded.
"""

import argparse
import sys

from .config import load_config
from .errors import CapExceeded, ConfigError, ConsistencyError, MQSimError
from .qinfo import entanglement_depth, producibility_bound
from .sweep import render, run_sweep

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_CONSISTENCY = 2
EXIT_CAP = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mqskew",
        description="Multiple-quantum coherence spectra and entanglement "
                    "depth for dipolar spin-1/2 systems")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a (tau, beta) sweep from a config")
    run.add_argument("config", help="YAML configuration file")
    run.add_argument("--format", choices=("csv", "json"), default=None,
                     help="override the output format from the config")
    run.add_argument("--threads", type=int, default=None, metavar="K",
                     help="worker threads (default: all cores)")
    run.add_argument("--no-header-timestamp", action="store_true",
                     help="omit the timestamp line for byte-identical output")
    run.add_argument("--output", "-o", default=None, metavar="PATH",
                     help="write the table here instead of stdout")

    verify = sub.add_parser("verify",
                            help="run the built-in invariant suite")
    verify.add_argument("--seed", type=int, default=0,
                        help="seed for the randomized checks")

    depth = sub.add_parser("depth",
                           help="entanglement depth for an information value")
    depth.add_argument("--n", type=int, required=True, help="spin count")
    depth.add_argument("--value", type=float, required=True,
                       help="skew or Fisher information value")
    return parser


def _cmd_run(args) -> int:
    config = load_config(args.config)
    if args.threads is not None and args.threads < 1:
        raise ConfigError(f"--threads must be >= 1, got {args.threads}")
    result = run_sweep(config, threads=args.threads)
    timestamp = False if args.no_header_timestamp else None
    text = render(result, output_format=args.format, timestamp=timestamp)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    s = result.summary
    print(f"{s['rows']} rows ({s['engine']}, N={s['n_spins']}, "
          f"tau_mode={s['tau_mode']}) in {s['elapsed_s']}s; "
          f"depth_wy {s['depth_wy_range']}, "
          f"depth_fisher {s['depth_fisher_range']}",
          file=sys.stderr)
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .selfcheck import run_verify
    return EXIT_OK if run_verify(seed=args.seed) else EXIT_CONSISTENCY


def _cmd_depth(args) -> int:
    if args.n < 1:
        raise ConfigError(f"--n must be >= 1, got {args.n}")
    if args.value < 0:
        raise ConfigError(f"--value must be >= 0, got {args.value}")
    depth = entanglement_depth(args.value, args.n)
    print(f"entanglement depth: {depth} of {args.n} spins")
    if depth > 1:
        k = depth - 1
        print(f"  value {args.value!r} exceeds the {k}-producibility bound "
              f"{producibility_bound(k, args.n)}")
    if depth < args.n:
        print(f"  next bound: k={depth} requires more than "
              f"{producibility_bound(depth, args.n)}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "verify": _cmd_verify, "depth": _cmd_depth}
    try:
        return handler[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapExceeded as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ConsistencyError, MQSimError) as exc:
        print(f"numerical-consistency error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    raise SystemExit(main())
