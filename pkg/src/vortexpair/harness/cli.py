"""Command-line entry point.

::

    vortexpair fig3 --format csv --out fig3.csv
    vortexpair sweep --config run.ini --workers 4
    vortexpair check

Data goes to stdout or ``--out``; progress and diagnostics go to stderr.
Exit codes: 0 success, 1 acceptance failure, 2 configuration error,
3 numerical error.
"""

import argparse
import sys
from dataclasses import replace

from .. import __version__
from ..errors import ConfigError, NumericalError
from .cache import ENV_VAR, ResultCache
from .config import FORMATS, load_config, validate
from .emit import emit
from .sweep import FIGURES, figure_config, run_sweep

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="vortexpair",
        description="Biphoton TAM statistics and OAM coincidences from vortex-photon induced emission.",
        epilog=f"Results are cached under ${ENV_VAR} (default ~/.cache/vortexpair).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def run_flags(p, config_required=False):
        p.add_argument("--config", metavar="PATH", required=config_required,
                       help="INI run configuration (merged onto the figure defaults)")
        p.add_argument("--preset", metavar="NAME", help="parameter preset (Na-3p3s or H-2p1s)")
        p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
        p.add_argument("--format", choices=FORMATS, default="csv")
        p.add_argument("--workers", type=int, default=1, metavar="N")
        p.add_argument("--no-cache", action="store_true", help="recompute even if cached")
        p.add_argument("--tol", type=float, metavar="REL", help="relative quadrature tolerance")

    for name in FIGURES:
        run_flags(sub.add_parser(name, help=f"curve data for {name}"))
    run_flags(sub.add_parser("sweep", help="run a sweep described by --config"), config_required=True)
    chk = sub.add_parser("check", help="run the acceptance checks")
    chk.add_argument("--only", metavar="LIST", help="comma-separated check numbers")
    return parser


def _config(args):
    base = figure_config(args.command) if args.command in FIGURES else None
    if args.config:
        cfg = load_config(args.config, base=base)
    elif base is not None:
        cfg = base
    else:
        raise ConfigError("sweep needs --config")
    if args.preset:
        cfg = replace(cfg, preset=args.preset)
    if args.tol is not None:
        cfg = replace(cfg, rtol=args.tol)
    validate(cfg)
    if args.workers < 1:
        raise ConfigError(f"--workers must be >= 1, got {args.workers}")
    return cfg


def _run(args):
    cfg = _config(args)
    from ..presets import PRESETS

    if cfg.preset not in PRESETS:
        raise ConfigError(f"unknown preset {cfg.preset!r}; known: {sorted(PRESETS)}")
    cache = ResultCache(log=sys.stderr)
    result = run_sweep(cfg, workers=args.workers, cache=cache, use_cache=not args.no_cache,
                       log=sys.stderr)
    for rec in result.records:
        for w in rec["warnings"]:
            print(f"point {rec['index']}: {w}", file=sys.stderr)
    emit(result, args.format, path=args.out, stream=sys.stdout)
    if args.out:
        print(f"wrote {args.out} ({result.config_hash[:12]})", file=sys.stderr)
    return EXIT_OK


def _check(args):
    from .acceptance import CHECKS, run_checks

    try:
        numbers = [int(x) for x in args.only.split(",")] if args.only else None
    except ValueError:
        raise ConfigError(f"--only expects comma-separated integers, got {args.only!r}") from None
    if numbers and any(n not in CHECKS for n in numbers):
        raise ConfigError(f"--only: known checks are {sorted(CHECKS)}")
    results = run_checks(numbers, stream=sys.stdout)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed", file=sys.stdout)
    return EXIT_CHECK if failed else EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return _check(args)
        return _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        for item in exc.trace[:10]:
            print(f"  {item}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
