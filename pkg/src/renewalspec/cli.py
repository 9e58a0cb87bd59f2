"""Command-line entry point.

    renewalspec run --config cfg.json [--workers K] [--single-worker]
    renewalspec list-models
    renewalspec list-schemes

Exit codes: 0 success, 1 acceptance failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import sys

from .experiments import ConfigError, EXPERIMENTS, load_config, run
from .sampling import SCHEME_KINDS
from .spectral_models import MODEL_NAMES


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="renewalspec",
        description="Experiments on renewal-sampled long-memory Gaussian processes.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help=f"run one experiment ({', '.join(EXPERIMENTS)})")
    p_run.add_argument("--config", required=True, help="JSON config file")
    p_run.add_argument("--workers", type=int, default=None,
                       help="replicate-level worker processes")
    p_run.add_argument("--single-worker", action="store_true",
                       help="one worker and one BLAS thread (bitwise-stable runs)")
    p_run.add_argument("--output-dir", default=None,
                       help="override the config's output directory")
    sub.add_parser("list-models", help="registered spectral models")
    sub.add_parser("list-schemes", help="registered sampling schemes")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "list-models":
        for name in MODEL_NAMES:
            print(name)
        return 0
    if args.command == "list-schemes":
        for name in SCHEME_KINDS:
            print(name)
        return 0
    try:
        cfg = load_config(args.config)
        if args.workers is not None:
            cfg.workers = args.workers
        if args.single_worker:
            cfg.single_worker = True
        if args.output_dir is not None:
            cfg.output_dir = args.output_dir
        manifest = run(cfg)
    except (ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    for check in manifest.checks:
        flag = "PASS" if check.get("passed", True) else "FAIL"
        print(f"[{flag}] criterion {check.get('criterion')}: {check.get('name')}: "
              f"measured {check.get('measured')} target {check.get('target')} "
              f"tol {check.get('tolerance')}")
    print(f"wrote {len(manifest.outputs)} output file(s) to {cfg.resolved().output_dir}")
    if cfg.experiment == "acceptance_suite" and not manifest.passed:
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
