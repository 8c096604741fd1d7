"""Command-line interface.

    fvx run <config> [--out DIR]
    fvx oracle <name> --t T --nx N [--x0 X0] [--domain LO HI] [--out FILE]
    fvx compare <a.fvx> <b.fvx>
    fvx bench <config> --resolutions LIST [--backends ...]

Exit codes: 0 success, 1 usage, 2 configuration, 3 runtime abort, 4 I/O.
FVX_THREADS caps the data-parallel width of the array backend (0 = auto).
"""

import argparse
import os
import sys
import time as _time

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_RUNTIME, EXIT_IO = 0, 1, 2, 3, 4


def _apply_thread_cap():
    cap = os.environ.get("FVX_THREADS")
    if cap and cap != "0":
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, cap)


_apply_thread_cap()

import numpy as np  # noqa: E402

from . import kernels  # noqa: E402
from .config import load_config  # noqa: E402
from .diagnostics import coarsen, relative_error  # noqa: E402
from .errors import ConfigError, DomainError, FormatError, FvxError  # noqa: E402
from .grid import Grid1D  # noqa: E402
from .oracle import exact_euler_riemann, exact_swe_dambreak, reference_field  # noqa: E402
from .snapshot import read_snapshot  # noqa: E402
from .solver import SolverAbort, run  # noqa: E402


def cmd_run(args):
    try:
        cfg = load_config(args.config)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = args.out or "."
    try:
        state = run(cfg, out_dir=out_dir)
    except SolverAbort as e:
        print(f"runtime abort: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except (DomainError, ConfigError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    print(
        f"completed {state.step_count} steps to t={state.time:.6g}; "
        f"outputs in {out_dir}"
    )
    return EXIT_OK


def cmd_oracle(args):
    t = args.t
    grid = Grid1D(args.domain[0], args.domain[1], args.nx)
    try:
        if args.name == "dambreak1d":
            sol = exact_swe_dambreak(args.hl, args.hr, args.g)
            q = reference_field(sol, grid, t, x0=args.x0)
            header = "x,h,hu"
            cols = [grid.cell_centers(), q[0], q[1]]
        elif args.name == "sod1d":
            gamma = args.gamma
            left = (1.0, 0.0, 1.0 / (gamma - 1.0))
            right = (0.125, 0.0, 0.1 / (gamma - 1.0))
            sol = exact_euler_riemann(left, right, gamma)
            q = reference_field(sol, grid, t, x0=args.x0)
            rho, mu, e = q
            u = mu / rho
            p = (gamma - 1.0) * (e - 0.5 * mu * u)
            header = "x,rho,u,p"
            cols = [grid.cell_centers(), rho, u, p]
        else:
            print(f"usage error: unknown oracle '{args.name}'", file=sys.stderr)
            return EXIT_USAGE
    except DomainError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    lines = [header] + [
        ",".join(f"{col[i]:.17g}" for col in cols) for i in range(args.nx)
    ]
    text = "\n".join(lines) + "\n"
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as f:
                f.write(text)
        except OSError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_compare(args):
    try:
        a = read_snapshot(args.a)
        b = read_snapshot(args.b)
    except FormatError as e:
        print(f"format error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    if a.system != b.system:
        print(
            f"config error: snapshots hold different systems "
            f"({a.system} vs {b.system})",
            file=sys.stderr,
        )
        return EXIT_CONFIG
    ha, hb = a.q[0], b.q[0]
    try:
        if ha.shape != hb.shape:
            # coarsen the finer one onto the coarser
            if ha.size > hb.size:
                factor = ha.shape[0] // hb.shape[0]
                ha = coarsen(ha, factor)
            else:
                factor = hb.shape[0] // ha.shape[0]
                hb = coarsen(hb, factor)
        err = relative_error(ha, hb)
    except FvxError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"{err:.17g}")
    return EXIT_OK


def cmd_bench(args):
    try:
        cfg = load_config(args.config)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    backends = args.backends or kernels.available()
    for b in backends:
        if b not in kernels.available():
            print(f"usage error: backend '{b}' not built", file=sys.stderr)
            return EXIT_USAGE
    resolutions = [int(r) for r in args.resolutions.split(",")]
    print("resolution,backend,wall_seconds,cell_updates_per_second")
    previous = kernels.backend_name()
    try:
        for nx in resolutions:
            spec = dict(cfg.grid_spec)
            spec["nx"] = nx
            if "ny" in spec:
                spec["ny"] = max(1, nx * cfg.grid_spec["ny"] // cfg.grid_spec["nx"])
            bench_cfg = cfg
            bench_cfg.grid_spec = spec
            for backend in backends:
                kernels.use(backend)
                t0 = _time.perf_counter()
                state = run(bench_cfg, out_dir=None)
                wall = _time.perf_counter() - t0
                cells = nx * spec.get("ny", 1)
                rate = state.step_count * cells / wall if wall > 0 else 0.0
                print(f"{nx},{backend},{wall:.6f},{rate:.1f}")
    except SolverAbort as e:
        print(f"runtime abort: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    finally:
        kernels.use(previous)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="fvx", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("run", help="execute a run configuration")
    p.add_argument("config")
    p.add_argument("--out", default=None, help="output directory (default: cwd)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("oracle", help="emit an exact 1D profile as CSV")
    p.add_argument("name", choices=["dambreak1d", "sod1d"])
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--nx", type=int, required=True)
    p.add_argument("--x0", type=float, default=0.5)
    p.add_argument("--domain", type=float, nargs=2, default=[0.0, 1.0])
    p.add_argument("--hl", type=float, default=1.0)
    p.add_argument("--hr", type=float, default=0.35)
    p.add_argument("--g", type=float, default=9.8)
    p.add_argument("--gamma", type=float, default=1.4)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("compare", help="relative height/density error between snapshots")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bench", help="time runs over a resolution sweep")
    p.add_argument("config")
    p.add_argument("--resolutions", required=True, help="comma-separated nx list")
    p.add_argument(
        "--backends",
        nargs="*",
        default=None,
        help="kernel backends to time (default: all built)",
    )
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_help()
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
