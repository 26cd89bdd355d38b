"""Command-line front door: one subcommand per computation, file outputs only.

Exit status protocol: 0 on success, 2 when flag validation fails (one-line
diagnostic on stderr, nothing computed, no file touched), 1 when the
computation or output itself fails.  Validation runs fully before any
computation starts, and files are written atomically, so a failing run never
leaves partial output behind.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Callable, Optional, Tuple

import numpy as np

from . import analysis, cipher, compression, fractals, systems
from .errors import ChaoscopeError, DomainError
from .formats import (
    read_pgm,
    write_divergence_csv,
    write_pgm,
    write_rows_csv,
    write_trajectory_csv,
)
from .integrate import IntegratorConfig, integrate, iterate_map

KEY_ENV_VAR = "CHAOSCOPE_KEY"


def _parse_floats(text: str, what: str) -> Tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise DomainError(f"{what} must be comma-separated numbers, got '{text}'")


def _parse_colon(text: str, count: int, what: str) -> Tuple[float, ...]:
    parts = text.split(":")
    if len(parts) != count:
        raise DomainError(f"{what} needs {count} colon-separated numbers, got '{text}'")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise DomainError(f"{what} must be numeric, got '{text}'")


def _resolve_key(args) -> Tuple[float, float]:
    text = getattr(args, "key", None) or os.environ.get(KEY_ENV_VAR)
    if not text:
        raise DomainError(
            f"no cipher key: pass --key mu,x0 or set {KEY_ENV_VAR}"
        )
    values = _parse_floats(text, "key")
    if len(values) != 2:
        raise DomainError(f"key must be 'mu,x0', got '{text}'")
    return values


def _check_out(path: str) -> Path:
    out = Path(path)
    parent = out.parent if str(out.parent) else Path(".")
    if not parent.is_dir():
        raise DomainError(f"output directory does not exist: {parent}")
    return out


def _check_in(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise DomainError(f"input file does not exist: {path}")
    return p


def _system_args(args, kind: str):
    preset = systems.preset(args.system)
    if preset.kind != kind:
        raise DomainError(
            f"system '{preset.name}' is a {preset.kind}, but this command needs a {kind}"
        )
    params = preset.default_params
    if getattr(args, "params", None):
        params = _parse_floats(args.params, "--params")
        if len(params) != len(preset.param_names):
            names = ",".join(preset.param_names) or "(none)"
            raise DomainError(
                f"system '{preset.name}' takes {len(preset.param_names)} "
                f"parameters ({names}), got {len(params)}"
            )
    state = preset.default_state
    if getattr(args, "x0", None):
        state = _parse_floats(args.x0, "--x0")
        if len(state) != preset.dimension:
            raise DomainError(
                f"system '{preset.name}' has dimension {preset.dimension}, "
                f"--x0 gave {len(state)} components"
            )
    return preset, params, np.array(state)


def _integrator_config(args) -> IntegratorConfig:
    return IntegratorConfig(
        rel_tol=args.rel_tol,
        abs_tol=args.abs_tol,
        initial_step=args.initial_step,
        max_steps=args.max_steps,
        min_step=args.min_step,
    )


# Each planner validates everything, then returns the zero-argument
# computation to run.  Nothing may be computed or written during planning.


def _plan_simulate(args) -> Callable[[], None]:
    preset, params, x0 = _system_args(args, "flow")
    t0, t1 = _parse_colon(args.span, 2, "--span")
    if not t1 > t0:
        raise DomainError(f"span needs t0 < t1, got '{args.span}'")
    cfg = _integrator_config(args)
    field = preset.field(params)
    out = _check_out(args.out)

    def run():
        write_trajectory_csv(integrate(field, x0, t0, t1, cfg), out)

    return run


def _plan_iterate(args) -> Callable[[], None]:
    preset, params, x0 = _system_args(args, "map")
    if args.steps < 1:
        raise DomainError("--steps must be positive")
    if args.discard < 0 or args.discard >= args.steps:
        raise DomainError("--discard must satisfy 0 <= discard < steps")
    step = preset.map(params)
    out = _check_out(args.out)

    def run():
        write_trajectory_csv(iterate_map(step, x0, args.steps, args.discard), out)

    return run


def _plan_cobweb(args) -> Callable[[], None]:
    params = systems.LogisticParams(mu=args.mu)
    if not (0.0 <= args.x0 <= 1.0):
        raise DomainError(f"--x0 must lie in [0, 1], got {args.x0}")
    if args.steps < 1:
        raise DomainError("--steps must be positive")
    out = _check_out(args.out)

    def run():
        write_trajectory_csv(analysis.cobweb_trace(params, args.x0, args.steps), out)

    return run


def _plan_bifurcate(args) -> Callable[[], None]:
    lo, hi = _parse_colon(args.mu_range, 2, "--mu-range")
    if not (0.0 <= lo < hi <= 4.0):
        raise DomainError(f"--mu-range must satisfy 0 <= lo < hi <= 4, got '{args.mu_range}'")
    if args.mu_steps < 1:
        raise DomainError("--mu-steps must be positive")
    if args.discard < 100:
        raise DomainError("--discard must be at least 100")
    if args.keep < 1:
        raise DomainError("--keep must be positive")
    out = _check_out(args.out)

    def run():
        diagram = analysis.bifurcation_scan(
            lambda mu, x: mu * x * (1.0 - x),
            lo,
            hi,
            args.mu_steps,
            args.x0,
            args.discard,
            args.keep,
        )
        write_trajectory_csv(diagram, out)

    return run


def _plan_divergence(args) -> Callable[[], None]:
    preset, params, x0 = _system_args(args, "flow")
    if not args.delta0 > 0.0:
        raise DomainError("--delta0 must be positive")
    if not args.t1 > 0.0:
        raise DomainError("--t1 must be positive")
    cfg = _integrator_config(args)
    field = preset.field(params)
    out = _check_out(args.out)

    def run():
        report = analysis.divergence_rate(field, x0, args.delta0, args.t1, cfg)
        write_divergence_csv(report, out)
        print(f"fitted_rate {report.fitted_rate:.17g}")
        print(
            f"fit_window {report.fit_window[0]:.17g} {report.fit_window[1]:.17g}"
        )

    return run


def _plan_equilibria(args) -> Callable[[], None]:
    if args.system != "lorenz":
        raise DomainError("equilibria currently supports only --system lorenz")
    params = systems.LorenzParams(
        *(_parse_floats(args.params, "--params") if args.params else systems.PRESETS["lorenz"].default_params)
    )
    out = _check_out(args.out)

    def run():
        points = analysis.lorenz_equilibria(params)
        write_rows_csv(out, ["x0", "x1", "x2"], (list(p) for p in points))

    return run


def _plan_mandelbrot(args) -> Callable[[], None]:
    xmin, xmax, ymin, ymax = _parse_colon(args.window, 4, "--window")
    window = fractals.ComplexWindow(
        xmin=xmin, xmax=xmax, ymin=ymin, ymax=ymax, scale=args.scale
    )
    if args.nmax < 1:
        raise DomainError("--nmax must be positive")
    if args.threshold < 2.0:
        raise DomainError("--threshold must be at least 2")
    out = _check_out(args.out)

    def run():
        grid = fractals.mandelbrot_grid(window, args.nmax, args.threshold)
        write_pgm(grid, out)

    return run


def _plan_ifs(args) -> Callable[[], None]:
    try:
        make = fractals.IFS_PRESETS[args.preset]
    except KeyError:
        known = ", ".join(sorted(fractals.IFS_PRESETS))
        raise DomainError(f"unknown IFS preset '{args.preset}' (known: {known})")
    if args.size < 2:
        raise DomainError("--size must be at least 2")
    if args.steps < 0:
        raise DomainError("--steps must be non-negative")
    out = _check_out(args.out)

    def run():
        start = fractals.BinaryImage.full(args.size, args.size)
        write_pgm(fractals.ifs_iterate(make(), start, args.steps), out)

    return run


def _plan_boxdim(args) -> Callable[[], None]:
    src = _check_in(getattr(args, "input"))
    if not (1 <= args.min_exp < args.max_exp):
        raise DomainError("need 1 <= --min-exp < --max-exp")
    out = _check_out(args.out) if args.out else None

    def run():
        image = read_pgm(src)
        bits = fractals.BinaryImage(bits=image.pixels[::-1] >= 128)
        estimate, pts = fractals.box_count_dimension(bits, args.min_exp, args.max_exp)
        if out is not None:
            write_rows_csv(out, ["x", "y"], ([x, y] for x, y in pts))
        print(f"dimension {estimate:.17g}")

    return run


def _plan_simdim(args) -> Callable[[], None]:
    if args.copies < 1:
        raise DomainError("--copies must be a positive integer")
    if not (0.0 < args.ratio < 1.0):
        raise DomainError("--ratio must lie in (0, 1)")

    def run():
        print(f"dimension {fractals.similarity_dimension(args.copies, args.ratio):.17g}")

    return run


def _plan_compress(args) -> Callable[[], None]:
    src = _check_in(getattr(args, "input"))
    if args.range_size < 1 or args.domain_step < 1:
        raise DomainError("--range-size and --domain-step must be positive")
    if not (0.0 <= args.s_max <= 1.0):
        raise DomainError("--s-max must lie in [0, 1]")
    out = _check_out(args.out)

    def run():
        image = read_pgm(src)
        code = compression.pifs_encode(
            image, args.range_size, args.domain_step, args.s_max
        )
        tmp = out.with_name(out.name + ".tmp")
        tmp.write_bytes(code.to_bytes())
        os.replace(tmp, out)

    return run


def _plan_decompress(args) -> Callable[[], None]:
    src = _check_in(getattr(args, "input"))
    if args.iterations < 1:
        raise DomainError("--iterations must be at least 1")
    out = _check_out(args.out)

    def run():
        code = compression.PifsCode.from_bytes(src.read_bytes())
        write_pgm(compression.pifs_decode(code, args.iterations), out)

    return run


def _plan_encrypt(args) -> Callable[[], None]:
    mu, x0 = _resolve_key(args)
    key = cipher.ChaosKey(mu=mu, x0=x0, warmup=args.warmup)
    src = _check_in(getattr(args, "input"))
    out = _check_out(args.out)

    def run():
        container = cipher.pack_container(key, src.read_bytes())
        tmp = out.with_name(out.name + ".tmp")
        tmp.write_bytes(container)
        os.replace(tmp, out)

    return run


def _plan_decrypt(args) -> Callable[[], None]:
    mu, x0 = _resolve_key(args)
    src = _check_in(getattr(args, "input"))
    out = _check_out(args.out)

    def run():
        payload = cipher.unpack_container(mu, x0, src.read_bytes())
        tmp = out.with_name(out.name + ".tmp")
        tmp.write_bytes(payload)
        os.replace(tmp, out)

    return run


def _plan_avalanche(args) -> Callable[[], None]:
    mu, x0 = _resolve_key(args)
    key = cipher.ChaosKey(mu=mu, x0=x0, warmup=args.warmup)
    if args.bytes < 1024:
        raise DomainError("--bytes must be at least 1024")
    if args.trials < 8:
        raise DomainError("--trials must be at least 8")

    def run():
        print(f"avalanche_fraction {cipher.avalanche_test(key, args.bytes, args.trials):.17g}")

    return run


_PLANNERS = {
    "simulate": _plan_simulate,
    "iterate": _plan_iterate,
    "cobweb": _plan_cobweb,
    "bifurcate": _plan_bifurcate,
    "divergence": _plan_divergence,
    "equilibria": _plan_equilibria,
    "mandelbrot": _plan_mandelbrot,
    "ifs": _plan_ifs,
    "boxdim": _plan_boxdim,
    "simdim": _plan_simdim,
    "compress": _plan_compress,
    "decompress": _plan_decompress,
    "encrypt": _plan_encrypt,
    "decrypt": _plan_decrypt,
    "avalanche": _plan_avalanche,
}


def _add_integrator_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rel-tol", type=float, default=1e-6)
    p.add_argument("--abs-tol", type=float, default=1e-6)
    p.add_argument("--initial-step", type=float, default=None)
    p.add_argument("--max-steps", type=int, default=1_000_000)
    p.add_argument("--min-step", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chaoscope",
        description="Chaotic flows and maps, fractals, fractal image "
        "compression, and a logistic-map stream cipher.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate a flow preset over a time span")
    p.add_argument("--system", required=True)
    p.add_argument("--span", required=True, help="t0:t1")
    p.add_argument("--x0", help="comma-separated initial state")
    p.add_argument("--params", help="comma-separated system parameters")
    _add_integrator_flags(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("iterate", help="iterate a map preset")
    p.add_argument("--system", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--discard", type=int, default=0)
    p.add_argument("--x0", help="comma-separated initial state")
    p.add_argument("--params", help="comma-separated system parameters")
    p.add_argument("--out", required=True)

    p = sub.add_parser("cobweb", help="graphical iteration of the logistic map")
    p.add_argument("--mu", type=float, default=3.8282)
    p.add_argument("--x0", type=float, default=0.2)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--out", required=True)

    p = sub.add_parser("bifurcate", help="logistic bifurcation-diagram scan")
    p.add_argument("--mu-range", required=True, help="lo:hi")
    p.add_argument("--mu-steps", type=int, default=600)
    p.add_argument("--x0", type=float, default=0.3)
    p.add_argument("--discard", type=int, default=500)
    p.add_argument("--keep", type=int, default=100)
    p.add_argument("--out", required=True)

    p = sub.add_parser("divergence", help="twin-trajectory separation rate")
    p.add_argument("--system", required=True)
    p.add_argument("--x0", help="comma-separated initial state")
    p.add_argument("--params", help="comma-separated system parameters")
    p.add_argument("--delta0", type=float, default=1e-8)
    p.add_argument("--t1", type=float, required=True)
    _add_integrator_flags(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("equilibria", help="equilibrium points of a flow")
    p.add_argument("--system", required=True)
    p.add_argument("--params", help="comma-separated system parameters")
    p.add_argument("--out", required=True)

    p = sub.add_parser("mandelbrot", help="escape-time grid as PGM")
    p.add_argument("--window", default="-2.4:1.2:-1.5:1.5", help="xmin:xmax:ymin:ymax")
    p.add_argument("--scale", type=float, default=0.005)
    p.add_argument("--nmax", type=int, default=50)
    p.add_argument("--threshold", type=float, default=4.0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("ifs", help="deterministic IFS iteration as PGM")
    p.add_argument("--preset", default="sierpinski")
    p.add_argument("--size", type=int, default=1024)
    p.add_argument("--steps", type=int, default=7)
    p.add_argument("--out", required=True)

    p = sub.add_parser("boxdim", help="box-counting dimension of a PGM")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--min-exp", type=int, default=2)
    p.add_argument("--max-exp", type=int, default=7)
    p.add_argument("--out", help="optional CSV of the log-log fit points")

    p = sub.add_parser("simdim", help="similarity dimension from copies and ratio")
    p.add_argument("--copies", type=int, required=True)
    p.add_argument("--ratio", type=float, required=True)

    p = sub.add_parser("compress", help="encode a PGM as block transforms")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--range-size", type=int, default=8)
    p.add_argument("--domain-step", type=int, default=8)
    p.add_argument("--s-max", type=float, default=1.0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("decompress", help="decode block transforms to a PGM")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--out", required=True)

    p = sub.add_parser("encrypt", help="stream-encrypt a file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--key", help=f"mu,x0 (default: ${KEY_ENV_VAR})")
    p.add_argument("--warmup", type=int, default=1000)
    p.add_argument("--out", required=True)

    p = sub.add_parser("decrypt", help="decrypt a stream-encrypted file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--key", help=f"mu,x0 (default: ${KEY_ENV_VAR})")
    p.add_argument("--out", required=True)

    p = sub.add_parser("avalanche", help="keystream sensitivity measurement")
    p.add_argument("--key", help=f"mu,x0 (default: ${KEY_ENV_VAR})")
    p.add_argument("--warmup", type=int, default=1000)
    p.add_argument("--bytes", type=int, default=10240)
    p.add_argument("--trials", type=int, default=16)

    return parser


# flags whose values may begin with "-" (windows, spans, negative states);
# they are joined into --flag=value form so argparse cannot mistake the
# value for an option
_VALUE_FLAGS = {"--window", "--span", "--x0", "--params", "--mu-range", "--key"}


def _normalize_argv(argv):
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_normalize_argv(list(argv)))
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0

    try:
        run = _PLANNERS[args.command](args)
    except (DomainError, ChaoscopeError) as exc:
        print(f"chaoscope {args.command}: {exc}", file=sys.stderr)
        return 2

    try:
        run()
    except (ChaoscopeError, OSError) as exc:
        print(
            f"chaoscope {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr
        )
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
