"""Command-line interface: ``photonliquid {analytic,simulate,estimate,compare,figure2}``.

Every command that writes files also writes a ``*.manifest.json`` with the
full parameter set so the data files can be regenerated byte for byte.

Exit status: 0 success, 1 comparison outside tolerance, 2 usage error,
3 validation error, 4 numeric error, 5 I/O error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import (
    MollowParams,
    find_first_max,
    g2_cascade_closed_form,
    g2_erlang_cascade,
    g2_heitler,
    g2_incoherent_2ls,
    g2_mollow,
)
from .curve import CorrelationCurve, dump_json, format_float
from .errors import (
    CapacityError,
    DomainError,
    EstimationError,
    NumericError,
    PoleError,
    ShapeError,
    ValidationError,
)
from .lindblad import MAX_LEVELS, CascadeModel, g2_qrt
from .phase_type import GENERATOR, StageRates, mean_rate
from .renewal import g2_from_renewal
from .stream import apply_jitter, estimate_g2, read_stream, simulate_stream, write_stream

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_VALIDATION, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4, 5

#: Drive strength used for the strongly driven curve of the figure-2 family.
FIG2_MOLLOW_OMEGA = 2.0

ROUTES = ("cascade", "closed", "renewal", "lindblad", "incoherent", "heitler", "mollow")


class UsageError(Exception):
    pass


def _rates_arg(text):
    try:
        return StageRates(tuple(float(x) for x in text.split(",") if x.strip()))
    except (ValueError, DomainError) as exc:
        raise argparse.ArgumentTypeError(f"invalid rates {text!r}: {exc}") from exc


def _n_stages(args):
    if args.n is not None:
        return args.n
    if getattr(args, "rates", None) is not None:
        return args.rates.n
    raise UsageError("give the number of stages with --n (or --rates)")


def _stage_rates(args):
    if getattr(args, "rates", None) is not None:
        return args.rates
    return StageRates.erlang(_n_stages(args), args.gamma)


def _grid(tau_max, points):
    if not tau_max > 0 or points < 2:
        raise UsageError("need --tau-max > 0 and --points >= 2")
    return np.linspace(0.0, tau_max, points)


def route_values(route, args, tau):
    """g2 of one named route on ``tau``."""
    g = args.gamma
    if route == "cascade":
        return g2_erlang_cascade(_n_stages(args), g, tau)
    if route == "closed":
        if _n_stages(args) not in (2, 3, 4):
            raise UsageError("closed form exists only for --n 2, 3 or 4")
        return g2_cascade_closed_form(_n_stages(args), g, tau)
    if route == "renewal":
        return g2_from_renewal(_stage_rates(args), tau).values
    if route == "lindblad":
        rates = _stage_rates(args)
        if rates.n < 2 or rates.n > MAX_LEVELS:
            raise UsageError(f"lindblad route needs 2..{MAX_LEVELS} stages, got {rates.n}")
        return g2_qrt(CascadeModel.from_rates(rates), tau).values
    if route == "incoherent":
        return g2_incoherent_2ls(args.pump if args.pump is not None else g, g, tau)
    if route == "heitler":
        return g2_heitler(g, tau)
    if route == "mollow":
        return g2_mollow(MollowParams(g, args.omega), tau)
    raise UsageError(f"unknown route {route!r}")


# --------------------------------------------------------------------------
# output helpers


def svg_plot(tau, values, title=""):
    """Minimal standalone SVG polyline of one curve."""
    w, h, pad = 480, 300, 30
    tau = np.asarray(tau, dtype=float)
    values = np.asarray(values, dtype=float)
    x0, x1 = tau.min(), tau.max()
    y1 = max(float(values.max()), 1.0) * 1.05
    xs = pad + (tau - x0) / (x1 - x0 or 1) * (w - 2 * pad)
    ys = h - pad - values / y1 * (h - 2 * pad)
    pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
    one = h - pad - 1.0 / y1 * (h - 2 * pad)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">\n'
        f'<text x="{pad}" y="{pad - 10}" font-size="12">{title}</text>\n'
        f'<line x1="{pad}" y1="{one:.2f}" x2="{w - pad}" y2="{one:.2f}" stroke="#bbb" stroke-dasharray="4"/>\n'
        f'<polyline fill="none" stroke="black" points="{pts}"/>\n</svg>\n'
    )


def _write_curve(curve, out, fmt, plot, title=""):
    if out is None:
        sys.stdout.write(curve.to_json() if fmt == "json" else curve.to_csv())
        return []
    out = Path(out)
    files = curve.write(out, fmt)
    if plot:
        svg = out.with_name(out.name + ".svg")
        svg.write_text(svg_plot(curve.tau, curve.values, title), newline="\n")
        files.append(svg)
    return files


def _write_manifest(path, command, params, outputs, started, seeds=None):
    manifest = {
        "command": command,
        "parameters": params,
        "seeds": seeds or [],
        "generator": GENERATOR,
        "version": __version__,
        "outputs": [str(p) for p in outputs],
        "wall_clock_s": round(time.perf_counter() - started, 6),
    }
    Path(path).write_text(dump_json(manifest), newline="\n")
    return Path(path)


def _params(args):
    skip = {"func", "command"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        out[k] = list(v.rates) if isinstance(v, StageRates) else v
    return out


def _manifest_path(out):
    out = Path(out)
    return out.with_name(out.name + ".manifest.json")


# --------------------------------------------------------------------------
# commands


def cmd_analytic(args):
    started = time.perf_counter()
    if args.model in ("cascade", "cascade-closed"):
        if args.n is None or args.n < 1:
            raise UsageError("--n (number of stages, >= 1) is required")
        default_max = 10.0 / mean_rate(StageRates.erlang(args.n, args.gamma))
    else:
        default_max = 10.0 / args.gamma
    tau = _grid(args.tau_max if args.tau_max is not None else default_max, args.points)
    route = {"cascade-closed": "closed"}.get(args.model, args.model)
    if route == "mollow" and args.omega is None:
        raise UsageError("--omega is required for the mollow model")
    values = route_values(route, args, tau)
    curve = CorrelationCurve(tau, values, meta={"model": args.model})
    if args.symmetric:
        curve = curve.mirrored()
    files = _write_curve(curve, args.out, args.format, args.plot, title=args.model)
    if args.out is not None:
        _write_manifest(_manifest_path(args.out), "analytic", _params(args), files, started)
    return EXIT_OK


def cmd_simulate(args):
    started = time.perf_counter()
    rates = args.rates
    duration = args.duration if args.duration is not None else 1e6 / mean_rate(rates)
    if not duration > 0:
        raise UsageError("--duration must be positive")
    stream = simulate_stream(rates, duration, args.seed)
    files = write_stream(stream, args.out)
    params = {**_params(args), "duration": duration}
    _write_manifest(_manifest_path(args.out), "simulate", params, files, started, seeds=[args.seed])
    print(f"{len(stream)} events written to {args.out}")
    return EXIT_OK


def cmd_estimate(args):
    started = time.perf_counter()
    stream = read_stream(args.input, args.duration)
    seeds = []
    if args.jitter:
        stream = apply_jitter(stream, args.jitter, args.seed)
        seeds.append(args.seed)
    curve = estimate_g2(stream, args.bin, args.tau_max)
    if args.symmetric:
        mirrored = curve.mirrored()
        mirrored.meta.update(curve.meta)
        curve = mirrored
    files = _write_curve(curve, args.out, args.format, args.plot, title=str(args.input))
    if args.out is not None:
        _write_manifest(_manifest_path(args.out), "estimate", _params(args), files, started, seeds=seeds)
    return EXIT_OK


def cmd_compare(args):
    started = time.perf_counter()
    n_stages = args.rates.n if args.rates is not None else args.n
    default_max = 10.0 / args.gamma
    tau = _grid(args.tau_max if args.tau_max is not None else default_max, args.points)
    a = np.asarray(route_values(args.route_a, args, tau), dtype=float)
    b = np.asarray(route_values(args.route_b, args, tau), dtype=float)
    diff = a - b
    max_diff = float(np.max(np.abs(diff)))
    passed = max_diff <= args.tol
    report = {
        "route_a": args.route_a,
        "route_b": args.route_b,
        "stages": n_stages,
        "max_abs_diff": max_diff,
        "tolerance": args.tol,
        "pass": bool(passed),
    }
    files = []
    if args.out is not None:
        out = Path(args.out)
        if args.format == "json":
            cols = {"tau": tau, args.route_a: a, args.route_b: b, "diff": diff}
            cols = {k: [float(format_float(x)) for x in v] for k, v in cols.items()}
            out.write_text(dump_json({"columns": cols, "report": report}), newline="\n")
        else:
            lines = [f"tau,{args.route_a},{args.route_b},diff"]
            lines += [",".join(format_float(x) for x in row) for row in zip(tau, a, b, diff)]
            out.write_text("\n".join(lines) + "\n", newline="\n")
        files.append(out)
        _write_manifest(_manifest_path(out), "compare", {**_params(args), "report": report}, files, started)
    verdict = "PASS" if passed else "FAIL"
    print(f"{args.route_a} vs {args.route_b}: max |diff| = {max_diff:.3e} (tol {args.tol:.1e}) {verdict}")
    return EXIT_OK if passed else EXIT_FAIL


FIG2_LIQUID_STAGES = 26


def figure2_curves(gamma=1.0, tau_max=10.0, points=1001):
    """The six reference curves as ``{stem: (tau_grid, g2_function)}`` on one-sided grids.

    The last curve uses a delay axis stretched to ``tau_max / mean_rate``.
    """
    tau = np.linspace(0.0, tau_max / gamma, points)
    n = FIG2_LIQUID_STAGES
    tau_liquid = np.linspace(0.0, tau_max / mean_rate(StageRates.erlang(n, gamma)), points)
    mollow = MollowParams(gamma, FIG2_MOLLOW_OMEGA * gamma)
    return {
        "i_coherent": (tau, lambda t: g2_erlang_cascade(1, gamma, t)),
        "ii_incoherent_2ls": (tau, lambda t: g2_incoherent_2ls(gamma, gamma, t)),
        "iii_mollow": (tau, lambda t: g2_mollow(mollow, t)),
        "iv_cascade_n3": (tau, lambda t: g2_erlang_cascade(3, gamma, t)),
        "v_cascade_n6": (tau, lambda t: g2_erlang_cascade(6, gamma, t)),
        "vi_cascade_n26": (tau_liquid, lambda t: g2_erlang_cascade(n, gamma, t)),
    }


def cmd_figure2(args):
    started = time.perf_counter()
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    files, peaks = [], {}
    ext = "json" if args.format == "json" else "csv"
    for stem, (tau, func) in figure2_curves(args.gamma).items():
        curve = CorrelationCurve(tau, func(tau), meta={"curve": stem}).mirrored()
        files += _write_curve(curve, outdir / f"fig2_{stem}.{ext}", args.format, args.plot, title=stem)
        peak = find_first_max(func, (tau[1], tau[-1]))
        peaks[stem] = None if peak is None else peak._asdict()
    params = {
        **_params(args),
        "mollow_omega_over_gamma": FIG2_MOLLOW_OMEGA,
        "liquid_stages": FIG2_LIQUID_STAGES,
        "liquid_tau_max": float(10.0 / mean_rate(StageRates.erlang(FIG2_LIQUID_STAGES, args.gamma))),
        "first_maxima": peaks,
    }
    _write_manifest(outdir / "manifest.json", "figure2", params, files, started)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser():
    p = argparse.ArgumentParser(prog="photonliquid", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common_out(sp, stdout_ok=True):
        sp.add_argument("--out", default=None, help="output file" + (" (default: stdout)" if stdout_ok else ""))
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--plot", action="store_true", help="also write a small SVG plot")

    def model_flags(sp):
        sp.add_argument("--n", type=int, default=None, help="number of stages (pump + cascades)")
        sp.add_argument("--gamma", type=float, default=1.0)
        sp.add_argument("--pump", type=float, default=None)
        sp.add_argument("--omega", type=float, default=None, help="coherent drive amplitude")
        sp.add_argument("--rates", type=_rates_arg, default=None, help="comma-separated stage rates")
        sp.add_argument("--tau-max", type=float, default=None)
        sp.add_argument("--points", type=int, default=1001)

    a = sub.add_parser("analytic", help="closed-form g2 curves")
    a.add_argument("model", choices=("incoherent", "heitler", "mollow", "cascade", "cascade-closed"))
    model_flags(a)
    a.add_argument("--symmetric", action="store_true", help="mirror to negative delays")
    common_out(a)
    a.set_defaults(func=cmd_analytic)

    s = sub.add_parser("simulate", help="simulate a photon stream")
    s.add_argument("--rates", type=_rates_arg, required=True)
    s.add_argument("--duration", type=float, default=None, help="default: 1e6 / mean rate")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True, help="timestamp file, .txt or .f64")
    s.set_defaults(func=cmd_simulate)

    e = sub.add_parser("estimate", help="estimate g2 from a timestamp file")
    e.add_argument("input")
    e.add_argument("--bin", type=float, default=None, help="bin width (default 0.01 / rate)")
    e.add_argument("--tau-max", type=float, default=None, help="default 30 / rate")
    e.add_argument("--jitter", type=float, default=0.0, help="Gaussian timing noise std")
    e.add_argument("--seed", type=int, default=0, help="seed for the jitter noise")
    e.add_argument("--duration", type=float, default=None)
    e.add_argument("--symmetric", action="store_true")
    common_out(e)
    e.set_defaults(func=cmd_estimate)

    c = sub.add_parser("compare", help="compare two g2 routes on a shared grid")
    c.add_argument("route_a", choices=ROUTES)
    c.add_argument("route_b", choices=ROUTES)
    model_flags(c)
    c.add_argument("--tol", type=float, default=1e-8)
    c.add_argument("--out", default=None)
    c.add_argument("--format", choices=("csv", "json"), default="csv")
    c.set_defaults(func=cmd_compare)

    f = sub.add_parser("figure2", help="write the six reference g2 curves")
    f.add_argument("--out", required=True, help="output directory")
    f.add_argument("--gamma", type=float, default=1.0)
    f.add_argument("--format", choices=("csv", "json"), default="csv")
    f.add_argument("--plot", action="store_true")
    f.set_defaults(func=cmd_figure2)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    except (DomainError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, ShapeError, EstimationError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericError, PoleError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
