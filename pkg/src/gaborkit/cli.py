"""Command-line front end.

Subcommands: zak-surface, frame-bounds, find-zeros, verify, frft-apply.
Window flags compose as pi(shift) . Fourier . FrFT(r) . Chirp(q) .
Dilation(a) applied to the Hermite base; --chain overrides with an explicit
JSON operator list.  Outputs are UTF-8 with LF line endings, floats printed
in shortest round-trip form, so identical configurations produce
byte-identical files.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 irreducible point set, 5 identity-suite failure.
"""

import argparse
import json
import math
import sys

import numpy as np

from .errors import GaborError, IrreducibleSet
from .frames import (GaborSystem, find_zak_zeros, frame_bounds,
                     reduce_to_multiwindow, report_to_json,
                     theta_zero_certificate)
from .lattices import PRESETS, point_set
from .operators import (Chirp, Dilation, Fourier, FrFT, TFShift, apply_chain,
                        apply_frft, matched_phase_residual, project_isomorphism)
from .special import theta3
from .windows import descriptor, parse_descriptor, realize, window
from .zak import verify_identities, write_surface_csv, zak_surface


def _fmt(x):
    return repr(float(x))


def _parse_pair(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 'x,omega', got {text!r}")
    return float(parts[0]), float(parts[1])


def _window_from_args(args):
    if getattr(args, "chain", None):
        return parse_descriptor({"hermite": args.hermite,
                                 "chain": json.loads(args.chain)})
    ops = []
    if getattr(args, "shift", None):
        ops.append(TFShift(*_parse_pair(args.shift)))
    if getattr(args, "fourier", False):
        ops.append(Fourier())
    if getattr(args, "frft", None) is not None:
        ops.append(FrFT(args.frft))
    if getattr(args, "chirp", None) is not None:
        ops.append(Chirp(args.chirp))
    if getattr(args, "dilate", None) is not None:
        ops.append(Dilation(args.dilate))
    return window(args.hermite, tuple(ops))


def _set_from_args(args):
    if getattr(args, "generator", None):
        entries = [float(v) for v in args.generator.split(",")]
        if len(entries) != 4:
            raise ValueError("--generator takes 4 comma-separated entries a,b,c,d")
        gen = np.array(entries).reshape(2, 2)
        shifts = [(0.0, 0.0)]
        if getattr(args, "shifts", None):
            shifts = [_parse_pair(s) for s in args.shifts.split(";") if s]
        ps = point_set(gen, shifts)
    else:
        name = getattr(args, "set", None) or "Z2"
        if name not in PRESETS:
            raise ValueError(f"unknown point set preset {name!r}; "
                             f"choose from {sorted(PRESETS)}")
        ps = PRESETS[name]
    if getattr(args, "extra_shift", None):
        z = np.array(_parse_pair(args.extra_shift))
        shifts = ps.shift_array
        ps = point_set(ps.generator_matrix,
                       np.vstack([shifts, shifts + z[None, :]]))
    return ps


def _write_json(payload, path):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_zak_surface(args):
    w = _window_from_args(args)
    surf = zak_surface(w, args.n, trunc=args.truncation)
    out = args.out or "zak_surface.csv"
    meta = args.meta or out + ".meta.json"
    write_surface_csv(surf, out, meta)
    print(f"wrote {surf.resolution * surf.resolution} rows to {out}")
    return 0


def _cmd_frame_bounds(args):
    w = _window_from_args(args)
    ps = _set_from_args(args)
    system = reduce_to_multiwindow(GaborSystem(windows=[w], point_set=ps))
    report = frame_bounds(system, resolution=args.n, trunc=args.truncation)
    _write_json(report_to_json(report), args.out)
    print(report.verdict)
    return 0


def _cmd_find_zeros(args):
    w = _window_from_args(args)
    zeros = find_zak_zeros(w, resolution=args.n, tol=args.tol,
                           trunc=args.truncation)
    payload = {
        "window": descriptor(w),
        "resolution": int(args.n),
        "tol": float(args.tol),
        "zeros": [{"x": z.x, "omega": z.omega, "residual": z.residual}
                  for z in zeros],
    }
    _write_json(payload, args.out)
    return 0


def _cmd_frft_apply(args):
    if args.angle is None:
        raise ValueError("frft-apply needs --angle (flag or config)")
    w = _window_from_args(args)
    f = realize(w)
    g = apply_frft(args.angle, f, method=args.method)
    out = args.out or "frft.csv"
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,re,im,abs\n")
        for t, v in zip(f.points, g.values):
            fh.write(f"{_fmt(t)},{_fmt(v.real)},{_fmt(v.imag)},{_fmt(abs(v))}\n")
    if args.meta:
        _write_json({"window": descriptor(w), "angle": float(args.angle),
                     "method": args.method}, args.meta)
    print(f"wrote {g.values.size} rows to {out}")
    return 0


def _suite_zak(args):
    w = _window_from_args(args)
    rng = np.random.RandomState(12345)
    pts = rng.uniform(0.0, 1.0, size=(25, 2))
    defects = verify_identities(w, pts, poisson="closed" if not w.chain else "frft",
                                trunc=args.truncation)
    tols = {name: 1e-10 for name in defects}
    return defects, tols


def _suite_theta(args):
    cert = theta_zero_certificate()
    defects = {
        "theta_combination": cert["theta_combination"],
        "zak_theta_agreement": cert["difference"],
        "zak_origin": cert["zak_origin"],
        "zak_half_half": cert["zak_half_half"],
    }
    jacobi = 0.0
    logderiv = 0.0
    for alpha in (0.25, 0.5, 1.0, 2.0, 4.0):
        ta, ti = theta3(alpha), theta3(1.0 / alpha)
        jacobi = max(jacobi, abs(math.sqrt(alpha) * ta.value - ti.value))
        logderiv = max(logderiv, abs(
            alpha * ta.derivative / ta.value
            + ta.alpha ** -1 * ti.derivative / ti.value + 0.5))
    defects["jacobi_identity"] = jacobi
    defects["logarithmic_derivative"] = logderiv
    tols = {"theta_combination": 1e-13, "zak_theta_agreement": 1e-13,
            "zak_origin": 1e-12, "zak_half_half": 1e-12,
            "jacobi_identity": 1e-12, "logarithmic_derivative": 1e-12}
    return defects, tols


def _suite_frft(args):
    n, r = args.hermite, args.angle
    f = realize(window(n))
    norm = f.norm()
    defects = {}
    for method in ("quadrature", "hermite"):
        g = apply_frft(r, f, method=method)
        expected = np.exp(-1j * n * r) * f.values
        defects[f"eigenvalue_{method}"] = float(
            math.sqrt(float(np.sum(np.abs(g.values - expected) ** 2)) * f.step)
            / norm)
    twice = apply_frft(0.5 * r, apply_frft(0.5 * r, f))
    once = apply_frft(r, f)
    defects["semigroup"] = float(
        math.sqrt(float(np.sum(np.abs(twice.values - once.values) ** 2)) * f.step)
        / norm)
    tols = {k: 1e-7 for k in defects}
    tols["semigroup"] = 1e-6
    return defects, tols


def _suite_intertwine(args):
    rng = np.random.RandomState(777)
    zs = rng.uniform(-2.0, 2.0, size=(args.samples, 2))
    pairs = [("dilation", Dilation(1.3)), ("chirp", Chirp(0.7)),
             ("frft", FrFT(0.6)), ("fourier", Fourier())]
    defects = {}
    for name, op in pairs:
        U = project_isomorphism(op)
        worst = 0.0
        for n in (0, 1):
            f = realize(window(n))
            uf = apply_chain((op,), f)
            for z in zs:
                lhs = apply_chain((op,), realize(window(n, (TFShift(z[0], z[1]),))))
                uz = U @ z
                rhs = apply_chain((TFShift(uz[0], uz[1]),), uf)
                resid, _ = matched_phase_residual(lhs, rhs)
                worst = max(worst, resid / f.norm())
        defects[name] = worst
    return defects, {k: 1e-6 for k in defects}


_SUITES = {"zak": _suite_zak, "theta": _suite_theta, "frft": _suite_frft,
           "intertwine": _suite_intertwine}


def _cmd_verify(args):
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    defects, tols = {}, {}
    for name in names:
        d, t = _SUITES[name](args)
        defects.update({f"{name}.{k}": v for k, v in d.items()})
        tols.update({f"{name}.{k}": v for k, v in t.items()})
    passed = all(defects[k] <= tols[k] for k in defects)
    payload = {"suites": names, "defects": defects, "tolerances": tols,
               "passed": passed}
    _write_json(payload, args.out)
    if not passed:
        failing = [k for k in defects if defects[k] > tols[k]]
        print(f"identity failures: {', '.join(sorted(failing))}", file=sys.stderr)
        return 5
    print(f"all {len(defects)} identity defects within tolerance")
    return 0


def _add_window_flags(p):
    p.add_argument("--hermite", type=int, default=0, metavar="N",
                   help="Hermite order of the base window")
    p.add_argument("--dilate", type=float, metavar="A",
                   help="apply the dilation f(t/A)/sqrt(A)")
    p.add_argument("--chirp", type=float, metavar="Q",
                   help="apply the chirp exp(i pi Q t^2)")
    p.add_argument("--frft", type=float, metavar="R",
                   help="apply the fractional Fourier transform of angle R")
    p.add_argument("--fourier", action="store_true",
                   help="apply the Fourier transform")
    p.add_argument("--shift", metavar="X,W",
                   help="apply the time-frequency shift by (X, W)")
    p.add_argument("--chain", metavar="JSON",
                   help="explicit operator chain as a JSON list "
                        "(overrides the individual operator flags)")


def _add_set_flags(p):
    p.add_argument("--set", choices=sorted(PRESETS), metavar="NAME",
                   help=f"point set preset: {', '.join(sorted(PRESETS))}")
    p.add_argument("--generator", metavar="A,B,C,D",
                   help="explicit generator matrix, row-major")
    p.add_argument("--shifts", metavar="X,W;X,W",
                   help="coset shifts for an explicit generator")
    p.add_argument("--extra-shift", metavar="X,W",
                   help="union the set with a copy shifted by (X, W)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gaborkit",
        description="Gabor-system analysis: Zak surfaces, frame bounds, "
                    "zero searches, identity suites")
    parser.add_argument("--config", metavar="FILE",
                        help="JSON file of defaults (explicit flags win)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zak-surface", help="Zak transform on the unit-square grid")
    _add_window_flags(p)
    p.add_argument("--n", type=int, default=64, help="grid resolution")
    p.add_argument("--truncation", type=int, help="series truncation override")
    p.add_argument("--out", metavar="CSV", help="output CSV path")
    p.add_argument("--meta", metavar="JSON", help="metadata sidecar path")
    p.set_defaults(handler=_cmd_zak_surface)

    p = sub.add_parser("frame-bounds", help="frame bound estimate and verdict")
    _add_window_flags(p)
    _add_set_flags(p)
    p.add_argument("--n", type=int, default=64, help="grid resolution")
    p.add_argument("--truncation", type=int, help="series truncation override")
    p.add_argument("--out", metavar="JSON", help="report path (default stdout)")
    p.set_defaults(handler=_cmd_frame_bounds)

    p = sub.add_parser("find-zeros", help="zeros of |Z w|^2 on the unit square")
    _add_window_flags(p)
    p.add_argument("--n", type=int, default=64, help="grid resolution")
    p.add_argument("--tol", type=float, default=1e-10, help="zero residual target")
    p.add_argument("--truncation", type=int, help="series truncation override")
    p.add_argument("--out", metavar="JSON", help="output path (default stdout)")
    p.set_defaults(handler=_cmd_find_zeros)

    p = sub.add_parser("verify", help="run identity suites as a regression gate")
    _add_window_flags(p)
    p.add_argument("--suite", choices=[*sorted(_SUITES), "all"], default="all")
    p.add_argument("--angle", type=float, default=0.6,
                   help="angle for the frft suite")
    p.add_argument("--samples", type=int, default=16,
                   help="random shifts for the intertwine suite")
    p.add_argument("--truncation", type=int, help="series truncation override")
    p.add_argument("--out", metavar="JSON", help="report path (default stdout)")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("frft-apply", help="fractional Fourier transform of a window")
    _add_window_flags(p)
    p.add_argument("--angle", type=float, help="transform angle (required)")
    p.add_argument("--method", choices=["quadrature", "hermite"],
                   default="quadrature")
    p.add_argument("--out", metavar="CSV", help="output CSV path")
    p.add_argument("--meta", metavar="JSON", help="metadata sidecar path")
    p.set_defaults(handler=_cmd_frft_apply)
    return parser


def _merge_config(args):
    if not args.config:
        return args
    with open(args.config, encoding="utf-8") as fh:
        conf = json.load(fh)
    if not isinstance(conf, dict):
        raise ValueError("config file must hold a JSON object")
    defaults = build_parser().parse_args([args.command])
    for key, value in conf.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ValueError(f"unknown config key {key!r}")
        if getattr(args, attr) == getattr(defaults, attr, None):
            setattr(args, attr, value)
    return args


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args = _merge_config(args)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.handler(args)
    except IrreducibleSet as exc:
        print(f"irreducible point set: {exc}", file=sys.stderr)
        return 4
    except GaborError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
