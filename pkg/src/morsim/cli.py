"""Command-line front end: fringe/visibility/envelope/sensitivity sweeps as
deterministic CSV, plus the self-verification suite.

Exit codes: 0 success, 1 validation error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import oracles, verify
from .detection import (
    FringeSeries,
    ObservableKind,
    ObservableSpec,
    evaluate,
    fringe_scan,
    min_detectable_angle,
    visibility,
)
from .fock import Mode
from .medium import Geometry, MediumSpec
from .sources import SourceKind, SourceSpec

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

SOURCE_NAMES = {
    "coherent": SourceKind.COHERENT,
    "collinear": SourceKind.COLLINEAR_PDC,
    "noncollinear": SourceKind.NONCOLLINEAR_PDC,
}
OBSERVABLE_NAMES = {
    "intensity": ObservableKind.INTENSITY,
    "two-photon": ObservableKind.TWO_PHOTON_COINCIDENCE,
    "four-photon-glauber": ObservableKind.FOUR_PHOTON_GLAUBER,
    "four-photon-projection": ObservableKind.FOUR_PHOTON_PROJECTION,
    "nd-variance": ObservableKind.ND_VARIANCE,
}
MODE_NAMES = {"aH": Mode.AH, "aV": Mode.AV, "bH": Mode.BH, "bV": Mode.BV}


class _Parser(argparse.ArgumentParser):
    # argparse defaults to exit code 2, which is reserved for verification failures
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_csv(path, header: str, rows, comments=()) -> None:
    lines = [header]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    lines.extend(comments)
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _source_from_args(args) -> SourceSpec:
    kind = SOURCE_NAMES[args.source]
    kwargs = {}
    if args.n_max is not None:
        kwargs["n_max"] = args.n_max
    if getattr(args, "epsilon", None) is not None:
        kwargs["epsilon"] = args.epsilon
    return SourceSpec(kind=kind, alpha=complex(args.alpha), r=args.r,
                      phi=getattr(args, "phi", 0.0), **kwargs)


def _geometry_from_args(args, source: SourceSpec) -> Geometry:
    if args.geometry is not None:
        return Geometry(args.geometry)
    if source.kind is SourceKind.NONCOLLINEAR_PDC:
        return Geometry.NONCOLLINEAR
    return Geometry.COLLINEAR


def _observable_from_args(args, geometry: Geometry) -> ObservableSpec:
    kind = OBSERVABLE_NAMES[args.observable]
    if kind is ObservableKind.INTENSITY:
        return ObservableSpec(kind=kind, mode=MODE_NAMES[args.intensity_mode])
    if kind is ObservableKind.FOUR_PHOTON_PROJECTION:
        if args.target is not None:
            try:
                target = tuple(int(part) for part in args.target.split(","))
            except ValueError:
                raise ValueError(f"cannot parse projection target {args.target!r}; "
                                 "expected e.g. 1,1,1,1") from None
        elif geometry is Geometry.NONCOLLINEAR:
            target = (1, 1, 1, 1)
        else:
            target = (2, 2, 0, 0)
        return ObservableSpec(kind=kind, target=target)
    return ObservableSpec(kind=kind)


def _exact_oracle(source: SourceSpec, obs: ObservableSpec, geometry: Geometry):
    """theta -> closed-form value for combinations the model has in closed form."""
    kind, skind = obs.kind, source.kind
    if skind is SourceKind.COHERENT:
        if kind is ObservableKind.INTENSITY and obs.mode == Mode.AH:
            return lambda t: oracles.coherent_intensity_x(abs(source.alpha) ** 2, t)
        if kind is ObservableKind.INTENSITY and obs.mode == Mode.AV:
            return lambda t: oracles.coherent_intensity_y(abs(source.alpha) ** 2, t)
        if kind is ObservableKind.ND_VARIANCE:
            return lambda t: oracles.coherent_nd_variance(abs(source.alpha) ** 2, t)
    if skind is SourceKind.COLLINEAR_PDC:
        if kind is ObservableKind.TWO_PHOTON_COINCIDENCE:
            return lambda t: oracles.collinear_two_photon(source.r, t)
        if kind is ObservableKind.FOUR_PHOTON_GLAUBER:
            return lambda t: oracles.collinear_four_photon_counts(source.r, t)
        if kind is ObservableKind.ND_VARIANCE:
            return lambda t: oracles.collinear_nd_variance(source.r, t)
        if kind is ObservableKind.FOUR_PHOTON_PROJECTION and obs.target == (2, 2, 0, 0):
            return lambda t: oracles.collinear_four_photon_probability(source.r, t)
    if skind is SourceKind.NONCOLLINEAR_PDC:
        if kind is ObservableKind.FOUR_PHOTON_PROJECTION and obs.target == (1, 1, 1, 1):
            return lambda t: oracles.noncollinear_four_photon_probability(source.r, t)
    raise ValueError(f"no closed form for source={source.kind.value} "
                     f"observable={obs.kind.value}; use --mode numeric")


def _grid(lo: float, hi: float, points: int, name: str) -> np.ndarray:
    if points < 2:
        raise ValueError(f"{name} grid needs at least 2 points, got {points}")
    if not lo < hi:
        raise ValueError(f"{name} grid needs min < max, got [{lo}, {hi}]")
    return np.linspace(lo, hi, points)


def cmd_fringe(args) -> int:
    source = _source_from_args(args)
    geometry = _geometry_from_args(args, source)
    obs = _observable_from_args(args, geometry)
    thetas = _grid(args.theta_min, args.theta_max, args.points, "theta")

    numeric = None
    if args.mode in ("numeric", "both"):
        numeric = fringe_scan(source, thetas, geometry, obs,
                              theta_plus=args.theta_plus).values
    exact = None
    if args.mode in ("exact", "both"):
        fn = _exact_oracle(source, obs, geometry)
        exact = [fn(float(t)) for t in thetas]

    if args.mode == "numeric":
        _write_csv(args.out, "theta,value", zip(thetas, numeric))
    elif args.mode == "exact":
        _write_csv(args.out, "theta,value", zip(thetas, exact))
    else:
        _write_csv(args.out, "theta,value,value_exact", zip(thetas, numeric, exact))
    return 0


def cmd_visibility(args) -> int:
    r_grid = _grid(args.r_min, args.r_max, args.points, "r")
    if args.r_min <= 0:
        raise ValueError("visibility sweep needs r > 0")
    thetas = np.linspace(0.0, math.pi, args.theta_points)
    obs_kind = OBSERVABLE_NAMES[args.observable]
    rows = []
    for r in map(float, r_grid):
        if args.mode == "exact":
            if obs_kind is ObservableKind.TWO_PHOTON_COINCIDENCE:
                values = [oracles.collinear_two_photon(r, float(t)) for t in thetas]
            else:
                values = [oracles.collinear_four_photon_counts(r, float(t)) for t in thetas]
            series = FringeSeries(theta_grid=tuple(map(float, thetas)),
                                  values=tuple(values))
        else:
            source = SourceSpec(kind=SourceKind.COLLINEAR_PDC, r=r, n_max=args.n_max)
            series = fringe_scan(source, thetas, Geometry.COLLINEAR,
                                 ObservableSpec(kind=obs_kind))
        rows.append((r, visibility(series).v))
    _write_csv(args.out, "r,visibility", rows)
    return 0


def _golden_section_max(fn, lo: float, hi: float, tol: float = 1e-12) -> tuple[float, float]:
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = fn(d)
    x = 0.5 * (a + b)
    return x, fn(x)


def cmd_envelope(args) -> int:
    r_grid = _grid(args.r_min, args.r_max, args.points, "r")
    if args.r_min < 0:
        raise ValueError("envelope sweep needs r >= 0")
    geometry = Geometry(args.geometry)
    if geometry is Geometry.NONCOLLINEAR:
        target, kind = (1, 1, 1, 1), SourceKind.NONCOLLINEAR_PDC
        exact = lambda r: oracles.noncollinear_four_photon_probability(r, 0.0)
    else:
        target, kind = (2, 2, 0, 0), SourceKind.COLLINEAR_PDC
        exact = lambda r: oracles.collinear_four_photon_probability(r, 0.0)
    obs = ObservableSpec(kind=ObservableKind.FOUR_PHOTON_PROJECTION, target=target)

    if args.mode == "exact":
        value_at = exact
    else:
        def value_at(r: float) -> float:
            # the projection only sees the four-photon sector, so this is
            # exact at any r without a deep truncation
            return evaluate(SourceSpec(kind=kind, r=r), MediumSpec(theta=0.0), geometry, obs)

    values = [value_at(float(r)) for r in r_grid]
    best = int(np.argmax(values))
    lo = float(r_grid[max(best - 1, 0)])
    hi = float(r_grid[min(best + 1, len(r_grid) - 1)])
    argmax_r, max_value = _golden_section_max(value_at, lo, hi)
    _write_csv(args.out, "r,value", zip(r_grid, values),
               comments=[f"# argmax_r={_fmt(argmax_r)},max_value={_fmt(max_value)}"])
    return 0


def cmd_sensitivity(args) -> int:
    if args.points < 2:
        raise ValueError(f"mean_n grid needs at least 2 points, got {args.points}")
    if args.mean_n_min <= 1.0:
        raise ValueError("sensitivity sweep needs mean photon numbers above 1")
    if not args.mean_n_min < args.mean_n_max:
        raise ValueError("mean_n grid needs min < max")
    mean_n = np.geomspace(args.mean_n_min, args.mean_n_max, args.points)
    kind = SOURCE_NAMES[args.source]
    if kind is SourceKind.NONCOLLINEAR_PDC:
        raise ValueError("sensitivity sweep supports coherent and collinear sources")
    rows = []
    for n in map(float, mean_n):
        if kind is SourceKind.COHERENT:
            source = SourceSpec(kind=kind, alpha=math.sqrt(n))
        else:
            source = SourceSpec(kind=kind, r=math.asinh(math.sqrt(n / 2.0)))
        rows.append((n, min_detectable_angle(source)))
    slope = float(np.polyfit(np.log([r[0] for r in rows]),
                             np.log([r[1] for r in rows]), 1)[0])
    _write_csv(args.out, "mean_n,theta_m", rows,
               comments=[f"# loglog_slope={_fmt(slope)}"])
    return 0


def cmd_verify(args) -> int:
    results = verify.run_all()
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"[{status}] {res.name}: max_error={res.max_error:.3e} "
              f"tolerance={res.tolerance:.0e} ({res.detail})")
    failed = [res for res in results if not res.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 2 if failed else 0


def _add_source_flags(parser, with_phi=True):
    parser.add_argument("--source", choices=sorted(SOURCE_NAMES), default="collinear",
                        help="input light source")
    parser.add_argument("--alpha", type=float, default=1.0,
                        help="coherent amplitude (coherent source only)")
    parser.add_argument("--r", type=float, default=0.5,
                        help="PDC interaction parameter")
    if with_phi:
        parser.add_argument("--phi", type=float, default=0.0,
                            help="pump phase (collinear PDC only)")
    parser.add_argument("--n-max", type=int, default=None,
                        help="retained photon pairs; default: automatic from --epsilon")
    parser.add_argument("--epsilon", type=float, default=None,
                        help="target truncation bound for automatic n_max")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="morsim",
                     description="Magneto-optical rotation sweeps with coherent "
                                 "and down-converted light")
    sub = parser.add_subparsers(dest="command", required=True)

    fringe = sub.add_parser("fringe", help="observable vs rotation angle", parents=[])
    _add_source_flags(fringe)
    fringe.add_argument("--geometry", choices=[g.value for g in Geometry], default=None,
                        help="medium geometry; default inferred from the source")
    fringe.add_argument("--observable", choices=sorted(OBSERVABLE_NAMES),
                        default="two-photon")
    fringe.add_argument("--intensity-mode", choices=sorted(MODE_NAMES), default="aH",
                        help="detector mode for the intensity observable")
    fringe.add_argument("--target", default=None,
                        help="projection target occupation, e.g. 1,1,1,1")
    fringe.add_argument("--theta-plus", type=float, default=0.0,
                        help="global phase angle k*l*chi_plus")
    fringe.add_argument("--theta-min", type=float, default=0.0)
    fringe.add_argument("--theta-max", type=float, default=2.0 * math.pi)
    fringe.add_argument("--points", type=int, default=201)
    fringe.add_argument("--mode", choices=["numeric", "exact", "both"], default="numeric")
    fringe.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    fringe.set_defaults(func=cmd_fringe)

    vis = sub.add_parser("visibility", help="fringe visibility vs interaction parameter")
    vis.add_argument("--observable", choices=["two-photon", "four-photon-glauber"],
                     default="two-photon")
    vis.add_argument("--r-min", type=float, default=0.01)
    vis.add_argument("--r-max", type=float, default=3.0)
    vis.add_argument("--points", type=int, default=60)
    vis.add_argument("--theta-points", type=int, default=513,
                     help="fringe samples per period used for the extremes")
    vis.add_argument("--n-max", type=int, default=None)
    vis.add_argument("--mode", choices=["numeric", "exact"], default="exact")
    vis.add_argument("--out", default=None)
    vis.set_defaults(func=cmd_visibility)

    env = sub.add_parser("envelope", help="four-photon probability envelope vs r")
    env.add_argument("--geometry", choices=[g.value for g in Geometry],
                     default="noncollinear")
    env.add_argument("--r-min", type=float, default=0.0)
    env.add_argument("--r-max", type=float, default=3.0)
    env.add_argument("--points", type=int, default=121)
    env.add_argument("--mode", choices=["numeric", "exact"], default="numeric")
    env.add_argument("--out", default=None)
    env.set_defaults(func=cmd_envelope)

    sens = sub.add_parser("sensitivity", help="minimum detectable angle vs mean photons")
    sens.add_argument("--source", choices=["coherent", "collinear"], default="collinear")
    sens.add_argument("--mean-n-min", type=float, default=10.0)
    sens.add_argument("--mean-n-max", type=float, default=1.0e4)
    sens.add_argument("--points", type=int, default=25)
    sens.add_argument("--out", default=None)
    sens.set_defaults(func=cmd_sensitivity)

    ver = sub.add_parser("verify", help="run the oracle-equivalence and invariant suite")
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    raise SystemExit(main(sys.argv[1:]))
