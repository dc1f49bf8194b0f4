"""Command-line front end emitting CSV for external plotting.

Subcommands: ``density`` (pointwise density values), ``expect`` (expected
count tables), ``mc`` (Monte Carlo summaries plus location histograms),
``verify`` (identity/bound/monotonicity suites), and ``gdensity``
(frequency-coordinate densities).

Every output starts with a schema line and a commented manifest (command,
parameters, seed, version, duration, body checksum); the data body below the
header is byte-identical across reruns with the same arguments and seed.
Exit codes: 0 success, 1 verification failure, 2 usage error, 3
capacity/convergence error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .density import (
    DensityPoint,
    f2d,
    f_elliptic,
    fn2,
    fnd_general,
    g2d,
)
from .errors import CapacityError, ConvergenceError
from .expectation import (
    QuadratureConfig,
    asymptotic_ratio,
    bernstein_expected,
    expected_count_2d,
    expected_count_nd,
    stable_expected_2d,
)
from .montecarlo import IndependentBeta, MCConfig, PayoffAlpha, run_mc
from .poly_core import GameDims
from .suites import SUITE_NAMES, run_suite

_FMT = "%.17g"


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return _FMT % float(x)


def _parse_grid(spec):
    """lo:hi:count[:linear|log] -> array of grid points."""
    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise ValueError(f"grid must be lo:hi:count[:linear|log], got {spec!r}")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    kind = parts[3] if len(parts) == 4 else "linear"
    if count < 1 or hi < lo or (hi == lo and count > 1):
        raise ValueError(f"invalid grid {spec!r}")
    if kind == "linear":
        return np.linspace(lo, hi, count)
    if kind == "log":
        if lo <= 0:
            raise ValueError("log grid requires lo > 0")
        return np.geomspace(lo, hi, count)
    raise ValueError(f"unknown grid kind {kind!r}")


def _parse_drange(spec):
    """'2:5' -> [2..5]; '7' -> [7]."""
    if ":" in spec:
        a, b = spec.split(":")
        lo, hi = int(a), int(b)
        if hi < lo:
            raise ValueError(f"empty d range {spec!r}")
        return list(range(lo, hi + 1))
    return [int(spec)]


@dataclass(frozen=True)
class RunManifest:
    """Provenance header emitted above every CSV body.

    The checksum covers the body alone (header row + data rows), so reruns
    with identical arguments and seed are byte-identical below the manifest
    even though the recorded duration varies.
    """

    command: str
    params: dict
    seed: object
    version: str
    duration_s: float
    body_sha256: str

    def lines(self):
        return [
            f"# schema=eqdense.{self.command} v1",
            f"# command={self.command}",
            "# params=" + " ".join(f"{k}={v}" for k, v in sorted(self.params.items())),
            f"# seed={self.seed if self.seed is not None else '-'}",
            f"# version={self.version}",
            f"# duration_s={self.duration_s:.6f}",
            f"# body_sha256={self.body_sha256}",
        ]


def _write_csv(args, command, params, header, rows, seed=None):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    body = buf.getvalue()
    manifest = RunManifest(
        command=command,
        params=params,
        seed=seed,
        version=__version__,
        duration_s=time.perf_counter() - args._t0,
        body_sha256=hashlib.sha256(body.encode()).hexdigest(),
    )
    text = "\n".join(manifest.lines()) + "\n" + body
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cfg_from(args):
    return QuadratureConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol)


def _cmd_density(args):
    n = args.n
    dims = GameDims(n, args.d)
    if args.t:
        pts = [np.array([float(x) for x in spec.split(",")]) for spec in args.t]
        for p in pts:
            if p.size != n - 1:
                raise ValueError(f"each --t needs {n - 1} coordinates")
    elif args.grid:
        axis = _parse_grid(args.grid)
        if n == 2:
            pts = [np.array([t]) for t in axis]
        else:
            mesh = np.meshgrid(*([axis] * (n - 1)), indexing="ij")
            pts = list(np.stack([m.reshape(-1) for m in mesh], axis=-1))
    else:
        raise ValueError("density requires --grid or --t")
    form = args.formulation
    rows = []
    for p in pts:
        if form == "general":
            val = fnd_general(dims, p)
        elif form == "elliptic":
            val = f_elliptic(dims, p)
        elif n == 2:
            val = f2d(args.d, float(p[0]), formulation=form)
        elif args.d == 2 and form in ("auto", "closed"):
            val = fn2(n, p)
        else:
            val = fnd_general(dims, p)
        point = DensityPoint(t=tuple(float(x) for x in p), value=val)
        rows.append(list(point.t) + [point.value])
    header = [f"t{i + 1}" for i in range(n - 1)] + ["f"]
    _write_csv(args, "density", {
        "n": n, "d": args.d, "formulation": form,
        "grid": args.grid or "-", "t": ";".join(args.t) if args.t else "-",
    }, header, rows)
    return 0


def _cmd_expect(args):
    cfg = _cfg_from(args)
    rows = []
    for d in _parse_drange(args.d):
        dims = GameDims(args.n, d)
        if args.n == 2:
            res = expected_count_2d(d, cfg)
            se = stable_expected_2d(d, cfg)
            eb = bernstein_expected(d, cfg)
        else:
            res = expected_count_nd(dims, cfg)
            se = None
            eb = None
        ratio = asymptotic_ratio(args.n, d, cfg) if d > 2 else None
        rows.append([d, res.value, res.error_estimate, se, eb, ratio])
    _write_csv(args, "expect", {
        "n": args.n, "d": args.d,
        "rel_tol": args.rel_tol, "abs_tol": args.abs_tol,
    }, ["d", "E", "err", "SE", "E_B", "ratio"], rows)
    return 0


def _cmd_mc(args):
    mode = IndependentBeta() if args.mode == "beta" else PayoffAlpha(std=args.std)
    workers = int(os.environ.get("EQDENSE_THREADS", args.workers))
    cfg = MCConfig(samples=args.samples, seed=args.seed, mode=mode, workers=workers)
    dims = GameDims(args.n, args.d)
    res = run_mc(dims, cfg, bins=args.bins)
    stable_fraction = (
        res.stable_mean / res.mean_count
        if res.stable_mean is not None and res.mean_count > 0
        else None
    )
    header = [
        "kind", "mean_count", "std_error", "stable_fraction", "samples",
        "samples_failed", "bin_lo_1", "bin_hi_1", "bin_lo_2", "bin_hi_2",
        "count", "density",
    ]
    rows = [[
        "summary", res.mean_count, res.std_error, stable_fraction,
        res.samples, res.samples_failed, None, None, None, None,
        res.total_equilibria, None,
    ]]
    hist = res.histogram
    dens = hist.density()
    if args.n == 2:
        edges = hist.edges[0]
        for i, c in enumerate(hist.counts):
            rows.append(["hist", None, None, None, None, None,
                         edges[i], edges[i + 1], None, None,
                         int(c), dens[i]])
    else:
        e1, e2 = hist.edges
        for i in range(hist.counts.shape[0]):
            for j in range(hist.counts.shape[1]):
                if hist.counts[i, j]:
                    rows.append(["hist", None, None, None, None, None,
                                 e1[i], e1[i + 1], e2[j], e2[j + 1],
                                 int(hist.counts[i, j]), dens[i, j]])
    _write_csv(args, "mc", {
        "n": args.n, "d": args.d, "samples": args.samples, "mode": args.mode,
        "std": args.std, "workers": workers, "bins": args.bins,
    }, header, rows, seed=args.seed)
    return 0


def _cmd_verify(args):
    kwargs = {}
    if args.d:
        ds = _parse_drange(args.d)
        kwargs["d_lo"], kwargs["d_hi"] = ds[0], ds[-1]
    if args.grid:
        kwargs["grid"] = int(args.grid)
    rows = run_suite(args.suite, **kwargs)
    out = [[r.check_id, r.location, r.lhs, r.rhs, r.margin, r.status] for r in rows]
    _write_csv(args, "verify", {
        "suite": args.suite, "d": args.d or "-", "grid": args.grid or "-",
    }, ["check_id", "location", "lhs", "rhs", "margin", "status"], out)
    return 1 if any(r.status == "fail" for r in rows) else 0


def _cmd_gdensity(args):
    if args.n == 2:
        ys = _parse_grid(args.grid) if args.grid else np.linspace(0.02, 0.98, 49)
        rows = [[float(y), g2d(args.d, float(y))] for y in ys]
        header = ["y", "g"]
    else:
        axis = _parse_grid(args.grid) if args.grid else np.linspace(0.02, 0.98, 25)
        if np.any(axis <= 0.0) or np.any(axis >= 1.0):
            raise ValueError("frequency grid must lie strictly inside (0, 1)")
        dims = GameDims(3, args.d)
        rows = []
        for y1 in axis:
            for y2 in axis:
                rest = 1.0 - y1 - y2
                if rest <= 0.0:
                    continue
                t = np.array([y1 / rest, y2 / rest])
                val = fnd_general(dims, t) / rest**3
                rows.append([float(y1), float(y2), val])
        header = ["y1", "y2", "g"]
    _write_csv(args, "gdensity", {
        "n": args.n, "d": args.d, "grid": args.grid or "-",
    }, header, rows)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="eqdense",
        description="Expected density and number of internal equilibria of "
                    "random evolutionary games.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", help="density values on a grid or at points")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--grid", help="lo:hi:count[:linear|log]")
    p.add_argument("--t", action="append",
                   help="explicit point, comma-separated (repeatable)")
    p.add_argument("--formulation", default="auto",
                   choices=["auto", "G", "legendre", "legendre-pair", "closed",
                            "general", "elliptic"])
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("expect", help="expected-count table over a d range")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--d", required=True, help="single d or lo:hi")
    p.add_argument("--rel-tol", type=float, default=1e-8, dest="rel_tol")
    p.add_argument("--abs-tol", type=float, default=1e-10, dest="abs_tol")
    p.set_defaults(func=_cmd_expect)

    p = sub.add_parser("mc", help="Monte Carlo sampling summary + histogram")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mode", choices=["beta", "alpha"], default="beta")
    p.add_argument("--std", type=float, default=0.5)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--bins", type=int, default=None)
    p.set_defaults(func=_cmd_mc)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", required=True, choices=sorted(SUITE_NAMES))
    p.add_argument("--d", help="single d or lo:hi")
    p.add_argument("--grid", help="number of grid points")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("gdensity", help="density in frequency coordinates")
    p.add_argument("--n", type=int, default=2, choices=[2, 3])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--grid", help="lo:hi:count[:linear|log] in y")
    p.set_defaults(func=_cmd_gdensity)

    for sp in sub.choices.values():
        sp.add_argument("--out", help="write CSV here instead of stdout")
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    args._t0 = time.perf_counter()
    try:
        return args.func(args)
    except (CapacityError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
