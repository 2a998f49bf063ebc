"""Command line front end: ``hupsphere {check-cone, transform, verify}``.

Exit codes: 0 success / non-harmonic / suite passed, 2 harmonic cone or
failed suite, 1 internal error, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import quad
from .hup import ConeSpec, LambdaSet, armitage_test, harmonic_cone_witnesses, mu_hat, mu_hat_series
from .reports import Report, points_csv
from .sphharm import HarmonicCoefficients, SphericalDensity, dim_harmonic
from .suites import SUITES

log = logging.getLogger("hupsphere")

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2, 64

# check-cone default: alpha typed to ~5 digits (0.57735 for 1/sqrt 3) puts the
# Gegenbauer value near 1e-7 relative, far above the library default of 1e-10
CHECK_CONE_TOL = 1e-6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    subcommand: str
    n: int = 3
    l_max: int = 8
    order: int | None = None
    tol: float | None = None
    seed: int = 0
    out: str | None = None
    fmt: str = "json"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not quad.MIN_DIM <= self.n <= quad.MAX_DIM:
            raise UsageError(f"--n must be in [{quad.MIN_DIM}, {quad.MAX_DIM}]")
        if self.l_max < 0:
            raise UsageError("--lmax must be non-negative")
        if self.tol is not None and not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.order is not None and self.order < 2 * self.l_max:
            raise UsageError("--order must be at least 2 * lmax")


def _common(p):
    p.add_argument("--n", type=int, default=3, help="ambient dimension (2..6)")
    p.add_argument("--lmax", type=int, default=8, help="maximal harmonic degree")
    p.add_argument("--order", type=int, default=None, help="quadrature exactness degree")
    p.add_argument("--tol", type=float, default=None, help="verdict tolerance")
    p.add_argument("--seed", type=int, default=0, help="seed for random probes")
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--format", dest="fmt", choices=["json", "csv"], default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hupsphere", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    cone = sub.add_parser("check-cone", help="decide whether a cone is harmonic up to --lmax")
    _common(cone)
    cone.add_argument("--family", choices=["k-alpha", "hyperplane", "random"], default="k-alpha")
    cone.add_argument("--alpha", type=float, default=None)
    cone.add_argument("--count", type=int, default=None, help="number of direction samples")

    tr = sub.add_parser("transform", help="sample mu_hat of a density on a test set")
    _common(tr)
    tr.add_argument("--density", choices=["constant", "eta1", "ylm"], default="constant")
    tr.add_argument("--k", type=int, default=0)
    tr.add_argument("--l", type=int, default=0)
    tr.add_argument("--lambda", dest="lam",
                    choices=["sphere", "cone-hyperplane", "cone-k-alpha", "paraboloid",
                             "geodesic-circle", "planar-parabola", "points"],
                    default="sphere")
    tr.add_argument("--radius", type=float, default=math.pi)
    tr.add_argument("--alpha", type=float, default=None)
    tr.add_argument("--R", type=float, default=None)
    tr.add_argument("--count", type=int, default=100)
    tr.add_argument("--max-radius", type=float, default=10.0)
    tr.add_argument("--points", default=None, help="explicit points 'x1,x2,..;y1,y2,..'")
    tr.add_argument("--method", choices=["quadrature", "series"], default="quadrature")

    ver = sub.add_parser("verify", help="run an invariant suite")
    _common(ver)
    ver.add_argument("--suite", required=True)
    ver.add_argument("--probes", type=int, default=None)
    return parser


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def cmd_check_cone(cfg: RunConfig) -> int:
    family, alpha = cfg.extra["family"], cfg.extra["alpha"]
    count = cfg.extra["count"]
    if family == "k-alpha":
        if alpha is None or not 0.0 < alpha < 1.0:
            raise UsageError("--alpha in (0, 1) is required for the k-alpha family")
        cone = ConeSpec.k_alpha(alpha, cfg.n, l_max=cfg.l_max, count=count, seed=cfg.seed)
    elif family == "hyperplane":
        cone = ConeSpec.hyperplane(cfg.n, l_max=cfg.l_max, count=count, seed=cfg.seed)
    else:
        cone = ConeSpec.random(cfg.n, count or 4 * dim_harmonic(cfg.n, cfg.l_max), seed=cfg.seed)
    tol = cfg.tol if cfg.tol is not None else CHECK_CONE_TOL
    witnesses = harmonic_cone_witnesses(cone, cfg.l_max, threshold=tol)
    harmonic = bool(witnesses)
    diagnostics = [{
        "witness_degree": witnesses[0].degree if witnesses else None,
        "witnesses": [{"degree": w.degree, "residual": w.residual, "terms": w.terms()} for w in witnesses],
    }]
    verdict = "harmonic" if harmonic else "non-harmonic"
    if family == "k-alpha" and cfg.n >= 3:
        arm = armitage_test(alpha, cfg.n, cfg.l_max, tol=tol)
        diagnostics.append({"armitage": {"verdict": arm.verdict, "violation": arm.violation,
                                         "smallest_relative": arm.smallest}})
        if arm.non_harmonic == harmonic:
            verdict = "inconsistent"
    report = Report(
        "check_cone",
        {"family": family, "alpha": alpha, "n": cfg.n, "l_max": cfg.l_max,
         "directions": len(cone.directions), "seed": cfg.seed},
        verdict,
        diagnostics=diagnostics,
        residuals=[{"degree": w.degree, "residual": w.residual} for w in witnesses],
        tolerances={"rank_threshold": tol},
    )
    _emit(report.to_json(), cfg.out)
    if verdict == "inconsistent":
        return EXIT_ERROR
    return EXIT_NEGATIVE if harmonic else EXIT_OK


def _parse_points(text: str | None, n: int) -> np.ndarray:
    if text is None or not text.strip():
        raise UsageError("the point list is empty")
    rows = [r for r in text.split(";") if r.strip()]
    try:
        pts = np.array([[float(v) for v in r.split(",")] for r in rows])
    except ValueError as exc:
        raise UsageError(f"cannot parse points: {exc}") from None
    if pts.ndim != 2 or pts.shape[1] != n:
        raise UsageError(f"points must have {n} coordinates each")
    return pts


def _lambda_points(cfg: RunConfig) -> np.ndarray:
    e = cfg.extra
    lam, n = e["lam"], cfg.n
    if e["count"] < 1 and lam != "points":
        raise UsageError("--count must be positive")
    if lam == "sphere":
        return LambdaSet.sphere(e["radius"], n).sample(e["count"], cfg.seed)
    if lam == "cone-hyperplane":
        spec = ConeSpec.hyperplane(n, l_max=cfg.l_max, seed=cfg.seed)
        return LambdaSet.cone(spec, e["max_radius"]).sample(e["count"], cfg.seed)
    if lam == "cone-k-alpha":
        if e["alpha"] is None or not 0.0 < e["alpha"] < 1.0:
            raise UsageError("--alpha in (0, 1) is required")
        spec = ConeSpec.k_alpha(e["alpha"], n, l_max=cfg.l_max, seed=cfg.seed)
        return LambdaSet.cone(spec, e["max_radius"]).sample(e["count"], cfg.seed)
    if lam == "paraboloid":
        if n != 3:
            raise UsageError("the paraboloid lives in R^3")
        return LambdaSet.paraboloid().sample(e["count"], cfg.seed, e["max_radius"])
    if lam == "geodesic-circle":
        if n != 3 or e["alpha"] is None or e["R"] is None:
            raise UsageError("geodesic-circle needs --n 3, --alpha and --R")
        return LambdaSet.geodesic_circle(e["alpha"], e["R"]).sample(e["count"], cfg.seed)
    if lam == "planar-parabola":
        if n != 2:
            raise UsageError("the planar parabola lives in R^2")
        return LambdaSet.planar_parabola().sample(e["count"], cfg.seed, e["max_radius"])
    return _parse_points(e["points"], n)


def _density(cfg: RunConfig):
    e, n = cfg.extra, cfg.n
    if e["density"] == "constant":
        return SphericalDensity.constant(n), HarmonicCoefficients.from_dict(0, {(0, 0): 1.0})
    if e["density"] == "eta1":
        f = SphericalDensity.from_function(n, lambda p: np.asarray(p)[..., 0].astype(complex), degree=1)
        # eta_1 = (Y_1^{-1} * 2 - Y_1^1) / 2 in the Condon-Shortley basis
        return f, HarmonicCoefficients.from_dict(1, {(1, 1): -0.5, (1, -1): 1.0})
    if n != 3:
        raise UsageError("--density ylm needs --n 3")
    if not abs(e["l"]) <= e["k"]:
        raise UsageError("--density ylm needs |l| <= k")
    c = HarmonicCoefficients.from_dict(e["k"], {(e["k"], e["l"]): 1.0})
    return SphericalDensity.from_coefficients(c), c


def cmd_transform(cfg: RunConfig) -> int:
    pts = _lambda_points(cfg)
    if len(pts) == 0:
        raise UsageError("the point list is empty")
    f, table = _density(cfg)
    if cfg.extra["method"] == "series":
        if cfg.n != 3:
            raise UsageError("--method series needs --n 3")
        values = mu_hat_series(table, pts)
    else:
        r_max = float(np.max(np.linalg.norm(pts, axis=1)))
        degree = f.degree if cfg.order is None else cfg.order // 2
        rule = quad.sphere_rule(cfg.n, cfg.order or (degree + int(math.ceil(r_max)) + 32))
        values = mu_hat(f, pts, rule)
    fmt = cfg.fmt or "csv"
    if fmt == "csv":
        _emit(points_csv(pts, values), cfg.out)
    else:
        report = Report(
            "transform",
            {"density": cfg.extra["density"], "lambda": cfg.extra["lam"], "n": cfg.n,
             "points": len(pts), "method": cfg.extra["method"], "seed": cfg.seed},
            "reported",
            diagnostics=[{"max_abs": float(np.max(np.abs(values)))}],
            residuals=[{"point": p, "re": float(v.real), "im": float(v.imag), "abs": float(abs(v))}
                       for p, v in zip(pts, values)],
        )
        _emit(report.to_json(), cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    name = cfg.extra["suite"]
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}")
    kwargs = {"seed": cfg.seed}
    if cfg.tol is not None:
        kwargs["tol"] = cfg.tol
    probes = cfg.extra["probes"]
    if name in ("funk-hecke", "geodesic"):
        kwargs.update(n=cfg.n, l_max=cfg.l_max)
    elif name == "planewave":
        kwargs.update(n=cfg.n, j_max=cfg.l_max)
    elif name == "lemma":
        kwargs.pop("tol", None)
        kwargs.update(band=cfg.l_max)
        if probes is not None:
            kwargs["count"] = probes
            probes = None
    elif cfg.n != 3:
        raise UsageError(f"suite {name!r} runs in n = 3 only")
    if probes is not None:
        kwargs["probes"] = probes
    if cfg.order is not None and name in ("funk-hecke", "geodesic", "planewave"):
        kwargs["order"] = cfg.order
    report = SUITES[name](**kwargs)
    _emit(report.to_json(), cfg.out)
    return EXIT_OK if report.verdict == "pass" else EXIT_NEGATIVE


COMMANDS = {"check-cone": cmd_check_cone, "transform": cmd_transform, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    skip = {"subcommand", "n", "lmax", "order", "tol", "seed", "out", "fmt", "verbose"}
    extra = {k: v for k, v in vars(args).items() if k not in skip}
    try:
        cfg = RunConfig(args.subcommand, args.n, args.lmax, args.order, args.tol, args.seed,
                        args.out, args.fmt, extra)
        return COMMANDS[args.subcommand](cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hupsphere: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        log.debug("failure", exc_info=True)
        print(f"hupsphere: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
