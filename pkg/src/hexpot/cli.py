"""Command line interface: ``hexpot solve | verify | sweep``.

All commands read a JSON problem configuration validated against the
packaged schema.  Outputs are written atomically (temp file plus rename)
so a crashed run never leaves a half-written artifact, and everything
except ``timings.json`` is byte-reproducible for a fixed configuration.

Exit codes: 0 success, 2 unusable configuration, 3 mathematical
precondition violated, 4 numerical failure, 5 verification suite failed
(the report is still written).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from importlib import resources

import numpy as np
from jsonschema import Draft202012Validator

from . import errors as err
from .data import ManufacturedData, TrigData, ZeroData, _eval_trig
from .geometry import encloses, make_curve, sample_nodes
from .jumps import calibrate_jumps
from .kernels import KERNEL_IDS, eval_kernel_laplacian_power, make_context, verify_decay_bound
from .solver import analyticity_check, solve_bvp
from .spectral import Coefficients

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PRECONDITION = 3
EXIT_NUMERICS = 4
EXIT_VERIFY_FAILED = 5

_PRECONDITION_ERRORS = (
    err.DomainError,
    err.SectorConditionViolated,
    err.NonDistinctRoots,
    err.ZeroRoot,
    err.IrregularCurve,
    err.SelfIntersection,
    err.MissingNormal,
    err.SingularPoint,
    err.TooCloseToBoundary,
)

_NUMERICAL_ERRORS = (
    err.Divergence,
    err.MaxIterExceeded,
    err.NearSingularSystem,
    err.ConvergenceFailure,
    err.CalibrationMismatch,
    err.SingularJump,
    err.BoundViolated,
)


def _limit_threads() -> None:
    raw = os.environ.get("HEXPOT_NUM_THREADS")
    if not raw:
        return
    try:
        k = int(raw)
    except ValueError:
        raise err.DomainError(f"HEXPOT_NUM_THREADS must be an integer, got {raw!r}")
    import threadpoolctl

    threadpoolctl.threadpool_limits(limits=k)


def _as_complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    return complex(v[0], v[1])


def _complex_out(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _packaged_schema(name: str) -> dict:
    return json.loads(
        resources.files("hexpot").joinpath(name).read_text(encoding="utf-8")
    )


def bundled_config_path(name: str) -> str:
    """Filesystem path of a configuration shipped with the package.

    Currently ``manufactured`` is the only bundled problem; it drives the
    planted-density round trip on the ellipse.
    """
    p = resources.files("hexpot").joinpath("configs").joinpath(f"{name}.json")
    if not p.is_file():
        raise err.DomainError(f"no bundled configuration named {name!r}")
    return str(p)


def load_config(path: str) -> dict:
    """Read and schema-validate a configuration, filling in defaults."""
    with open(path, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    schema = _packaged_schema("config_schema.json")
    validator = Draft202012Validator(schema)
    problems = sorted(validator.iter_errors(cfg), key=lambda e: list(e.absolute_path))
    if problems:
        msgs = "; ".join(
            f"{'/'.join(str(p) for p in e.absolute_path) or '<root>'}: {e.message}"
            for e in problems[:5]
        )
        raise ValueError(f"configuration does not match the schema: {msgs}")
    cfg.setdefault("n_nodes", 256)
    cfg.setdefault("method", "neumann")
    cfg.setdefault("tol", 1e-10)
    cfg.setdefault("max_iter", 200)
    cfg.setdefault("oversample", 8)
    cfg.setdefault("stencil", 8)
    cfg.setdefault("lowmode_cutoff", None)
    cfg.setdefault("sector", {})
    cfg["sector"].setdefault("radius", 1.0)
    cfg["sector"].setdefault("delta", float(np.pi / 16.0))
    return cfg


def _build_problem(cfg: dict):
    co = cfg["coefficients"]
    coeffs = Coefficients(
        a0=_as_complex(co["a0"]), a1=_as_complex(co["a1"]), a2=_as_complex(co["a2"])
    )
    curve = make_curve(cfg["curve"]["kind"], cfg["curve"].get("params", {}))
    lam = _as_complex(cfg["lam"])
    dcfg = cfg["data"]
    if dcfg["kind"] == "zero":
        data = ZeroData()
    elif dcfg["kind"] == "trig":
        data = TrigData(modes=tuple(dcfg["modes"]), pole=float(dcfg.get("pole", 10.0)))
    else:
        mode_lists = dcfg["densities"]
        densities = tuple(
            (lambda t, m=m: _eval_trig(m, np.asarray(t, dtype=float))) for m in mode_lists
        )
        data = ManufacturedData(
            curve=curve,
            coeffs=coeffs,
            densities=densities,
            n_fine=int(dcfg.get("n_fine", 8192)),
            sector_radius=float(cfg["sector"]["radius"]),
            sector_delta=float(cfg["sector"]["delta"]),
        )
    return coeffs, curve, lam, data


def _atomic_write(path: str, text: str) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_json(path: str, payload) -> None:
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def _eval_points(cfg: dict, solution) -> np.ndarray:
    grid = cfg.get("eval_grid", {})
    if "points" in grid:
        return np.asarray(grid["points"], dtype=float)
    nx, ny = int(grid.get("nx", 8)), int(grid.get("ny", 8))
    curve = solution.nodes.curve
    t = 2.0 * np.pi * np.arange(512) / 512
    bdry = curve.position(t)
    xs = np.linspace(bdry[:, 0].min(), bdry[:, 0].max(), nx + 2)[1:-1]
    ys = np.linspace(bdry[:, 1].min(), bdry[:, 1].max(), ny + 2)[1:-1]
    pts = np.array([[x, y] for x in xs for y in ys])
    inside = encloses(curve, pts)
    clear = solution.nodes.min_distance(pts) >= 1.02 * solution.clearance
    return pts[inside & clear]


def run_solve(cfg: dict, outdir: str) -> int:
    os.makedirs(outdir, exist_ok=True)
    timings: dict[str, float] = {}

    t0 = time.perf_counter()
    coeffs, curve, lam, data = _build_problem(cfg)
    solution = solve_bvp(
        coeffs,
        curve,
        int(cfg["n_nodes"]),
        lam,
        data,
        method=cfg["method"],
        oversample=int(cfg["oversample"]),
        stencil=int(cfg["stencil"]),
        lowmode_cutoff=cfg["lowmode_cutoff"],
        tol=float(cfg["tol"]),
        max_iter=int(cfg["max_iter"]),
        sector_radius=float(cfg["sector"]["radius"]),
        sector_delta=float(cfg["sector"]["delta"]),
    )
    timings["solve_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    pts = _eval_points(cfg, solution)
    values = solution.evaluate(pts) if len(pts) else np.zeros(0, dtype=complex)
    timings["evaluate_s"] = time.perf_counter() - t0

    rows = ["x1,x2,re_u,im_u"]
    for p, v in zip(pts, values):
        rows.append(",".join([_fmt(p[0]), _fmt(p[1]), _fmt(v.real), _fmt(v.imag)]))
    _atomic_write(os.path.join(outdir, "solution.csv"), "\n".join(rows) + "\n")

    dens = solution.densities
    rows = ["t,node_index,re_mu1,im_mu1,re_mu2,im_mu2,re_mu3,im_mu3"]
    for j, t in enumerate(solution.nodes.params):
        vals = [_fmt(t), str(j)]
        for c in range(3):
            vals += [_fmt(dens[c, j].real), _fmt(dens[c, j].imag)]
        rows.append(",".join(vals))
    _atomic_write(os.path.join(outdir, "densities.csv"), "\n".join(rows) + "\n")

    t0 = time.perf_counter()
    t_checks = np.array([0.13, 2.41, 4.77])
    trace_err = solution.boundary_trace_error(t_checks)
    residual_pde = (
        float(np.max(solution.residual_pde(pts[: min(len(pts), 8)]))) if len(pts) else None
    )
    timings["diagnostics_s"] = time.perf_counter() - t0

    diag = dict(solution.diagnostics)
    diag["roots"] = [_complex_out(z) for z in diag["roots"]]
    diag["jump_constants"] = [[_complex_out(_as_complex_entry(z)) for z in row]
                              for row in diag["jump_constants"]]
    diag["boundary_trace_error"] = trace_err
    diag["max_pde_residual"] = residual_pde
    diag["n_eval_points"] = int(len(pts))
    diag["lam"] = _complex_out(lam)
    diag["config"] = cfg
    if isinstance(data, ManufacturedData):
        planted = data.density_samples(solution.nodes.params)
        scale = max(float(np.max(np.abs(planted))), 1e-30)
        diag["density_recovery_error"] = float(np.max(np.abs(dens - planted))) / scale
    Draft202012Validator(_packaged_schema("diagnostics_schema.json")).validate(diag)
    _write_json(os.path.join(outdir, "diagnostics.json"), diag)
    _write_json(os.path.join(outdir, "timings.json"), timings)
    return EXIT_OK


def _as_complex_entry(z) -> complex:
    if isinstance(z, complex):
        return z
    if isinstance(z, (list, tuple)):
        return complex(z[0], z[1])
    return complex(z)


def _verify_kernels(cfg: dict) -> dict:
    coeffs, _, lam, _ = _build_problem(cfg)
    ctx = make_context(
        coeffs, lam, cfg["sector"]["radius"], cfg["sector"]["delta"]
    )
    c, l2 = ctx.coeffs, ctx.lam
    radii = np.linspace(0.1, 5.0, 20)
    n_y = np.array([0.6, 0.8])
    worst = 0.0
    for kind in KERNEL_IDS:
        for r in radii:
            dx = np.array([r, 0.0])
            terms = [
                eval_kernel_laplacian_power(kind, m, ctx, dx, n_y) for m in range(4)
            ]
            coefs = (l2**6, c.a2 * l2**4, c.a1 * l2**2, c.a0)
            num = abs(sum(cf * t for cf, t in zip(coefs, terms)))
            den = sum(abs(cf * t) for cf, t in zip(coefs, terms)) or 1.0
            worst = max(worst, num / den)
    passed = worst <= 1e-10
    return {"suite": "kernels", "passed": passed, "max_residual": worst, "threshold": 1e-10}


def _verify_decay(cfg: dict) -> dict:
    coeffs, _, _, _ = _build_problem(cfg)
    ctxs = [make_context(coeffs, lam) for lam in (8.0, 16.0, 32.0)]
    fits = []
    ok = True
    for kind in KERNEL_IDS:
        for m in (0, 1, 2):
            fit = verify_decay_bound(kind, m, ctxs, np.linspace(0.05, 3.0, 30))
            ok = ok and fit.margin >= 0.0 and fit.eps > 0.0
            fits.append(
                {"kernel": kind, "m": m, "c": fit.c, "eps": fit.eps, "margin": fit.margin}
            )
    return {"suite": "decay", "passed": ok, "fits": fits}


def _verify_jumps(cfg: dict) -> dict:
    coeffs, curve, lam, _ = _build_problem(cfg)
    ctx = make_context(coeffs, lam, cfg["sector"]["radius"], cfg["sector"]["delta"])
    try:
        cal = calibrate_jumps(ctx, curve)
    except err.CalibrationMismatch as exc:
        return {"suite": "jumps", "passed": False, "error": str(exc)}
    return {
        "suite": "jumps",
        "passed": True,
        "max_mismatch": cal.max_mismatch,
        "threshold": 1e-4,
    }


def _verify_analyticity(cfg: dict) -> dict:
    coeffs, curve, _, data = _build_problem(cfg)
    vcfg = cfg.get("verify", {})
    center = _as_complex(vcfg.get("center", 20.0))
    radius = float(vcfg.get("radius", 2.0))
    n_nodes = int(vcfg.get("n_nodes", 96))
    n_samples = int(vcfg.get("n_samples", 16))
    report = analyticity_check(
        coeffs, curve, n_nodes, data, center, radius,
        x=np.array([0.2, 0.1]), n_samples=n_samples,
        sector_radius=cfg["sector"]["radius"], sector_delta=cfg["sector"]["delta"],
    )
    return {
        "suite": "analyticity",
        "passed": report.defect <= 1e-6,
        "defect": report.defect,
        "threshold": 1e-6,
        "center_value": _complex_out(report.center_value),
    }


def _verify_convergence(cfg: dict) -> dict:
    coeffs, curve, lam, data = _build_problem(cfg)
    ref = solve_bvp(coeffs, curve, 256, lam, data, method="direct",
                    oversample=int(cfg["oversample"]), stencil=int(cfg["stencil"]))
    errs = []
    for n in (32, 64, 128):
        sol = solve_bvp(coeffs, curve, n, lam, data, method="direct",
                        oversample=int(cfg["oversample"]), stencil=int(cfg["stencil"]))
        step = 256 // n
        diff = sol.densities - ref.densities[:, ::step]
        errs.append(float(np.max(np.abs(diff))))
    ratios = [errs[i] / errs[i + 1] for i in range(len(errs) - 1)]
    passed = all(r >= 10.0 for r in ratios)
    return {
        "suite": "convergence",
        "passed": passed,
        "errors": errs,
        "ratios": ratios,
        "threshold_ratio": 10.0,
    }


_SUITES = {
    "kernels": _verify_kernels,
    "decay": _verify_decay,
    "jumps": _verify_jumps,
    "analyticity": _verify_analyticity,
    "convergence": _verify_convergence,
}


def run_verify(cfg: dict, suite: str, outdir: str) -> int:
    os.makedirs(outdir, exist_ok=True)
    t0 = time.perf_counter()
    report = _SUITES[suite](cfg)
    elapsed = time.perf_counter() - t0
    _write_json(os.path.join(outdir, f"verify_{suite}.json"), report)
    _write_json(os.path.join(outdir, f"verify_{suite}_timing.json"), {"elapsed_s": elapsed})
    return EXIT_OK if report["passed"] else EXIT_VERIFY_FAILED


def run_sweep(cfg: dict, outdir: str) -> int:
    if "lambda_sweep" not in cfg:
        raise ValueError("sweep requires a 'lambda_sweep' list in the configuration")
    os.makedirs(outdir, exist_ok=True)
    coeffs, curve, _, data = _build_problem(cfg)
    records = []
    any_failed = False
    for raw in cfg["lambda_sweep"]:
        lam = _as_complex(raw)
        rec: dict = {"lam": _complex_out(lam)}
        try:
            sol = solve_bvp(
                coeffs, curve, int(cfg["n_nodes"]), lam, data,
                method=cfg["method"], oversample=int(cfg["oversample"]),
                stencil=int(cfg["stencil"]), lowmode_cutoff=cfg["lowmode_cutoff"],
                tol=float(cfg["tol"]), max_iter=int(cfg["max_iter"]),
                sector_radius=float(cfg["sector"]["radius"]),
                sector_delta=float(cfg["sector"]["delta"]),
            )
            rec.update(
                iterations=sol.result.iterations,
                contraction=sol.result.contraction,
                residual=sol.result.residual,
                density_norm=float(np.max(np.abs(sol.densities))),
                converged=True,
            )
        except (_PRECONDITION_ERRORS + _NUMERICAL_ERRORS) as exc:
            any_failed = True
            rec.update(converged=False, error=type(exc).__name__, message=str(exc))
        records.append(rec)
    _write_json(os.path.join(outdir, "sweep.json"), {"records": records, "config": cfg})
    return EXIT_NUMERICS if any_failed else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="hexpot", description="Boundary-integral solver for a sixth-order problem"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_solve = sub.add_parser("solve", help="solve one problem and write artifacts")
    p_solve.add_argument("--config", required=True)
    p_solve.add_argument("--out", default=".")
    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("--suite", required=True, choices=sorted(_SUITES))
    p_verify.add_argument("--config", required=True)
    p_verify.add_argument("--out", default=".")
    p_sweep = sub.add_parser("sweep", help="solve across a list of spectral parameters")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", default=".")
    args = parser.parse_args(argv)

    try:
        _limit_threads()
        cfg = load_config(args.config)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "solve":
            return run_solve(cfg, args.out)
        if args.command == "verify":
            return run_verify(cfg, args.suite, args.out)
        return run_sweep(cfg, args.out)
    except _PRECONDITION_ERRORS as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
