"""Command-line interface: figures, spectra, verification suites, Gram matrices.

Exit codes: 0 all assertions pass, 1 a physics assertion failed,
2 configuration error, 3 solver non-convergence.

Heavy imports happen after thread pinning so PTSUSY_THREADS can cap the
BLAS/OpenMP pools before numpy first loads.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict, dataclass
from typing import Optional

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_CONFIG = 2
EXIT_NOCONVERGENCE = 3

_THREAD_VARS = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
)


class ConfigError(Exception):
    pass


def _pin_threads():
    cap = os.environ.get("PTSUSY_THREADS")
    if not cap:
        return
    try:
        nthreads = int(cap)
    except ValueError as exc:
        raise ConfigError(f"PTSUSY_THREADS must be an integer, got {cap!r}") from exc
    if nthreads < 1:
        raise ConfigError("PTSUSY_THREADS must be >= 1")
    for var in _THREAD_VARS:
        os.environ.setdefault(var, str(nthreads))


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved invocation; embedded verbatim in every JSON report."""

    command: str
    variant: str
    k: float
    q: float
    n: int
    m: int
    grid_size: int
    depth: int
    strategy: str
    mode: str
    format: str
    out: Optional[str]
    plot_ceiling: float


def _validate(cfg: RunConfig):
    if cfg.grid_size % 2 == 0 or cfg.grid_size < 201:
        raise ConfigError(f"--grid-size must be odd and >= 201, got {cfg.grid_size}")
    if not (cfg.k > 0):
        raise ConfigError(f"--k must be positive, got {cfg.k}")
    if not math.isfinite(cfg.q):
        raise ConfigError(f"--q must be finite, got {cfg.q}")
    if cfg.n < 1 or cfg.depth < 1 or cfg.m < 1:
        raise ConfigError("--n, --m, and --depth must be >= 1")
    if cfg.out is not None:
        parent = os.path.dirname(os.path.abspath(cfg.out))
        if not os.path.isdir(parent):
            raise ConfigError(f"parent directory of --out does not exist: {parent}")


# ---------------------------------------------------------------------------
# Deterministic serialization


def _fmt(x: float) -> str:
    """Shortest round-trip decimal with a lowercase exponent marker."""
    return repr(float(x))


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, complex):
        return {"re": _json_safe(obj.real), "im": _json_safe(obj.imag)}
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if hasattr(obj, "item"):  # numpy scalars
        return _json_safe(obj.item())
    return obj


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit_json(cfg: RunConfig, payload: dict) -> None:
    from . import __version__

    doc = {"config": asdict(cfg), "version": __version__}
    doc.update(payload)
    text = json.dumps(_json_safe(doc), indent=2, sort_keys=True, allow_nan=False) + "\n"
    if cfg.out:
        _atomic_write(cfg.out, text)
    else:
        sys.stdout.write(text)


def _write_curve_csv(path: str, xs, values, ceiling: float):
    lines = ["x,re,im,clipped"]
    for x, v in zip(xs, values):
        re, im = float(v.real), float(v.imag)
        clipped = 0
        if abs(re) > ceiling:
            re = math.copysign(ceiling, re)
            clipped = 1
        if abs(im) > ceiling:
            im = math.copysign(ceiling, im)
            clipped = 1
        lines.append(f"{_fmt(x)},{_fmt(re)},{_fmt(im)},{clipped}")
    _atomic_write(path, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Commands


def cmd_figures(cfg: RunConfig) -> int:
    import numpy as np

    from .analytic import (
        FamilyParams,
        Variant,
        build_superpotential,
        closed_form_potentials,
        on_symmetric_well,
    )
    from .grids import Grid

    if cfg.out is None:
        raise ConfigError("figures requires --out <directory>")
    os.makedirs(cfg.out, exist_ok=True)
    k, q = cfg.k, cfg.q
    grid = Grid(-math.pi / (2.0 * k), math.pi / (2.0 * k), cfg.grid_size)
    xs = grid.nodes

    def tan_params(qq):
        return FamilyParams(Variant.TANGENT, k, qq, k, 1)

    def cot_params(qq):
        return FamilyParams(Variant.COTANGENT, k, qq, k, 1)

    def cot(f):
        # cotangent-family curves are plotted on the symmetric well
        return on_symmetric_well(f)

    curves = {
        "fig1_w1c.csv": cot(build_superpotential(cot_params(q))),
        "fig1_w1t.csv": build_superpotential(tan_params(q)),
        "fig2_v1_well.csv": None,  # the real-well baseline V = -k^2
        "fig2_v1c.csv": cot(closed_form_potentials(cot_params(q)).v1),
        "fig2_v1t.csv": closed_form_potentials(tan_params(q)).v1,
        "fig3_v2c_q0.csv": cot(closed_form_potentials(cot_params(0.0)).v2),
        "fig3_v2t_q0.csv": closed_form_potentials(tan_params(0.0)).v2,
        "fig3_v2c.csv": cot(closed_form_potentials(cot_params(q)).v2),
        "fig3_v2t.csv": closed_form_potentials(tan_params(q)).v2,
    }
    for name, f in curves.items():
        if f is None:
            vals = np.full(xs.size, -k * k, dtype=np.complex128)
        else:
            with np.errstate(all="ignore"):
                vals = np.asarray(f(xs), dtype=np.complex128)
        _write_curve_csv(os.path.join(cfg.out, name), xs, vals, cfg.plot_ceiling)
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig) -> int:
    from .analytic import FamilyParams, Variant
    from .numerics import spectrum_report

    p = FamilyParams(Variant(cfg.variant), cfg.k, cfg.q, cfg.k, 1)
    report = spectrum_report(p, m=cfg.m, n_grid=cfg.grid_size)

    assertions = []
    if report.stable:
        for j, (err, lam) in enumerate(zip(report.abs_errors, report.eigenvalues)):
            assertions.append({
                "name": f"abs_error_level_{j}",
                "measured": err, "tolerance": 1e-3, "passed": err <= 1e-3})
            imag_bound = 1e-6 * max(1.0, abs(lam.real))
            assertions.append({
                "name": f"imag_level_{j}",
                "measured": abs(lam.imag), "tolerance": imag_bound,
                "passed": abs(lam.imag) <= imag_bound})
    payload = {
        "report": {
            "eigenvalues": list(report.eigenvalues),
            "imag_max": report.imag_max,
            "targets": list(report.targets),
            "abs_errors": list(report.abs_errors),
            "grid_sizes": list(report.grid_sizes),
            "extrapolated": report.extrapolated,
            "stability": "stable" if report.stable else "unstable",
            "coarse_minima": list(report.coarse_minima),
            "isospectral_pairs": [
                {"v2": a, "v1_next": b, "diff": d}
                for a, b, d in report.isospectral_pairs],
            "pairing_ok": report.pairing_ok,
        },
        "assertions": assertions,
        "assertions_skipped_unstable": not report.stable,
    }
    _emit_json(cfg, payload)
    return EXIT_OK if all(a["passed"] for a in assertions) else EXIT_ASSERTION


def _check(name, measured, tolerance, passed):
    return {"name": name, "measured": measured, "tolerance": tolerance,
            "passed": bool(passed)}


def cmd_verify_symmetry(cfg: RunConfig) -> int:
    from .analytic import FamilyParams, Variant, build_superpotential, closed_form_potentials
    from .grids import Grid, sample
    from .symmetry import classify_apt, classify_pt

    p = FamilyParams(Variant(cfg.variant), cfg.k, cfg.q, cfg.k, cfg.n)
    grid = Grid(-math.pi / (2.0 * cfg.k), math.pi / (2.0 * cfg.k), cfg.grid_size)
    pair = closed_form_potentials(p)
    w = build_superpotential(p)
    if p.variant is Variant.COTANGENT:
        from .analytic import on_symmetric_well
        pair_v1, pair_v2, w = (on_symmetric_well(pair.v1),
                               on_symmetric_well(pair.v2),
                               on_symmetric_well(w))
    else:
        pair_v1, pair_v2 = pair.v1, pair.v2

    tol = 1e-10
    r1 = classify_pt(sample(pair_v1, grid), tol)
    r2 = classify_pt(sample(pair_v2, grid), tol)
    rw = classify_apt(sample(w, grid), tol)
    checks = [
        _check("v1_pt_symmetric", r1.pt_defect, tol, r1.is_pt_symmetric),
        _check("v2_pt_symmetric", r2.pt_defect, tol, r2.is_pt_symmetric),
        _check("w_apt_symmetric", rw.apt_defect, tol, rw.is_apt_symmetric),
    ]
    reported = [{"name": "w_pt_defect", "measured": rw.pt_defect}]
    _emit_json(cfg, {"checks": checks, "reported": reported})
    return EXIT_OK if all(c["passed"] for c in checks) else EXIT_ASSERTION


def cmd_verify_shape_invariance(cfg: RunConfig) -> int:
    import numpy as np

    from .analytic import (
        FamilyParams,
        Variant,
        energy_spectrum,
        remainder_value,
        shape_invariance_remainder,
    )
    from .grids import Grid

    p = FamilyParams(Variant(cfg.variant), cfg.k, cfg.q, cfg.k, cfg.n)
    rem = shape_invariance_remainder(p)
    if p.variant is Variant.TANGENT:
        grid = Grid(-math.pi / (2.0 * cfg.k), math.pi / (2.0 * cfg.k), cfg.grid_size)
        xs = grid.nodes
    else:
        xs = np.linspace(1e-3, math.pi / cfg.k - 1e-3, cfg.grid_size)
    vals = np.asarray(rem(xs))
    spread = float(np.max(np.abs(vals - vals[0])))
    expected = remainder_value(1, cfg.k)
    center_err = float(abs(vals[xs.size // 2] - expected))
    telescope_ok = all(
        sum(remainder_value(j, 1.0) for j in range(1, nn + 1)) == energy_spectrum(nn)
        for nn in range(1, 11))
    checks = [
        _check("remainder_constant_spread", spread, 1e-10, spread <= 1e-10),
        _check("remainder_value", center_err, 1e-10, center_err <= 1e-10),
        _check("telescoping_n_le_10", 0.0 if telescope_ok else 1.0, 0.0, telescope_ok),
    ]
    _emit_json(cfg, {"checks": checks})
    return EXIT_OK if all(c["passed"] for c in checks) else EXIT_ASSERTION


def cmd_verify_factorization(cfg: RunConfig) -> int:
    from .analytic import FamilyParams, Variant, build_superpotential, closed_form_potentials
    from .grids import Grid
    from .operators import (
        apt_partner_relation_check,
        factorization_residual,
        ladder_a_dagger,
        smooth_test_state,
    )

    if Variant(cfg.variant) is not Variant.TANGENT:
        raise ConfigError("verify-factorization supports the tangent family")
    p = FamilyParams(Variant.TANGENT, cfg.k, cfg.q, cfg.k, 1)
    grid = Grid(-math.pi / (2.0 * cfg.k), math.pi / (2.0 * cfg.k), cfg.grid_size)
    w = build_superpotential(p)
    pair = closed_form_potentials(p)
    psi = smooth_test_state(grid, cfg.k)

    r1, r2 = factorization_residual(w, pair, psi)
    relation = apt_partner_relation_check(w, psi)
    checks = [
        _check("apt_factorization_h1", r1, 1e-5, r1 <= 1e-5),
        _check("apt_factorization_h2", r2, 1e-5, r2 <= 1e-5),
        _check("apt_partner_relation", relation, 1e-5, relation <= 1e-5),
    ]
    if cfg.q != 0.0:
        d1, _ = factorization_residual(w, pair, psi, lower=ladder_a_dagger(w))
        checks.append(_check("hermitian_adjoint_breaks", d1, 0.1, d1 >= 0.1))
    _emit_json(cfg, {"checks": checks})
    return EXIT_OK if all(c["passed"] for c in checks) else EXIT_ASSERTION


def cmd_gram(cfg: RunConfig) -> int:
    from .analytic import FamilyParams, Variant
    from .grids import Grid
    from .numerics import _symmetric_well_potentials, discretize, eigenvectors_for
    from .symmetry import Conjugation, gram_matrix

    p = FamilyParams(Variant(cfg.variant), cfg.k, cfg.q, cfg.k, 1)
    grid = Grid(-math.pi / (2.0 * cfg.k), math.pi / (2.0 * cfg.k), cfg.grid_size)
    v1, _ = _symmetric_well_potentials(p)
    matrix = discretize(v1, grid)
    targets = [float(j * (j + 2)) * cfg.k * cfg.k for j in range(cfg.m)]
    states = eigenvectors_for(matrix, targets)

    matrices = {}
    results = {}
    for s in Conjugation:
        res = gram_matrix(states, s)
        results[s.value] = res
        matrices[s.value] = {
            "matrix": [[complex(z) for z in row] for row in res.matrix],
            "max_offdiag": res.max_offdiag,
            "max_diag_deviation": res.max_diag_deviation,
        }
    checks = []
    if cfg.q == 0.0:
        herm = results["hermitian"]
        checks.append(_check("hermitian_identity_offdiag", herm.max_offdiag,
                             1e-6, herm.max_offdiag <= 1e-6))
        checks.append(_check("hermitian_identity_diag", herm.max_diag_deviation,
                             1e-6, herm.max_diag_deviation <= 1e-6))
    _emit_json(cfg, {"gram": matrices, "checks": checks,
                     "mode": "assertive" if cfg.q == 0.0 else "exploratory"})
    return EXIT_OK if all(c["passed"] for c in checks) else EXIT_ASSERTION


def cmd_hierarchy(cfg: RunConfig) -> int:
    from .analytic import (
        FamilyParams,
        HierarchyMode,
        Variant,
        energy_spectrum,
        hierarchy,
        remainder_value,
    )

    p = FamilyParams(Variant(cfg.variant), cfg.k, cfg.q, cfg.k, 1)
    levels = hierarchy(p, cfg.depth, HierarchyMode(cfg.mode))
    rows = []
    for lv in levels:
        rows.append({
            "level": lv.level,
            "k": lv.k,
            "e0": lv.e0,
            "remainder": remainder_value(lv.level, lv.k),
            "poles_inside_domain": lv.poles_inside_domain,
        })
    telescoped = [
        {"n": nn, "sum": sum(remainder_value(j, p.k) for j in range(1, nn + 1)),
         "target": energy_spectrum(nn) * p.k * p.k}
        for nn in range(1, cfg.depth + 1)]
    _emit_json(cfg, {"levels": rows, "telescoped": telescoped})
    return EXIT_OK


_COMMANDS = {
    "figures": cmd_figures,
    "spectrum": cmd_spectrum,
    "verify-symmetry": cmd_verify_symmetry,
    "verify-shape-invariance": cmd_verify_shape_invariance,
    "verify-factorization": cmd_verify_factorization,
    "gram": cmd_gram,
    "hierarchy": cmd_hierarchy,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptsusy",
        description="Complex PT-symmetric superpartners of the infinite square well.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cp = sub.add_parser(name)
        cp.add_argument("--variant", choices=["tangent", "cotangent"], default="tangent")
        cp.add_argument("--k", type=float, default=1.0)
        cp.add_argument("--q", type=float, default=2.0)
        cp.add_argument("--n", type=int, default=1)
        cp.add_argument("--m", type=int, default=4)
        cp.add_argument("--grid-size", type=int, default=2001)
        cp.add_argument("--depth", type=int, default=3)
        cp.add_argument("--strategy", choices=["hermitian", "pt", "apt"],
                        default="hermitian")
        cp.add_argument("--mode", choices=["fixed-k", "paper-k"], default="fixed-k")
        cp.add_argument("--format", choices=["csv", "json"], default="json")
        cp.add_argument("--out", default=None)
        cp.add_argument("--plot-ceiling", type=float, default=25.0)
    return parser


def main(argv=None) -> int:
    try:
        _pin_threads()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command, variant=args.variant, k=args.k, q=args.q,
        n=args.n, m=args.m, grid_size=args.grid_size, depth=args.depth,
        strategy=args.strategy, mode=args.mode, format=args.format,
        out=args.out, plot_ceiling=args.plot_ceiling)
    try:
        _validate(cfg)
        return _COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # solver and domain errors
        from .errors import NoConvergence, PtSusyError

        if isinstance(exc, NoConvergence):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_NOCONVERGENCE
        if isinstance(exc, PtSusyError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        raise


if __name__ == "__main__":
    sys.exit(main())
