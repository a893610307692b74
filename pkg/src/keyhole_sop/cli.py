"""Command-line front-end: single-point evaluation, parameter sweeps with
CSV output, Monte Carlo runs, and the analytic-vs-simulation validation
harness.

Subcommands: ``sop`` (one parameter point, all methods), ``sweep`` (an
explicit axis or a named recipe), ``simulate`` (Monte Carlo only), and
``validate`` (grid cross-checks, nonzero exit on failure). The environment
variable KEYHOLE_SEED, when set, overrides any ``--seed``.

Sweeps reuse the same seed for every row (common random numbers), so a
whole sweep is a pure function of (spec, seed) and emitted CSV is
byte-identical across runs and across ``--streams`` settings.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .analytic import Method, sop_asymptotic, sop_closed_form, sop_quadrature
from .model import SystemParams, db_to_linear, load_params, params_from_mapping
from .montecarlo import estimate_sop, validate_against_analytic

__all__ = ["SweepSpec", "SweepRow", "run_sweep", "emit_csv", "load_recipe", "main"]

DEFAULT_SEED = 12345
DEFAULT_SAMPLES = 1_000_000
QUAD_REL_TOL = 1e-8
RECIPE_NAMES = ("fig2", "fig3", "fig4", "fig5")

AXES = ("gamma_bar_d_db", "M", "N", "r_th", "delta")
_INT_AXES = ("M", "N")

# Fixed column order for CSV output.
_METHOD_ORDER = (Method.CLOSED_FORM, Method.ASYMPTOTIC, Method.QUADRATURE, Method.MONTE_CARLO)

DEFAULT_PARAMS = {
    "M": 2,
    "N": 3,
    "zeta_g_db": 3.0,
    "zeta_hd_db": 6.0,
    "zeta_he_db": -3.0,
    "delta": 0.5,
    "gamma_bar_d_db": 10.0,
    "r_th": 1.0,
}


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: a base configuration, an axis with values, and methods."""

    base: SystemParams
    axis: str
    values: tuple
    methods: tuple[Method, ...]
    mc_samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        if not self.values:
            raise ValueError("sweep values must be non-empty")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("sweep values must be strictly increasing")
        if self.axis in _INT_AXES and any(v != int(v) for v in self.values):
            raise ValueError(f"axis {self.axis} takes integer values")
        if not self.methods:
            raise ValueError("at least one method must be requested")
        if len(set(self.methods)) != len(self.methods):
            raise ValueError("duplicate methods in sweep spec")
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "methods", tuple(Method(m) for m in self.methods))


@dataclass(frozen=True)
class SweepRow:
    """One output record: the axis value plus one probability per method."""

    axis_value: float
    values: dict
    mc_std_error: float | None = None


def apply_axis(base: SystemParams, axis: str, value) -> SystemParams:
    """Return ``base`` with one axis quantity replaced.

    A gamma_bar_d_db sweep models a transmit-power sweep, so gamma_bar_e
    is scaled by the same factor (their ratio is the fixed noise ratio);
    with the symmetric default it simply tracks gamma_bar_d.
    """
    if axis == "gamma_bar_d_db":
        gamma_d = db_to_linear(value)
        noise_ratio = base.gamma_bar_e / base.gamma_bar_d
        return dataclasses.replace(base, gamma_bar_d=gamma_d, gamma_bar_e=gamma_d * noise_ratio)
    if axis == "M":
        return dataclasses.replace(base, num_users=int(value))
    if axis == "N":
        return dataclasses.replace(base, num_eves=int(value))
    if axis == "r_th":
        return dataclasses.replace(base, r_th=float(value))
    if axis == "delta":
        return dataclasses.replace(base, delta=float(value))
    raise ValueError(f"axis must be one of {AXES}, got {axis!r}")


def run_sweep(spec: SweepSpec, num_streams: int = 1) -> list[SweepRow]:
    """Evaluate every requested method at every axis value, in axis order."""
    rows = []
    for value in spec.values:
        params = apply_axis(spec.base, spec.axis, value)
        method_values: dict[Method, float] = {}
        mc_std_error = None
        for method in spec.methods:
            try:
                if method is Method.CLOSED_FORM:
                    method_values[method] = sop_closed_form(params).value
                elif method is Method.ASYMPTOTIC:
                    method_values[method] = sop_asymptotic(params).value
                elif method is Method.QUADRATURE:
                    method_values[method] = sop_quadrature(params, QUAD_REL_TOL).value
                else:
                    est = estimate_sop(params, spec.mc_samples, spec.seed, num_streams)
                    method_values[method] = est.sop_hat
                    mc_std_error = est.std_error
            except (ValueError, ArithmeticError) as exc:
                raise RuntimeError(
                    f"{method.value} failed at {spec.axis} = {value}: {exc}"
                ) from exc
        rows.append(SweepRow(axis_value=value, values=method_values, mc_std_error=mc_std_error))
    return rows


def _fmt(value) -> str:
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float) and value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return format(value, ".12g")


def emit_csv(rows: list[SweepRow], destination, axis_name: str,
             curve_columns: tuple[str, ...] = (), curves: list | None = None) -> None:
    """Write sweep rows as CSV with 12-significant-digit numbers.

    Column order: any curve-identity columns, the axis, then the methods
    in the fixed order closed_form, asymptotic, quadrature, monte_carlo,
    then mc_std_error when Monte Carlo was run. ``curves`` aligns with
    ``rows`` and carries the identity values for multi-curve recipes.
    """
    if not rows:
        raise ValueError("no rows to emit")
    methods = [m for m in _METHOD_ORDER if m in rows[0].values]
    header = list(curve_columns) + [axis_name] + [m.value for m in methods]
    with_se = any(row.mc_std_error is not None for row in rows)
    if with_se:
        header.append("mc_std_error")
    lines = [",".join(header)]
    for i, row in enumerate(rows):
        cells = [_fmt(curves[i][c]) for c in curve_columns] if curve_columns else []
        cells.append(_fmt(row.axis_value))
        cells.extend(_fmt(row.values[m]) for m in methods)
        if with_se:
            cells.append(_fmt(row.mc_std_error) if row.mc_std_error is not None else "")
        lines.append(",".join(cells))
    destination.write("\n".join(lines) + "\n")


def load_recipe(name: str) -> dict:
    """Load a named figure-reproduction recipe shipped with the package."""
    if name not in RECIPE_NAMES:
        raise ValueError(f"unknown recipe {name!r}; available: {', '.join(RECIPE_NAMES)}")
    path = resources.files("keyhole_sop").joinpath(f"recipes/{name}.json")
    return json.loads(path.read_text())


def run_recipe(recipe: dict, seed: int, num_streams: int, mc_samples: int | None = None):
    """Run every curve of a recipe; returns (curve_columns, rows, curves, axis)."""
    axis = recipe["axis"]
    methods = tuple(Method(m) for m in recipe["methods"])
    samples = mc_samples if mc_samples is not None else recipe.get("mc_samples", DEFAULT_SAMPLES)
    curve_defs = recipe.get("curves") or [{}]
    curve_columns = tuple(curve_defs[0].keys())
    if any(tuple(c.keys()) != curve_columns for c in curve_defs):
        raise ValueError("all recipe curves must define the same keys")
    all_rows: list[SweepRow] = []
    all_curves: list[dict] = []
    for curve in curve_defs:
        base = params_from_mapping({**recipe["base"], **curve})
        spec = SweepSpec(base=base, axis=axis, values=tuple(recipe["values"]),
                         methods=methods, mc_samples=samples, seed=seed)
        rows = run_sweep(spec, num_streams=num_streams)
        all_rows.extend(rows)
        all_curves.extend([curve] * len(rows))
    return curve_columns, all_rows, all_curves, axis


def emit_gnuplot(csv_path: Path, script_path: Path, axis_name: str, methods: list[Method],
                 curve_columns: tuple[str, ...], curves: list) -> None:
    """Write a minimal gnuplot script plotting each method (per curve) from the CSV."""
    n_id = len(curve_columns)
    axis_col = n_id + 1
    lines = [
        "set datafile separator ','",
        f"set xlabel '{axis_name}'",
        "set ylabel 'secrecy outage probability'",
        "set logscale y",
        "set key outside",
        "plot \\",
    ]
    plots = []
    unique_curves = []
    for c in curves:
        if c not in unique_curves:
            unique_curves.append(c)
    for method_idx, method in enumerate(methods):
        col = axis_col + 1 + method_idx
        if not unique_curves or not n_id:
            plots.append(f"  '{csv_path.name}' using {axis_col}:{col} with linespoints title '{method.value}'")
            continue
        for curve in unique_curves:
            cond = " && ".join(
                f"stringcolumn({i + 1}) eq '{_fmt(curve[k])}'" for i, k in enumerate(curve_columns)
            )
            label = " ".join(f"{k}={_fmt(curve[k])}" for k in curve_columns)
            plots.append(
                f"  '{csv_path.name}' using {axis_col}:(({cond}) ? ${col} : 1/0) "
                f"with linespoints title '{label} {method.value}'"
            )
    lines.append(", \\\n".join(plots))
    script_path.write_text("\n".join(lines) + "\n")


def _resolve_seed(args) -> int:
    env = os.environ.get("KEYHOLE_SEED")
    if env is not None:
        return int(env)
    return args.seed


def _load_base_params(args) -> SystemParams:
    if args.params is not None:
        return load_params(args.params)
    return params_from_mapping(DEFAULT_PARAMS)


def _cmd_sop(args) -> int:
    params = _load_base_params(args)
    seed = _resolve_seed(args)
    print(f"closed_form   {sop_closed_form(params).value:.12g}")
    print(f"asymptotic    {sop_asymptotic(params).value:.12g}")
    print(f"quadrature    {sop_quadrature(params, QUAD_REL_TOL).value:.12g}")
    est = estimate_sop(params, args.samples, seed, args.streams)
    print(f"monte_carlo   {est.sop_hat:.12g}  "
          f"(std_error {est.std_error:.3g}, 95% CI [{est.ci95_low:.6g}, {est.ci95_high:.6g}], "
          f"n={est.num_samples}, seed={est.seed})")
    return 0


def _cmd_simulate(args) -> int:
    params = _load_base_params(args)
    seed = _resolve_seed(args)
    est = estimate_sop(params, args.samples, seed, args.streams)
    print(f"sop_hat      {est.sop_hat:.12g}")
    print(f"std_error    {est.std_error:.6g}")
    print(f"ci95         [{est.ci95_low:.6g}, {est.ci95_high:.6g}]")
    print(f"num_samples  {est.num_samples}")
    print(f"seed         {est.seed}")
    print(f"num_streams  {est.num_streams}")
    return 0


def _parse_values(axis: str, raw: str) -> tuple:
    items = [part.strip() for part in raw.split(",") if part.strip()]
    if axis in _INT_AXES:
        return tuple(int(v) for v in items)
    return tuple(float(v) for v in items)


def _cmd_sweep(args) -> int:
    seed = _resolve_seed(args)
    if args.recipe is not None:
        if args.axis is not None or args.values is not None:
            raise ValueError("--recipe and --axis/--values are mutually exclusive")
        recipe = load_recipe(args.recipe)
        curve_columns, rows, curves, axis = run_recipe(
            recipe, seed=seed, num_streams=args.streams, mc_samples=args.samples)
        methods = [m for m in _METHOD_ORDER if m in rows[0].values]
    else:
        if args.axis is None or args.values is None:
            raise ValueError("either --recipe or both --axis and --values are required")
        base = _load_base_params(args)
        methods = [Method(m.strip()) for m in args.methods.split(",") if m.strip()]
        spec = SweepSpec(
            base=base, axis=args.axis, values=_parse_values(args.axis, args.values),
            methods=tuple(methods),
            mc_samples=args.samples if args.samples is not None else DEFAULT_SAMPLES,
            seed=seed)
        rows = run_sweep(spec, num_streams=args.streams)
        curve_columns, curves, axis = (), [], args.axis

    if args.gnuplot and args.out is None:
        raise ValueError("--gnuplot requires --out")
    if args.out is not None:
        out_path = Path(args.out)
        with open(out_path, "w", newline="") as fh:
            emit_csv(rows, fh, axis, curve_columns, curves)
        if args.gnuplot:
            emit_gnuplot(out_path, out_path.with_suffix(".gp"), axis, methods,
                         curve_columns, curves)
    else:
        emit_csv(rows, sys.stdout, axis, curve_columns, curves)
    return 0


def _cmd_validate(args) -> int:
    base = _load_base_params(args)
    seed = _resolve_seed(args)
    m_values = [int(v) for v in args.m_values.split(",")]
    n_values = [int(v) for v in args.n_values.split(",")]
    gamma_values = [float(v) for v in args.gamma_db_values.split(",")]

    failures = []
    mc_failures = 0
    total = 0
    print(f"{'M':>3} {'N':>3} {'gamma_dB':>9} {'closed_form':>13} {'quadrature':>13} "
          f"{'mc_sop_hat':>12} {'z':>7}  verdict")
    for m in m_values:
        for n in n_values:
            for gamma_db in gamma_values:
                gamma = db_to_linear(gamma_db)
                ratio = base.gamma_bar_e / base.gamma_bar_d
                params = dataclasses.replace(
                    base, num_users=m, num_eves=n,
                    gamma_bar_d=gamma, gamma_bar_e=gamma * ratio)
                report = validate_against_analytic(params, args.samples, seed, args.streams)
                quad = sop_quadrature(params, QUAD_REL_TOL)
                cf = report.cf.value
                quad_err = abs(cf - quad.value)
                quad_ok = quad_err <= 1e-6 * max(cf, quad.value) or quad_err <= 1e-9
                total += 1
                verdict = []
                if not report.passed:
                    mc_failures += 1
                    verdict.append("MC |z|>4")
                if not quad_ok:
                    failures.append(f"M={m} N={n} gamma={gamma_db} dB: "
                                    f"closed-form/quadrature gap {quad_err:.3e}")
                    verdict.append("quad mismatch")
                print(f"{m:>3} {n:>3} {gamma_db:>9g} {cf:>13.6e} {quad.value:>13.6e} "
                      f"{report.mc.sop_hat:>12.6e} {report.z_score:>7.2f}  "
                      f"{'; '.join(verdict) if verdict else 'ok'}")

    print()
    saturation_failures = []
    for m in m_values:
        for n in n_values:
            gamma60 = db_to_linear(60.0)
            ratio = base.gamma_bar_e / base.gamma_bar_d
            params = dataclasses.replace(base, num_users=m, num_eves=n,
                                         gamma_bar_d=gamma60, gamma_bar_e=gamma60 * ratio)
            gap = abs(sop_closed_form(params).value - sop_asymptotic(params).value)
            status = "ok" if gap <= 1e-3 else "FAIL"
            print(f"saturation M={m} N={n}: |closed_form(60 dB) - asymptotic| = {gap:.3e}  {status}")
            if gap > 1e-3:
                saturation_failures.append(f"M={m} N={n}: saturation gap {gap:.3e}")

    allowed_mc_failures = 1
    print()
    print(f"Monte Carlo z-tests: {total - mc_failures}/{total} passed "
          f"(allowance {allowed_mc_failures})")
    ok = (mc_failures <= allowed_mc_failures) and not failures and not saturation_failures
    for msg in failures + saturation_failures:
        print(f"FAIL: {msg}")
    print("VALIDATION " + ("PASSED" if ok else "FAILED"))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="keyhole-sop",
        description="Secrecy outage probability of a keyhole-aided multi-user "
                    "network: closed form, high-SNR asymptote, quadrature, and "
                    "Monte Carlo simulation.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", metavar="FILE", default=None,
                        help="flat key-value parameter file (defaults built in)")
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                        help="Monte Carlo sample count (default %(default)s)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="RNG seed; KEYHOLE_SEED overrides (default %(default)s)")
    common.add_argument("--streams", type=int, default=1,
                        help="worker threads for Monte Carlo chunks (default %(default)s)")

    p_sop = sub.add_parser("sop", parents=[common],
                           help="evaluate one parameter point by all methods")
    p_sop.set_defaults(func=_cmd_sop)

    p_sim = sub.add_parser("simulate", parents=[common],
                           help="Monte Carlo estimate only")
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="parameter sweep to CSV (explicit axis or recipe)")
    p_sweep.add_argument("--axis", choices=AXES, default=None)
    p_sweep.add_argument("--values", default=None,
                         help="comma-separated, strictly increasing axis values")
    p_sweep.add_argument("--methods", default="closed_form",
                         help="comma-separated subset of closed_form,asymptotic,"
                              "quadrature,monte_carlo (default %(default)s)")
    p_sweep.add_argument("--recipe", choices=RECIPE_NAMES, default=None,
                         help="run a checked-in figure recipe instead of an explicit axis")
    p_sweep.add_argument("--out", metavar="FILE", default=None,
                         help="CSV destination (default stdout)")
    p_sweep.add_argument("--gnuplot", action="store_true",
                         help="also write a gnuplot script next to --out")
    p_sweep.set_defaults(func=_cmd_sweep, samples=None)

    p_val = sub.add_parser("validate", parents=[common],
                           help="cross-check Monte Carlo, closed form, quadrature, "
                                "and the high-SNR asymptote over a grid")
    p_val.add_argument("--m-values", default="1,2,5,8",
                       help="comma-separated user counts (default %(default)s)")
    p_val.add_argument("--n-values", default="1,3",
                       help="comma-separated eavesdropper counts (default %(default)s)")
    p_val.add_argument("--gamma-db-values", default="0,10,20,30",
                       help="comma-separated average SNRs in dB (default %(default)s)")
    p_val.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
