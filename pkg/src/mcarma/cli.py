"""Command-line front door.

Subcommands: transform, fit, simulate, convergence, check.  Every command is
pure in (inputs, config, seed): reruns produce byte-identical artifacts, each
embedding a manifest with the config digest and input file digests.

Exit codes: 0 success, 1 numeric/solver failure, 2 input validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .errors import McarmaError, NumericError, PipelineError, ValidationError
from .estimate import DEFAULT_GLUE, DEFAULT_INTERVALS, PipelineConfig, fit_mcar_pipeline
from .io import (
    RunManifest,
    fmt4,
    load_data_csv,
    read_fitted_model_json,
    read_model_json,
    read_representation_json,
    write_error_table_csv,
    write_fitted_model_json,
    write_model_json,
    write_paths_csv,
    write_representation_json,
)
from .levy import JumpSpec, nig_levy_measure, power_law_measure
from .model import (
    McarmaCoefficients,
    ModelOrders,
    assemble_companion,
    mcarma_stationarity,
    var_stationarity,
)
from .nig import NigParams
from .simulate import (
    DiffusionSpec,
    NigDriver,
    simulate_extended_mcar,
    simulate_mcarma,
    strong_error_experiment,
)
from .transform import (
    closed_form_p4d2,
    forward_transform,
    inverse_transform_mcar,
    ordering_discrepancy_report,
)


def _load_config(path: str | None, overrides) -> dict:
    cfg = {}
    if path:
        with open(path) as fh:
            try:
                cfg = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}: invalid JSON: {exc}") from exc
        if not isinstance(cfg, dict):
            raise ValidationError(f"{path}: config must be a JSON object")
    for item in overrides or []:
        if "=" not in item:
            raise ValidationError(f"--set expects key=value, got {item!r}")
        key, _, raw = item.partition("=")
        try:
            val = json.loads(raw)
        except json.JSONDecodeError:
            val = raw
        cfg[key.strip()] = val
    return cfg


def _print_block_table(title: str, blocks, labels=None):
    print(title)
    for j, blk in enumerate(blocks, start=1):
        blk = np.asarray(blk, dtype=float)
        name = labels[j - 1] if labels else f"block {j}"
        rows = ["  ".join(fmt4(x) for x in row) for row in blk]
        print(f"  {name}: " + " | ".join(rows))


def _print_eig(report, header: str):
    print(header)
    for z in report.eigenvalues:
        if abs(z.imag) < 1e-14:
            print(f"  {fmt4(z.real)}  (modulus {fmt4(abs(z))})")
        else:
            print(f"  {fmt4(z.real)} {'+' if z.imag >= 0 else '-'} {fmt4(abs(z.imag))}i"
                  f"  (modulus {fmt4(abs(z))})")
    verdict = "stationary" if report.is_stationary else "NOT stationary"
    print(f"  verdict: {verdict}")


def cmd_transform(args) -> int:
    cfg = _load_config(args.config, args.set)
    h = args.h if args.h is not None else cfg.get("h", 1.0)
    manifest = RunManifest.create(
        "transform", {**cfg, "direction": args.direction, "h": h, "paper_mode": args.paper_mode},
        {"model": args.input}, seed=None, stamp=args.stamp)
    if args.direction == "forward":
        coeffs, _meta = read_model_json(args.input)
        rep = forward_transform(coeffs, h)
        write_representation_json(args.out, rep, manifest=manifest)
        _print_block_table("lag coefficient blocks phi_1..phi_p:", rep.phi_blocks)
        for off, mat in sorted(rep.noise_loadings.items()):
            _print_block_table(f"noise loading at increment offset {off}:", [mat])
        if args.paper_mode:
            print("note: paper-mode forward applies only to the inverse direction; "
                  "generic expansion written")
    else:
        rep = read_representation_json(args.input)
        if args.paper_mode:
            if rep.orders.p != 4 or rep.orders.d != 2 or abs(float(rep.step) - 1.0) > 1e-12:
                raise ValidationError("paper mode requires p=4, d=2, step=1")
            alphas = closed_form_p4d2([np.asarray(b, dtype=float) for b in rep.phi_blocks])
            loading0 = np.asarray(rep.noise_loadings.get(0, np.eye(2)), dtype=float)
            orders = ModelOrders(p=4, q=0, d=2, m=loading0.shape[1])
            # published tables list the negated drift blocks; store verbatim
            coeffs = McarmaCoefficients(orders=orders,
                                        A_blocks=tuple(-a for a in alphas),
                                        B_blocks=(loading0,))
            write_model_json(args.out, coeffs, a_sign="table", manifest=manifest)
            report = ordering_discrepancy_report(rep)
            rep_path = args.out + ".discrepancy.json"
            with open(rep_path, "w") as fh:
                json.dump(report, fh, indent=2, sort_keys=True)
                fh.write("\n")
            _print_block_table("autoregressive coefficient table (published convention):", alphas,
                               labels=[f"alpha^({j})" for j in range(1, 5)])
            print(f"ordering discrepancy report written to {rep_path} "
                  f"(max |generic - paper| = {fmt4(report['max_abs_difference'])})")
        else:
            coeffs = inverse_transform_mcar(rep)
            write_model_json(args.out, coeffs, a_sign="drift", manifest=manifest)
            _print_block_table("drift blocks A_1..A_p:", coeffs.A_blocks)
            _print_block_table("noise block B_0:", coeffs.B_blocks)
    return 0


def cmd_fit(args) -> int:
    cfg = _load_config(args.config, args.set)
    series, doy, _dates = load_data_csv(args.input)
    pc = PipelineConfig(
        p=int(cfg.get("p", 4)),
        intercept=bool(cfg.get("intercept", False)),
        paper_mode=bool(args.paper_mode or cfg.get("paper_mode", False)),
        segments=_parse_segments(cfg.get("segments")),
        glue=tuple(tuple(g) for g in cfg.get("glue", DEFAULT_GLUE)),
        intervals=tuple(tuple(v) for v in cfg.get("intervals", DEFAULT_INTERVALS)),
        force_phi_blocks=cfg.get("force_phi_blocks"),
    )
    model = fit_mcar_pipeline(series, doy, pc)
    manifest = RunManifest.create("fit", cfg, {"data": args.input}, seed=None, stamp=args.stamp)
    write_fitted_model_json(args.out, model, manifest=manifest)

    diag = model.diagnostics
    print(f"fitted extended pure-AR model written to {args.out}")
    _print_block_table("drift blocks A_1..A_p:", model.mcar_coefficients.A_blocks)
    cont = mcarma_stationarity(assemble_companion(model.mcar_coefficients))
    _print_eig(cont, "eigenvalues of the drift companion matrix:")
    print("eigenvalue moduli of the discrete companion (fitted VAR):")
    mods = sorted(e["modulus"] for e in diag["discrete_eigenvalues"])
    print("  " + "  ".join(fmt4(m) for m in mods))
    print(f"  verdict: {'stationary' if diag['discrete_stationary'] else 'NOT stationary'}")
    b = diag.get("beta", {})
    if "c_delta" in b:
        print("error-loading solve:")
        print(f"  common scale C_delta = {fmt4(b['c_delta'])}")
        _print_block_table("  beta:", [np.asarray(b["beta"])])
        rv = b["restriction_values"]
        print(f"  restriction values delta_k/sqrt(2 Sigma_kk): {fmt4(rv[0])}, {fmt4(rv[1])}")
        sq = b["offdiag_squares"]
        print(f"  off-diagonal squares: {fmt4(sq[0])}, {fmt4(sq[1])}")
        re_ = b["delta_rel_errors"]
        print(f"  scale relative errors: {fmt4(re_[0])}, {fmt4(re_[1])}")
    for k, ks in enumerate(diag["ks"], start=1):
        print(f"residual law dim {k}: KS statistic {fmt4(ks['statistic'])}, "
              f"p-value {fmt4(ks['p_value'])}")
    return 0


def _parse_segments(raw):
    if raw is None:
        return None
    return tuple(tuple(tuple(pair) for pair in dim) for dim in raw)


def cmd_simulate(args) -> int:
    cfg = _load_config(args.config, args.set)
    if args.paths is None or args.paths < 1:
        raise ValidationError("need --paths >= 1")
    h = args.h if args.h is not None else cfg.get("h", 1.0)
    T = args.T if args.T is not None else cfg.get("T", 365.0)
    with open(args.input) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{args.input}: invalid JSON: {exc}") from exc
    manifest = RunManifest.create(
        "simulate", {**cfg, "h": h, "T": T, "paths": args.paths},
        {"model": args.input}, seed=args.seed, stamp=args.stamp)
    if "seasonality" in doc:
        model = read_fitted_model_json(args.input)
        ps = simulate_extended_mcar(model, h=h, T=T, n_paths=args.paths, seed=args.seed,
                                    epsilon=cfg.get("epsilon", 0.05))
    else:
        coeffs, _meta = read_model_json(args.input)
        sys_ = assemble_companion(coeffs)
        drivers_cfg = cfg.get("drivers")
        eps = cfg.get("epsilon", 0.05)
        if drivers_cfg is None:
            laws = [NigParams(1.0, 0.0, 1.0, 0.0) for _ in range(coeffs.orders.m)]
        else:
            laws = [NigParams(d["a"], d["b"], d["delta"], d["mu"]) for d in drivers_cfg]
        drivers = [NigDriver(params=q, epsilon=eps) for q in laws]
        ps = simulate_mcarma(sys_, drivers, h=h, T=T, n_paths=args.paths, seed=args.seed)
    write_paths_csv(args.out, ps, manifest=manifest)
    vals = ps.values
    print(f"paths written to {args.out}")
    for k in range(vals.shape[2]):
        v = vals[:, :, k]
        print(f"dim {k + 1}: mean {fmt4(v.mean())}, sd {fmt4(v.std())}, "
              f"min {fmt4(v.min())}, max {fmt4(v.max())}")
    return 0


_COEFF_KINDS = {
    "linear": lambda c: (lambda t, x, s=float(c.get("slope", 0.0)), k=float(c.get("const", 0.0)): k + s * x),
    "zero": lambda c: (lambda t, x: 0.0 * x),
}


def _coeff_fn(doc, name):
    c = doc.get(name, {"type": "zero"})
    kind = c.get("type", "linear")
    if kind not in _COEFF_KINDS:
        raise ValidationError(f"unknown coefficient type {kind!r} for {name}")
    return _COEFF_KINDS[kind](c)


def cmd_convergence(args) -> int:
    cfg = _load_config(args.config, args.set)
    with open(args.input) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{args.input}: invalid JSON: {exc}") from exc
    doc = {**doc, **cfg}
    n_paths = args.paths if args.paths is not None else int(doc.get("n_paths", 2000))
    h_list = doc.get("h_list", [2.0 ** -k for k in range(2, 9)])
    spec = DiffusionSpec(
        drift=_coeff_fn(doc, "drift"),
        diffusion=_coeff_fn(doc, "diffusion"),
        eta=_coeff_fn(doc, "eta"),
        x0=np.asarray(doc.get("x0", [1.0]), dtype=float),
    )
    jumps = None
    eps_list = None
    measure_doc = doc.get("measure")
    if measure_doc is not None:
        kind = measure_doc.get("type")
        if kind == "power":
            measure = power_law_measure(c=float(measure_doc.get("c", 0.5)),
                                        alpha=float(measure_doc.get("alpha", 1.5)),
                                        upper=float(measure_doc.get("upper", 1.0)))
        elif kind == "nig":
            measure = nig_levy_measure(NigParams(measure_doc["a"], measure_doc["b"],
                                                 measure_doc["delta"], measure_doc["mu"]))
        else:
            raise ValidationError(f"unknown measure type {kind!r}")
        eps_list = doc.get("epsilon_list", [0.5, 0.25, 0.125])
        jumps = JumpSpec(measure=measure, epsilon=min(eps_list))
    table = strong_error_experiment(
        spec, jumps, h_list, n_paths, args.seed, T=float(doc.get("T", 1.0)),
        epsilon_list=eps_list, ref_refine=int(doc.get("ref_refine", 4)))
    manifest = RunManifest.create("convergence", doc, {"spec": args.input},
                                  seed=args.seed, stamp=args.stamp)
    write_error_table_csv(args.out, table, manifest=manifest)
    print(f"error table written to {args.out}")
    if table.slope_h is not None:
        print(f"fitted slope of log error vs log h: {fmt4(table.slope_h)}")
    if table.slope_g is not None:
        print(f"fitted slope of log error vs log G(eps): {fmt4(table.slope_g)}")
    for eps, g in sorted(table.g_values.items()):
        print(f"  G({fmt4(eps)}) = {fmt4(g)}")
    return 0


def cmd_check(args) -> int:
    with open(args.input) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{args.input}: invalid JSON: {exc}") from exc
    found = False
    if "seasonality" in doc:
        model = read_fitted_model_json(args.input)
        _print_eig(mcarma_stationarity(assemble_companion(model.mcar_coefficients)),
                   "eigenvalues of the drift companion matrix:")
        found = True
    elif "A_blocks" in doc:
        coeffs, meta = read_model_json(args.input)
        if meta["a_sign"] == "table":
            print("(model file tabulates negated drift blocks; normalized on load)")
        _print_eig(mcarma_stationarity(assemble_companion(coeffs)),
                   "eigenvalues of the drift companion matrix:")
        found = True
    if "phi_blocks" in doc:
        rep = read_representation_json(args.input)
        _print_eig(var_stationarity(rep), "discrete companion eigenvalues:")
        found = True
    if not found:
        raise ValidationError(f"{args.input}: neither coefficient, representation "
                              "nor fitted-model file")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mcarma",
                                 description="VARMA/MCARMA transformation, simulation and estimation")
    ap.add_argument("--version", action="version", version=f"mcarma {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_out=True):
        p.add_argument("input", help="input file")
        if needs_out:
            p.add_argument("--out", required=True, help="output artifact path")
        p.add_argument("--config", default=None, help="config JSON file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="config override (JSON-parsed value)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--stamp", action="store_true",
                       help="record wall-clock time in the manifest (breaks byte-identical reruns)")

    t = sub.add_parser("transform", help="forward/inverse coefficient transformation")
    t.add_argument("--direction", choices=("forward", "inverse"), required=True)
    t.add_argument("--h", type=float, default=None, help="discretization step (default 1)")
    t.add_argument("--paper-mode", action="store_true",
                   help="use the published p=4, d=2, h=1 closed forms")
    common(t)
    t.set_defaults(fn=cmd_transform)

    f = sub.add_parser("fit", help="run the estimation pipeline on a data CSV")
    f.add_argument("--paper-mode", action="store_true")
    common(f)
    f.set_defaults(fn=cmd_fit)

    s = sub.add_parser("simulate", help="simulate model paths")
    s.add_argument("--h", type=float, default=None)
    s.add_argument("--T", type=float, default=None)
    s.add_argument("--paths", type=int, default=None, required=True)
    common(s)
    s.set_defaults(fn=cmd_simulate)

    c = sub.add_parser("convergence", help="strong-error experiment")
    c.add_argument("--paths", type=int, default=None)
    common(c)
    c.set_defaults(fn=cmd_convergence)

    k = sub.add_parser("check", help="stationarity report for a model or representation file")
    common(k, needs_out=False)
    k.set_defaults(fn=cmd_check)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except PipelineError as exc:
        cause = exc.__cause__
        code = 2 if isinstance(cause, ValidationError) else 1
        print(f"error: {exc}", file=sys.stderr)
        return code
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, McarmaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
