"""Command-line front end: onset | coeffs | classify | branch | simulate | sweep | verify.

Single-record reports are JSON (complex numbers as {re, im} pairs, keys
snake_case); sweeps are CSV with one row per grid point.  Every file output
is referenced by a run manifest written next to it.  Exit codes: 0 success,
1 validation/usage error, 2 numerical failure, 3 self-verification failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .errors import (InadmissibleRegime, NonPositiveParameter, NoSaturation,
                     NumericalBlowup, O2HopfError, SingularSystem)
from .normalform import ROUTES, closed_form_constants, coeffs, coeffs_report
from .params import ModelParams, load_config, onset, validate
from .pdesim import (SimConfig, Simulator, initialize, mode_amplitude,
                     oscillation_frequency)
from .reduced import ReducedSystem, branches, classify_regime
from .spectral import dispersion_curve, onset_scan, turing_check


class BadFlag(O2HopfError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise BadFlag(f"{message}\n{self.format_usage()}")


def _jsonify(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, ModelParams):
        return {"alpha": obj.alpha, "beta": obj.beta, "delta1": obj.delta1,
                "delta2": obj.delta2, "half_length": obj.half_length}
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if hasattr(obj, "__dataclass_fields__"):
        return {k: _jsonify(getattr(obj, k)) for k in obj.__dataclass_fields__}
    return obj


def _emit(record, out_path=None, extra_outputs=(), command="", args_digest=""):
    text = json.dumps(_jsonify(record), indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
        _write_manifest(out_path, [out_path, *extra_outputs], command, args_digest)
    else:
        print(text)


def _write_manifest(anchor_path, outputs, command, args_digest):
    manifest = {
        "command": command,
        "config_hash": args_digest,
        "tool_version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "outputs": [os.path.abspath(p) for p in outputs],
    }
    path = os.path.abspath(anchor_path) + ".manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)


def _digest(ns) -> str:
    payload = json.dumps({k: v for k, v in sorted(vars(ns).items())
                          if k != "func"}, default=str, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _add_param_flags(p, need_beta=True):
    p.add_argument("--config", help="key = value parameter file")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--d1", "--delta1", dest="delta1", type=float)
    p.add_argument("--d2", "--delta2", dest="delta2", type=float)
    p.add_argument("--half-length", dest="half_length", type=float)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.need_beta = need_beta


def _params_from(ns, default_beta_to_beta1=False) -> ModelParams:
    if ns.config:
        base = load_config(ns.config)
        overrides = {k: getattr(ns, k) for k in
                     ("alpha", "beta", "delta1", "delta2", "half_length")
                     if getattr(ns, k) is not None}
        raw = {**_jsonify(base), **overrides}
    else:
        raw = {k: getattr(ns, k) for k in
               ("alpha", "beta", "delta1", "delta2", "half_length")
               if getattr(ns, k) is not None}
        if "alpha" not in raw:
            raise BadFlag("--alpha (or --config) is required")
    if "beta" not in raw:
        if not default_beta_to_beta1:
            raise BadFlag("--beta (or --config) is required")
        probe = ModelParams(beta=1.0, **{k: v for k, v in raw.items() if k != "beta"})
        raw["beta"] = onset(probe).beta1
    return validate(raw)


def cmd_onset(ns) -> int:
    params = _params_from(ns, default_beta_to_beta1=True)
    scan = onset_scan(params, beta=ns.scan_beta or params.beta, n_max=ns.n_max)
    record = {
        "params": params,
        "beta1": onset(params).beta1,
        "omega": onset(params).omega,
        "modes": [{"n": r.n, "re1": r.roots[0].real, "im1": r.roots[0].imag,
                   "re2": r.roots[1].real, "im2": r.roots[1].imag}
                  for r in scan.records],
        "critical_modes": scan.critical_modes,
        "certificate_margin": scan.certificate_margin,
        "verdict": scan.verdict,
        "turing": turing_check(params),
    }
    extra = []
    if ns.csv:
        with open(ns.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "k", "re_lambda_max", "im_lambda"])
            writer.writerows(dispersion_curve(params, params.beta, ns.n_max))
        extra.append(ns.csv)
    _emit(record, ns.out, extra, "onset", _digest(ns))
    return 0


def cmd_coeffs(ns) -> int:
    params = _params_from(ns, default_beta_to_beta1=True)
    if ns.route:
        if ns.route not in ROUTES:
            raise BadFlag(f"--route must be one of {ROUTES}")
        record = coeffs(params, ns.route)
    else:
        record = coeffs_report(params)
    extra = []
    if ns.csv:
        nf = record if ns.route else None
        with open(ns.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["alpha", "delta1", "delta2", "route",
                             "re_a", "im_a", "re_b", "im_b", "re_c", "im_c"])
            rows = ([(ns.route, nf.a, nf.b, nf.c)] if nf else
                    [(r, v["a"], v["b"], v["c"])
                     for r, v in record["routes"].items()])
            for route, a, b, c in rows:
                writer.writerow([params.alpha, params.delta1, params.delta2, route,
                                 a.real, a.imag, b.real, b.imag, c.real, c.imag])
        extra.append(ns.csv)
    _emit(record, ns.out, extra, "coeffs", _digest(ns))
    return 0


def _reduced_system(params: ModelParams, route: str, mu: float) -> ReducedSystem:
    return ReducedSystem.from_coeffs(coeffs(params, route), mu)


def cmd_classify(ns) -> int:
    params = _params_from(ns, default_beta_to_beta1=True)
    sys_ = _reduced_system(params, ns.route, ns.mu)
    record = {"params": params, "mu": ns.mu, "route": ns.route,
              "coefficients": {"a": sys_.a, "b": sys_.b, "c": sys_.c},
              "regime": classify_regime(sys_)}
    _emit(record, ns.out, (), "classify", _digest(ns))
    return 0


def cmd_branch(ns) -> int:
    params = _params_from(ns, default_beta_to_beta1=True)
    sys_ = _reduced_system(params, ns.route, ns.mu)
    record = {"params": params, "mu": ns.mu, "route": ns.route,
              "branches": branches(sys_)}
    _emit(record, ns.out, (), "branch", _digest(ns))
    return 0


def _parse_perturb(spec: str):
    kind, _, eps = spec.partition(":")
    if not eps:
        raise BadFlag("--perturb expects 'K:EPS' or 'random:EPS'")
    if kind == "random":
        return "random", 1, float(eps)
    return "traveling", int(kind), float(eps)


def cmd_simulate(ns) -> int:
    params = _params_from(ns, default_beta_to_beta1=True)
    base = onset(params)
    beta = base.beta1 + ns.mu if ns.mu is not None else params.beta
    kind, mode, eps = _parse_perturb(ns.perturb)
    config = SimConfig(n_grid=ns.n_grid, dt=ns.dt, t_max=ns.tmax, seed=ns.seed,
                       perturb_kind=kind, perturb_mode=mode, eps=eps,
                       pin_mean=ns.pin_mean)
    sim = Simulator(params, config, beta=beta)
    state = initialize(params, config, beta=beta)
    tracked = [0, 1, 2, 3]

    def observe(s):
        amps = [mode_amplitude(s, k) for k in tracked]
        return amps + [float(np.mean(s.u1)), float(np.mean(s.u2))]

    sample_every = max(int(round(0.1 / config.dt)), 1)
    state, times, samples = sim.run(state, config.t_max,
                                    sample_every=sample_every, observer=observe)

    csv_path = ns.series or (ns.out + ".series.csv" if ns.out else None)
    if csv_path:
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            header = ["t"]
            for k in tracked:
                header += [f"re_mode{k}", f"im_mode{k}"]
            header += ["mean_u1", "mean_u2"]
            writer.writerow(header)
            for t, row in zip(times, samples):
                flat = [t]
                for k in range(len(tracked)):
                    flat += [row[k].real, row[k].imag]
                flat += row[len(tracked):]
                writer.writerow(flat)

    amps1 = np.abs([row[1] for row in samples])
    n_tail = max(len(amps1) // 5, 8)
    summary = {
        "params": params, "beta": beta, "mu": beta - base.beta1,
        "config": config, "final_time": state.time,
        "saturated_amplitude": float(np.max(amps1[-n_tail:])),
        "mode1_final": samples[-1][1],
    }
    try:
        summary["frequency"] = oscillation_frequency(
            times[-n_tail:], np.asarray([row[1] for row in samples])[-n_tail:])
    except O2HopfError as exc:
        summary["frequency"] = None
        summary["frequency_note"] = str(exc)
    _emit(summary, ns.out, [csv_path] if csv_path else (), "simulate", _digest(ns))
    return 0


def _parse_grid(spec: str):
    """'name=lo:hi:count' -> (name, values)."""
    name, _, rng = spec.partition("=")
    parts = rng.split(":")
    if name not in ("alpha", "delta1", "delta2", "mu") or len(parts) != 3:
        raise BadFlag("--grid expects name=lo:hi:count with name in "
                      "{alpha, delta1, delta2, mu}")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    return name, list(np.linspace(lo, hi, count))


_SWEEP_FIELDS = [
    "index", "alpha", "delta1", "delta2", "half_length", "mu", "admissible",
    "beta1", "omega",
    "re_a", "im_a",
    "re_b_projection", "im_b_projection", "re_c_projection", "im_c_projection",
    "re_b_closed_form", "im_b_closed_form", "re_c_closed_form", "im_c_closed_form",
    "tw_exists", "sw_exists", "stable_families", "error",
]


def _sweep_point(index, values):
    row = {"index": index, "error": ""}
    row.update({k: values[k] for k in ("alpha", "delta1", "delta2", "half_length", "mu")})
    try:
        probe = ModelParams(alpha=values["alpha"], beta=1.0, delta1=values["delta1"],
                            delta2=values["delta2"], half_length=values["half_length"])
        data = onset(probe)
        row["beta1"], row["omega"] = data.beta1, data.omega
        row["admissible"] = data.admissible
        if not data.admissible:
            return row
        params = validate(probe.with_beta(data.beta1 + values["mu"]))
        nf = coeffs(params, "projection")
        cf = closed_form_constants(params)
        row.update(re_a=nf.a.real, im_a=nf.a.imag,
                   re_b_projection=nf.b.real, im_b_projection=nf.b.imag,
                   re_c_projection=nf.c.real, im_c_projection=nf.c.imag,
                   re_b_closed_form=cf["b"].real, im_b_closed_form=cf["b"].imag,
                   re_c_closed_form=cf["c"].real, im_c_closed_form=cf["c"].imag)
        sys_ = ReducedSystem.from_coeffs(nf, values["mu"])
        kinds = {b.kind for b in branches(sys_) if b.stability != "degenerate"}
        row["tw_exists"] = "rotating_wave_1" in kinds
        row["sw_exists"] = "standing_wave" in kinds
        row["stable_families"] = "|".join(classify_regime(sys_)["stable_families"])
    except O2HopfError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def cmd_sweep(ns) -> int:
    fixed = {"alpha": ns.alpha if ns.alpha is not None else 2.0,
             "delta1": ns.delta1 if ns.delta1 is not None else 1.0,
             "delta2": ns.delta2 if ns.delta2 is not None else 1.0,
             "half_length": ns.half_length if ns.half_length is not None else math.pi,
             "mu": ns.mu}
    axes = [_parse_grid(spec) for spec in ns.grid]
    points = [dict(fixed)]
    for name, vals in axes:
        points = [dict(p, **{name: v}) for v in vals for p in points]

    workers = max(int(os.environ.get("O2HOPF_THREADS", "4")), 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(lambda iv: _sweep_point(*iv), enumerate(points)))
    rows.sort(key=lambda r: r["index"])

    out = ns.out or "sweep.csv"
    with open(out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=_SWEEP_FIELDS, restval="")
        writer.writeheader()
        writer.writerows(rows)
    _write_manifest(out, [out], "sweep", _digest(ns))
    n_err = sum(1 for r in rows if r["error"])
    print(f"wrote {len(rows)} rows to {out} ({n_err} with per-point errors)")
    return 0


def _verify_checks(quick: bool):
    """Golden self-checks; yields (name, passed, detail)."""
    canonical = validate({"alpha": 2.0, "beta": 7.0})
    data = onset(canonical)
    cf = closed_form_constants(canonical)
    rt3 = math.sqrt(3.0)

    def close(x, y, tol=1e-12):
        return abs(x - y) <= tol * (1.0 + abs(y))

    yield ("beta1", close(data.beta1, 7.0), f"{data.beta1}")
    yield ("omega", close(data.omega, rt3), f"{data.omega}")
    golden = {"N_r": 66.0, "N_i": 12.0, "B_r": 18.0, "B_i": -33.0,
              "C_2r": -192.0, "C_2i": 72.0 * rt3, "P2_0": 12.0,
              "Q_r": 42.0, "Q_i": -20.0 * rt3}
    for key, want in golden.items():
        yield (key, close(cf[key], want), f"{cf[key]} vs {want}")
    yield ("re_b_closed_form", close(cf["b"].real, -17.0 / 8.0), f"{cf['b'].real}")
    yield ("re_c_closed_form", close(cf["c"].real, 11.0 / 4.0), f"{cf['c'].real}")

    report = coeffs_report(canonical)
    proj, direct = report["routes"]["projection"], report["routes"]["direct"]
    yield ("re_a_half", proj["a"].real == 0.5, f"{proj['a']}")
    for name in ("a", "b", "c"):
        gap = abs(proj[name] - direct[name])
        yield (f"route_agreement_{name}",
               gap <= 1e-10 * (1.0 + abs(direct[name])), f"gap {gap:.3e}")
    yield ("psi_residuals",
           max(report["psi_residuals"].values()) <= 1e-12,
           f"max {max(report['psi_residuals'].values()):.3e}")
    yield ("mean_zero_obstruction",
           report["mean_zero_obstruction"]["verdict"] == "present",
           report["mean_zero_obstruction"]["verdict"])

    scan = onset_scan(canonical, beta=7.0, n_max=16)
    yield ("hopf_onset", scan.verdict == "hopf_onset" and scan.critical_modes == [-1, 1],
           scan.verdict)
    yield ("no_turing", turing_check(canonical).both_positive_real_part, "")

    if not quick:
        from .pdesim import measure_growth_rate
        rate, predicted = measure_growth_rate(canonical, 7.05, 1)
        yield ("pde_linear_rate",
               abs(rate - predicted) <= 0.05 * abs(predicted),
               f"measured {rate:.5f} vs {predicted:.5f}")


def cmd_verify(ns) -> int:
    failed = 0
    for name, ok, detail in _verify_checks(ns.quick):
        print(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f"  ({detail})" if detail else ""))
        if not ok:
            failed += 1
    if failed:
        print(f"{failed} check(s) failed")
        return 3
    print("all checks passed")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="o2hopf",
                     description="O(2)-Hopf analysis of the diffusive Brusselator")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("onset", help="dispersion scan and onset verdict")
    _add_param_flags(p)
    p.add_argument("--scan-beta", type=float, help="scan at this beta instead")
    p.add_argument("--n-max", type=int, default=64)
    p.add_argument("--csv", help="also write the dispersion curve as CSV")
    p.set_defaults(func=cmd_onset)

    p = sub.add_parser("coeffs", help="normal-form coefficient report")
    _add_param_flags(p)
    p.add_argument("--route", choices=ROUTES, help="emit a single route only")
    p.add_argument("--csv", help="also write a one-row-per-route CSV")
    p.set_defaults(func=cmd_coeffs)

    for name, func in (("classify", cmd_classify), ("branch", cmd_branch)):
        p = sub.add_parser(name)
        _add_param_flags(p)
        p.add_argument("--mu", type=float, default=0.1)
        p.add_argument("--route", choices=ROUTES, default="projection")
        p.set_defaults(func=func)

    p = sub.add_parser("simulate", help="pseudospectral PDE run")
    _add_param_flags(p)
    p.add_argument("--mu", type=float, help="beta = beta1 + mu")
    p.add_argument("--n-grid", type=int, default=128)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--tmax", type=float, default=200.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--perturb", default="1:1e-4", help="'K:EPS' or 'random:EPS'")
    p.add_argument("--pin-mean", action="store_true",
                   help="hold the spatial means at the uniform state, "
                        "suppressing the unstable k=0 oscillation")
    p.add_argument("--series", help="CSV path for the time series")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="parameter-grid CSV of onset/coefficients")
    _add_param_flags(p)
    p.add_argument("--mu", type=float, default=0.1)
    p.add_argument("--grid", action="append", required=True,
                   help="name=lo:hi:count (repeatable)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the golden self-check suite")
    p.add_argument("--quick", action="store_true", help="skip the PDE checks")
    p.set_defaults(func=cmd_verify)

    return parser


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if not getattr(ns, "command", None):
            parser.print_usage()
            return 1
        return ns.func(ns)
    except BadFlag as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (NonPositiveParameter, InadmissibleRegime, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 1
    except (NumericalBlowup, SingularSystem, NoSaturation) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
