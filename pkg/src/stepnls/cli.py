"""Command-line driver: scatter, asymp, evolve, compare, selftest."""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import warnings
from pathlib import Path

import numpy as np

from . import background as bg
from .config import ConfigError, RunConfig, load_config

EXIT_OK, EXIT_ERROR, EXIT_TOLERANCE = 0, 1, 2


def fmt(v) -> str:
    return "%.17g" % v


def _csv_text(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(c if isinstance(c, str) else fmt(c) for c in row))
    return "\n".join(lines) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


class Outputs:
    """Collects files and writes them all at the end, so failures leave nothing behind."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.files: dict[str, str] = {}

    def csv(self, name, header, rows):
        self.files[name] = _csv_text(header, rows)

    def json(self, name, obj):
        self.files[name] = json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"

    def commit(self):
        self.out_dir.mkdir(parents=True, exist_ok=True)
        for name, text in self.files.items():
            fd, tmp = tempfile.mkstemp(dir=self.out_dir, prefix=".tmp_")
            with os.fdopen(fd, "w", newline="\n") as fh:
                fh.write(text)
            os.replace(tmp, self.out_dir / name)
        return sorted(self.files)


# ----------------------------------------------------------- builders

def make_objects(cfg: RunConfig):
    from .scattering import pure_step, sampled_datum, tanh_step

    p = bg.make_params(cfg.params.alpha, cfg.params.beta, cfg.params.delta)
    kind = cfg.datum.kind
    if kind == "pure_step":
        u0 = pure_step(p)
    elif kind == "tanh_step":
        u0 = tanh_step(p, cfg.datum.width)
    else:
        try:
            data = np.loadtxt(cfg.datum.path, delimiter=",", skiprows=1, ndmin=2)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read datum file: {exc}") from exc
        if data.shape[1] < 3:
            raise ConfigError("datum file needs columns x, re_u, im_u")
        u0 = sampled_datum(p, data[:, 0], data[:, 1] + 1j * data[:, 2])
    return p, u0


def grid_config(cfg: RunConfig):
    from .scattering import GridConfig

    g = cfg.grid
    return GridConfig(K_max=g.K_max, dk=g.dk, refine_floor=g.refine_floor, step_factor=g.step_factor)


def reflection_for(cfg: RunConfig, p, u0, threads: int):
    from .scattering import Reflection

    if cfg.datum.kind == "pure_step":
        return Reflection.pure_step(p)
    return Reflection(p, u0, step_factor=cfg.grid.step_factor, threads=threads)


# ----------------------------------------------------------- commands

def cmd_scatter(cfg: RunConfig, out: Outputs, threads: int, tol_scale: float):
    from .scattering import build_scattering_data, pure_step_reflection

    p, u0 = make_objects(cfg)
    sd = build_scattering_data(p, u0, grid_config(cfg), threads=threads, tol=1e-3 * tol_scale)
    rows = [(k, a.real, a.imag, b.real, b.imag, r.real, r.imag, abs(r))
            for k, a, b, r in zip(sd.kgrid, sd.a, sd.b, sd.r)]
    out.csv("scattering.csv", ["k", "re_a", "im_a", "re_b", "im_b", "re_r", "im_r", "abs_r"], rows)
    diag = dict(sd.meta)
    violations = list(diag["diagnostics"]["violations"])
    if cfg.datum.kind == "pure_step":
        dev = float(np.max(np.abs(sd.r - pure_step_reflection(p, sd.kgrid))))
        diag["closed_form_max_deviation"] = dev
        if dev > 1e-4 * tol_scale:
            violations.append(("closed_form", dev))
    diag["branch_coefficients"] = {f"E{w}_{s}": list(q) for (w, s), q in sd.q.items()}
    diag["K_max"] = sd.K_max
    out.json("scattering.json", diag)
    summary = {"command": "scatter", "n_k": int(sd.kgrid.size), "violations": len(violations)}
    return (EXIT_TOLERANCE if violations else EXIT_OK), summary


def cmd_asymp(cfg: RunConfig, out: Outputs, threads: int, tol_scale: float):
    from .asymptotics import (J_integral, halfline_family, matching_report, middle_quantities,
                              u_asymptotic)
    from .asymptotics.left import Dinf_left

    p, u0 = make_objects(cfg)
    r = reflection_for(cfg, p, u0, threads)
    rows, failures, dinf = [], [], []
    for xi in cfg.sweep.xi:
        for t in cfg.sweep.t:
            sec = bg.sector_of_xi(p, xi)
            if sec in (bg.Sector.TRANSITION_LM, bg.Sector.TRANSITION_MR):
                continue
            a = u_asymptotic(p, r, xi * t, t)
            u, s = a["leading"], a["sub"]
            rows.append((xi, t, u.real, u.imag, abs(u), s.real, s.imag, a["sector"]))
        sec = bg.sector_of_xi(p, xi)
        if sec is bg.Sector.MIDDLE:
            dinf.append((xi, abs(middle_quantities(p, r, xi).Dinf)))
        elif sec is bg.Sector.LEFT:
            dinf.append((xi, abs(Dinf_left(p, r, xi))))
    out.csv("sweep.csv", ["xi", "t", "re_u", "im_u", "abs_u", "re_sub", "im_sub", "sector"], rows)
    J, odd, res = J_integral(p, r)
    if res > 1e-2 * tol_scale:
        failures.append(("J_parity", res))
    match = matching_report(p, r)
    for m in match:
        if m["residual"] > 1e-3 * tol_scale:
            failures.append(("matching", m["edge"], m["residual"]))
    for xi, mod in dinf:
        if abs(mod - 1) > 1e-6 * tol_scale:
            failures.append(("|Dinf|", xi, mod))
    c, beta = halfline_family(cfg.halfline.alpha, cfg.halfline.omega)
    out.json("asymptotics.json", {
        "J": {"J": J, "J_over_pi2": J / math.pi**2, "odd_integer": odd, "residual": res},
        "matching": match,
        "Dinf_modulus": [{"xi": xi, "abs": m} for xi, m in dinf],
        "halfline": {"alpha": cfg.halfline.alpha, "omega": cfg.halfline.omega, "c": c, "beta": beta,
                     "left_edge": 4 * beta - 2 * cfg.halfline.alpha},
        "failures": failures,
    })
    summary = {"command": "asymp", "rows": len(rows), "J_odd": odd, "failures": len(failures)}
    return (EXIT_TOLERANCE if failures else EXIT_OK), summary


def _run_evolution(cfg: RunConfig, p, u0):
    from .evolution import evolve

    e = cfg.evolution
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        states = evolve(u0, p, e.L_left, e.L_right, e.dx, e.t_end, e.record_times, dt=e.dt)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return states


def _write_trajectory(out: Outputs, states):
    from .evolution import renormalized_mass

    manifest = {"times": [], "files": []}
    for st in states:
        name = f"trajectory_t{fmt(st.t)}.csv"
        out.csv(name, ["x", "re_u", "im_u"], zip(st.x, st.u.real, st.u.imag))
        manifest["times"].append(st.t)
        manifest["files"].append(name)
    st = states[-1]
    manifest.update({"dx": st.dx, "dt": st.dt, "n_x": int(st.x.size), "x_min": float(st.x[0]),
                     "x_max": float(st.x[-1]), "diagnostics": st.diagnostics,
                     "renormalized_mass": [renormalized_mass(s) for s in states]})
    out.json("trajectory.json", manifest)


def cmd_evolve(cfg: RunConfig, out: Outputs, threads: int, tol_scale: float):
    p, u0 = make_objects(cfg)
    states = _run_evolution(cfg, p, u0)
    _write_trajectory(out, states)
    return EXIT_OK, {"command": "evolve", "times": [s.t for s in states]}


def cmd_compare(cfg: RunConfig, out: Outputs, threads: int, tol_scale: float):
    from .evolution import compare_asymptotics, compare_halfline

    p, u0 = make_objects(cfg)
    states = _run_evolution(cfg, p, u0)
    r = reflection_for(cfg, p, u0, threads)
    states = [s for s in states if s.t in set(cfg.sweep.t)] or states
    table = compare_asymptotics(states, p, r, cfg.sweep.xi)
    rows = [(row["xi"], row["t"], row["x"], row["u_num"].real, row["u_num"].imag,
             row["res_lead"], row["res_full"], row["sector"]) for row in table["rows"]]
    out.csv("compare.csv", ["xi", "t", "x", "re_u_num", "im_u_num", "res_lead", "res_full", "sector"], rows)
    report = {"exponents": table["exponents"]}
    if bg.sector_of_xi(p, 0.0) is bg.Sector.LEFT:
        report["halfline"] = compare_halfline(states, p, r)
    out.json("compare.json", report)
    _write_trajectory(out, states)
    return EXIT_OK, {"command": "compare", "rows": len(rows)}


def cmd_selftest(cfg, out, threads, tol_scale):
    from .selftest import run_all

    results = run_all()
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}", file=sys.stderr)
    n_pass = sum(ok for _, ok, _ in results)
    summary = {"command": "selftest", "passed": n_pass, "registered": len(results)}
    return (EXIT_OK if n_pass == len(results) else EXIT_TOLERANCE), summary


COMMANDS = {"scatter": cmd_scatter, "asymp": cmd_asymp, "evolve": cmd_evolve,
            "compare": cmd_compare, "selftest": cmd_selftest}


def build_parser():
    ap = argparse.ArgumentParser(prog="stepnls", description=__doc__)
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="JSON run configuration")
    ap.add_argument("--out", default="out", help="output directory")
    ap.add_argument("--threads", type=int, default=None)
    ap.add_argument("--tolerance-scale", type=float, default=1.0)
    return ap


def resolve_threads(arg) -> int:
    if arg is not None:
        return max(1, arg)
    env = os.environ.get("NLS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            print(f"ignoring invalid NLS_THREADS={env!r}", file=sys.stderr)
    return 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not args.tolerance_scale > 0:
        print("error: --tolerance-scale must be positive", file=sys.stderr)
        return EXIT_ERROR
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(json.dumps({"command": args.command, "error": str(exc)}))
        return EXIT_ERROR
    out = Outputs(Path(args.out))
    try:
        code, summary = COMMANDS[args.command](cfg, out, resolve_threads(args.threads), args.tolerance_scale)
        summary["files"] = out.commit()
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(json.dumps({"command": args.command, "error": str(exc)}))
        return EXIT_ERROR
    summary["exit"] = code
    print(json.dumps(_jsonable(summary), sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
