"""Command-line front end.

    ebhpairs spectrum   --U 2 --V 2 --K-count 65
    ebhpairs scatter    --preset fig2 --format json --out sigma.json
    ebhpairs bound      --U -4 --V 4 --K 0 0.75 --wavefunction
    ebhpairs resonances --U 2 --V 2 --scan
    ebhpairs validate   --preset fig1

Momenta on the command line are in units of pi/d.  Tables are written as
CSV with '#'-prefixed metadata lines, or as JSON with the same content.
Exit codes: 0 success, 1 validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources

import numpy as np

from . import __version__
from .bound import (
    FLAT_BAND_TOL,
    band_edge_limit,
    bound_states,
    bound_wavefunction,
    existence_report,
)
from .errors import EBHError, WUndefinedError
from .model import ModelParams, continuum_band, density_of_states, k_sector
from .scattering import phase_shift_sweep, resonance_momentum, pair_coupling_W
from .validation import run_suite

CONVENTIONS = {
    "units": "--U/--V are given in units of J; output energies share the unit of J, momenta K, k are in 1/d",
    "dos": "rho(E,K) = d(kd)/dE = [(2 J_K)^2 - E^2]^(-1/2), integral over band = pi",
    "phase_shift_branch": "principal value in (-pi/2, pi/2] unless continuous",
    "missing": "empty CSV cell / JSON null marks an undefined value",
}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- output


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "" if not math.isfinite(value) else "%.17g" % (value + 0.0)
    return str(value)


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value) if math.isfinite(value) else None
    return value


def write_table(columns, rows, metadata, fmt="csv", out=None) -> str:
    """Render a table; write it to ``out`` when given and return the text."""
    if fmt == "json":
        doc = {
            "metadata": {k: _json_value(v) for k, v in metadata.items()},
            "columns": list(columns),
            "rows": [{c: _json_value(v) for c, v in zip(columns, r)} for r in rows],
        }
        text = json.dumps(doc, indent=1) + "\n"
    else:
        lines = [f"# {k}: {_fmt(v)}" for k, v in metadata.items()]
        lines.append(",".join(columns))
        lines.extend(",".join(_fmt(v) for v in r) for r in rows)
        text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    return text


# ---------------------------------------------------------------- config


def load_presets(path=None) -> configparser.ConfigParser:
    cp = configparser.ConfigParser()
    if path:
        if not cp.read(path):
            raise UsageError(f"cannot read preset file {path}")
    else:
        cp.read_string(resources.files("ebhpairs").joinpath("presets.ini").read_text())
    return cp


def _parse_sets(text: str):
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk:
            U, V = (float(x) for x in chunk.split())
            out.append((U, V))
    return out


def _parse_floats(text: str):
    return [float(x) for x in text.replace(";", " ").split()]


def _apply_config(args):
    """Fill unset options from a key-value config file ([run] section)."""
    if not args.config:
        return
    cp = configparser.ConfigParser()
    cp.optionxform = str  # option names are case-sensitive (U vs u, K vs k)
    if not cp.read(args.config):
        raise UsageError(f"cannot read config file {args.config}")
    if "run" not in cp:
        raise UsageError("config file needs a [run] section")
    for key, raw in cp["run"].items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise UsageError(f"unknown config key {key!r}")
        if getattr(args, attr) not in (None, False):
            continue
        if attr in ("K", "U_range", "V_range"):
            value = _parse_floats(raw)
        elif attr in ("wavefunction", "continuous", "scan"):
            value = cp["run"].getboolean(key)
        elif attr in ("K_count", "k_count", "rho_samples", "i_max", "threads", "L"):
            value = int(raw)
        elif attr in ("format", "out", "preset", "presets_file", "boundary"):
            value = raw
        else:
            value = float(raw)
        setattr(args, attr, value)


def _param_sets(args):
    J = args.J if args.J is not None else 1.0
    d = args.d if args.d is not None else 1.0
    if args.preset:
        cp = load_presets(args.presets_file)
        if args.preset not in cp:
            raise UsageError(f"unknown preset {args.preset!r}; have {cp.sections()}")
        sets = _parse_sets(cp[args.preset].get("sets", ""))
        if not sets:
            raise UsageError(f"preset {args.preset!r} has no parameter sets")
    else:
        sets = [(args.U if args.U is not None else 0.0, args.V if args.V is not None else 0.0)]
    try:
        return [ModelParams(J=J, U=U * J, V=V * J, d=d) for U, V in sets]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _preset_K(args):
    if args.preset:
        sec = load_presets(args.presets_file)[args.preset]
        if "K" in sec:
            return _parse_floats(sec["K"])
    return None


def _K_values(args, d, default_count, lo=0.0, hi=1.0):
    """Grid of K in 1/length from explicit --K or --K-count over [K-min, K-max] (pi/d units)."""
    if getattr(args, "K", None):
        vals = np.asarray(args.K, dtype=float)
    else:
        preset = _preset_K(args)
        if preset is not None:
            vals = np.asarray(preset)
        else:
            count = args.K_count if args.K_count is not None else default_count
            kmin = args.K_min if args.K_min is not None else lo
            kmax = args.K_max if args.K_max is not None else hi
            if count < 1:
                raise UsageError("K grid must be non-empty")
            vals = np.linspace(kmin, kmax, count) if count > 1 else np.array([kmin])
    if np.any(np.abs(vals) > 1.0):
        raise UsageError("K values must lie in [-1, 1] (units of pi/d)")
    return vals * math.pi / d


def _map(fn, tasks, threads):
    tasks = list(tasks)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, tasks))
    return [fn(t) for t in tasks]


def _metadata(command, args, sets, **extra):
    meta = {
        "tool": f"ebhpairs {__version__}",
        "command": command,
        "J": sets[0].J,
        "d": sets[0].d,
        "parameter_sets": "; ".join(f"U={p.U:.17g} V={p.V:.17g}" for p in sets),
    }
    if args.preset:
        meta["preset"] = args.preset
    meta.update(extra)
    meta.update(CONVENTIONS)
    return meta


# ---------------------------------------------------------------- commands


def _family_energies(p, s):
    if s.JK < FLAT_BAND_TOL * p.J:
        lim = band_edge_limit(p)
        return lim.get(1), lim.get(2)
    e = {b.family: b.energy for b in bound_states(p, s)}
    return e.get(1), e.get(2)


def cmd_spectrum(args):
    sets = _param_sets(args)
    n_rho = args.rho_samples if args.rho_samples is not None else 5
    fractions = [(j + 0.5) / n_rho for j in range(n_rho)]
    columns = ["U", "V", "K", "JK", "band_min", "band_max", "E1", "E2"]
    columns += [f"rho_{j + 1}" for j in range(n_rho)]

    def row(task):
        p, K = task
        s = k_sector(p, K)
        band = continuum_band(s)
        E1, E2 = _family_energies(p, s)
        rho = []
        for f in fractions:
            E = band.E_min + f * band.width
            rho.append(density_of_states(s, E) if band.width > 0 else None)
        return [p.U, p.V, s.K, s.JK, band.E_min, band.E_max, E1, E2] + rho

    tasks = [(p, K) for p in sets for K in _K_values(args, sets[0].d, 65)]
    rows = _map(row, tasks, args.threads)
    meta = _metadata("spectrum", args, sets,
                     rho_sample_energies="E_min + f (E_max - E_min), f = "
                     + " ".join(f"{f:g}" for f in fractions),
                     families="E1 exists for all K; E2 blank where family 2 is absent")
    return columns, rows, meta


def cmd_scatter(args):
    sets = _param_sets(args)
    n_k = args.k_count if args.k_count is not None else 2048
    if n_k < 1:
        raise UsageError("k grid must be non-empty")
    d = sets[0].d
    kd = np.linspace(0.0, math.pi, n_k + 2)[1:-1]
    columns = ["U", "V", "K", "k", "delta0", "delta", "sigma", "flag"]

    def block(task):
        p, K = task
        s = k_sector(p, K)
        try:
            sh = phase_shift_sweep(p, s, kd / d, continuous=args.continuous)
        except EBHError as exc:
            flag = str(exc).split(":")[0]
            return [[p.U, p.V, s.K, x / d, None, None, None, flag] for x in kd]
        sigma = np.sin(sh.delta) ** 2
        return [[p.U, p.V, s.K, x / d, a, b, c, ""]
                for x, a, b, c in zip(kd, sh.delta0, sh.delta, sigma)]

    tasks = [(p, K) for p in sets for K in _K_values(args, d, 33)]
    rows = [r for blk in _map(block, tasks, args.threads) for r in blk]
    meta = _metadata("scatter", args, sets, k_grid=f"{n_k} interior points of (0, pi/d)",
                     continuous_branch=bool(args.continuous))
    return columns, rows, meta


def cmd_bound(args):
    sets = _param_sets(args)
    i_max = args.i_max if args.i_max is not None else 20
    columns = ["U", "V", "K", "JK", "family", "alpha", "E", "phi0", "norm"]
    if args.wavefunction:
        columns += [f"psi_{i}" for i in range(i_max + 1)]

    def block(task):
        p, K = task
        s = k_sector(p, K)
        out = []
        if s.JK < FLAT_BAND_TOL * p.J:
            for fam, E in band_edge_limit(p).items():
                r = [p.U, p.V, s.K, s.JK, fam, None, E, None, None]
                out.append(r + [None] * (i_max + 1) if args.wavefunction else r)
            return out
        for b in bound_states(p, s):
            r = [p.U, p.V, s.K, s.JK, b.family, b.alpha, b.energy, b.phi0, b.norm]
            if args.wavefunction:
                try:
                    r += list(bound_wavefunction(b, np.arange(i_max + 1)))
                except EBHError:
                    r += [None] * (i_max + 1)
            out.append(r)
        return out

    tasks = [(p, K) for p in sets for K in _K_values(args, sets[0].d, 9)]
    rows = [r for blk in _map(block, tasks, args.threads) for r in blk]
    meta = _metadata("bound", args, sets,
                     wavefunction="psi_i = psi(r_i) for i = 0..i_max, psi(-r) = psi(r)"
                     if args.wavefunction else "off")
    return columns, rows, meta


RESONANCE_COLUMNS = ["U", "V", "W", "K_R_bottom", "K_R_top", "K_c", "family2_all_K",
                     "family2_side", "n_states_K0", "n_states_Kpi", "status"]


def resonance_row(p):
    try:
        W = pair_coupling_W(p)
    except WUndefinedError:
        return [p.U, p.V, None, None, None, None, None, None, None, None, "W undefined"]
    res = resonance_momentum(p)
    rep = existence_report(p, [0.0, math.pi / p.d])
    return [p.U, p.V, W, res.bottom, res.top, rep.Kc, rep.family2_all_K,
            rep.family2_side, rep.n_states[0], rep.n_states[1], "ok"]


def cmd_resonances(args):
    sets = _param_sets(args)
    J, d = sets[0].J, sets[0].d
    extra = {}
    if args.scan:
        u_rng, v_rng = args.U_range, args.V_range
        if args.preset:
            sec = load_presets(args.presets_file)[args.preset]
            u_rng = u_rng or (_parse_floats(sec["scan_U"]) if "scan_U" in sec else None)
            v_rng = v_rng or (_parse_floats(sec["scan_V"]) if "scan_V" in sec else None)
        u_rng = u_rng or [-10.0, 10.0, 41]
        v_rng = v_rng or [-10.0, 10.0, 41]
        if len(u_rng) != 3 or len(v_rng) != 3 or u_rng[2] < 1 or v_rng[2] < 1:
            raise UsageError("scan ranges take three numbers: min max count")
        Us = np.linspace(u_rng[0], u_rng[1], int(u_rng[2]))
        Vs = np.linspace(v_rng[0], v_rng[1], int(v_rng[2]))
        sets = [ModelParams(J=J, U=U * J, V=V * J, d=d) for U in Us for V in Vs]
        extra["scan"] = f"U/J in [{u_rng[0]:g}, {u_rng[1]:g}] x{int(u_rng[2])}, " \
                        f"V/J in [{v_rng[0]:g}, {v_rng[1]:g}] x{int(v_rng[2])}"
    rows = _map(resonance_row, sets, args.threads)
    meta = _metadata("resonances", args, sets[:1] if args.scan else sets, **extra)
    meta["K_c"] = "blank with family2_all_K=true when the second family exists at every K"
    return RESONANCE_COLUMNS, rows, meta


def cmd_validate(args):
    preset_sets = _param_sets(args) if args.preset else None
    L = args.L if args.L is not None else 201
    if L % 2 == 0 or L < 11:
        raise UsageError("L must be odd and at least 11")
    results = run_suite(tol=args.tol, L=L, preset_sets=preset_sets)
    report = {
        "tool": f"ebhpairs {__version__}",
        "passed": all(r.passed for r in results),
        "checks": [r.as_dict() for r in results],
    }
    return results, report


COMMANDS = {
    "spectrum": cmd_spectrum,
    "scatter": cmd_scatter,
    "bound": cmd_bound,
    "resonances": cmd_resonances,
    "validate": cmd_validate,
}


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("model and output")
    g.add_argument("--U", type=float, help="on-site interaction in units of J (default 0)")
    g.add_argument("--V", type=float, help="nearest-neighbour interaction in units of J (default 0)")
    g.add_argument("--J", type=float, help="hopping energy (default 1)")
    g.add_argument("--d", type=float, help="lattice constant (default 1)")
    g.add_argument("--out", help="output file (default stdout)")
    g.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    g.add_argument("--preset", help="named parameter bundle from the preset file")
    g.add_argument("--presets-file", dest="presets_file", help="alternative preset INI file")
    g.add_argument("--threads", type=int, help="worker threads for sweeps (default 1)")
    g.add_argument("--config", help="INI file with a [run] section of option = value lines")

    kgrid = argparse.ArgumentParser(add_help=False)
    kg = kgrid.add_argument_group("center-of-mass grid (units of pi/d)")
    kg.add_argument("--K", type=float, nargs="+", help="explicit K values")
    kg.add_argument("--K-count", dest="K_count", type=int, help="number of K points")
    kg.add_argument("--K-min", dest="K_min", type=float, help="grid start (default 0)")
    kg.add_argument("--K-max", dest="K_max", type=float, help="grid end (default 1)")

    parser = argparse.ArgumentParser(
        prog="ebhpairs",
        description="Two-particle scattering and bound states of the 1D extended Bose-Hubbard model.",
    )
    parser.add_argument("--version", action="version", version=f"ebhpairs {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common, kgrid], help="continuum, DOS and bound energies vs K")
    p.add_argument("--rho-samples", dest="rho_samples", type=int, help="DOS samples per K (default 5)")

    p = sub.add_parser("scatter", parents=[common, kgrid], help="phase shifts and cross-section on a (K, k) grid")
    p.add_argument("--k-count", dest="k_count", type=int, help="interior k points (default 2048)")
    p.add_argument("--continuous", action="store_true", help="unwrap phase shifts along k")

    p = sub.add_parser("bound", parents=[common, kgrid], help="bound states per K")
    p.add_argument("--wavefunction", action="store_true", help="append psi(r_i) columns")
    p.add_argument("--i-max", dest="i_max", type=int, help="largest |i| for psi columns (default 20)")

    p = sub.add_parser("resonances", parents=[common], help="W, K_R, K_c and existence summary")
    p.add_argument("--scan", action="store_true", help="scan a (U, V) grid")
    p.add_argument("--U-range", dest="U_range", type=float, nargs=3, metavar=("MIN", "MAX", "N"))
    p.add_argument("--V-range", dest="V_range", type=float, nargs=3, metavar=("MIN", "MAX", "N"))

    p = sub.add_parser("validate", parents=[common], help="run the cross-check suite")
    p.add_argument("--tol", type=float, help="override every tolerance")
    p.add_argument("--L", type=int, help="ring size for the diagonalization oracle (default 201)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = None
    try:
        _apply_config(args)
        fmt = args.format or "csv"
        if args.threads is not None and args.threads < 1:
            raise UsageError("--threads must be positive")
        if args.command == "validate":
            results, report = cmd_validate(args)
            text = json.dumps(report, indent=1) + "\n"
            if args.out:
                with open(args.out, "w") as fh:
                    fh.write(text)
                for r in results:
                    print(r.line(), file=sys.stderr)
            else:
                sys.stdout.write(text)
            return 0 if report["passed"] else 1
        columns, rows, meta = COMMANDS[args.command](args)
        text = write_table(columns, rows, meta, fmt, args.out)
        if not args.out:
            sys.stdout.write(text)
        return 0
    except (UsageError, EBHError) as exc:
        print(f"ebhpairs: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"ebhpairs: I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
