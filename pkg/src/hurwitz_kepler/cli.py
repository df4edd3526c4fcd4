"""Command-line front end: JSON run configs, machine-readable outputs.

Subcommands: ``transform`` (bilinear map sweeps), ``spectrum`` (analytic
vs finite-difference eigenvalues), ``qes`` (quasi-exactly-solvable
blocks) and ``duality`` (three-way oscillator / spherical / parabolic
agreement).  Exit codes are a stable contract: 0 success, 2 config
error, 3 separability violation, 4 violated QES precondition, 5 bracket
failure, 1 anything else.  Numeric fields are serialized with 17
significant digits and every JSON document carries ``schema_version``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import build_gamma_set, hurwitz_forward_batch
from .analytic import (
    QesPrimedParams,
    QuantumNumbers,
    dual_map,
    effective_lprime,
    qes_map_sub2,
    qes_map_super2,
    qes_solve,
    singular_oscillator_energy,
)
from .errors import (
    AccuracyError,
    BracketError,
    ConfigError,
    QesPreconditionError,
    SeparabilityError,
)
from .numeric import (
    Grid,
    build_radial_problem,
    fd_eigensolve,
    parabolic_joint_solve,
    qes_verification_problem,
    spherical_micz_energies,
)
from .potentials import (
    MiczParams,
    OscillatorModel,
    Potential8D,
    micz_from_dict,
    model_from_dict,
    potential_from_dict,
    require_spherically_separable,
)

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# serialization: 17 significant digits everywhere


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        if not math.isfinite(v):
            raise ValueError("cannot serialize non-finite float")
        return format(float(v), ".17g")
    raise TypeError(f"unsupported scalar {type(v)!r}")


def _to_json(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        items = [f'{pad}  {json.dumps(str(k))}: {_to_json(v, indent + 1).lstrip()}' for k, v in obj.items()]
        return pad + "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        items = [_to_json(v, indent + 1) for v in obj]
        return pad + "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, str):
        return pad + json.dumps(obj)
    if obj is None:
        return pad + "null"
    return pad + _fmt(obj)


def write_json(path: Path, obj: dict) -> None:
    path.write_text(_to_json(obj) + "\n")


def write_csv(path: Path, header: list, rows: list) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if not isinstance(v, str) else v for v in row))
    path.write_text("\n".join(lines) + "\n")


def _load_config(path: str, allowed: set, required: set = frozenset()) -> dict:
    try:
        cfg = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigError(f"unknown config key(s): {sorted(unknown)}")
    missing = required - set(cfg)
    if missing:
        raise ConfigError(f"missing config key(s): {sorted(missing)}")
    return cfg


def _grid_from(cfg: dict, default_n: int) -> Grid:
    g = cfg.get("grid", {})
    if not isinstance(g, dict):
        raise ConfigError("grid block must be an object")
    unknown = set(g) - {"n", "spacing", "stretch", "rmax"}
    if unknown:
        raise ConfigError(f"unknown grid key(s): {sorted(unknown)}")
    return Grid(
        n=int(g.get("n", default_n)),
        spacing=str(g.get("spacing", "uniform")),
        stretch=float(g.get("stretch", 6.0)),
    )


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# transform


def cmd_transform(args) -> int:
    cfg = _load_config(args.config, {"u", "v", "count", "seed"})
    tol = args.tol if args.tol is not None else 1e-10
    if "u" in cfg or "v" in cfg:
        if not ("u" in cfg and "v" in cfg):
            raise ConfigError("supply both u and v, or neither")
        u = np.asarray(cfg["u"], dtype=float)
        v = np.asarray(cfg["v"], dtype=float)
        if u.shape != (8,) or v.shape != (8,):
            raise ConfigError("u and v must each have exactly 8 components")
        U, V = u[None, :], v[None, :]
    else:
        count = int(cfg.get("count", 1000))
        seed = int(args.seed if args.seed is not None else cfg.get("seed", 0))
        rng = np.random.default_rng(seed)
        U = rng.normal(size=(count, 8))
        V = rng.normal(size=(count, 8))
    X = hurwitz_forward_batch(U, V, build_gamma_set())
    norm2 = np.einsum("nk,nk->n", X, X)
    ref = (np.einsum("ns,ns->n", U, U) + np.einsum("ns,ns->n", V, V)) ** 2
    resid = np.where(ref > 0.0, np.abs(norm2 - ref) / np.where(ref > 0, ref, 1.0), 0.0)

    header = (
        [f"u{i}" for i in range(1, 9)]
        + [f"v{i}" for i in range(1, 9)]
        + [f"x{i}" for i in range(1, 10)]
        + ["r", "x9", "residual"]
    )
    r = np.sqrt(norm2)
    rows = [
        list(U[i]) + list(V[i]) + list(X[i]) + [r[i], X[i, 8], resid[i]]
        for i in range(U.shape[0])
    ]
    write_csv(_out_dir(args) / "transform.csv", header, rows)
    worst = float(np.max(resid))
    print(f"transform: {U.shape[0]} rows, max residual {worst:.3e}")
    return 0 if worst <= tol else 1


# ---------------------------------------------------------------------------
# spectrum


def _spectrum_oscillator(cfg: dict, args) -> tuple:
    pot = potential_from_dict(cfg["potential"])
    n_max = int(cfg.get("n_max", 2))
    l_max = int(cfg.get("l_max", 1))
    grid = _grid_from(cfg, 4000)
    rmax = cfg.get("grid", {}).get("rmax")
    rows = []
    worst = 0.0
    for L in range(l_max + 1):
        prob = build_radial_problem("osc8", potential=pot, L=L, rmax=rmax)
        spec = fd_eigensolve(prob, grid, n_max + 1)
        for N in range(n_max + 1):
            z_exact = singular_oscillator_energy(QuantumNumbers(N=N, L=L), pot.omega, pot.c)
            z_fd = float(spec.eigenvalues[N])
            dev = abs(z_fd - z_exact) / abs(z_exact)
            worst = max(worst, dev)
            rows.append([N, L, z_exact, z_fd, dev])
    return ["N", "L", "analytic", "fd", "rel_dev"], rows, worst


def _spectrum_micz(cfg: dict, args) -> tuple:
    micz = micz_from_dict(cfg["micz"])
    if "model" in cfg:
        model = model_from_dict(cfg["model"])
        require_spherically_separable(model)
        if model.Z != 0.0 and abs(model.Z - micz.Z) > 1e-12 * max(1.0, abs(micz.Z)):
            raise ConfigError("model charge Z1+Z2 disagrees with the micz block Z")
    n_states = int(cfg.get("n_states", 2))
    grid = _grid_from(cfg, 4000)
    smax = n_states + 5.0
    rmax = float(cfg.get("grid", {}).get("rmax") or 55.0 * smax / max(abs(micz.Z), 1e-6))
    states = spherical_micz_energies(
        micz,
        n_theta=n_states,
        n_radial=n_states,
        grid_theta=Grid(n=3000),
        grid_radial=grid,
        rmax=rmax,
    )
    rows = []
    worst = 0.0
    for E, itheta, N, lam in states[: n_states * 2]:
        lam_eff = 0.5 * (-7.0 + math.sqrt(49.0 + 4.0 * max(lam, 0.0)))
        e_closed = -micz.Z**2 / (2.0 * (N + lam_eff + 4.0) ** 2)
        dev = abs(E - e_closed) / abs(e_closed)
        worst = max(worst, dev)
        rows.append([itheta, N, lam, e_closed, E, dev])
    return ["theta_index", "N", "lambda", "analytic", "fd", "rel_dev"], rows, worst


def cmd_spectrum(args) -> int:
    cfg = _load_config(
        args.config,
        {"problem", "potential", "model", "micz", "n_max", "l_max", "n_states", "grid", "tolerance"},
        {"problem"},
    )
    tol = args.tol if args.tol is not None else float(cfg.get("tolerance", 1e-6))
    problem = cfg["problem"]
    if problem == "oscillator":
        header, rows, worst = _spectrum_oscillator(cfg, args)
    elif problem == "micz":
        header, rows, worst = _spectrum_micz(cfg, args)
    else:
        raise ConfigError("problem must be 'oscillator' or 'micz'")
    out = _out_dir(args)
    if args.format in ("csv", "both"):
        write_csv(out / "spectrum.csv", header, rows)
    if args.format in ("json", "both"):
        write_json(
            out / "spectrum.json",
            {
                "schema_version": SCHEMA_VERSION,
                "problem": problem,
                "columns": header,
                "rows": rows,
                "max_rel_dev": worst,
            },
        )
    for row in rows:
        print("  ".join(_fmt(v) if not isinstance(v, str) else v for v in row))
    print(f"spectrum: {len(rows)} rows, max relative deviation {worst:.3e}")
    return 0 if worst <= tol else 1


# ---------------------------------------------------------------------------
# qes


def cmd_qes(args) -> int:
    cfg = _load_config(
        args.config,
        {"family", "a_prime", "b_prime", "c_prime", "l_prime", "N", "dim", "grid"},
        {"family", "a_prime", "b_prime", "N"},
    )
    tol = args.tol if args.tol is not None else 1e-5
    family = str(cfg["family"]).lower()
    params = QesPrimedParams(
        a_p=float(cfg["a_prime"]),
        b_p=float(cfg["b_prime"]),
        c_p=float(cfg.get("c_prime", 0.0)),
        N=int(cfg["N"]),
        dim=int(cfg.get("dim", 8)),
        l_p=float(cfg.get("l_prime", 0.0)),
    )
    if family == "sub2":
        pot, d_const = qes_map_sub2(params)
    elif family == "super2":
        pot, d_const = qes_map_super2(params), None
    else:
        raise ConfigError("family must be 'sub2' or 'super2'")
    sol = qes_solve(params, family)

    grid = _grid_from(cfg, 3000)
    rmax = cfg.get("grid", {}).get("rmax")
    rows = []
    worst = 0.0
    for i, energy in enumerate(sol.energies):
        if sol.charges is not None:
            pot_i = Potential8D(
                variant="sub2", omega=pot.omega, a=pot.a, b=float(sol.charges[i]), c=pot.c
            )
        else:
            pot_i = pot
        fd_dev = ""
        if args.verify:
            span = float(rmax or (12.0 / math.sqrt(pot_i.omega)))
            spec = fd_eigensolve(
                qes_verification_problem(pot_i, params.dim, span), grid, len(sol.energies) + 2
            )
            fd_dev = float(np.min(np.abs(spec.eigenvalues - energy)) / abs(energy))
            worst = max(worst, fd_dev)
        rows.append(
            [
                i,
                energy,
                pot_i.omega,
                pot_i.a,
                pot_i.b,
                pot_i.c,
                " ".join(_fmt(c) for c in sol.polynomials[i]),
                fd_dev if fd_dev != "" else "",
            ]
        )
    out = _out_dir(args)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "family": family,
        "primed": {
            "a_prime": params.a_p,
            "b_prime": params.b_p,
            "c_prime": params.c_p,
            "l_prime": params.l_p,
            "N": params.N,
            "dim": params.dim,
        },
        "mapped_potential": {
            "omega": pot.omega,
            "a": pot.a,
            "b": pot.b,
            "c": pot.c,
        },
        "energy_offset_d": d_const,
        "energies": list(sol.energies),
        "charges": None if sol.charges is None else list(sol.charges),
        "polynomials": [list(p) for p in sol.polynomials],
        "closure_residual": sol.closure_residual,
        "fd_max_rel_dev": worst if args.verify else None,
    }
    write_json(out / "qes.json", doc)
    if args.format in ("csv", "both"):
        write_csv(
            out / "qes.csv",
            ["state", "energy", "omega", "a", "b", "c", "poly_coeffs", "fd_rel_dev"],
            rows,
        )
    for row in rows:
        print("  ".join(str(v) for v in row))
    print(f"qes: {len(rows)} state(s), closure residual {sol.closure_residual:.3e}")
    if args.verify and worst > tol:
        return 1
    return 0


# ---------------------------------------------------------------------------
# duality


def _spherical_ground(z: float, c1: float, c2: float, grid: Grid) -> float:
    micz = MiczParams(Z=z, c1=c1, c2=c2)
    lam_scale = effective_lprime(0, 4.0 * c1) + effective_lprime(0, 4.0 * c2)
    rmax = 55.0 * (6.0 + 0.5 * lam_scale) / z
    states = spherical_micz_energies(
        micz,
        n_theta=1,
        n_radial=1,
        grid_theta=Grid(n=3000),
        grid_radial=grid,
        rmax=rmax,
    )
    return states[0][0]


def _duality_case(
    omega: float, c1: float, c2: float, grid: Grid, z_fixed: float, verify: bool
) -> dict:
    # 16-D analytic ground eigenvalue; oscillator-side strengths are 4x the
    # Kepler-side ones (the separated equations carry 8 c where the factor
    # Hamiltonians carry 2 c).
    lp1 = effective_lprime(0, 4.0 * c1)
    lp2 = effective_lprime(0, 4.0 * c2)
    z_osc = omega * (lp1 + 4.0) + omega * (lp2 + 4.0)
    z_charge = 0.5 * z_osc
    e_dual = dual_map(omega, z_charge).E
    case = {
        "c1": c1,
        "c2": c2,
        "Z_oscillator": z_osc,
        "Z_charge": z_charge,
        "E_dual": e_dual,
        "E_spherical": None,
        "E_parabolic": None,
        "dev_spherical": None,
        "dev_parabolic": None,
        "P": None,
        "E_fixed_charge": None,
    }
    if not verify:
        return case

    e_sph = _spherical_ground(z_charge, c1, c2, grid)
    micz = MiczParams(Z=z_charge, c1=c1, c2=c2)
    p = Potential8D("sho", omega=omega)
    model = OscillatorModel(p1=p, p2=p, Z1=0.5 * z_charge, Z2=0.5 * z_charge)
    st = parabolic_joint_solve(
        model, micz, grid, bracket=(1.3 * e_dual, 0.8 * e_dual)
    )
    e_fixed = e_sph if z_fixed == z_charge else _spherical_ground(z_fixed, c1, c2, grid)
    case.update(
        {
            "E_spherical": e_sph,
            "E_parabolic": st.E,
            "dev_spherical": abs(e_sph - e_dual) / abs(e_dual),
            "dev_parabolic": abs(st.E - e_dual) / abs(e_dual),
            "P": st.P,
            "E_fixed_charge": e_fixed,
        }
    )
    return case


def cmd_duality(args) -> int:
    cfg = _load_config(
        args.config, {"omega", "omega2", "cases", "grid", "tolerance"}, {"omega"}
    )
    tol = args.tol if args.tol is not None else float(cfg.get("tolerance", 1e-5))
    omega = float(cfg["omega"])
    omega2 = float(cfg.get("omega2", omega))
    grid = _grid_from(cfg, 2000)
    cases_cfg = cfg.get("cases", [{"c1": 0.0, "c2": 0.0}])
    z_fixed = 4.0 * omega  # coulomb charge of the undressed (c = 0) ground sector
    cases = []
    for case in cases_cfg:
        unknown = set(case) - {"c1", "c2"}
        if unknown:
            raise ConfigError(f"unknown case key(s): {sorted(unknown)}")
        cases.append(
            _duality_case(
                omega,
                float(case.get("c1", 0.0)),
                float(case.get("c2", 0.0)),
                grid,
                z_fixed,
                args.verify,
            )
        )
    if args.verify:
        base = cases[0]["E_fixed_charge"]
        for c in cases:
            c["micz_shift"] = c["E_fixed_charge"] - base
    e1, e2 = -0.5 * omega**2, -0.5 * omega2**2
    doc = {
        "schema_version": SCHEMA_VERSION,
        "omega": omega,
        "omega2": omega2,
        "E1": e1,
        "E2": e2,
        "dipole_coefficient": 0.5 * (e1 - e2),
        "cases": cases,
    }
    write_json(_out_dir(args) / "duality_report.json", doc)
    if not args.verify:
        print(f"duality: {len(cases)} case(s), analytic only (--no-verify)")
        return 0
    worst = max(max(c["dev_spherical"], c["dev_parabolic"]) for c in cases)
    for c in cases:
        print(
            f"c1={c['c1']:g} c2={c['c2']:g}: E_dual={c['E_dual']:.10g} "
            f"E_sph={c['E_spherical']:.10g} E_par={c['E_parabolic']:.10g}"
        )
    if omega2 != omega:
        print(f"anisotropic cos(theta) dipole coefficient: {0.5 * (e1 - e2):.10g}")
    print(f"duality: {len(cases)} case(s), max deviation {worst:.3e}")
    return 0 if worst <= tol else 1


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hurwitz-kepler",
        description="Oscillator-Kepler duality workflows with FD verification.",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn, verify_default in (
        ("transform", cmd_transform, False),
        ("spectrum", cmd_spectrum, False),
        ("qes", cmd_qes, False),
        ("duality", cmd_duality, True),
    ):
        p = sub.add_parser(name)
        p.add_argument("config", help="path to the JSON run configuration")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--format", choices=("csv", "json", "both"), default="both")
        if verify_default:
            p.add_argument(
                "--no-verify", dest="verify", action="store_false", default=True
            )
        else:
            p.add_argument("--verify", action="store_true", default=False)
        p.set_defaults(handler=fn)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except SeparabilityError as exc:
        print(f"separability error: {exc} (E1=E2, a=b=0)", file=sys.stderr)
        return 3
    except QesPreconditionError as exc:
        print(f"QES precondition violated: {exc}", file=sys.stderr)
        return 4
    except BracketError as exc:
        print(f"bracket error: {exc}", file=sys.stderr)
        return 5
    except AccuracyError as exc:
        print(f"accuracy error: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
