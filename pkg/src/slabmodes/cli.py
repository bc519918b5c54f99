"""Batch command-line front end.

Subcommands mirror the computational deliverables one-to-one: cavity
spectra, Diophantine searches, pole/branch loci, scattering amplitudes,
pole scans, Lifshitz integrals, physical Casimir energies, density of
states, plasmon energetics and named verification suites.  Artifacts are
CSV or JSON, written atomically; identical configurations produce
byte-identical files (wall time goes to stderr only).

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 verification
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import cavity, lifshitz, media, openmodes, plasmon, verify
from .media import parse_model
from .numerics import MaxSubdivisionError, NonConvergenceError

__all__ = ["main", "RunConfig"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VERIFY = 3

NUMERICAL_ERRORS = (
    media.DomainError,
    media.BranchPointError,
    media.KinematicError,
    media.UnsupportedModelError,
    openmodes.WindingMismatchError,
    openmodes.PoleEvaluationError,
    MaxSubdivisionError,
    NonConvergenceError,
    np.linalg.LinAlgError,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


@dataclass(frozen=True)
class RunConfig:
    """Echoable configuration: the subcommand plus its parsed options."""

    command: str
    options: dict

    def to_json(self) -> str:
        return json.dumps({"command": self.command, "options": self.options},
                          sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        return cls(command=data["command"], options=data["options"])

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        skip = {"func", "out", "figure", "fmt"}
        options = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
        return cls(command=options.pop("command"), options=options)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _write_atomic(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".slabmodes-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _emit_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    _write_atomic(path, "\n".join(lines) + "\n")


def _emit_json(path, config: RunConfig, results):
    doc = {"command": config.command, "config": config.options, "results": results}
    _write_atomic(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _add_model(p, required=True):
    p.add_argument("--model", required=required,
                   help="const:xi=<f> | plasma:xi=<f> | lorentz:kappa0=<f>,omega0=<f> | pc")


def _add_pol(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--te", action="store_const", dest="pol", const="TE")
    g.add_argument("--tm", action="store_const", dest="pol", const="TM")
    p.set_defaults(pol="TE")


def _add_geometry(p):
    p.add_argument("--lambda1", type=float, default=1.0)
    p.add_argument("--lambda2", type=float, default=1.0)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)


def _add_out(p, default_fmt):
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"),
                   default=default_fmt)


def build_parser() -> _Parser:
    ap = _Parser(prog="slabmodes",
                 description="Mode spectra and Casimir/Lifshitz stresses of a "
                             "planar three-region dielectric system")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cavity-spectrum", help="discrete cavity eigenfrequencies")
    _add_model(p)
    _add_pol(p)
    _add_geometry(p)
    p.add_argument("--word", default="all", help="mode word or 'all'")
    p.add_argument("--nx", type=int, default=1)
    p.add_argument("--ny", type=int, default=1)
    p.add_argument("--nmax", type=int, default=None,
                   help="sweep all nx, ny up to this bound instead of --nx/--ny")
    p.add_argument("--omega-max", type=float, default=20.0)
    _add_out(p, "csv")
    p.set_defaults(func=cmd_cavity_spectrum)

    p = sub.add_parser("diophantine", help="integer OLO/LOL mode families")
    _add_pol(p)
    _add_geometry(p)
    p.add_argument("--word", required=True, choices=("OLO", "LOL"))
    p.add_argument("--xi", required=True, help="rational like 9/8 or a float")
    p.add_argument("--nmax", type=int, default=10)
    _add_out(p, "csv")
    # polarization defaults to the word's Diophantine family
    p.set_defaults(func=cmd_diophantine, pol=None)

    p = sub.add_parser("loci", help="pole and branch-point loci over R")
    _add_model(p)
    _add_pol(p)
    p.add_argument("--rmin", type=float, default=0.5)
    p.add_argument("--rmax", type=float, default=10.0)
    p.add_argument("--rcount", type=int, default=40)
    p.add_argument("--omega-max", type=float, default=60.0)
    p.add_argument("--figure", default=None, help="also render a PNG here")
    _add_out(p, "csv")
    p.set_defaults(func=cmd_loci)

    p = sub.add_parser("scattering", help="reflection/transmission amplitudes")
    _add_model(p)
    _add_pol(p)
    p.add_argument("--word", default="OOO", choices=openmodes.CATEGORY_P)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--u", default="R", choices=("R", "L"))
    _add_out(p, "json")
    p.set_defaults(func=cmd_scattering)

    p = sub.add_parser("poles", help="category E pole scan at fixed R")
    _add_model(p)
    _add_pol(p)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--omega-max", type=float, default=None)
    _add_out(p, "csv")
    p.set_defaults(func=cmd_poles)

    p = sub.add_parser("lifshitz", help="imaginary-axis integral and optional "
                                        "real-axis summation")
    _add_model(p)
    _add_pol(p)
    p.add_argument("--R0", type=float, default=math.inf)
    p.add_argument("--rho", type=float, default=math.inf)
    p.add_argument("--Lambda", type=float, default=None,
                   help="also compute the real-axis summation to this cutoff")
    p.add_argument("--Lz", type=float, default=None,
                   help="slab width in meters for physical outputs")
    p.add_argument("--tol", type=float, default=1e-7)
    _add_out(p, "json")
    p.set_defaults(func=cmd_lifshitz)

    p = sub.add_parser("casimir", help="physical interaction energy and pressure")
    _add_model(p)
    p.add_argument("--Lz", type=float, required=True, help="slab width in meters")
    p.add_argument("--omega-p", type=float, default=None,
                   help="plasma frequency rad/s (alternative to --model plasma)")
    p.add_argument("--tol", type=float, default=1e-7)
    _add_out(p, "json")
    p.set_defaults(func=cmd_casimir)

    p = sub.add_parser("dos", help="density-of-states decomposition")
    _add_model(p)
    _add_pol(p)
    p.add_argument("--R0", type=float, default=5.0)
    p.add_argument("--omega-min", type=float, default=0.05)
    p.add_argument("--omega-max", type=float, default=20.0)
    p.add_argument("--omega-count", type=int, default=200)
    p.add_argument("--figure", default=None)
    _add_out(p, "csv")
    p.set_defaults(func=cmd_dos)

    p = sub.add_parser("plasmon", help="Van Kampen surface-plasmon energetics")
    p.add_argument("--kappa0", type=float, required=True)
    p.add_argument("--omega0", type=float, required=True, help="rad/s")
    p.add_argument("--Lz", type=float, required=True, help="meters")
    p.add_argument("--terms", type=int, default=30)
    _add_out(p, "json")
    p.set_defaults(func=cmd_plasmon)

    p = sub.add_parser("verify", help="named verification suites")
    p.add_argument("--suite", required=True, choices=sorted(verify.SUITES))
    _add_model(p, required=False)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--R0", type=float, default=None)
    p.add_argument("--rho", type=float, default=None)
    _add_out(p, "json")
    p.set_defaults(func=cmd_verify)

    return ap


# ---------------------------------------------------------------------------
# subcommand implementations

def _spectrum_rows(model, pol, words, families, lambdas, omega_max):
    xi = getattr(model, "xi", float("nan"))
    rows = []
    for word in words:
        for nx, ny in families:
            try:
                cfg = cavity.CavityConfig(pol, word, nx, ny, lambdas, model)
            except ValueError:
                continue
            for root in cavity.enumerate_roots(cfg, omega_max):
                rows.append((pol, word, nx, ny, lambdas[0], lambdas[1], lambdas[2],
                             xi, root.omega, root.residual, root.sigma_min))
    rows.sort(key=lambda r: (r[1], r[2], r[3], r[8]))
    return rows


def cmd_cavity_spectrum(args, config):
    model = parse_model(args.model)
    lambdas = (args.lambda1, args.lambda2, args.lam)
    words = cavity.WORDS if args.word == "all" else (args.word,)
    if args.nmax is not None:
        families = [(nx, ny) for nx in range(args.nmax + 1)
                    for ny in range(args.nmax + 1) if (nx, ny) != (0, 0)]
    else:
        families = [(args.nx, args.ny)]
    rows = _spectrum_rows(model, args.pol, words, families, lambdas,
                          getattr(args, "omega_max"))
    header = ("s", "word", "nx", "ny", "lambda1", "lambda2", "lambda",
              "xi", "omega", "residual", "sigma_min")
    if args.fmt == "json":
        _emit_json(args.out, config,
                   {"spectrum": [dict(zip(header, r)) for r in rows]})
    else:
        _emit_csv(args.out, header, rows)
    return EXIT_OK


def cmd_diophantine(args, config):
    pol = args.pol if args.pol else ("TE" if args.word == "OLO" else "TM")
    sols = cavity.diophantine_search(pol, args.word, args.xi, args.lambda1,
                                     args.lambda2, args.lam, args.nmax)
    header = ("nx", "ny", "ell", "omega")
    rows = [(s.nx, s.ny, s.ell, s.omega) for s in sols]
    if args.fmt == "json":
        _emit_json(args.out, config,
                   {"solutions": [dict(zip(header, r)) for r in rows]})
    else:
        _emit_csv(args.out, header, rows)
    return EXIT_OK


def cmd_loci(args, config):
    model = parse_model(args.model)
    grid = np.linspace(args.rmin, args.rmax, args.rcount)
    table = openmodes.loci_table(args.pol, model, grid,
                                 getattr(args, "omega_max"))
    header = ("s", "model", "R", "omega", "kind")
    rows = [(r.s, r.model, r.R, r.omega, r.kind) for r in table.rows]
    if args.fmt == "json":
        _emit_json(args.out, config, {"loci": [dict(zip(header, r)) for r in rows]})
    else:
        _emit_csv(args.out, header, rows)
    if args.figure:
        from . import plotting
        plotting.loci_figure(table, args.figure,
                             title=f"{args.pol} {args.model}")
    return EXIT_OK


def cmd_scattering(args, config):
    model = parse_model(args.model)
    amp = openmodes.scattering(args.pol, args.word, args.omega, args.R,
                               model, args.u)
    results = {
        "s": amp.s, "word": amp.word, "u": amp.direction,
        "omega": amp.omega, "R_transverse": amp.R_transverse,
        "R_re": amp.R.real, "R_im": amp.R.imag,
        "T_re": amp.T.real, "T_im": amp.T.imag,
        "R_abs2": abs(amp.R) ** 2, "T_abs2": abs(amp.T) ** 2,
    }
    if args.fmt == "csv":
        header = tuple(results)
        _emit_csv(args.out, header, [tuple(results[k] for k in header)])
    else:
        _emit_json(args.out, config, results)
    return EXIT_OK


def cmd_poles(args, config):
    model = parse_model(args.model)
    omega_max = getattr(args, "omega_max")
    if omega_max is None:
        omega_max = 2.0 * media.branch_points(model, args.R).omega_b2
    scan = openmodes.pole_scan(args.pol, args.R, model, omega_max)
    header = ("s", "word", "R", "omega", "on_branch_point")
    rows = [(p.s, p.word, p.R_transverse, p.omega, int(p.on_branch_point))
            for p in scan.poles]
    if args.fmt == "json":
        _emit_json(args.out, config, {
            "count": scan.count,
            "omega_b1": scan.omega_b1, "omega_b2": scan.omega_b2,
            "poles": [dict(zip(header, r)) for r in rows]})
    else:
        _emit_csv(args.out, header, rows)
    return EXIT_OK


def cmd_lifshitz(args, config):
    model = parse_model(args.model)
    ii = lifshitz.I_imag(args.pol, model, args.R0, args.rho, rel_tol=args.tol)
    results = {"s": args.pol, "model": args.model, "R0": args.R0,
               "rho": args.rho, "I_imag": ii.value,
               "quadrature_error": ii.error_estimate}
    if getattr(args, "Lambda") is not None:
        ir = lifshitz.I_real(args.pol, model, args.R0, getattr(args, "Lambda"))
        results["Lambda"] = getattr(args, "Lambda")
        results["I_real"] = ir.total
        results["I_real_pole_part"] = ir.pole_part
        results["I_real_continuum_part"] = ir.continuum_part
        results["discrepancy"] = abs(ir.total - ii.value)
    if args.Lz is not None:
        U = -lifshitz.HBAR * lifshitz.C_LIGHT * lifshitz.W0 / args.Lz ** 3 * ii.value
        results["Lz"] = args.Lz
        results["U_J_per_m2"] = U
    _emit_json(args.out, config, results)
    return EXIT_OK


def cmd_casimir(args, config):
    spec = args.model
    if spec == "pc":
        setup = lifshitz.PhysicalSetup(Lz=args.Lz, perfect_conductor=True)
    else:
        model = parse_model(spec)
        if isinstance(model, media.ConstantDielectric):
            setup = lifshitz.PhysicalSetup(Lz=args.Lz, eps_r=model.xi)
        elif isinstance(model, media.Plasma):
            omega_p = getattr(args, "omega_p")
            if omega_p is None:
                # interpret the given xi at this Lz
                omega_p = math.sqrt(model.xi) * lifshitz.C_LIGHT / args.Lz
            setup = lifshitz.PhysicalSetup(Lz=args.Lz, omega_p=omega_p)
        else:
            raise media.UnsupportedModelError(
                "casimir supports const, plasma and pc models")
    res = lifshitz.interaction_energy(setup, rel_tol=args.tol)
    results = {"model": res.model, "Lz": res.Lz,
               "U_TE_J_per_m2": res.U_per_pol.get("TE"),
               "U_TM_J_per_m2": res.U_per_pol.get("TM"),
               "U_total_J_per_m2": res.U_total,
               "P_Pa": res.P_total}
    _emit_json(args.out, config, results)
    return EXIT_OK


def cmd_dos(args, config):
    model = parse_model(args.model)
    grid = np.linspace(getattr(args, "omega_min"), getattr(args, "omega_max"),
                       getattr(args, "omega_count"))
    dos = lifshitz.density_of_states(args.pol, model, args.R0, grid)
    header = ("kind", "omega", "value")
    rows = [("atom", w, wt) for w, wt in dos.atoms]
    rows += [("continuum", w, v) for w, v in zip(dos.omega_grid, dos.continuum)]
    if args.fmt == "json":
        _emit_json(args.out, config, {
            "first_moment": dos.first_moment,
            "spectral_total": dos.spectral_total,
            "samples": [dict(zip(header, r)) for r in rows]})
    else:
        _emit_csv(args.out, header, rows)
    if args.figure:
        from . import plotting
        plotting.dos_figure(dos, args.figure, title=f"{args.pol} {args.model}")
    return EXIT_OK


def cmd_plasmon(args, config):
    setup = plasmon.PlasmonSetup(kappa0=args.kappa0, omega0=args.omega0,
                                 Lz=args.Lz)
    Us = plasmon.vk_series_energy(setup, args.terms)
    Uq = plasmon.vk_quadrature_energy(setup)
    results = {"kappa0": args.kappa0, "omega0": args.omega0, "Lz": args.Lz,
               "n_terms": args.terms, "U_series": Us, "U_quadrature": Uq,
               "stress": plasmon.plasmon_stress(setup, args.terms)}
    _emit_json(args.out, config, results)
    return EXIT_OK


def cmd_verify(args, config):
    model = parse_model(args.model) if args.model else None
    kwargs = {}
    if args.suite == "cauchy":
        if args.R0 is not None:
            kwargs["R0"] = args.R0
        if args.rho is not None:
            kwargs["rho"] = args.rho
    report = verify.run_suite(args.suite, model=model, seed=args.seed,
                              tol=args.tol, **kwargs)
    for check in report.checks:
        sys.stderr.write(check.line() + "\n")
    results = {"suite": report.suite, "seed": report.seed,
               "passed": report.passed,
               "checks": [asdict(c) for c in report.checks]}
    _emit_json(args.out, config, results)
    return EXIT_OK if report.passed else EXIT_VERIFY


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    config = RunConfig.from_args(args)
    t0 = time.perf_counter()
    try:
        code = args.func(args, config)
    except NUMERICAL_ERRORS as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    sys.stderr.write(f"wall time: {time.perf_counter() - t0:.3f} s\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
