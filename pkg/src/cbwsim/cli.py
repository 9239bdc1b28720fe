"""
Command-line front end.

Subcommands: ``sweep``, ``map``, ``pascal``, ``cavity``, ``wavelength`` and
``validate``. Exit codes: 0 success, 1 usage error, 2 netlist parse error,
3 numeric or metrology error (including failed validation checks).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .analysis import (
    DEFAULT_MAP_POINTS,
    DEFAULT_SWEEP_POINTS,
    MetrologyError,
    fringe_count,
    fwhm,
    map_phi_psi,
    phase_grid,
    sweep_matrix,
    sweep_phi,
    visibility,
)
from .cavity import (
    CLASSICAL_PERIOD,
    CavityParams,
    cavity_spectrum,
    resonance_amplitude,
    spectral_width_ratio,
)
from .emit import (
    emit_curve_csv,
    emit_json,
    emit_map_csv,
    emit_map_json,
    emit_records_csv,
    emit_rows_csv,
)
from .netlist import NetlistError, read_netlist
from .optics import (
    Coupling,
    FieldPair,
    acd_block,
    apply,
    chain_closed_form,
    intensities,
    unitarity_error,
)
from .phase_basis import cbw_wavelength, order_histogram, pbw_wavelength

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_NUMERIC = 0, 1, 2, 3
UNITARY_TOL = 1e-12
ENERGY_TOL = 1e-12
CLOSED_FORM_TOL = 1e-10


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", metavar="PATH", help="write to PATH instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cbwsim", description="Coupled MZI / cavity CBW simulator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="intensity versus phi for a chain or netlist")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--netlist", metavar="PATH")
    src.add_argument("--n", type=_positive_int, help="number of asymmetric ACD blocks")
    p.add_argument("--psi", type=float, default=0.0, help="control phase for --n (radians)")
    p.add_argument("--points", type=_positive_int, default=DEFAULT_SWEEP_POINTS)
    p.add_argument("--port", choices=("C", "D"), default="C")
    p.add_argument("--report", choices=("curve", "fwhm", "fringes", "visibility"), default="curve")
    p.add_argument("--around", type=float, default=0.0, help="peak search start for fwhm")
    _add_output(p)

    p = sub.add_parser("map", help="intensity over a (phi, psi) grid")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--points", type=_positive_int, default=DEFAULT_MAP_POINTS, help="samples per axis")
    p.add_argument("--eta", type=float, default=1.0, help="per-block amplitude factor (1 = lossless)")
    p.add_argument("--intensity", type=float, default=1.0)
    p.add_argument("--port", choices=("C", "D"), default="C")
    _add_output(p)

    p = sub.add_parser("pascal", help="phase-order multiplicities for q MZIs")
    p.add_argument("--q", type=_positive_int, required=True)
    p.add_argument("--triangle", action="store_true", help="print rows 1..q")
    _add_output(p)

    p = sub.add_parser("cavity", help="recursive cavity spectrum")
    p.add_argument("--eta", type=float, required=True, help="output-coupler amplitude reflection")
    p.add_argument("--passes", type=_positive_int, required=True)
    p.add_argument("--points", type=_positive_int, default=100_000)
    p.add_argument("--report", choices=("curve", "fwhm", "zeta"), default="curve")
    _add_output(p)

    p = sub.add_parser("wavelength", help="effective CBW and PBW wavelengths")
    p.add_argument("--lambda0", type=float, required=True)
    p.add_argument("--q", type=_positive_int, required=True)
    p.add_argument("--photons", type=_positive_int, help="entangled photon number (default q)")
    _add_output(p)

    p = sub.add_parser("validate", help="check invariants of a netlist")
    p.add_argument("--netlist", metavar="PATH", required=True)
    p.add_argument("--points", type=_positive_int, default=DEFAULT_SWEEP_POINTS)
    _add_output(p)
    return parser


def _records(args, records: dict) -> str:
    return emit_json(records) if args.format == "json" else emit_records_csv(records)


def _curve_text(args, curve) -> str:
    if args.format == "json":
        return emit_json({"phi": [float(x) for x in curve.xs], "value": [float(y) for y in curve.ys]})
    return emit_curve_csv(curve)


def _cmd_sweep(args) -> str:
    grid = phase_grid(max(args.points, 2))
    if args.netlist:
        spec = read_netlist(args.netlist)
        n = spec.n_blocks
        i_c, i_d = sweep_matrix(spec.matrix, grid, spec.source_intensity)
    else:
        n = args.n
        i_c, i_d = sweep_phi(n, args.psi, grid)
    curve = i_c if args.port == "C" else i_d
    if args.report == "curve":
        return _curve_text(args, curve)
    records: dict = {"n": n, "q": 2 * n, "port": args.port}
    if args.report == "fwhm":
        records["fwhm"] = fwhm(curve, args.around)
        records["fwhm_over_pi"] = records["fwhm"] / np.pi
    elif args.report == "fringes":
        records["fringes"] = fringe_count(curve)
    else:
        records["visibility"] = visibility(curve)
    return _records(args, records)


def _cmd_map(args) -> str:
    grid = phase_grid(max(args.points, 2))
    i_c, i_d = map_phi_psi(args.n, grid, grid, args.intensity, args.eta)
    chosen = i_c if args.port == "C" else i_d
    return emit_map_json(chosen) if args.format == "json" else emit_map_csv(chosen)


def _cmd_pascal(args) -> str:
    qs = range(1, args.q + 1) if args.triangle else [args.q]
    hists = [order_histogram(q) for q in qs]
    if args.format == "json":
        return emit_json([{"q": h.q, "counts": list(h.counts)} for h in hists])
    return "".join(h.as_csv_row() + "\n" for h in hists)


def _cmd_cavity(args) -> str:
    params = CavityParams(args.eta, args.passes)
    curve = cavity_spectrum(phase_grid(max(args.points, 2)), params)
    if args.report == "curve":
        return _curve_text(args, curve)
    peak_phi = float(curve.xs[int(np.argmax(curve.ys))])
    width = fwhm(curve, peak_phi)
    records = {
        "eta": args.eta,
        "passes": args.passes,
        "peak_phi": peak_phi,
        "peak_amplitude": resonance_amplitude(params),
        "fwhm": width,
        "fwhm_over_pi": width / np.pi,
    }
    if args.report == "zeta":
        records["zeta"] = spectral_width_ratio(curve, peak_phi, period=CLASSICAL_PERIOD)
        records["zeta_fsr"] = spectral_width_ratio(curve, peak_phi)
    return _records(args, records)


def _cmd_wavelength(args) -> str:
    photons = args.photons or args.q
    cbw = cbw_wavelength(args.lambda0, args.q)
    pbw = pbw_wavelength(args.lambda0, photons)
    return _records(
        args,
        {"lambda0": args.lambda0, "q": args.q, "photons": photons,
         "lambda_cbw": cbw, "lambda_pbw": pbw, "cbw_over_pbw": cbw / pbw},
    )


def validate_circuit(spec, points: int = DEFAULT_SWEEP_POINTS) -> list[tuple[str, bool, float]]:
    """Invariant checks on a parsed netlist; returns ``(name, passed, value)`` rows."""
    grid = phase_grid(points)
    checks = []
    worst = max(unitarity_error(acd_block(p)) for p in spec.block_params(grid))
    checks.append(("block_unitarity", worst <= UNITARY_TOL, worst))

    i_c, i_d = sweep_matrix(spec.matrix, grid, spec.source_intensity)
    energy = float(np.max(np.abs(i_c.ys + i_d.ys - spec.source_intensity)))
    checks.append(("energy_conservation", energy <= ENERGY_TOL, energy))

    uniform = all(b.swept and b.coupling is Coupling.ASYMMETRIC and b.psi == 0.0 for b in spec.blocks)
    if uniform:
        diff = float(np.max(np.abs(spec.matrix(grid) - chain_closed_form(grid, spec.n_blocks))))
        checks.append(("closed_form", diff <= CLOSED_FORM_TOL, diff))

    source = FieldPair.source(spec.source_intensity)
    for params in spec.block_params(grid):
        if params.coupling is Coupling.ASYMMETRIC and np.all(np.asarray(params.psi) == np.pi):
            out_c, out_d = intensities(apply(acd_block(params), source))
            dev = float(max(np.max(np.abs(out_c - spec.source_intensity)), np.max(out_d)))
            checks.append(("identity_branch", dev <= ENERGY_TOL, dev))
            break
    return checks


def _cmd_validate(args) -> tuple[str, int]:
    spec = read_netlist(args.netlist)
    checks = validate_circuit(spec, max(args.points, 2))
    ok = all(passed for _, passed, _ in checks)
    if args.format == "json":
        text = emit_json([{"check": n, "passed": p, "value": v} for n, p, v in checks])
    else:
        text = emit_rows_csv(("check", "status", "value"), ((n, "pass" if p else "fail", v) for n, p, v in checks))
    return text, EXIT_OK if ok else EXIT_NUMERIC


_COMMANDS = {
    "sweep": _cmd_sweep,
    "map": _cmd_map,
    "pascal": _cmd_pascal,
    "cavity": _cmd_cavity,
    "wavelength": _cmd_wavelength,
}


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_cli(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            text, code = _cmd_validate(args)
        else:
            text, code = _COMMANDS[args.command](args), EXIT_OK
    except NetlistError as exc:
        print(f"cbwsim: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"cbwsim: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MetrologyError, ValueError, FloatingPointError) as exc:
        print(f"cbwsim: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _write(text, args.out)
    return code


def main(argv=None) -> None:
    sys.exit(run_cli(argv))


if __name__ == "__main__":
    main()
