"""Command-line workbench: state, mps, ising, laughlin, image subcommands.

Every subcommand exits 0 on success, 2 on invalid input, 3 on numerical
failure or a size guard. Reports are JSON (plus CSV for per-cut tables)
with the configuration echoed, and are byte-stable across repeated runs
with the same arguments.
"""

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import __version__, imaging, ising, laughlin
from . import mps as mpslib
from . import states
from .errors import InvalidInput, MpslabError, NumericalFailure, TooLarge

LN2 = math.log(2.0)


def _unit_factor(units: str) -> float:
    return 1.0 / LN2 if units == "bits" else 1.0


def _write_report(path, payload: dict):
    if path:
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _report_skeleton(command: str, config: dict) -> dict:
    config = dict(config)
    config.setdefault("seed", None)
    return {"command": command, "version": __version__, "config": config}


def _load_any_mps(path) -> mpslib.Mps:
    """Accept a QMPS file directly or decompose a QSTATE file exactly."""
    with open(path) as fh:
        head = fh.readline().split()
    if head[:1] == ["QMPS"]:
        return mpslib.load_qmps(path)
    if head[:1] == ["QSTATE"]:
        return mpslib.to_mps(states.load_qstate(path))
    raise InvalidInput(f"{path}: neither a QSTATE nor a QMPS file")


# -- state ----------------------------------------------------------------------

def _cmd_state_random(args) -> int:
    state = states.random_state(args.n, args.d, args.seed)
    states.save_qstate(state, args.out)
    print(f"wrote {args.out}: n={args.n} d={args.d} seed={args.seed}")
    rep = _report_skeleton("state random", {
        "n": args.n, "d": args.d, "seed": args.seed, "out": str(args.out),
    })
    rep["amplitude_count"] = args.d**args.n
    _write_report(args.report, rep)
    return 0


def _cmd_state_show(args) -> int:
    state = states.load_qstate(args.infile)
    norm2 = float(np.sum(np.abs(state.amplitudes) ** 2))
    print(f"{args.infile}: n={state.n} d={state.d} "
          f"amplitudes={state.amplitudes.size} norm^2={norm2:.12f}")
    lead = state.amplitudes[: min(8, state.amplitudes.size)]
    for i, c in enumerate(lead):
        print(f"  [{i}] {c.real:+.9f} {c.imag:+.9f}i")
    rep = _report_skeleton("state show", {"in": str(args.infile)})
    rep.update({
        "n": state.n,
        "d": state.d,
        "amplitude_count": int(state.amplitudes.size),
        "norm_squared": norm2,
        "leading_amplitudes": [[c.real, c.imag] for c in lead],
    })
    _write_report(args.report, rep)
    return 0


# -- mps ------------------------------------------------------------------------

def _cmd_mps_decompose(args) -> int:
    state = states.load_qstate(args.infile)
    m = mpslib.to_mps(state, chi_max=args.chi, tol=args.tol)
    mpslib.save_qmps(m, args.out)
    dims = list(m.bond_dimensions)
    print(f"wrote {args.out}: bond dims {dims}, "
          f"{m.parameter_count()} of {state.d**state.n} raw parameters")
    rep = _report_skeleton("mps decompose", {
        "in": str(args.infile), "out": str(args.out),
        "chi": args.chi, "tol": args.tol,
    })
    rep.update({
        "n": m.n,
        "d": m.d,
        "bond_dimensions": dims,
        "params_stored": m.parameter_count(),
        "params_raw": state.d**state.n,
    })
    _write_report(args.report, rep)
    return 0


def _cmd_mps_truncate(args) -> int:
    m = mpslib.load_qmps(args.infile)
    out, err = mpslib.truncate(m, args.chi)
    fid = abs(mpslib.inner_product(m, out))
    mpslib.save_qmps(out, args.out)
    print(f"wrote {args.out}: chi={args.chi} "
          f"truncation_error={err:.6e} fidelity={fid:.12f}")
    rep = _report_skeleton("mps truncate", {
        "in": str(args.infile), "out": str(args.out), "chi": args.chi,
    })
    rep.update({
        "bond_dimensions_in": list(m.bond_dimensions),
        "bond_dimensions_out": list(out.bond_dimensions),
        "truncation_error": err,
        "fidelity_vs_input": fid,
        "params_in": m.parameter_count(),
        "params_out": out.parameter_count(),
    })
    _write_report(args.report, rep)
    return 0


def _cmd_mps_entropy(args) -> int:
    m = _load_any_mps(args.infile)
    factor = _unit_factor(args.units)
    cuts = list(range(1, m.n))
    ents = [mpslib.entropy_at_bond(m, a) * factor for a in cuts]
    dims = list(m.bond_dimensions)
    print(f"{args.infile}: per-cut entropy ({args.units})")
    for a, s, chi in zip(cuts, ents, dims):
        print(f"  cut {a}: S = {s:.9f}  chi = {chi}")
    rep = _report_skeleton("mps entropy", {
        "in": str(args.infile), "units": args.units,
    })
    rep.update({
        "n": m.n,
        "d": m.d,
        "cuts": cuts,
        "entropies": ents,
        "bond_dimensions": dims,
    })
    _write_report(args.report, rep)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["cut", f"entropy_{args.units}", "chi"])
            for a, s, chi in zip(cuts, ents, dims):
                writer.writerow([a, repr(s), chi])
    if args.plot:
        from . import figures

        figures.save_bond_profile_figure(
            [s / factor for s in ents], dims, args.plot,
            title=f"n={m.n}, d={m.d}",
        )
    return 0


# -- ising ----------------------------------------------------------------------

def _run_scan(args) -> tuple[ising.EntropyScan, list[int]]:
    chain = ising.IsingChain(args.n, args.h, args.boundary)
    scan, psi = ising.scan_ground_state(chain, seed=args.seed)
    chi_req = ising.chi_requirement(psi, args.target)
    return scan, chi_req


def _scan_summary(scan: ising.EntropyScan, args) -> dict:
    return {
        "n": scan.n,
        "h": scan.h,
        "boundary": scan.boundary,
        "energy": scan.energy,
        "fitted_c": scan.fitted_c,
        "fit_residual_nats": scan.fit_residual,
        "fit_r_squared": scan.fit_r2,
        "fit_reliable": scan.fit_reliable,
        "chi_target": args.target,
    }


def _cmd_ising_scan(args) -> int:
    scan, chi_req = _run_scan(args)
    factor = _unit_factor(args.units)
    chords = [float(ising.chord_length(scan.n, l, scan.boundary))
              for l in scan.block_sizes]
    print(f"n={scan.n} h={scan.h} {scan.boundary}: energy = {scan.energy:.10f}")
    print(f"fitted c = {scan.fitted_c:.4f} (rms {scan.fit_residual:.5f} nats, "
          f"R^2 {scan.fit_r2:.5f}, reliable={scan.fit_reliable})")
    for l, s, chi in zip(scan.block_sizes, scan.entropies, chi_req):
        print(f"  l={l:2d}  S={s * factor:.9f} {args.units}  chi_required={chi}")
    rep = _report_skeleton("ising scan", {
        "n": args.n, "h": args.h, "boundary": args.boundary,
        "seed": args.seed, "units": args.units, "chi_target": args.target,
    })
    rep["summary"] = _scan_summary(scan, args)
    rep["table"] = {
        "block_sizes": scan.block_sizes,
        f"entropies_{args.units}": [s * factor for s in scan.entropies],
        "chi_required": chi_req,
        "chord_lengths": chords,
    }
    _write_report(args.report, rep)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["l", f"S_{args.units}", "chi_required", "chord"])
            for l, s, chi, ch in zip(scan.block_sizes, scan.entropies,
                                     chi_req, chords):
                writer.writerow([l, repr(s * factor), chi, repr(ch)])
    if args.plot:
        from . import figures

        figures.save_entropy_scan_figure(scan, chi_req, args.plot)
    return 0


def _cmd_ising_fit(args) -> int:
    scan, _chi_req = _run_scan(args)
    print(f"n={scan.n} h={scan.h} {scan.boundary}: "
          f"c = {scan.fitted_c:.4f}, rms residual = {scan.fit_residual:.5f} nats, "
          f"R^2 = {scan.fit_r2:.5f}")
    rep = _report_skeleton("ising fit", {
        "n": args.n, "h": args.h, "boundary": args.boundary,
        "seed": args.seed, "chi_target": args.target,
    })
    rep["summary"] = _scan_summary(scan, args)
    _write_report(args.report, rep)
    return 0


# -- laughlin ---------------------------------------------------------------------

def _cmd_laughlin_verify(args) -> int:
    rep_obj = laughlin.build_clifford(args.n)
    measured = laughlin.half_cut_entropy(rep_obj)
    formula = laughlin.binomial_entropy(args.n)
    capacity = laughlin.capacity_bound(rep_obj)
    ring = laughlin.export_periodic_mps(rep_obj)
    print(f"n={args.n}: dim gamma = {rep_obj.dim}")
    print(f"  half-cut entropy = {measured:.9f} nats "
          f"(binomial formula {formula:.9f}, capacity {capacity:.9f})")
    print(f"  ring MPS parameters = {ring.parameter_count()} "
          f"vs apparent {args.n**args.n} degrees of freedom")
    rep = _report_skeleton("laughlin verify", {"n": args.n})
    rep.update({
        "n": args.n,
        "dim_gamma": rep_obj.dim,
        "entropy_measured": measured,
        "entropy_formula": formula,
        "capacity": capacity,
        "apparent_dof": args.n**args.n,
        "mps_params": ring.parameter_count(),
    })
    _write_report(args.report, rep)
    return 0


# -- image ------------------------------------------------------------------------

def _cmd_image_compress(args) -> int:
    img = imaging.read_pgm(args.infile)
    out, report = imaging.compress(img, args.chi)
    imaging.write_pgm(out, args.out)
    psnr_txt = "exact" if report.lossless else f"{report.psnr:.4f} dB"
    print(f"wrote {args.out}: chi={args.chi} "
          f"params {report.params_stored}/{report.params_raw} PSNR={psnr_txt}")
    if args.report:
        with open(args.report, "w") as fh:
            doc = json.loads(report.to_json())
            doc["command"] = "image compress"
            doc["version"] = __version__
            doc["config"] = {
                "in": str(args.infile), "out": str(args.out),
                "chi": args.chi, "seed": None,
            }
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.plot:
        from . import figures

        figures.save_compression_figure(img, out, report, args.plot)
    return 0


def _cmd_image_roundtrip(args) -> int:
    img = imaging.read_pgm(args.infile)
    state, _norm = imaging.image_to_state(img)
    exact = mpslib.to_mps(state)
    chi_full = max(exact.bond_dimensions, default=1)
    out, report = imaging.compress(img, chi_full)
    imaging.write_pgm(out, args.out)
    ok = bool(np.array_equal(out.pixels, img.pixels))
    print(f"wrote {args.out}: full chi={chi_full} lossless={ok}")
    rep = _report_skeleton("image roundtrip", {
        "in": str(args.infile), "out": str(args.out),
    })
    rep.update({
        "chi_full": chi_full,
        "lossless": ok,
        "params_stored": report.params_stored,
        "params_raw": report.params_raw,
    })
    _write_report(args.report, rep)
    return 0 if ok else 3


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpslab",
        description="matrix product state workbench",
    )
    parser.add_argument("--version", action="version", version=__version__)
    top = parser.add_subparsers(dest="group", required=True)

    state = top.add_parser("state", help="dense state files").add_subparsers(
        dest="action", required=True)
    sr = state.add_parser("random", help="write a seeded random QSTATE file")
    sr.add_argument("--n", type=int, required=True)
    sr.add_argument("--d", type=int, default=2)
    sr.add_argument("--seed", type=int, default=0)
    sr.add_argument("--out", required=True)
    sr.add_argument("--report")
    sr.set_defaults(func=_cmd_state_random)
    ss = state.add_parser("show", help="summarize a QSTATE file")
    ss.add_argument("--in", dest="infile", required=True)
    ss.add_argument("--report")
    ss.set_defaults(func=_cmd_state_show)

    mps_p = top.add_parser("mps", help="decompose, truncate, inspect").add_subparsers(
        dest="action", required=True)
    md = mps_p.add_parser("decompose", help="QSTATE -> canonical QMPS")
    md.add_argument("--in", dest="infile", required=True)
    md.add_argument("--out", required=True)
    md.add_argument("--chi", type=int, default=None)
    md.add_argument("--tol", type=float, default=states.DISCARD_TOL)
    md.add_argument("--report")
    md.set_defaults(func=_cmd_mps_decompose)
    mt = mps_p.add_parser("truncate", help="cap the bond dimension of a QMPS")
    mt.add_argument("--in", dest="infile", required=True)
    mt.add_argument("--chi", type=int, required=True)
    mt.add_argument("--out", required=True)
    mt.add_argument("--report")
    mt.set_defaults(func=_cmd_mps_truncate)
    me = mps_p.add_parser("entropy", help="per-cut entropy of a QSTATE or QMPS")
    me.add_argument("--in", dest="infile", required=True)
    me.add_argument("--units", choices=("nats", "bits"), default="nats")
    me.add_argument("--report")
    me.add_argument("--csv")
    me.add_argument("--plot")
    me.set_defaults(func=_cmd_mps_entropy)

    ising_p = top.add_parser("ising", help="transverse-field chain workbench")
    ising_sub = ising_p.add_subparsers(dest="action", required=True)
    for name, fn in (("scan", _cmd_ising_scan), ("fit", _cmd_ising_fit)):
        ip = ising_sub.add_parser(name)
        ip.add_argument("--n", type=int, required=True)
        ip.add_argument("--h", type=float, required=True)
        ip.add_argument("--boundary", choices=("open", "periodic"),
                        default="periodic")
        ip.add_argument("--seed", type=int, default=ising.DEFAULT_SEED)
        ip.add_argument("--target", type=float, default=1.0 - 1e-6,
                        help="squared Schmidt mass kept when measuring chi(l)")
        ip.add_argument("--report")
        if name == "scan":
            ip.add_argument("--units", choices=("nats", "bits"), default="nats")
            ip.add_argument("--csv")
            ip.add_argument("--plot")
        ip.set_defaults(func=fn)

    lv = top.add_parser("laughlin", help="gamma-matrix state checks").add_subparsers(
        dest="action", required=True)
    lp = lv.add_parser("verify", help="entropy and parameter accounting")
    lp.add_argument("--n", type=int, required=True)
    lp.add_argument("--report")
    lp.set_defaults(func=_cmd_laughlin_verify)

    img = top.add_parser("image", help="PGM compression").add_subparsers(
        dest="action", required=True)
    ic = img.add_parser("compress", help="lossy compress a PGM at fixed chi")
    ic.add_argument("--chi", type=int, required=True)
    ic.add_argument("--in", dest="infile", required=True)
    ic.add_argument("--out", required=True)
    ic.add_argument("--report")
    ic.add_argument("--plot")
    ic.set_defaults(func=_cmd_image_compress)
    ir = img.add_parser("roundtrip", help="verify lossless full-chi round trip")
    ir.add_argument("--in", dest="infile", required=True)
    ir.add_argument("--out", required=True)
    ir.add_argument("--report")
    ir.set_defaults(func=_cmd_image_roundtrip)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NumericalFailure, TooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InvalidInput, FileNotFoundError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MpslabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
