"""Command-line driver.

``-L`` is the maximum degree (default 63), so spectra hold degrees
``0..L``. Outputs are chosen by suffix: ``.pgm``/``.png`` render an image,
``.field`` writes a field file, ``.obj`` a mesh, ``.json`` a report and
anything else a coefficient file.

Exit codes: 0 success, 1 usage error, 2 numerical or validation failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from importlib.resources import files
from pathlib import Path

import numpy as np

from . import fileio
from .filtering import (
    TransferFunction,
    apply,
    axisym_transfer,
    butterfly_taps,
    cascade,
    fir_transfer,
    five_point_lowpass,
    impulse_response,
    three_point_taps,
    transfer_norms,
)
from .sphere import DomainError, EulerAngles, SphereGrid, grid_from_counts, rotation_from_euler
from .spectrum import (
    Spectrum,
    delta_spectrum,
    dof_counts,
    fisher_von_mises_spectrum,
    magnitude_only_spectrum,
    phase_swap,
    random_spectrum,
    rotate_spectrum,
)
from .spharm import (
    SurfaceSamples,
    bumpy_sphere,
    mesh_faces,
    mesh_vertices,
    pole_points,
    spharm_analyze,
    spharm_filter,
    spharm_synthesize,
)
from .transform import SampledField, analyze_irf, analyze_quadrature, heat_kernel_window, synthesize
from .verify import run_suite

log = logging.getLogger("sphfir")

MAX_DEGREE = 128
FILTERS = ("identity", "fivept", "threept", "butterfly", "axisym-fvm", "custom")
IMAGE_SUFFIXES = (".pgm", ".png")


class UsageError(Exception):
    """Bad command-line usage (exit code 1)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --------------------------------------------------------------------------
# helpers


def world_mask_path() -> Path:
    return Path(str(files("sphfir") / "data" / "world_mask.pgm"))


def _check_readable(*paths) -> None:
    for p in paths:
        if p is not None and not Path(p).is_file():
            raise DomainError(f"cannot read input file {p}")


def _check_writable(path) -> None:
    if path is not None and not Path(path).resolve().parent.is_dir():
        raise DomainError(f"output directory for {path} does not exist")


def _sniff(path) -> str:
    with open(path, "rb") as fh:
        head = fh.read(16)
    if head.startswith(b"#sph-coeff"):
        return "coeff"
    if head.startswith(b"#sph-grid-nodes"):
        return "nodes"
    if head.startswith(b"#sph-grid"):
        return "field"
    if head[:2] in (b"P5", b"P2"):
        return "pgm"
    raise fileio.FormatError(f"{path}: unrecognized file type")


def load_field(path) -> SampledField:
    kind = _sniff(path)
    if kind == "pgm":
        return fileio.field_from_raster(fileio.read_pgm(path))
    if kind == "field":
        return fileio.read_field(path)
    raise fileio.FormatError(f"{path}: expected a field file or PGM raster, found {kind}")


def analyze(f: SampledField, L: int, method: str, irf_sigma: float = 0.0) -> Spectrum:
    if method == "irf":
        window = heat_kernel_window(L, irf_sigma) if irf_sigma > 0 else None
        return analyze_irf(f, L, window=window)
    return analyze_quadrature(f, L)


def load_spectrum(path, L: int, method: str = "quadrature", irf_sigma: float = 0.0) -> Spectrum:
    """Coefficient files are read as is (truncated to ``L``); fields and rasters are analyzed."""
    if _sniff(path) == "coeff":
        F = fileio.read_spectrum(path)
        return F.truncate(L) if F.L > L else F
    return analyze(load_field(path), L, method, irf_sigma)


def output_grid(args, L: int) -> SphereGrid:
    nb = args.n_beta or 2 * L
    na = args.n_alpha or 4 * L
    return grid_from_counts(nb, na, args.scheme)


def render(values: np.ndarray, vmin=None, vmax=None) -> np.ndarray:
    """Map a field to 8-bit gray; a constant field renders mid-gray."""
    v = np.real(np.asarray(values, dtype=complex))
    lo = float(np.min(v)) if vmin is None else vmin
    hi = float(np.max(v)) if vmax is None else vmax
    if not hi > lo:
        log.warning("degenerate value range; rendering mid-gray")
        return np.full(v.shape, 128, dtype=np.uint8)
    scaled = np.clip((v - lo) / (hi - lo), 0.0, 1.0)
    return np.round(255.0 * scaled).astype(np.uint8)


def write_image(path, values, vmin=None, vmax=None) -> None:
    img = render(values, vmin, vmax)
    if str(path).lower().endswith(".png"):
        from PIL import Image

        Image.fromarray(img, mode="L").save(path, optimize=False)
    else:
        fileio.write_pgm(path, img)


def write_field_or_image(path, field: SampledField, args) -> None:
    if str(path).lower().endswith(IMAGE_SUFFIXES):
        write_image(path, field.values, getattr(args, "vmin", None), getattr(args, "vmax", None))
    else:
        fileio.write_field(path, field)


def write_result(path, F: Spectrum, args) -> None:
    """Coefficients, or their synthesis when ``path`` names a field or image."""
    if path is None:
        sys.stdout.write(fileio.format_spectrum(F))
    elif str(path).lower().endswith(IMAGE_SUFFIXES + (".field",)):
        write_field_or_image(path, synthesize(F, output_grid(args, F.L)), args)
    else:
        fileio.write_spectrum(path, F)


def build_transfer(args, L: int, orientation: str = "x") -> TransferFunction:
    name = args.filter
    if name == "identity":
        return TransferFunction.identity(L)
    if name == "fivept":
        return five_point_lowpass(L, args.beta0)
    if name == "threept":
        return fir_transfer(three_point_taps(args.beta0), L)
    if name == "butterfly":
        return fir_transfer(butterfly_taps(args.sigma, args.lam, orientation=orientation), L)
    if name == "axisym-fvm":
        h0 = fisher_von_mises_spectrum(args.kappa, L).data[:, L - 1]
        # rescale the kernel for unit DC gain; degree l is then scaled by I_{l+1/2}/I_{1/2}
        h0 = h0 / axisym_transfer(h0, L)[0][0, 0]
        return axisym_transfer(h0, L)
    if name == "custom":
        if args.transfer:
            H = fileio.read_transfer(args.transfer)
            if H.L < L:
                raise DomainError(f"transfer file bandwidth {H.L} is below {L}")
            return H.truncate(L)
        if not args.taps:
            raise UsageError("--filter custom needs --taps FILE or --transfer FILE")
        return fir_transfer(fileio.read_taps(args.taps), L)
    raise UsageError(f"unknown filter {name!r}; choose from {', '.join(FILTERS)}")


def repeated(H: TransferFunction, times: int) -> TransferFunction:
    out = H
    for _ in range(times - 1):
        out = cascade(out, H)
    return out


# --------------------------------------------------------------------------
# subcommands


def cmd_analyze(args) -> int:
    _check_readable(args.input)
    _check_writable(args.output)
    F = analyze(load_field(args.input), args.L + 1, args.method, args.irf_sigma)
    write_result(args.output, F, args)
    return 0


def cmd_synthesize(args) -> int:
    _check_readable(args.input)
    _check_writable(args.output)
    F = fileio.read_spectrum(args.input)
    field = synthesize(F, output_grid(args, F.L))
    if args.output is None:
        raise UsageError("synthesize needs -o")
    write_field_or_image(args.output, field, args)
    return 0


def cmd_filter(args) -> int:
    _check_readable(args.input, args.taps, args.transfer)
    _check_writable(args.output)
    L = args.L + 1
    F = load_spectrum(args.input, L, args.method, args.irf_sigma)
    if F.L != L:
        raise DomainError(f"input bandwidth {F.L} differs from requested {L}")
    if args.filter == "butterfly" and args.orientation == "both":
        # |x output| + |y output|, nonlinear, so only a field can be written
        if args.output is None or not str(args.output).lower().endswith(IMAGE_SUFFIXES + (".field",)):
            raise UsageError("--orientation both writes a field: use a .field, .pgm or .png output")
        grid = output_grid(args, L)
        parts = [synthesize(apply(build_transfer(args, L, o), F), grid).values for o in ("x", "y")]
        write_field_or_image(args.output, SampledField(grid, np.abs(parts[0]) + np.abs(parts[1])), args)
        return 0
    H = repeated(build_transfer(args, L, args.orientation), args.times)
    if args.save_transfer:
        fileio.write_transfer(args.save_transfer, H)
    write_result(args.output, apply(H, F), args)
    return 0


def cmd_impulse(args) -> int:
    _check_readable(args.taps, args.transfer)
    _check_writable(args.output)
    L = args.L + 1
    H = repeated(build_transfer(args, L, args.orientation), args.times)
    field = impulse_response(H, output_grid(args, L))
    if args.output is None:
        raise UsageError("impulse needs -o")
    write_field_or_image(args.output, field, args)
    return 0


def cmd_freqresp(args) -> int:
    _check_readable(args.taps, args.transfer)
    _check_writable(args.output)
    L = args.L + 1
    H = repeated(build_transfer(args, L, args.orientation), args.times)
    norms = transfer_norms(H, delta_spectrum(L) if args.normalize_delta else None)
    if args.save_transfer:
        fileio.write_transfer(args.save_transfer, H)
    if args.output is None:
        sys.stdout.write("l,norm\n" + "".join(f"{ell},{v:.17g}\n" for ell, v in enumerate(norms)))
    else:
        fileio.write_freqresp(args.output, norms)
    return 0


def cmd_rotate(args) -> int:
    _check_readable(args.input)
    _check_writable(args.output)
    F = load_spectrum(args.input, args.L + 1, args.method, args.irf_sigma)
    R = rotation_from_euler(EulerAngles(args.alpha, args.beta, args.gamma))
    write_result(args.output, rotate_spectrum(F, R), args)
    return 0


def cmd_phase(args) -> int:
    if args.tool == "dof":
        d = dof_counts(args.L, real_valued=not args.complex)
        print("L,total,magnitude_constrained,phase_constrained,percent_phase")
        print(f"{args.L},{d.total},{d.magnitude_constrained},{d.phase_constrained},{float(d.percent):.6f}")
        return 0
    L = args.L + 1
    if args.tool == "magonly":
        _check_readable(args.inputs[0] if args.inputs else None)
        _check_writable(args.output)
        if args.inputs:
            F = load_spectrum(args.inputs[0], L, args.method, args.irf_sigma)
        else:
            F = random_spectrum(L, np.random.default_rng(args.seed), real=True)
        M = magnitude_only_spectrum(F)
        grid = output_grid(args, M.L)
        vals = np.real(synthesize(M, grid).values)
        spread = float(np.max(np.ptp(vals, axis=1)))
        rng_ = float(np.ptp(vals)) or 1.0
        if spread > 1e-8 * rng_:
            log.error("magnitude-only synthesis is not axially symmetric: %.3g", spread / rng_)
            return 2
        if args.output is not None and str(args.output).lower().endswith(IMAGE_SUFFIXES + (".field",)):
            write_field_or_image(args.output, SampledField(grid, vals), args)
        else:
            write_result(args.output, M, args)
        return 0
    # swap: magnitudes of the first input, phases of the second
    if len(args.inputs) != 2:
        raise UsageError("phase swap needs two inputs: MAGNITUDE_SOURCE PHASE_SOURCE")
    _check_readable(*args.inputs)
    _check_writable(args.output)
    F, G = (load_spectrum(p, L, args.method, args.irf_sigma) for p in args.inputs)
    write_result(args.output, phase_swap(F, G), args)
    return 0


def _load_surface(args) -> SurfaceSamples:
    if not args.inputs:
        L = args.L + 1
        return bumpy_sphere(grid_from_counts(2 * L, 2 * L, "gl"), np.random.default_rng(args.seed))
    _check_readable(*args.inputs)
    if len(args.inputs) == 1:
        return SurfaceSamples(*fileio.read_coordinates(args.inputs[0]))
    if len(args.inputs) == 3:
        fields = [load_field(p) for p in args.inputs]
        if len({f.grid.shape for f in fields}) != 1:
            raise DomainError("coordinate fields have different grids")
        return SurfaceSamples(*fields)
    raise UsageError("spharm takes one x,y,z file or three coordinate field files")


def cmd_spharm(args) -> int:
    _check_writable(args.output)
    if args.output is None:
        raise UsageError("spharm needs -o OUTPUT.obj")
    surf = _load_surface(args)
    L = args.L + 1
    S = spharm_analyze(*surf, L, method=args.method)
    H = repeated(build_transfer(args, L, args.orientation), args.times)
    G = spharm_filter(S, H)
    out = spharm_synthesize(G, surf.grid)
    verts = mesh_vertices(out, pole_points(G))
    faces = mesh_faces(surf.grid.n_beta, surf.grid.n_alpha)
    fileio.write_obj(args.output, verts, faces)
    if args.save_input_mesh:
        fileio.write_obj(args.save_input_mesh, mesh_vertices(spharm_synthesize(S, surf.grid), pole_points(S)), faces)
    return 0


def cmd_render(args) -> int:
    _check_readable(args.input)
    _check_writable(args.output)
    if args.output is None or not str(args.output).lower().endswith(IMAGE_SUFFIXES):
        raise UsageError("render needs -o OUTPUT.pgm or OUTPUT.png")
    write_image(args.output, load_field(args.input).values, args.vmin, args.vmax)
    return 0


def cmd_verify(args) -> int:
    _check_writable(args.output)
    report = run_suite(args.level, args.seed)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.output:
        Path(args.output).write_text(text + "\n")
    print(text)
    return 0 if report["passed"] else 2


# --------------------------------------------------------------------------
# parser


def _degree(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid degree {s!r}")
    if not 0 <= v <= MAX_DEGREE:
        raise argparse.ArgumentTypeError(f"L must be in 0..{MAX_DEGREE}, got {v}")
    return v


def _positive(s: str) -> float:
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-L", type=_degree, default=63, help="maximum degree (default 63, at most 128)")
    common.add_argument("--method", choices=("quadrature", "irf"), default="quadrature")
    common.add_argument("--irf-sigma", type=float, default=0.0, help="IRF heat-kernel window exp(-l(l+1) sigma); 0 = none")
    common.add_argument("--seed", type=int, default=0, help="seed for generated test data")
    common.add_argument("-o", "--output", default=None)
    common.add_argument("--n-beta", type=int, default=None, help="output grid rows (default 2(L+1))")
    common.add_argument("--n-alpha", type=int, default=None, help="output grid columns (default 4(L+1))")
    common.add_argument("--scheme", choices=("equiangular", "gl"), default="equiangular")
    common.add_argument("--vmin", type=float, default=None)
    common.add_argument("--vmax", type=float, default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    filt = _Parser(add_help=False)
    filt.add_argument("--filter", choices=FILTERS, default="fivept")
    filt.add_argument("--beta0", type=_positive, default=np.pi / 32, help="tap displacement (radians)")
    filt.add_argument("--sigma", type=_positive, default=0.05, help="butterfly scale")
    filt.add_argument("--lambda", dest="lam", type=_positive, default=1.0, help="butterfly dilation")
    filt.add_argument("--orientation", choices=("x", "y", "both"), default="x")
    filt.add_argument("--kappa", type=_positive, default=10.0, help="Fisher-von Mises concentration")
    filt.add_argument("--taps", default=None, help="CSV of weight,alpha,beta,gamma rows")
    filt.add_argument("--transfer", default=None, help="transfer-function file for --filter custom")
    filt.add_argument("--times", type=int, default=1, help="apply the filter this many times")
    filt.add_argument("--save-transfer", default=None, help="also write the transfer function")

    p = _Parser(prog="sphfir", description="Phase-sensitive FIR filtering on the sphere.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("analyze", parents=[common], help="field or PGM -> coefficients")
    s.add_argument("input")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("synthesize", parents=[common], help="coefficients -> field or image")
    s.add_argument("input")
    s.set_defaults(func=cmd_synthesize)

    s = sub.add_parser("filter", parents=[common, filt], help="apply a filter")
    s.add_argument("input", help="coefficient file, field file or PGM")
    s.set_defaults(func=cmd_filter)

    s = sub.add_parser("impulse", parents=[common, filt], help="impulse response field")
    s.set_defaults(func=cmd_impulse)

    s = sub.add_parser("freqresp", parents=[common, filt], help="per-degree transfer norms")
    s.add_argument("--normalize-delta", action="store_true", help="divide by the impulse magnitude spectrum")
    s.set_defaults(func=cmd_freqresp)

    s = sub.add_parser("rotate", parents=[common], help="rotate a spectrum")
    s.add_argument("input")
    s.add_argument("--alpha", type=float, default=0.0)
    s.add_argument("--beta", type=float, default=0.0)
    s.add_argument("--gamma", type=float, default=0.0)
    s.set_defaults(func=cmd_rotate)

    s = sub.add_parser("phase", parents=[common], help="magnitude/phase tools")
    s.add_argument("tool", choices=("magonly", "swap", "dof"))
    s.add_argument("inputs", nargs="*")
    s.add_argument("--complex", action="store_true", help="dof count for complex-valued functions")
    s.set_defaults(func=cmd_phase)

    s = sub.add_parser("spharm", parents=[common, filt], help="smooth a surface mesh")
    s.add_argument("inputs", nargs="*", help="x,y,z file or three field files; none = bumpy sphere")
    s.add_argument("--save-input-mesh", default=None)
    s.set_defaults(func=cmd_spharm)

    s = sub.add_parser("render", parents=[common], help="field -> PGM/PNG heatmap")
    s.add_argument("input")
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("verify", parents=[common], help="run the oracle suites")
    s.add_argument("--level", choices=("quick", "full"), default="quick")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if getattr(args, "times", 1) < 1:
        print("sphfir: --times must be >= 1", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"sphfir: {exc}", file=sys.stderr)
        return 1
    except (DomainError, np.linalg.LinAlgError, OSError) as exc:
        print(f"sphfir: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
