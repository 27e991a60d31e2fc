"""Plain-text and raster file formats.

All writers are deterministic: floats use ``repr``-exact ``%.17g`` and line
endings are ``\\n``.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .filtering import FirTap, TransferFunction, tap
from .sphere import DomainError, SphereGrid, grid_from_counts
from .spectrum import Spectrum
from .transform import SampledField


class FormatError(DomainError):
    """A file does not follow the expected format."""


def _fmt(x: float) -> str:
    return "%.17g" % x


def _parse_header(line: str, magic: str) -> dict[str, str]:
    line = line.strip()
    if not line.startswith(magic):
        raise FormatError(f"expected header starting with {magic!r}, got {line[:40]!r}")
    return dict(re.findall(r"(\w+)=(\S+)", line[len(magic) :]))


def _data_lines(lines):
    for raw in lines:
        s = raw.strip()
        if s and not s.startswith("#"):
            yield s


def _floats(s: str) -> list[float]:
    try:
        return [float(x) for x in s.split(",")]
    except ValueError as exc:
        raise FormatError(f"non-numeric value in line {s!r}") from exc


def _read_lines(path) -> list[str]:
    try:
        return Path(path).read_text().splitlines()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


# --------------------------------------------------------------------------
# coefficients: "#sph-coeff v1 L=<L> real=<0|1>" then "l,m,re,im"


def format_spectrum(F: Spectrum) -> str:
    out = [f"#sph-coeff v1 L={F.L} real={int(F.real)}"]
    for ell in range(F.L):
        for m, v in zip(range(-ell, ell + 1), F[ell]):
            out.append(f"{ell},{m},{_fmt(v.real)},{_fmt(v.imag)}")
    return "\n".join(out) + "\n"


def write_spectrum(path, F: Spectrum) -> None:
    Path(path).write_text(format_spectrum(F))


def read_spectrum(path) -> Spectrum:
    lines = _read_lines(path)
    if not lines:
        raise FormatError(f"{path} is empty")
    hdr = _parse_header(lines[0], "#sph-coeff v1")
    try:
        L = int(hdr["L"])
        real = bool(int(hdr.get("real", "0")))
    except (KeyError, ValueError) as exc:
        raise FormatError(f"bad coefficient header {lines[0]!r}") from exc
    data = np.zeros((L, max(2 * L - 1, 0)), dtype=complex)
    for s in _data_lines(lines[1:]):
        parts = s.split(",")
        if len(parts) != 4:
            raise FormatError(f"bad coefficient line {s!r}")
        ell, m = int(parts[0]), int(parts[1])
        if not (0 <= ell < L and abs(m) <= ell):
            raise FormatError(f"index ({ell}, {m}) outside bandwidth {L}")
        data[ell, m + L - 1] = complex(float(parts[2]), float(parts[3]))
    return Spectrum(data, real)


# --------------------------------------------------------------------------
# fields: "#sph-grid v1 n_beta=<> n_alpha=<> [scheme=<>]" then one beta-row per line


def write_field(path, f: SampledField) -> None:
    g = f.grid
    vals = np.asarray(f.values)
    out = [f"#sph-grid v1 n_beta={g.n_beta} n_alpha={g.n_alpha} scheme={g.scheme}"]
    cplx = np.iscomplexobj(vals) and np.any(vals.imag != 0)
    for row in vals:
        if cplx:
            out.append(",".join(f"{_fmt(v.real)},{_fmt(v.imag)}" for v in row))
        else:
            out.append(",".join(_fmt(v) for v in np.real(row)))
    Path(path).write_text("\n".join(out) + "\n")


def read_field(path) -> SampledField:
    """Read a field file. Grids without a ``scheme`` key are taken as equiangular rasters."""
    lines = _read_lines(path)
    if not lines:
        raise FormatError(f"{path} is empty")
    hdr = _parse_header(lines[0], "#sph-grid v1")
    try:
        nb, na = int(hdr["n_beta"]), int(hdr["n_alpha"])
    except (KeyError, ValueError) as exc:
        raise FormatError(f"bad field header {lines[0]!r}") from exc
    grid = grid_from_counts(nb, na, hdr.get("scheme", "equiangular"))
    rows = [np.array(_floats(s)) for s in _data_lines(lines[1:])]
    if len(rows) != nb:
        raise FormatError(f"expected {nb} rows, found {len(rows)}")
    width = {len(r) for r in rows}
    if width == {na}:
        vals = np.array(rows)
    elif width == {2 * na}:
        arr = np.array(rows)
        vals = arr[:, 0::2] + 1j * arr[:, 1::2]
    else:
        raise FormatError(f"rows must hold {na} real or {na} re,im values")
    return SampledField(grid, vals)


def write_coordinates(path, surface) -> None:
    """One file, header as for fields, then one ``x,y,z`` line per node in row-major order."""
    g = surface.grid
    out = [f"#sph-grid v1 n_beta={g.n_beta} n_alpha={g.n_alpha} scheme={g.scheme}"]
    for p in surface.points.reshape(-1, 3):
        out.append(",".join(_fmt(v) for v in p))
    Path(path).write_text("\n".join(out) + "\n")


def read_coordinates(path) -> tuple[SampledField, SampledField, SampledField]:
    lines = _read_lines(path)
    if not lines:
        raise FormatError(f"{path} is empty")
    hdr = _parse_header(lines[0], "#sph-grid v1")
    try:
        nb, na = int(hdr["n_beta"]), int(hdr["n_alpha"])
    except (KeyError, ValueError) as exc:
        raise FormatError(f"bad coordinate header {lines[0]!r}") from exc
    grid = grid_from_counts(nb, na, hdr.get("scheme", "equiangular"))
    rows = [_floats(s) for s in _data_lines(lines[1:])]
    if any(len(r) != 3 for r in rows):
        raise FormatError("every coordinate line must hold x,y,z")
    pts = np.array(rows).reshape(-1, 3)
    if pts.shape != (nb * na, 3):
        raise FormatError(f"expected {nb * na} lines of x,y,z, got array of shape {pts.shape}")
    pts = pts.reshape(nb, na, 3)
    return tuple(SampledField(grid, pts[..., i]) for i in range(3))


# --------------------------------------------------------------------------
# grids: "#sph-grid-nodes v1 n_beta=<> n_alpha=<> scheme=<>" then "beta,weight"


def write_grid(path, grid: SphereGrid) -> None:
    out = [f"#sph-grid-nodes v1 n_beta={grid.n_beta} n_alpha={grid.n_alpha} scheme={grid.scheme}"]
    out += [f"{_fmt(b)},{_fmt(w)}" for b, w in zip(grid.beta_nodes, grid.beta_weights)]
    Path(path).write_text("\n".join(out) + "\n")


def read_grid(path) -> SphereGrid:
    lines = _read_lines(path)
    if not lines:
        raise FormatError(f"{path} is empty")
    hdr = _parse_header(lines[0], "#sph-grid-nodes v1")
    rows = np.array([_floats(s) for s in _data_lines(lines[1:])])
    try:
        nb, na, scheme = int(hdr["n_beta"]), int(hdr["n_alpha"]), hdr["scheme"]
    except (KeyError, ValueError) as exc:
        raise FormatError(f"bad grid header {lines[0]!r}") from exc
    if rows.shape != (nb, 2):
        raise FormatError("node rows do not match n_beta")
    return SphereGrid(rows[:, 0], rows[:, 1], na, scheme)


# --------------------------------------------------------------------------
# transfer functions: "#sph-transfer v1 L=<L>" then "l,m,n,re,im"


def write_transfer(path, H: TransferFunction) -> None:
    out = [f"#sph-transfer v1 L={H.L}"]
    for ell, M in enumerate(H.matrices):
        for i, m in enumerate(range(-ell, ell + 1)):
            for k, n in enumerate(range(-ell, ell + 1)):
                v = M[i, k]
                out.append(f"{ell},{m},{n},{_fmt(v.real)},{_fmt(v.imag)}")
    Path(path).write_text("\n".join(out) + "\n")


def read_transfer(path) -> TransferFunction:
    lines = _read_lines(path)
    if not lines:
        raise FormatError(f"{path} is empty")
    hdr = _parse_header(lines[0], "#sph-transfer v1")
    try:
        L = int(hdr["L"])
    except (KeyError, ValueError) as exc:
        raise FormatError(f"bad transfer header {lines[0]!r}") from exc
    mats = [np.zeros((2 * ell + 1, 2 * ell + 1), dtype=complex) for ell in range(L)]
    for s in _data_lines(lines[1:]):
        vals = _floats(s)
        if len(vals) != 5:
            raise FormatError(f"bad transfer line {s!r}")
        ell, m, n = (int(v) for v in vals[:3])
        if not (0 <= ell < L and abs(m) <= ell and abs(n) <= ell):
            raise FormatError(f"index ({ell}, {m}, {n}) outside bandwidth {L}")
        mats[ell][m + ell, n + ell] = complex(vals[3], vals[4])
    return TransferFunction(tuple(mats))


# --------------------------------------------------------------------------
# FIR taps: "weight,alpha,beta,gamma" or "weight_re,weight_im,alpha,beta,gamma"


def read_taps(path) -> list[FirTap]:
    taps = []
    for s in _data_lines(_read_lines(path)):
        vals = _floats(s)
        if len(vals) == 4:
            w, a, b, g = vals
        elif len(vals) == 5:
            w, a, b, g = complex(vals[0], vals[1]), *vals[2:]
        else:
            raise FormatError(f"bad tap line {s!r}")
        taps.append(tap(w, a, b, g))
    if not taps:
        raise FormatError(f"{path} holds no taps")
    return taps


def write_taps(path, rows) -> None:
    """Write ``(weight, alpha, beta, gamma)`` rows."""
    out = ["# weight,alpha,beta,gamma"]
    out += [",".join(_fmt(float(v)) for v in r) for r in rows]
    Path(path).write_text("\n".join(out) + "\n")


# --------------------------------------------------------------------------
# PGM rasters: row 0 is the north pole, column 0 is longitude 0


def read_pgm(path) -> np.ndarray:
    """8/16-bit PGM (binary P5 or ASCII P2) as floats scaled to [0, 1]."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(raw) and raw[pos : pos + 1].isspace():
            pos += 1
        if pos >= len(raw):
            raise FormatError(f"{path}: truncated raster header")
        if raw[pos : pos + 1] == b"#":
            pos = raw.find(b"\n", pos) + 1 or len(raw)
            continue
        start = pos
        while pos < len(raw) and not raw[pos : pos + 1].isspace():
            pos += 1
        tokens.append(raw[start:pos].decode("ascii"))
    magic = tokens[0]
    if magic not in ("P2", "P5"):
        raise FormatError(f"unsupported raster type {magic!r}; expected P2 or P5")
    try:
        w, h, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    except ValueError as exc:
        raise FormatError(f"{path}: bad raster header") from exc
    if w < 1 or h < 1 or not 0 < maxval < 65536:
        raise FormatError(f"{path}: bad raster size {w}x{h} or maxval {maxval}")
    if magic == "P5":
        dtype = np.uint8 if maxval < 256 else np.dtype(">u2")
        body = raw[pos + 1 :]
        if len(body) < w * h * np.dtype(dtype).itemsize:
            raise FormatError(f"{path}: raster data truncated")
        arr = np.frombuffer(body, dtype=dtype, count=w * h).reshape(h, w)
    else:
        vals = raw[pos:].split()
        if len(vals) < w * h:
            raise FormatError(f"{path}: raster data truncated")
        arr = np.array(vals[: w * h], dtype=int).reshape(h, w)
    return arr.astype(float) / maxval


def write_pgm(path, image: np.ndarray, comment: str | None = None) -> None:
    img = np.asarray(image, dtype=np.uint8)
    h, w = img.shape
    head = "P5\n" + (f"# {comment}\n" if comment else "") + f"{w} {h}\n255\n"
    Path(path).write_bytes(head.encode("ascii") + img.tobytes())


def field_from_raster(values: np.ndarray) -> SampledField:
    """Interpret an image as samples on an equiangular (midpoint) grid."""
    values = np.asarray(values, dtype=float)
    return SampledField(grid_from_counts(values.shape[0], values.shape[1], "equiangular"), values)


# --------------------------------------------------------------------------
# meshes and responses


def write_obj(path, vertices: np.ndarray, faces: np.ndarray, comment: str | None = None) -> None:
    out = [f"# {comment}"] if comment else []
    out += ["v " + " ".join(_fmt(c) for c in v) for v in vertices]
    out += ["f " + " ".join(str(int(i) + 1) for i in f) for f in faces]
    Path(path).write_text("\n".join(out) + "\n")


def read_obj(path) -> tuple[np.ndarray, np.ndarray]:
    verts, faces = [], []
    for s in _read_lines(path):
        if s.startswith("v "):
            verts.append([float(x) for x in s.split()[1:4]])
        elif s.startswith("f "):
            faces.append([int(x.split("/")[0]) - 1 for x in s.split()[1:]])
    return np.array(verts), np.array(faces, dtype=np.int64)


def write_freqresp(path, norms: np.ndarray) -> None:
    out = ["l,norm"] + [f"{ell},{_fmt(v)}" for ell, v in enumerate(norms)]
    Path(path).write_text("\n".join(out) + "\n")
