"""Point-cloud readers and mesh/diagram writers.

Readers accept whitespace-separated XYZ text, PLY (ascii and binary), OFF and
OBJ; only vertex positions are kept, in file order.  Meshes are written as
ASCII OFF with 17 significant digits so a round trip is exact.
"""
from __future__ import annotations

import csv
import io
import math
import os
from pathlib import Path

import numpy as np

from .errors import EmptyFile, ParseError
from .mesh import SurfaceMesh
from .pointcloud import PointCloud

_PLY_TYPES = {
    "char": "i1", "int8": "i1", "uchar": "u1", "uint8": "u1",
    "short": "i2", "int16": "i2", "ushort": "u2", "uint16": "u2",
    "int": "i4", "int32": "i4", "uint": "u4", "uint32": "u4",
    "float": "f4", "float32": "f4", "double": "f8", "float64": "f8",
}


def _fmt(x: float) -> str:
    return "%.17g" % x


def _floats(tokens, lineno: int, path) -> list[float]:
    out = []
    for tok in tokens:
        try:
            v = float(tok)
        except ValueError:
            raise ParseError(f"{path}: line {lineno}: bad numeric token {tok!r}") from None
        if not math.isfinite(v):
            raise ParseError(f"{path}: line {lineno}: non-finite coordinate {tok!r}")
        out.append(v)
    return out


def _read_xyz(text: str, path) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].replace(",", " ").split()
        if not body:
            continue
        if len(body) < 3:
            raise ParseError(f"{path}: line {lineno}: expected 3 coordinates, got {len(body)}")
        rows.append(_floats(body[:3], lineno, path))
    return np.array(rows, dtype=float).reshape(-1, 3)


def _read_obj(text: str, path) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split()
        if not body or body[0] != "v":
            continue
        if len(body) < 4:
            raise ParseError(f"{path}: line {lineno}: vertex needs 3 coordinates")
        rows.append(_floats(body[1:4], lineno, path))
    return np.array(rows, dtype=float).reshape(-1, 3)


def _off_tokens(text: str):
    """(lineno, tokens) of the non-empty, comment-stripped lines."""
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].split()
        if body:
            yield lineno, body


def _read_off(text: str, path, with_faces: bool = False):
    lines = _off_tokens(text)
    try:
        lineno, head = next(lines)
    except StopIteration:
        raise EmptyFile(f"{path}: empty file") from None
    if not head[0].endswith("OFF"):
        raise ParseError(f"{path}: line {lineno}: missing OFF header")
    head = head[1:]
    if not head:
        try:
            lineno, head = next(lines)
        except StopIteration:
            raise ParseError(f"{path}: line {lineno}: missing OFF counts") from None
    try:
        nv, nf = int(head[0]), int(head[1])
    except (ValueError, IndexError):
        raise ParseError(f"{path}: line {lineno}: bad OFF counts") from None
    verts, faces = [], []
    for _ in range(nv):
        try:
            lineno, body = next(lines)
        except StopIteration:
            raise ParseError(f"{path}: line {lineno}: expected {nv} vertices") from None
        if len(body) < 3:
            raise ParseError(f"{path}: line {lineno}: vertex needs 3 coordinates")
        verts.append(_floats(body[:3], lineno, path))
    if with_faces:
        for _ in range(nf):
            try:
                lineno, body = next(lines)
            except StopIteration:
                raise ParseError(f"{path}: line {lineno}: expected {nf} faces") from None
            try:
                k = int(body[0])
                idx = [int(t) for t in body[1:1 + k]]
            except (ValueError, IndexError):
                raise ParseError(f"{path}: line {lineno}: bad face record") from None
            if k != 3 or len(idx) != 3:
                raise ParseError(f"{path}: line {lineno}: only triangles are supported")
            if min(idx) < 0 or max(idx) >= nv:
                raise ParseError(f"{path}: line {lineno}: face index out of range")
            faces.append(idx)
    v = np.array(verts, dtype=float).reshape(-1, 3)
    if with_faces:
        return v, np.array(faces, dtype=np.int64).reshape(-1, 3)
    return v


def _read_ply(data: bytes, path) -> np.ndarray:
    end = data.find(b"end_header")
    if end < 0:
        raise ParseError(f"{path}: byte 0: PLY header has no end_header")
    nl = data.find(b"\n", end)
    body_start = len(data) if nl < 0 else nl + 1
    header = data[:end].decode("ascii", errors="replace").splitlines()
    fmt = None
    elements: list[list] = []  # [name, count, [(prop, dtype | list spec)]]
    for lineno, line in enumerate(header, start=1):
        tok = line.split()
        if not tok or tok[0] in ("ply", "comment", "obj_info"):
            continue
        if tok[0] == "format":
            fmt = tok[1]
        elif tok[0] == "element":
            elements.append([tok[1], int(tok[2]), []])
        elif tok[0] == "property":
            if not elements:
                raise ParseError(f"{path}: line {lineno}: property before element")
            if tok[1] == "list":
                spec = ("list", _PLY_TYPES[tok[2]], _PLY_TYPES[tok[3]])
                elements[-1][2].append((tok[4], spec))
            else:
                if tok[1] not in _PLY_TYPES:
                    raise ParseError(f"{path}: line {lineno}: unknown type {tok[1]!r}")
                elements[-1][2].append((tok[2], _PLY_TYPES[tok[1]]))
    if fmt not in ("ascii", "binary_little_endian", "binary_big_endian"):
        raise ParseError(f"{path}: line 2: unsupported PLY format {fmt!r}")
    vertex = next((e for e in elements if e[0] == "vertex"), None)
    if vertex is None or vertex[1] == 0:
        raise EmptyFile(f"{path}: PLY has no vertices")
    names = [p for p, _ in vertex[2]]
    if not {"x", "y", "z"} <= set(names):
        raise ParseError(f"{path}: vertex element lacks x/y/z properties")
    cols = [names.index(c) for c in "xyz"]

    if fmt == "ascii":
        lines = data[body_start:].decode("ascii", errors="replace").splitlines()
        first_line = len(header) + 2
        rows = []
        li = 0
        for name, count, props in elements:
            for _ in range(count):
                while li < len(lines) and not lines[li].split():
                    li += 1
                if li >= len(lines):
                    raise ParseError(f"{path}: line {first_line + li}: truncated {name} data")
                tok = lines[li].split()
                if name == "vertex":
                    if len(tok) < len(props):
                        raise ParseError(f"{path}: line {first_line + li}: short vertex record")
                    rows.append(_floats([tok[c] for c in cols], first_line + li, path))
                li += 1
            if name == "vertex":
                break
        return np.array(rows, dtype=float).reshape(-1, 3)

    order = "<" if fmt == "binary_little_endian" else ">"
    offset = body_start
    for name, count, props in elements:
        if any(isinstance(t, tuple) for _, t in props):
            if name == "vertex":
                raise ParseError(f"{path}: byte {offset}: list property in vertex element")
            break  # vertices come first in practice; later elements are skipped
        dt = np.dtype([(p, order + t) for p, t in props])
        need = dt.itemsize * count
        if offset + need > len(data):
            raise ParseError(f"{path}: byte {offset}: truncated binary {name} data")
        if name == "vertex":
            arr = np.frombuffer(data, dtype=dt, count=count, offset=offset)
            out = np.stack([arr[c].astype(float) for c in "xyz"], axis=1)
            bad = ~np.isfinite(out).all(axis=1)
            if bad.any():
                i = int(np.flatnonzero(bad)[0])
                raise ParseError(f"{path}: byte {offset + i * dt.itemsize}: non-finite vertex")
            return out
        offset += need
    raise ParseError(f"{path}: byte {offset}: vertex element not found before list data")


def load_point_cloud(path) -> PointCloud:
    """Read positions from .xyz/.txt/.pts, .ply, .off or .obj, in file order."""
    path = Path(path)
    data = path.read_bytes()
    if not data.strip():
        raise EmptyFile(f"{path}: empty file")
    ext = path.suffix.lower()
    if ext == ".ply" or data.startswith(b"ply"):
        pts = _read_ply(data, path)
    else:
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"{path}: byte {exc.start}: not UTF-8 text") from None
        if ext == ".off" or text.lstrip().startswith(("OFF", "COFF", "NOFF")):
            pts = _read_off(text, path)
        elif ext == ".obj":
            pts = _read_obj(text, path)
        else:
            pts = _read_xyz(text, path)
    if len(pts) == 0:
        raise EmptyFile(f"{path}: no points")
    return PointCloud(pts)


def mesh_to_off(mesh: SurfaceMesh) -> str:
    buf = io.StringIO()
    buf.write("OFF\n")
    buf.write(f"{mesh.n_vertices} {mesh.n_faces} 0\n")
    for x, y, z in mesh.vertices.tolist():
        buf.write(f"{_fmt(x)} {_fmt(y)} {_fmt(z)}\n")
    for a, b, c in mesh.faces.tolist():
        buf.write(f"3 {a} {b} {c}\n")
    return buf.getvalue()


def write_off(mesh: SurfaceMesh, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(mesh_to_off(mesh))


def read_off(path) -> SurfaceMesh:
    path = Path(path)
    text = path.read_text()
    if not text.strip():
        raise EmptyFile(f"{path}: empty file")
    v, f = _read_off(text, path, with_faces=True)
    return SurfaceMesh(v, f)


PD_HEADER = ["dim", "birth", "death", "pos_simplex", "neg_simplex", "significant"]


def _simplex_str(s) -> str:
    return "" if s is None else " ".join(str(v) for v in s)


def write_pd_csv(rows, path) -> None:
    """``rows``: iterable of (pair, pos_vertices, neg_vertices | None, significant)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PD_HEADER)
        for pair, pos, neg, sig in rows:
            w.writerow([pair.dim, _fmt(pair.birth), _fmt(pair.death),
                        _simplex_str(pos), _simplex_str(neg), int(bool(sig))])


def ensure_dir(path) -> Path:
    p = Path(path)
    os.makedirs(p, exist_ok=True)
    return p
