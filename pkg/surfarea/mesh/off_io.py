"""ASCII OFF reader and writer for triangle surfaces."""
import os
from typing import Tuple

import numpy as np

from surfarea.errors import InvalidParameter


def write_off(path, vertices, faces) -> None:
    vertices = np.asarray(vertices, dtype=np.float64)
    faces = np.asarray(faces, dtype=np.int64)
    if vertices.ndim != 2 or vertices.shape[1] != 3:
        raise InvalidParameter(f"OFF vertices must have shape (nv, 3), got {vertices.shape}")
    if faces.ndim != 2 or faces.shape[1] != 3:
        raise InvalidParameter(f"OFF faces must have shape (nf, 3), got {faces.shape}")

    dirname = os.path.dirname(os.fspath(path))
    if dirname:
        os.makedirs(dirname, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fout:
        fout.write("OFF\n")
        fout.write(f"{len(vertices)} {len(faces)} 0\n")
        np.savetxt(fout, vertices, fmt="%.17g")
        np.savetxt(fout, np.column_stack([np.full(len(faces), 3), faces]), fmt="%d")


def read_off(path) -> Tuple[np.ndarray, np.ndarray]:
    """Read the triangle subset of OFF written by write_off."""
    with open(path, "r", encoding="utf-8") as fin:
        lines = [line.split("#", 1)[0].strip() for line in fin]
    lines = [line for line in lines if line]
    if not lines or not lines[0].startswith("OFF"):
        raise InvalidParameter(f"{path}: missing OFF header")

    header = lines[0][3:].split()
    body = lines[1:]
    if not header and body:
        header, body = body[0].split(), body[1:]
    try:
        nv, nf = int(header[0]), int(header[1])
    except (IndexError, ValueError):
        raise InvalidParameter(f"{path}: bad counts line {' '.join(header)!r}")
    if len(body) < nv + nf:
        raise InvalidParameter(f"{path}: expected {nv} vertices and {nf} faces, file is truncated")

    vertices = np.array([line.split()[:3] for line in body[:nv]], dtype=np.float64).reshape(nv, 3)
    rows = [line.split() for line in body[nv : nv + nf]]
    if any(len(row) != 4 or row[0] != "3" for row in rows):
        raise InvalidParameter(f"{path}: only triangle faces are supported")
    faces = np.array([row[1:] for row in rows], dtype=np.int64).reshape(nf, 3)
    if nf and (faces.min() < 0 or faces.max() >= nv):
        raise InvalidParameter(f"{path}: face references a vertex index out of range")
    return vertices, faces
