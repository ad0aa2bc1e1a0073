"""File formats: state/unitary JSON, tomogram CSV with frame sidecars, and
deterministic JSON output with 17 significant digits."""

from __future__ import annotations

import csv
import json
import math

import numpy as np

from .errors import DimensionError, ValidationError
from .state import BipartiteShape, validate
from .su2 import EulerAngles, HalfInteger


def fmt(x):
    """Format a float with 17 significant digits (round-trip exact)."""
    x = float(x)
    if x == 0.0:
        return "0"  # also folds -0.0
    return format(x, ".17g")


def dumps(obj, indent=2):
    """JSON text with floats at 17 significant digits in insertion order."""
    return _dump(obj, indent, 0) + "\n"


def _dump(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(obj if obj is None else bool(obj))
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            raise ValueError(f"cannot serialize non-finite value {obj!r}")
        return fmt(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, HalfInteger):
        return json.dumps(str(obj))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dump(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(_dump(v, indent, level + 1) for v in seq) + "]"
        items = [pad + _dump(v, indent, level + 1) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def matrix_to_pairs(m):
    """Row-major list of ``[re, im]`` pairs."""
    m = np.asarray(m, dtype=complex)
    return [[float(z.real), float(z.imag)] for z in m.ravel()]


def pairs_to_matrix(dim, entries):
    arr = np.asarray(entries, dtype=float)
    if arr.ndim == 3 and arr.shape[-1] == 2:  # nested rows of pairs
        arr = arr.reshape(-1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValidationError("entries must be a list of [re, im] pairs")
    if arr.shape[0] != dim * dim:
        raise DimensionError(f"dim {dim} needs {dim * dim} entries, got {arr.shape[0]}")
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(dim, dim)


def shape_to_json(shape):
    return {"j1": str(shape.j1), "j2": str(shape.j2)}


def shape_from_json(obj):
    return BipartiteShape(HalfInteger.parse(str(obj["j1"])), HalfInteger.parse(str(obj["j2"])))


def state_to_json(rho, shape=None, extra=None):
    m = np.asarray(rho)
    out = {"dim": int(m.shape[0]), "entries": matrix_to_pairs(m)}
    shape = shape if shape is not None else getattr(rho, "shape", None)
    if isinstance(shape, BipartiteShape):
        out["shape"] = shape_to_json(shape)
    if extra:
        out.update(extra)
    return out


def load_matrix_json(path):
    """Read ``{"dim", "entries", "shape"?}``; returns ``(matrix, shape or None)``."""
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(obj, dict) or "dim" not in obj or "entries" not in obj:
        raise ValidationError(f"{path}: expected an object with 'dim' and 'entries'")
    dim = int(obj["dim"])
    m = pairs_to_matrix(dim, obj["entries"])
    shape = shape_from_json(obj["shape"]) if obj.get("shape") else None
    if shape is not None and shape.n != dim:
        raise DimensionError(f"{path}: shape {shape} implies dimension {shape.n}, file says {dim}")
    return m, shape


def load_state(path, tol=None):
    m, shape = load_matrix_json(path)
    return validate(m, tol=tol, shape=shape)


def write_state(path, rho, shape=None, extra=None):
    with open(path, "w") as fh:
        fh.write(dumps(state_to_json(rho, shape, extra)))


def angles_to_json(a):
    return {"phi": a.phi, "theta": a.theta, "psi": a.psi}


def angles_from_json(obj):
    return EulerAngles(obj.get("phi", 0.0), obj.get("theta", 0.0), obj.get("psi", 0.0))


SINGLE_HEADER = "m,phi,theta,probability"
SINGLE_UNITARY_HEADER = "m,frame_id,probability"
JOINT_HEADER = "m1,m2,frame_id,probability"


def single_tomogram_rows(tomograms):
    """CSV lines for sphere-frame spin tomograms, one block per direction."""
    lines = [SINGLE_HEADER]
    for t in tomograms:
        for m, p in zip(t.projections(), t.probabilities):
            lines.append(f"{m},{fmt(t.frame.phi)},{fmt(t.frame.theta)},{fmt(p)}")
    return lines


def unitary_tomogram_rows(tomograms):
    lines = [SINGLE_UNITARY_HEADER]
    for fid, t in enumerate(tomograms):
        for m, p in zip(t.projections(), t.probabilities):
            lines.append(f"{m},{fid},{fmt(p)}")
    return lines


def joint_tomogram_rows(tomograms):
    lines = [JOINT_HEADER]
    for fid, t in enumerate(tomograms):
        for a, m1 in enumerate(t.shape.j1.projections()):
            for b, m2 in enumerate(t.shape.j2.projections()):
                lines.append(f"{m1},{m2},{fid},{fmt(t.probabilities[a, b])}")
    return lines


def frame_to_json(frame_id, frame):
    if isinstance(frame, tuple):
        return {"frame_id": frame_id, "kind": "euler",
                "angles1": angles_to_json(frame[0]), "angles2": angles_to_json(frame[1])}
    if isinstance(frame, EulerAngles):
        return {"frame_id": frame_id, "kind": "euler", "angles": angles_to_json(frame)}
    return {"frame_id": frame_id, "kind": "unitary", "dim": frame.n, "entries": matrix_to_pairs(frame.matrix)}


def read_csv_rows(path):
    """Parse a tomogram CSV into a list of dicts (comment lines skipped)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(line for line in fh if not line.startswith("#"))
        return list(reader)
