"""State, certificate, and report files.

Format: JSON (nested key/value with arrays), matrices row-major, floats
printed with 17 significant digits so a save/load round trip reproduces
every double bit-exactly.  The emitter below is deterministic: identical
inputs give byte-identical files.
"""

import json
import math

import numpy as np

from .errors import DimensionMismatch, StateFileError
from .matrix_kernel import symmetrize
from .states import Partition

__all__ = [
    "ORDERING_TAG",
    "format_float",
    "dumps",
    "save",
    "load",
    "state_to_dict",
    "parse_state_dict",
    "load_state_file",
    "certificate_to_dict",
    "parse_certificate_dict",
]

ORDERING_TAG = "xp-blocks-per-subsystem"


def format_float(x):
    x = float(x)
    if not math.isfinite(x):
        raise StateFileError("non-finite value cannot be serialized: %r" % x)
    return "%.17g" % x


def _emit(obj, indent, out):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(pad + "  " + json.dumps(str(k)) + ": ")
            _emit(v, indent + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        flat = all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in items)
        if flat:
            out.append("[")
            for i, v in enumerate(items):
                _emit(v, indent, out)
                if i < len(items) - 1:
                    out.append(", ")
            out.append("]")
        else:
            out.append("[\n")
            for i, v in enumerate(items):
                out.append(pad + "  ")
                _emit(v, indent + 1, out)
                out.append(",\n" if i < len(items) - 1 else "\n")
            out.append(pad + "]")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    else:
        raise StateFileError("cannot serialize %r" % type(obj))


def dumps(obj):
    out = []
    _emit(obj, 0, out)
    out.append("\n")
    return "".join(out)


def save(path, obj):
    with open(path, "w") as fh:
        fh.write(dumps(obj))


def load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise StateFileError("cannot read %s: %s" % (path, exc)) from exc
    except json.JSONDecodeError as exc:
        raise StateFileError(
            "%s is not valid JSON (line %d, column %d): %s"
            % (path, exc.lineno, exc.colno, exc.msg)
        ) from exc


def _matrix(obj, field, dim=None):
    try:
        m = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFileError("field %r is not a numeric matrix" % field) from exc
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StateFileError("field %r must be a square matrix" % field)
    if dim is not None and m.shape[0] != dim:
        raise StateFileError(
            "field %r has dimension %d, expected %d" % (field, m.shape[0], dim)
        )
    return m


def state_to_dict(sigma, partition, hbar, mean=None, label=None):
    d = {
        "hbar": float(hbar),
        "n_A": int(partition.n_A),
        "n_B": int(partition.n_B),
        "ordering": ORDERING_TAG,
        "sigma": np.asarray(sigma, dtype=float),
    }
    if mean is not None and np.any(np.asarray(mean) != 0.0):
        d["mean"] = np.asarray(mean, dtype=float)
    if label is not None:
        d["label"] = str(label)
    return d


def parse_state_dict(obj):
    """Validate a state dict; returns (sigma, mean, hbar, partition, label)."""
    if not isinstance(obj, dict):
        raise StateFileError("state file must hold a JSON object at top level")
    for req in ("hbar", "n_A", "n_B", "ordering", "sigma"):
        if req not in obj:
            raise StateFileError("missing required field %r" % req)
    if obj["ordering"] != ORDERING_TAG:
        raise StateFileError(
            "field 'ordering' is %r; this tool reads only %r"
            % (obj["ordering"], ORDERING_TAG)
        )
    try:
        partition = Partition(n_A=int(obj["n_A"]), n_B=int(obj["n_B"]))
    except (TypeError, ValueError, DimensionMismatch) as exc:
        raise StateFileError("fields n_A/n_B must be positive integers") from exc
    try:
        hbar = float(obj["hbar"])
    except (TypeError, ValueError) as exc:
        raise StateFileError("field 'hbar' must be a number") from exc
    if hbar <= 0:
        raise StateFileError("field 'hbar' must be positive")
    sigma = _matrix(obj["sigma"], "sigma", partition.dim)
    if float(np.max(np.abs(sigma - sigma.T))) > 1e-12:
        raise StateFileError("field 'sigma' is not symmetric within 1e-12")
    sigma = symmetrize(sigma)
    mean = np.zeros(partition.dim)
    if "mean" in obj and obj["mean"] is not None:
        try:
            mean = np.array(obj["mean"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise StateFileError("field 'mean' is not a numeric array") from exc
        if mean.shape != (partition.dim,):
            raise StateFileError(
                "field 'mean' has length %d, expected %d"
                % (mean.size, partition.dim)
            )
    label = obj.get("label")
    return sigma, mean, hbar, partition, label


def load_state_file(path):
    return parse_state_dict(load(path))


def certificate_to_dict(cert):
    d = {
        "P_A": cert.P_A,
        "P_B": cert.P_B,
        "S_A": cert.S_A,
        "S_B": cert.S_B,
        "slack": float(cert.slack),
    }
    if cert.sigma_A is not None:
        d["sigma_A"] = cert.sigma_A
        d["sigma_B"] = cert.sigma_B
    return d


def parse_certificate_dict(obj):
    """Accepts a bare certificate object or a full verdict report; returns
    (P_A, P_B)."""
    if not isinstance(obj, dict):
        raise StateFileError("certificate file must hold a JSON object")
    if "certificate" in obj and isinstance(obj["certificate"], dict):
        obj = obj["certificate"]
    for req in ("P_A", "P_B"):
        if req not in obj:
            raise StateFileError("missing required field %r" % req)
    return _matrix(obj["P_A"], "P_A"), _matrix(obj["P_B"], "P_B")
