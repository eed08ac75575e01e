"""Plain-text matrix/state files and the JSON form of gate sequences.

Matrix files: first line the dimension, then one row per line of
whitespace-separated complex literals ``a+bi`` / ``a-bi`` (no spaces inside
an entry).  A bare real ``a`` is accepted on input.  Reals are written with
17 significant digits so 64-bit floats round-trip exactly.
"""

import os
import re
import tempfile

import numpy as np

from .circuit import GateSequence, JPower, Perm
from .gates import PermGate

_REAL = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(rf"^(?P<re>{_REAL})(?P<im>[+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i$")
_PURE_REAL = re.compile(rf"^{_REAL}$")


class FormatError(ValueError):
    pass


def parse_complex(tok):
    m = _COMPLEX.match(tok)
    if m:
        return complex(float(m["re"]), float(m["im"]))
    if _PURE_REAL.match(tok):
        return complex(float(tok), 0.0)
    raise FormatError(f"malformed complex literal {tok!r} (expected a+bi or a-bi)")


def format_real(x):
    return f"{x:.17g}"


def format_complex(z):
    return f"{z.real:.17g}{z.imag:+.17g}i"


def parse_matrix(text):
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty matrix file")
    try:
        dim = int(lines[0][0])
    except ValueError:
        raise FormatError(f"first line must be an integer dimension, got {lines[0]!r}") from None
    if len(lines[0]) != 1 or dim < 1:
        raise FormatError(f"bad dimension line {lines[0]!r}")
    rows = lines[1:]
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise FormatError(f"expected {dim} rows of {dim} entries")
    return np.array([[parse_complex(t) for t in r] for r in rows], dtype=complex)


def format_matrix(m):
    m = np.asarray(m, dtype=complex)
    rows = [" ".join(format_complex(z) for z in row) for row in m]
    return "\n".join([str(len(m)), *rows]) + "\n"


def parse_state(text):
    """Four amplitudes, whitespace separated; an optional leading ``4`` line is skipped."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if lines and lines[0] == ["4"] and sum(len(ln) for ln in lines[1:]) == 4:
        lines = lines[1:]
    toks = [t for ln in lines for t in ln]
    if len(toks) != 4:
        raise FormatError(f"expected 4 amplitudes, got {len(toks)}")
    return np.array([parse_complex(t) for t in toks], dtype=complex)


def read_text(path):
    with open(path) as fh:
        return fh.read()


def write_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sequence_to_records(seq):
    out = []
    for gate in seq.gates:
        if isinstance(gate, JPower):
            out.append({"type": "jpow", "m": gate.m, "swapped": gate.swapped,
                        "step_error": gate.step_error})
        else:
            out.append({"type": "perm", "perm": list(gate.perm.perm),
                        "signs": list(gate.perm.signs), "step_error": 0.0})
    return out


def sequence_from_records(records, alpha, beta, global_phase=0.0):
    gates = []
    for rec in records:
        if rec["type"] == "jpow":
            gates.append(JPower(int(rec["m"]), float(rec["step_error"]),
                                bool(rec.get("swapped", False))))
        elif rec["type"] == "perm":
            gates.append(Perm(PermGate(tuple(rec["perm"]), tuple(rec["signs"]))))
        else:
            raise FormatError(f"unknown gate type {rec['type']!r}")
    return GateSequence(gates, alpha, beta, global_phase)


def write_matrix(path, m):
    write_atomic(path, format_matrix(m))
