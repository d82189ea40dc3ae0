"""Text serialization of bases.

A basis file is a JSON object with keys in a fixed order::

    format_version, dims, k, special, members, provenance,
    [schmidt_forms], [verification]

Complex numbers are ``[re, im]`` pairs printed with Python's shortest
round-trip float repr, so parsing recovers every double bit for bit.  Each
member is written on its own line to keep small files readable.
"""

import json

import numpy as np

from . import states as st
from .constructors import BasisCandidate
from .errors import InvalidBasisFile, ParseError, UebkError

FORMAT_VERSION = 1


def _jsonable(x):
    """Normalize provenance-like data to plain JSON values with sorted keys."""
    if isinstance(x, dict):
        return {str(k): _jsonable(x[k]) for k in sorted(x, key=str)}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if x is None or isinstance(x, str):
        return x
    return str(x)


def _pairs(v):
    v = np.asarray(v, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in v]


def _dump(x):
    return json.dumps(x, ensure_ascii=False, allow_nan=False)


def _form_payload(form):
    if form is None:
        return None
    return {
        "coefficients": [float(c) for c in form.coefficients],
        "frames": [[_pairs(f[:, j]) for j in range(f.shape[1])] for f in form.frames],
    }


def serialize(b, report=None):
    """UTF-8 bytes of the basis file for ``b`` (optionally with a report digest)."""
    lines = ["{"]
    fields = [
        ("format_version", _dump(FORMAT_VERSION)),
        ("dims", _dump(list(b.dims))),
        ("k", _dump(int(b.k))),
        ("special", _dump(bool(b.claimed_special))),
    ]
    for key, val in fields:
        lines.append(f'  "{key}": {val},')
    members = [_dump(_pairs(s.vector)) for s in b.members]
    lines.append('  "members": [')
    lines.append(",\n".join("    " + m for m in members))
    lines.append("  ],")
    tail = [("provenance", _dump(_jsonable(b.provenance)))]
    if b.forms is not None:
        tail.append(("schmidt_forms", _dump([_form_payload(f) for f in b.forms])))
    if report is not None:
        tail.append(("verification", _dump(_jsonable(report.summary()))))
    for i, (key, val) in enumerate(tail):
        comma = "," if i < len(tail) - 1 else ""
        lines.append(f'  "{key}": {val}{comma}')
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _complex_array(data, where):
    if not isinstance(data, list):
        raise ParseError("expected a list of [re, im] pairs", where)
    out = np.empty(len(data), dtype=complex)
    for i, pair in enumerate(data):
        ok = (
            isinstance(pair, list)
            and len(pair) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
        )
        if not ok:
            raise ParseError("expected an [re, im] pair of numbers", f"{where}[{i}]")
        out[i] = complex(pair[0], pair[1])
    return out


def _require(obj, key, kind, where="$"):
    if key not in obj:
        raise ParseError(f"missing key {key!r}", where)
    val = obj[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise ParseError(f"{key!r} must be an integer", f"{where}.{key}")
    if kind is not int and not isinstance(val, kind):
        raise ParseError(f"{key!r} has the wrong type", f"{where}.{key}")
    return val


def _parse_form(data, dims, where):
    if data is None:
        return None
    if not isinstance(data, dict):
        raise ParseError("expected an object", where)
    lam = _require(data, "coefficients", list, where)
    frames = _require(data, "frames", list, where)
    if len(frames) != len(dims):
        raise ParseError("one frame per party expected", f"{where}.frames")
    mats = []
    for s, (cols, d) in enumerate(zip(frames, dims)):
        if not isinstance(cols, list) or len(cols) != len(lam):
            raise ParseError("one column per coefficient expected", f"{where}.frames[{s}]")
        m = np.column_stack([_complex_array(c, f"{where}.frames[{s}][{j}]") for j, c in enumerate(cols)])
        if m.shape[0] != d:
            raise ParseError(f"frame length must be {d}", f"{where}.frames[{s}]")
        mats.append(m)
    try:
        return st.SchmidtForm(np.asarray(lam, dtype=float), tuple(mats), check=False)
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc), where) from exc


def parse(data):
    """Rebuild ``(BasisCandidate, verification_summary_or_None)`` from file bytes.

    Structural problems raise ParseError with a position (a character offset for
    JSON syntax errors, a path such as ``$.members[2]`` otherwise); a well-formed
    file describing an invalid basis raises InvalidBasisFile.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError("file is not UTF-8", exc.start) from exc
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.pos) from exc
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object", "$")
    version = _require(obj, "format_version", int)
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format_version {version}", "$.format_version")
    dims = _require(obj, "dims", list)
    if not dims or not all(isinstance(d, int) and not isinstance(d, bool) for d in dims):
        raise ParseError("dims must be a nonempty list of integers", "$.dims")
    k = _require(obj, "k", int)
    special = _require(obj, "special", bool)
    raw = _require(obj, "members", list)
    provenance = _require(obj, "provenance", dict)
    if any(d < 1 for d in dims):
        raise InvalidBasisFile(f"dimensions must be positive, got {dims}")
    total = int(np.prod(dims))
    members = []
    for i, m in enumerate(raw):
        vec = _complex_array(m, f"$.members[{i}]")
        if vec.size != total:
            raise ParseError(f"member has {vec.size} amplitudes, expected {total}", f"$.members[{i}]")
        members.append(vec)
    forms = None
    if "schmidt_forms" in obj:
        fl = obj["schmidt_forms"]
        if not isinstance(fl, list) or len(fl) != len(members):
            raise ParseError("one entry per member expected", "$.schmidt_forms")
        forms = [_parse_form(f, dims, f"$.schmidt_forms[{i}]") for i, f in enumerate(fl)]
    try:
        states = [st.MultiState(tuple(dims), v) for v in members]
        b = BasisCandidate(tuple(dims), k, states, provenance, special, forms)
    except (UebkError, ValueError) as exc:
        raise InvalidBasisFile(str(exc)) from exc
    return b, obj.get("verification")


def write_basis(path, b, report=None):
    with open(path, "wb") as fh:
        fh.write(serialize(b, report))


def read_basis(path):
    with open(path, "rb") as fh:
        return parse(fh.read())
