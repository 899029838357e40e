"""Matrix Market text I/O for dense real matrices.

Reads the ``array`` and ``coordinate`` formats with ``real`` entries and
``general`` or ``symmetric`` storage; symmetric storage is expanded to a
full dense matrix. Parse failures raise MatrixMarketError with the 1-based
line number. Writing always emits ``array real general`` with 17
significant digits, which round-trips float64 exactly.
"""

from __future__ import annotations

import math

import numpy as np

from .linalg import as_matrix


class MatrixMarketError(ValueError):
    """Malformed Matrix Market content."""


_BANNER = "%%matrixmarket"


def _parse_positive_int(token: str, line_no: int, what: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise MatrixMarketError(f"line {line_no}: {what} {token!r} is not an integer") from None
    if value < 1:
        raise MatrixMarketError(f"line {line_no}: {what} must be positive, got {value}")
    return value


def _parse_real(token: str, line_no: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise MatrixMarketError(
            f"line {line_no}: entry {token!r} is not a real number"
        ) from None
    if not math.isfinite(value):
        raise MatrixMarketError(f"line {line_no}: entry {token!r} is not finite")
    return value


def read_matrix_market(text) -> np.ndarray:
    """Parse Matrix Market content (str or bytes) into a dense float matrix."""
    if isinstance(text, (bytes, bytearray)):
        text = bytes(text).decode("latin-1")
    lines = text.splitlines()
    if not lines:
        raise MatrixMarketError("line 1: empty input, expected a Matrix Market header")

    header = lines[0].split()
    if len(header) != 5 or header[0].lower() != _BANNER:
        raise MatrixMarketError(
            "line 1: expected header '%%MatrixMarket matrix <format> <field> <symmetry>'"
        )
    obj, fmt, field, symmetry = (tok.lower() for tok in header[1:])
    if obj != "matrix":
        raise MatrixMarketError(f"line 1: unsupported object '{obj}' (only 'matrix' is supported)")
    if fmt not in ("array", "coordinate"):
        raise MatrixMarketError(
            f"line 1: unsupported format '{fmt}' (expected 'array' or 'coordinate')"
        )
    if field != "real":
        raise MatrixMarketError(f"line 1: unsupported field '{field}' (only 'real' is supported)")
    if symmetry not in ("general", "symmetric"):
        raise MatrixMarketError(
            f"line 1: unsupported symmetry '{symmetry}' (expected 'general' or 'symmetric')"
        )

    body = [
        (no, stripped)
        for no, stripped in ((i + 1, ln.strip()) for i, ln in enumerate(lines[1:], start=1))
        if stripped and not stripped.startswith("%")
    ]
    if not body:
        raise MatrixMarketError(f"line {len(lines)}: missing size line")
    size_no, size_line = body[0]
    entries = body[1:]

    if fmt == "array":
        toks = size_line.split()
        if len(toks) != 2:
            raise MatrixMarketError(f"line {size_no}: array size line must be 'rows cols'")
        rows = _parse_positive_int(toks[0], size_no, "row count")
        cols = _parse_positive_int(toks[1], size_no, "column count")
        if symmetry == "symmetric" and rows != cols:
            raise MatrixMarketError(f"line {size_no}: symmetric storage requires a square matrix")
        if symmetry == "general":
            coords = [(i, j) for j in range(cols) for i in range(rows)]
        else:
            coords = [(i, j) for j in range(cols) for i in range(j, rows)]
        values: list[tuple[int, str]] = []
        for no, ln in entries:
            for tok in ln.split():
                values.append((no, tok))
        if len(values) != len(coords):
            last = entries[-1][0] if entries else size_no
            raise MatrixMarketError(
                f"line {last}: expected {len(coords)} entries, found {len(values)}"
            )
        mat = np.zeros((rows, cols))
        for (no, tok), (i, j) in zip(values, coords):
            value = _parse_real(tok, no)
            mat[i, j] = value
            if symmetry == "symmetric":
                mat[j, i] = value
        return mat

    toks = size_line.split()
    if len(toks) != 3:
        raise MatrixMarketError(f"line {size_no}: coordinate size line must be 'rows cols nnz'")
    rows = _parse_positive_int(toks[0], size_no, "row count")
    cols = _parse_positive_int(toks[1], size_no, "column count")
    try:
        nnz = int(toks[2])
    except ValueError:
        raise MatrixMarketError(f"line {size_no}: entry count {toks[2]!r} is not an integer") from None
    if nnz < 0:
        raise MatrixMarketError(f"line {size_no}: entry count must be nonnegative, got {nnz}")
    if symmetry == "symmetric" and rows != cols:
        raise MatrixMarketError(f"line {size_no}: symmetric storage requires a square matrix")
    if len(entries) != nnz:
        last = entries[-1][0] if entries else size_no
        raise MatrixMarketError(f"line {last}: expected {nnz} entries, found {len(entries)}")

    mat = np.zeros((rows, cols))
    for no, ln in entries:
        toks = ln.split()
        if len(toks) != 3:
            raise MatrixMarketError(f"line {no}: coordinate entry must be 'row col value'")
        i = _parse_positive_int(toks[0], no, "row index")
        j = _parse_positive_int(toks[1], no, "column index")
        if i > rows:
            raise MatrixMarketError(f"line {no}: row index {i} out of range 1..{rows}")
        if j > cols:
            raise MatrixMarketError(f"line {no}: column index {j} out of range 1..{cols}")
        value = _parse_real(toks[2], no)
        if symmetry == "symmetric":
            if i < j:
                raise MatrixMarketError(
                    f"line {no}: symmetric entries must satisfy row >= col, got ({i}, {j})"
                )
            mat[j - 1, i - 1] = value
        mat[i - 1, j - 1] = value
    return mat


def write_matrix_market(a) -> str:
    """Serialize a dense matrix as 'array real general' Matrix Market text."""
    a = as_matrix(a)
    rows, cols = a.shape
    out = ["%%MatrixMarket matrix array real general", f"{rows} {cols}"]
    for j in range(cols):
        for i in range(rows):
            out.append(f"{a[i, j]:.17g}")
    return "\n".join(out) + "\n"


def load_matrix_market(path) -> np.ndarray:
    """Read a Matrix Market file from disk."""
    with open(path, "r", encoding="latin-1") as handle:
        text = handle.read()
    try:
        return read_matrix_market(text)
    except MatrixMarketError as exc:
        raise MatrixMarketError(f"{path}: {exc}") from None


def save_matrix_market(path, a) -> None:
    """Write a dense matrix to disk in Matrix Market format."""
    with open(path, "w", encoding="ascii") as handle:
        handle.write(write_matrix_market(a))
