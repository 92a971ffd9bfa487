"""Plain-text matrix format.

::

    field 4
    dim 3
    100
    021
    003

Line 1 names the field order, line 2 the dimension, then one line of ``dim``
digits per row.  Extension-field digits index powers of the fixed generator
(0 is zero, k >= 1 is g^(k-1)); prime-field digits are residues; digits above
9 are written a-f.  A file may hold several matrices of the same size one
after another (optionally separated by blank lines); ``#`` starts a comment.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .fields import FieldError, SUPPORTED_ORDERS, field as get_field
from .linalg import Matrix, from_dense


class ParseError(ValueError):
    def __init__(self, line: int, msg: str, source: str = "<text>"):
        super().__init__(f"{source}:{line}: {msg}")
        self.line = line


def format_matrix(m: Matrix, header: bool = True) -> str:
    fld = m.field
    lines = []
    if header:
        lines += [f"field {fld.q}", f"dim {m.nrows}"]
    for row in m.to_dense():
        lines.append("".join(fld.to_digit(int(a)) for a in row))
    return "\n".join(lines) + "\n"


def format_matrices(ms: list[Matrix]) -> str:
    if not ms:
        raise ValueError("nothing to write")
    head = format_matrix(ms[0])
    rest = "".join("\n" + format_matrix(m, header=False) for m in ms[1:])
    return head + rest


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        yield no, line


def parse_matrices(text: str, source: str = "<text>") -> list[Matrix]:
    lines = list(_content_lines(text))
    # header lines are the first two non-blank lines
    it = iter([(no, ln) for no, ln in lines if ln])
    try:
        no, ln = next(it)
    except StopIteration:
        raise ParseError(1, "empty matrix file", source) from None
    parts = ln.split()
    if len(parts) != 2 or parts[0] != "field" or not parts[1].isdigit():
        raise ParseError(no, f"expected 'field q', got {ln!r}", source)
    q = int(parts[1])
    if q not in SUPPORTED_ORDERS:
        raise ParseError(no, f"unsupported field order {q}", source)
    fld = get_field(q)
    try:
        no, ln = next(it)
    except StopIteration:
        raise ParseError(no + 1, "missing 'dim d' line", source) from None
    parts = ln.split()
    if len(parts) != 2 or parts[0] != "dim" or not parts[1].isdigit() or int(parts[1]) < 1:
        raise ParseError(no, f"expected 'dim d', got {ln!r}", source)
    d = int(parts[1])
    rows: list[list[int]] = []
    out: list[Matrix] = []
    for no, ln in it:
        digits = ln.replace(" ", "")
        if len(digits) != d:
            raise ParseError(no, f"expected {d} digits, found {len(digits)}", source)
        try:
            rows.append([fld.from_digit(ch) for ch in digits])
        except FieldError as e:
            raise ParseError(no, str(e), source) from None
        if len(rows) == d:
            out.append(from_dense(fld, np.array(rows, dtype=np.uint8)))
            rows = []
    if rows:
        raise ParseError(len(lines), f"incomplete matrix: {len(rows)} of {d} rows", source)
    if not out:
        raise ParseError(len(lines), "no matrix rows", source)
    return out


def parse_matrix(text: str, source: str = "<text>") -> Matrix:
    ms = parse_matrices(text, source)
    if len(ms) != 1:
        raise ParseError(1, f"expected one matrix, found {len(ms)}", source)
    return ms[0]


def read_matrices(path) -> list[Matrix]:
    p = Path(path)
    return parse_matrices(p.read_text(), str(p))


def write_matrices(path, ms: list[Matrix]) -> None:
    Path(path).write_text(format_matrices(ms))
