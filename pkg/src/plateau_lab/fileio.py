"""Plain-text truth tables and set files.

Truth table::

    p n            (or "p n m" for a vectorial function)
    c_0 ... c_n    domain modulus
    c_0 ... c_m    codomain modulus (vectorial only)
    value at index 0
    ...

Set file: a header "v" (bare Z_p^N of order v) or "p n [m]" followed by the
modulus lines, then one member index per line.  Blank lines and text after
``#`` are ignored.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .field import FieldSpec, field
from .functions import PAryFunction, VectorialFunction
from .groups import AbelianGroup


class ParseError(ValueError):
    def __init__(self, path, line: int | None, message: str):
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")
        self.path = path
        self.line = line


def _lines(text: str):
    """(line number, tokens) for every non-empty line."""
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body.split()


def _ints(path, no, tokens) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(path, no, f"expected integers, got {' '.join(tokens)!r}") from None


def _spec(path, no, p, n, tokens) -> FieldSpec:
    coeffs = _ints(path, no, tokens)
    if len(coeffs) != n + 1:
        raise ParseError(path, no, f"modulus needs {n + 1} coefficients, got {len(coeffs)}")
    if any(not 0 <= c < p for c in coeffs):
        raise ParseError(path, no, f"modulus coefficients must lie in [0, {p})")
    try:
        return FieldSpec(p, n, tuple(coeffs))
    except ValueError as exc:
        raise ParseError(path, no, str(exc)) from None


def _header(path, rows, allow_order: bool):
    if not rows:
        raise ParseError(path, None, "file is empty")
    no, tokens = rows[0]
    head = _ints(path, no, tokens)
    if allow_order and len(head) == 1:
        return head, [], 1
    if len(head) not in (2, 3):
        raise ParseError(path, no, "header must be 'p n' or 'p n m'")
    p = head[0]
    specs = []
    for k, deg in enumerate(head[1:]):
        if len(rows) <= 1 + k:
            raise ParseError(path, None, "missing modulus line")
        lno, ltok = rows[1 + k]
        specs.append(_spec(path, lno, p, deg, ltok))
    return head, specs, 1 + len(specs)


def _read(source) -> tuple[str, str]:
    path = Path(source)
    try:
        return str(path), path.read_text()
    except OSError as exc:
        raise ParseError(path, None, f"cannot read: {exc.strerror}") from None


Function = Union[PAryFunction, VectorialFunction]


def parse_truth_table(text: str, path: str = "<string>") -> Function:
    rows = list(_lines(text))
    head, specs, start = _header(path, rows, allow_order=False)
    domain = field(specs[0])
    codomain = field(specs[1]) if len(specs) == 2 else None
    bound = codomain.order if codomain else domain.p
    body = rows[start:]
    values = []
    for no, tokens in body:
        if len(tokens) != 1:
            raise ParseError(path, no, "one value per line")
        (val,) = _ints(path, no, tokens)
        if not 0 <= val < bound:
            raise ParseError(path, no, f"value {val} outside [0, {bound})")
        values.append(val)
    if len(values) != domain.order:
        line = body[domain.order][0] if len(values) > domain.order else None
        raise ParseError(path, line, f"expected {domain.order} values, got {len(values)}")
    if codomain is None:
        return PAryFunction(domain, values)
    return VectorialFunction(domain, codomain, values)


def read_truth_table(source) -> Function:
    path, text = _read(source)
    return parse_truth_table(text, path)


def format_truth_table(F: Function) -> str:
    dom = F.domain.spec
    if isinstance(F, PAryFunction):
        lines = [f"{dom.p} {dom.n}", " ".join(map(str, dom.modulus))]
    else:
        cod = F.codomain.spec
        lines = [
            f"{dom.p} {dom.n} {cod.n}",
            " ".join(map(str, dom.modulus)),
            " ".join(map(str, cod.modulus)),
        ]
    lines.extend(str(int(v)) for v in F.values)
    return "\n".join(lines) + "\n"


def write_truth_table(F: Function, dest) -> None:
    Path(dest).write_text(format_truth_table(F))


@dataclass(frozen=True)
class SetFile:
    group: AbelianGroup
    members: np.ndarray


def parse_set_file(text: str, path: str = "<string>") -> SetFile:
    rows = list(_lines(text))
    head, specs, start = _header(path, rows, allow_order=True)
    if not specs:
        try:
            group = AbelianGroup.from_order(head[0])
        except ValueError as exc:
            raise ParseError(path, rows[0][0], str(exc)) from None
    elif len(specs) == 1:
        group = AbelianGroup.of_field(field(specs[0]))
    else:
        group = AbelianGroup.product(field(specs[0]), field(specs[1]))
    members = []
    seen = set()
    for no, tokens in rows[start:]:
        if len(tokens) != 1:
            raise ParseError(path, no, "one member per line")
        (m,) = _ints(path, no, tokens)
        if not 0 <= m < group.order:
            raise ParseError(path, no, f"member {m} outside [0, {group.order})")
        if m in seen:
            raise ParseError(path, no, f"duplicate member {m}")
        seen.add(m)
        members.append(m)
    return SetFile(group, np.array(sorted(members), dtype=np.int64))


def read_set_file(source) -> SetFile:
    path, text = _read(source)
    return parse_set_file(text, path)


def format_set_file(group: AbelianGroup, members) -> str:
    if not group.factors:
        lines = [str(group.order)]
    else:
        lines = [" ".join(str(x) for x in (group.p, *(F.n for F in group.factors)))]
        lines.extend(" ".join(map(str, F.spec.modulus)) for F in group.factors)
    lines.extend(str(int(m)) for m in sorted(int(m) for m in members))
    return "\n".join(lines) + "\n"


def file_digest(source) -> str:
    return hashlib.sha256(Path(source).read_bytes()).hexdigest()
