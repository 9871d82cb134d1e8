"""Single-field perturbations of table records, for auditing the checkers.

Each mutant changes one degree or lambda exponent by +1 or -1 in one
``diff``, ``ext`` or ``bracket`` line.  The page of a zero-target
differential is left alone: no degree depends on it.
"""
from __future__ import annotations

import re
from typing import Iterator, List, Tuple

_FIELDS = re.compile(r"l\^(\d+)|@\((-?\d+),(-?\d+),(-?\d+)\)|home=\((-?\d+),(-?\d+)\)")
_ZERO_DIFF = re.compile(r"^diff \d+ \S+ = 0(\s|$)")


def _spans(line: str) -> List[Tuple[int, int, str]]:
    """(start, end, kind) of every mutable integer in a record line."""
    out = []
    head = line.split(" ", 1)[0]
    if head == "diff" and not _ZERO_DIFF.match(line):
        m = re.match(r"diff (\d+)", line)
        out.append((m.start(1), m.end(1), "page"))
    for m in _FIELDS.finditer(line):
        kind = "lambda" if m.group(0).startswith("l^") else "degree"
        for g in range(1, (m.lastindex or 0) + 1):
            if m.group(g) is not None:
                out.append((m.start(g), m.end(g), kind))
    return out


def table_mutants(text: str) -> Iterator[Tuple[str, str]]:
    """Yield (description, mutated document) pairs."""
    lines = text.split("\n")
    for i, line in enumerate(lines):
        if line.split(" ", 1)[0] not in ("diff", "ext", "bracket"):
            continue
        body = line.split(" indet=", 1)[0]
        for a, b, kind in _spans(body):
            v = int(line[a:b])
            for delta in (1, -1):
                nv = v + delta
                if kind == "lambda" and nv < 0:
                    continue
                mutated = line[:a] + str(nv) + line[b:]
                doc = "\n".join(lines[:i] + [mutated] + lines[i + 1:])
                yield f"line {i + 1} col {a + 1}: {kind} {v} -> {nv}", doc
