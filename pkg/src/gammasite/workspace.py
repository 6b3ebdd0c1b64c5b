"""Line-oriented workspace files declaring semirings, monoids and algebras.

    # comment
    truncation 3
    semiring Z6 = zmod(6)
    semiring K
      elements 0 1 a
      zero 0
      one 1
      add
        0 1 a
        1 a 0
        a 0 1
      mul
        ...
    end
    monoid M3
      elements 0 1 x
      zero 0
      one 1
      mul
        0 0 0
        0 1 x
        0 x 0
    end
    algebra A = H(Z6)
    algebra S = SM(M3)
    algebra Q = quotient(A, {1, 5})
    algebra P = product(A, S)
    algebra N = norm_ball()

Tables are row-major, one row per element in declaration order, entries
written with element names.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .families import H, SM, HAlgebra, QuotientAlgebra, SMAlgebra, norm_ball_HQ1, product, quotient
from .gamma_core import DEFAULT_TRUNCATION
from .structures import (
    FiniteMonoid, FiniteSemiring, StructureError, boolean, chain, finite_field, gf4, group_with_zero,
    idempotent_monoid, nil_monoid, product_semiring, two_element_monoid, zmod,
)


class WorkspaceError(ValueError):
    """Malformed input or a dangling reference; carries line and column."""

    def __init__(self, message, line=None, column=None):
        where = f"line {line}" + (f", column {column}" if column else "") if line else ""
        super().__init__(f"{where}: {message}" if where else message)
        self.line = line
        self.column = column


class AxiomError(ValueError):
    """A declared table violates a structure axiom."""

    def __init__(self, name, err: StructureError, line):
        super().__init__(f"line {line}: {name} violates {err.axiom} at {err.cell}")
        self.axiom = err.axiom
        self.cell = err.cell
        self.line = line


@dataclass
class Workspace:
    semirings: dict = field(default_factory=dict)
    monoids: dict = field(default_factory=dict)
    algebras: dict = field(default_factory=dict)
    truncation: int = DEFAULT_TRUNCATION
    options: dict = field(default_factory=dict)

    def algebra(self, name):
        if name not in self.algebras:
            raise WorkspaceError(f"unknown algebra {name!r}")
        return self.algebras[name]

    def semiring(self, name):
        if name in self.semirings:
            return self.semirings[name]
        R = _builtin_semiring(name)
        if R is None:
            raise WorkspaceError(f"unknown semiring {name!r}")
        return R


_CALL = re.compile(r"^\s*([A-Za-z_][\w]*)\s*\((.*)\)\s*$")
_NAME = re.compile(r"^[A-Za-z_][\w.]*$")


def _split_args(text):
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def _builtin_semiring(name):
    m = re.fullmatch(r"(?:Z|Z/)(\d+)", name)
    if m:
        return zmod(int(m.group(1)))
    m = re.fullmatch(r"F(\d+)", name)
    if m:
        return finite_field(int(m.group(1)))
    return {"B": boolean(), "Chain3": chain(3)}.get(name)


def _semiring_call(ws, expr, line):
    m = _CALL.match(expr)
    if not m:
        raise WorkspaceError(f"expected a constructor call, got {expr!r}", line)
    fn, args = m.group(1), _split_args(m.group(2))
    try:
        if fn == "zmod":
            return zmod(int(args[0]))
        if fn == "field":
            return gf4() if int(args[0]) == 4 else finite_field(int(args[0]))
        if fn == "boolean":
            return boolean()
        if fn == "chain":
            return chain(int(args[0]) if args else 3)
        if fn == "product":
            return product_semiring(*(_lookup(ws.semirings, a, "semiring", line, ws) for a in args))
    except (ValueError, IndexError) as e:
        if isinstance(e, WorkspaceError):
            raise
        raise WorkspaceError(f"bad arguments to {fn}: {e}", line) from None
    raise WorkspaceError(f"unknown semiring constructor {fn!r}", line)


def _monoid_call(ws, expr, line):
    m = _CALL.match(expr)
    if not m:
        raise WorkspaceError(f"expected a constructor call, got {expr!r}", line)
    fn, args = m.group(1), _split_args(m.group(2))
    if fn == "nil":
        return nil_monoid()
    if fn == "idempotent":
        return idempotent_monoid()
    if fn == "sphere":
        return two_element_monoid()
    if fn == "group_with_zero":
        return group_with_zero(int(args[0]))
    if fn == "multiplicative":
        return _lookup(ws.semirings, args[0], "semiring", line, ws).multiplicative_monoid()
    raise WorkspaceError(f"unknown monoid constructor {fn!r}", line)


def _lookup(table, name, kind, line, ws=None):
    if name in table:
        return table[name]
    if kind == "semiring" and ws is not None:
        R = _builtin_semiring(name)
        if R is not None:
            return R
    raise WorkspaceError(f"undeclared {kind} {name!r}", line)


def element_of(A, token: str, line=None):
    """Level-1 element of an algebra named by the user."""
    token = token.strip()
    if isinstance(A, QuotientAlgebra):
        return A.canon(element_of(A.base_algebra, token, line), 1)
    if isinstance(A, HAlgebra):
        names = A.semiring.names
        if token in names:
            return (names.index(token),)
    elif isinstance(A, SMAlgebra):
        names = A.monoid.names
        if token in names:
            return A.embed(names.index(token))
    elif hasattr(A, "factors"):
        parts = token.split("|")
        if len(parts) == len(A.factors):
            return tuple(element_of(F, p, line) for F, p in zip(A.factors, parts))
    elif hasattr(A, "declared_objects"):
        from fractions import Fraction
        try:
            return (Fraction(token),)
        except ValueError:
            pass
    raise WorkspaceError(f"{token!r} is not an element of {A!r}", line)


def _algebra_call(ws, expr, line):
    m = _CALL.match(expr)
    if not m:
        raise WorkspaceError(f"expected a constructor call, got {expr!r}", line)
    fn, args = m.group(1), _split_args(m.group(2))
    N = ws.truncation
    if fn == "H":
        return H(_lookup(ws.semirings, args[0], "semiring", line, ws), N)
    if fn == "SM":
        return SM(_lookup(ws.monoids, args[0], "monoid", line), N)
    if fn == "quotient":
        A = _lookup(ws.algebras, args[0], "algebra", line)
        body = args[1].strip() if len(args) > 1 else ""
        if not (body.startswith("{") and body.endswith("}")):
            raise WorkspaceError("quotient needs a group written {g1, g2, ...}", line)
        G = [element_of(A, t, line) for t in body[1:-1].split(",") if t.strip()]
        return quotient(A, G)
    if fn == "product":
        return product([_lookup(ws.algebras, a, "algebra", line) for a in args])
    if fn == "norm_ball":
        return norm_ball_HQ1(N)
    raise WorkspaceError(f"unknown algebra constructor {fn!r}", line)


def _parse_table(rows, names, label, start):
    index = {n: i for i, n in enumerate(names)}
    if len(rows) != len(names):
        raise WorkspaceError(f"{label} table has {len(rows)} rows, expected {len(names)}", start)
    out = []
    for r, (lineno, toks) in enumerate(rows):
        if len(toks) != len(names):
            raise WorkspaceError(f"{label} row has {len(toks)} entries, expected {len(names)}", lineno)
        row = []
        for c, t in enumerate(toks):
            if t not in index:
                raise WorkspaceError(f"unknown element {t!r} in {label} table", lineno, c + 1)
            row.append(index[t])
        out.append(row)
    return out


def _parse_block(ws, kind, name, lines, start):
    fields, current, rows = {}, None, {}
    for lineno, toks in lines:
        head = toks[0]
        if head in ("elements", "zero", "one"):
            fields[head] = toks[1:]
            current = None
        elif head in ("add", "mul") and len(toks) == 1:
            current = head
            rows[head] = []
        elif current is not None:
            rows[current].append((lineno, toks))
        else:
            raise WorkspaceError(f"unexpected {head!r} in {kind} block", lineno, 1)
    needed = ["elements", "zero", "one", "mul"] + (["add"] if kind == "semiring" else [])
    for key in needed:
        if key not in fields and key not in rows:
            raise WorkspaceError(f"{kind} {name} is missing {key}", start)
    names = fields["elements"]
    if len(set(names)) != len(names):
        raise WorkspaceError(f"duplicate element names in {name}", start)
    idx = {n: i for i, n in enumerate(names)}
    for key in ("zero", "one"):
        if len(fields[key]) != 1 or fields[key][0] not in idx:
            raise WorkspaceError(f"{key} of {name} must be one declared element", start)
    mul = _parse_table(rows["mul"], names, "mul", start)
    try:
        if kind == "semiring":
            add = _parse_table(rows["add"], names, "add", start)
            return FiniteSemiring(names, idx[fields["zero"][0]], idx[fields["one"][0]], add, mul, label=name)
        return FiniteMonoid(names, idx[fields["zero"][0]], idx[fields["one"][0]], mul, label=name)
    except StructureError as e:
        raise AxiomError(name, e, start) from None


def parse_workspace(text: str) -> Workspace:
    ws = Workspace()
    raw = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            raw.append((n, line))
    i = 0
    while i < len(raw):
        lineno, line = raw[i]
        toks = line.split()
        head = toks[0]
        if head == "truncation":
            if len(toks) != 2 or not toks[1].isdigit() or int(toks[1]) < 1:
                raise WorkspaceError("truncation takes one positive integer", lineno)
            ws.truncation = int(toks[1])
        elif head == "option":
            if len(toks) != 3:
                raise WorkspaceError("option takes a name and a value", lineno)
            ws.options[toks[1]] = int(toks[2]) if toks[2].isdigit() else toks[2]
        elif head in ("semiring", "monoid", "algebra"):
            if len(toks) < 2 or not _NAME.match(toks[1]):
                raise WorkspaceError(f"{head} needs a name", lineno, len(head) + 2)
            name = toks[1]
            table = {"semiring": ws.semirings, "monoid": ws.monoids, "algebra": ws.algebras}[head]
            if name in table:
                raise WorkspaceError(f"{head} {name!r} declared twice", lineno)
            rest = line[len(head):].strip()[len(name):].strip()
            if rest.startswith("="):
                expr = rest[1:].strip()
                if head == "semiring":
                    table[name] = _semiring_call(ws, expr, lineno)
                elif head == "monoid":
                    table[name] = _monoid_call(ws, expr, lineno)
                else:
                    try:
                        table[name] = _algebra_call(ws, expr, lineno)
                    except WorkspaceError:
                        raise
                    except ValueError as e:
                        raise WorkspaceError(str(e), lineno) from None
            elif head == "algebra":
                raise WorkspaceError("algebra declarations need '= constructor(...)'", lineno)
            elif rest:
                raise WorkspaceError(f"unexpected {rest!r}", lineno, line.index(rest) + 1)
            else:
                block, j = [], i + 1
                while j < len(raw) and raw[j][1] != "end":
                    block.append((raw[j][0], raw[j][1].split()))
                    j += 1
                if j == len(raw):
                    raise WorkspaceError(f"{head} {name} has no 'end'", lineno)
                table[name] = _parse_block(ws, head, name, block, lineno)
                i = j
        else:
            raise WorkspaceError(f"unknown declaration {head!r}", lineno, 1)
        i += 1
    return ws
