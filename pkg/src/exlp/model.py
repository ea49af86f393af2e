"""LP containers, file parsing, standard-form conversion and oracle rounding."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .ratcore import ZERO, RatMatrix, as_rational

DOUBLE_PRECISION = 1074
_DOUBLE_MAX = Fraction(np.finfo(np.float64).max)


class LPFormatError(ValueError):
    """Raised for malformed LP input; carries the 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class OracleInputError(ValueError):
    """A value cannot be represented in the oracle's number set."""


@dataclass(frozen=True)
class GeneralLP:
    """LP with row relations, two-sided variable bounds and names.

    ``lower``/``upper`` entries are ``None`` for an infinite bound.
    """

    sense: str
    c: tuple
    A: RatMatrix
    relations: tuple
    rhs: tuple
    lower: tuple
    upper: tuple
    var_names: tuple
    row_names: tuple
    name: str = ""
    objective_offset: Fraction = ZERO

    def __post_init__(self):
        m, n = self.A.shape
        if self.sense not in ("min", "max"):
            raise ValueError(f"objective sense must be 'min' or 'max', got {self.sense!r}")
        if len(self.c) != n or len(self.lower) != n or len(self.upper) != n or len(self.var_names) != n:
            raise ValueError("column dimensions are inconsistent")
        if len(self.relations) != m or len(self.rhs) != m or len(self.row_names) != m:
            raise ValueError("row dimensions are inconsistent")
        for r in self.relations:
            if r not in ("<=", ">=", "="):
                raise ValueError(f"unknown row relation {r!r}")
        for j, (lo, up) in enumerate(zip(self.lower, self.upper)):
            if lo is not None and up is not None and lo > up:
                raise ValueError(f"variable {self.var_names[j]} has lower bound above upper bound")
        if len(set(self.var_names)) != n:
            raise ValueError("duplicate variable names")
        if len(set(self.row_names)) != m:
            raise ValueError("duplicate row names")

    @property
    def num_rows(self) -> int:
        return self.A.rows

    @property
    def num_vars(self) -> int:
        return self.A.cols


@dataclass(frozen=True)
class StandardLP:
    """``min c^T x  s.t.  A x = b,  x >= l``.

    ``column_origin[j]`` says what column ``j`` stands for:
    ``("var", k, sign)`` for (a signed part of) original variable ``k``,
    ``("slack", i)`` for the slack of original row ``i`` and
    ``("ub", k)`` for the slack of the upper bound row of variable ``k``.
    ``row_origin`` is the row analogue (``("row", i)`` or ``("ub", k)``).
    """

    A: RatMatrix
    b: tuple
    l: tuple
    c: tuple
    column_origin: tuple = ()
    row_origin: tuple = ()
    objective_sign: int = 1
    source: Optional[GeneralLP] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        m, n = self.A.shape
        if len(self.b) != m or len(self.l) != n or len(self.c) != n:
            raise ValueError("StandardLP dimensions are inconsistent")
        if m > n:
            raise ValueError("standard form needs m <= n")
        if any(v is None for v in self.l):
            raise ValueError("standard form needs finite lower bounds")
        if not self.column_origin:
            object.__setattr__(self, "column_origin", tuple(("var", j, 1) for j in range(n)))
        if not self.row_origin:
            object.__setattr__(self, "row_origin", tuple(("row", i) for i in range(m)))

    @property
    def m(self) -> int:
        return self.A.rows

    @property
    def n(self) -> int:
        return self.A.cols

    @classmethod
    def from_dense(cls, A, b, l, c) -> "StandardLP":
        return cls(
            A=RatMatrix.from_dense(A),
            b=tuple(as_rational(v) for v in b),
            l=tuple(as_rational(v) for v in l),
            c=tuple(as_rational(v) for v in c),
        )

    def with_data(self, b, l, c) -> "StandardLP":
        """Same matrix, new right-hand side, bounds and costs."""
        return StandardLP(self.A, tuple(b), tuple(l), tuple(c))

    def objective(self, x: Sequence[Fraction]) -> Fraction:
        return sum((ci * xi for ci, xi in zip(self.c, x) if ci), ZERO)


@dataclass(frozen=True)
class FloatData:
    """LP data rounded to the oracle's working precision.

    Every array entry equals the exact rounding of the corresponding rational
    entry, so ``Fraction(float(entry))`` recovers the rounded value exactly.
    """

    A: np.ndarray
    b: np.ndarray
    l: np.ndarray
    c: np.ndarray
    p: int = DOUBLE_PRECISION


# -- rounding ----------------------------------------------------------------


def round_to_precision(value: Fraction, p: int = DOUBLE_PRECISION) -> Fraction:
    """Nearest binary64-shaped number with exponent floor ``2^-p``.

    The result has at most 53 significant bits and is a multiple of ``2^-p``
    (ties go to the even multiple).  For ``p = 1074`` this is exactly IEEE
    round-to-nearest-even; for small ``p`` it is rounding to the grid
    ``k / 2^p``.
    """
    if p < 1:
        raise ValueError("precision p must be >= 1")
    value = as_rational(value)
    if value == 0:
        return ZERO
    num, den = abs(value.numerator), value.denominator
    # floor(log2 |value|)
    e = num.bit_length() - den.bit_length()
    if (num << max(0, -e)) < (den << max(0, e)):
        e -= 1
    ulp_exp = max(e - 52, -p)
    if ulp_exp >= 0:
        q, r = divmod(num, den << ulp_exp)
        twice, d = 2 * r, den << ulp_exp
    else:
        q, r = divmod(num << -ulp_exp, den)
        twice, d = 2 * r, den
    if twice > d or (twice == d and q & 1):
        q += 1
    out = Fraction(q) * Fraction(2) ** ulp_exp
    if out > Fraction(2) ** p or out > _DOUBLE_MAX:
        raise OracleInputError(f"value of magnitude ~2^{e} exceeds the oracle range")
    return out if value > 0 else -out


def _round_array(values, p: int) -> np.ndarray:
    return np.array([float(round_to_precision(v, p)) for v in values], dtype=np.float64)


def round_to_oracle_precision(lp: StandardLP, p: int = DOUBLE_PRECISION) -> FloatData:
    m, n = lp.A.shape
    A = np.zeros((m, n), dtype=np.float64)
    for i, j, v in lp.A.items():
        A[i, j] = float(round_to_precision(v, p))
    return FloatData(A=A, b=_round_array(lp.b, p), l=_round_array(lp.l, p), c=_round_array(lp.c, p), p=p)


# -- standard form -----------------------------------------------------------


def to_standard_form(lp: GeneralLP) -> StandardLP:
    """Convert ``lp`` to ``min c^T x, Ax = b, x >= l``.

    Max objectives are negated (``objective_sign = -1``), inequality rows get
    a slack with lower bound 0, finite upper bounds become rows
    ``x + s = u`` and variables without a finite lower bound are split into
    a difference of two nonnegative parts.
    """
    m, n = lp.A.shape
    if n == 0:
        raise ValueError("empty problem")
    sign = 1 if lp.sense == "min" else -1

    entries: dict[tuple[int, int], Fraction] = {}
    costs: list[Fraction] = []
    lower: list[Fraction] = []
    origin: list[tuple] = []
    var_cols: dict[int, list[tuple[int, int]]] = {}

    for j in range(n):
        col = lp.A.col(j)
        cj = sign * lp.c[j]
        parts = [1] if lp.lower[j] is not None else [1, -1]
        for s in parts:
            k = len(costs)
            for i, v in col.items():
                entries[(i, k)] = s * v
            costs.append(s * cj)
            lower.append(lp.lower[j] if lp.lower[j] is not None else ZERO)
            origin.append(("var", j, s))
            var_cols.setdefault(j, []).append((k, s))

    b = list(lp.rhs)
    row_origin: list[tuple] = [("row", i) for i in range(m)]
    for i, rel in enumerate(lp.relations):
        if rel == "=":
            continue
        k = len(costs)
        entries[(i, k)] = Fraction(1 if rel == "<=" else -1)
        costs.append(ZERO)
        lower.append(ZERO)
        origin.append(("slack", i))

    ub_rows = [j for j in range(n) if lp.upper[j] is not None]
    for j in ub_rows:
        r = len(b)
        for k, s in var_cols[j]:
            entries[(r, k)] = Fraction(s)
        k = len(costs)
        entries[(r, k)] = Fraction(1)
        costs.append(ZERO)
        lower.append(ZERO)
        origin.append(("ub", j))
        b.append(lp.upper[j])
        row_origin.append(("ub", j))

    A = RatMatrix(len(b), len(costs), entries)
    return StandardLP(
        A=A,
        b=tuple(b),
        l=tuple(lower),
        c=tuple(costs),
        column_origin=tuple(origin),
        row_origin=tuple(row_origin),
        objective_sign=sign,
        source=lp,
    )


def recover_original(slp: StandardLP, x: Sequence[Fraction], y: Sequence[Fraction]):
    """Map a standard-form primal/dual pair back onto the original variables and rows.

    Returns ``(values, duals, objective)`` with duals and objective expressed
    in the original objective sense.
    """
    src = slp.source
    n_orig = src.num_vars if src is not None else slp.n
    m_orig = src.num_rows if src is not None else slp.m
    values = [ZERO] * n_orig
    for k, org in enumerate(slp.column_origin):
        if org[0] == "var":
            values[org[1]] += org[2] * x[k]
    duals = [ZERO] * m_orig
    for r, org in enumerate(slp.row_origin):
        if org[0] == "row":
            duals[org[1]] = slp.objective_sign * y[r]
    objective = slp.objective_sign * slp.objective(x)
    if src is not None:
        objective += src.objective_offset
    return tuple(values), tuple(duals), objective


# -- exact-lp text format ----------------------------------------------------

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?"
_NAME = r"[A-Za-z_][A-Za-z0-9_.\[\]]*"
_TOKEN_RE = re.compile(
    rf"\s*(?:(?P<num>{_NUM})|(?P<name>{_NAME})|(?P<rel><=|>=|=<|=>|==|=|<|>|≤|≥)|(?P<op>[+\-*:]))"
)
_REL_MAP = {"<=": "<=", "=<": "<=", "<": "<=", "≤": "<=", ">=": ">=", "=>": ">=", ">": ">=", "≥": ">=", "=": "=", "==": "="}
_OBJ_RE = re.compile(r"\s*(minimi[sz]e|maximi[sz]e|min|max)\b\s*:?(.*)$", re.IGNORECASE | re.DOTALL)
_SECTION_RE = re.compile(
    r"\s*(subject\s+to|such\s+that|s\.t\.|st|constraints|bounds?|enddata|end)(?![A-Za-z0-9_.\[])\s*:?\s*",
    re.IGNORECASE,
)


def _number(tok, line: int) -> Fraction:
    kind, text, pos = tok
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise LPFormatError(f"bad number {text!r}", line, pos) from None


def _tokenize(text: str, line: int, col0: int):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN_RE.match(text, pos)
        if not mt or mt.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise LPFormatError(f"unexpected character {text[bad]!r}", line, col0 + bad + 1)
        kind = mt.lastgroup
        start = mt.start(kind)
        out.append((kind, mt.group(kind), col0 + start + 1))
        pos = mt.end()
    return out


def _parse_linear(tokens, line: int):
    """Parse ``[+-] [coef] [*] name ...`` into ``{name: coef}`` plus a constant."""
    terms: dict[str, Fraction] = {}
    order: list[str] = []
    constant = ZERO
    i = 0
    expect_term = True
    while i < len(tokens):
        sign = Fraction(1)
        saw_sign = False
        while i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -sign
            saw_sign = True
            i += 1
        if i >= len(tokens):
            raise LPFormatError("dangling sign", line, tokens[-1][2])
        if not expect_term and not saw_sign:
            raise LPFormatError("expected '+' or '-' between terms", line, tokens[i][2])
        coef = Fraction(1)
        if tokens[i][0] == "num":
            coef = _number(tokens[i], line)
            i += 1
            if i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] == "*":
                i += 1
            if i >= len(tokens) or tokens[i][0] != "name":
                constant += sign * coef
                expect_term = False
                continue
        if tokens[i][0] != "name":
            raise LPFormatError(f"expected a variable name, got {tokens[i][1]!r}", line, tokens[i][2])
        name = tokens[i][1]
        if name not in terms:
            terms[name] = ZERO
            order.append(name)
        terms[name] += sign * coef
        i += 1
        expect_term = False
    return {k: terms[k] for k in order}, constant


def _statements(text: str):
    """Yield ``(line_no, col_offset, statement)`` split on newlines and ';'."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split("\\", 1)[0]
        offset = 0
        for piece in line.split(";"):
            stripped = piece.strip()
            if stripped:
                yield lineno, offset + (len(piece) - len(piece.lstrip())), stripped
            offset += len(piece) + 1


def parse_exact_lp(text: str) -> GeneralLP:
    """Parse the line-oriented exact LP format.

    Example::

        max: 2 x1 + 3/2 x2
        st
          c1: x1 + x2 <= 3
          x1 - 0.5 x2 >= -1
        bounds
          x2 <= 4
          x3 free
        end

    Statements end at a newline or ``;``.  Variables default to ``[0, inf)``.
    """
    sense = None
    objective: dict[str, Fraction] = {}
    obj_const = ZERO
    rows: list[tuple[str, dict, str, Fraction]] = []
    bounds: dict[str, list] = {}
    var_order: list[str] = []
    section = "st"

    def touch(name):
        if name not in bounds:
            bounds[name] = [ZERO, None]
            var_order.append(name)

    for lineno, col, stmt in _statements(text):
        if sense is None:
            mt = _OBJ_RE.match(stmt)
            if not mt:
                raise LPFormatError("expected 'min' or 'max' objective first", lineno, col + 1)
            sense = "min" if mt.group(1).lower().startswith("min") else "max"
            toks = _tokenize(mt.group(2), lineno, col + mt.start(2))
            objective, obj_const = _parse_linear(toks, lineno) if toks else ({}, ZERO)
            for name in objective:
                touch(name)
            section = "st"
            continue
        mt = _SECTION_RE.match(stmt)
        if mt:
            key = mt.group(1).lower()
            if key in ("end", "enddata"):
                break
            section = "bounds" if key.startswith("bound") else "st"
            col += mt.end()
            stmt = stmt[mt.end():]
            if not stmt.strip():
                continue
        if section == "st":
            rows.append(_parse_row(stmt, lineno, col, len(rows)))
            for name in rows[-1][1]:
                touch(name)
        else:
            _parse_bound(stmt, lineno, col, bounds, touch)

    if sense is None:
        raise LPFormatError("missing objective")
    names = [r[0] for r in rows]
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise LPFormatError(f"duplicate row name {dup!r}")
    index = {name: j for j, name in enumerate(var_order)}
    entries = {}
    for i, (_, coefs, _, _) in enumerate(rows):
        for name, v in coefs.items():
            if v:
                entries[(i, index[name])] = v
    return GeneralLP(
        sense=sense,
        c=tuple(objective.get(name, ZERO) for name in var_order),
        A=RatMatrix(len(rows), len(var_order), entries),
        relations=tuple(r[2] for r in rows),
        rhs=tuple(r[3] for r in rows),
        lower=tuple(bounds[name][0] for name in var_order),
        upper=tuple(bounds[name][1] for name in var_order),
        var_names=tuple(var_order),
        row_names=tuple(names),
        objective_offset=obj_const,
    )


def _parse_row(stmt: str, lineno: int, col: int, index: int):
    name = f"r{index + 1}"
    mt = re.match(rf"\s*({_NAME})\s*:(?!=)", stmt)
    if mt:
        name = mt.group(1)
        col += mt.end()
        stmt = stmt[mt.end():]
    toks = _tokenize(stmt, lineno, col)
    rel_pos = [k for k, t in enumerate(toks) if t[0] == "rel"]
    if len(rel_pos) != 1:
        raise LPFormatError("a constraint needs exactly one relation", lineno, col + 1)
    k = rel_pos[0]
    lhs, lconst = _parse_linear(toks[:k], lineno) if k else ({}, ZERO)
    rhs_terms, rconst = _parse_linear(toks[k + 1:], lineno) if k + 1 < len(toks) else ({}, ZERO)
    if k + 1 >= len(toks):
        raise LPFormatError("missing right-hand side", lineno, toks[k][2])
    coefs = dict(lhs)
    for nm, v in rhs_terms.items():
        coefs[nm] = coefs.get(nm, ZERO) - v
    if not coefs:
        raise LPFormatError("constraint has no variables", lineno, col + 1)
    return name, coefs, _REL_MAP[toks[k][1]], rconst - lconst


def _parse_bound(stmt: str, lineno: int, col: int, bounds: dict, touch):
    toks = _tokenize(stmt, lineno, col)
    if len(toks) == 2 and toks[0][0] == "name" and toks[1][0] == "name" and toks[1][1].lower() == "free":
        touch(toks[0][1])
        bounds[toks[0][1]] = [None, None]
        return

    def value(tokens):
        sign = Fraction(1)
        i = 0
        while i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] in "+-":
            sign = -sign if tokens[i][1] == "-" else sign
            i += 1
        rest = tokens[i:]
        if len(rest) == 1 and rest[0][0] == "num":
            return sign * _number(rest[0], lineno)
        if len(rest) == 1 and rest[0][0] == "name" and rest[0][1].lower() in ("inf", "infinity"):
            return "inf" if sign > 0 else "-inf"
        raise LPFormatError("malformed bound value", lineno, (rest or tokens or [(0, 0, col + 1)])[0][2])

    rels = [k for k, t in enumerate(toks) if t[0] == "rel"]
    parts = []
    start = 0
    for k in rels:
        parts.append(toks[start:k])
        start = k + 1
    parts.append(toks[start:])
    ops = [_REL_MAP[toks[k][1]] for k in rels]
    var_idx = [i for i, p in enumerate(parts) if len(p) == 1 and p[0][0] == "name" and p[0][1].lower() not in ("inf", "infinity")]
    if len(var_idx) != 1 or not ops:
        raise LPFormatError("malformed bound", lineno, col + 1)
    vi = var_idx[0]
    name = parts[vi][0][1]
    touch(name)
    lo, up = bounds[name]

    def apply(rel, val, var_on_left):
        nonlocal lo, up
        if val in ("inf", "-inf"):
            val = None
            if rel == "=":
                raise LPFormatError("cannot fix a variable at infinity", lineno, col + 1)
            if (rel == "<=") == var_on_left:
                up = None
            else:
                lo = None
            return
        if rel == "=":
            lo = up = val
        elif (rel == "<=") == var_on_left:
            up = val
        else:
            lo = val

    for k, rel in enumerate(ops):
        if k == vi - 1:
            apply(rel, value(parts[k]), var_on_left=False)
        elif k == vi:
            apply(rel, value(parts[k + 1]), var_on_left=True)
        else:
            raise LPFormatError("malformed bound chain", lineno, col + 1)
    bounds[name] = [lo, up]


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _fmt_linear(names, coefs, keep_zeros: bool = False) -> str:
    parts = []
    for name, v in zip(names, coefs):
        if not v and not keep_zeros:
            continue
        sign = "-" if v < 0 else "+"
        parts.append(f"{sign} {_fmt(abs(v))} {name}")
    if not parts:
        return "0"
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[1:]


def write_exact_lp(lp: GeneralLP) -> str:
    """Serialize ``lp`` so that ``parse_exact_lp`` reproduces it exactly."""
    names = lp.var_names
    # zero terms keep every variable in the objective so column order survives
    obj = _fmt_linear(names, lp.c, keep_zeros=True)
    if lp.objective_offset:
        obj += f" {'+' if lp.objective_offset > 0 else '-'} {_fmt(abs(lp.objective_offset))}"
    lines = [f"{lp.sense}: {obj}", "st"]
    for i in range(lp.num_rows):
        row = lp.A.row(i)
        coefs = [row.get(j, ZERO) for j in range(lp.num_vars)]
        lhs = _fmt_linear(names, coefs) if row else f"0 {names[0]}"
        lines.append(f"  {lp.row_names[i]}: {lhs} {lp.relations[i]} {_fmt(lp.rhs[i])}")
    lines.append("bounds")
    for j, name in enumerate(names):
        lo, up = lp.lower[j], lp.upper[j]
        if lo is None and up is None:
            lines.append(f"  {name} free")
            continue
        left = "-inf" if lo is None else _fmt(lo)
        right = f" <= {_fmt(up)}" if up is not None else ""
        lines.append(f"  {left} <= {name}{right}")
    lines.append("end")
    return "\n".join(lines) + "\n"


# -- MPS subset --------------------------------------------------------------

_MPS_SECTIONS = {"NAME", "ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "ENDATA", "OBJSENSE", "OBJSENSE MAX", "OBJSENSE MIN"}


def parse_mps(text: str) -> GeneralLP:
    """Parse free-format MPS (no RANGES, no integrality markers)."""
    section = None
    name = ""
    sense = "min"
    obj_row = None
    row_names: list[str] = []
    row_rel: dict[str, str] = {}
    col_names: list[str] = []
    col_index: dict[str, int] = {}
    entries: dict[tuple[int, int], Fraction] = {}
    costs: dict[int, Fraction] = {}
    rhs: dict[str, Fraction] = {}
    offset = ZERO
    lower: dict[int, Optional[Fraction]] = {}
    upper: dict[int, Optional[Fraction]] = {}
    ended = False

    def num(tok, lineno, col):
        try:
            return Fraction(tok)
        except (ValueError, ZeroDivisionError):
            raise LPFormatError(f"bad number {tok!r}", lineno, col) from None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("*"):
            continue
        fields = raw.split()
        cols = []
        pos = 0
        for f in fields:
            pos = raw.index(f, pos)
            cols.append(pos + 1)
            pos += len(f)
        if not raw[0].isspace():
            key = fields[0].upper()
            if key == "NAME":
                section = "NAME"
                name = " ".join(fields[1:])
                continue
            if key == "OBJSENSE":
                section = "OBJSENSE"
                if len(fields) > 1:
                    sense = _mps_sense(fields[1], lineno, cols[1])
                continue
            if key in ("ROWS", "COLUMNS", "RHS", "BOUNDS"):
                section = key
                continue
            if key == "RANGES":
                raise LPFormatError("RANGES section is not supported", lineno, 1)
            if key == "ENDATA":
                ended = True
                break
            if key in ("MAX", "MIN", "MAXIMIZE", "MINIMIZE") and section == "OBJSENSE":
                sense = _mps_sense(fields[0], lineno, 1)
                continue
            raise LPFormatError(f"unknown section {fields[0]!r}", lineno, 1)
        if section == "OBJSENSE":
            sense = _mps_sense(fields[0], lineno, cols[0])
        elif section == "ROWS":
            if len(fields) != 2:
                raise LPFormatError("ROWS entries need a type and a name", lineno, cols[0])
            kind, rname = fields[0].upper(), fields[1]
            if kind == "N":
                if obj_row is None:
                    obj_row = rname
                continue
            if kind not in ("L", "G", "E"):
                raise LPFormatError(f"unknown row type {fields[0]!r}", lineno, cols[0])
            if rname in row_rel:
                raise LPFormatError(f"duplicate row {rname!r}", lineno, cols[1])
            row_rel[rname] = {"L": "<=", "G": ">=", "E": "="}[kind]
            row_names.append(rname)
        elif section == "COLUMNS":
            if "'MARKER'" in (f.upper() for f in fields):
                raise LPFormatError("integrality markers are not supported", lineno, cols[0])
            if len(fields) not in (3, 5):
                raise LPFormatError("COLUMNS entries need 3 or 5 fields", lineno, cols[0])
            cname = fields[0]
            if cname not in col_index:
                col_index[cname] = len(col_names)
                col_names.append(cname)
            j = col_index[cname]
            for k in range(1, len(fields), 2):
                rname, val = fields[k], num(fields[k + 1], lineno, cols[k + 1])
                if rname == obj_row:
                    costs[j] = costs.get(j, ZERO) + val
                elif rname in row_rel:
                    i = row_names.index(rname)
                    if (i, j) in entries:
                        raise LPFormatError(f"duplicate entry for ({rname}, {cname})", lineno, cols[k])
                    entries[(i, j)] = val
                elif rname in ("N",):
                    continue
                else:
                    raise LPFormatError(f"unknown row {rname!r}", lineno, cols[k])
        elif section == "RHS":
            start = 1 if len(fields) % 2 == 1 else 0
            for k in range(start, len(fields), 2):
                rname, val = fields[k], num(fields[k + 1], lineno, cols[k + 1])
                if rname == obj_row:
                    offset = -val
                elif rname in row_rel:
                    rhs[rname] = val
                else:
                    raise LPFormatError(f"unknown row {rname!r}", lineno, cols[k])
        elif section == "BOUNDS":
            kind = fields[0].upper()
            if kind in ("FR", "MI", "PL", "BV"):
                if len(fields) < 3:
                    raise LPFormatError("BOUNDS entry too short", lineno, cols[0])
                cname = fields[2]
            else:
                if len(fields) < 4:
                    raise LPFormatError("BOUNDS entry too short", lineno, cols[0])
                cname = fields[2]
            if cname not in col_index:
                raise LPFormatError(f"unknown column {cname!r}", lineno, cols[2])
            j = col_index[cname]
            if kind == "UP":
                v = num(fields[3], lineno, cols[3])
                upper[j] = v
                if v < 0 and lower.get(j, ZERO) == 0 and j not in lower:
                    lower[j] = None
            elif kind == "LO":
                lower[j] = num(fields[3], lineno, cols[3])
            elif kind == "FX":
                lower[j] = upper[j] = num(fields[3], lineno, cols[3])
            elif kind == "FR":
                lower[j] = None
                upper[j] = None
            elif kind == "MI":
                lower[j] = None
            elif kind == "PL":
                upper[j] = None
            else:
                raise LPFormatError(f"unsupported bound type {fields[0]!r}", lineno, cols[0])
        else:
            raise LPFormatError("data outside of a section", lineno, cols[0])
    if not ended:
        raise LPFormatError("missing ENDATA")
    n = len(col_names)
    return GeneralLP(
        sense=sense,
        c=tuple(costs.get(j, ZERO) for j in range(n)),
        A=RatMatrix(len(row_names), n, entries),
        relations=tuple(row_rel[r] for r in row_names),
        rhs=tuple(rhs.get(r, ZERO) for r in row_names),
        lower=tuple(lower.get(j, ZERO) for j in range(n)),
        upper=tuple(upper.get(j) for j in range(n)),
        var_names=tuple(col_names),
        row_names=tuple(row_names),
        name=name,
        objective_offset=offset,
    )


def _mps_sense(tok: str, lineno: int, col: int) -> str:
    t = tok.upper()
    if t in ("MAX", "MAXIMIZE"):
        return "max"
    if t in ("MIN", "MINIMIZE"):
        return "min"
    raise LPFormatError(f"unknown objective sense {tok!r}", lineno, col)


def parse_lp_file(data, fmt: str = "exact-lp") -> GeneralLP:
    """Parse ``data`` (bytes or str) in ``fmt`` (``"exact-lp"`` or ``"mps"``)."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise LPFormatError(f"input is not UTF-8: {exc}") from None
    if fmt in ("exact-lp", "lp"):
        return parse_exact_lp(data)
    if fmt in ("mps", "mps-subset"):
        return parse_mps(data)
    raise ValueError(f"unknown format {fmt!r}")


def read_lp(path) -> GeneralLP:
    """Read an LP file, choosing the format by extension (``.mps`` or anything else)."""
    path = str(path)
    with open(path, "rb") as fh:
        raw = fh.read()
    fmt = "mps" if path.lower().endswith((".mps", ".mps.txt")) else "exact-lp"
    return parse_lp_file(raw, fmt)

