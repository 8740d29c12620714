"""MPS ingestion (a strict subset) and conversion to standard form.

Supported sections: NAME, ROWS (N/E/L/G), COLUMNS, RHS, BOUNDS with
LO/UP/FR, ENDATA.  Both fixed- and free-format files parse identically:
fields are whitespace-split, section headers are the non-indented lines.
Anything outside the subset (RANGES, SOS, integrality markers, other
bound types) is rejected with a named error rather than misparsed.

Conversion to  min c'x, Ax = b, x >= 0:
  * L rows gain a +1 slack column, G rows a -1 surplus column;
  * FR variables split into a difference of two nonnegative columns;
  * finite lower bounds are shifted away (x = x' + lo), adjusting b and
    the objective constant;
  * finite upper bounds become extra equality rows with their own slack.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from fwlp.model import LpError, StandardFormLP


class MpsError(LpError):
    pass


class UnsupportedSection(MpsError):
    pass


class MalformedField(MpsError):
    pass


class DuplicateEntry(MpsError):
    pass


class UnboundedBelowVariableWithoutFR(MpsError):
    """A variable whose bounds leave it unbounded below (or inverted)
    without being declared FR."""


class InconsistentBounds(MpsError):
    pass


_SECTIONS = {"NAME", "ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "SOS",
             "ENDATA", "OBJSENSE", "OBJSENSE:", "QSECTION", "QMATRIX"}
_SUPPORTED = {"NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"}


@dataclass
class Bounds:
    lo: float | None = None
    up: float | None = None
    free: bool = False


@dataclass
class GeneralLP:
    """Parsed general-form LP: named rows/columns before standardization."""

    name: str = ""
    objective_name: str = ""
    row_names: list = field(default_factory=list)
    row_types: list = field(default_factory=list)
    col_names: list = field(default_factory=list)
    entries: dict = field(default_factory=dict)      # (row, col) -> coef
    objective: dict = field(default_factory=dict)    # col -> coef
    rhs: dict = field(default_factory=dict)          # row -> value
    objective_offset: float = 0.0
    bounds: dict = field(default_factory=dict)       # col -> Bounds


def _num(tok: str) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise MalformedField(f"cannot parse numeric field {tok!r}") from None
    if not math.isfinite(v):
        raise MalformedField(f"non-finite numeric field {tok!r}")
    return v


def parse_mps(text: str) -> GeneralLP:
    """Parse MPS text (subset above) into a ``GeneralLP``."""
    lp = GeneralLP()
    rows = set()
    cols = set()
    rhs_set_name = None
    section = None
    saw_endata = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("*"):
            continue
        if saw_endata:
            raise MalformedField(f"line {lineno}: content after ENDATA")
        indented = raw[0] in " \t"
        tok = raw.split()

        if not indented:
            head = tok[0].upper()
            if head not in _SECTIONS:
                raise UnsupportedSection(
                    f"line {lineno}: unknown section {tok[0]!r}")
            if head not in _SUPPORTED:
                raise UnsupportedSection(head)
            if head == "NAME":
                lp.name = tok[1] if len(tok) > 1 else ""
            elif head == "ENDATA":
                saw_endata = True
            section = head
            continue

        if section == "ROWS":
            if len(tok) != 2:
                raise MalformedField(f"line {lineno}: ROWS entry needs "
                                     f"TYPE NAME, got {raw.strip()!r}")
            rtype, rname = tok[0].upper(), tok[1]
            if rname in rows or rname == lp.objective_name:
                raise DuplicateEntry(f"line {lineno}: duplicate row {rname!r}")
            if rtype == "N":
                if lp.objective_name:
                    raise UnsupportedSection(
                        f"line {lineno}: second free (N) row {rname!r}")
                lp.objective_name = rname
            elif rtype in ("E", "L", "G"):
                lp.row_names.append(rname)
                lp.row_types.append(rtype)
                rows.add(rname)
            else:
                raise MalformedField(f"line {lineno}: unknown row type "
                                     f"{rtype!r}")

        elif section == "COLUMNS":
            if "'MARKER'" in tok:
                raise UnsupportedSection(
                    f"line {lineno}: integrality markers")
            if len(tok) not in (3, 5):
                raise MalformedField(f"line {lineno}: COLUMNS entry needs "
                                     f"COL ROW VAL [ROW VAL]")
            cname = tok[0]
            if cname not in cols:
                cols.add(cname)
                lp.col_names.append(cname)
            for pos in range(1, len(tok), 2):
                rname, val = tok[pos], _num(tok[pos + 1])
                if rname == lp.objective_name:
                    if cname in lp.objective:
                        raise DuplicateEntry(
                            f"line {lineno}: duplicate objective entry for "
                            f"column {cname!r}")
                    lp.objective[cname] = val
                elif rname in rows:
                    if (rname, cname) in lp.entries:
                        raise DuplicateEntry(
                            f"line {lineno}: duplicate entry "
                            f"({rname!r}, {cname!r})")
                    lp.entries[(rname, cname)] = val
                else:
                    raise MalformedField(f"line {lineno}: unknown row "
                                         f"{rname!r}")

        elif section == "RHS":
            if len(tok) % 2 == 1:  # leading set name present
                if rhs_set_name is None:
                    rhs_set_name = tok[0]
                elif tok[0] != rhs_set_name:
                    raise UnsupportedSection(
                        f"line {lineno}: multiple RHS sets")
                pairs = tok[1:]
            else:
                pairs = tok
            if not pairs or len(pairs) % 2 != 0 or len(pairs) > 4:
                raise MalformedField(f"line {lineno}: RHS entry needs "
                                     f"[SET] ROW VAL [ROW VAL]")
            for pos in range(0, len(pairs), 2):
                rname, val = pairs[pos], _num(pairs[pos + 1])
                if rname == lp.objective_name:
                    lp.objective_offset = -val
                elif rname in rows:
                    if rname in lp.rhs:
                        raise DuplicateEntry(
                            f"line {lineno}: duplicate RHS for row {rname!r}")
                    lp.rhs[rname] = val
                else:
                    raise MalformedField(f"line {lineno}: unknown row "
                                         f"{rname!r}")

        elif section == "BOUNDS":
            btype = tok[0].upper()
            if btype == "FR":
                if len(tok) == 3:
                    cname = tok[2]
                elif len(tok) == 2:
                    cname = tok[1]
                else:
                    raise MalformedField(f"line {lineno}: FR bound needs "
                                         f"FR [SET] COL")
                val = None
            elif btype in ("LO", "UP"):
                if len(tok) == 4:
                    cname, val = tok[2], _num(tok[3])
                elif len(tok) == 3:
                    cname, val = tok[1], _num(tok[2])
                else:
                    raise MalformedField(f"line {lineno}: {btype} bound "
                                         f"needs {btype} [SET] COL VAL")
            else:
                raise UnsupportedSection(
                    f"line {lineno}: bound type {btype!r}")
            if cname not in cols:
                raise MalformedField(f"line {lineno}: unknown column "
                                     f"{cname!r}")
            bnd = lp.bounds.setdefault(cname, Bounds())
            if btype == "FR":
                if bnd.free:
                    raise DuplicateEntry(f"line {lineno}: duplicate FR bound "
                                         f"for {cname!r}")
                bnd.free = True
            elif btype == "LO":
                if bnd.lo is not None:
                    raise DuplicateEntry(f"line {lineno}: duplicate LO bound "
                                         f"for {cname!r}")
                bnd.lo = val
            else:
                if bnd.up is not None:
                    raise DuplicateEntry(f"line {lineno}: duplicate UP bound "
                                         f"for {cname!r}")
                bnd.up = val

        elif section in (None, "NAME"):
            raise MalformedField(f"line {lineno}: data before any section")
        else:  # pragma: no cover - sections are screened above
            raise UnsupportedSection(section)

    if not saw_endata:
        raise MalformedField("missing ENDATA")
    if not lp.objective_name:
        raise MalformedField("no objective (N) row")
    if not lp.col_names:
        raise MalformedField("no columns")
    if not lp.row_names:
        raise MalformedField("no constraint rows")
    return lp


@dataclass
class VariableMap:
    """How one original variable maps into standard-form columns."""

    pos_col: int
    neg_col: int | None
    shift: float


@dataclass
class StandardFormMap:
    """Recovers original-variable values and the true objective."""

    variables: dict
    column_labels: list
    row_labels: list
    objective_offset: float

    def recover(self, x) -> dict:
        x = np.asarray(x, dtype=np.float64)
        out = {}
        for name, vm in self.variables.items():
            v = x[vm.pos_col] + vm.shift
            if vm.neg_col is not None:
                v -= x[vm.neg_col]
            out[name] = float(v)
        return out

    def objective_value(self, c, x) -> float:
        """Original objective value at a standard-form point."""
        return float(np.asarray(c) @ np.asarray(x)) + self.objective_offset


def to_standard_form(lp: GeneralLP) -> tuple[StandardFormLP, StandardFormMap]:
    """Standardize a parsed LP; see the module docstring for the recipe."""
    variables = {}
    col_labels = []
    offset = lp.objective_offset
    neg_queue = []
    upper_rows = []  # (col_index, ub_minus_lo, varname)

    for name in lp.col_names:
        bnd = lp.bounds.get(name, Bounds())
        if bnd.free:
            if bnd.lo is not None or bnd.up is not None:
                raise InconsistentBounds(
                    f"variable {name!r} is FR but carries LO/UP bounds")
            pos = len(col_labels)
            col_labels.append(name)
            variables[name] = VariableMap(pos_col=pos, neg_col=-1, shift=0.0)
            neg_queue.append(name)
            continue
        lo = 0.0 if bnd.lo is None else bnd.lo
        if bnd.up is not None and bnd.up < lo:
            if bnd.lo is None and bnd.up < 0.0:
                raise UnboundedBelowVariableWithoutFR(
                    f"variable {name!r} has UP {bnd.up} below the default "
                    f"lower bound 0 and is not declared FR")
            raise InconsistentBounds(
                f"variable {name!r} has UP {bnd.up} < LO {lo}")
        pos = len(col_labels)
        col_labels.append(name)
        variables[name] = VariableMap(pos_col=pos, neg_col=None, shift=lo)
        if lo != 0.0:
            offset += lp.objective.get(name, 0.0) * lo
        if bnd.up is not None:
            upper_rows.append((pos, bnd.up - lo, name))

    for name in neg_queue:
        idx = len(col_labels)
        col_labels.append(name + "#neg")
        variables[name].neg_col = idx

    n_struct = len(col_labels)
    nrows_main = len(lp.row_names)
    row_index = {r: i for i, r in enumerate(lp.row_names)}

    coo_r, coo_c, coo_v = [], [], []
    b = np.zeros(nrows_main + len(upper_rows))
    c = np.zeros(n_struct)
    for name, vm in variables.items():
        coef = lp.objective.get(name, 0.0)
        c[vm.pos_col] = coef
        if vm.neg_col is not None:
            c[vm.neg_col] = -coef

    for (rname, cname), val in lp.entries.items():
        i = row_index[rname]
        vm = variables[cname]
        coo_r.append(i)
        coo_c.append(vm.pos_col)
        coo_v.append(val)
        if vm.neg_col is not None:
            coo_r.append(i)
            coo_c.append(vm.neg_col)
            coo_v.append(-val)
        if vm.shift != 0.0:
            b[i] -= val * vm.shift
    for rname, val in lp.rhs.items():
        b[row_index[rname]] += val

    row_labels = list(lp.row_names)
    next_col = n_struct
    for i, rtype in enumerate(lp.row_types):
        if rtype == "E":
            continue
        coo_r.append(i)
        coo_c.append(next_col)
        coo_v.append(1.0 if rtype == "L" else -1.0)
        kind = "slack" if rtype == "L" else "surplus"
        col_labels.append(f"{kind}#{lp.row_names[i]}")
        next_col += 1

    for t, (cidx, ub, name) in enumerate(upper_rows):
        i = nrows_main + t
        row_labels.append(f"upper#{name}")
        coo_r.extend([i, i])
        coo_c.extend([cidx, next_col])
        coo_v.extend([1.0, 1.0])
        col_labels.append(f"ubslack#{name}")
        b[i] += ub
        next_col += 1

    ncols = next_col
    c = np.concatenate([c, np.zeros(ncols - n_struct)])
    A = sp.coo_matrix((coo_v, (coo_r, coo_c)),
                      shape=(b.shape[0], ncols)).tocsc()
    problem = StandardFormLP(A, b, c)
    mapping = StandardFormMap(variables=variables, column_labels=col_labels,
                              row_labels=row_labels, objective_offset=offset)
    return problem, mapping
