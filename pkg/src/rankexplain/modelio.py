"""Text serialization of the integer models (LP and MPS dialects).

Both writers emit every coefficient through repr() so a parse of the export
reproduces the model structurally: variable names, order, bounds and
integrality, constraint names, index-sorted terms, senses, right-hand
sides, and the objective. Variable order is recoverable because every
variable gets a Bounds line (LP) and an explicit zero objective entry in
COLUMNS (MPS). Model metadata is not serialized.
"""

from __future__ import annotations

import math

import numpy as np

from .core import InputError
from .milp import MilpConstraint, MilpModel, MilpVar

_SENSE_TO_MPS = {"<=": "L", ">=": "G", "=": "E"}
_MPS_TO_SENSE = {v: k for k, v in _SENSE_TO_MPS.items()}


def _fmt(x: float) -> str:
    return repr(float(x))


def _terms_text(terms, names) -> str:
    parts = []
    for idx, coef in terms:
        mag = _fmt(abs(coef))
        if not parts:
            parts.append(("- " if coef < 0 else "") + mag + " " + names[idx])
        else:
            parts.append(("- " if coef < 0 else "+ ") + mag + " " + names[idx])
    return " ".join(parts)


def export_model(model: MilpModel, fmt: str = "lp") -> str:
    if fmt == "lp":
        return _export_lp(model)
    if fmt == "mps":
        return _export_mps(model)
    raise InputError("unknown model format %r" % (fmt,))


def parse_model(text: str, fmt: str = "lp") -> MilpModel:
    if fmt == "lp":
        return _parse_lp(text)
    if fmt == "mps":
        return _parse_mps(text)
    raise InputError("unknown model format %r" % (fmt,))


def save_model(model: MilpModel, path: str, fmt: str | None = None) -> None:
    if fmt is None:
        fmt = "mps" if str(path).endswith(".mps") else "lp"
    with open(path, "w") as fh:
        fh.write(export_model(model, fmt))


def load_model(path: str, fmt: str | None = None) -> MilpModel:
    if fmt is None:
        fmt = "mps" if str(path).endswith(".mps") else "lp"
    with open(path) as fh:
        return parse_model(fh.read(), fmt)


def _export_lp(model: MilpModel) -> str:
    names = [v.name for v in model.variables]
    out = ["\\ " + model.name, "Minimize"]
    if model.objective is not None and np.any(model.objective):
        obj_terms = [(j, float(c)) for j, c in enumerate(model.objective) if c != 0.0]
        out.append(" obj: " + _terms_text(obj_terms, names))
    else:
        out.append(" obj:")
    out.append("Subject To")
    for con in model.constraints:
        out.append(
            " %s: %s %s %s" % (con.name, _terms_text(con.terms, names), con.sense, _fmt(con.rhs))
        )
    out.append("Bounds")
    for v in model.variables:
        out.append(" %s <= %s <= %s" % (_fmt(v.lo), v.name, _fmt(v.hi)))
    binaries = [v.name for v in model.variables if v.integer]
    if binaries:
        out.append("Binary")
        for start in range(0, len(binaries), 8):
            out.append(" " + " ".join(binaries[start : start + 8]))
    out.append("End")
    return "\n".join(out) + "\n"


def _parse_terms(tokens, index_of):
    terms = []
    sign = 1.0
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok == "+":
            sign = 1.0
            i += 1
            continue
        if tok == "-":
            sign = -1.0
            i += 1
            continue
        try:
            coef = float(tok)
        except ValueError:
            coef = 1.0
            name = tok
        else:
            i += 1
            if i >= len(tokens):
                raise InputError("dangling coefficient in term list")
            name = tokens[i]
        if name not in index_of:
            raise InputError("unknown variable %r in term list" % (name,))
        terms.append((index_of[name], sign * coef))
        sign = 1.0
        i += 1
    return terms


def _parse_lp(text: str) -> MilpModel:
    name = "model"
    obj_tokens: list[str] = []
    raw_cons: list[tuple[str, list[str], str, float]] = []
    bounds: list[tuple[float, str, float]] = []
    binary: set[str] = set()
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("\\"):
            comment = line[1:].strip()
            if section is None and comment:
                name = comment
            continue
        low = line.lower()
        if low in ("minimize", "maximize"):
            if low == "maximize":
                raise InputError("only minimization models are supported")
            section = "obj"
            continue
        if low == "subject to":
            section = "cons"
            continue
        if low == "bounds":
            section = "bounds"
            continue
        if low in ("binary", "binaries"):
            section = "binary"
            continue
        if low == "end":
            break
        if section == "obj":
            if ":" in line:
                line = line.split(":", 1)[1].strip()
            obj_tokens.extend(line.split())
        elif section == "cons":
            head, body = line.split(":", 1)
            tokens = body.split()
            for si in range(len(tokens)):
                if tokens[si] in ("<=", ">=", "="):
                    sense = tokens[si]
                    rhs = float(tokens[si + 1])
                    raw_cons.append((head.strip(), tokens[:si], sense, rhs))
                    break
            else:
                raise InputError("constraint without sense: %r" % (line,))
        elif section == "bounds":
            toks = line.split()
            if len(toks) != 5 or toks[1] != "<=" or toks[3] != "<=":
                raise InputError("unsupported bounds line: %r" % (line,))
            bounds.append((float(toks[0]), toks[2], float(toks[4])))
        elif section == "binary":
            binary.update(line.split())
        else:
            raise InputError("content outside any section: %r" % (line,))

    variables = [MilpVar(nm, lo, hi, nm in binary) for lo, nm, hi in bounds]
    index_of = {v.name: j for j, v in enumerate(variables)}
    if len(index_of) != len(variables):
        raise InputError("duplicate variable in bounds section")
    cons = [
        MilpConstraint(nm, tuple(sorted(_parse_terms(toks, index_of))), sense, rhs)
        for nm, toks, sense, rhs in raw_cons
    ]
    objective = None
    if obj_tokens:
        vec = np.zeros(len(variables))
        for idx, coef in _parse_terms(obj_tokens, index_of):
            vec[idx] += coef
        if np.any(vec):
            objective = vec
    return MilpModel(name, variables, cons, objective, {})


def _export_mps(model: MilpModel) -> str:
    names = [v.name for v in model.variables]
    out = ["NAME %s" % model.name, "ROWS", " N obj"]
    for con in model.constraints:
        out.append(" %s %s" % (_SENSE_TO_MPS[con.sense], con.name))
    # column-major entries; explicit zero objective entries pin the order
    col_rows: list[list[tuple[str, float]]] = [[] for _ in names]
    for con in model.constraints:
        for idx, coef in con.terms:
            col_rows[idx].append((con.name, coef))
    obj = model.objective
    out.append("COLUMNS")
    in_int = False
    marker = 0
    for j, v in enumerate(model.variables):
        if v.integer != in_int:
            out.append(
                " MARK%04d 'MARKER' %s" % (marker, "'INTORG'" if v.integer else "'INTEND'")
            )
            marker += 1
            in_int = v.integer
        oc = float(obj[j]) if obj is not None else 0.0
        out.append(" %s obj %s" % (v.name, _fmt(oc)))
        for row_name, coef in col_rows[j]:
            out.append(" %s %s %s" % (v.name, row_name, _fmt(coef)))
    if in_int:
        out.append(" MARK%04d 'MARKER' 'INTEND'" % marker)
    out.append("RHS")
    for con in model.constraints:
        out.append(" RHS %s %s" % (con.name, _fmt(con.rhs)))
    out.append("BOUNDS")
    for v in model.variables:
        if v.integer and v.lo == 0.0 and v.hi == 1.0:
            out.append(" BV BND %s" % v.name)
            continue
        if math.isinf(v.lo) and v.lo < 0 and math.isinf(v.hi):
            out.append(" FR BND %s" % v.name)
            continue
        if math.isfinite(v.lo):
            out.append(" LO BND %s %s" % (v.name, _fmt(v.lo)))
        if math.isfinite(v.hi):
            out.append(" UP BND %s %s" % (v.name, _fmt(v.hi)))
    out.append("ENDATA")
    return "\n".join(out) + "\n"


def _parse_mps(text: str) -> MilpModel:
    name = "model"
    section = None
    row_order: list[tuple[str, str]] = []  # (sense letter, name)
    obj_row = None
    var_order: list[str] = []
    var_int: dict[str, bool] = {}
    col_entries: dict[str, list[tuple[str, float]]] = {}
    obj_entries: dict[str, float] = {}
    rhs: dict[str, float] = {}
    blo: dict[str, float] = {}
    bhi: dict[str, float] = {}
    bv: set[str] = set()
    free: set[str] = set()
    in_int = False
    for raw in text.splitlines():
        if not raw.strip() or raw.lstrip().startswith("*"):
            continue
        head = raw.split()
        if raw[0] not in " \t":
            key = head[0].upper()
            if key == "NAME":
                if len(head) > 1:
                    name = head[1]
                continue
            if key in ("ROWS", "COLUMNS", "RHS", "BOUNDS", "RANGES"):
                section = key
                continue
            if key == "ENDATA":
                break
            raise InputError("unknown MPS section %r" % (head[0],))
        if section == "ROWS":
            sense, row_name = head[0].upper(), head[1]
            if sense == "N":
                if obj_row is not None:
                    raise InputError("multiple objective rows")
                obj_row = row_name
            elif sense in _MPS_TO_SENSE:
                row_order.append((sense, row_name))
            else:
                raise InputError("unknown row sense %r" % (head[0],))
        elif section == "COLUMNS":
            if len(head) >= 3 and head[1] == "'MARKER'":
                in_int = head[2] == "'INTORG'"
                continue
            var = head[0]
            if var not in col_entries:
                col_entries[var] = []
                var_order.append(var)
                var_int[var] = in_int
            pairs = head[1:]
            for p in range(0, len(pairs), 2):
                row_name, val = pairs[p], float(pairs[p + 1])
                if row_name == obj_row:
                    obj_entries[var] = obj_entries.get(var, 0.0) + val
                else:
                    col_entries[var].append((row_name, val))
        elif section == "RHS":
            for p in range(1, len(head), 2):
                rhs[head[p]] = float(head[p + 1])
        elif section == "BOUNDS":
            kind = head[0].upper()
            var = head[2]
            if kind == "BV":
                bv.add(var)
            elif kind == "FR":
                free.add(var)
            elif kind == "LO":
                blo[var] = float(head[3])
            elif kind == "UP":
                bhi[var] = float(head[3])
            elif kind == "FX":
                blo[var] = bhi[var] = float(head[3])
            else:
                raise InputError("unsupported bound kind %r" % (kind,))
        elif section == "RANGES":
            raise InputError("RANGES section is not supported")
        else:
            raise InputError("data line outside a section: %r" % (raw,))

    variables = []
    for var in var_order:
        integer = var_int[var] or var in bv
        if var in bv:
            lo, hi = 0.0, 1.0
        elif var in free:
            lo, hi = -math.inf, math.inf
        else:
            lo = blo.get(var, 0.0)
            hi = bhi.get(var, 1.0 if integer else math.inf)
        variables.append(MilpVar(var, lo, hi, integer))
    index_of = {v.name: j for j, v in enumerate(variables)}

    per_row: dict[str, list[tuple[int, float]]] = {rn: [] for _, rn in row_order}
    for var, entries in col_entries.items():
        j = index_of[var]
        for row_name, val in entries:
            if row_name not in per_row:
                raise InputError("entry for unknown row %r" % (row_name,))
            per_row[row_name].append((j, val))
    cons = [
        MilpConstraint(rn, tuple(sorted(per_row[rn])), _MPS_TO_SENSE[sense], rhs.get(rn, 0.0))
        for sense, rn in row_order
    ]
    objective = None
    if obj_entries:
        vec = np.zeros(len(variables))
        for var, val in obj_entries.items():
            vec[index_of[var]] = val
        if np.any(vec):
            objective = vec
    return MilpModel(name, variables, cons, objective, {})
