"""Existential-theory-of-the-reals exports for threshold-budget queries.

Programs are emitted as SMT-LIB 2 text over QF_NRA.  One real variable
x_u per vertex carries its threshold; bottom SCCs are pinned (parity) or
constrained by a value-zero optimality block with an unknown ratio
variable (mean payoff); interior vertices satisfy the cleared-denominator
recurrence

    x_u * (1 - xm_u + xp_u) = xp_u

where the auxiliary xp_u / xm_u are forced to be the exact max / min of
the successor thresholds by ordering constraints plus an equality
disjunction, so no branch of the recurrence has to be guessed.  The
query vertex's constraint x_v >= r is asserted last, before (check-sat).

Every emission is re-parsed; malformed output is a bug, not a warning.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graphs import GameGraph, bsccs, cycle_mean_extremes, validate
from .thresholds import classify_bscc

_OPERATORS = frozenset(
    ["and", "or", "not", "=", "<=", ">=", "<", ">", "+", "-", "*", "/"]
)


@dataclass(frozen=True)
class EtrProgram:
    logic: str
    variables: tuple[str, ...]
    constraints: tuple[str, ...]
    query: str
    mapping: tuple[tuple[str, str], ...]

    def text(self) -> str:
        lines = [f"(set-logic {self.logic})"]
        for vertex, var in self.mapping:
            lines.append(f"; {var} <-> vertex {vertex}")
        for var in self.variables:
            lines.append(f"(declare-const {var} Real)")
        for c in self.constraints:
            lines.append(f"(assert {c})")
        lines.append(f"(assert {self.query})")
        lines.append("(check-sat)")
        return "\n".join(lines) + "\n"


def parse_sexprs(text: str) -> list:
    """Parse SMT-LIB-style s-expressions; ';' comments run to end of line."""
    tokens: list[str] = []
    for raw in text.splitlines():
        line = raw.split(";", 1)[0]
        tokens.extend(line.replace("(", " ( ").replace(")", " ) ").split())
    forms: list = []
    stack: list[list] = []
    for tok in tokens:
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if not stack:
                raise ValueError("unbalanced ')'")
            done = stack.pop()
            (stack[-1] if stack else forms).append(done)
        else:
            if not stack:
                raise ValueError(f"top-level atom {tok!r}")
            stack[-1].append(tok)
    if stack:
        raise ValueError("unbalanced '('")
    return forms


def _symbols(form) -> set[str]:
    if isinstance(form, str):
        if form in _OPERATORS or form.lstrip("-").isdigit():
            return set()
        return {form}
    out: set[str] = set()
    for item in form:
        out |= _symbols(item)
    return out


def _check_program(program: EtrProgram) -> None:
    forms = parse_sexprs(program.text())
    if forms[0] != ["set-logic", program.logic]:
        raise AssertionError("program must open with its logic declaration")
    if forms[-1] != ["check-sat"]:
        raise AssertionError("program must close with (check-sat)")
    declared = set()
    asserts = []
    for form in forms[1:-1]:
        if form[0] == "declare-const":
            declared.add(form[1])
        elif form[0] == "assert":
            asserts.append(form[1])
        else:
            raise AssertionError(f"unexpected form {form[0]!r}")
    if declared != set(program.variables):
        raise AssertionError("declared variables drifted from the variable list")
    for body in asserts:
        loose = _symbols(body) - declared
        if loose:
            raise AssertionError(f"constraint references undeclared symbols {sorted(loose)}")


def _smt_rat(x: Fraction) -> str:
    x = Fraction(x)
    if x < 0:
        return f"(- {_smt_rat(-x)})"
    if x.denominator == 1:
        return str(x.numerator)
    return f"(/ {x.numerator} {x.denominator})"


def _extreme_constraints(var: str, lo: str, hi: str, succ: list[str]) -> list[str]:
    out = []
    for w in succ:
        out.append(f"(<= {lo} {w})")
        out.append(f"(<= {w} {hi})")
    if len(succ) == 1:
        out.append(f"(= {hi} {succ[0]})")
        out.append(f"(= {lo} {succ[0]})")
    else:
        out.append("(or " + " ".join(f"(= {hi} {w})" for w in succ) + ")")
        out.append("(or " + " ".join(f"(= {lo} {w})" for w in succ) + ")")
    out.append(f"(= (* {var} (- (+ 1 {hi}) {lo})) {hi})")
    return out


def _base_layout(graph: GameGraph, vertex: str, r: Fraction):
    if vertex not in graph.weight:
        raise ValueError(f"query vertex {vertex!r} is not in the graph")
    if not 0 <= r <= 1:
        raise ValueError(f"query ratio must lie in [0, 1], got {r}")
    var = {v: f"x{i}" for i, v in enumerate(graph.vertices)}
    variables = [var[v] for v in graph.vertices]
    constraints = []
    for v in graph.vertices:
        constraints.append(f"(<= 0 {var[v]})")
        constraints.append(f"(<= {var[v]} 1)")
    return var, variables, constraints


def _interior_constraints(graph, var, variables, constraints, in_bscc):
    for i, v in enumerate(graph.vertices):
        if v in in_bscc:
            continue
        hi, lo = f"xp{i}", f"xm{i}"
        variables += [hi, lo]
        constraints += [f"(<= 0 {hi})", f"(<= {hi} 1)", f"(<= 0 {lo})", f"(<= {lo} 1)"]
        constraints += _extreme_constraints(var[v], lo, hi, [var[u] for u in graph.edges[v]])


def emit_parity_threshbud(graph: GameGraph, vertex: str, r: Fraction) -> EtrProgram:
    """Program satisfiable when the parity threshold system admits x_vertex >= r."""
    validate(graph, require_parity=True)
    r = Fraction(r)
    var, variables, constraints = _base_layout(graph, vertex, r)
    in_bscc: set[str] = set()
    for comp in bsccs(graph):
        alpha = classify_bscc(graph, comp, "parity")
        for v in sorted(comp):
            in_bscc.add(v)
            constraints.append(f"(= {var[v]} {_smt_rat(alpha)})")
    _interior_constraints(graph, var, variables, constraints, in_bscc)
    program = EtrProgram(
        logic="QF_NRA",
        variables=tuple(variables),
        constraints=tuple(constraints),
        query=f"(>= {var[vertex]} {_smt_rat(r)})",
        mapping=tuple((v, var[v]) for v in graph.vertices),
    )
    _check_program(program)
    return program


def emit_mp_threshbud(graph: GameGraph, vertex: str, r: Fraction) -> EtrProgram:
    """Program satisfiable when the mean-payoff threshold system admits x_vertex >= r.

    Each bottom SCC gets a ratio variable rS constrained so the
    random-turn value at rS is 0 (potential equalities with disjunctive
    successor extremes).  SCCs whose value never crosses 0 pin rS at the
    crossing interval's infimum: 0 when the minimum cycle mean is
    nonnegative, 1 when the maximum cycle mean is negative.
    """
    validate(graph)
    r = Fraction(r)
    var, variables, constraints = _base_layout(graph, vertex, r)
    index = {v: i for i, v in enumerate(graph.vertices)}
    in_bscc: set[str] = set()
    for k, comp in enumerate(bsccs(graph)):
        members = sorted(comp)
        in_bscc.update(members)
        ratio_var = f"rS{k}"
        variables.append(ratio_var)
        constraints += [f"(<= 0 {ratio_var})", f"(<= {ratio_var} 1)"]
        for v in members:
            constraints.append(f"(= {var[v]} {ratio_var})")
        low_mean, high_mean = cycle_mean_extremes(graph.induced(set(comp)))
        if low_mean >= 0:
            constraints.append(f"(= {ratio_var} 0)")
            continue
        if high_mean < 0:
            constraints.append(f"(= {ratio_var} 1)")
            continue
        pot = {v: f"p{index[v]}" for v in members}
        for v in members:
            i = index[v]
            hi, lo = f"pp{i}", f"pm{i}"
            variables += [pot[v], hi, lo]
            succ = [pot[u] for u in graph.edges[v]]
            for w in succ:
                constraints.append(f"(<= {lo} {w})")
                constraints.append(f"(<= {w} {hi})")
            if len(succ) == 1:
                constraints.append(f"(= {hi} {succ[0]})")
                constraints.append(f"(= {lo} {succ[0]})")
            else:
                constraints.append("(or " + " ".join(f"(= {hi} {w})" for w in succ) + ")")
                constraints.append("(or " + " ".join(f"(= {lo} {w})" for w in succ) + ")")
            constraints.append(
                f"(= {pot[v]} (+ {_smt_rat(graph.weight[v])}"
                f" (* {ratio_var} {hi}) (* (- 1 {ratio_var}) {lo})))"
            )
        constraints.append(f"(= {pot[members[0]]} 0)")
    _interior_constraints(graph, var, variables, constraints, in_bscc)
    program = EtrProgram(
        logic="QF_NRA",
        variables=tuple(variables),
        constraints=tuple(constraints),
        query=f"(>= {var[vertex]} {_smt_rat(r)})",
        mapping=tuple((v, var[v]) for v in graph.vertices),
    )
    _check_program(program)
    return program
