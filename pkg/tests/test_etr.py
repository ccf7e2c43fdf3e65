"""Real-arithmetic program emission: parsing, satisfaction, solver agreement."""

from fractions import Fraction

import pytest

from bidgames.etr import emit_mp_threshbud, emit_parity_threshbud, parse_sexprs
from bidgames.graphs import GameGraph
from conftest import loops_game

F = Fraction


def _eval(form, env):
    """Evaluate an s-expression to a Fraction or bool under env."""
    if isinstance(form, str):
        if form in env:
            return env[form]
        return F(form)
    op, *args = form
    if op == "and":
        return all(_eval(a, env) for a in args)
    if op == "or":
        return any(_eval(a, env) for a in args)
    if op == "not":
        return not _eval(args[0], env)
    vals = [_eval(a, env) for a in args]
    if op == "=":
        return all(v == vals[0] for v in vals)
    if op == "<=":
        return all(a <= b for a, b in zip(vals, vals[1:]))
    if op == ">=":
        return all(a >= b for a, b in zip(vals, vals[1:]))
    if op == "<":
        return all(a < b for a, b in zip(vals, vals[1:]))
    if op == ">":
        return all(a > b for a, b in zip(vals, vals[1:]))
    if op == "+":
        return sum(vals)
    if op == "-":
        return -vals[0] if len(vals) == 1 else vals[0] - sum(vals[1:])
    if op == "*":
        out = F(1)
        for v in vals:
            out *= v
        return out
    if op == "/":
        return vals[0] / vals[1]
    raise ValueError(f"unknown operator {op!r}")


def satisfied(program, env) -> bool:
    forms = parse_sexprs(program.text())
    for form in forms:
        if form[0] == "assert" and not _eval(form[1], env):
            return False
    return True


def parity_ladder() -> GameGraph:
    # a chooses between an odd self-loop (good) and an even one (bad)
    return GameGraph.build(
        ["a", "t", "z"],
        [("a", "t"), ("a", "z"), ("t", "t"), ("z", "z")],
        None,
        {"a": 0, "t": 1, "z": 2},
    )


LADDER_ENV = {"x0": F(1, 2), "x1": F(0), "x2": F(1), "xp0": F(1), "xm0": F(0)}

# vertices are kept sorted, and the first potential is anchored at 0
LOOPS_MP_ENV = {
    "x0": F(1, 2), "x1": F(1, 2), "rS0": F(1, 2),
    "p0": F(0), "p1": F(-2),
    "pp0": F(0), "pm0": F(-2), "pp1": F(0), "pm1": F(-2),
}


class TestEmission:
    def test_parity_program_shape(self):
        prog = emit_parity_threshbud(parity_ladder(), "a", F(2, 5))
        forms = parse_sexprs(prog.text())
        assert forms[0] == ["set-logic", "QF_NRA"]
        assert forms[-1] == ["check-sat"]
        kinds = {form[0] for form in forms[1:-1]}
        assert kinds == {"declare-const", "assert"}

    def test_mapping_covers_vertices(self):
        prog = emit_parity_threshbud(parity_ladder(), "a", F(1, 2))
        assert dict(prog.mapping).keys() == {"a", "t", "z"}

    def test_text_deterministic(self):
        a = emit_mp_threshbud(loops_game(), "v1", F(1, 3)).text()
        b = emit_mp_threshbud(loops_game(), "v1", F(1, 3)).text()
        assert a == b

    def test_unknown_vertex_rejected(self):
        with pytest.raises(ValueError):
            emit_parity_threshbud(parity_ladder(), "nope", F(1, 2))

    def test_ratio_out_of_range(self):
        with pytest.raises(ValueError):
            emit_mp_threshbud(loops_game(), "v1", F(3, 2))


class TestSatisfaction:
    def test_parity_ladder_true_below_threshold(self):
        prog = emit_parity_threshbud(parity_ladder(), "a", F(2, 5))
        assert satisfied(prog, LADDER_ENV)

    def test_parity_ladder_false_above_threshold(self):
        prog = emit_parity_threshbud(parity_ladder(), "a", F(3, 5))
        assert not satisfied(prog, LADDER_ENV)

    def test_mp_loops_true_below_critical(self):
        prog = emit_mp_threshbud(loops_game(), "v1", F(1, 3))
        assert satisfied(prog, LOOPS_MP_ENV)

    def test_mp_loops_false_above_critical(self):
        prog = emit_mp_threshbud(loops_game(), "v1", F(3, 5))
        assert not satisfied(prog, LOOPS_MP_ENV)

    def test_mp_pinned_bsccs(self):
        g = GameGraph.build(
            ["s", "g", "b"],
            [("s", "g"), ("s", "b"), ("g", "g"), ("b", "b")],
            {"s": F(0), "g": F(2), "b": F(-3)},
        )
        prog = emit_mp_threshbud(g, "s", F(1, 2))
        env = {"x0": F(1), "x1": F(0), "x2": F(1, 2),
               "rS0": F(1), "rS1": F(0),
               "xp2": F(1), "xm2": F(0)}
        assert satisfied(prog, env)

    def test_single_successor_interior(self):
        g = GameGraph.build(
            ["s", "m", "g", "b"],
            [("s", "m"), ("s", "b"), ("m", "g"), ("g", "g"), ("b", "b")],
            None,
            {"s": 0, "m": 0, "g": 1, "b": 2},
        )
        prog = emit_parity_threshbud(g, "s", F(1, 3))
        env = {"x0": F(1), "x1": F(0), "x2": F(0), "x3": F(1, 2),
               "xp2": F(0), "xm2": F(0), "xp3": F(1), "xm3": F(0)}
        assert satisfied(prog, env)


class TestSolverAgreement:
    def test_z3_parity_ladder(self):
        z3 = pytest.importorskip("z3")
        for r, expect in ((F(2, 5), z3.sat), (F(3, 5), z3.unsat)):
            prog = emit_parity_threshbud(parity_ladder(), "a", r)
            solver = z3.Solver()
            solver.from_string(prog.text().replace("(check-sat)", ""))
            assert solver.check() == expect
