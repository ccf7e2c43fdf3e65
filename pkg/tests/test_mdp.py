"""Exact multichain Markov chain evaluation and policy iteration."""

from fractions import Fraction

import pytest

from bidgames.errors import OutDegreeNotTwoError
from bidgames.mdp import (
    MdpAction,
    MdpModel,
    build_outdeg2_mdp,
    evaluate_markov_chain,
    policy_iteration,
    solve_mdp_mp,
)
from conftest import chain_game, loops_game

F = Fraction
ONE = F(1)


def _chain(states, trans, reward):
    return evaluate_markov_chain(tuple(states), trans, reward)


class TestEvaluateMarkovChain:
    def test_two_state_swap(self):
        gain, bias = _chain(
            "ab",
            {"a": {"b": ONE}, "b": {"a": ONE}},
            {"a": F(1), "b": F(-1)},
        )
        assert gain == {"a": F(0), "b": F(0)}
        assert bias == {"a": F(0), "b": F(-1)}

    def test_periodic_pair(self):
        gain, bias = _chain(
            "ab",
            {"a": {"b": ONE}, "b": {"a": ONE}},
            {"a": F(3), "b": F(1)},
        )
        assert gain["a"] == F(2)
        assert bias == {"a": F(0), "b": F(-1)}

    def test_transient_split(self):
        gain, bias = _chain(
            ["t", "a", "b"],
            {"t": {"a": F(1, 2), "b": F(1, 2)},
             "a": {"a": ONE}, "b": {"b": ONE}},
            {"t": F(5), "a": F(2), "b": F(0)},
        )
        assert gain == {"t": F(1), "a": F(2), "b": F(0)}
        assert bias["t"] == F(4)

    def test_self_loop(self):
        gain, bias = _chain("a", {"a": {"a": ONE}}, {"a": F(-7, 3)})
        assert gain["a"] == F(-7, 3)
        assert bias["a"] == F(0)

    def test_lazy_chain(self):
        # a stays put with prob 2/3; recurrence does not disturb the gain
        gain, bias = _chain(
            "ab",
            {"a": {"a": F(2, 3), "b": F(1, 3)}, "b": {"a": ONE}},
            {"a": F(1), "b": F(5)},
        )
        # stationary: pi_a = 3/4, pi_b = 1/4
        assert gain["a"] == F(3, 4) * 1 + F(1, 4) * 5


def _two_arm(r_good=F(4), r_bad=F(1), sense="max"):
    return MdpModel(
        ("s", "a", "b"),
        {"s": (MdpAction("go-a", {"a": ONE}), MdpAction("go-b", {"b": ONE}))},
        {"a": {"a": ONE}, "b": {"b": ONE}},
        {"s": F(0), "a": r_good, "b": r_bad},
        sense,
    )


class TestPolicyIteration:
    def test_picks_best_arm(self):
        res = policy_iteration(_two_arm())
        assert res.gain["s"] == F(4)
        assert res.policy["s"] == "go-a"

    def test_min_sense_flips(self):
        res = policy_iteration(_two_arm(sense="min"))
        assert res.gain["s"] == F(1)
        assert res.policy["s"] == "go-b"

    def test_multichain_gains(self):
        res = policy_iteration(_two_arm())
        assert res.gain["a"] == F(4) and res.gain["b"] == F(1)

    def test_chance_mixing(self):
        # the controlled state hedges between two absorbing classes
        model = MdpModel(
            ("s", "n", "a", "b"),
            {"s": (MdpAction("safe", {"a": ONE}),
                   MdpAction("risky", {"n": ONE}))},
            {"n": {"a": F(1, 4), "b": F(3, 4)},
             "a": {"a": ONE}, "b": {"b": ONE}},
            {"s": F(0), "n": F(0), "a": F(2), "b": F(3)},
        )
        res = policy_iteration(model)
        # risky: 1/4 * 2 + 3/4 * 3 = 11/4 > 2
        assert res.gain["s"] == F(11, 4)
        assert res.policy["s"] == "risky"

    def test_deterministic_repeat(self):
        first = policy_iteration(_two_arm())
        second = policy_iteration(_two_arm())
        assert first == second

    def test_malformed_model_caught(self):
        model = MdpModel(("s",), {"s": (MdpAction("x", {"s": F(1, 2)}),)}, {}, {"s": F(0)})
        with pytest.raises(ValueError):
            policy_iteration(model)


class TestOutDegreeTwoReduction:
    def test_loops_value(self):
        model = build_outdeg2_mdp(loops_game(), F(1, 3))
        vals = solve_mdp_mp(model)
        assert vals["v1"] == F(-1, 3)
        assert vals["v2"] == F(-1, 3)

    def test_loops_value_above_half(self):
        vals = solve_mdp_mp(build_outdeg2_mdp(loops_game(), F(3, 4)))
        assert vals["v1"] == F(1, 2)

    def test_nature_states_share_value(self):
        vals = solve_mdp_mp(build_outdeg2_mdp(loops_game(), F(1, 3)))
        assert vals["v1:1"] == vals["v1"]

    def test_wrong_degree_rejected(self):
        with pytest.raises(OutDegreeNotTwoError):
            build_outdeg2_mdp(chain_game(), F(1, 2))

    def test_sense_tracks_ratio(self):
        assert build_outdeg2_mdp(loops_game(), F(2, 3)).sense == "max"
        assert build_outdeg2_mdp(loops_game(), F(1, 3)).sense == "min"
