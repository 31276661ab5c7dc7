"""Solvers: Zielonka, cooperative regions, chains, the almost-sure pipeline
and its brute-force oracle."""
import pytest

from omegagames.benchgen import SplitMix64
from omegagames.errors import NotDeterministicGame, TooLarge
from omegagames.graph import PLAYER0, PLAYER1, PROBABILISTIC, build_game
from omegagames.objectives import Parity, Rabin, Streett, complement
from omegagames.solve import (
    almost_sure_solve,
    cooperative_region,
    markov_chain_almost_sure,
    oracle_solve,
    zielonka_solve,
)

from .conftest import (
    sample_game,
    sample_pairs,
    sample_parity,
    strategy_wins_almost_surely,
)


def test_zielonka_single_even_loop():
    g = build_game([(PLAYER0, [0])])
    w0, w1, s0, s1 = zielonka_solve(g, Parity((0,)))
    assert w0.states == frozenset({0}) and not w1.states
    assert s0.choice(0) == 0


def test_zielonka_single_odd_loop():
    g = build_game([(PLAYER0, [0])])
    w0, w1, _, _ = zielonka_solve(g, Parity((1,)))
    assert w1.states == frozenset({0}) and not w0.states


def test_zielonka_rejects_stochastic_games():
    g = build_game([(PROBABILISTIC, [0])])
    with pytest.raises(NotDeterministicGame):
        zielonka_solve(g, Parity((0,)))


def test_determinacy_partition_random():
    rng = SplitMix64(0xDEA1)
    for _ in range(300):
        g = sample_game(rng, max_states=9, owners=(PLAYER0, PLAYER1))
        par = sample_parity(rng, g.n)
        w0, w1, _, _ = zielonka_solve(g, par)
        assert w0.states | w1.states == set(range(g.n))
        assert not (w0.states & w1.states)


def test_zielonka_strategies_win(rng):
    for _ in range(120):
        g = sample_game(rng, max_states=6, owners=(PLAYER0, PLAYER1))
        par = sample_parity(rng, g.n)
        w0, w1, s0, s1 = zielonka_solve(g, par)
        assert strategy_wins_almost_surely(g, par, 0, w0, s0)
        assert strategy_wins_almost_surely(g, complement(par), 1, w1, s1)


def test_cooperative_examples():
    g = build_game([(PLAYER0, [0])])
    assert 0 in cooperative_region(g, Parity((0,)))
    assert 0 not in cooperative_region(g, Parity((1,)))
    # a (priority 1) -> b (priority 0) -> b: both states cooperative
    g2 = build_game([(PLAYER0, [1]), (PLAYER1, [1])])
    assert sorted(cooperative_region(g2, Parity((1, 0))).states) == [0, 1]


def test_cooperative_matches_lasso_enumeration(rng):
    import itertools

    from omegagames.objectives import Lasso, accepts_lasso

    for _ in range(60):
        g = sample_game(rng, max_states=5, owners=(PLAYER0, PLAYER1))
        par = sample_parity(rng, g.n)
        region = cooperative_region(g, par).states
        # reference: enumerate all simple lassos (stem+cycle of distinct states)
        expected = set()
        for s in range(g.n):
            for perm_len in range(1, g.n + 1):
                for walk in itertools.permutations(range(g.n), perm_len):
                    if walk[0] != s:
                        continue
                    if any(walk[k + 1] not in g.succ[walk[k]] for k in range(len(walk) - 1)):
                        continue
                    for back in range(len(walk)):
                        if walk[back] in g.succ[walk[-1]]:
                            lasso = Lasso(walk[:back], walk[back:])
                            if accepts_lasso(par, lasso):
                                expected.add(s)
        assert region == expected


def test_markov_chain_examples():
    even = build_game([(PROBABILISTIC, [0])])
    assert markov_chain_almost_sure(even, Parity((0,)), 0) is True
    odd = build_game([(PROBABILISTIC, [0])])
    assert markov_chain_almost_sure(odd, Parity((1,)), 0) is False
    fork = build_game(
        [(PROBABILISTIC, [1, 2]), (PROBABILISTIC, [1]), (PROBABILISTIC, [2])]
    )
    assert markov_chain_almost_sure(fork, Parity((1, 0, 1)), 0) is False


def test_markov_chain_rejects_owned_states():
    g = build_game([(PLAYER0, [0])])
    with pytest.raises(ValueError):
        markov_chain_almost_sure(g, Parity((0,)), 0)


def test_oracle_trivial_and_bound():
    g = build_game([(PLAYER0, [0])])
    assert oracle_solve(g, Parity((0,)), 0).states == frozenset({0})
    big = build_game([(PLAYER0, [s]) for s in range(11)])
    with pytest.raises(TooLarge):
        oracle_solve(big, Parity((0,) * 11), 0)


def test_gadget_example_almost_sure_and_oracle():
    # v probabilistic (priority 3) -> {a, b}; a (P1, 0) -> v; b (P1, 1) -> v
    g = build_game([(PROBABILISTIC, [1, 2]), (PLAYER1, [0]), (PLAYER1, [0])])
    par = Parity((3, 0, 1))
    region, strategy = almost_sure_solve(g, par, 0)
    assert region.states == frozenset({0, 1, 2})
    assert oracle_solve(g, par, 0).states == region.states
    # player 0 owns nothing, so the witness has an empty choice set
    assert strategy.domain() == frozenset()
    # raising a's priority to 2 makes the fair minimum odd
    par2 = Parity((3, 2, 1))
    region2, _ = almost_sure_solve(g, par2, 0)
    assert region2.states == oracle_solve(g, par2, 0).states == frozenset()


def test_two_player_input_equals_zielonka(rng):
    for _ in range(100):
        g = sample_game(rng, owners=(PLAYER0, PLAYER1))
        par = sample_parity(rng, g.n)
        w0, w1, _, _ = zielonka_solve(g, par)
        r0, _ = almost_sure_solve(g, par, 0)
        r1, _ = almost_sure_solve(g, par, 1)
        assert r0.states == w0.states and r1.states == w1.states


def test_almost_sure_matches_oracle_parity():
    rng = SplitMix64(0x0AC1E)
    for _ in range(250):
        g = sample_game(rng, max_states=6)
        par = sample_parity(rng, g.n)
        for player in (0, 1):
            fast, strategy = almost_sure_solve(g, par, player)
            assert fast.states == oracle_solve(g, par, player).states
            rel = par if player == 0 else complement(par)
            assert strategy_wins_almost_surely(g, rel, player, fast, strategy)


def test_almost_sure_matches_oracle_rabin_streett():
    rng = SplitMix64(0x0B5E55)
    for trial in range(80):
        owners = (PLAYER0, PLAYER1) if trial % 2 else (PLAYER0, PLAYER1, PROBABILISTIC)
        g = sample_game(rng, max_states=5, owners=owners)
        pairs = sample_pairs(rng, g.n)
        for obj in (Streett(pairs), Rabin(pairs)):
            for player in (0, 1):
                fast, strategy = almost_sure_solve(g, obj, player)
                assert fast.states == oracle_solve(g, obj, player).states
                rel = obj if player == 0 else complement(obj)
                assert strategy_wins_almost_surely(g, rel, player, fast, strategy)


def test_streett_opponent_memory_regression():
    """The Streett side of a Rabin game can need memory: with pairs
    ({1},{2}) and ({0,1},{1}) the opponent only wins by alternating, so a
    memoryless-opponent enumeration would wrongly award everything to the
    Rabin player."""
    g = build_game(
        [(PLAYER1, [2, 1, 0]), (PLAYER1, [0, 1]), (PLAYER0, [1, 2, 0])], initial=0
    )
    obj = Rabin([({1}, {2}), ({0, 1}, {1})])
    fast, _ = almost_sure_solve(g, obj, 0)
    slow = oracle_solve(g, obj, 0)
    assert fast.states == slow.states == frozenset()


def test_ec_oracle_agrees_with_parity_oracle_on_buchi_encodings():
    """Buchi and coBuchi conditions are expressible as parity, Rabin and
    Streett objectives at once; the independent oracle formulations
    (strategy enumeration vs end components) must coincide on them."""
    from omegagames.objectives import buchi_parity, cobuchi_parity

    rng = SplitMix64(0xB0CC)
    for _ in range(100):
        g = sample_game(rng, max_states=6)
        n = g.n
        accepting = {s for s in range(n) if rng.below(2)}
        encodings = [
            (buchi_parity(accepting, n), Streett([(set(range(n)), accepting)])),
            (buchi_parity(accepting, n), Rabin([(accepting, set())])),
            (
                cobuchi_parity(accepting, n),
                Rabin([(set(range(n)), set(range(n)) - accepting)]),
            ),
            (
                cobuchi_parity(accepting, n),
                Streett([(set(range(n)) - accepting, set())]),
            ),
        ]
        for par, rs in encodings:
            for player in (0, 1):
                assert (
                    oracle_solve(g, rs, player).states
                    == oracle_solve(g, par, player).states
                )


def test_almost_sure_region_support_closure(rng):
    for _ in range(120):
        g = sample_game(rng)
        par = sample_parity(rng, g.n)
        region, _ = almost_sure_solve(g, par, 0)
        for s in region.states:
            if g.owners[s] == PROBABILISTIC:
                assert set(g.support(s)) <= region.states


def test_weights_never_read_after_validation():
    """Solvers work off the cached validity flag, so replacing the weight
    accessor after one validation proves no algorithm touches weights."""
    g = build_game([(PROBABILISTIC, [1, 2]), (PLAYER1, [0]), (PLAYER1, [0])])
    par = Parity((3, 0, 1))
    g.require_valid()  # fills the cached violation list
    import omegagames.graph as graph_mod

    original = graph_mod.GameGraph.weights
    def trap(self, s):
        raise AssertionError("solver read distribution weights")
    graph_mod.GameGraph.weights = trap
    try:
        region, _ = almost_sure_solve(g, par, 0)
    finally:
        graph_mod.GameGraph.weights = original
    assert region.states == frozenset({0, 1, 2})


def test_weight_values_do_not_change_regions(rng):
    from fractions import Fraction

    for _ in range(60):
        g = sample_game(rng)
        par = sample_parity(rng, g.n)
        base, _ = almost_sure_solve(g, par, 0)
        reweighted = build_game(
            [
                (g.owners[s], list(g.succ[s]), g.label(s))
                for s in range(g.n)
            ],
            initial=g.initial,
            weights={
                s: [Fraction(1 + rng.below(9), 10) for _ in g.succ[s]]
                for s in range(g.n)
                if g.owners[s] == PROBABILISTIC
            },
        )
        other, _ = almost_sure_solve(reweighted, par, 0)
        assert other.states == base.states
