"""Game solving: Zielonka for 2-player parity games, cooperative regions,
Markov-chain acceptance, the almost-sure pipeline and the brute-force oracle.

Player 1 is always handled through the dual game (owners swapped, parity
complemented), so a single player-0 code path serves both players.
"""
from __future__ import annotations

import itertools
from typing import Optional

from . import _kernels
from .errors import NotDeterministicGame, TooLarge
from .graph import PLAYER0, PLAYER1, PROBABILISTIC, GameGraph, scc_decompose
from .objectives import Objective, Parity, Rabin, Streett, complement
from .reductions import dual_game, lar_reduce, pullback_strategy, reduce_stochastic_parity
from .strategies import Region, Strategy

ORACLE_STATE_BOUND = 10


def _check_parity(g: GameGraph, obj: Parity):
    if not isinstance(obj, Parity):
        raise TypeError(f"parity objective required, got {obj!r}")
    if len(obj.priorities) != g.n:
        raise ValueError(
            f"objective maps {len(obj.priorities)} states, game has {g.n}"
        )


def zielonka_solve(
    g: GameGraph, obj: Parity, backend: Optional[str] = None
) -> tuple[Region, Region, Strategy, Strategy]:
    """Solve a 2-player parity game: regions and memoryless strategies.

    ``W0`` and ``W1`` partition the state space; each strategy is winning
    on its player's region.
    """
    if not g.is_two_player:
        raise NotDeterministicGame("zielonka_solve requires a game without probabilistic states")
    g.require_valid()
    _check_parity(g, obj)
    flat = g.flat
    kern = _kernels.backend(backend)
    winner, ch0, ch1 = kern.solve_parity(
        flat.n, flat.owners, list(obj.priorities),
        flat.succ_ptr, flat.succ, flat.pred_ptr, flat.pred,
    )
    w0 = frozenset(s for s in range(g.n) if winner[s] == 0)
    w1 = frozenset(s for s in range(g.n) if winner[s] == 1)
    s0 = Strategy.memoryless(
        PLAYER0, {s: ch0[s] for s in w0 if g.owners[s] == PLAYER0}
    )
    s1 = Strategy.memoryless(
        PLAYER1, {s: ch1[s] for s in w1 if g.owners[s] == PLAYER1}
    )
    return (
        Region(w0, PLAYER0, "sure"),
        Region(w1, PLAYER1, "sure"),
        s0,
        s1,
    )


def cooperative_region(g: GameGraph, obj: Parity, backend: Optional[str] = None) -> Region:
    """States from which some path (players cooperating) satisfies the parity
    objective: reachability of a nontrivial SCC whose minimum priority is
    witnessed even within the priority-restricted subgraph."""
    if not g.is_two_player:
        raise NotDeterministicGame("cooperative_region requires a game without probabilistic states")
    g.require_valid()
    _check_parity(g, obj)
    prio = obj.priorities
    targets = set()
    for e in sorted({p for p in prio if p % 2 == 0}):
        mask = [p >= e for p in prio]
        for comp in scc_decompose(g, mask):
            if comp.nontrivial and any(prio[s] == e for s in comp.states):
                targets.update(comp.states)
    if not targets:
        return Region(frozenset(), PLAYER0, "cooperative")
    flat = g.flat
    kern = _kernels.backend(backend)
    order, _ = kern.attract(
        flat.n, flat.owners, flat.succ_ptr, flat.succ, flat.pred_ptr, flat.pred,
        [1] * g.n, [len(g.succ[s]) for s in range(g.n)],
        sorted(targets), (True, True, True),
    )
    return Region(frozenset(order), PLAYER0, "cooperative")


def _chain_verdicts(n, succ, obj: Objective) -> list[bool]:
    """Per-state almost-sure satisfaction in a finite Markov chain.

    ``succ`` is the adjacency of the chain (strategy choices already
    substituted).  A state satisfies the objective with probability 1 iff
    no reachable bottom SCC violates it.
    """
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    counter = 0
    comp_of = [-1] * n
    comps = []
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            targets = succ[v]
            while i < len(targets):
                w = targets[i]
                i += 1
                if index[w] == -1:
                    work.append((v, i))
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp_of[w] = len(comps)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
    # comps are in reverse topological order: successors of a component
    # always sit in an earlier entry.  A component is bad if it is a
    # violating bottom SCC or can reach one.
    bad = [False] * len(comps)
    for ci, comp in enumerate(comps):
        is_bottom = True
        for s in comp:
            for t in succ[s]:
                cj = comp_of[t]
                if cj != ci:
                    is_bottom = False
                    if bad[cj]:
                        bad[ci] = True
        if bad[ci]:
            continue
        if is_bottom:
            # a trivial SCC without a self-loop cannot be bottom in a
            # non-blocking game, so comp always has an internal edge here
            bad[ci] = not obj.accepts_inf(comp)
    return [not bad[comp_of[s]] for s in range(n)]


def markov_chain_almost_sure(mc: GameGraph, obj: Objective, start: int) -> bool:
    """Probability-1 satisfaction from ``start`` in a Markov chain.

    Requires every state to be probabilistic; only the supports matter.
    """
    if any(o != PROBABILISTIC for o in mc.owners):
        raise ValueError("markov_chain_almost_sure requires all states probabilistic")
    mc.require_valid()
    return _chain_verdicts(mc.n, mc.succ, obj)[start]


def oracle_solve(
    g: GameGraph, obj: Objective, player: int, bound: int = ORACLE_STATE_BOUND
) -> Region:
    """Almost-sure region by brute force; exponential, refuses games above
    ``bound`` states.

    Parity: both players are positional, so a state wins iff some pure
    memoryless strategy of ``player`` beats every pure memoryless opponent
    (the opponent's best response to a fixed memoryless strategy is an MDP
    with a parity objective, where memoryless strategies suffice).

    Rabin for the player: the Rabin side is positional, the opponent is
    not, so opponents are handled exactly instead of enumerated: under any
    opponent strategy the limit set is almost surely an end component of
    the residual MDP, hence a fixed strategy wins almost surely iff every
    reachable end component satisfies the objective.

    Streett for the player: the player may need memory; by qualitative
    determinacy the region is the complement of the states where the
    (positional) opponent can force the dual Rabin objective with positive
    probability.
    """
    g.require_valid()
    if g.n > bound:
        raise TooLarge(f"oracle limited to {bound} states, game has {g.n}")
    rel_obj = obj if player == PLAYER0 else complement(obj)
    if isinstance(rel_obj, Parity):
        opponent = 1 - player
        mine = [s for s in range(g.n) if g.owners[s] == player]
        theirs = [s for s in range(g.n) if g.owners[s] == opponent]
        base = list(g.succ)
        winning = set()
        for my_pick in itertools.product(*(g.succ[s] for s in mine)):
            succ = base[:]
            for s, t in zip(mine, my_pick):
                succ[s] = (t,)
            ok = set(range(g.n)) - winning
            for their_pick in itertools.product(*(g.succ[s] for s in theirs)):
                chain = succ[:]
                for s, t in zip(theirs, their_pick):
                    chain[s] = (t,)
                verdict = _chain_verdicts(g.n, chain, rel_obj)
                ok = {s for s in ok if verdict[s]}
                if not ok:
                    break
            winning.update(ok)
        return Region(frozenset(winning), player, "almost-sure")
    if isinstance(rel_obj, Rabin):
        return Region(_oracle_rabin_side(g, player, rel_obj), player, "almost-sure")
    positive = _oracle_positive_rabin(g, 1 - player, complement(rel_obj))
    return Region(
        frozenset(range(g.n)) - positive, player, "almost-sure"
    )


def _forced_succ(g, fixed):
    return [(fixed[s],) if s in fixed else g.succ[s] for s in range(g.n)]


def _strongly_connected(states, edges):
    start = next(iter(states))
    for direction in (edges, _reverse(states, edges)):
        seen = {start}
        stack = [start]
        while stack:
            for t in direction[stack.pop()]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        if seen != states:
            return False
    return True


def _reverse(states, edges):
    rev = {s: [] for s in states}
    for s, targets in edges.items():
        for t in targets:
            rev[t].append(s)
    return rev


def _end_components(n, succ, free):
    """All end components: ``free`` states pick among their edges, the rest
    must keep their whole successor set inside."""
    out = []
    for mask in range(1, 1 << n):
        states = {s for s in range(n) if mask >> s & 1}
        edges = {}
        ok = True
        for s in states:
            inside = [t for t in succ[s] if t in states]
            if free[s]:
                if not inside:
                    ok = False
                    break
            elif len(inside) != len(succ[s]):
                ok = False
                break
            edges[s] = inside
        if ok and _strongly_connected(states, edges):
            out.append(frozenset(states))
    return out


def _can_reach(n, succ, targets):
    reach = set(targets)
    changed = True
    while changed:
        changed = False
        for s in range(n):
            if s not in reach and any(t in reach for t in succ[s]):
                reach.add(s)
                changed = True
    return reach


def _oracle_rabin_side(g, player, rabin):
    """States where some memoryless strategy of the Rabin player defeats
    every opponent strategy (memoryful included) with probability 1."""
    n = g.n
    mine = [s for s in range(n) if g.owners[s] == player]
    free = [g.owners[s] == 1 - player for s in range(n)]
    winning = set()
    for picks in itertools.product(*(g.succ[s] for s in mine)):
        succ = _forced_succ(g, dict(zip(mine, picks)))
        bad = set()
        for comp in _end_components(n, succ, free):
            if not rabin.accepts_inf(comp):
                bad.update(comp)
        doomed = _can_reach(n, succ, bad)
        winning.update(set(range(n)) - doomed)
    return frozenset(winning)


def _oracle_positive_rabin(g, player, rabin):
    """States where some memoryless strategy of the Rabin player keeps the
    violation probability of every opposing strategy above zero."""
    n = g.n
    mine = [s for s in range(n) if g.owners[s] == player]
    free = [g.owners[s] == 1 - player for s in range(n)]
    streett = complement(rabin)
    positive = set()
    for picks in itertools.product(*(g.succ[s] for s in mine)):
        succ = _forced_succ(g, dict(zip(mine, picks)))
        safe = _mdp_almost_sure_region(n, succ, free, streett)
        positive.update(set(range(n)) - safe)
    return frozenset(positive)


def _mdp_almost_sure_region(n, succ, free, obj):
    """Almost-sure region of the controller (the ``free`` states) in an MDP:
    the largest set from which good end components are reached almost
    surely while staying inside."""
    region = set(range(n))
    while True:
        good = set()
        for comp in _end_components(n, succ, free):
            if comp <= region and obj.accepts_inf(comp):
                good.update(comp)
        smaller = _almost_sure_reach_inside(n, succ, free, region, good)
        if smaller == region:
            return region
        region = smaller


def _almost_sure_reach_inside(n, succ, free, region, targets):
    current = set(region)
    while True:
        closed = set()
        for s in current:
            inside = [t for t in succ[s] if t in current]
            if free[s]:
                if inside:
                    closed.add(s)
            elif len(inside) == len(succ[s]):
                closed.add(s)
        reach = set(targets & closed)
        changed = True
        while changed:
            changed = False
            for s in closed - reach:
                if any(t in reach for t in succ[s] if t in closed):
                    reach.add(s)
                    changed = True
        if reach == current:
            return current
        current = reach


def _almost_sure_parity(
    g: GameGraph, obj: Parity, backend: Optional[str] = None
) -> tuple[Region, Strategy]:
    """Player-0 almost-sure region and strategy of a 2.5-player parity game."""
    red = reduce_stochastic_parity(g, obj)
    w0, _, s0, _ = zielonka_solve(red.game, red.parity, backend=backend)
    if red.kind == "identity":
        return Region(w0.states, PLAYER0, "almost-sure"), s0
    region = frozenset(
        orig for orig, copy in red.copy_map.items() if copy in w0.states
    )
    required = [s for s in region if g.owners[s] == PLAYER0]
    strategy = pullback_strategy(red, s0, require=required)
    return Region(region, PLAYER0, "almost-sure"), strategy


def almost_sure_solve(
    g: GameGraph, obj: Objective, player: int, backend: Optional[str] = None
) -> tuple[Region, Strategy]:
    """Almost-sure winning region and witness strategy for ``player``.

    Rabin/Streett objectives go through the latest-appearance-record
    product first; the resulting stochastic parity game is reduced to a
    2-player parity game and solved.  Player 1 is solved on the dual game.
    """
    g.require_valid()
    if isinstance(obj, (Streett, Rabin)):
        lar = lar_reduce(g, obj)
        inner_region, inner_strategy = almost_sure_solve(
            lar.game, lar.parity, player, backend=backend
        )
        region = frozenset(
            orig for orig, copy in lar.copy_map.items() if copy in inner_region.states
        )
        strategy = pullback_strategy(lar, inner_strategy)
        return Region(region, player, "almost-sure"), strategy
    _check_parity(g, obj)
    if player == PLAYER0:
        return _almost_sure_parity(g, obj, backend=backend)
    if player != PLAYER1:
        raise ValueError(f"player must be 0 or 1, got {player}")
    gd, objd = dual_game(g, obj)
    region, strategy = _almost_sure_parity(gd, objd, backend=backend)
    return (
        Region(region.states, PLAYER1, "almost-sure"),
        Strategy(
            player=PLAYER1,
            memory_initial=strategy.memory_initial,
            choices=strategy.choices,
            updates=strategy.updates,
        ),
    )
