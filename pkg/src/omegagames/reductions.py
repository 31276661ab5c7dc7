"""Reductions between game classes.

* stochastic parity -> 2-player parity, via an announce/accept/challenge
  gadget replacing each probabilistic state;
* Rabin/Streett -> parity, via a latest-appearance-record product over
  state colors (works for 2- and 2.5-player games alike, since the record
  is deterministic memory);
* the dual game (owners swapped, objective complemented) used to solve for
  player 1 with the player-0 pipeline.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .errors import NoPairs, UndefinedOnRegion
from .graph import PLAYER0, PLAYER1, PROBABILISTIC, GameGraph, build_game
from .objectives import Parity, Rabin, Streett
from .strategies import Strategy


@dataclass(frozen=True)
class ReductionResult:
    """A reduced game plus the bookkeeping to map answers back.

    ``origin_map`` sends reduced states to the original state they stand
    for: for gadget reductions it is defined exactly on the copies of
    original states, for record products it projects every product state to
    its first component.  ``copy_map`` points each original state at its
    distinguished copy.  ``memory_map`` (record products only) holds the
    record attached to each product state.
    """

    source: GameGraph
    game: GameGraph
    parity: Parity
    origin_map: Mapping[int, int]
    copy_map: Mapping[int, int]
    memory_map: Optional[Mapping[int, tuple]] = None
    kind: str = "identity"


def even_ceiling(value: int) -> int:
    """Smallest even number >= value."""
    return value if value % 2 == 0 else value + 1


def reduce_stochastic_parity(g: GameGraph, obj: Parity) -> ReductionResult:
    """2-player parity game preserving player 0's almost-sure region.

    Each probabilistic state ``s`` becomes an announcement state (player 0,
    priority of ``s``) from which an even value e <= E* is claimed as the
    recurring minimum.  Player 1 then either accepts the claim (priority e,
    player 1 picks the successor) or challenges it (priority e+1, player 0
    must pick).  Deterministic states are copied verbatim; announcement
    states reuse the index of the state they replace, so copies of original
    states are exactly the indices below ``g.n``.
    """
    g.require_valid()
    if len(obj.priorities) != g.n:
        raise ValueError("objective does not match the game")
    identity = {s: s for s in range(g.n)}
    prob = [s for s in range(g.n) if g.owners[s] == PROBABILISTIC]
    if not prob:
        return ReductionResult(g, g, obj, identity, identity, kind="identity")
    estar = even_ceiling(obj.max_priority)
    neutral = estar + 2
    evens = list(range(0, estar + 1, 2))
    states = []
    prios = []
    for s in range(g.n):
        if g.owners[s] == PROBABILISTIC:
            states.append([PLAYER0, [], g.label(s)])  # announcement; edges below
        else:
            states.append([g.owners[s], list(g.succ[s]), g.label(s)])
        prios.append(obj.priorities[s])
    for s in prob:
        support = list(g.support(s))
        for e in evens:
            decide = len(states)
            states.append([PLAYER1, [decide + 1, decide + 2], None])
            prios.append(neutral)
            states.append([PLAYER1, support, None])  # accept: adversary moves
            prios.append(e)
            states.append([PLAYER0, support, None])  # challenge: announcer moves
            prios.append(e + 1)
            states[s][1].append(decide)
    reduced = build_game([tuple(st) for st in states], initial=g.initial)
    return ReductionResult(
        g, reduced, Parity(tuple(prios)), identity, identity, kind="gadget"
    )


def dual_game(g: GameGraph, obj: Parity) -> tuple[GameGraph, Parity]:
    """Owners swapped and every priority shifted up by 1 (parity complement)."""
    swap = {PLAYER0: PLAYER1, PLAYER1: PLAYER0, PROBABILISTIC: PROBABILISTIC}
    dual = GameGraph(
        owners=tuple(swap[o] for o in g.owners),
        succ=g.succ,
        dists=dict(g.dists),
        labels=g.labels,
        initial=g.initial,
    )
    return dual, Parity(tuple(p + 1 for p in obj.priorities), count=obj.count + 1)


def _state_colors(g: GameGraph, pairs) -> list[int]:
    """Bit vector of Q/R memberships per state (bit 2i: Q_i, bit 2i+1: R_i)."""
    colors = [0] * g.n
    for i, (q, r) in enumerate(pairs):
        for s in q:
            colors[s] |= 1 << (2 * i)
        for s in r:
            colors[s] |= 1 << (2 * i + 1)
    return colors


def _front_satisfies(front_mask: int, npairs: int, rabin: bool) -> bool:
    for i in range(npairs):
        hit_q = front_mask & (1 << (2 * i))
        hit_r = front_mask & (1 << (2 * i + 1))
        if rabin:
            if hit_q and not hit_r:
                return True
        elif hit_q and not hit_r:
            return False
    return not rabin


def lar_reduce(g: GameGraph, obj: Streett | Rabin) -> ReductionResult:
    """Parity game from a Rabin/Streett game via a latest-appearance record.

    The record is a permutation of the colors occurring in the game; the
    visited state's color moves to the front, and a hit at position h emits
    2h when the first h colors jointly satisfy the pair condition, 2h+1
    otherwise.  That max-even reading is flipped into the global min-even
    convention.  A product state pairs a game state with the record
    *before* its color is applied; the distinguished copies
    (state, initial record) occupy indices 0..n-1.
    """
    if not isinstance(obj, (Streett, Rabin)):
        raise TypeError(f"Rabin or Streett objective required, got {obj!r}")
    if not obj.pairs:
        raise NoPairs("objective has no request/response pairs")
    g.require_valid()
    rabin = isinstance(obj, Rabin)
    npairs = len(obj.pairs)
    colors = _state_colors(g, obj.pairs)
    r_init = tuple(sorted(set(colors)))
    flip_base = 2 * len(r_init) + 2  # even, above every record priority

    index: dict[tuple[int, tuple], int] = {}
    order: list[tuple[int, tuple]] = []

    def intern(s, rec):
        key = (s, rec)
        got = index.get(key)
        if got is None:
            got = len(order)
            index[key] = got
            order.append(key)
        return got

    for s in range(g.n):
        intern(s, r_init)
    succ_out: list[list[int]] = []
    prios: list[int] = []
    qi = 0
    while qi < len(order):
        s, rec = order[qi]
        qi += 1
        color = colors[s]
        h = rec.index(color) + 1
        moved = (color,) + tuple(c for c in rec if c != color)
        front = 0
        for c in moved[:h]:
            front |= c
        lar_priority = 2 * h if _front_satisfies(front, npairs, rabin) else 2 * h + 1
        prios.append(flip_base - lar_priority)
        succ_out.append([intern(t, moved) for t in g.succ[s]])

    states = []
    weights = {}
    for idx, (s, _rec) in enumerate(order):
        states.append((g.owners[s], succ_out[idx], g.label(s)))
        if g.owners[s] == PROBABILISTIC:
            weights[idx] = [w for _t, w in g.dists[s]]
    product = build_game(states, initial=g.initial, weights=weights)
    origin = {idx: s for idx, (s, _rec) in enumerate(order)}
    copy_map = {s: s for s in range(g.n)}
    memory = {idx: rec for idx, (_s, rec) in enumerate(order)}
    return ReductionResult(
        g, product, Parity(tuple(prios)), origin, copy_map, memory_map=memory, kind="lar"
    )


def lift_lasso(res: ReductionResult, lasso) -> "Lasso":
    """Image of an original-game lasso in a record product.

    The record memory is deterministic, so an ultimately periodic play maps
    to an ultimately periodic product play; the product cycle is found by
    walking the cycle until a (cycle position, product state) pair repeats.
    """
    from .objectives import Lasso

    if res.kind == "identity":
        return Lasso(tuple(lasso.stem), tuple(lasso.cycle))
    if res.kind != "lar":
        raise ValueError("lassos lift through record products only")
    origin = res.origin_map

    def step(idx, t):
        for j in res.game.succ[idx]:
            if origin[j] == t:
                return j
        raise ValueError(
            f"({origin[idx]}, {t}) is not an edge of the original game"
        )

    stem, cycle = list(lasso.stem), list(lasso.cycle)
    if stem:
        cur = res.copy_map[stem[0]]
        prod_stem = [cur]
        for t in stem[1:]:
            cur = step(cur, t)
            prod_stem.append(cur)
        cur = step(cur, cycle[0])
    else:
        cur = res.copy_map[cycle[0]]
        prod_stem = []
    # cur sits at cycle position 0; loop until a (position, state) repeats
    seen = {}
    trail = []
    pos = 0
    while (pos, cur) not in seen:
        seen[(pos, cur)] = len(trail)
        trail.append(cur)
        cur = step(cur, cycle[(pos + 1) % len(cycle)])
        pos = (pos + 1) % len(cycle)
    start = seen[(pos, cur)]
    return Lasso(tuple(prod_stem + trail[:start]), tuple(trail[start:]))


def pullback_strategy(
    res: ReductionResult,
    reduced_strategy: Strategy,
    require: Optional[Iterable[int]] = None,
) -> Strategy:
    """Carry a memoryless strategy on the reduced game back to the original.

    Gadget reductions keep original owned states verbatim, so their choices
    transfer and gadget-internal choices are dropped.  Record products turn
    into a finite-memory strategy whose memory is the record automaton.
    ``require`` lists original states that must end up with a choice;
    missing ones raise ``UndefinedOnRegion``.
    """
    if not reduced_strategy.is_memoryless:
        raise ValueError("pullback expects a memoryless strategy on the reduced game")
    player = reduced_strategy.player
    source = res.source
    if res.kind in ("identity", "gadget"):
        choices = {}
        for orig, copy in res.copy_map.items():
            if source.owners[orig] != player:
                continue  # announcement states are player 0's but not the player's
            t = reduced_strategy.choice(copy)
            if t is not None:
                choices[orig] = res.origin_map.get(t, t)
        out = Strategy.memoryless(player, choices)
    elif res.kind == "lar":
        origin = res.origin_map
        memory = res.memory_map
        choices = {}
        updates = {}
        for idx in range(res.game.n):
            s = origin[idx]
            rec = memory[idx]
            succ = res.game.succ[idx]
            if succ:
                updates[(rec, s)] = memory[succ[0]]
            if source.owners[s] != player:
                continue
            t = reduced_strategy.choice(idx)
            if t is not None:
                choices[(rec, s)] = origin[t]
        r_init = memory[res.copy_map[0]] if res.copy_map else ()
        out = Strategy(
            player=player,
            memory_initial=r_init,
            choices=choices,
            updates=updates,
        )
    else:
        raise ValueError(f"unknown reduction kind {res.kind!r}")
    if require is not None:
        covered = {state for _m, state in out.choices}
        missing = sorted(s for s in require if s not in covered)
        if missing:
            raise UndefinedOnRegion(
                f"reduced strategy leaves original states {missing} without a choice"
            )
    return out
