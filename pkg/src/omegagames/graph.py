"""Turn-based probabilistic game graphs and the basic graph fixpoints.

A game graph partitions its states between player 0, player 1 and
probabilistic states.  Probabilistic states carry a distribution whose
support must coincide with their outgoing edges; every solver in this
package reads only the support, never the weights, so qualitative results
are independent of the exact probabilities.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from . import _kernels
from .errors import DeadEndCreated, InvalidGame, RandomSupportBroken
from .strategies import Strategy

PLAYER0 = 0
PLAYER1 = 1
PROBABILISTIC = 2

EXISTENTIAL = "existential"
UNIVERSAL = "universal"


@dataclass(frozen=True)
class Violation:
    """One broken game invariant, naming the offending state/edge."""

    rule: str
    state: Optional[int]
    detail: str

    def __str__(self):
        where = f" at state {self.state}" if self.state is not None else ""
        return f"{self.rule}{where}: {self.detail}"


@dataclass(frozen=True)
class GameGraph:
    """Immutable turn-based probabilistic game graph.

    States are dense indices 0..n-1.  ``succ`` holds the ordered adjacency
    list of each state; ``dists`` maps each probabilistic state to its
    ``(target, weight)`` list, whose targets must equal the state's edges.
    """

    owners: tuple[int, ...]
    succ: tuple[tuple[int, ...], ...]
    dists: Mapping[int, tuple[tuple[int, Fraction], ...]] = field(default_factory=dict)
    labels: tuple[Optional[str], ...] = ()
    initial: Optional[int] = None

    @property
    def n(self) -> int:
        return len(self.owners)

    @property
    def edge_count(self) -> int:
        return sum(len(ss) for ss in self.succ)

    def owner(self, s: int) -> int:
        return self.owners[s]

    def successors(self, s: int) -> tuple[int, ...]:
        return self.succ[s]

    def label(self, s: int) -> Optional[str]:
        return self.labels[s] if self.labels else None

    def support(self, s: int) -> tuple[int, ...]:
        """Targets of the distribution of a probabilistic state."""
        return tuple(t for t, _ in self.dists[s])

    def weights(self, s: int) -> tuple[Fraction, ...]:
        return tuple(w for _, w in self.dists[s])

    @property
    def probabilistic_states(self) -> tuple[int, ...]:
        return tuple(s for s in range(self.n) if self.owners[s] == PROBABILISTIC)

    @property
    def is_two_player(self) -> bool:
        return all(o != PROBABILISTIC for o in self.owners)

    @cached_property
    def violations(self) -> tuple[Violation, ...]:
        return tuple(validate_game(self))

    def require_valid(self):
        if self.violations:
            raise InvalidGame(self.violations)
        return self

    @cached_property
    def flat(self) -> "_Flat":
        return _flatten(self)

    def with_successors(self, succ: Sequence[Sequence[int]]) -> "GameGraph":
        """Copy of this game with a replaced adjacency structure."""
        return GameGraph(
            owners=self.owners,
            succ=tuple(tuple(ss) for ss in succ),
            dists=dict(self.dists),
            labels=self.labels,
            initial=self.initial,
        )

    def __str__(self):
        kind = "2-player" if self.is_two_player else "2.5-player"
        init = "-" if self.initial is None else self.initial
        return f"{kind} game: {self.n} states, {self.edge_count} edges, initial={init}"


class _Flat:
    """CSR view of a game graph shared by both fixpoint kernels."""

    __slots__ = ("n", "owners", "succ_ptr", "succ", "pred_ptr", "pred")

    def __init__(self, n, owners, succ_ptr, succ, pred_ptr, pred):
        self.n = n
        self.owners = owners
        self.succ_ptr = succ_ptr
        self.succ = succ
        self.pred_ptr = pred_ptr
        self.pred = pred


def _flatten(g: GameGraph) -> _Flat:
    n = g.n
    owners = list(g.owners)
    succ_ptr = [0] * (n + 1)
    succ = []
    for s in range(n):
        succ.extend(g.succ[s])
        succ_ptr[s + 1] = len(succ)
    indeg = [0] * n
    for t in succ:
        indeg[t] += 1
    pred_ptr = [0] * (n + 1)
    for s in range(n):
        pred_ptr[s + 1] = pred_ptr[s] + indeg[s]
    fill = list(pred_ptr)
    pred = [0] * len(succ)
    for s in range(n):
        for t in g.succ[s]:
            pred[fill[t]] = s
            fill[t] += 1
    return _Flat(n, owners, succ_ptr, succ, pred_ptr, pred)


def build_game(
    states: Sequence,
    initial: Optional[int] = None,
    weights: Optional[Mapping[int, Sequence]] = None,
) -> GameGraph:
    """Construct a game from ``(owner, successors[, label])`` tuples.

    Probabilistic states get a uniform distribution over their successors
    unless explicit ``weights`` (parallel to the successor list) are given.
    """
    owners = []
    succ = []
    labels = []
    for entry in states:
        if len(entry) == 3:
            owner, targets, label = entry
        else:
            owner, targets = entry
            label = None
        owners.append(owner)
        succ.append(tuple(targets))
        labels.append(label)
    dists = {}
    for s, owner in enumerate(owners):
        if owner != PROBABILISTIC:
            continue
        targets = succ[s]
        if weights and s in weights:
            ws = [Fraction(w) for w in weights[s]]
        else:
            ws = [Fraction(1, len(targets))] * len(targets) if targets else []
        dists[s] = tuple(zip(targets, ws))
    return GameGraph(
        owners=tuple(owners),
        succ=tuple(succ),
        dists=dists,
        labels=tuple(labels),
        initial=initial,
    )


def validate_game(g: GameGraph) -> list[Violation]:
    """Collect every invariant violation of ``g`` (empty list means valid)."""
    out = []
    n = g.n
    for s in range(n):
        targets = g.succ[s]
        if not targets:
            out.append(Violation("dead-end", s, "state has no outgoing edge"))
        seen = set()
        for t in targets:
            if not (0 <= t < n):
                out.append(Violation("bad-target", s, f"edge target {t} out of range"))
            elif t in seen:
                out.append(Violation("duplicate-edge", s, f"duplicate edge target {t}"))
            seen.add(t)
    for s in range(n):
        owner = g.owners[s]
        if owner == PROBABILISTIC:
            if s not in g.dists:
                out.append(Violation("distribution-missing", s, "probabilistic state has no distribution"))
                continue
            dist = g.dists[s]
            for t, w in dist:
                if w <= 0:
                    out.append(Violation("weight-not-positive", s, f"weight {w} on target {t}"))
            support = [t for t, _ in dist]
            if sorted(support) != sorted(set(support)):
                out.append(Violation("support-duplicate", s, "distribution lists a target twice"))
            if set(support) != set(g.succ[s]):
                extra = set(support) - set(g.succ[s])
                missing = set(g.succ[s]) - set(support)
                out.append(
                    Violation(
                        "support-mismatch",
                        s,
                        "distribution support must equal the edge set "
                        f"(weight on non-edges: {sorted(extra)}, edges without weight: {sorted(missing)})",
                    )
                )
        elif owner in (PLAYER0, PLAYER1):
            if s in g.dists:
                out.append(Violation("unexpected-distribution", s, "non-probabilistic state carries a distribution"))
        else:
            out.append(Violation("bad-owner", s, f"unknown owner {owner}"))
    if g.initial is not None and not (0 <= g.initial < n):
        out.append(Violation("bad-initial", None, f"initial state {g.initial} out of range"))
    return out


def subgame(g: GameGraph, keep: Iterable[int]) -> tuple[GameGraph, dict[int, int]]:
    """Induced game on ``keep``, plus the old-index -> new-index map.

    Raises ``DeadEndCreated`` if a kept state loses all successors and
    ``RandomSupportBroken`` if a probabilistic state loses part of its
    support (probabilistic states must be kept with all their successors).
    """
    kept = sorted(set(keep))
    index = {s: i for i, s in enumerate(kept)}
    kept_set = set(kept)
    states = []
    weights = {}
    for s in kept:
        if g.owners[s] == PROBABILISTIC:
            lost = [t for t in g.succ[s] if t not in kept_set]
            if lost:
                raise RandomSupportBroken(
                    f"probabilistic state {s} loses successors {lost}"
                )
        targets = [index[t] for t in g.succ[s] if t in kept_set]
        if not targets:
            raise DeadEndCreated(f"state {s} has no successor inside the kept set")
        states.append((g.owners[s], targets, g.label(s)))
        if g.owners[s] == PROBABILISTIC:
            weights[index[s]] = [w for t, w in g.dists[s]]
    new_initial = index.get(g.initial) if g.initial is not None else None
    return build_game(states, initial=new_initial, weights=weights), index


def attractor(
    g: GameGraph,
    player: int,
    target: Iterable[int],
    random_mode: Optional[str] = None,
) -> tuple[frozenset[int], Strategy]:
    """Least set from which ``player`` can force reaching ``target``.

    Probabilistic states join the attractor when some (``EXISTENTIAL``) or
    all (``UNIVERSAL``) of their successors are already in it; the mode is
    mandatory for games with probabilistic states.  The returned memoryless
    strategy sends every attracted state of ``player`` one BFS rank closer
    to the target.
    """
    if player not in (PLAYER0, PLAYER1):
        raise ValueError(f"player must be 0 or 1, got {player}")
    targets = sorted(set(target))
    for t in targets:
        if not (0 <= t < g.n):
            raise ValueError(f"target state {t} out of range")
    if not g.is_two_player and random_mode not in (EXISTENTIAL, UNIVERSAL):
        raise ValueError("random_mode is required for games with probabilistic states")
    exist = (
        player == PLAYER0,
        player == PLAYER1,
        random_mode == EXISTENTIAL,
    )
    flat = g.flat
    alive = [1] * g.n
    live = [len(g.succ[s]) for s in range(g.n)]
    backend = _kernels.backend()
    order, choice = backend.attract(
        flat.n, flat.owners, flat.succ_ptr, flat.succ, flat.pred_ptr, flat.pred,
        alive, live, targets, exist,
    )
    region = frozenset(order)
    target_set = set(targets)
    choices = {
        s: choice[s]
        for s in order
        if s not in target_set and g.owners[s] == player and choice[s] >= 0
    }
    return region, Strategy.memoryless(player, choices)


@dataclass(frozen=True)
class Scc:
    """A strongly connected component; ``nontrivial`` iff it has an internal edge."""

    states: tuple[int, ...]
    nontrivial: bool


def scc_decompose(g: GameGraph, mask: Optional[Sequence[bool]] = None) -> list[Scc]:
    """Maximal SCCs in reverse topological order (successors first).

    ``mask``, when given, restricts the decomposition to the induced
    subgraph on the states where it is true.
    """
    n = g.n
    succ = g.succ
    if mask is None:
        enabled = [True] * n
    else:
        enabled = list(mask)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    sccs = []
    counter = 0
    for root in range(n):
        if not enabled[root] or index[root] != -1:
            continue
        # Explicit DFS stack: (state, iterator position into succ[state]).
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
                if not enabled[w]:
                    continue
                if index[w] == -1:
                    work.append((v, i))
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    if index[w] < low[v]:
                        low[v] = index[w]
            if advanced:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comp.sort()
                comp_set = set(comp)
                nontrivial = any(
                    t in comp_set for s in comp for t in succ[s] if enabled[t]
                )
                sccs.append(Scc(tuple(comp), nontrivial))
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
    return sccs
