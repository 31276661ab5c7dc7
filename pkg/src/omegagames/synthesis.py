"""Synthesis pipeline: realizability, environment assumptions, transducers.

A deterministic parity automaton over input/output propositions is split
into a synthesis game (environment picks the input letter, system answers
with an output letter).  When the game is lost, a minimal set of forbidden
environment edges (safety assumption) and a locally minimal set of fair
environment edges (strong transition fairness, checked through a
2.5-player game) repair the specification; the result is exported as a
Streett automaton, and a winning strategy yields the implementing Mealy
machine.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .automata import DetParityAutomaton, PropAlphabet, StreettAutomaton
from .errors import (
    EnvDeadlocked,
    NoFairnessAssumptionExists,
    NotEnvEdge,
    SpecUnsatisfiable,
    StrategyIncomplete,
)
from .graph import PLAYER0, PLAYER1, PROBABILISTIC, GameGraph, build_game
from .objectives import Parity
from .solve import almost_sure_solve, cooperative_region, zielonka_solve
from .strategies import Strategy

EnvEdge = tuple[int, int]  # (environment state, input letter)


@dataclass(frozen=True)
class SynthesisGame:
    """The split game of a specification automaton.

    States 0..n_env-1 are the environment copies of the automaton states
    (player 1); state ``n_env + q * n_inputs + i`` is the system choice
    state entered when the environment plays input ``i`` at ``q``
    (player 0, neutral priority).
    """

    graph: GameGraph
    parity: Parity
    automaton: DetParityAutomaton
    neutral_priority: int

    @property
    def alphabet(self) -> PropAlphabet:
        return self.automaton.alphabet

    @property
    def n_env(self) -> int:
        return self.automaton.n

    def choice_index(self, q: int, i: int) -> int:
        return self.n_env + q * self.alphabet.n_inputs + i

    def choice_info(self, c: int) -> tuple[int, int]:
        q, i = divmod(c - self.n_env, self.alphabet.n_inputs)
        return q, i

    def is_env_state(self, s: int) -> bool:
        return s < self.n_env

    def env_successor(self, q: int, i: int, o: int) -> int:
        return self.automaton.step(q, i, o)

    def outputs_to(self, q: int, i: int, target: int) -> tuple[int, ...]:
        """Output letters moving the automaton from q to ``target`` under i."""
        return tuple(
            o
            for o in range(self.alphabet.n_outputs)
            if self.automaton.step(q, i, o) == target
        )

    def env_edges(self) -> list[EnvEdge]:
        """Environment edges present in the (possibly pruned) game."""
        out = []
        for q in range(self.n_env):
            for c in self.graph.succ[q]:
                out.append((q, self.choice_info(c)[1]))
        return out

    def edge_endpoints(self, edge: EnvEdge) -> tuple[int, int]:
        q, i = edge
        return q, self.choice_index(q, i)

    def describe_edge(self, edge: EnvEdge) -> str:
        q, i = edge
        return f"({q},{self.choice_index(q, i)}) on {self.alphabet.format_input(i)}"

    def remove_env_edges(self, edges: Iterable[EnvEdge]) -> "SynthesisGame":
        """Copy of the game without the given environment edges.

        Pruning an unreachable environment state down to zero moves keeps
        its original edges instead (the game must stay non-blocking and the
        state is semantically invisible); emptying a reachable one raises
        ``EnvDeadlocked``.
        """
        drop = set(edges)
        if not drop:
            return self
        g = self.graph
        succ = [list(ss) for ss in g.succ]
        emptied = []
        for q in range(self.n_env):
            kept = [c for c in succ[q] if (q, self.choice_info(c)[1]) not in drop]
            if kept:
                succ[q] = kept
            else:
                emptied.append(q)
        new_graph = g.with_successors(succ)
        if emptied:
            reachable = _reachable(new_graph)
            hit = [q for q in emptied if q in reachable]
            if hit:
                raise EnvDeadlocked(
                    f"safety removal leaves reachable environment states {hit} without moves"
                )
        return SynthesisGame(new_graph, self.parity, self.automaton, self.neutral_priority)


def _reachable(g: GameGraph) -> set[int]:
    if g.initial is None:
        return set(range(g.n))
    seen = {g.initial}
    queue = [g.initial]
    while queue:
        s = queue.pop()
        for t in g.succ[s]:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


@dataclass(frozen=True)
class Assumption:
    """Forbidden environment edges plus fair environment edges."""

    safety_edges: frozenset[EnvEdge]
    fair_edges: frozenset[EnvEdge]

    def __post_init__(self):
        object.__setattr__(self, "safety_edges", frozenset(self.safety_edges))
        object.__setattr__(self, "fair_edges", frozenset(self.fair_edges))
        both = self.safety_edges & self.fair_edges
        if both:
            raise ValueError(f"edges cannot be both forbidden and fair: {sorted(both)}")

    @property
    def is_trivial(self) -> bool:
        return not self.safety_edges and not self.fair_edges

    def __str__(self):
        return (
            f"assumption safety={sorted(self.safety_edges)} "
            f"fair={sorted(self.fair_edges)}"
        )


@dataclass(frozen=True)
class FairGame:
    """A synthesis game with fairness wrappers: the 2.5-player encoding.

    Every environment state with fair outgoing edges gets a probabilistic
    wrapper that uniformly either releases the environment (back to the
    state itself) or forces one of the fair edges; all edges into the state
    are redirected to the wrapper.
    """

    graph: GameGraph
    parity: Parity
    sg: SynthesisGame
    wrapper_of: dict[int, int]  # wrapper index -> wrapped env state
    wrapped: dict[int, int]  # env state -> wrapper index


def dpa_to_synthesis_game(aut: DetParityAutomaton) -> SynthesisGame:
    """Split a specification automaton into the synthesis game.

    The environment moves first (one edge per input letter), the system
    answers (one edge per output letter, duplicate targets merged); choice
    states get a neutral priority above every automaton priority so that
    only automaton states decide acceptance.
    """
    alpha = aut.alphabet
    n_env = aut.n
    neutral = max(aut.priorities) + 1
    states = []
    for q in range(n_env):
        targets = [n_env + q * alpha.n_inputs + i for i in range(alpha.n_inputs)]
        label = aut.labels[q] if aut.labels else None
        states.append((PLAYER1, targets, label or f"q{q}"))
    prios = list(aut.priorities)
    for q in range(n_env):
        for i in range(alpha.n_inputs):
            targets = []
            for o in range(alpha.n_outputs):
                t = aut.step(q, i, o)
                if t not in targets:
                    targets.append(t)
            states.append((PLAYER0, targets, f"(q{q},{alpha.format_input(i)})"))
            prios.append(neutral)
    graph = build_game(states, initial=aut.initial)
    return SynthesisGame(graph, Parity(tuple(prios)), aut, neutral)


def check_realizability(
    sg: SynthesisGame, backend: Optional[str] = None
) -> tuple[bool, Optional[Strategy]]:
    """Whether the system wins the synthesis game from its initial state."""
    w0, _, s0, _ = zielonka_solve(sg.graph, sg.parity, backend=backend)
    if sg.graph.initial in w0.states:
        return True, s0
    return False, None


def compute_safety_assumption(
    sg: SynthesisGame, backend: Optional[str] = None
) -> tuple[Assumption, SynthesisGame]:
    """Minimal forbidden-edge set: environment edges leaving the cooperative
    winning region.  Returns the assumption and the pruned (safe) game.

    Raises ``SpecUnsatisfiable`` when even full cooperation cannot satisfy
    the specification from the initial state.
    """
    coop = cooperative_region(sg.graph, sg.parity, backend=backend).states
    if sg.graph.initial not in coop:
        raise SpecUnsatisfiable(
            "the specification cannot be satisfied even with a cooperating environment"
        )
    safety = frozenset(
        (q, i)
        for (q, i) in sg.env_edges()
        if q in coop and sg.choice_index(q, i) not in coop
    )
    safe = sg.remove_env_edges(safety)
    return Assumption(safety, frozenset()), safe


def apply_fairness(sg: SynthesisGame, fair: Iterable[EnvEdge]) -> FairGame:
    """Encode strong transition fairness probabilistically.

    For each environment state with fair edges, a uniform probabilistic
    wrapper over the state itself and the fair edges' targets intercepts
    every incoming edge (and the initial-state designation).
    """
    fair = sorted(set(fair))
    g = sg.graph
    if not fair:
        return FairGame(g, sg.parity, sg, {}, {})
    present = set(sg.env_edges())
    for edge in fair:
        if edge not in present:
            q, i = edge
            if not (0 <= q < sg.n_env) or not (0 <= i < sg.alphabet.n_inputs):
                raise NotEnvEdge(f"{edge} is not an environment edge of this game")
            raise NotEnvEdge(
                f"environment edge {sg.describe_edge(edge)} is not present in the game"
            )
    by_state: dict[int, list[int]] = {}
    for q, i in fair:
        by_state.setdefault(q, []).append(i)
    wrapped = {q: g.n + k for k, q in enumerate(sorted(by_state))}
    wrapper_of = {idx: q for q, idx in wrapped.items()}

    states = []
    prios = list(sg.parity.priorities)
    for s in range(g.n):
        targets = [wrapped.get(t, t) for t in g.succ[s]]
        states.append((g.owners[s], targets, g.label(s)))
    for q in sorted(by_state):
        targets = [q] + [sg.choice_index(q, i) for i in sorted(by_state[q])]
        states.append((PROBABILISTIC, targets, f"fair({g.label(q) or q})"))
        prios.append(sg.parity.priorities[q])
    initial = wrapped.get(g.initial, g.initial)
    graph = build_game(states, initial=initial)
    return FairGame(graph, Parity(tuple(prios)), sg, wrapper_of, wrapped)


def check_sufficiency(
    sg: SynthesisGame, asm: Assumption, backend: Optional[str] = None
) -> bool:
    """Whether the assumption makes the specification realizable: the
    initial state must win with probability 1 in the fairness-wrapped game
    after the safety edges are removed."""
    safe = sg.remove_env_edges(asm.safety_edges)
    fg = apply_fairness(safe, asm.fair_edges)
    region, _ = almost_sure_solve(fg.graph, fg.parity, PLAYER0, backend=backend)
    return fg.graph.initial in region


def minimize_fairness(sg: SynthesisGame, backend: Optional[str] = None) -> Assumption:
    """Locally minimal fairness assumption on a safety-pruned game.

    Starts from all environment edges fair and greedily drops edges in
    ascending (state, input letter) order, repeating passes until no single
    edge can be dropped.  Raises ``NoFairnessAssumptionExists`` when even
    the full edge set is insufficient.
    """
    fair = set(sg.env_edges())
    if not check_sufficiency(sg, Assumption(frozenset(), frozenset(fair)), backend=backend):
        raise NoFairnessAssumptionExists(
            "the specification stays unrealizable under full transition fairness"
        )
    changed = True
    while changed:
        changed = False
        for edge in sorted(fair):
            trial = frozenset(fair - {edge})
            if check_sufficiency(sg, Assumption(frozenset(), trial), backend=backend):
                fair.discard(edge)
                changed = True
    return Assumption(frozenset(), frozenset(fair))


def assumption_to_streett_automaton(sg: SynthesisGame, asm: Assumption) -> StreettAutomaton:
    """The assumption as a deterministic Streett automaton over full letters.

    States are the environment states plus an all-accepting sink (entered
    once the system itself leaves the cooperative region: the original
    specification premise is broken, the assumption holds vacuously), a
    rejecting sink (entered on forbidden edges) and marker copies flagging
    that a fair edge was just taken.  One Streett pair per fair edge - the
    states representing its source versus its markers - plus one pair
    sending every run through the rejecting sink to rejection.
    """
    alpha = sg.alphabet
    coop = cooperative_region(sg.graph, sg.parity).states
    fair = sorted(asm.fair_edges)
    safety = asm.safety_edges

    nodes: dict[tuple, int] = {}
    order: list[tuple] = []

    def intern(key):
        got = nodes.get(key)
        if got is None:
            got = len(order)
            nodes[key] = got
            order.append(key)
        return got

    init_env = sg.graph.initial
    start = intern(("env", init_env) if init_env in coop else ("acc",))
    delta: list[list[int]] = []
    qi = 0
    while qi < len(order):
        key = order[qi]
        qi += 1
        row = []
        if key[0] == "acc":
            row = [intern(("acc",))] * alpha.n_letters
        elif key[0] == "rej":
            row = [intern(("rej",))] * alpha.n_letters
        else:
            q = key[1] if key[0] == "env" else key[2]
            for letter in range(alpha.n_letters):
                i, o = alpha.split(letter)
                edge = (q, i)
                if edge in safety:
                    row.append(intern(("rej",)))
                    continue
                q2 = sg.env_successor(q, i, o)
                if q2 not in coop:
                    row.append(intern(("acc",)))
                elif edge in asm.fair_edges:
                    row.append(intern(("mark", edge, q2)))
                else:
                    row.append(intern(("env", q2)))
        delta.append(row)

    def represents(key, q):
        return (key[0] == "env" and key[1] == q) or (key[0] == "mark" and key[2] == q)

    pairs = []
    for edge in fair:
        src = edge[0]
        request = frozenset(idx for idx, key in enumerate(order) if represents(key, src))
        response = frozenset(
            idx for idx, key in enumerate(order) if key[0] == "mark" and key[1] == edge
        )
        pairs.append((request, response))
    rej = nodes.get(("rej",))
    if rej is not None:
        pairs.append((frozenset({rej}), frozenset()))

    labels = []
    for key in order:
        if key[0] == "env":
            labels.append(f"q{key[1]}")
        elif key[0] == "acc":
            labels.append("sink-accept")
        elif key[0] == "rej":
            labels.append("sink-reject")
        else:
            labels.append(f"q{key[2]} via fair {sg.describe_edge(key[1])}")
    return StreettAutomaton(
        alphabet=alpha,
        n=len(order),
        initial=start,
        delta=tuple(tuple(row) for row in delta),
        pairs=tuple(pairs),
        labels=tuple(labels),
    )


@dataclass(frozen=True)
class Transducer:
    """Mealy machine implementing the specification under the assumption."""

    alphabet: PropAlphabet
    initial: int
    moves: tuple[tuple[tuple[int, int], ...], ...]  # moves[state][input] = (output, next)

    @property
    def n(self) -> int:
        return len(self.moves)

    def step(self, state: int, i: int) -> tuple[int, int]:
        return self.moves[state][i]

    def run(self, inputs) -> list[int]:
        """Output letters produced on an input letter sequence."""
        q = self.initial
        out = []
        for i in inputs:
            o, q = self.moves[q][i]
            out.append(o)
        return out

    def __str__(self):
        lines = [f"transducer: {self.n} states, initial {self.initial}"]
        for s, row in enumerate(self.moves):
            for i, (o, t) in enumerate(row):
                lines.append(
                    f"  {s}: {self.alphabet.format_input(i)} / "
                    f"{self.alphabet.format_output(o)} -> {t}"
                )
        return "\n".join(lines)


def _minimize_mealy(moves, initial):
    """Merge output- and successor-equivalent states (partition refinement)."""
    n = len(moves)
    cls = {}
    by_sig = {}
    for s in range(n):
        sig = tuple(o for o, _t in moves[s])
        cls[s] = by_sig.setdefault(sig, len(by_sig))
    while True:
        by_sig = {}
        nxt = {}
        for s in range(n):
            sig = (cls[s], tuple(cls[t] for _o, t in moves[s]))
            nxt[s] = by_sig.setdefault(sig, len(by_sig))
        if len(by_sig) == len(set(cls.values())):
            cls = nxt
            break
        cls = nxt
    reps = {}
    for s in range(n):
        reps.setdefault(cls[s], s)
    remap = {c: k for k, c in enumerate(sorted(reps, key=lambda c: reps[c]))}
    out_moves = []
    for c in sorted(remap, key=remap.get):
        s = reps[c]
        out_moves.append(tuple((o, remap[cls[t]]) for o, t in moves[s]))
    return tuple(out_moves), remap[cls[initial]]


def extract_transducer(
    game: Union[SynthesisGame, FairGame], strategy: Strategy
) -> Transducer:
    """Mealy machine read off a winning strategy.

    Walks the environment states reachable under the strategy; fairness
    wrappers are transparent (they make no choices).  Inputs the assumption
    forbids get the strategy's answer when it has one and the least output
    letter otherwise.  The result is quotiented by Mealy equivalence.
    """
    if isinstance(game, FairGame):
        sg = game.sg
        graph = game.graph
        wrapper_of = game.wrapper_of
    else:
        sg = game
        graph = game.graph
        wrapper_of = {}
    alpha = sg.alphabet
    if graph.initial is None:
        raise ValueError("transducer extraction needs an initial state")
    m0 = strategy.memory_initial
    if graph.initial in wrapper_of:
        start = (wrapper_of[graph.initial], strategy.update(m0, graph.initial), True)
    else:
        start = (graph.initial, m0, True)

    index = {start: 0}
    order = [start]
    moves = []
    qi = 0
    while qi < len(order):
        q, m, live = order[qi]
        qi += 1
        m_c = strategy.update(m, q)
        row = []
        env_targets = set(graph.succ[q])
        for i in range(alpha.n_inputs):
            c = sg.choice_index(q, i)
            allowed = c in env_targets
            x = strategy.choice(c, m_c) if live else None
            if x is not None:
                q2 = wrapper_of.get(x, x)
                m_next = strategy.update(m_c, c)
                if x in wrapper_of:
                    m_next = strategy.update(m_next, x)
                o = sg.outputs_to(q, i, q2)[0]
                key = (q2, m_next, True)
            elif live and allowed:
                raise StrategyIncomplete(
                    f"no choice at state {c} ({graph.label(c)}) under memory {m_c!r}"
                )
            else:
                # input the assumption forbids (or a don't-care successor of
                # one): answer with the least output letter
                o = 0
                key = (sg.env_successor(q, i, o), m_c, False)
            if key not in index:
                index[key] = len(order)
                order.append(key)
            row.append((o, index[key]))
        moves.append(tuple(row))
    minimized, initial = _minimize_mealy(tuple(moves), 0)
    return Transducer(alphabet=alpha, initial=initial, moves=minimized)
