"""Specification automata over input/output propositions.

Letters are valuations: an input letter is an integer whose bit k is the
truth value of the k-th declared input proposition (same for outputs), and
a full letter combines one of each.  The deterministic parity automaton is
the synthesis input; the Streett automaton is the export format for
computed environment assumptions.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .errors import IncompleteAutomaton


@dataclass(frozen=True)
class PropAlphabet:
    """Declared input (environment) and output (system) propositions."""

    inputs: tuple[str, ...]
    outputs: tuple[str, ...]

    def __post_init__(self):
        names = list(self.inputs) + list(self.outputs)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate proposition names in {names}")

    @property
    def n_inputs(self) -> int:
        return 1 << len(self.inputs)

    @property
    def n_outputs(self) -> int:
        return 1 << len(self.outputs)

    @property
    def n_letters(self) -> int:
        return self.n_inputs * self.n_outputs

    def letter(self, i: int, o: int) -> int:
        return i * self.n_outputs + o

    def split(self, letter: int) -> tuple[int, int]:
        return divmod(letter, self.n_outputs)

    def _format(self, props, bits) -> str:
        if not props:
            return "T"
        parts = []
        for k, name in enumerate(props):
            parts.append(name if bits & (1 << k) else f"¬{name}")
        return " ∧ ".join(parts)

    def format_input(self, i: int) -> str:
        return self._format(self.inputs, i)

    def format_output(self, o: int) -> str:
        return self._format(self.outputs, o)

    def format_letter(self, letter: int) -> str:
        i, o = self.split(letter)
        if not self.inputs:
            return self.format_output(o)
        if not self.outputs:
            return self.format_input(i)
        return f"{self.format_input(i)} ∧ {self.format_output(o)}"

    def literals(self, letter: int) -> frozenset[tuple[str, bool]]:
        """The full valuation as (prop, value) literals."""
        i, o = self.split(letter)
        lits = {(name, bool(i & (1 << k))) for k, name in enumerate(self.inputs)}
        lits |= {(name, bool(o & (1 << k))) for k, name in enumerate(self.outputs)}
        return frozenset(lits)


def _loop_states(n, step, start):
    """States visited infinitely often when iterating ``step`` from ``start``.

    ``step(q)`` returns (visited states, landing state) for one round.
    """
    seen = {}
    trail = []
    q = start
    while q not in seen:
        seen[q] = len(trail)
        visited, q = step(q)
        trail.append(visited)
    inf = set()
    for visited in trail[seen[q]:]:
        inf.update(visited)
    return inf


@dataclass(frozen=True)
class DetParityAutomaton:
    """Complete deterministic parity automaton over full letters (min-even)."""

    alphabet: PropAlphabet
    priorities: tuple[int, ...]
    initial: int
    delta: tuple[tuple[int, ...], ...]  # delta[state][letter]
    labels: tuple[Optional[str], ...] = ()

    @property
    def n(self) -> int:
        return len(self.priorities)

    def step(self, q: int, i: int, o: int) -> int:
        return self.delta[q][self.alphabet.letter(i, o)]

    @classmethod
    def from_table(
        cls,
        alphabet: PropAlphabet,
        n: int,
        initial: int,
        priorities: Sequence[int],
        table: Mapping[tuple[int, int], int],
        complete: bool = False,
        labels: Optional[Sequence[Optional[str]]] = None,
    ) -> "DetParityAutomaton":
        """Build from a (state, letter) -> state map.

        Missing entries raise ``IncompleteAutomaton`` unless ``complete`` is
        set, in which case they are routed to a rejecting sink of priority 1
        (undefined behavior counts against the specification).
        """
        missing = [
            (q, letter)
            for q in range(n)
            for letter in range(alphabet.n_letters)
            if (q, letter) not in table
        ]
        priorities = list(priorities)
        labels = list(labels) if labels is not None else [None] * n
        rows = [[table.get((q, letter)) for letter in range(alphabet.n_letters)] for q in range(n)]
        if missing:
            if not complete:
                q, letter = missing[0]
                raise IncompleteAutomaton(
                    f"state {q} has no transition on {alphabet.format_letter(letter)}"
                )
            sink = n
            rows.append([sink] * alphabet.n_letters)
            priorities.append(1)
            labels.append("reject-sink")
            for q, letter in missing:
                rows[q][letter] = sink
        return cls(
            alphabet=alphabet,
            priorities=tuple(priorities),
            initial=initial,
            delta=tuple(tuple(row) for row in rows),
            labels=tuple(labels),
        )

    def run(self, letters: Sequence[int], start: Optional[int] = None) -> int:
        q = self.initial if start is None else start
        for letter in letters:
            q = self.delta[q][letter]
        return q

    def accepts_lasso(self, stem: Sequence[int], cycle: Sequence[int]) -> bool:
        """Acceptance of the ultimately periodic word stem cycle^w."""
        if not cycle:
            raise ValueError("lasso cycle must be nonempty")
        start = self.run(stem)

        def one_round(q):
            visited = []
            for letter in cycle:
                q = self.delta[q][letter]
                visited.append(q)
            return visited, q

        inf = _loop_states(self.n, one_round, start)
        return min(self.priorities[q] for q in inf) % 2 == 0


@dataclass(frozen=True)
class StreettAutomaton:
    """Complete deterministic automaton with state-based Streett acceptance."""

    alphabet: PropAlphabet
    n: int
    initial: int
    delta: tuple[tuple[int, ...], ...]
    pairs: tuple[tuple[frozenset[int], frozenset[int]], ...]
    labels: tuple[Optional[str], ...] = ()

    def run(self, letters: Sequence[int], start: Optional[int] = None) -> int:
        q = self.initial if start is None else start
        for letter in letters:
            q = self.delta[q][letter]
        return q

    def accepts_lasso(self, stem: Sequence[int], cycle: Sequence[int]) -> bool:
        if not cycle:
            raise ValueError("lasso cycle must be nonempty")
        start = self.run(stem)

        def one_round(q):
            visited = []
            for letter in cycle:
                q = self.delta[q][letter]
                visited.append(q)
            return visited, q

        inf = _loop_states(self.n, one_round, start)
        return all(not (inf & q) or (inf & r) for q, r in self.pairs)
