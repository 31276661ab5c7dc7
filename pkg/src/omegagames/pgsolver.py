"""PGSolver text-format interop for 2-player parity games.

PGSolver games are max-parity (player 0 wins when the maximum recurring
priority is even), so priorities are flipped through p' = E* - p with E*
the smallest even number at or above the maximum priority; the flip is a
winner-preserving involution up to an even shift.  Lines follow the public
format::

    parity <max node id>;
    <id> <priority> <owner> <succ>,<succ>[,...] ["<label>"];
"""
from __future__ import annotations

import re

from .errors import NotDeterministicGame, StructureSyntaxError
from .graph import GameGraph, build_game
from .objectives import Parity


def flip_priorities(priorities) -> tuple[list[int], int]:
    """Min-even <-> max-even flip; returns the flipped values and E*."""
    top = max(priorities, default=0)
    estar = top if top % 2 == 0 else top + 1
    return [estar - p for p in priorities], estar


def export_pgsolver(g: GameGraph, obj: Parity) -> str:
    """Serialize a 2-player parity game for max-parity solvers."""
    if not g.is_two_player:
        raise NotDeterministicGame("PGSolver export needs a game without probabilistic states")
    g.require_valid()
    if len(obj.priorities) != g.n:
        raise ValueError("objective does not match the game")
    flipped, _ = flip_priorities(obj.priorities)
    lines = [f"parity {g.n - 1};"]
    for s in range(g.n):
        succ = ",".join(str(t) for t in g.succ[s])
        line = f"{s} {flipped[s]} {g.owners[s]} {succ}"
        label = g.label(s)
        if label is not None:
            line += f' "{label}"'
        lines.append(line + ";")
    return "\n".join(lines) + "\n"


_LINE = re.compile(
    r"^(?P<id>\d+)\s+(?P<prio>\d+)\s+(?P<owner>[01])\s+(?P<succ>\d+(?:\s*,\s*\d+)*)"
    r'(?:\s+"(?P<label>[^"]*)")?\s*;?$'
)


def import_pgsolver(text: str) -> tuple[GameGraph, Parity]:
    """Parse PGSolver text; the identity flip maps priorities back to min-even.

    The format carries no initial state, so the imported game has none.
    """
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("parity"):
            if not re.fullmatch(r"parity\s+\d+\s*;?", line):
                raise StructureSyntaxError("malformed parity header", lineno)
            continue
        m = _LINE.match(line)
        if not m:
            raise StructureSyntaxError(f"malformed node line {line!r}", lineno)
        node = int(m.group("id"))
        if node in entries:
            raise StructureSyntaxError(f"node {node} declared twice", lineno)
        succ = [int(t) for t in re.split(r"\s*,\s*", m.group("succ"))]
        entries[node] = (int(m.group("prio")), int(m.group("owner")), succ, m.group("label"))
    if not entries:
        raise StructureSyntaxError("no nodes in file", 1)
    ids = sorted(entries)
    if ids != list(range(len(ids))):
        raise StructureSyntaxError(f"node ids must be dense 0..{len(ids) - 1}", 1)
    states = []
    for s in ids:
        prio, owner, succ, label = entries[s]
        states.append((owner, succ, label))
    game = build_game(states)
    flipped_back, _ = flip_priorities([entries[s][0] for s in ids])
    return game, Parity(tuple(flipped_back))
