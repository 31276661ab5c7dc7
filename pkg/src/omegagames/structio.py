"""GOAL-compatible XML structure files for games and automata.

The reader/writer pair is bit-faithful: ``write_structure`` emits a
canonical form (states by sid, transitions by tid, 2-space indentation)
and ``parse_structure(write_structure(doc))`` reproduces the document
exactly.  Parity acceptance sets are ordered by priority value; Rabin and
Streett sets pair an E (request / infinitely-often) block with an F block.
Probabilistic game states carry player tag -1 and, since the format has no
weights, get uniform distributions on parse; qualitative answers do not
depend on the weights.
"""
from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Optional, Sequence, Union
from xml.sax.saxutils import escape

from .automata import DetParityAutomaton, PropAlphabet, StreettAutomaton
from .errors import (
    DuplicateProp,
    IncompleteAutomaton,
    LabelSyntaxError,
    SchemaError,
    StructureSyntaxError,
    UnknownProp,
)
from .graph import PLAYER0, PLAYER1, PROBABILISTIC, GameGraph, build_game
from .objectives import Objective, Parity, Rabin, Streett, buchi_parity

_PLAYER_TAGS = {"0": PLAYER0, "1": PLAYER1, "-1": PROBABILISTIC}
_TAG_OF_OWNER = {PLAYER0: "0", PLAYER1: "1", PROBABILISTIC: "-1"}


def _is_pair_set(acc) -> bool:
    """E/F pair entries are 2-tuples of stateID tuples; plain sets hold ints."""
    return (
        isinstance(acc, tuple)
        and len(acc) == 2
        and all(isinstance(part, tuple) for part in acc)
    )


@dataclass(frozen=True)
class PropDecl:
    name: str
    kind: str  # "input" | "output"


@dataclass(frozen=True)
class StateDecl:
    sid: int
    player: Optional[int] = None
    label: Optional[str] = None


@dataclass(frozen=True)
class TransitionDecl:
    tid: int
    src: int
    dst: int
    read: Optional[str] = None


@dataclass(frozen=True)
class StructureDocument:
    kind: str  # "game" | "fa"
    props: tuple[PropDecl, ...]
    states: tuple[StateDecl, ...]
    transitions: tuple[TransitionDecl, ...]
    initial: tuple[int, ...]
    acc_type: str  # "buchi" | "parity" | "rabin" | "streett"
    acc_sets: tuple  # plain: tuple[int,...] entries; paired: (E, F) entries


def structure_document(
    kind, props, states, transitions, initial, acc_type, acc_sets
) -> StructureDocument:
    """Canonicalize and schema-check a document."""
    doc = StructureDocument(
        kind=kind,
        props=tuple(props),
        states=tuple(sorted(states, key=lambda s: s.sid)),
        transitions=tuple(sorted(transitions, key=lambda t: t.tid)),
        initial=tuple(sorted(initial)),
        acc_type=acc_type,
        acc_sets=tuple(acc_sets),
    )
    _check_schema(doc)
    return doc


def _check_schema(doc: StructureDocument):
    if doc.kind not in ("game", "fa"):
        raise SchemaError(f"structure type must be game or fa, got {doc.kind!r}")
    if not doc.states:
        raise SchemaError("stateSet must not be empty")
    sids = [s.sid for s in doc.states]
    if len(set(sids)) != len(sids):
        raise SchemaError("state sids must be unique")
    sid_set = set(sids)
    names = [p.name for p in doc.props]
    if len(set(names)) != len(names):
        raise SchemaError("alphabet proposition names must be unique")
    for p in doc.props:
        if p.kind not in ("input", "output"):
            raise SchemaError(f"prop type must be input or output, got {p.kind!r}")
    tids = [t.tid for t in doc.transitions]
    if len(set(tids)) != len(tids):
        raise SchemaError("transition tids must be unique")
    for t in doc.transitions:
        if t.src not in sid_set or t.dst not in sid_set:
            raise SchemaError(f"transition {t.tid} references unknown state")
        if doc.kind == "fa" and t.read is None:
            raise SchemaError(f"transition {t.tid}: fa transitions need a read symbol")
        if t.read is not None:
            parse_label(t.read, doc.props)
    for s in doc.states:
        if doc.kind == "game" and s.player is None:
            raise SchemaError(f"state {s.sid}: game states need a player tag")
        if doc.kind == "fa" and s.player is not None:
            raise SchemaError(f"state {s.sid}: player tags only apply to games")
    if not doc.initial:
        raise SchemaError("initialStateSet must not be empty")
    for sid in doc.initial:
        if sid not in sid_set:
            raise SchemaError(f"initial state {sid} is not declared")
    if doc.kind == "game" and len(doc.initial) != 1:
        raise SchemaError("games need exactly one initial state")
    if doc.acc_type not in ("buchi", "parity", "rabin", "streett"):
        raise SchemaError(f"unknown acceptance type {doc.acc_type!r}")
    if doc.acc_type in ("buchi", "parity"):
        seen = set()
        for k, acc in enumerate(doc.acc_sets):
            if not isinstance(acc, tuple) or _is_pair_set(acc):
                raise SchemaError(f"accSet {k}: plain stateID list expected")
            for sid in acc:
                if sid not in sid_set:
                    raise SchemaError(f"accSet {k} references unknown state {sid}")
                if doc.acc_type == "parity" and sid in seen:
                    raise SchemaError(f"parity accSets must be disjoint (state {sid})")
                seen.add(sid)
        if doc.acc_type == "buchi" and len(doc.acc_sets) != 1:
            raise SchemaError("buchi acceptance needs exactly one accSet")
        if doc.acc_type == "parity" and seen != sid_set:
            raise SchemaError("parity accSets must cover every state")
    else:
        for k, acc in enumerate(doc.acc_sets):
            if not _is_pair_set(acc):
                raise SchemaError(f"accSet {k}: exactly one E and one F block expected")
            for part in acc:
                for sid in part:
                    if sid not in sid_set:
                        raise SchemaError(f"accSet {k} references unknown state {sid}")


# ---------------------------------------------------------------------------
# label grammar


_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|[¬!~]|&&|&|∧)")


def parse_label(
    text: str, props: Sequence  # PropDecl or plain names
) -> frozenset[tuple[str, bool]]:
    """Parse a conjunction of literals; ``T``/``true`` is the empty set.

    Negation is written with any of the aliases (the XML form and the two
    ASCII forms) and conjunction likewise; every proposition must be
    declared and may appear at most once.
    """
    names = {p.name if isinstance(p, PropDecl) else p for p in props}
    stripped = text.strip()
    if stripped in ("T", "true"):
        return frozenset()
    tokens = []
    pos = 0
    while pos < len(stripped):
        m = _TOKEN.match(stripped, pos)
        if not m:
            raise LabelSyntaxError(f"bad label {text!r} at offset {pos}")
        tokens.append(m.group(1))
        pos = m.end()
    literals = {}
    expect_literal = True
    negate = False
    for tok in tokens:
        if tok in ("¬", "!", "~"):
            if not expect_literal or negate:
                raise LabelSyntaxError(f"misplaced negation in {text!r}")
            negate = True
        elif tok in ("∧", "&", "&&"):
            if expect_literal:
                raise LabelSyntaxError(f"misplaced conjunction in {text!r}")
            expect_literal = True
        else:
            if not expect_literal:
                raise LabelSyntaxError(f"missing conjunction in {text!r}")
            if tok in ("T", "true"):
                raise LabelSyntaxError("T/true cannot be part of a conjunction")
            if tok not in names:
                raise UnknownProp(f"proposition {tok!r} is not declared")
            if tok in literals:
                raise DuplicateProp(f"proposition {tok!r} appears twice in {text!r}")
            literals[tok] = not negate
            negate = False
            expect_literal = False
    if expect_literal:
        raise LabelSyntaxError(f"label {text!r} ends in an operator")
    return frozenset(literals.items())


def format_label(literals: frozenset[tuple[str, bool]], props: Sequence[PropDecl]) -> str:
    if not literals:
        return "T"
    by_name = dict(literals)
    parts = []
    for p in props:
        if p.name in by_name:
            parts.append(p.name if by_name[p.name] else f"¬{p.name}")
    return " ∧ ".join(parts)


# ---------------------------------------------------------------------------
# XML reading


def _text_of(elem, what):
    if elem.text is None or not elem.text.strip():
        raise SchemaError(f"{what} must carry text")
    return elem.text.strip()


def _int_of(elem, what):
    text = _text_of(elem, what)
    try:
        return int(text)
    except ValueError:
        raise SchemaError(f"{what} must be numeric, got {text!r}") from None


def parse_structure(text: Union[str, bytes]) -> StructureDocument:
    """Parse a structure file; positions are reported for XML errors."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line, column = exc.position
        raise StructureSyntaxError(str(exc.msg if hasattr(exc, "msg") else exc), line, column) from None
    if root.tag != "structure":
        raise SchemaError(f"root element must be <structure>, got <{root.tag}>")
    kind = root.get("type")
    if kind is None:
        raise SchemaError("<structure> needs a type attribute")
    props = []
    alphabet = root.find("alphabet")
    if alphabet is not None:
        for prop in alphabet.findall("prop"):
            props.append(PropDecl(_text_of(prop, "prop"), prop.get("type") or ""))
    states = []
    state_set = root.find("stateSet")
    if state_set is None:
        raise SchemaError("missing <stateSet>")
    for st in state_set.findall("state"):
        sid = st.get("sid")
        if sid is None:
            raise SchemaError("<state> needs a sid attribute")
        try:
            sid = int(sid)
        except ValueError:
            raise SchemaError(f"sid must be numeric, got {sid!r}") from None
        player_el = st.find("player")
        player = None
        if player_el is not None:
            tag = _text_of(player_el, "player")
            if tag not in _PLAYER_TAGS:
                raise SchemaError(f"state {sid}: player must be 0, 1 or -1, got {tag!r}")
            player = _PLAYER_TAGS[tag]
        label_el = st.find("label")
        label = label_el.text if label_el is not None and label_el.text else None
        states.append(StateDecl(sid, player, label))
    transitions = []
    trans_set = root.find("transitionSet")
    if trans_set is not None:
        for tr in trans_set.findall("transition"):
            tid = tr.get("tid")
            if tid is None:
                raise SchemaError("<transition> needs a tid attribute")
            try:
                tid = int(tid)
            except ValueError:
                raise SchemaError(f"tid must be numeric, got {tid!r}") from None
            src_el, dst_el = tr.find("from"), tr.find("to")
            if src_el is None or dst_el is None:
                raise SchemaError(f"transition {tid} needs <from> and <to>")
            read_el = tr.find("read")
            read = None
            if read_el is not None and read_el.text and read_el.text.strip():
                read = read_el.text.strip()
            transitions.append(
                TransitionDecl(tid, _int_of(src_el, "from"), _int_of(dst_el, "to"), read)
            )
    initial = []
    init_set = root.find("initialStateSet")
    if init_set is not None:
        for sid in init_set.findall("stateID"):
            initial.append(_int_of(sid, "stateID"))
    acc = root.find("acc")
    if acc is None:
        raise SchemaError("missing <acc> block")
    acc_type = acc.get("type")
    acc_sets = []
    for acc_set in acc.findall("accSet"):
        e_el, f_el = acc_set.find("E"), acc_set.find("F")
        if e_el is not None or f_el is not None:
            if e_el is None or f_el is None:
                raise SchemaError("accSet needs both an E and an F block")
            e = tuple(sorted(_int_of(x, "stateID") for x in e_el.findall("stateID")))
            f = tuple(sorted(_int_of(x, "stateID") for x in f_el.findall("stateID")))
            acc_sets.append((e, f))
        else:
            acc_sets.append(tuple(sorted(_int_of(x, "stateID") for x in acc_set.findall("stateID"))))
    return structure_document(
        kind, props, states, transitions, initial, acc_type or "", acc_sets
    )


# ---------------------------------------------------------------------------
# XML writing (canonical)


def write_structure(doc: StructureDocument) -> str:
    """Canonical serialization: a fixed point of parse-then-write."""
    _check_schema(doc)
    out = []
    put = out.append
    put(f'<structure label-on="transition" type="{doc.kind}">\n')
    if doc.props:
        put('  <alphabet type="propositional">\n')
        for p in doc.props:
            put(f'    <prop type="{p.kind}">{escape(p.name)}</prop>\n')
        put("  </alphabet>\n")
    else:
        put('  <alphabet type="propositional"/>\n')
    put("  <stateSet>\n")
    for s in sorted(doc.states, key=lambda s: s.sid):
        put(f'    <state sid="{s.sid}">\n')
        if s.player is not None:
            put(f"      <player>{_TAG_OF_OWNER[s.player]}</player>\n")
        if s.label is not None:
            put(f"      <label>{escape(s.label)}</label>\n")
        put("    </state>\n")
    put("  </stateSet>\n")
    put("  <transitionSet>\n")
    for t in sorted(doc.transitions, key=lambda t: t.tid):
        put(f'    <transition tid="{t.tid}">\n')
        put(f"      <from>{t.src}</from>\n")
        put(f"      <to>{t.dst}</to>\n")
        if t.read is not None:
            put(f"      <read>{escape(t.read)}</read>\n")
        put("    </transition>\n")
    put("  </transitionSet>\n")
    put("  <initialStateSet>\n")
    for sid in sorted(doc.initial):
        put(f"    <stateID>{sid}</stateID>\n")
    put("  </initialStateSet>\n")
    put(f'  <acc type="{doc.acc_type}">\n')
    for acc in doc.acc_sets:
        put("    <accSet>\n")
        if _is_pair_set(acc):
            e, f = acc
            put("      <E>\n")
            for sid in e:
                put(f"        <stateID>{sid}</stateID>\n")
            put("      </E>\n")
            put("      <F>\n")
            for sid in f:
                put(f"        <stateID>{sid}</stateID>\n")
            put("      </F>\n")
        else:
            for sid in acc:
                put(f"      <stateID>{sid}</stateID>\n")
        put("    </accSet>\n")
    put("  </acc>\n")
    put("</structure>\n")
    return "".join(out)


# ---------------------------------------------------------------------------
# conversions between documents and in-memory objects


def game_to_document(
    g: GameGraph, obj: Objective, props: Sequence[PropDecl] = ()
) -> StructureDocument:
    """Serialize a game with its objective.

    Weights are not part of the format: probabilistic states round-trip
    with uniform distributions, which is sound for qualitative analysis.
    """
    if g.initial is None:
        raise SchemaError("game documents need an initial state")
    states = [
        StateDecl(s, g.owners[s], g.label(s)) for s in range(g.n)
    ]
    transitions = []
    tid = 0
    for s in range(g.n):
        for t in g.succ[s]:
            transitions.append(TransitionDecl(tid, s, t, None))
            tid += 1
    if isinstance(obj, Parity):
        acc_type = "parity"
        acc_sets = [
            tuple(s for s in range(g.n) if obj.priorities[s] == k)
            for k in range(obj.max_priority + 1)
        ]
    elif isinstance(obj, Streett):
        acc_type = "streett"
        acc_sets = [(tuple(sorted(q)), tuple(sorted(r))) for q, r in obj.pairs]
    elif isinstance(obj, Rabin):
        acc_type = "rabin"
        acc_sets = [(tuple(sorted(q)), tuple(sorted(r))) for q, r in obj.pairs]
    else:
        raise TypeError(f"cannot serialize objective {obj!r}")
    return structure_document(
        "game", props, states, transitions, [g.initial], acc_type, acc_sets
    )


def document_to_game(doc: StructureDocument) -> tuple[GameGraph, Objective]:
    """Game plus objective from a game document.

    State indices are the rank of the sid; Buchi acceptance is converted
    into the two-priority parity encoding.
    """
    if doc.kind != "game":
        raise SchemaError(f"expected a game document, got type {doc.kind!r}")
    rank = {s.sid: k for k, s in enumerate(doc.states)}
    succ = [[] for _ in doc.states]
    for t in doc.transitions:  # already tid-ordered
        succ[rank[t.src]].append(rank[t.dst])
    states = [
        (s.player, succ[k], s.label) for k, s in enumerate(doc.states)
    ]
    game = build_game(states, initial=rank[doc.initial[0]]).require_valid()
    n = game.n
    if doc.acc_type == "parity":
        prio = [0] * n
        for k, acc in enumerate(doc.acc_sets):
            for sid in acc:
                prio[rank[sid]] = k
        obj: Objective = Parity(tuple(prio))
    elif doc.acc_type == "buchi":
        obj = buchi_parity({rank[sid] for sid in doc.acc_sets[0]}, n)
    elif doc.acc_type == "streett":
        obj = Streett([({rank[s] for s in e}, {rank[s] for s in f}) for e, f in doc.acc_sets])
    else:
        obj = Rabin([({rank[s] for s in e}, {rank[s] for s in f}) for e, f in doc.acc_sets])
    return game, obj


def _alphabet_of(doc: StructureDocument) -> PropAlphabet:
    return PropAlphabet(
        inputs=tuple(p.name for p in doc.props if p.kind == "input"),
        outputs=tuple(p.name for p in doc.props if p.kind == "output"),
    )


def _letters_matching(alpha: PropAlphabet, literals) -> list[int]:
    by_name = dict(literals)
    out = []
    for letter in range(alpha.n_letters):
        vals = dict(alpha.literals(letter))
        if all(vals[name] == v for name, v in by_name.items()):
            out.append(letter)
    return out


def dpa_from_document(doc: StructureDocument, complete: bool = False) -> DetParityAutomaton:
    """Deterministic parity automaton from an fa document.

    Each labeled transition is expanded over the full letters it matches;
    a (state, letter) covered twice with different targets is rejected as
    nondeterminism, a missing one raises ``IncompleteAutomaton`` unless
    ``complete`` adds the rejecting sink.
    """
    if doc.kind != "fa":
        raise SchemaError(f"expected an fa document, got type {doc.kind!r}")
    if doc.acc_type != "parity":
        raise SchemaError(f"parity acceptance expected, got {doc.acc_type!r}")
    if len(doc.initial) != 1:
        raise SchemaError("a deterministic automaton needs exactly one initial state")
    alpha = _alphabet_of(doc)
    rank = {s.sid: k for k, s in enumerate(doc.states)}
    n = len(doc.states)
    prio = [0] * n
    for k, acc in enumerate(doc.acc_sets):
        for sid in acc:
            prio[rank[sid]] = k
    table = {}
    for t in doc.transitions:
        literals = parse_label(t.read, doc.props)
        for letter in _letters_matching(alpha, literals):
            key = (rank[t.src], letter)
            if key in table and table[key] != rank[t.dst]:
                raise SchemaError(
                    f"state {t.src} is nondeterministic on {alpha.format_letter(letter)}"
                )
            table[key] = rank[t.dst]
    labels = tuple(s.label for s in doc.states)
    return DetParityAutomaton.from_table(
        alpha, n, rank[doc.initial[0]], prio, table, complete=complete, labels=labels
    )


def dpa_to_document(aut: DetParityAutomaton) -> StructureDocument:
    alpha = aut.alphabet
    props = [PropDecl(p, "input") for p in alpha.inputs] + [
        PropDecl(p, "output") for p in alpha.outputs
    ]
    states = [
        StateDecl(q, None, aut.labels[q] if aut.labels else None) for q in range(aut.n)
    ]
    transitions = []
    tid = 0
    for q in range(aut.n):
        for letter in range(alpha.n_letters):
            transitions.append(
                TransitionDecl(tid, q, aut.delta[q][letter], format_label(alpha.literals(letter), props))
            )
            tid += 1
    acc_sets = [
        tuple(q for q in range(aut.n) if aut.priorities[q] == k)
        for k in range(max(aut.priorities) + 1)
    ]
    return structure_document(
        "fa", props, states, transitions, [aut.initial], "parity", acc_sets
    )


def streett_automaton_from_document(doc: StructureDocument) -> StreettAutomaton:
    """Deterministic, complete Streett automaton from an fa document."""
    if doc.kind != "fa":
        raise SchemaError(f"expected an fa document, got type {doc.kind!r}")
    if doc.acc_type != "streett":
        raise SchemaError(f"streett acceptance expected, got {doc.acc_type!r}")
    if len(doc.initial) != 1:
        raise SchemaError("a deterministic automaton needs exactly one initial state")
    alpha = _alphabet_of(doc)
    rank = {s.sid: k for k, s in enumerate(doc.states)}
    n = len(doc.states)
    table = {}
    for t in doc.transitions:
        literals = parse_label(t.read, doc.props)
        for letter in _letters_matching(alpha, literals):
            key = (rank[t.src], letter)
            if key in table and table[key] != rank[t.dst]:
                raise SchemaError(
                    f"state {t.src} is nondeterministic on {alpha.format_letter(letter)}"
                )
            table[key] = rank[t.dst]
    rows = []
    for q in range(n):
        row = []
        for letter in range(alpha.n_letters):
            if (q, letter) not in table:
                raise IncompleteAutomaton(
                    f"state {q} has no transition on {alpha.format_letter(letter)}"
                )
            row.append(table[(q, letter)])
        rows.append(tuple(row))
    pairs = tuple(
        (frozenset(rank[s] for s in e), frozenset(rank[s] for s in f))
        for e, f in doc.acc_sets
    )
    return StreettAutomaton(
        alphabet=alpha,
        n=n,
        initial=rank[doc.initial[0]],
        delta=tuple(rows),
        pairs=pairs,
        labels=tuple(s.label for s in doc.states),
    )


def streett_automaton_to_document(sa: StreettAutomaton) -> StructureDocument:
    alpha = sa.alphabet
    props = [PropDecl(p, "input") for p in alpha.inputs] + [
        PropDecl(p, "output") for p in alpha.outputs
    ]
    states = [
        StateDecl(q, None, sa.labels[q] if sa.labels else None) for q in range(sa.n)
    ]
    transitions = []
    tid = 0
    for q in range(sa.n):
        for letter in range(alpha.n_letters):
            transitions.append(
                TransitionDecl(tid, q, sa.delta[q][letter], format_label(alpha.literals(letter), props))
            )
            tid += 1
    acc_sets = [(tuple(sorted(q)), tuple(sorted(r))) for q, r in sa.pairs]
    return structure_document(
        "fa", props, states, transitions, [sa.initial], "streett", acc_sets
    )
