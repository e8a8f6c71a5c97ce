"""Finite labeled abstract rewrite systems.

Carries the executable side of labeled-diagram reasoning at the abstract
level: down-sets of label orders, the relabeling that folds weak-order
information into the edge labels, a bounded search for decreasing local
diagrams, and a brute-force confluence oracle over the finite carrier.

Labels are opaque strings; orders are explicit pair sets. ``make_orders``
closes the weak relation reflexively and both relations transitively, then
rejects cyclic strict parts and incompatible pairs, so every ``LabelOrders``
value satisfies the preorder/strict-order requirements by construction.

File format (one edge per line, order pairs in bracketed sections)::

    a 1 b
    a 2 c
    [STRICT]
    2 1
    [WEAK]
    2 1.5

Comments run from ';' to end of line. The weak order is reflexively closed
over all labels automatically.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .errors import OrderError, ParseError

Edge = tuple[str, str, str]  # (source, label, target)
Peak = tuple[Edge, Edge]

STRICT = "strict"
WEAK = "weak"


@dataclass(frozen=True)
class FiniteArs:
    objects: frozenset[str]
    labels: frozenset[str]
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        for src, lab, tgt in self.edges:
            if src not in self.objects or tgt not in self.objects:
                raise ValueError(f"edge endpoint outside carrier: {(src, lab, tgt)}")
            if lab not in self.labels:
                raise ValueError(f"edge label outside label set: {(src, lab, tgt)}")


def make_ars(edges: Iterable[Edge], objects: Iterable[str] = (), labels: Iterable[str] = ()) -> FiniteArs:
    edge_set = frozenset(edges)
    objs = set(objects)
    labs = set(labels)
    for src, lab, tgt in edge_set:
        objs.update((src, tgt))
        labs.add(lab)
    return FiniteArs(frozenset(objs), frozenset(labs), edge_set)


@dataclass(frozen=True)
class LabelOrders:
    labels: frozenset[str]
    strict: frozenset[tuple[str, str]]
    weak: frozenset[tuple[str, str]]


def _transitive_closure(pairs: set[tuple[str, str]]) -> set[tuple[str, str]]:
    closure = set(pairs)
    changed = True
    while changed:
        changed = False
        for a, b in list(closure):
            for c, d in list(closure):
                if b == c and (a, d) not in closure:
                    closure.add((a, d))
                    changed = True
    return closure


def make_orders(
    labels: Iterable[str],
    strict: Iterable[tuple[str, str]],
    weak: Iterable[tuple[str, str]] = (),
) -> LabelOrders:
    """Build validated orders from explicit pairs.

    Raises OrderError with a witness when the strict part is cyclic or the
    compatibility condition (weak . strict . weak inside strict) fails.
    """
    label_set = set(labels)
    for pair in list(strict) + list(weak):
        label_set.update(pair)
    strict_closed = _transitive_closure(set(strict))
    weak_closed = _transitive_closure(set(weak) | {(a, a) for a in label_set})
    for a, b in strict_closed:
        if a == b:
            raise OrderError("strict order has a cycle", witness=(a,))
    for a, b in weak_closed:
        for c, d in strict_closed:
            if b != c:
                continue
            for e, f in weak_closed:
                if d == e and (a, f) not in strict_closed:
                    raise OrderError("orders are not compatible", witness=(a, b, d, f))
    return LabelOrders(frozenset(label_set), frozenset(strict_closed), frozenset(weak_closed))


def plain_equality_orders(orders: LabelOrders) -> LabelOrders:
    """Same strict order, weak order shrunk to the identity relation."""
    return LabelOrders(orders.labels, orders.strict, frozenset((a, a) for a in orders.labels))


def down_set(orders: LabelOrders, which: str, labels: Iterable[str]) -> frozenset[str]:
    """All labels below some element of ``labels`` in the chosen relation."""
    if which not in (STRICT, WEAK):
        raise ValueError(f"unknown relation {which!r}")
    rel = orders.strict if which == STRICT else orders.weak
    above = set(labels)
    return frozenset(b for a, b in rel if a in above)


def coarsen(ars: FiniteArs, orders: LabelOrders) -> FiniteArs:
    """Relabel so each label's relation absorbs everything weakly below it."""
    edges = set()
    for alpha in ars.labels:
        lower = down_set(orders, WEAK, [alpha])
        for src, beta, tgt in ars.edges:
            if beta in lower:
                edges.add((src, alpha, tgt))
    return FiniteArs(ars.objects, ars.labels, frozenset(edges))


# ---------------------------------------------------------------------------
# decreasingness search

@dataclass(frozen=True)
class WitnessStep:
    segment: int  # 0..4 within the five-segment diagram pattern
    forward: bool
    edge: Edge


@dataclass(frozen=True)
class EldReport:
    ok: bool
    peaks: tuple[Peak, ...]
    witnesses: dict[Peak, tuple[WitnessStep, ...] | None]

    def failures(self) -> tuple[Peak, ...]:
        return tuple(p for p in self.peaks if self.witnesses[p] is None)


def local_peaks(ars: FiniteArs) -> tuple[Peak, ...]:
    by_source: dict[str, list[Edge]] = {}
    for edge in sorted(ars.edges):
        by_source.setdefault(edge[0], []).append(edge)
    out = []
    for src in sorted(by_source):
        for e1 in by_source[src]:
            for e2 in by_source[src]:
                out.append((e1, e2))
    return tuple(out)


def check_eld(ars: FiniteArs, orders: LabelOrders, maxlen: int = 4) -> EldReport:
    """Search every local peak for a decreasing joining conversion.

    The witness follows the five-segment pattern: a conversion below the
    left label, at most one forward step weakly below the right label, a
    conversion below either label, at most one mirrored step weakly below
    the left label, and a conversion below the right label. Conversion
    segments are cut off at ``maxlen`` steps each, so a False verdict means
    "no witness within the bound".
    """
    peaks = local_peaks(ars)
    witnesses: dict[Peak, tuple[WitnessStep, ...] | None] = {}
    for peak in peaks:
        (_, alpha, b), (_, beta, c) = peak
        witnesses[peak] = _find_witness(ars, orders, alpha, beta, b, c, maxlen)
    return EldReport(all(w is not None for w in witnesses.values()), peaks, witnesses)


def _find_witness(
    ars: FiniteArs,
    orders: LabelOrders,
    alpha: str,
    beta: str,
    start: str,
    goal: str,
    maxlen: int,
) -> tuple[WitnessStep, ...] | None:
    conv_allowed = {
        0: down_set(orders, STRICT, [alpha]),
        2: down_set(orders, STRICT, [alpha, beta]),
        4: down_set(orders, STRICT, [beta]),
    }
    step_allowed = {1: down_set(orders, WEAK, [beta]), 3: down_set(orders, WEAK, [alpha])}
    outgoing: dict[str, list[Edge]] = {}
    incoming: dict[str, list[Edge]] = {}
    for edge in sorted(ars.edges):
        outgoing.setdefault(edge[0], []).append(edge)
        incoming.setdefault(edge[2], []).append(edge)

    State = tuple[str, int, int]  # (object, segment, steps used in segment)
    initial: State = (start, 0, 0)
    parent: dict[State, tuple[State, WitnessStep | None]] = {initial: (initial, None)}
    queue: deque[State] = deque([initial])
    while queue:
        state = queue.popleft()
        obj, seg, used = state
        if obj == goal:
            return _trace(parent, state)
        moves: list[tuple[State, WitnessStep | None]] = []
        if seg < 4:
            moves.append(((obj, seg + 1, 0), None))
        if seg in conv_allowed and used < maxlen:
            for edge in outgoing.get(obj, ()):
                if edge[1] in conv_allowed[seg]:
                    moves.append(((edge[2], seg, used + 1), WitnessStep(seg, True, edge)))
            for edge in incoming.get(obj, ()):
                if edge[1] in conv_allowed[seg]:
                    moves.append(((edge[0], seg, used + 1), WitnessStep(seg, False, edge)))
        elif seg == 1 and used == 0:
            for edge in outgoing.get(obj, ()):
                if edge[1] in step_allowed[1]:
                    moves.append(((edge[2], 2, 0), WitnessStep(1, True, edge)))
        elif seg == 3 and used == 0:
            # traversed against the arrow: the edge rewrites the next object
            # to the current one
            for edge in incoming.get(obj, ()):
                if edge[1] in step_allowed[3]:
                    moves.append(((edge[0], 4, 0), WitnessStep(3, False, edge)))
        for nxt, via in moves:
            if nxt not in parent:
                parent[nxt] = (state, via)
                queue.append(nxt)
    return None


def _trace(parent: dict, state: tuple) -> tuple[WitnessStep, ...]:
    steps = []
    while True:
        prev, via = parent[state]
        if prev == state:
            break
        if via is not None:
            steps.append(via)
        state = prev
    return tuple(reversed(steps))


# ---------------------------------------------------------------------------
# confluence oracle

def confluent_bruteforce(ars: FiniteArs) -> bool:
    """Plain closure computation: every two-sided divergence rejoins."""
    succ: dict[str, set[str]] = {obj: set() for obj in ars.objects}
    for src, _, tgt in ars.edges:
        succ[src].add(tgt)
    reach: dict[str, set[str]] = {}
    for obj in ars.objects:
        seen = {obj}
        queue = deque([obj])
        while queue:
            for nxt in succ[queue.popleft()]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        reach[obj] = seen
    for s in ars.objects:
        for t in reach[s]:
            for u in reach[s]:
                if reach[t].isdisjoint(reach[u]):
                    return False
    return True


# ---------------------------------------------------------------------------
# text format

def parse_ars(text: str) -> tuple[FiniteArs, LabelOrders]:
    edges: list[Edge] = []
    strict: list[tuple[str, str]] = []
    weak: list[tuple[str, str]] = []
    section = "edges"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        if line.upper() == "[STRICT]":
            section = "strict"
            continue
        if line.upper() == "[WEAK]":
            section = "weak"
            continue
        parts = line.split()
        if section == "edges":
            if len(parts) != 3:
                raise ParseError("expected 'source label target'", line=lineno)
            edges.append((parts[0], parts[1], parts[2]))
        else:
            if len(parts) != 2:
                raise ParseError("expected a pair of labels", line=lineno)
            (strict if section == "strict" else weak).append((parts[0], parts[1]))
    if not edges:
        raise ParseError("no edges found")
    ars = make_ars(edges)
    orders = make_orders(ars.labels, strict, weak)
    return ars, orders
