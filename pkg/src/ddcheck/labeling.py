"""Rule labeling and decreasingness of local diagrams.

Steps are labeled by the natural number assigned to their rule; labels are
compared by the usual strict and weak orders on naturals, and a label is
independent of the direction a step is traversed in. A local diagram
carries the peak plus three components per side: an opening conversion, an
optional joining step, and a closing conversion; the two closing
conversions must end in the same term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import UnknownRuleError
from .peaks import LocalPeak
from .rewrite import (
    DEFAULT_NODE_CAP,
    FORWARD,
    Conversion,
    Step,
    conversion_terms,
    reachable_within,
    validate_conversion,
    validate_step,
)
from .terms import Term, Trs, term_to_text

IndexMap = Sequence[int]  # one label per rule, in rule order

STRUCTURE = "structure"
LABELS = "labels"


def label_step(labels: IndexMap, trs: Trs, st: Step) -> int:
    """The label of a step: the number assigned to its rule.

    Identical duplicate rules resolve to the first occurrence, so give
    duplicates equal labels.
    """
    try:
        idx = trs.rules.index(st.rule)
    except ValueError:
        raise UnknownRuleError(f"step rule {st.rule!r} is not in the system") from None
    return labels[idx]


@dataclass(frozen=True)
class Diagram:
    peak: LocalPeak
    cl1: Conversion
    sl: Step | None
    cl2: Conversion
    cr1: Conversion
    sr: Step | None
    cr2: Conversion


def _side_chains(start: Term, conv1: Conversion, step: Step | None, conv2: Conversion) -> str | None:
    if conv1.start != start:
        return f"side must start at {term_to_text(start)}"
    if not validate_conversion(conv1):
        return "opening conversion invalid"
    at = conv1.final
    if step is not None:
        if step.direction != FORWARD:
            return "joining step must be forward"
        if step.source != at or not validate_step(step):
            return "joining step invalid or misplaced"
        at = step.target
    if conv2.start != at:
        return "closing conversion misplaced"
    if not validate_conversion(conv2):
        return "closing conversion invalid"
    return None


def validate_diagram(d: Diagram) -> str | None:
    """None if the diagram is well-formed, else a description of the defect."""
    if not (validate_step(d.peak.left) and validate_step(d.peak.right)):
        return "peak steps invalid"
    problem = _side_chains(d.peak.left.target, d.cl1, d.sl, d.cl2)
    if problem is not None:
        return f"left {problem}"
    problem = _side_chains(d.peak.right.target, d.cr1, d.sr, d.cr2)
    if problem is not None:
        return f"right {problem}"
    if d.cl2.final != d.cr2.final:
        return "sides do not meet"
    return None


@dataclass(frozen=True)
class DiagramCheck:
    ok: bool
    failure_kind: str | None = None  # STRUCTURE or LABELS
    detail: str | None = None


def eld_bullets(
    alpha: int,
    beta: int,
    cl1: Sequence[int],
    sl: int | None,
    cl2: Sequence[int],
    cr1: Sequence[int],
    sr: int | None,
    cr2: Sequence[int],
) -> str | None:
    """The decreasingness conditions on a diagram's label skeleton.

    Returns None when they hold, else which one failed. Opening
    conversions stay below their own peak label, the optional steps are
    weakly below the opposite peak label, closing conversions stay below
    one of the two.
    """
    if not all(l < alpha for l in cl1):
        return f"left opening labels {list(cl1)} not below {alpha}"
    if sl is not None and not sl <= beta:
        return f"left step label {sl} not weakly below {beta}"
    if not all(l < alpha or l < beta for l in cl2):
        return f"left closing labels {list(cl2)} not below {alpha} or {beta}"
    if not all(l < beta for l in cr1):
        return f"right opening labels {list(cr1)} not below {beta}"
    if sr is not None and not sr <= alpha:
        return f"right step label {sr} not weakly below {alpha}"
    if not all(l < alpha or l < beta for l in cr2):
        return f"right closing labels {list(cr2)} not below {alpha} or {beta}"
    return None


def check_eld_diagram(labels: IndexMap, trs: Trs, d: Diagram) -> DiagramCheck:
    """Structural validity first, then the label conditions."""
    problem = validate_diagram(d)
    if problem is not None:
        return DiagramCheck(False, STRUCTURE, problem)
    lab = lambda st: label_step(labels, trs, st)
    failure = eld_bullets(
        lab(d.peak.left),
        lab(d.peak.right),
        [lab(st) for st in d.cl1.steps],
        None if d.sl is None else lab(d.sl),
        [lab(st) for st in d.cl2.steps],
        [lab(st) for st in d.cr1.steps],
        None if d.sr is None else lab(d.sr),
        [lab(st) for st in d.cr2.steps],
    )
    if failure is not None:
        return DiagramCheck(False, LABELS, failure)
    return DiagramCheck(True)


def mirror_diagram(d: Diagram) -> Diagram:
    from .peaks import mirror

    return Diagram(mirror(d.peak), d.cr1, d.sr, d.cr2, d.cl1, d.sl, d.cl2)


# ---------------------------------------------------------------------------
# greedy split for valley-style joins

def greedy_split(
    alpha: int, beta: int, labels: Sequence[int]
) -> tuple[list[int], list[int], list[int]] | None:
    """Split a label sequence into prefix < alpha, one label <= beta, rest.

    The rest must stay below alpha or beta elementwise. Greedy choice of
    the maximal prefix is complete: if it fails, no split exists.
    """
    i = 0
    while i < len(labels) and labels[i] < alpha:
        i += 1
    j = i
    if j < len(labels) and labels[j] <= beta:
        j += 1
    tail = list(labels[j:])
    if all(l < alpha or l < beta for l in tail):
        return list(labels[:i]), list(labels[i:j]), tail
    return None


# ---------------------------------------------------------------------------
# fan condition

@dataclass(frozen=True)
class FanCheck:
    ok: bool
    offending: tuple[Term, ...] = ()


def diagram_terms(d: Diagram) -> list[Term]:
    """Every term the joining conversion passes through, left side first."""
    seen: list[Term] = []

    def add(term: Term) -> None:
        if term not in seen:
            seen.append(term)

    for conv1, step, conv2 in ((d.cl1, d.sl, d.cl2), (d.cr1, d.sr, d.cr2)):
        for term in conversion_terms(conv1):
            add(term)
        if step is not None:
            add(step.target)
        for term in conversion_terms(conv2):
            add(term)
    return seen


def check_fan(trs: Trs, source: Term, d: Diagram, bound: int, node_cap: int = DEFAULT_NODE_CAP) -> FanCheck:
    """Every intermediate term must be reachable from the peak source."""
    reach = reachable_within(trs, source, bound, node_cap)
    offending = tuple(t for t in diagram_terms(d) if t not in reach)
    return FanCheck(not offending, offending)
