"""Annotated rewrite steps, conversions, parallel steps, bounded reachability.

A ``Step`` records everything needed to recompute it: source, rule,
position, matcher, direction, target. A forward step fires from source to
target; a backward step is the same rewrite traversed against the arrow,
so the rule fires from target to source. Conversions chain steps by their
(source, target) endpoints regardless of direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import InvalidPositionError, ResourceExhaustedError
from .terms import (
    Position,
    Rule,
    Subst,
    Term,
    Trs,
    Var,
    apply_subst,
    iter_subterms,
    match,
    pos_parallel,
    positions,
    replace_at,
    subterm_at,
    term_to_text,
)

FORWARD = "fw"
BACKWARD = "bw"

DEFAULT_NODE_CAP = 1_000_000


def _subst_key(sigma: Subst) -> tuple:
    return tuple(sorted(sigma.items(), key=lambda kv: kv[0]))


@dataclass(frozen=True)
class Step:
    source: Term
    rule: Rule
    pos: Position
    subst: Subst
    direction: str
    target: Term

    def __hash__(self) -> int:
        return hash((self.source, self.rule, self.pos, _subst_key(self.subst), self.direction, self.target))

    def __repr__(self) -> str:
        arrow = "->" if self.direction == FORWARD else "<-"
        return f"Step({term_to_text(self.source)} {arrow} {term_to_text(self.target)} @{self.pos})"


def step_at(s: Term, rule: Rule, p: Position) -> Step | None:
    """The forward step contracting ``rule`` at position p of s, if it applies."""
    redex = subterm_at(s, p)
    sigma = match(rule.lhs, redex)
    if sigma is None:
        return None
    target = replace_at(s, p, apply_subst(rule.rhs, sigma))
    return Step(s, rule, p, sigma, FORWARD, target)


def validate_step(st: Step) -> bool:
    if st.direction == FORWARD:
        src, tgt = st.source, st.target
    elif st.direction == BACKWARD:
        src, tgt = st.target, st.source
    else:
        return False
    try:
        redex = subterm_at(src, st.pos)
    except InvalidPositionError:
        return False
    if redex != apply_subst(st.rule.lhs, st.subst):
        return False
    return tgt == replace_at(src, st.pos, apply_subst(st.rule.rhs, st.subst))


@dataclass(frozen=True)
class Conversion:
    start: Term
    steps: tuple[Step, ...] = ()

    @property
    def final(self) -> Term:
        return self.steps[-1].target if self.steps else self.start

    def __len__(self) -> int:
        return len(self.steps)


def validate_conversion(c: Conversion) -> bool:
    at = c.start
    for st in c.steps:
        if st.source != at or not validate_step(st):
            return False
        at = st.target
    return True


def conversion_terms(c: Conversion) -> list[Term]:
    out = [c.start]
    out.extend(st.target for st in c.steps)
    return out


# ---------------------------------------------------------------------------
# parallel rewriting

@dataclass(frozen=True)
class RedexPattern:
    pos: Position
    rule: Rule
    subst: Subst

    def __hash__(self) -> int:
        return hash((self.pos, self.rule, _subst_key(self.subst)))

    def __repr__(self) -> str:
        return f"RedexPattern({self.pos}, {self.rule!r})"


ParallelStep = frozenset[RedexPattern]

EMPTY_PARALLEL: ParallelStep = frozenset()


def pattern_matches(t: Term, pat: RedexPattern) -> bool:
    try:
        return subterm_at(t, pat.pos) == apply_subst(pat.rule.lhs, pat.subst)
    except InvalidPositionError:
        return False


def _check_parallel(s: Term, pats: Iterable[RedexPattern]) -> list[RedexPattern]:
    ordered = sorted(pats, key=lambda pat: pat.pos)
    for i, a in enumerate(ordered):
        if not pattern_matches(s, a):
            raise ValueError(f"pattern at {a.pos} does not match {term_to_text(s)}")
        for b in ordered[i + 1:]:
            if not pos_parallel(a.pos, b.pos):
                raise ValueError(f"positions {a.pos} and {b.pos} are not parallel")
    return ordered


def apply_parallel(s: Term, pats: ParallelStep) -> Term:
    """Contract all patterns of a pairwise-parallel set simultaneously."""
    t = s
    for pat in _check_parallel(s, pats):
        t = replace_at(t, pat.pos, apply_subst(pat.rule.rhs, pat.subst))
    return t


def sequentialize(s: Term, pats: ParallelStep) -> Conversion:
    """One forward step per pattern, in position-lexicographic order."""
    steps = []
    at = s
    for pat in _check_parallel(s, pats):
        target = replace_at(at, pat.pos, apply_subst(pat.rule.rhs, pat.subst))
        steps.append(Step(at, pat.rule, pat.pos, dict(pat.subst), FORWARD, target))
        at = target
    return Conversion(s, tuple(steps))


def lift_variable_step(t: Term, sigma: Subst, tau: Subst, x: str, pat: RedexPattern) -> ParallelStep:
    """Patterns that rewrite t*sigma to t*tau, one per occurrence of x in t.

    Requires that ``pat`` rewrites sigma(x) to tau(x) and that the two
    substitutions agree on every other variable.
    """
    sx = sigma.get(x, Var(x))
    tx = tau.get(x, Var(x))
    if not pattern_matches(sx, pat):
        raise ValueError("pattern does not match sigma(x)")
    if replace_at(sx, pat.pos, apply_subst(pat.rule.rhs, pat.subst)) != tx:
        raise ValueError("pattern does not rewrite sigma(x) to tau(x)")
    others = (set(sigma) | set(tau)) - {x}
    for y in others:
        if sigma.get(y, Var(y)) != tau.get(y, Var(y)):
            raise ValueError(f"substitutions disagree on {y}")
    occurrences = [p for p, t_p in iter_subterms(t) if t_p == Var(x)]
    return frozenset(RedexPattern(q + pat.pos, pat.rule, pat.subst) for q in occurrences)


def embed_parallel(u: Term, q: Position, pats: ParallelStep) -> ParallelStep:
    """Shift every pattern below position q of the surrounding term u."""
    subterm_at(u, q)
    return frozenset(RedexPattern(q + pat.pos, pat.rule, pat.subst) for pat in pats)


# ---------------------------------------------------------------------------
# bounded reachability

def successors(trs: Trs, t: Term) -> Iterator[tuple[int, Step]]:
    """All single steps from t, as (rule index, step), in a fixed order."""
    for p in sorted(positions(t)):
        for idx, rule in enumerate(trs.rules):
            st = step_at(t, rule, p)
            if st is not None:
                yield idx, st


def reachable_within(trs: Trs, s: Term, bound: int, node_cap: int = DEFAULT_NODE_CAP) -> set[Term]:
    """All terms reachable from s in at most ``bound`` steps.

    Breadth-first with structural deduplication; raises
    ResourceExhaustedError once more than ``node_cap`` distinct terms
    have been seen.
    """
    seen = {s}
    frontier = [s]
    for _ in range(bound):
        nxt = []
        for t in frontier:
            for _, st in successors(trs, t):
                if st.target not in seen:
                    seen.add(st.target)
                    if len(seen) > node_cap:
                        raise ResourceExhaustedError(f"more than {node_cap} distinct terms reached")
                    nxt.append(st.target)
        if not nxt:
            break
        frontier = nxt
    return seen


def joinable_within(trs: Trs, s: Term, t: Term, bound: int, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    reach_s = reachable_within(trs, s, bound, node_cap)
    reach_t = reachable_within(trs, t, bound, node_cap)
    return not reach_s.isdisjoint(reach_t)
