"""Local peaks: classification, canonical joins, and critical peaks.

A local peak is a pair of steps diverging from a shared source term. Both
branches are stored as forward steps; which one counts as the "left" side
only matters for how diagrams are oriented. Classification follows the
position trichotomy: parallel positions, redex inside a function position
of the other rule's left-hand side, or inside (or below) one of its
variable positions. Mirrored kinds flag that the left branch is the outer
one, so callers can swap sides before joining.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnsupportedPeakError, WrongPeakKindError
from .terms import (
    ROOT,
    Position,
    Rule,
    Subst,
    Term,
    Trs,
    Var,
    apply_subst,
    fun_positions,
    match,
    mgu,
    pos_diff,
    pos_le,
    pos_parallel,
    rename_apart_with_map,
    replace_at,
    rule_variables,
    subterm_at,
    term_is_linear,
    var_positions,
)
from .rewrite import (
    FORWARD,
    Conversion,
    RedexPattern,
    Step,
    embed_parallel,
    lift_variable_step,
    sequentialize,
)

PARALLEL = "parallel"
FUNCTION = "function"
VARIABLE = "variable"
MIRRORED_FUNCTION = "mirrored-function"
MIRRORED_VARIABLE = "mirrored-variable"


@dataclass(frozen=True)
class LocalPeak:
    left: Step
    right: Step

    def __post_init__(self) -> None:
        if self.left.source != self.right.source:
            raise ValueError("peak branches must share their source term")

    @property
    def source(self) -> Term:
        return self.left.source


def mirror(pk: LocalPeak) -> LocalPeak:
    return LocalPeak(pk.right, pk.left)


def classify(pk: LocalPeak) -> str:
    p, q = pk.left.pos, pk.right.pos
    if pos_parallel(p, q):
        return PARALLEL
    if pos_le(q, p):
        rest = pos_diff(p, q)
        return FUNCTION if rest in fun_positions(pk.right.rule.lhs) else VARIABLE
    rest = pos_diff(q, p)
    return MIRRORED_FUNCTION if rest in fun_positions(pk.left.rule.lhs) else MIRRORED_VARIABLE


def join_parallel(pk: LocalPeak) -> tuple[Step, Step]:
    """Close a parallel peak by applying each branch's redex on the other side."""
    if classify(pk) != PARALLEL:
        raise WrongPeakKindError(f"expected a parallel peak, got {classify(pk)}")
    t, u = pk.left.target, pk.right.target
    via_t = replace_at(t, pk.right.pos, apply_subst(pk.right.rule.rhs, pk.right.subst))
    via_u = replace_at(u, pk.left.pos, apply_subst(pk.left.rule.rhs, pk.left.subst))
    assert via_t == via_u
    from_t = Step(t, pk.right.rule, pk.right.pos, dict(pk.right.subst), FORWARD, via_t)
    from_u = Step(u, pk.left.rule, pk.left.pos, dict(pk.left.subst), FORWARD, via_u)
    return from_t, from_u


def join_variable(pk: LocalPeak) -> tuple[Step, Conversion]:
    """Close a variable peak.

    The outer branch still applies after the inner rewrite (one step from
    the left target), while the inner rule is replayed once per copy the
    outer right-hand side makes of the overlapped variable.
    """
    if classify(pk) != VARIABLE:
        raise WrongPeakKindError(f"expected a variable peak, got {classify(pk)}")
    outer = pk.right
    if not term_is_linear(outer.rule.lhs):
        raise UnsupportedPeakError("outer rule of a variable peak must be left-linear")
    q = outer.pos
    below = pos_diff(pk.left.pos, q)
    hole = next(qq for qq in var_positions(outer.rule.lhs) if pos_le(qq, below))
    x = subterm_at(outer.rule.lhs, hole)
    assert isinstance(x, Var)
    inner_pat = RedexPattern(pos_diff(below, hole), pk.left.rule, pk.left.subst)
    sigma = outer.subst
    sx = sigma.get(x.name, Var(x.name))
    tau = dict(sigma)
    tau[x.name] = replace_at(sx, inner_pat.pos, apply_subst(inner_pat.rule.rhs, inner_pat.subst))

    t = pk.left.target
    assert t == replace_at(pk.source, q, apply_subst(outer.rule.lhs, tau))
    v = replace_at(pk.source, q, apply_subst(outer.rule.rhs, tau))
    outer_step = Step(t, outer.rule, q, tau, FORWARD, v)

    lifted = lift_variable_step(outer.rule.rhs, sigma, tau, x.name, inner_pat)
    conv = sequentialize(pk.right.target, embed_parallel(pk.right.target, q, lifted))
    assert conv.final == v
    return outer_step, conv


# ---------------------------------------------------------------------------
# critical peaks

@dataclass(frozen=True)
class CriticalPeak:
    """A most general overlap of two rules, with its two diverging steps.

    ``pos`` addresses the inner redex inside the outer left-hand side. The
    unifier ranges over the renamed rule variants; ``inner_subst`` and
    ``outer_subst`` are the matchers for the original rules, so the two
    steps of the peak can be rebuilt against the subject system directly.
    """

    outer_idx: int
    inner_idx: int
    pos: Position
    unifier: Subst
    peak_left: Term
    peak_source: Term
    peak_right: Term
    inner_rule: Rule
    outer_rule: Rule
    inner_subst: Subst
    outer_subst: Subst

    def __hash__(self) -> int:
        return hash((self.outer_idx, self.inner_idx, self.pos, self.peak_left, self.peak_source, self.peak_right))

    @property
    def is_trivial(self) -> bool:
        return self.peak_left == self.peak_right

    def left_step(self) -> Step:
        return Step(self.peak_source, self.inner_rule, self.pos, self.inner_subst, FORWARD, self.peak_left)

    def right_step(self) -> Step:
        return Step(self.peak_source, self.outer_rule, ROOT, self.outer_subst, FORWARD, self.peak_right)

    def as_local_peak(self) -> LocalPeak:
        return LocalPeak(self.left_step(), self.right_step())


def critical_peaks(trs: Trs) -> tuple[CriticalPeak, ...]:
    """All critical peaks, ordered by (outer rule, inner rule, position).

    Root overlaps of a rule with a variant of itself are kept; they are
    trivial unless the rule has extra right-hand-side variables.
    """
    out: list[CriticalPeak] = []
    for o, outer in enumerate(trs.rules):
        for i, inner in enumerate(trs.rules):
            inner_variant, renaming = rename_apart_with_map(outer, inner)
            for p in sorted(fun_positions(outer.lhs)):
                unifier = mgu(inner_variant.lhs, subterm_at(outer.lhs, p))
                if unifier is None:
                    continue
                peak_source = apply_subst(outer.lhs, unifier)
                peak_right = apply_subst(outer.rhs, unifier)
                peak_left = replace_at(peak_source, p, apply_subst(inner_variant.rhs, unifier))
                inner_subst = {
                    x: apply_subst(Var(renaming.get(x, x)), unifier) for x in sorted(rule_variables(inner))
                }
                outer_subst = {x: apply_subst(Var(x), unifier) for x in sorted(rule_variables(outer))}
                out.append(
                    CriticalPeak(
                        outer_idx=o,
                        inner_idx=i,
                        pos=p,
                        unifier=unifier,
                        peak_left=peak_left,
                        peak_source=peak_source,
                        peak_right=peak_right,
                        inner_rule=inner,
                        outer_rule=outer,
                        inner_subst=inner_subst,
                        outer_subst=outer_subst,
                    )
                )
    return tuple(out)


def match_function_peak(
    pk: LocalPeak, cps: tuple[CriticalPeak, ...]
) -> tuple[Position, Subst, CriticalPeak] | None:
    """Express a function peak as an instance of one of the critical peaks.

    Returns the hole position of the surrounding context, the instantiating
    substitution, and the critical peak. With the complete critical-peak
    set this always succeeds.
    """
    if classify(pk) != FUNCTION:
        raise WrongPeakKindError(f"expected a function peak, got {classify(pk)}")
    q = pk.right.pos
    rest = pos_diff(pk.left.pos, q)
    s = pk.source
    inside = subterm_at(s, q)
    for cp in cps:
        if cp.pos != rest:
            continue
        tau = match(cp.peak_source, inside)
        if tau is None:
            continue
        if replace_at(s, q, apply_subst(cp.peak_left, tau)) != pk.left.target:
            continue
        if replace_at(s, q, apply_subst(cp.peak_right, tau)) != pk.right.target:
            continue
        return q, tau, cp
    return None
