"""Seeded random generators shared by the property-style tests."""

from __future__ import annotations

import random

from ddcheck.ars import FiniteArs, LabelOrders, make_ars, make_orders
from ddcheck.peaks import CriticalPeak
from ddcheck.rewrite import RedexPattern, Step, step_at
from ddcheck.terms import (
    Fun,
    Rule,
    Subst,
    Term,
    Trs,
    Var,
    apply_subst,
    iter_subterms,
    pos_parallel,
    positions,
    replace_at,
)

CONSTS = ("a", "b", "c")
UNARY = ("g", "h")


def random_term(rng: random.Random, depth: int = 3, variables: tuple[str, ...] = ("x", "y")) -> Term:
    if depth == 0 or rng.random() < 0.35:
        if variables and rng.random() < 0.4:
            return Var(rng.choice(variables))
        return Fun(rng.choice(CONSTS))
    if rng.random() < 0.5:
        return Fun(rng.choice(UNARY), (random_term(rng, depth - 1, variables),))
    return Fun("f", (random_term(rng, depth - 1, variables), random_term(rng, depth - 1, variables)))


def random_ground_term(rng: random.Random, depth: int = 3) -> Term:
    return random_term(rng, depth, variables=())


def small_rule_pool() -> list[Rule]:
    x = Var("x")
    return [
        Rule(Fun("a"), Fun("b")),
        Rule(Fun("b"), Fun("c")),
        Rule(Fun("c"), Fun("a")),
        Rule(Fun("g", (x,)), Fun("h", (x,))),
        Rule(Fun("h", (x,)), x),
        Rule(Fun("f", (x, Fun("a"))), Fun("g", (x,))),
    ]


def random_trs(rng: random.Random, max_rules: int = 4) -> Trs:
    pool = small_rule_pool()
    rng.shuffle(pool)
    return Trs(tuple(pool[: rng.randint(1, max_rules)]))


def random_linear_trs(rng: random.Random, max_rules: int = 4) -> Trs:
    """Linear rules over a tiny signature, biased toward root overlaps."""
    x = Var("x")
    candidates = [
        Rule(Fun("a"), Fun("b")),
        Rule(Fun("a"), Fun("c")),
        Rule(Fun("b"), Fun("a")),
        Rule(Fun("b"), Fun("c")),
        Rule(Fun("c"), Fun("b")),
        Rule(Fun("g", (x,)), x),
        Rule(Fun("g", (x,)), Fun("h", (x,))),
        Rule(Fun("h", (x,)), Fun("h", (x,))),
        Rule(Fun("g", (Fun("a"),)), Fun("b")),
        Rule(Fun("h", (Fun("b"),)), Fun("c")),
    ]
    rules = [candidates[rng.randrange(len(candidates))] for _ in range(rng.randint(1, max_rules))]
    return Trs(tuple(dict.fromkeys(rules)))


def random_left_linear_trs(rng: random.Random, max_rules: int = 5) -> Trs:
    x, y = Var("x"), Var("y")
    candidates = [
        Rule(Fun("a"), Fun("b")),
        Rule(Fun("b"), Fun("a")),
        Rule(Fun("g", (x,)), Fun("f", (x, x))),
        Rule(Fun("g", (x,)), x),
        Rule(Fun("f", (x, y)), Fun("f", (y, x))),
        Rule(Fun("f", (Fun("a"), y)), Fun("g", (y,))),
        Rule(Fun("f", (x, Fun("b"))), Fun("g", (x,))),
        Rule(Fun("h", (x,)), Fun("g", (x,))),
    ]
    rules = [candidates[rng.randrange(len(candidates))] for _ in range(rng.randint(1, max_rules))]
    return Trs(tuple(dict.fromkeys(rules)))


def matching_patterns(trs: Trs, t: Term) -> list[RedexPattern]:
    out = []
    for p in sorted(positions(t)):
        for rule in trs.rules:
            st = step_at(t, rule, p)
            if st is not None:
                out.append(RedexPattern(p, rule, st.subst))
    return out


def random_parallel_instance(rng: random.Random, trs: Trs) -> tuple[Term, frozenset[RedexPattern]]:
    """A term together with a random pairwise-parallel pattern set on it."""
    t = random_ground_term(rng, depth=rng.randint(1, 4))
    candidates = matching_patterns(trs, t)
    rng.shuffle(candidates)
    chosen: list[RedexPattern] = []
    for pat in candidates:
        if all(pos_parallel(pat.pos, other.pos) for other in chosen):
            chosen.append(pat)
            if len(chosen) >= 4:
                break
    return t, frozenset(chosen)


def instantiated_function_peak(
    rng: random.Random, trs: Trs, cp: CriticalPeak
) -> tuple[Step, Step] | None:
    """A concrete function peak: the critical peak under a context and grounding."""
    grounding: Subst = {v: random_ground_term(rng, 2) for v in _peak_variables(cp)}
    context = random_ground_term(rng, rng.randint(0, 2))
    spots = [p for p, _ in iter_subterms(context)]
    hole = spots[rng.randrange(len(spots))]
    source = replace_at(context, hole, apply_subst(cp.peak_source, grounding))
    left_target = replace_at(context, hole, apply_subst(cp.peak_left, grounding))
    right_target = replace_at(context, hole, apply_subst(cp.peak_right, grounding))
    inner_subst = {v: apply_subst(t, grounding) for v, t in cp.inner_subst.items()}
    outer_subst = {v: apply_subst(t, grounding) for v, t in cp.outer_subst.items()}
    left = Step(source, cp.inner_rule, hole + cp.pos, inner_subst, "fw", left_target)
    right = Step(source, cp.outer_rule, hole, outer_subst, "fw", right_target)
    return left, right


def _peak_variables(cp: CriticalPeak) -> set[str]:
    from ddcheck.terms import variables

    out = variables(cp.peak_source) | variables(cp.peak_left) | variables(cp.peak_right)
    for table in (cp.inner_subst, cp.outer_subst):
        for t in table.values():
            out |= variables(t)
    return out


def random_finite_ars(rng: random.Random, max_objects: int = 6, max_labels: int = 4) -> FiniteArs:
    objects = [chr(ord("A") + i) for i in range(rng.randint(2, max_objects))]
    labels = [str(i) for i in range(1, rng.randint(1, max_labels) + 1)]
    edges = {
        (rng.choice(objects), rng.choice(labels), rng.choice(objects))
        for _ in range(rng.randint(1, 10))
    }
    return make_ars(edges, objects=objects, labels=labels)


def random_compatible_orders(rng: random.Random, labels: frozenset[str]) -> LabelOrders:
    """Orders derived from a numeric rank, so compatibility holds by shape."""
    rank = {lab: rng.randint(0, 3) for lab in labels}
    gap = rng.randint(1, 2)
    strict = {(a, b) for a in labels for b in labels if rank[a] - rank[b] >= gap}
    weak = {(a, b) for a in labels for b in labels if rank[a] >= rank[b]}
    return make_orders(labels, strict, weak)
