"""Peak classification, canonical joins, critical peaks, instance matching."""

from __future__ import annotations

import random

import pytest

from ddcheck.trs_format import parse_trs
from ddcheck.errors import UnsupportedPeakError, WrongPeakKindError
from ddcheck.peaks import (
    FUNCTION,
    MIRRORED_FUNCTION,
    MIRRORED_VARIABLE,
    PARALLEL,
    VARIABLE,
    LocalPeak,
    classify,
    critical_peaks,
    join_parallel,
    join_variable,
    match_function_peak,
    mirror,
)
from ddcheck.rewrite import step_at, validate_conversion, validate_step
from ddcheck.terms import Fun, Rule, Trs, Var, apply_subst, replace_at
from generators import instantiated_function_peak, random_left_linear_trs
from systems import FAN_COUNTEREXAMPLE_TRS, GROUND_LINEAR_TRS

X = Var("x")
A, B, C, D = Fun("a"), Fun("b"), Fun("c"), Fun("d")
AB = Rule(A, B)


def f(*args):
    return Fun("f", args)


def g(arg):
    return Fun("g", (arg,))


FAN = parse_trs(FAN_COUNTEREXAMPLE_TRS)
GROUND = parse_trs(GROUND_LINEAR_TRS)
DUP = Rule(g(X), f(X, X))


def peak(source, rule1, pos1, rule2, pos2):
    left = step_at(source, rule1, pos1)
    right = step_at(source, rule2, pos2)
    assert left is not None and right is not None
    return LocalPeak(left, right)


def test_classify_parallel():
    assert classify(peak(f(A, A), AB, (1,), AB, (2,))) == PARALLEL


def test_classify_function():
    assert classify(peak(f(A, A), AB, (1,), Rule(f(A, A), C), ())) == FUNCTION


def test_classify_variable():
    assert classify(peak(g(A), AB, (1,), DUP, ())) == VARIABLE


def test_classify_mirrored():
    assert classify(peak(f(A, A), Rule(f(A, A), C), (), AB, (1,))) == MIRRORED_FUNCTION
    assert classify(peak(g(A), DUP, (), AB, (1,))) == MIRRORED_VARIABLE


def test_mirror_swaps_kinds():
    pk = peak(f(A, A), AB, (1,), Rule(f(A, A), C), ())
    assert classify(mirror(pk)) == MIRRORED_FUNCTION
    par = peak(f(A, A), AB, (1,), AB, (2,))
    assert classify(mirror(par)) == PARALLEL


def test_join_parallel():
    pk = peak(f(A, A), AB, (1,), AB, (2,))
    from_t, from_u = join_parallel(pk)
    assert validate_step(from_t) and validate_step(from_u)
    assert from_t.target == from_u.target == f(B, B)
    assert from_t.pos == (2,) and from_u.pos == (1,)


def test_join_parallel_wrong_kind():
    with pytest.raises(WrongPeakKindError):
        join_parallel(peak(g(A), AB, (1,), DUP, ()))
    with pytest.raises(WrongPeakKindError):
        join_parallel(peak(A, AB, (), AB, ()))  # same position is never parallel


def test_join_parallel_random_peaks():
    import random

    from generators import matching_patterns, random_ground_term, random_trs
    from ddcheck.terms import pos_parallel

    rng = random.Random(29)
    joined = 0
    for _ in range(200):
        trs = random_trs(rng)
        t = random_ground_term(rng, rng.randint(2, 4))
        pats = matching_patterns(trs, t)
        pairs = [
            (p1, p2)
            for p1 in pats
            for p2 in pats
            if pos_parallel(p1.pos, p2.pos)
        ]
        if not pairs:
            continue
        p1, p2 = pairs[rng.randrange(len(pairs))]
        pk = peak(t, p1.rule, p1.pos, p2.rule, p2.pos)
        from_t, from_u = join_parallel(pk)
        assert validate_step(from_t) and validate_step(from_u)
        assert from_t.target == from_u.target
        joined += 1
    assert joined > 30


def test_join_variable_duplicating():
    pk = peak(g(A), AB, (1,), DUP, ())
    outer_step, conv = join_variable(pk)
    assert validate_step(outer_step)
    assert outer_step.source == g(B) and outer_step.target == f(B, B)
    assert outer_step.rule == DUP
    assert validate_conversion(conv)
    assert conv.start == f(A, A) and conv.final == f(B, B)
    assert len(conv.steps) == 2
    assert all(st.rule == AB for st in conv.steps)


def test_join_variable_erasing_outer():
    erasing = Rule(g(X), C)
    outer_step, conv = join_variable(peak(g(A), AB, (1,), erasing, ()))
    assert outer_step.target == C
    assert len(conv.steps) == 0


def test_join_variable_right_linear_outer():
    keeping = Rule(g(X), Fun("h", (X,)))
    _, conv = join_variable(peak(g(A), AB, (1,), keeping, ()))
    assert len(conv.steps) <= 1


def test_join_variable_rejects_non_left_linear():
    squash = Rule(f(X, X), X)
    pk = peak(f(g(A), g(A)), AB, (1, 1), squash, ())
    assert classify(pk) == VARIABLE
    with pytest.raises(UnsupportedPeakError):
        join_variable(pk)


def _nontrivial(trs):
    return [(cp.peak_left, cp.peak_source, cp.peak_right) for cp in critical_peaks(trs) if not cp.is_trivial]


def test_critical_peaks_ground_linear():
    found = _nontrivial(GROUND)
    assert (B, A, D) in found
    assert (D, A, B) in found
    assert (B, C, A) in found
    assert (A, C, B) in found
    assert len(found) == 4
    assert all(cp.peak_left == cp.peak_right for cp in critical_peaks(GROUND) if cp.pos == () and cp.inner_idx == cp.outer_idx)


def test_critical_peaks_fan_fixture():
    found = _nontrivial(FAN)
    expected = [
        (f(B, B), f(A, B), f(A, A)),
        (f(B, B), f(B, A), f(A, A)),
        (f(B, A), f(A, A), C),
        (f(A, B), f(A, A), C),
    ]
    assert sorted(map(repr, found)) == sorted(map(repr, expected))


def test_critical_peaks_orthogonal():
    trs = parse_trs("(VAR x)(RULES f(x) -> x a -> b)")
    assert _nontrivial(trs) == []


def test_critical_peaks_degenerate_rules_participate():
    # variable left-hand sides and free right-hand variables are allowed
    trs = Trs((Rule(Var("x"), A), Rule(B, Var("y"))))
    found = _nontrivial(trs)
    assert (A, B, Var("y")) in found
    # the self overlap of b -> y is not trivial: the two copies of y differ
    assert any(left == Var("y'") for left, _, _ in found)


def test_critical_peaks_are_valid_steps():
    for trs in (GROUND, FAN):
        for cp in critical_peaks(trs):
            assert validate_step(cp.left_step())
            assert validate_step(cp.right_step())


def test_critical_peaks_deterministic_order():
    once = critical_peaks(FAN)
    again = critical_peaks(FAN)
    assert once == again
    keys = [(cp.outer_idx, cp.inner_idx, cp.pos) for cp in once]
    assert keys == sorted(keys)


def test_match_function_peak_fan_example():
    cps = critical_peaks(FAN)
    pk = peak(f(A, A), FAN.rules[0], (1,), FAN.rules[3], ())
    result = match_function_peak(pk, cps)
    assert result is not None
    hole, tau, cp = result
    assert hole == ()
    assert apply_subst(cp.peak_source, tau) == f(A, A)


def test_match_function_peak_embedded():
    cps = critical_peaks(FAN)
    h_of = Fun("h", (f(A, A),))  # h only appears in the subject term
    pk = peak(h_of, FAN.rules[0], (1, 1), FAN.rules[3], (1,))
    result = match_function_peak(pk, cps)
    assert result is not None
    hole, tau, cp = result
    assert hole == (1,)
    assert replace_at(h_of, hole, apply_subst(cp.peak_source, tau)) == h_of
    assert replace_at(h_of, hole, apply_subst(cp.peak_left, tau)) == pk.left.target
    assert replace_at(h_of, hole, apply_subst(cp.peak_right, tau)) == pk.right.target


def test_match_function_peak_wrong_kind():
    with pytest.raises(WrongPeakKindError):
        match_function_peak(peak(f(A, A), AB, (1,), AB, (2,)), critical_peaks(FAN))


def test_match_function_peak_random_instances():
    rng = random.Random(17)
    matched = 0
    for _ in range(120):
        trs = random_left_linear_trs(rng)
        cps = critical_peaks(trs)
        if not cps:
            continue
        cp = cps[rng.randrange(len(cps))]
        built = instantiated_function_peak(rng, trs, cp)
        if built is None:
            continue
        left, right = built
        pk = LocalPeak(left, right)
        assert validate_step(left) and validate_step(right)
        assert classify(pk) == FUNCTION
        result = match_function_peak(pk, cps)
        assert result is not None
        hole, tau, found = result
        assert replace_at(pk.source, hole, apply_subst(found.peak_source, tau)) == pk.source
        assert replace_at(pk.source, hole, apply_subst(found.peak_left, tau)) == pk.left.target
        assert replace_at(pk.source, hole, apply_subst(found.peak_right, tau)) == pk.right.target
        matched += 1
    assert matched > 40
