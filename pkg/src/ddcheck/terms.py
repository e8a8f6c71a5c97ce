"""First-order terms, positions, substitutions, rules, and syntactic unification.

Terms are immutable: a ``Var`` holds a variable name, a ``Fun`` holds a
function symbol together with its argument tuple (the arity is the tuple
length). Positions are tuples of 1-based argument indices; the empty tuple
is the root. Substitutions are plain dicts from variable names to terms;
variables outside the dict are fixed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .errors import InvalidPositionError, SignatureError

Position = tuple[int, ...]
ROOT: Position = ()

FUNCTION = "function"
VARIABLE = "variable"

LINEAR = "linear"
LEFT_LINEAR = "left-linear"
NON_LINEAR = "neither"


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self) -> str:
        return f"Var({self.name!r})"


@dataclass(frozen=True)
class Fun:
    sym: str
    args: tuple["Term", ...] = ()

    def __repr__(self) -> str:
        if not self.args:
            return f"Fun({self.sym!r})"
        return f"Fun({self.sym!r}, {list(self.args)!r})"


Term = Var | Fun
Subst = dict[str, Term]


def term_to_text(t: Term) -> str:
    """Render ``f(g(x),a)`` style text, mainly for messages and CLI output."""
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.sym
    return f"{t.sym}({','.join(term_to_text(a) for a in t.args)})"


def pos_to_text(p: Position) -> str:
    return "eps" if p == ROOT else ".".join(str(i) for i in p)


# ---------------------------------------------------------------------------
# positions

def pos_le(q: Position, p: Position) -> bool:
    """True iff q is a prefix of p."""
    return len(q) <= len(p) and p[: len(q)] == q


def pos_lt(q: Position, p: Position) -> bool:
    return len(q) < len(p) and p[: len(q)] == q


def pos_parallel(p: Position, q: Position) -> bool:
    return not pos_le(p, q) and not pos_le(q, p)


def pos_diff(p: Position, q: Position) -> Position:
    """The remainder of p below q; requires q to be a prefix of p."""
    if not pos_le(q, p):
        raise ValueError(f"{q} is not a prefix of {p}")
    return p[len(q):]


def positions(t: Term) -> dict[Position, str]:
    """All positions of ``t``, each mapped to ``FUNCTION`` or ``VARIABLE``."""
    out: dict[Position, str] = {}
    _collect_positions(t, ROOT, out)
    return out


def _collect_positions(t: Term, here: Position, out: dict[Position, str]) -> None:
    if isinstance(t, Var):
        out[here] = VARIABLE
    else:
        out[here] = FUNCTION
        for i, arg in enumerate(t.args, start=1):
            _collect_positions(arg, here + (i,), out)


def fun_positions(t: Term) -> frozenset[Position]:
    return frozenset(p for p, kind in positions(t).items() if kind == FUNCTION)


def var_positions(t: Term) -> frozenset[Position]:
    return frozenset(p for p, kind in positions(t).items() if kind == VARIABLE)


def subterm_at(t: Term, p: Position) -> Term:
    for i in p:
        if isinstance(t, Var) or not 1 <= i <= len(t.args):
            raise InvalidPositionError(f"position {pos_to_text(p)} not in {term_to_text(t)}")
        t = t.args[i - 1]
    return t


def replace_at(t: Term, p: Position, s: Term) -> Term:
    if p == ROOT:
        return s
    i = p[0]
    if isinstance(t, Var) or not 1 <= i <= len(t.args):
        raise InvalidPositionError(f"position {pos_to_text(p)} not in {term_to_text(t)}")
    args = list(t.args)
    args[i - 1] = replace_at(args[i - 1], p[1:], s)
    return Fun(t.sym, tuple(args))


# ---------------------------------------------------------------------------
# variables and substitutions

def variables(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    out: set[str] = set()
    for arg in t.args:
        out |= variables(arg)
    return out


def var_count(t: Term, x: str) -> int:
    if isinstance(t, Var):
        return 1 if t.name == x else 0
    return sum(var_count(arg, x) for arg in t.args)


def apply_subst(t: Term, sigma: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    if not t.args:
        return t
    return Fun(t.sym, tuple(apply_subst(arg, sigma) for arg in t.args))


def match(pattern: Term, subject: Term) -> Subst | None:
    """A substitution sigma with pattern*sigma == subject, or None."""
    sigma: Subst = {}
    stack = [(pattern, subject)]
    while stack:
        pat, sub = stack.pop()
        if isinstance(pat, Var):
            bound = sigma.get(pat.name)
            if bound is None:
                sigma[pat.name] = sub
            elif bound != sub:
                return None
        else:
            if not isinstance(sub, Fun) or pat.sym != sub.sym or len(pat.args) != len(sub.args):
                return None
            stack.extend(zip(pat.args, sub.args))
    return sigma


def mgu(s: Term, t: Term) -> Subst | None:
    """An idempotent most general unifier of s and t, or None.

    Solved-form construction: equations are simplified under the partial
    solution before each binding, and every new binding is applied to the
    ranges already collected, so the result never mentions its own domain.
    The occurs check runs eagerly at binding time.
    """
    sigma: Subst = {}
    stack = [(s, t)]
    while stack:
        a, b = stack.pop()
        a = apply_subst(a, sigma)
        b = apply_subst(b, sigma)
        if a == b:
            continue
        if isinstance(a, Var):
            if a.name in variables(b):
                return None
            _bind(sigma, a.name, b)
        elif isinstance(b, Var):
            if b.name in variables(a):
                return None
            _bind(sigma, b.name, a)
        else:
            if a.sym != b.sym or len(a.args) != len(b.args):
                return None
            stack.extend(zip(a.args, b.args))
    return sigma


def _bind(sigma: Subst, x: str, t: Term) -> None:
    one = {x: t}
    for y in list(sigma):
        sigma[y] = apply_subst(sigma[y], one)
    sigma[x] = t


# ---------------------------------------------------------------------------
# rules and rewrite systems

@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term

    def __repr__(self) -> str:
        return f"Rule({term_to_text(self.lhs)} -> {term_to_text(self.rhs)})"


def rule_variables(rule: Rule) -> set[str]:
    return variables(rule.lhs) | variables(rule.rhs)


def is_duplicating(rule: Rule) -> bool:
    return any(var_count(rule.lhs, x) < var_count(rule.rhs, x) for x in variables(rule.rhs))


def term_is_linear(t: Term) -> bool:
    return all(var_count(t, x) <= 1 for x in variables(t))


@dataclass(frozen=True)
class Trs:
    rules: tuple[Rule, ...]
    signature: dict[str, int] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        sig: dict[str, int] = {}
        for rule in self.rules:
            for side in (rule.lhs, rule.rhs):
                _collect_signature(side, sig)
        object.__setattr__(self, "signature", sig)

    def __repr__(self) -> str:
        return f"Trs({list(self.rules)!r})"


def _collect_signature(t: Term, sig: dict[str, int]) -> None:
    if isinstance(t, Var):
        return
    known = sig.get(t.sym)
    if known is None:
        sig[t.sym] = len(t.args)
    elif known != len(t.args):
        raise SignatureError(f"symbol {t.sym} used with arities {known} and {len(t.args)}")
    for arg in t.args:
        _collect_signature(arg, sig)


def trs_variables(trs: Trs) -> set[str]:
    out: set[str] = set()
    for rule in trs.rules:
        out |= rule_variables(rule)
    return out


def split_duplicating(trs: Trs) -> tuple[Trs, Trs]:
    """Partition into (duplicating rules, non-duplicating rules)."""
    dup = tuple(r for r in trs.rules if is_duplicating(r))
    rest = tuple(r for r in trs.rules if not is_duplicating(r))
    return Trs(dup), Trs(rest)


def linearity(trs: Trs) -> str:
    if not all(term_is_linear(r.lhs) for r in trs.rules):
        return NON_LINEAR
    if all(term_is_linear(r.rhs) for r in trs.rules):
        return LINEAR
    return LEFT_LINEAR


def rename_apart(first: Rule, second: Rule) -> tuple[Rule, Rule]:
    """Variants of the two rules without common variables.

    The first rule is kept as is; clashing variables of the second are
    primed deterministically, so repeated runs yield identical variants.
    """
    renamed, _ = rename_apart_with_map(first, second)
    return first, renamed


def rename_apart_with_map(first: Rule, second: Rule) -> tuple[Rule, dict[str, str]]:
    """The renamed second rule and the variable renaming used for it."""
    fixed = rule_variables(first)
    own = rule_variables(second)
    taken = fixed | own
    renaming: dict[str, str] = {}
    for x in sorted(own & fixed):
        fresh = x + "'"
        while fresh in taken:
            fresh += "'"
        renaming[x] = fresh
        taken.add(fresh)
    if not renaming:
        return second, {}
    as_subst: Subst = {x: Var(y) for x, y in renaming.items()}
    return Rule(apply_subst(second.lhs, as_subst), apply_subst(second.rhs, as_subst)), renaming


def term_size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(arg) for arg in t.args)


def iter_subterms(t: Term) -> Iterator[tuple[Position, Term]]:
    yield ROOT, t
    if isinstance(t, Fun):
        for i, arg in enumerate(t.args, start=1):
            for p, sub in iter_subterms(arg):
                yield (i,) + p, sub
