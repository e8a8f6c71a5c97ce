"""Relative termination of the duplicating rules via linear interpretations.

Each function symbol gets a linear polynomial over the naturals with a
constant part and one coefficient per argument; coefficients are at least 1
so interpretations are monotone in every argument. Rules are compared
coefficient-wise after symbolic evaluation: a sound, deliberately
incomplete criterion that keeps certificates checkable by plain
arithmetic. Duplicating rules must decrease strictly (larger constant,
no coefficient growing), the remaining rules must not increase.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Mapping

from .errors import UninterpretedSymbolError
from .terms import Rule, Term, Trs, Var


@dataclass(frozen=True)
class LinearForm:
    const: int
    coeffs: tuple[tuple[str, int], ...]  # sorted by variable, zeros dropped

    def coeff(self, x: str) -> int:
        for name, value in self.coeffs:
            if name == x:
                return value
        return 0


def _form(const: int, coeffs: Mapping[str, int]) -> LinearForm:
    return LinearForm(const, tuple(sorted((x, c) for x, c in coeffs.items() if c != 0)))


@dataclass(frozen=True)
class Interpretation:
    """Per symbol: (constant, coefficient per argument position)."""

    entries: dict[str, tuple[int, ...]]

    def __post_init__(self) -> None:
        for sym, row in self.entries.items():
            if not row:
                raise ValueError(f"{sym}: entry must carry at least the constant")
            if row[0] < 0:
                raise ValueError(f"{sym}: negative constant not allowed")
            if any(c < 1 for c in row[1:]):
                raise ValueError(f"{sym}: argument coefficients must be at least 1")


def trivial_interpretation(signature: Mapping[str, int]) -> Interpretation:
    return Interpretation({sym: (0,) + (1,) * arity for sym, arity in signature.items()})


def eval_linear(t: Term, interp: Interpretation) -> LinearForm:
    """Symbolic value of a term: variables map to themselves."""
    if isinstance(t, Var):
        return _form(0, {t.name: 1})
    row = interp.entries.get(t.sym)
    if row is None or len(row) != len(t.args) + 1:
        raise UninterpretedSymbolError(f"no interpretation for {t.sym}/{len(t.args)}")
    const = row[0]
    coeffs: dict[str, int] = {}
    for factor, arg in zip(row[1:], t.args):
        sub = eval_linear(arg, interp)
        const += factor * sub.const
        for x, c in sub.coeffs:
            coeffs[x] = coeffs.get(x, 0) + factor * c
    return _form(const, coeffs)


def _weakly_decreasing(lhs: LinearForm, rhs: LinearForm) -> bool:
    if lhs.const < rhs.const:
        return False
    names = {x for x, _ in lhs.coeffs} | {x for x, _ in rhs.coeffs}
    return all(lhs.coeff(x) >= rhs.coeff(x) for x in names)


def _strictly_decreasing(lhs: LinearForm, rhs: LinearForm) -> bool:
    return lhs.const > rhs.const and _weakly_decreasing(lhs, rhs)


@dataclass(frozen=True)
class RelativeCheck:
    ok: bool
    failing: Rule | None = None
    which: str | None = None  # "strict" or "weak"


def verify_relative(strict_part: Trs, weak_part: Trs, interp: Interpretation) -> RelativeCheck:
    """Strict decrease on the first system, weak decrease on the second."""
    for rule in strict_part.rules:
        if not _strictly_decreasing(eval_linear(rule.lhs, interp), eval_linear(rule.rhs, interp)):
            return RelativeCheck(False, rule, "strict")
    for rule in weak_part.rules:
        if not _weakly_decreasing(eval_linear(rule.lhs, interp), eval_linear(rule.rhs, interp)):
            return RelativeCheck(False, rule, "weak")
    return RelativeCheck(True)


def _candidate_rows(arity: int, coeff_bound: int) -> Iterator[tuple[int, ...]]:
    for const in range(coeff_bound + 1):
        for coeffs in product(range(1, coeff_bound + 1), repeat=arity):
            yield (const,) + coeffs


def search_interpretation(strict_part: Trs, weak_part: Trs, coeff_bound: int) -> Interpretation | None:
    """First interpretation within the bound passing verify_relative.

    Exhaustive over symbols in sorted order, constants before coefficients,
    so the result is deterministic. Returns None when the bound is
    exhausted.
    """
    signature: dict[str, int] = {}
    for trs in (strict_part, weak_part):
        signature.update(trs.signature)
    symbols = sorted(signature)
    rows = [list(_candidate_rows(signature[sym], coeff_bound)) for sym in symbols]
    for combo in product(*rows):
        interp = Interpretation(dict(zip(symbols, combo)))
        if verify_relative(strict_part, weak_part, interp).ok:
            return interp
    return None


def interpretation_to_json(interp: Interpretation) -> dict[str, list[int]]:
    return {sym: list(row) for sym, row in sorted(interp.entries.items())}


def assignment_value(form: LinearForm, assignment: Mapping[str, int]) -> int:
    """Evaluate under concrete natural values; unmentioned variables are 0."""
    return form.const + sum(c * assignment.get(x, 0) for x, c in form.coeffs)
