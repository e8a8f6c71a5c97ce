"""A small certificate prover: bounded join search plus label search.

Joins are plain forward rewrite sequences found by breadth-first search
from both branches of each nontrivial critical peak, so the emitted
certificates are valley-shaped even in conversion mode (the backward
components stay empty). Rule labels are found by exhaustive search over
small natural numbers; everything is deterministic, so the same input and
configuration always produce the same certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .certificate import (
    Certificate,
    CertStep,
    ConvSide,
    MODE_CONV,
    MODE_LINEAR,
    MODE_VALLEY,
    PeakEntry,
    ValleySide,
)
from .errors import ResourceExhaustedError
from .labeling import greedy_split
from .peaks import CriticalPeak, critical_peaks
from .relterm import search_interpretation, trivial_interpretation, verify_relative
from .rewrite import FORWARD, Step, successors
from .terms import LEFT_LINEAR, LINEAR, Term, Trs, linearity, split_duplicating

VALLEY = "valley"
CONV = "conv"

DEFAULT_PATH_CAP = 20_000


@dataclass(frozen=True)
class ProverConfig:
    join_depth: int = 3
    max_label: int = 2
    coeff_bound: int = 2
    mode: str = VALLEY  # "valley" | "conv"
    max_candidates: int = 64
    path_cap: int = DEFAULT_PATH_CAP


@dataclass(frozen=True)
class _Path:
    final: Term
    rules: tuple[int, ...]  # 0-based rule indices
    steps: tuple[Step, ...]


def _forward_paths(trs: Trs, start: Term, depth: int, path_cap: int) -> list[_Path]:
    paths = [_Path(start, (), ())]
    frontier = paths[:]
    for _ in range(depth):
        nxt = []
        for path in frontier:
            for idx, st in successors(trs, path.final):
                nxt.append(_Path(st.target, path.rules + (idx,), path.steps + (st,)))
                if len(paths) + len(nxt) > path_cap:
                    raise ResourceExhaustedError(f"more than {path_cap} rewrite paths explored")
        paths.extend(nxt)
        frontier = nxt
        if not frontier:
            break
    return paths


def find_joins(
    trs: Trs,
    cp: CriticalPeak,
    depth: int,
    max_candidates: int = 64,
    path_cap: int = DEFAULT_PATH_CAP,
) -> list[tuple[_Path, _Path]]:
    """Meeting pairs of forward sequences from the two peak targets.

    Enumerated shortest combined length first, capped at
    ``max_candidates`` pairs.
    """
    left_paths = _forward_paths(trs, cp.peak_left, depth, path_cap)
    right_paths = _forward_paths(trs, cp.peak_right, depth, path_cap)
    by_length: dict[int, list[tuple[_Path, _Path]]] = {}
    for lp in left_paths:
        for rp in right_paths:
            if lp.final == rp.final:
                by_length.setdefault(len(lp.rules) + len(rp.rules), []).append((lp, rp))
    out: list[tuple[_Path, _Path]] = []
    for total in sorted(by_length):
        for pair in by_length[total]:
            out.append(pair)
            if len(out) >= max_candidates:
                return out
    return out


def _pair_decreasing(labels: tuple[int, ...], cp: CriticalPeak, pair: tuple[_Path, _Path]) -> bool:
    alpha, beta = labels[cp.inner_idx], labels[cp.outer_idx]
    left, right = pair
    if greedy_split(alpha, beta, [labels[i] for i in left.rules]) is None:
        return False
    return greedy_split(beta, alpha, [labels[i] for i in right.rules]) is not None


def assign_labels(
    trs: Trs,
    constraints: list[tuple[CriticalPeak, list[tuple[_Path, _Path]]]],
    max_label: int,
) -> tuple[int, ...] | None:
    """First rule labeling under which every peak has a decreasing join.

    Searches maps from rules to 0..max_label in lexicographic order;
    None when the space is exhausted.
    """
    for combo in product(range(max_label + 1), repeat=len(trs.rules)):
        labels = tuple(combo)
        if all(any(_pair_decreasing(labels, cp, pair) for pair in pairs) for cp, pairs in constraints):
            return labels
    return None


def _valley_entry(cp: CriticalPeak, pair: tuple[_Path, _Path]) -> PeakEntry:
    def side(path: _Path) -> ValleySide:
        return ValleySide(tuple(CertStep(i + 1, st.pos, FORWARD, st.target) for i, st in zip(path.rules, path.steps)))

    return PeakEntry(cp.peak_source, side(pair[0]), side(pair[1]))


def _conv_entry(labels: tuple[int, ...], cp: CriticalPeak, pair: tuple[_Path, _Path]) -> PeakEntry:
    """Wrap a valley join in the pre-decomposed diagram shape."""

    def side(path: _Path, alpha: int, beta: int) -> ConvSide:
        split = greedy_split(alpha, beta, [labels[i] for i in path.rules])
        assert split is not None
        n1, n2 = len(split[0]), len(split[1])
        steps = tuple(CertStep(i + 1, st.pos, FORWARD, st.target) for i, st in zip(path.rules, path.steps))
        return ConvSide(steps[:n1], steps[n1] if n2 else None, steps[n1 + n2:])

    alpha, beta = labels[cp.inner_idx], labels[cp.outer_idx]
    return PeakEntry(cp.peak_source, side(pair[0], alpha, beta), side(pair[1], beta, alpha))


def prove(trs: Trs, cfg: ProverConfig = ProverConfig()) -> Certificate | None:
    """Search for a certificate the checker accepts; None when any stage fails."""
    lin = linearity(trs)
    if lin == LINEAR:
        mode = MODE_LINEAR
    elif lin == LEFT_LINEAR:
        mode = MODE_VALLEY if cfg.mode == VALLEY else MODE_CONV
    else:
        return None

    relterm = None
    if mode != MODE_LINEAR:
        dup, rest = split_duplicating(trs)
        if not dup.rules:
            relterm = trivial_interpretation(trs.signature)
            assert verify_relative(dup, rest, relterm).ok
        else:
            relterm = search_interpretation(dup, rest, cfg.coeff_bound)
            if relterm is None:
                return None

    cps = critical_peaks(trs)
    constraints = []
    for cp in cps:
        if cp.is_trivial:
            continue
        pairs = find_joins(trs, cp, cfg.join_depth, cfg.max_candidates, cfg.path_cap)
        if not pairs:
            return None
        constraints.append((cp, pairs))

    labels = assign_labels(trs, constraints, cfg.max_label)
    if labels is None:
        return None

    entries = []
    longest = 0
    for cp, pairs in constraints:
        chosen = next(pair for pair in pairs if _pair_decreasing(labels, cp, pair))
        longest = max(longest, len(chosen[0].rules), len(chosen[1].rules))
        if mode == MODE_VALLEY:
            entries.append(_valley_entry(cp, chosen))
        else:
            entries.append(_conv_entry(labels, cp, chosen))

    fan_bound = longest + 1 if mode == MODE_CONV else None
    return Certificate(mode, labels, relterm, fan_bound, tuple(entries))
