"""Certificate model, JSON wire format, and the checking pipeline.

A certificate claims confluence of a rewrite system and carries everything
the checker cannot cheaply invent: one label per rule, a joining diagram
for every nontrivial critical peak, evidence for relative termination of
the duplicating rules (an interpretation, or the explicit marker
``"assumed"``), and, for conversion-style diagrams, a step bound for the
reachability side condition.

Three modes are supported. ``linear-rl`` applies to fully linear systems
and needs neither termination evidence nor the reachability condition.
``valley-rl`` and ``conv-rl`` apply to left-linear systems and carry the
termination evidence; valley entries are plain forward sequences that the
checker decomposes itself, conversion entries arrive pre-decomposed into
the six diagram components and additionally pass the reachability check.

Certificates reference rules by 1-based index into the subject system
rather than repeating rule text, which keeps duplicate rules unambiguous.
The joining steps carry no matchers; the checker re-derives them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import (
    CertificateFormatError,
    InvalidPositionError,
    ResourceExhaustedError,
    UninterpretedSymbolError,
)
from .labeling import Diagram, eld_bullets, greedy_split, validate_diagram, check_fan
from .peaks import CriticalPeak, critical_peaks
from .relterm import Interpretation, interpretation_to_json, verify_relative
from .rewrite import BACKWARD, DEFAULT_NODE_CAP, FORWARD, Conversion, Step, step_at
from .trs_format import parse_trs  # noqa: F401  (rewrite systems and certificates parse side by side)
from .terms import (
    LEFT_LINEAR,
    LINEAR,
    ROOT,
    Fun,
    Position,
    Subst,
    Term,
    Trs,
    Var,
    apply_subst,
    linearity,
    match,
    split_duplicating,
    term_to_text,
)

MODE_LINEAR = "linear-rl"
MODE_VALLEY = "valley-rl"
MODE_CONV = "conv-rl"
MODES = (MODE_LINEAR, MODE_VALLEY, MODE_CONV)

ASSUMED = "assumed"

ACCEPT = "accept"
ACCEPT_CONDITIONAL = "accept-conditional"
REJECT = "reject"
ERROR = "error"

R_MODE = "mode-linearity"
R_LABELS = "labels-length"
R_RELTERM = "relative-termination"
R_UNINTERPRETED = "uninterpreted-symbol"
R_RULE_INDEX = "rule-index"
R_UNMATCHED = "peak-unmatched"
R_STRUCTURE = "diagram-structure"
R_NOT_DECREASING = "diagram-labels"
R_VALLEY_SPLIT = "valley-split"
R_FAN = "fan-violation"

EXIT_CODES = {ACCEPT: 0, ACCEPT_CONDITIONAL: 3, REJECT: 1, ERROR: 2}


@dataclass(frozen=True)
class CertStep:
    rule: int  # 1-based index into the subject system
    pos: Position
    direction: str  # "fw" | "bw"
    to: Term


@dataclass(frozen=True)
class ConvSide:
    conv1: tuple[CertStep, ...] = ()
    step: CertStep | None = None
    conv2: tuple[CertStep, ...] = ()


@dataclass(frozen=True)
class ValleySide:
    seq: tuple[CertStep, ...] = ()


@dataclass(frozen=True)
class PeakEntry:
    source: Term
    left: ConvSide | ValleySide
    right: ConvSide | ValleySide


@dataclass(frozen=True)
class Certificate:
    mode: str
    labels: tuple[int, ...]
    relterm: Interpretation | str | None  # Interpretation, ASSUMED, or None
    fan_bound: int | None
    peaks: tuple[PeakEntry, ...]


@dataclass(frozen=True)
class Verdict:
    status: str
    reason: str | None = None
    detail: str | None = None
    peak_index: int | None = None
    offending: tuple[Term, ...] = ()
    assumption: str | None = None

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]


# ---------------------------------------------------------------------------
# JSON wire format

def term_to_json(t: Term) -> dict:
    if isinstance(t, Var):
        return {"var": t.name}
    return {"fun": t.sym, "args": [term_to_json(a) for a in t.args]}


def term_from_json(obj: object, path: str) -> Term:
    if not isinstance(obj, dict):
        raise CertificateFormatError(path, "term must be an object")
    if set(obj) == {"var"}:
        if not isinstance(obj["var"], str):
            raise CertificateFormatError(path + ".var", "variable name must be a string")
        return Var(obj["var"])
    if "fun" in obj and set(obj) <= {"fun", "args"}:
        if not isinstance(obj["fun"], str):
            raise CertificateFormatError(path + ".fun", "function symbol must be a string")
        args = obj.get("args", [])
        if not isinstance(args, list):
            raise CertificateFormatError(path + ".args", "arguments must be a list")
        return Fun(obj["fun"], tuple(term_from_json(a, f"{path}.args[{i}]") for i, a in enumerate(args)))
    raise CertificateFormatError(path, "term must be {'var': name} or {'fun': name, 'args': [...]}")


def _nat(obj: object, path: str, least: int = 0) -> int:
    if not isinstance(obj, int) or isinstance(obj, bool) or obj < least:
        raise CertificateFormatError(path, f"expected an integer >= {least}")
    return obj


def _step_from_json(obj: object, path: str) -> CertStep:
    if not isinstance(obj, dict):
        raise CertificateFormatError(path, "step must be an object")
    unknown = set(obj) - {"rule", "pos", "dir", "to"}
    if unknown:
        raise CertificateFormatError(path, f"unknown step keys {sorted(unknown)}")
    for key in ("rule", "pos", "dir", "to"):
        if key not in obj:
            raise CertificateFormatError(path, f"missing step key {key!r}")
    rule = _nat(obj["rule"], path + ".rule", least=1)
    if not isinstance(obj["pos"], list):
        raise CertificateFormatError(path + ".pos", "position must be a list of integers")
    pos = tuple(_nat(i, f"{path}.pos[{k}]", least=1) for k, i in enumerate(obj["pos"]))
    if obj["dir"] not in (FORWARD, BACKWARD):
        raise CertificateFormatError(path + ".dir", "direction must be 'fw' or 'bw'")
    to = term_from_json(obj["to"], path + ".to")
    return CertStep(rule, pos, obj["dir"], to)


def _steps_from_json(obj: object, path: str) -> tuple[CertStep, ...]:
    if not isinstance(obj, list):
        raise CertificateFormatError(path, "expected a list of steps")
    return tuple(_step_from_json(s, f"{path}[{i}]") for i, s in enumerate(obj))


def _conv_side_from_json(obj: object, path: str) -> ConvSide:
    if not isinstance(obj, dict):
        raise CertificateFormatError(path, "side must be an object")
    unknown = set(obj) - {"conv1", "step", "conv2"}
    if unknown:
        raise CertificateFormatError(path, f"unknown side keys {sorted(unknown)}")
    step = obj.get("step")
    return ConvSide(
        conv1=_steps_from_json(obj.get("conv1", []), path + ".conv1"),
        step=None if step is None else _step_from_json(step, path + ".step"),
        conv2=_steps_from_json(obj.get("conv2", []), path + ".conv2"),
    )


def _valley_side_from_json(obj: object, path: str) -> ValleySide:
    if not isinstance(obj, dict):
        raise CertificateFormatError(path, "side must be an object")
    unknown = set(obj) - {"seq"}
    if unknown:
        raise CertificateFormatError(path, f"unknown side keys {sorted(unknown)}")
    return ValleySide(seq=_steps_from_json(obj.get("seq", []), path + ".seq"))


def _relterm_from_json(obj: object, path: str) -> Interpretation | str:
    if obj == ASSUMED:
        return ASSUMED
    if not isinstance(obj, dict) or set(obj) != {"interpretation"}:
        raise CertificateFormatError(path, "expected 'assumed' or {'interpretation': {...}}")
    table = obj["interpretation"]
    if not isinstance(table, dict):
        raise CertificateFormatError(path + ".interpretation", "expected an object")
    entries: dict[str, tuple[int, ...]] = {}
    for sym, row in table.items():
        if not isinstance(row, list) or not row:
            raise CertificateFormatError(f"{path}.interpretation.{sym}", "expected [const, coeff...]")
        entries[sym] = tuple(_nat(v, f"{path}.interpretation.{sym}[{i}]") for i, v in enumerate(row))
    try:
        return Interpretation(entries)
    except ValueError as exc:
        raise CertificateFormatError(path + ".interpretation", str(exc)) from None


def certificate_from_json(obj: object) -> Certificate:
    if not isinstance(obj, dict):
        raise CertificateFormatError("$", "certificate must be an object")
    unknown = set(obj) - {"mode", "labels", "relative_termination", "fan_bound", "peaks"}
    if unknown:
        raise CertificateFormatError("$", f"unknown keys {sorted(unknown)}")
    mode = obj.get("mode")
    if mode not in MODES:
        raise CertificateFormatError("$.mode", f"mode must be one of {list(MODES)}")
    raw_labels = obj.get("labels")
    if not isinstance(raw_labels, list):
        raise CertificateFormatError("$.labels", "expected a list of naturals, one per rule")
    labels = tuple(_nat(v, f"$.labels[{i}]") for i, v in enumerate(raw_labels))

    raw_rt = obj.get("relative_termination")
    if mode == MODE_LINEAR:
        if raw_rt is not None:
            raise CertificateFormatError("$.relative_termination", "not allowed in linear-rl mode")
        relterm = None
    else:
        if raw_rt is None:
            raise CertificateFormatError("$.relative_termination", f"required in {mode} mode")
        relterm = _relterm_from_json(raw_rt, "$.relative_termination")

    raw_fan = obj.get("fan_bound")
    if mode == MODE_CONV:
        fan_bound = _nat(raw_fan, "$.fan_bound")
    elif raw_fan is not None:
        raise CertificateFormatError("$.fan_bound", f"not allowed in {mode} mode")
    else:
        fan_bound = None

    raw_peaks = obj.get("peaks")
    if not isinstance(raw_peaks, list):
        raise CertificateFormatError("$.peaks", "expected a list of peak entries")
    side_parser = _valley_side_from_json if mode == MODE_VALLEY else _conv_side_from_json
    entries = []
    for i, raw in enumerate(raw_peaks):
        path = f"$.peaks[{i}]"
        if not isinstance(raw, dict):
            raise CertificateFormatError(path, "peak entry must be an object")
        unknown = set(raw) - {"source", "left", "right"}
        if unknown:
            raise CertificateFormatError(path, f"unknown keys {sorted(unknown)}")
        for key in ("source", "left", "right"):
            if key not in raw:
                raise CertificateFormatError(path, f"missing key {key!r}")
        entries.append(
            PeakEntry(
                source=term_from_json(raw["source"], path + ".source"),
                left=side_parser(raw["left"], path + ".left"),
                right=side_parser(raw["right"], path + ".right"),
            )
        )
    return Certificate(mode, labels, relterm, fan_bound, tuple(entries))


def parse_certificate(text: str) -> Certificate:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError("$", f"invalid JSON: {exc}") from None
    return certificate_from_json(obj)


def _step_to_json(e: CertStep) -> dict:
    return {"rule": e.rule, "pos": list(e.pos), "dir": e.direction, "to": term_to_json(e.to)}


def _side_to_json(side: ConvSide | ValleySide) -> dict:
    if isinstance(side, ValleySide):
        return {"seq": [_step_to_json(e) for e in side.seq]}
    return {
        "conv1": [_step_to_json(e) for e in side.conv1],
        "step": None if side.step is None else _step_to_json(side.step),
        "conv2": [_step_to_json(e) for e in side.conv2],
    }


def certificate_to_json(cert: Certificate) -> dict:
    if cert.relterm is None:
        relterm = None
    elif cert.relterm == ASSUMED:
        relterm = ASSUMED
    else:
        relterm = {"interpretation": interpretation_to_json(cert.relterm)}
    return {
        "mode": cert.mode,
        "labels": list(cert.labels),
        "relative_termination": relterm,
        "fan_bound": cert.fan_bound,
        "peaks": [
            {"source": term_to_json(e.source), "left": _side_to_json(e.left), "right": _side_to_json(e.right)}
            for e in cert.peaks
        ],
    }


def serialize_certificate(cert: Certificate) -> str:
    return json.dumps(certificate_to_json(cert), indent=2)


# ---------------------------------------------------------------------------
# matching entries against computed peaks

def variable_renaming(pattern: Term, target: Term) -> Subst | None:
    """A variable-to-variable injective matcher, or None."""
    rho = match(pattern, target)
    if rho is None:
        return None
    images = list(rho.values())
    if not all(isinstance(v, Var) for v in images):
        return None
    if len({v.name for v in images}) != len(images):
        return None
    return rho


def match_entry(cp: CriticalPeak, entry: PeakEntry) -> Subst | None:
    """The renaming aligning the entry with the computed peak, if any."""
    return variable_renaming(entry.source, cp.peak_source)


# ---------------------------------------------------------------------------
# checking

class _EntryProblem(Exception):
    def __init__(self, reason: str, detail: str):
        self.reason = reason
        self.detail = detail
        super().__init__(detail)


@dataclass(frozen=True)
class _EntryOutcome:
    ok: bool
    reason: str | None = None
    detail: str | None = None
    diagram: Diagram | None = None


def _materialize_step(trs: Trs, rho: Subst, at: Term, e: CertStep, path: str) -> Step:
    if not 1 <= e.rule <= len(trs.rules):
        raise _EntryProblem(R_RULE_INDEX, f"{path}: rule index {e.rule} out of range")
    rule = trs.rules[e.rule - 1]
    to = apply_subst(e.to, rho)
    try:
        if e.direction == FORWARD:
            st = step_at(at, rule, e.pos)
            if st is None:
                raise _EntryProblem(R_STRUCTURE, f"{path}: rule {e.rule} does not apply to {term_to_text(at)}")
            if st.target != to:
                raise _EntryProblem(
                    R_STRUCTURE,
                    f"{path}: step yields {term_to_text(st.target)}, certificate says {term_to_text(to)}",
                )
            return st
        base = step_at(to, rule, e.pos)
        if base is None:
            raise _EntryProblem(R_STRUCTURE, f"{path}: rule {e.rule} does not apply to {term_to_text(to)}")
        if base.target != at:
            raise _EntryProblem(
                R_STRUCTURE,
                f"{path}: backward step starts from {term_to_text(base.target)}, not {term_to_text(at)}",
            )
        return Step(at, rule, e.pos, base.subst, BACKWARD, to)
    except InvalidPositionError as exc:
        raise _EntryProblem(R_STRUCTURE, f"{path}: {exc}") from None


def _materialize_conv_side(
    trs: Trs, rho: Subst, start: Term, side: ConvSide, name: str
) -> tuple[Conversion, Step | None, Conversion]:
    at = start
    first = []
    for k, e in enumerate(side.conv1):
        st = _materialize_step(trs, rho, at, e, f"{name}.conv1[{k}]")
        first.append(st)
        at = st.target
    conv1 = Conversion(start, tuple(first))
    joining = None
    if side.step is not None:
        if side.step.direction != FORWARD:
            raise _EntryProblem(R_STRUCTURE, f"{name}.step: joining step must be forward")
        joining = _materialize_step(trs, rho, at, side.step, f"{name}.step")
        at = joining.target
    second = []
    mid = at
    for k, e in enumerate(side.conv2):
        st = _materialize_step(trs, rho, at, e, f"{name}.conv2[{k}]")
        second.append(st)
        at = st.target
    return conv1, joining, Conversion(mid, tuple(second))


def _check_conv_entry(
    trs: Trs, labels: tuple[int, ...], cp: CriticalPeak, entry: PeakEntry, rho: Subst
) -> _EntryOutcome:
    assert isinstance(entry.left, ConvSide) and isinstance(entry.right, ConvSide)
    try:
        cl1, sl, cl2 = _materialize_conv_side(trs, rho, cp.peak_left, entry.left, "left")
        cr1, sr, cr2 = _materialize_conv_side(trs, rho, cp.peak_right, entry.right, "right")
    except _EntryProblem as problem:
        return _EntryOutcome(False, problem.reason, problem.detail)
    diagram = Diagram(cp.as_local_peak(), cl1, sl, cl2, cr1, sr, cr2)
    defect = validate_diagram(diagram)
    if defect is not None:
        return _EntryOutcome(False, R_STRUCTURE, defect)
    label_of = lambda e: labels[e.rule - 1]
    failure = eld_bullets(
        labels[cp.inner_idx],
        labels[cp.outer_idx],
        [label_of(e) for e in entry.left.conv1],
        None if entry.left.step is None else label_of(entry.left.step),
        [label_of(e) for e in entry.left.conv2],
        [label_of(e) for e in entry.right.conv1],
        None if entry.right.step is None else label_of(entry.right.step),
        [label_of(e) for e in entry.right.conv2],
    )
    if failure is not None:
        return _EntryOutcome(False, R_NOT_DECREASING, failure)
    return _EntryOutcome(True, diagram=diagram)


def _check_valley_entry(
    trs: Trs, labels: tuple[int, ...], cp: CriticalPeak, entry: PeakEntry, rho: Subst
) -> _EntryOutcome:
    assert isinstance(entry.left, ValleySide) and isinstance(entry.right, ValleySide)
    finals = []
    try:
        for name, side, start in (("left", entry.left, cp.peak_left), ("right", entry.right, cp.peak_right)):
            at = start
            for k, e in enumerate(side.seq):
                if e.direction != FORWARD:
                    raise _EntryProblem(R_STRUCTURE, f"{name}.seq[{k}]: valley sides must be forward sequences")
                at = _materialize_step(trs, rho, at, e, f"{name}.seq[{k}]").target
            finals.append(at)
    except _EntryProblem as problem:
        return _EntryOutcome(False, problem.reason, problem.detail)
    if finals[0] != finals[1]:
        return _EntryOutcome(
            False,
            R_STRUCTURE,
            f"sides end at {term_to_text(finals[0])} and {term_to_text(finals[1])}",
        )
    alpha, beta = labels[cp.inner_idx], labels[cp.outer_idx]
    left_labels = [labels[e.rule - 1] for e in entry.left.seq]
    right_labels = [labels[e.rule - 1] for e in entry.right.seq]
    if greedy_split(alpha, beta, left_labels) is None:
        return _EntryOutcome(False, R_VALLEY_SPLIT, f"left labels {left_labels} admit no split for ({alpha},{beta})")
    if greedy_split(beta, alpha, right_labels) is None:
        return _EntryOutcome(False, R_VALLEY_SPLIT, f"right labels {right_labels} admit no split for ({beta},{alpha})")
    return _EntryOutcome(True)


def _mirror_discharges(cp: CriticalPeak, other: CriticalPeak) -> bool:
    """True when ``other`` is the opposite orientation of the root peak ``cp``."""
    if cp.pos != ROOT or other.pos != ROOT:
        return False
    if other.inner_idx != cp.outer_idx or other.outer_idx != cp.inner_idx:
        return False
    rho = variable_renaming(other.peak_source, cp.peak_source)
    if rho is None:
        return False
    return (
        apply_subst(other.peak_left, rho) == cp.peak_right
        and apply_subst(other.peak_right, rho) == cp.peak_left
    )


def check(trs: Trs, cert: Certificate, node_cap: int = DEFAULT_NODE_CAP) -> Verdict:
    """Run the full pipeline and report the first failure, if any.

    Stages: linearity gate for the mode, relative termination of the
    duplicating rules (unless assumed), critical peak computation, matching
    and checking a joining diagram for every nontrivial peak (an entry for
    one orientation of a root overlap also discharges its mirror image),
    and, for conversion certificates, the reachability condition on every
    diagram. Failures are reported in peak enumeration order; blowing the
    reachability node cap is an error verdict, not a reject.
    """
    lin = linearity(trs)
    if cert.mode == MODE_LINEAR and lin != LINEAR:
        return Verdict(REJECT, R_MODE, f"linear-rl requires a linear system, got {lin}")
    if cert.mode in (MODE_VALLEY, MODE_CONV) and lin not in (LINEAR, LEFT_LINEAR):
        return Verdict(REJECT, R_MODE, f"{cert.mode} requires a left-linear system, got {lin}")
    if len(cert.labels) != len(trs.rules):
        return Verdict(REJECT, R_LABELS, f"{len(cert.labels)} labels for {len(trs.rules)} rules")

    assumption = None
    if cert.mode in (MODE_VALLEY, MODE_CONV):
        dup, rest = split_duplicating(trs)
        if cert.relterm == ASSUMED:
            assumption = "relative termination of the duplicating rules was assumed, not verified"
        else:
            try:
                rt = verify_relative(dup, rest, cert.relterm)
            except UninterpretedSymbolError as exc:
                return Verdict(REJECT, R_UNINTERPRETED, str(exc))
            if not rt.ok:
                return Verdict(REJECT, R_RELTERM, f"{rt.which} decrease fails for {rt.failing!r}")

    cps = critical_peaks(trs)
    check_entry = _check_valley_entry if cert.mode == MODE_VALLEY else _check_conv_entry
    diagrams: dict[int, Diagram | None] = {}
    entry_checked: set[int] = set()
    pending: dict[int, _EntryOutcome | None] = {}
    for idx, cp in enumerate(cps):
        if cp.is_trivial:
            continue
        first_failure: _EntryOutcome | None = None
        done = False
        for entry in cert.peaks:
            rho = match_entry(cp, entry)
            if rho is None:
                continue
            outcome = check_entry(trs, cert.labels, cp, entry, rho)
            if outcome.ok:
                diagrams[idx] = outcome.diagram
                entry_checked.add(idx)
                done = True
                break
            if first_failure is None:
                first_failure = outcome
        if not done:
            pending[idx] = first_failure

    for idx in sorted(pending):
        cp = cps[idx]
        mirrored = any(_mirror_discharges(cp, cps[jdx]) for jdx in entry_checked)
        if mirrored:
            continue
        failure = pending[idx]
        if failure is None:
            return Verdict(
                REJECT,
                R_UNMATCHED,
                f"no entry matches peak {term_to_text(cp.peak_left)} <- "
                f"{term_to_text(cp.peak_source)} -> {term_to_text(cp.peak_right)}",
                peak_index=idx,
            )
        return Verdict(REJECT, failure.reason, failure.detail, peak_index=idx)

    if cert.mode == MODE_CONV:
        for idx in sorted(diagrams):
            diagram = diagrams[idx]
            if diagram is None:
                continue
            try:
                fan = check_fan(trs, cps[idx].peak_source, diagram, cert.fan_bound, node_cap)
            except ResourceExhaustedError as exc:
                return Verdict(ERROR, detail=str(exc))
            if not fan.ok:
                return Verdict(
                    REJECT,
                    R_FAN,
                    "terms not reachable from the peak source: "
                    + ", ".join(term_to_text(t) for t in fan.offending),
                    peak_index=idx,
                    offending=fan.offending,
                )

    if assumption is not None:
        return Verdict(ACCEPT_CONDITIONAL, assumption=assumption)
    return Verdict(ACCEPT)
