"""HTTP facade over the checker, prover, and ARS tools.

Every handler is stateless: the rewrite system travels inside the request,
results come back as plain JSON. Malformed input on the analysis endpoints
turns into a 422 with a structured detail; the check endpoint instead folds
parse problems into its verdict domain ("error", exit code 2), matching
the command-line contract.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .ars import check_eld, confluent_bruteforce, parse_ars
from .certificate import (
    EXIT_CODES,
    ERROR,
    Verdict,
    certificate_from_json,
    certificate_to_json,
    check,
    term_to_json,
)
from .trs_format import parse_trs
from .errors import DdcheckError
from .peaks import critical_peaks
from .prover import CONV, VALLEY, ProverConfig, prove
from .terms import term_to_text


class CheckRequest(BaseModel):
    trs: str = Field(description="rewrite system in the textual format")
    certificate: dict = Field(description="certificate document as JSON")


class CheckResponse(BaseModel):
    status: str
    exit_code: int
    reason: str | None = None
    detail: str | None = None
    peak_index: int | None = None
    offending: list[dict] | None = None
    assumption: str | None = None


class CriticalPeaksRequest(BaseModel):
    trs: str


class PeakInfo(BaseModel):
    index: int
    outer_rule: int  # 1-based
    inner_rule: int
    position: list[int]
    trivial: bool
    source: dict
    left: dict
    right: dict
    rendered: str


class CriticalPeaksResponse(BaseModel):
    peaks: list[PeakInfo]


class ProveRequest(BaseModel):
    trs: str
    depth: int = 3
    max_label: int = 2
    coeff_bound: int = 2
    mode: str = VALLEY


class ProveResponse(BaseModel):
    found: bool
    certificate: dict | None = None


class ArsCheckRequest(BaseModel):
    ars: str
    maxlen: int = 4


class ArsPeakResult(BaseModel):
    left: list[str]
    right: list[str]
    decreasing: bool


class ArsCheckResponse(BaseModel):
    decreasing: bool
    confluent: bool
    peaks: list[ArsPeakResult]


app = FastAPI(title="ddcheck", version=__version__)


def _bad_input(exc: DdcheckError) -> HTTPException:
    return HTTPException(status_code=422, detail={"message": str(exc), "kind": type(exc).__name__})


def _verdict_response(verdict: Verdict) -> CheckResponse:
    return CheckResponse(
        status=verdict.status,
        exit_code=verdict.exit_code,
        reason=verdict.reason,
        detail=verdict.detail,
        peak_index=verdict.peak_index,
        offending=[term_to_json(t) for t in verdict.offending] or None,
        assumption=verdict.assumption,
    )


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/check", response_model=CheckResponse)
def check_endpoint(request: CheckRequest) -> CheckResponse:
    try:
        trs = parse_trs(request.trs)
        cert = certificate_from_json(request.certificate)
    except DdcheckError as exc:
        return CheckResponse(status=ERROR, exit_code=EXIT_CODES[ERROR], reason="parse", detail=str(exc))
    return _verdict_response(check(trs, cert))


@app.post("/critical-peaks", response_model=CriticalPeaksResponse)
def critical_peaks_endpoint(request: CriticalPeaksRequest) -> CriticalPeaksResponse:
    try:
        trs = parse_trs(request.trs)
    except DdcheckError as exc:
        raise _bad_input(exc) from None
    peaks = []
    for idx, cp in enumerate(critical_peaks(trs)):
        rendered = (
            f"{term_to_text(cp.peak_left)} <- {term_to_text(cp.peak_source)} -> {term_to_text(cp.peak_right)}"
        )
        peaks.append(
            PeakInfo(
                index=idx,
                outer_rule=cp.outer_idx + 1,
                inner_rule=cp.inner_idx + 1,
                position=list(cp.pos),
                trivial=cp.is_trivial,
                source=term_to_json(cp.peak_source),
                left=term_to_json(cp.peak_left),
                right=term_to_json(cp.peak_right),
                rendered=rendered,
            )
        )
    return CriticalPeaksResponse(peaks=peaks)


@app.post("/prove", response_model=ProveResponse)
def prove_endpoint(request: ProveRequest) -> ProveResponse:
    if request.mode not in (VALLEY, CONV):
        raise HTTPException(status_code=422, detail={"message": f"mode must be {VALLEY!r} or {CONV!r}"})
    try:
        trs = parse_trs(request.trs)
    except DdcheckError as exc:
        raise _bad_input(exc) from None
    cfg = ProverConfig(
        join_depth=request.depth,
        max_label=request.max_label,
        coeff_bound=request.coeff_bound,
        mode=request.mode,
    )
    try:
        cert = prove(trs, cfg)
    except DdcheckError as exc:
        raise _bad_input(exc) from None
    if cert is None:
        return ProveResponse(found=False)
    return ProveResponse(found=True, certificate=certificate_to_json(cert))


@app.post("/ars/check", response_model=ArsCheckResponse)
def ars_check_endpoint(request: ArsCheckRequest) -> ArsCheckResponse:
    try:
        ars, orders = parse_ars(request.ars)
    except DdcheckError as exc:
        raise _bad_input(exc) from None
    report = check_eld(ars, orders, maxlen=request.maxlen)
    peaks = [
        ArsPeakResult(left=list(e1), right=list(e2), decreasing=report.witnesses[(e1, e2)] is not None)
        for e1, e2 in report.peaks
    ]
    return ArsCheckResponse(decreasing=report.ok, confluent=confluent_bruteforce(ars), peaks=peaks)
