"""Command-line client for the checking service.

Each subcommand builds the same request models the HTTP endpoints consume.
By default the handlers run in process, so no server is needed; with
``--url`` the request goes to a running instance instead and the output
and exit codes stay identical.

Exit codes for ``check``: 0 accept, 3 conditional accept, 1 reject,
2 error (including unreadable input). ``prove`` exits 1 when no
certificate is found, ``ars check`` exits 1 when decreasingness could not
be established within the bound.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from fastapi import HTTPException

from . import __version__, service
from .terms import term_to_text
from .certificate import term_from_json


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SystemExit(f"cannot read {path}: {exc}")


def _call(args: argparse.Namespace, endpoint: str, handler, request):
    """Run a request in process or against a remote service."""
    if args.url:
        import httpx

        response = httpx.post(args.url.rstrip("/") + endpoint, json=request.model_dump(), timeout=120.0)
        if response.status_code != 200:
            print(f"service error ({response.status_code}): {response.text}", file=sys.stderr)
            raise SystemExit(2)
        return response.json()
    try:
        return handler(request).model_dump()
    except HTTPException as exc:
        print(f"error: {exc.detail}", file=sys.stderr)
        raise SystemExit(2)


def _cmd_check(args: argparse.Namespace) -> int:
    cert_text = _read(args.certificate)
    try:
        cert_json = json.loads(cert_text)
    except json.JSONDecodeError as exc:
        print(f"error: certificate is not valid JSON: {exc}", file=sys.stderr)
        return 2
    request = service.CheckRequest(trs=_read(args.trs), certificate=cert_json)
    result = _call(args, "/check", service.check_endpoint, request)
    status = result["status"]
    if status == "accept":
        print("ACCEPT")
    elif status == "accept-conditional":
        print(f"ACCEPT (conditional: {result['assumption']})")
    elif status == "reject":
        where = "" if result["peak_index"] is None else f" [peak {result['peak_index']}]"
        print(f"REJECT: {result['reason']}{where}: {result['detail']}")
        if result.get("offending"):
            terms = ", ".join(term_to_text(term_from_json(t, "$")) for t in result["offending"])
            print(f"  offending terms: {terms}")
    else:
        print(f"ERROR: {result['detail']}")
    return result["exit_code"]


def _cmd_cps(args: argparse.Namespace) -> int:
    request = service.CriticalPeaksRequest(trs=_read(args.trs))
    result = _call(args, "/critical-peaks", service.critical_peaks_endpoint, request)
    for peak in result["peaks"]:
        pos = ".".join(str(i) for i in peak["position"]) or "eps"
        mark = " (trivial)" if peak["trivial"] else ""
        print(
            f"[{peak['index']}] rules {peak['inner_rule']}/{peak['outer_rule']} at {pos}: "
            f"{peak['rendered']}{mark}"
        )
    print(f"{len(result['peaks'])} critical peaks")
    return 0


def _cmd_prove(args: argparse.Namespace) -> int:
    request = service.ProveRequest(
        trs=_read(args.trs),
        depth=args.depth,
        max_label=args.max_label,
        coeff_bound=args.coeff_bound,
        mode=args.mode,
    )
    result = _call(args, "/prove", service.prove_endpoint, request)
    if not result["found"]:
        print("no certificate found", file=sys.stderr)
        return 1
    print(json.dumps(result["certificate"], indent=2))
    return 0


def _cmd_ars_check(args: argparse.Namespace) -> int:
    request = service.ArsCheckRequest(ars=_read(args.arsfile), maxlen=args.maxlen)
    result = _call(args, "/ars/check", service.ars_check_endpoint, request)
    for peak in result["peaks"]:
        left = " ".join(peak["left"])
        right = " ".join(peak["right"])
        state = "ok" if peak["decreasing"] else "NO WITNESS"
        print(f"peak <{left}> / <{right}>: {state}")
    print(f"decreasing: {'yes' if result['decreasing'] else 'not within bound'}")
    print(f"confluent (brute force): {'yes' if result['confluent'] else 'no'}")
    return 0 if result["decreasing"] else 1


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run(service.app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ddcheck", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ddcheck {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="check a certificate against a rewrite system")
    p_check.add_argument("trs")
    p_check.add_argument("certificate")
    p_check.add_argument("--url", help="remote service base URL")
    p_check.set_defaults(func=_cmd_check)

    p_cps = sub.add_parser("cps", help="list the critical peaks of a rewrite system")
    p_cps.add_argument("trs")
    p_cps.add_argument("--url")
    p_cps.set_defaults(func=_cmd_cps)

    p_prove = sub.add_parser("prove", help="search for a certificate")
    p_prove.add_argument("trs")
    p_prove.add_argument("--depth", type=int, default=3, help="join search depth")
    p_prove.add_argument("--max-label", type=int, default=2)
    p_prove.add_argument("--coeff-bound", type=int, default=2)
    p_prove.add_argument("--mode", choices=["valley", "conv"], default="valley")
    p_prove.add_argument("--url")
    p_prove.set_defaults(func=_cmd_prove)

    p_ars = sub.add_parser("ars", help="finite labeled abstract rewriting tools")
    ars_sub = p_ars.add_subparsers(dest="ars_command", required=True)
    p_ars_check = ars_sub.add_parser("check", help="check decreasingness of a labeled system")
    p_ars_check.add_argument("arsfile")
    p_ars_check.add_argument("--maxlen", type=int, default=4, help="per-segment search bound")
    p_ars_check.add_argument("--url")
    p_ars_check.set_defaults(func=_cmd_ars_check)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if not hasattr(args, "url"):
        args.url = None
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
