"""Command-line client for the workbench service.

The CLI is a thin client: every subcommand builds a request, posts it to
the service (in-process by default, or a remote ``--server`` URL), and
writes the returned report documents as canonical JSON files.  Identical
configurations therefore produce byte-identical reports.

Exit codes: 0 when every check passes, 1 when a check or invariant
fails (so CI can gate on it), 2 for configuration errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Dict, List, Optional

import httpx

from . import __version__
from .reports import canonical_json, render_report, validate_report
from .errors import SchemaMismatch

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2


def _post_raw(server: Optional[str], path: str, payload: dict) -> httpx.Response:
    if server:
        with httpx.Client(base_url=server, timeout=None) as client:
            return client.post(path, json=payload)
    import asyncio

    from .service import app  # imported lazily: the CLI stays light for --help

    async def go():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport, timeout=None,
                                     base_url="http://relhyplab.local") as client:
            return await client.post(path, json=payload)

    return asyncio.run(go())


SPEC_KEYS = ("family", "factors", "generators", "peripherals", "relator")


def _spec_fields(path: str) -> Dict[str, str]:
    fields: Dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for raw in fh:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"expected key = value, got {line!r}")
                key, _, value = line.partition("=")
                key = key.strip()
                if key not in SPEC_KEYS:
                    raise ValueError(
                        f"unknown spec key {key!r} (known: {', '.join(SPEC_KEYS)})")
                fields[key] = value.strip()
    except OSError as exc:
        raise ValueError(f"cannot read spec file {path}: {exc}") from exc
    return fields


def _write_reports(out_dir: str, name: str, reports: Dict[str, dict],
                   rendered: Optional[str] = None) -> List[str]:
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for key in sorted(reports):
        path = os.path.join(out_dir, f"{name}-{key}.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(canonical_json(reports[key]))
        written.append(path)
    if rendered is not None:
        path = os.path.join(out_dir, f"{name}.txt")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(rendered)
        written.append(path)
    return written


def _post(args, path, payload) -> dict:
    resp = _post_raw(args.server, path, payload)
    body = resp.json()
    if resp.status_code == 400:
        raise ValueError(body.get("detail", "configuration error"))
    if resp.status_code != 200:
        raise RuntimeError(f"{body.get('error', resp.status_code)}: "
                           f"{body.get('detail', '')}")
    return body


def _render_and_write(args, name: str, body: dict) -> None:
    reports = body.get("reports", {})
    rendered = body.get("rendered")
    if rendered is None and reports:
        rendered = render_report([reports[k] for k in sorted(reports)])
    _write_reports(args.out, name, reports, rendered)
    if rendered:
        sys.stdout.write(rendered)


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="relhyplab",
        description="relative Cayley geometry workbench (thin client)",
        allow_abbrev=False)
    parser.add_argument("--server", default=None,
                        help="service URL; default runs the service in-process")
    parser.add_argument("--out", default=os.environ.get("RELHYPLAB_OUT", "reports"),
                        help="output directory for report documents")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for sampled modes (all built-in runs are "
                             "exhaustive; accepted for reproducibility)")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    def add_spec(p):
        p.add_argument("--spec", required=True, help="group-spec config file")

    p = sub.add_parser("ball", help="materialize a window")
    add_spec(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rho-x", type=int, required=True)
    p.add_argument("--dump", action="store_true")

    p = sub.add_parser("geodesic", help="enumerate relative geodesics")
    add_spec(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rho-x", type=int, required=True)
    p.add_argument("--from", dest="source", default="1")
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--cap", type=int, default=1000)

    p = sub.add_parser("components", help="component calculus of a labelled path")
    add_spec(p)
    p.add_argument("--word", required=True)
    p.add_argument("--start", default="1")
    p.add_argument("--no-merge", action="store_true")

    p = sub.add_parser("constants", help="estimate the window-scale constants")
    add_spec(p)
    p.add_argument("--window-n", type=int, default=3)
    p.add_argument("--rho-x", type=int, default=3)
    p.add_argument("--side-cap", type=int, default=6)
    p.add_argument("--cycle-cap", type=int, default=6)
    p.add_argument("--s", type=int, action="append", default=None,
                   help="separation scales (repeatable; default 2 and 4)")
    p.add_argument("--exp-cap", type=int, default=None)
    p.add_argument("--expect-divergence", action="store_true",
                   help="exit 0 when the cycle-ratio estimate diverges "
                        "(the negative control is then the expected outcome)")

    p = sub.add_parser("relarea", help="relative area of a word")
    add_spec(p)
    p.add_argument("--word", default=None)
    p.add_argument("--relator", action="append", default=[],
                   help="relators of the presentation (repeatable)")
    p.add_argument("--cap-k", type=int, default=4)
    p.add_argument("--cap-len", type=int, default=None)
    p.add_argument("--samples", nargs="*", default=None,
                   help="check the linear bound over these words instead")
    p.add_argument("--l-bound", default="1")

    p = sub.add_parser("cover", help="build and measure a covering witness")
    add_spec(p)
    p.add_argument("mode", choices=["graph", "relball", "assemble"])
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--R", dest="coarse_r", type=int, default=1)
    p.add_argument("--window-n", type=int, required=True)
    p.add_argument("--rho-x", type=int, required=True)
    p.add_argument("--constants", default=None,
                   help="constants/v1 document to use instead of estimating")
    p.add_argument("--include-cells", action="store_true")

    p = sub.add_parser("sc-check", help="metric small cancellation check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--i-max", type=int, required=True)
    p.add_argument("--lambda", dest="lam", default="1/6")
    p.add_argument("--alphabet-size", type=int, default=1)

    p = sub.add_parser("report", help="render report documents as a table")
    p.add_argument("files", nargs="*")

    p = sub.add_parser("serve", help="run the service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8787)

    args = parser.parse_args(argv)

    try:
        return _dispatch(args)
    except (ValueError, SchemaMismatch) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except RuntimeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VIOLATION


def _dispatch(args) -> int:
    if args.cmd == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK

    if args.cmd == "report":
        docs = []
        for path in args.files:
            try:
                with open(path, "r", encoding="utf-8") as fh:
                    docs.append(json.load(fh))
            except (OSError, json.JSONDecodeError) as exc:
                raise ValueError(f"cannot read report {path}: {exc}") from exc
        for doc in docs:
            validate_report(doc)
        sys.stdout.write(render_report(docs))
        return EXIT_OK

    if args.cmd == "sc-check":
        body = _post(args, "/v1/sc-check", {
            "n": args.n, "i_max": args.i_max, "lam": args.lam,
            "alphabet_size": args.alphabet_size})
        _render_and_write(args, "sc-check", body)
        return EXIT_OK if body["ok"] else EXIT_VIOLATION

    spec_fields = _spec_fields(args.spec)

    if args.cmd == "ball":
        body = _post(args, "/v1/ball", {
            "spec": spec_fields, "n": args.n, "rho_x": args.rho_x,
            "dump": args.dump})
        dump = body["reports"]["window"].pop("dump", None)
        _render_and_write(args, "ball", body)
        if dump:
            path = os.path.join(args.out, "window.txt")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(dump)
        return EXIT_OK

    if args.cmd == "geodesic":
        body = _post(args, "/v1/geodesic", {
            "spec": spec_fields, "n": args.n, "rho_x": args.rho_x,
            "source": args.source, "target": args.target, "cap": args.cap})
        _render_and_write(args, "geodesic", body)
        return EXIT_OK

    if args.cmd == "components":
        body = _post(args, "/v1/components", {
            "spec": spec_fields, "word": args.word, "start": args.start,
            "merge": not args.no_merge})
        _render_and_write(args, "components", body)
        return EXIT_OK

    if args.cmd == "constants":
        body = _post(args, "/v1/constants", {
            "spec": spec_fields, "window_n": args.window_n, "rho_x": args.rho_x,
            "side_cap": args.side_cap, "cycle_len_cap": args.cycle_cap,
            "s_values": args.s or [2, 4], "exp_cap": args.exp_cap})
        _render_and_write(args, "constants", body)
        diverges = body["reports"]["constants"]["omega"]["diverges"]
        if args.expect_divergence:
            return EXIT_OK if diverges else EXIT_VIOLATION
        return EXIT_OK if body["ok"] else EXIT_VIOLATION

    if args.cmd == "relarea":
        if args.samples is not None:
            body = _post(args, "/v1/relarea/linear", {
                "spec": spec_fields, "relators": args.relator,
                "samples": args.samples, "l_bound": args.l_bound,
                "cap_k": args.cap_k, "cap_len": args.cap_len})
            _render_and_write(args, "relarea-linear", body)
        else:
            if args.word is None:
                raise ValueError("relarea needs --word (or --samples for the "
                                 "linear-bound mode)")
            body = _post(args, "/v1/relarea", {
                "spec": spec_fields, "relators": args.relator,
                "word": args.word, "cap_k": args.cap_k, "cap_len": args.cap_len})
            _render_and_write(args, "relarea", body)
        return EXIT_OK if body["ok"] else EXIT_VIOLATION

    if args.cmd == "cover":
        payload = {
            "spec": spec_fields, "mode": args.mode, "r": args.r, "s": args.s,
            "coarse_r": args.coarse_r, "window_n": args.window_n,
            "rho_x": args.rho_x, "include_cells": args.include_cells}
        if args.constants:
            try:
                with open(args.constants, "r", encoding="utf-8") as fh:
                    payload["constants"] = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise ValueError(f"cannot read constants {args.constants}: {exc}")
        body = _post(args, "/v1/cover", payload)
        _render_and_write(args, f"cover-{args.mode}", body)
        return EXIT_OK if body["ok"] else EXIT_VIOLATION

    raise ValueError(f"unknown subcommand {args.cmd!r}")


if __name__ == "__main__":
    sys.exit(main())
