"""FastAPI service wrapping the workbench operations.

Each endpoint accepts a group spec in config-file fields plus the
operation parameters, runs the corresponding core-package routine, and
returns the versioned report documents together with an overall ``ok``
flag (so HTTP clients and the CLI can gate on it).  Workbench errors map
to structured 4xx responses carrying the exception class name.
"""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .asdim import (
    assemble_group_cover,
    cover_graph_annuli,
    cover_rel_ball,
)
from .constants import compute_constants, constants_from_document
from .errors import ConfigParseError, RelhypError
from .models import (
    BallRequest,
    ComponentsRequest,
    ConstantsRequest,
    CoverRequest,
    GeodesicRequest,
    LinearBoundRequest,
    RelAreaRequest,
    ReportRequest,
    RunResponse,
    ScCheckRequest,
)
from .relarea import RelPresentation, check_linear_bound, rel_area
from .relcayley import (
    are_connected,
    build_window,
    components,
    is_isolated,
    path_from_labels,
    rel_geodesics,
)
from .reports import render_report, validate_report
from .smallcancel import RelatorFamily, check_Cprime
from .specfile import parse_word
from .words import format_word

app = FastAPI(title="relhyplab", version=__version__)

CONFIG_ERRORS = (ConfigParseError,)


@app.exception_handler(RelhypError)
async def _workbench_error(request: Request, exc: RelhypError):
    status = 400 if isinstance(exc, CONFIG_ERRORS) else 422
    return JSONResponse(status_code=status,
                        content={"error": type(exc).__name__, "detail": str(exc)})


@app.get("/v1/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/v1/ball", response_model=RunResponse)
def ball(req: BallRequest):
    spec = req.spec.to_spec()
    window = build_window(spec, req.n, req.rho_x, cap=req.cap)
    doc = {
        "schema": "window/v1",
        "n": req.n,
        "rho_x": req.rho_x,
        "vertices": len(window),
        "rel_diameter": window.rel_diameter() if len(window) <= 1500 else None,
        "dump": window.dump() if req.dump and len(window) <= 3000 else None,
    }
    return RunResponse(ok=True, reports={"window": doc})


@app.post("/v1/geodesic", response_model=RunResponse)
def geodesic(req: GeodesicRequest):
    spec = req.spec.to_spec()
    window = build_window(spec, req.n, req.rho_x)
    g = spec.element_of_word(parse_word(spec, req.source))
    h = spec.element_of_word(parse_word(spec, req.target))
    paths = rel_geodesics(window, g, h, cap=req.cap)
    doc = {
        "schema": "geodesics/v1",
        "from": format_word(spec.canonical_word(g)),
        "to": format_word(spec.canonical_word(h)),
        "count": len(paths),
        "length": len(paths[0]) if paths else 0,
        "paths": [p.label() for p in paths],
    }
    return RunResponse(ok=True, reports={"geodesics": doc})


@app.post("/v1/components", response_model=RunResponse)
def components_endpoint(req: ComponentsRequest):
    spec = req.spec.to_spec()
    start = spec.element_of_word(parse_word(spec, req.start))
    path = path_from_labels(spec, start, parse_word(spec, req.word),
                            merge=req.merge)
    comps = components(path)
    rows = []
    for c in comps:
        rows.append({
            "lam": c.lam,
            "letters": [str(path.letters[i]) for i in range(c.start, c.end)],
            "start_vertex": format_word(spec.canonical_word(c.start_vertex)),
            "end_vertex": format_word(spec.canonical_word(c.end_vertex)),
            "displacement_x": c.displacement_x(),
            "isolated": is_isolated(c, comps),
        })
    doc = {
        "schema": "components/v1",
        "word": path.label(),
        "is_cycle": path.is_cycle,
        "components": rows,
        "connected_pairs": [
            [i, j] for i, ci in enumerate(comps) for j, cj in enumerate(comps)
            if i < j and are_connected(ci, cj)
        ],
    }
    return RunResponse(ok=True, reports={"components": doc})


def _run_constants(req: ConstantsRequest):
    spec = req.spec.to_spec()
    window = build_window(spec, req.window_n, req.rho_x)
    report = compute_constants(window, side_cap=req.side_cap,
                               cycle_len_cap=req.cycle_len_cap,
                               s_values=req.s_values, exp_cap=req.exp_cap,
                               geodesic_cap=req.geodesic_cap)
    return spec, report


@app.post("/v1/constants", response_model=RunResponse)
def constants_endpoint(req: ConstantsRequest):
    _, report = _run_constants(req)
    doc = report.to_document()
    # the generating set is a choice, so reports echo it verbatim
    doc["spec"] = req.spec.model_dump(exclude_none=True)
    # divergence of the cycle ratio is a finding that gates CI
    return RunResponse(ok=not report.omega.diverges, reports={"constants": doc})


@app.post("/v1/relarea", response_model=RunResponse)
def relarea(req: RelAreaRequest):
    spec = req.spec.to_spec()
    pres = RelPresentation(spec, [parse_word(spec, r) for r in req.relators])
    word = parse_word(spec, req.word)
    res = rel_area(pres, word, cap_k=req.cap_k, cap_len=req.cap_len)
    doc = {
        "schema": "relarea/v1",
        "word": req.word,
        "area": res.area,
        "status": res.status,
        "states_explored": res.states_explored,
        "caps": res.caps,
    }
    return RunResponse(ok=True, reports={"relarea": doc})


@app.post("/v1/relarea/linear", response_model=RunResponse)
def relarea_linear(req: LinearBoundRequest):
    spec = req.spec.to_spec()
    pres = RelPresentation(spec, [parse_word(spec, r) for r in req.relators])
    report = check_linear_bound(pres, [parse_word(spec, s) for s in req.samples],
                                req.l_bound, cap_k=req.cap_k, cap_len=req.cap_len)
    return RunResponse(ok=report.ok, reports={"linear": report.to_document()})


def _covering_doc(cov, include_cells: bool) -> dict:
    spec = cov.spec
    doc = {
        "schema": "covering/v1",
        "metric": cov.metric,
        "scale": cov.scale,
        "domain_size": len(cov.domain),
        "cells": len(cov.cells),
    }
    if include_cells and len(cov.domain) <= 3000:
        doc["cells"] = [
            {"size": len(c),
             "meta": {k: str(v) for k, v in sorted(c.meta.items())
                      if k != "center_elt"},
             "members": sorted(format_word(spec.canonical_word(m))
                               for m in c.members)}
            for c in cov.cells
        ]
    return doc


@app.post("/v1/cover", response_model=RunResponse)
def cover(req: CoverRequest):
    spec = req.spec.to_spec()
    if req.constants is not None:
        consts = constants_from_document(spec, req.constants)
    else:
        params = req.constants_params or ConstantsRequest(
            spec=req.spec, s_values=[req.s])
        if req.s not in params.s_values:
            params.s_values.append(req.s)
        _, consts = _run_constants(params.model_copy(update={"spec": req.spec}))
    if req.mode in ("relball", "assemble") and req.s not in consts.eps:
        raise ConfigParseError(
            f"constants document has no eps({req.s}); available: "
            f"{sorted(consts.eps)}")
    window = build_window(spec, req.window_n, req.rho_x)
    reports = {"constants": consts.to_document()}
    if req.mode == "graph":
        cov, rep = cover_graph_annuli(window, req.r, consts)
        reports["cover"] = rep.to_document()
        reports["covering"] = _covering_doc(cov, req.include_cells)
        ok = rep.ok
    elif req.mode == "relball":
        cov, rep, params_out = cover_rel_ball(window, req.window_n, req.s, consts)
        doc = rep.to_document()
        doc["separation"] = params_out.to_document()
        reports["cover"] = doc
        reports["covering"] = _covering_doc(cov, req.include_cells)
        ok = rep.ok
    elif req.mode == "assemble":
        R = req.coarse_r
        gcov, grep = cover_graph_annuli(window, R, consts)
        ball_window = build_window(spec, 2 * R + req.r, req.rho_x + req.r)
        bcov, brep, _ = cover_rel_ball(ball_window, 2 * R + req.r, req.s, consts)
        acov, arep = assemble_group_cover(window, req.r, gcov, bcov)
        reports["graph_cover"] = grep.to_document()
        reports["ball_cover"] = brep.to_document()
        reports["cover"] = arep.to_document()
        reports["covering"] = _covering_doc(acov, req.include_cells)
        ok = arep.ok
    else:
        raise ConfigParseError(f"unknown cover mode {req.mode!r}")
    reports["cover"]["spec"] = req.spec.model_dump(exclude_none=True)
    return RunResponse(ok=ok, reports=reports)


@app.post("/v1/sc-check", response_model=RunResponse)
def sc_check(req: ScCheckRequest):
    family = RelatorFamily(alphabet_size=req.alphabet_size, n=req.n,
                           i_max=req.i_max)
    report = check_Cprime(family, Fraction(req.lam))
    return RunResponse(ok=report.satisfied, reports={"sc": report.to_document()})


@app.post("/v1/report", response_model=RunResponse)
def report_endpoint(req: ReportRequest):
    for doc in req.documents:
        validate_report(doc)
    rendered = render_report(req.documents)
    return RunResponse(ok=True, reports={}, rendered=rendered)
