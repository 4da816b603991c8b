"""Pydantic request/response models for the service endpoints.

The group spec travels as the same key/value fields the config file
uses, so the CLI can forward a file verbatim and every subcommand parses
it identically.
"""

from __future__ import annotations

from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from .groups import GroupSpec
from .specfile import parse_spec_mapping


class SpecModel(BaseModel):
    family: str
    generators: str = ""
    factors: Optional[str] = None
    peripherals: Optional[str] = None
    relator: Optional[str] = None

    def to_spec(self) -> GroupSpec:
        fields: Dict[str, str] = {"family": self.family, "generators": self.generators}
        if self.factors:
            fields["factors"] = self.factors
        if self.peripherals:
            fields["peripherals"] = self.peripherals
        if self.relator:
            fields["relator"] = self.relator
        return parse_spec_mapping(fields)


class BallRequest(BaseModel):
    spec: SpecModel
    n: int
    rho_x: int
    dump: bool = False
    cap: int = 2_000_000


class GeodesicRequest(BaseModel):
    spec: SpecModel
    n: int
    rho_x: int
    source: str = "1"
    target: str
    cap: int = 1000


class ComponentsRequest(BaseModel):
    spec: SpecModel
    word: str
    start: str = "1"
    merge: bool = True


class ConstantsRequest(BaseModel):
    spec: SpecModel
    window_n: int = 3
    rho_x: int = 3
    side_cap: int = 6
    cycle_len_cap: int = 6
    s_values: List[int] = Field(default_factory=lambda: [2, 4])
    exp_cap: Optional[int] = None
    geodesic_cap: int = 8


class RelAreaRequest(BaseModel):
    spec: SpecModel
    relators: List[str] = Field(default_factory=list)
    word: str
    cap_k: int = 4
    cap_len: Optional[int] = None


class LinearBoundRequest(BaseModel):
    spec: SpecModel
    relators: List[str] = Field(default_factory=list)
    samples: List[str]
    l_bound: str = "1"
    cap_k: int = 4
    cap_len: Optional[int] = None


class CoverRequest(BaseModel):
    spec: SpecModel
    mode: str  # "graph" | "relball" | "assemble"
    window_n: int
    rho_x: int
    r: int = 1
    s: int = 2
    coarse_r: int = 1  # R for the assembly's graph layer
    constants: Optional[dict] = None  # a constants/v1 document
    constants_params: Optional[ConstantsRequest] = None
    include_cells: bool = False


class ScCheckRequest(BaseModel):
    n: int
    i_max: int
    lam: str = "1/6"
    alphabet_size: int = 1


class ReportRequest(BaseModel):
    documents: List[dict]


class RunResponse(BaseModel):
    ok: bool
    reports: Dict[str, dict]
    rendered: Optional[str] = None
