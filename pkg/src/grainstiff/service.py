"""HTTP service exposing identification, conversion, tables, verification,
and legacy-mode comparison over JSON.

The CLI talks to this app in-process through an ASGI transport, so every
payload builder lives here and returns plain dicts with a fixed key order.
Keeping the ordering stable (and pruning exact-noise zeros) is what makes
repeated runs byte-identical after canonical serialization.
"""
from __future__ import annotations

import warnings as _warnings
from typing import Literal, Optional

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field, model_validator

from . import identification as ident
from .checks import DEFAULT_SAMPLES, DEFAULT_SEED, run_all_checks
from .distributions import (BUILTIN_DISTRIBUTIONS, StiffnessDistribution,
                            builtin_distribution)
from .tensors import component_name

SERVICE_NAME = "grainstiff"
SERVICE_VERSION = "0.1.0"
DEFAULT_PRUNE_TOL = 1e-12

TENSOR_PREFIXES = {"C": "C_", "M": "M_", "D": "D_"}


class MaterialSpec(BaseModel):
    """Exactly one way of naming a material: mean stiffness pair, engineering
    constants, or a named anisotropic distribution with parameters."""

    kbar_eta: Optional[float] = None
    kbar_tau: Optional[float] = None
    young: Optional[float] = None
    nu: Optional[float] = None
    dist: Optional[str] = None
    dist_params: dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _one_group(self) -> "MaterialSpec":
        k_group = self.kbar_eta is not None or self.kbar_tau is not None
        e_group = self.young is not None or self.nu is not None
        d_group = self.dist is not None
        if k_group and (self.kbar_eta is None or self.kbar_tau is None):
            raise ValueError("kbar_eta and kbar_tau must be given together")
        if e_group and (self.young is None or self.nu is None):
            raise ValueError("young and nu must be given together")
        if self.dist_params and not d_group:
            raise ValueError("dist_params requires dist")
        if sum((k_group, e_group, d_group)) != 1:
            raise ValueError(
                "specify exactly one of (kbar_eta, kbar_tau), (young, nu), "
                "or dist")
        return self

    def is_isotropic_spec(self) -> bool:
        return self.dist is None


class IdentifyRequest(BaseModel):
    dim: Literal[2, 3]
    L: float = Field(default=1.0, gt=0)
    material: MaterialSpec
    mode: Literal["corrected", "legacy"] = "corrected"
    tol: float = Field(default=DEFAULT_PRUNE_TOL, gt=0)


class ConvertRequest(BaseModel):
    dim: Literal[2, 3]
    L: float = Field(default=1.0, gt=0)
    material: MaterialSpec


class TableRequest(BaseModel):
    dim: Literal[2, 3]
    L: float = Field(default=1.0, gt=0)
    material: MaterialSpec


class DiffLegacyRequest(BaseModel):
    dim: Literal[2, 3]
    L: float = Field(default=1.0, gt=0)
    material: MaterialSpec
    tol: float = Field(default=DEFAULT_PRUNE_TOL, gt=0)


class VerifyRequest(BaseModel):
    seed: int = DEFAULT_SEED
    samples: int = Field(default=DEFAULT_SAMPLES, ge=1, le=1000)


class PayloadResponse(BaseModel):
    """Loose envelope: payload dicts are pre-ordered by the builders."""

    model_config = {"extra": "allow"}


def _material_inputs(spec: MaterialSpec) -> dict:
    if spec.dist is not None:
        return {"dist": spec.dist,
                "dist_params": {k: spec.dist_params[k]
                                for k in sorted(spec.dist_params)}}
    if spec.young is not None:
        return {"young": spec.young, "nu": spec.nu}
    return {"kbar_eta": spec.kbar_eta, "kbar_tau": spec.kbar_tau}


def _resolve_kbars(dim: int, L: float, spec: MaterialSpec) -> tuple[float, float]:
    if spec.young is not None:
        return ident.k_from_engineering(dim, L, spec.young, spec.nu)
    return float(spec.kbar_eta), float(spec.kbar_tau)


def _resolve_distribution(dim: int, L: float,
                          spec: MaterialSpec) -> StiffnessDistribution:
    if spec.dist is not None:
        return builtin_distribution(spec.dist, dim, **spec.dist_params)
    keta, ktau = _resolve_kbars(dim, L, spec)
    return StiffnessDistribution.isotropic(dim, keta, ktau)


def _tensor_map(tensor: np.ndarray, prefix: str, tol: float) -> dict[str, float]:
    cutoff = tol * max(1.0, float(np.max(np.abs(tensor))))
    out: dict[str, float] = {}
    for idx in np.ndindex(tensor.shape):
        val = float(tensor[idx])
        if abs(val) > cutoff:
            out[prefix + component_name(idx)] = val
    return dict(sorted(out.items()))


def _derived_block(dim: int, L: float, keta: float, ktau: float) -> dict:
    mat = ident.isotropic_material(dim, L, keta, ktau)
    out: dict = {"lambda": mat.lam, "mu": mat.mu}
    if mat.young is not None:
        out["young"] = mat.young
        out["nu"] = mat.nu
    out["kbar_eta"] = mat.kbar_eta
    out["kbar_tau"] = mat.kbar_tau
    if dim == 3:
        out.update({k: mat.c_params[k] for k in ("c3", "c4", "c5", "c6", "c7")})
        out.update({k: mat.a_params[k] for k in ("a1", "a2", "a3", "a4", "a5")})
    out["d_groups"] = {name: mat.d_groups[name]
                       for name, *_ in ident.d_groups(dim)}
    return out


def _collect_warnings(records) -> list[str]:
    seen: list[str] = []
    for rec in records:
        msg = str(rec.message)
        if msg not in seen:
            seen.append(msg)
    return seen


def build_identify_payload(req: IdentifyRequest) -> dict:
    with _warnings.catch_warnings(record=True) as rec:
        _warnings.simplefilter("always")
        dist = _resolve_distribution(req.dim, req.L, req.material)
        tensors = ident.identify(dist, req.L, req.mode)
        meta = {
            "command": "identify",
            "dim": req.dim,
            "L": req.L,
            "mode": req.mode,
            "inputs": _material_inputs(req.material),
            "tolerance": req.tol,
        }
        payload = {
            "meta": meta,
            "C": _tensor_map(tensors.C, "C_", req.tol),
            "M": _tensor_map(tensors.M, "M_", req.tol),
            "D": _tensor_map(tensors.D, "D_", req.tol),
        }
        if req.material.is_isotropic_spec():
            keta, ktau = _resolve_kbars(req.dim, req.L, req.material)
            payload["derived"] = _derived_block(req.dim, req.L, keta, ktau)
        else:
            payload["derived"] = {}
        payload["warnings"] = _collect_warnings(rec)
    return payload


def build_convert_payload(req: ConvertRequest) -> dict:
    if not req.material.is_isotropic_spec():
        raise ValueError("convert requires an isotropic material "
                         "(kbar pair or engineering constants)")
    with _warnings.catch_warnings(record=True) as rec:
        _warnings.simplefilter("always")
        keta, ktau = _resolve_kbars(req.dim, req.L, req.material)
        derived = _derived_block(req.dim, req.L, keta, ktau)
        derived.pop("d_groups")
        payload = {
            "meta": {
                "command": "convert",
                "dim": req.dim,
                "L": req.L,
                "inputs": _material_inputs(req.material),
            },
            "derived": derived,
            "warnings": _collect_warnings(rec),
        }
    return payload


def build_table_payload(req: TableRequest) -> dict:
    if not req.material.is_isotropic_spec():
        raise ValueError("table requires an isotropic material")
    with _warnings.catch_warnings(record=True) as rec:
        _warnings.simplefilter("always")
        keta, ktau = _resolve_kbars(req.dim, req.L, req.material)
        c_values = ident.c_group_values(req.dim, req.L, keta, ktau)
        c_rows = [{"name": name, "value": c_values[name],
                   "components": ["C_" + c for c in comps]}
                  for name, _, _, _, comps in ident.c_groups(req.dim)]
        d_values = ident.d_group_values(req.dim, req.L, keta, ktau)
        d_rows = []
        for name, _, _, _, comps in ident.d_groups(req.dim):
            row = {"name": name, "value": d_values[name],
                   "components": ["D_" + c for c in comps]}
            if req.dim == 3 and name in ident.D_GROUP_NOTES_3D:
                row["note"] = ident.D_GROUP_NOTES_3D[name]
            d_rows.append(row)
        notes = []
        if req.dim == 3:
            notes.append(ident.MU_PREFACTOR_NOTE_3D)
        payload = {
            "meta": {
                "command": "table",
                "dim": req.dim,
                "L": req.L,
                "inputs": _material_inputs(req.material),
            },
            "C_groups": c_rows,
            "D_groups": d_rows,
            "derived": _derived_block(req.dim, req.L, keta, ktau),
            "notes": notes,
            "warnings": _collect_warnings(rec),
        }
    return payload


def build_diff_legacy_payload(req: DiffLegacyRequest) -> dict:
    with _warnings.catch_warnings(record=True) as rec:
        _warnings.simplefilter("always")
        dist = _resolve_distribution(req.dim, req.L, req.material)
        comp = ident.compare_legacy(dist, req.L)
        rows = []
        if dist.is_isotropic:
            for row in ident.d_group_rows(comp):
                rows.append({
                    "name": row["name"],
                    "representative": "D_" + row["representative"],
                    "corrected": row["corrected"],
                    "legacy": row["legacy"],
                    "rel_diff": row["rel_diff"],
                })
        payload = {
            "meta": {
                "command": "diff-legacy",
                "dim": req.dim,
                "L": req.L,
                "inputs": _material_inputs(req.material),
                "tolerance": req.tol,
            },
            "C_max_abs_diff": comp.c_max_abs_diff,
            "M_max_abs_diff": comp.m_max_abs_diff,
            "D_max_abs_diff": comp.d_max_abs_diff,
            "D_groups": rows,
            "D_corrected": _tensor_map(comp.corrected.D, "D_", req.tol),
            "D_legacy": _tensor_map(comp.legacy.D, "D_", req.tol),
            "significant": any(r["rel_diff"] > 0.01 for r in rows)
            or comp.d_max_abs_diff > 0.01
            * max(1.0, float(np.max(np.abs(comp.corrected.D)))),
            "warnings": _collect_warnings(rec),
        }
    return payload


def build_verify_payload(req: VerifyRequest) -> dict:
    results = run_all_checks(seed=req.seed, samples=req.samples)
    return {
        "meta": {
            "command": "verify",
            "seed": req.seed,
            "samples": req.samples,
        },
        "passed": all(r.passed for r in results),
        "checks": [r.as_dict() for r in results],
        "warnings": [],
    }


def create_app() -> FastAPI:
    app = FastAPI(title=SERVICE_NAME, version=SERVICE_VERSION)

    def run(builder, req):
        try:
            return builder(req)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.get("/")
    def root() -> dict:
        return {
            "service": SERVICE_NAME,
            "version": SERVICE_VERSION,
            "endpoints": ["/identify", "/convert", "/table", "/diff-legacy",
                          "/verify"],
            "distributions": sorted(BUILTIN_DISTRIBUTIONS),
        }

    @app.post("/identify", response_model=PayloadResponse)
    def identify_endpoint(req: IdentifyRequest):
        return run(build_identify_payload, req)

    @app.post("/convert", response_model=PayloadResponse)
    def convert_endpoint(req: ConvertRequest):
        return run(build_convert_payload, req)

    @app.post("/table", response_model=PayloadResponse)
    def table_endpoint(req: TableRequest):
        return run(build_table_payload, req)

    @app.post("/diff-legacy", response_model=PayloadResponse)
    def diff_legacy_endpoint(req: DiffLegacyRequest):
        return run(build_diff_legacy_payload, req)

    @app.post("/verify", response_model=PayloadResponse)
    def verify_endpoint(req: VerifyRequest):
        return run(build_verify_payload, req)

    return app


app = create_app()
