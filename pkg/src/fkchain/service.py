"""HTTP service exposing the chain pipeline.

Endpoints return JSON; configuration problems map to 400, numerical
failures (no root, divergence, instability) to 409 with a structured body
naming the error class.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import squeeze as sq
from .classical import ChainSpec, dump_solution
from .errors import ConfigError, DomainError, FKChainError
from .experiments import (
    SCHEMA_VERSION,
    block_anchor,
    centered_block,
    config_from_dict,
    run_experiment,
    solve_sector,
)
from .gaussian import block_entropy, ground_state, log_negativity
from .modes import fluctuation_modes, spectrum_rows


class ChainModel(BaseModel):
    N: int = Field(ge=2)
    g: float = Field(gt=0.0)
    boundary: str = "free"

    def to_spec(self) -> ChainSpec:
        return ChainSpec(N=self.N, g=self.g, boundary=self.boundary)


class SectorModel(BaseModel):
    kind: str = "vacuum"
    H: float | None = None
    k: float | None = None
    d_sol: float | None = None

    def to_dict(self) -> dict:
        return {k: v for k, v in self.model_dump().items() if v is not None}


class SolveRequest(BaseModel):
    chain: ChainModel
    sector: SectorModel = SectorModel()
    seed_solution_path: str | None = None


class EntropyRequest(SolveRequest):
    block_sizes: list[int] | None = None
    blocks: list[list[int]] | None = None


class NegativityRequest(SolveRequest):
    block_a: list[int]
    block_b: list[int]


class SqueezeRequest(SolveRequest):
    r: float = 0.99
    modes: list[int] = [0]
    block_a: list[int] | None = None
    block_b: list[int] | None = None
    block_sizes: list[int] | None = None


class SweepRequest(BaseModel):
    config: dict
    threads: int = 1


def _doc(payload: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, **payload}


def create_app() -> FastAPI:
    app = FastAPI(title="fkchain", version="0.1.0")

    @app.exception_handler(ConfigError)
    @app.exception_handler(DomainError)
    async def _config_error(request: Request, exc: FKChainError):
        return JSONResponse(status_code=400, content={
            "error": type(exc).__name__, "message": str(exc)})

    @app.exception_handler(FKChainError)
    async def _numerical_error(request: Request, exc: FKChainError):
        return JSONResponse(status_code=409, content={
            "error": type(exc).__name__, "message": str(exc)})

    @app.get("/health")
    async def health():
        return _doc({"status": "ok"})

    @app.post("/solve")
    def solve(req: SolveRequest):
        spec = req.chain.to_spec()
        sol = solve_sector(spec, req.sector.to_dict(), req.seed_solution_path)
        return _doc({
            "sector": sol.sector,
            "energy": sol.energy,
            "centers": list(sol.centers),
            "record": dump_solution(spec, sol),
        })

    @app.post("/modes")
    def modes(req: SolveRequest):
        spec = req.chain.to_spec()
        sol = solve_sector(spec, req.sector.to_dict(), req.seed_solution_path)
        basis = fluctuation_modes(spec, sol)
        return _doc({"rows": spectrum_rows(basis)})

    @app.post("/entropy")
    def entropy(req: EntropyRequest):
        spec = req.chain.to_spec()
        sol = solve_sector(spec, req.sector.to_dict(), req.seed_solution_path)
        state = ground_state(fluctuation_modes(spec, sol))
        rows = []
        if req.blocks:
            for b in req.blocks:
                rows.append({"block": b,
                             "entropy": float(block_entropy(state, np.array(b)))})
        else:
            anchor = block_anchor(sol, spec)
            sizes = req.block_sizes or [2, 4, 8, 16]
            for l in sizes:
                blk = centered_block(anchor, int(l))
                if blk[0] < 0 or blk[-1] >= spec.N:
                    raise ConfigError(f"block of size {l} does not fit the chain")
                rows.append({"l": int(l),
                             "entropy": float(block_entropy(state, blk))})
        return _doc({"rows": rows})

    @app.post("/negativity")
    def negativity(req: NegativityRequest):
        spec = req.chain.to_spec()
        sol = solve_sector(spec, req.sector.to_dict(), req.seed_solution_path)
        state = ground_state(fluctuation_modes(spec, sol))
        value = float(log_negativity(state, np.array(req.block_a),
                                     np.array(req.block_b)))
        return _doc({"log_negativity": value})

    @app.post("/squeeze")
    def squeeze(req: SqueezeRequest):
        spec = req.chain.to_spec()
        sol = solve_sector(spec, req.sector.to_dict(), req.seed_solution_path)
        basis = fluctuation_modes(spec, sol)
        system = sq.append_external_mode(basis)
        if len(req.modes) == 1:
            system = sq.two_mode_squeeze(system, req.r, mode=req.modes[0])
        elif len(req.modes) == 2:
            system = sq.pm_squeeze(system, req.r, modes=tuple(req.modes))
        else:
            raise ConfigError("modes must name one or two fluctuation modes")
        state = system.site_state()
        out = {"inserted_entropy": sq.inserted_entropy(req.r), "rows": []}
        if req.block_a is not None and req.block_b is not None:
            a, b = np.array(req.block_a), np.array(req.block_b)
            if len(req.modes) == 2:
                out["rows"].append({
                    "bound": float(sq.double_soliton_squeeze_bound(state, a, b))})
            else:
                out["rows"].append({
                    "bound": float(sq.hashing_lower_bound(state, a, b, [spec.N]))})
        elif req.block_sizes:
            anchor = block_anchor(sol, spec)
            full = np.arange(spec.N)
            for l in req.block_sizes:
                blk = centered_block(anchor, int(l))
                if blk[0] < 0 or blk[-1] >= spec.N:
                    raise ConfigError(f"block of size {l} does not fit the chain")
                rest = np.setdiff1d(full, blk)
                out["rows"].append({"l": int(l), "bound": float(
                    sq.hashing_lower_bound(state, blk, rest, [spec.N]))})
        return _doc(out)

    @app.post("/sweep")
    def sweep(req: SweepRequest):
        config = config_from_dict(req.config)
        report = run_experiment(config, threads=max(1, req.threads))
        return _doc({
            "scenario": report.scenario,
            "rows": [list(r) for r in report.rows],
            "fits": report.fits,
            "config_hash": report.config_hash,
            "elapsed_seconds": report.elapsed_seconds,
        })

    return app


app = create_app()
