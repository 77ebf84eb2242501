"""HTTP facade over the request handlers.

The service is stateless: every POST body is a parameter set for one
computation, validated by pydantic, executed in-process and returned
as the standard payload.  Domain violations map to 400, internal
cross-check tolerance failures to 409.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .errors import InputDomainError, ToleranceError
from .handlers import HANDLERS


class KernelRequest(BaseModel):
    kind: str = "free"
    xa: float = 0.0
    xb: float = 0.0
    t: float = Field(1.0, gt=0)
    mass: float = Field(1.0, gt=0)
    hbar: float = Field(1.0, gt=0)
    omega: float = Field(1.0, ge=0)


class LatticeRequest(BaseModel):
    kind: str = "free"
    xa: float = 0.0
    xb: float = 1.0
    t: float = Field(1.0, gt=0)
    n_slices: int = Field(32, ge=1)
    method: str = "gaussian_recursion"
    mass: float = Field(1.0, gt=0)
    hbar: float = Field(1.0, gt=0)
    omega: float = Field(1.0, ge=0)
    c0: float = 0.0
    c1: float = 0.0
    c2: float = 0.0
    grid_min: float = -8.0
    grid_max: float = 8.0
    grid_n: int = Field(2048, ge=16)


class EvolveRequest(BaseModel):
    kind: str = "free"
    t: float = Field(1.0, gt=0)
    mass: float = Field(1.0, gt=0)
    hbar: float = Field(1.0, gt=0)
    omega: float = Field(1.0, ge=0)
    x0: float = 0.0
    sigma0: float = Field(1.0, gt=0)
    p0: float = 0.0
    grid_min: float = -24.0
    grid_max: float = 24.0
    grid_n: int = Field(1024, ge=16)


class DoubleSlitRequest(BaseModel):
    separation: float = Field(2.0, gt=0)
    width: float = Field(0.2, gt=0)
    d_source_screen: float = Field(1.0, gt=0)
    d_screen_detector: float = Field(1.0, gt=0)
    t: float = Field(1.0, gt=0)
    x_source: float = 0.0
    mass: float = Field(1.0, gt=0)
    hbar: float = Field(1.0, gt=0)
    open_1: bool = True
    open_2: bool = True
    screen_min: float = -12.0
    screen_max: float = 12.0
    screen_n: int = Field(512, ge=2)


class GrinRequest(BaseModel):
    n0: float = Field(1.5, gt=0)
    g: float = 0.8
    wavelength: float = Field(0.314159265358979, gt=0)
    z: float = Field(1.0, gt=0)
    xa: float = 0.1
    xb: float = 0.3
    n_max: int = Field(60, ge=0)


class DpaRequest(BaseModel):
    omega: float = 1.0
    kappa: float = 0.3
    ta: float = 0.0
    tb: float = 1.0
    alpha_a_re: float = 1.0
    alpha_a_im: float = 0.0
    alpha_b_re: float = 0.5
    alpha_b_im: float = 0.0


class PimcRequest(BaseModel):
    observable: str = "total_energy_virial"
    mass: float = Field(1.0, gt=0)
    omega: float = Field(1.0, ge=0)
    temperature: float = Field(1.0, gt=0)
    beads: int = Field(32, ge=4)
    sweeps: int = Field(20000, ge=100)
    seed: int = 0
    charge: float = 0.0
    field: float = 0.0
    seg_len: Optional[int] = Field(None, ge=2)


class SpdcRequest(BaseModel):
    delta_k: float = 0.0
    big_gamma: Optional[float] = Field(None, ge=0)
    gamma_l: Optional[float] = Field(None, ge=0)
    length: float = Field(1.0, gt=0)
    scan_from: Optional[float] = None
    scan_to: Optional[float] = None
    scan_n: Optional[int] = Field(None, ge=2)
    k_signal: float = 40.0
    k_idler: float = 40.0


class EmissionRequest(BaseModel):
    eps1: float = 1.0
    eps2: float = Field(0.5, ge=0)
    gamma0: float = Field(1.0, gt=0)
    omega0: float = Field(1.0, gt=0)


class DielectricRequest(BaseModel):
    omega0: float = Field(1.0, gt=0)
    beta: float = 0.5
    coupling: int = Field(1, ge=0, le=1)
    eps0: float = Field(1.0, gt=0)
    damping: float = Field(0.0, ge=0)
    frequency: float = 0.0
    scan_from: Optional[float] = None
    scan_to: Optional[float] = None
    scan_n: Optional[int] = Field(None, ge=2)


_REQUEST_MODELS = {
    "kernel": KernelRequest,
    "lattice": LatticeRequest,
    "evolve": EvolveRequest,
    "double-slit": DoubleSlitRequest,
    "grin": GrinRequest,
    "dpa": DpaRequest,
    "pimc": PimcRequest,
    "spdc": SpdcRequest,
    "emission": EmissionRequest,
    "dielectric": DielectricRequest,
}


def create_app() -> FastAPI:
    app = FastAPI(title="feynpath", version=__version__,
                  description="Stateless path-integral computation service")

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    for name, model in _REQUEST_MODELS.items():
        handler = HANDLERS[name]

        def endpoint(req, _handler=handler):
            try:
                return _handler(req.model_dump())
            except InputDomainError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            except ToleranceError as exc:
                raise HTTPException(status_code=409, detail=str(exc))

        endpoint.__annotations__ = {"req": model}
        app.post(f"/{name}", name=name)(endpoint)

    return app


app = create_app()
