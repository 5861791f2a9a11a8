"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field, model_validator

ComplexPair = tuple[float, float]
Point = tuple[float, float]


class CurveSpec(BaseModel):
    kind: Literal["flower", "circle"] = "flower"
    a: float | None = None
    b: float | None = None
    n_petals: int | None = None
    radius: float | None = None

    @model_validator(mode="after")
    def _check_params(self):
        if self.kind == "flower" and None in (self.a, self.b, self.n_petals):
            raise ValueError("flower curve needs a, b, n_petals")
        if self.kind == "circle" and self.radius is None:
            raise ValueError("circle curve needs radius")
        return self


class FieldSpec(BaseModel):
    kind: Literal["plane_product", "point_source", "dipole", "plane_wave"]
    location: Point | None = None
    location_pos: Point | None = None
    location_neg: Point | None = None
    direction: Point | None = None

    def to_spec_dict(self) -> dict:
        return self.model_dump(exclude_none=True)


class LearnRequest(BaseModel):
    k: float = Field(gt=0)
    curve: CurveSpec
    n_collocation: int = Field(ge=8)
    m_sources: int = Field(ge=2)
    source_radius: float = Field(gt=0)
    alpha: float | Literal["auto"] = "auto"
    spacing: Literal["parameter", "arclength"] = "parameter"


class OperatorInfo(BaseModel):
    operator_id: str
    k: float
    alpha: float
    n_collocation: int
    m_sources: int
    source_radius: float
    learn_seconds: float


class SolveRequest(BaseModel):
    boundary_values: list[ComplexPair] | None = None
    exact_field: FieldSpec | None = None
    query_points: list[Point] | None = None
    compare: bool = False
    include_coefficients: bool = False

    @model_validator(mode="after")
    def _check_data(self):
        if (self.boundary_values is None) == (self.exact_field is None):
            raise ValueError(
                "provide exactly one of boundary_values or exact_field"
            )
        if self.compare and self.exact_field is None:
            raise ValueError("compare=true requires exact_field")
        return self


class ErrorNorms(BaseModel):
    two_norm: float
    inf_norm: float
    rms: float
    point_count: int


class SolveResponse(BaseModel):
    operator_id: str
    coefficients: list[ComplexPair] | None = None
    field_values: list[ComplexPair] | None = None
    error: ErrorNorms | None = None
    apply_seconds: float
    eval_seconds: float | None = None


class RhoRequest(BaseModel):
    samples: list[ComplexPair] = Field(min_length=64)


class RhoResponse(BaseModel):
    rho_estimate: float
    rate: float
    r_squared: float
    window: tuple[float, float]
    count: int


class HealthResponse(BaseModel):
    status: str
    operators: int
