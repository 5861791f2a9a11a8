"""FastAPI application: learn operators once, serve solves repeatedly.

Learned operators are held in an in-memory registry keyed by id, so a
long-running service pays the learning cost once per configuration and
answers subsequent boundary inputs with the cheap W f product. Operators
can be exported/imported as the same JSON container the CLI uses.
"""

from __future__ import annotations

import threading
import time
import uuid

import numpy as np
from fastapi import FastAPI, HTTPException

from ..analytics import error_report, estimate_rho
from ..fields import field_from_spec
from ..geometry import circle_curve, flower_curve
from ..solver import (
    LearnedOperator,
    WaveProblem,
    apply_coefficients,
    boundary_trace,
    default_alpha,
    field_from_sources,
    learn,
    operator_from_json_dict,
    operator_to_json_dict,
)
from .models import (
    ErrorNorms,
    HealthResponse,
    LearnRequest,
    OperatorInfo,
    RhoRequest,
    RhoResponse,
    SolveRequest,
    SolveResponse,
)


class OperatorRegistry:
    def __init__(self):
        self._lock = threading.Lock()
        self._operators: dict[str, LearnedOperator] = {}

    def add(self, op: LearnedOperator) -> str:
        op_id = uuid.uuid4().hex[:12]
        with self._lock:
            self._operators[op_id] = op
        return op_id

    def get(self, op_id: str) -> LearnedOperator:
        with self._lock:
            op = self._operators.get(op_id)
        if op is None:
            raise HTTPException(status_code=404, detail=f"no operator {op_id!r}")
        return op

    def remove(self, op_id: str) -> None:
        with self._lock:
            if op_id not in self._operators:
                raise HTTPException(status_code=404, detail=f"no operator {op_id!r}")
            del self._operators[op_id]

    def items(self):
        with self._lock:
            return list(self._operators.items())

    def __len__(self) -> int:
        with self._lock:
            return len(self._operators)


def _info(op_id: str, op: LearnedOperator) -> OperatorInfo:
    return OperatorInfo(
        operator_id=op_id,
        k=op.k,
        alpha=op.alpha,
        n_collocation=len(op.collocation),
        m_sources=len(op.sources),
        source_radius=op.source_radius,
        learn_seconds=op.learn_seconds,
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="helmlearn",
        description="Learned boundary-to-solution operators for the 2D "
        "Dirichlet Helmholtz equation.",
    )
    registry = OperatorRegistry()
    app.state.registry = registry

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", operators=len(registry))

    @app.post("/operators", response_model=OperatorInfo)
    def learn_operator(request: LearnRequest):
        if request.curve.kind == "flower":
            curve = flower_curve(request.curve.a, request.curve.b, request.curve.n_petals)
        else:
            curve = circle_curve(request.curve.radius)
        alpha = (
            default_alpha(request.m_sources, request.n_collocation, request.source_radius)
            if request.alpha == "auto"
            else float(request.alpha)
        )
        try:
            problem = WaveProblem(
                k=request.k,
                curve=curve,
                n_collocation=request.n_collocation,
                m_sources=request.m_sources,
                source_radius=request.source_radius,
                alpha=alpha,
                spacing=request.spacing,
            )
            op = learn(problem)
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        return _info(registry.add(op), op)

    @app.get("/operators", response_model=list[OperatorInfo])
    def list_operators():
        return [_info(op_id, op) for op_id, op in registry.items()]

    @app.get("/operators/{op_id}", response_model=OperatorInfo)
    def get_operator(op_id: str):
        return _info(op_id, registry.get(op_id))

    @app.delete("/operators/{op_id}")
    def delete_operator(op_id: str):
        registry.remove(op_id)
        return {"deleted": op_id}

    @app.get("/operators/{op_id}/export")
    def export_operator(op_id: str):
        return operator_to_json_dict(registry.get(op_id))

    @app.post("/operators/import", response_model=OperatorInfo)
    def import_operator(doc: dict):
        try:
            op = operator_from_json_dict(doc)
        except (ValueError, KeyError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        return _info(registry.add(op), op)

    @app.post("/operators/{op_id}/solve", response_model=SolveResponse)
    def solve(op_id: str, request: SolveRequest):
        op = registry.get(op_id)
        field = None
        try:
            if request.exact_field is not None:
                field = field_from_spec(request.exact_field.to_spec_dict(), op.k)
                f = boundary_trace(field, op.collocation)
            else:
                f = np.array(
                    [complex(re, im) for re, im in request.boundary_values]
                )
                if f.shape[0] != op.w.shape[1]:
                    raise ValueError(
                        f"boundary data has {f.shape[0]} values, operator "
                        f"expects {op.w.shape[1]}"
                    )
            t0 = time.perf_counter()
            coeffs = apply_coefficients(op, f)
            apply_seconds = time.perf_counter() - t0

            field_values = None
            eval_seconds = None
            error = None
            if request.query_points is not None:
                pts = np.asarray(request.query_points, dtype=float)
                t0 = time.perf_counter()
                values = field_from_sources(op.sources, op.k, coeffs, pts)
                eval_seconds = time.perf_counter() - t0
                field_values = [(v.real, v.imag) for v in values]
                if request.compare:
                    exact = field.evaluate(pts)
                    rep = error_report(exact, values)
                    error = ErrorNorms(
                        two_norm=rep.two_norm,
                        inf_norm=rep.inf_norm,
                        rms=rep.rms,
                        point_count=rep.point_count,
                    )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        return SolveResponse(
            operator_id=op_id,
            coefficients=(
                [(c.real, c.imag) for c in coeffs]
                if request.include_coefficients
                else None
            ),
            field_values=field_values,
            error=error,
            apply_seconds=apply_seconds,
            eval_seconds=eval_seconds,
        )

    @app.post("/estimate-rho", response_model=RhoResponse)
    def estimate_rho_endpoint(request: RhoRequest):
        samples = np.array([complex(re, im) for re, im in request.samples])
        try:
            fit, rho = estimate_rho(samples)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        return RhoResponse(
            rho_estimate=rho,
            rate=fit.rate,
            r_squared=fit.r_squared,
            window=fit.window,
            count=len(samples),
        )

    return app


app = create_app()
