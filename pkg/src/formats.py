"""
Curve JSON documents and result CSV tables.
"""

import io
import json
from pathlib import Path
from typing import Annotated, List, Literal, Sequence, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .curve_kernel import MIN_SAMPLES, FourierTheta, SampledTheta, TurningCurve
from .solver import SolveResult


class CurveFormatError(ValueError):
    """Invalid curve document; locations lists the offending fields."""

    def __init__(self, message: str, locations: Sequence[str] = ()):
        super().__init__(message)
        self.locations = list(locations)


class SamplesThetaModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["samples"]
    values: List[float] = Field(min_length=MIN_SAMPLES)


class FourierTermModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    amp: float = Field(allow_inf_nan=False)
    freq: float = Field(allow_inf_nan=False)
    phase: float = Field(allow_inf_nan=False)


class FourierThetaModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["fourier"]
    winding: int
    terms: List[FourierTermModel] = []
    anchored: bool = False


ThetaModel = Annotated[Union[SamplesThetaModel, FourierThetaModel], Field(discriminator="kind")]


class CurveDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    version: Literal[1] = 1
    speed: float = Field(gt=0, allow_inf_nan=False)
    theta: ThetaModel

    def to_curve(self) -> TurningCurve:
        theta = self.theta
        if isinstance(theta, SamplesThetaModel):
            return TurningCurve.from_samples(self.speed, theta.values)
        terms = [(term.amp, term.freq, term.phase) for term in theta.terms]
        return TurningCurve.from_fourier(self.speed, theta.winding, terms, theta.anchored)

    @classmethod
    def from_curve(cls, curve: TurningCurve) -> "CurveDocument":
        theta = curve.theta
        if isinstance(theta, SampledTheta):
            model = SamplesThetaModel(kind="samples", values=theta.values.tolist())
        elif isinstance(theta, FourierTheta):
            model = FourierThetaModel(
                kind="fourier",
                winding=theta.winding,
                terms=[FourierTermModel(amp=t.amp, freq=t.freq, phase=t.phase) for t in theta.terms],
                anchored=theta.anchored,
            )
        else:
            raise TypeError(f"unsupported theta representation {type(theta).__name__}")
        return cls(speed=curve.speed, theta=model)


def _location(error: dict) -> str:
    return ".".join(str(part) for part in error["loc"]) or "<root>"


def parse_curve(text: str, source: str = "<string>") -> TurningCurve:
    """
    Parse a curve JSON document.

    Raises:
        CurveFormatError: with line/column for malformed JSON and dotted field
            paths for schema violations
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise CurveFormatError(
            f"{source}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}"
        ) from None
    try:
        document = CurveDocument.model_validate(data)
    except ValidationError as e:
        errors = e.errors()
        locations = [_location(err) for err in errors]
        details = "; ".join(f"{loc}: {err['msg']}" for loc, err in zip(locations, errors))
        raise CurveFormatError(f"{source}: {details}", locations) from None
    try:
        return document.to_curve()
    except ValueError as e:
        raise CurveFormatError(f"{source}: theta: {e}", ["theta"]) from None


def load_curve(path: Union[str, Path]) -> TurningCurve:
    path = Path(path)
    return parse_curve(path.read_text(), source=str(path))


def dump_curve(curve: TurningCurve) -> str:
    return CurveDocument.from_curve(curve).model_dump_json(indent=2)


def save_curve(curve: TurningCurve, path: Union[str, Path]) -> None:
    Path(path).write_text(dump_curve(curve) + "\n")


def results_frame(results: Sequence[SolveResult]) -> pd.DataFrame:
    """One row per result: sigma, c_1..c_{k-1}, residual, tangent_mismatch, margin, iterations, method."""
    if not results:
        raise ValueError("no results to tabulate")
    k = results[0].k
    if any(result.k != k for result in results):
        raise ValueError("results mix different numbers of arcs")
    rows = []
    for result in results:
        row = {"sigma": str(result.sigma)}
        row.update({f"c_{i}": value for i, value in enumerate(result.cuts.values, start=1)})
        row.update(
            residual=result.residual,
            tangent_mismatch=result.tangent_mismatch,
            margin=result.margin,
            iterations=result.iterations,
            method=result.method,
        )
        rows.append(row)
    return pd.DataFrame(rows)


def results_csv(results: Sequence[SolveResult]) -> str:
    buffer = io.StringIO()
    results_frame(results).to_csv(buffer, index=False, float_format="%.17g", lineterminator="\n")
    return buffer.getvalue()


def write_results_csv(results: Sequence[SolveResult], path: Union[str, Path]) -> None:
    Path(path).write_text(results_csv(results))
