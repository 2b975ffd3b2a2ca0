"""Tests for curve documents and result tables."""

import io
import json

import numpy as np
import pandas as pd
import pytest

from src.curve_family import tailed_loop, wobbly_circle
from src.formats import (
    CurveFormatError,
    dump_curve,
    load_curve,
    parse_curve,
    results_csv,
    results_frame,
    save_curve,
    write_results_csv,
)
from src.rearrange import Cuts, Perm
from src.solver import SolveResult


def result(sigma=(1, 3, 2), cuts=(0.125, 0.6), residual=3.0e-9):
    return SolveResult(Perm(sigma), Cuts(cuts), residual, 0.0, Cuts(cuts).margin, 7, "newton")


class TestCurveDocument:
    def test_fourier_document(self):
        text = json.dumps(
            {
                "version": 1,
                "speed": 2.0,
                "theta": {
                    "kind": "fourier",
                    "winding": 1,
                    "terms": [{"amp": 0.9, "freq": 2.0, "phase": 0.0}],
                    "anchored": True,
                },
            }
        )
        curve = parse_curve(text)
        assert curve.speed == 2.0
        assert curve.normalized
        assert curve.theta_at(0.25) == pytest.approx(wobbly_circle().theta_at(0.25))

    def test_dump_then_parse_keeps_samples(self):
        curve = tailed_loop(samples=129)
        again = parse_curve(dump_curve(curve))
        np.testing.assert_array_equal(again.theta.values, curve.theta.values)

    def test_save_and_load(self, tmp_path, wobbly):
        path = tmp_path / "curve.json"
        save_curve(wobbly, path)
        assert load_curve(path).theta == wobbly.theta

    def test_invalid_json(self):
        with pytest.raises(CurveFormatError, match="line 1, column"):
            parse_curve('{"speed": 1.0,', source="broken.json")

    def test_negative_speed(self):
        text = json.dumps({"speed": -1.0, "theta": {"kind": "fourier", "winding": 1}})
        with pytest.raises(CurveFormatError) as info:
            parse_curve(text)
        assert info.value.locations == ["speed"]

    @pytest.mark.parametrize("field", ["amp", "freq", "phase"])
    @pytest.mark.parametrize("value", [float("inf"), float("nan")])
    def test_non_finite_fourier_term(self, field, value):
        term = {"amp": 0.5, "freq": 2.0, "phase": 0.0, field: value}
        text = json.dumps({"speed": 1.0, "theta": {"kind": "fourier", "winding": 1, "terms": [term]}})
        with pytest.raises(CurveFormatError) as info:
            parse_curve(text)
        assert info.value.locations == [f"theta.fourier.terms.0.{field}"]

    def test_too_few_samples(self):
        text = json.dumps({"speed": 1.0, "theta": {"kind": "samples", "values": [0.0, 1.0]}})
        with pytest.raises(CurveFormatError) as info:
            parse_curve(text)
        assert any("values" in location for location in info.value.locations)

    def test_unknown_field(self):
        text = json.dumps({"speed": 1.0, "colour": "red", "theta": {"kind": "fourier", "winding": 0}})
        with pytest.raises(CurveFormatError) as info:
            parse_curve(text)
        assert "colour" in info.value.locations

    def test_unknown_kind(self):
        text = json.dumps({"speed": 1.0, "theta": {"kind": "spline"}})
        with pytest.raises(CurveFormatError, match="theta"):
            parse_curve(text)

    def test_broken_lift(self):
        values = [0.0] * 40 + [5.0] * 40
        text = json.dumps({"speed": 1.0, "theta": {"kind": "samples", "values": values}})
        with pytest.raises(CurveFormatError, match="continuous lift") as info:
            parse_curve(text)
        assert info.value.locations == ["theta"]


class TestResultsTable:
    def test_columns(self):
        frame = results_frame([result()])
        assert list(frame.columns) == [
            "sigma",
            "c_1",
            "c_2",
            "residual",
            "tangent_mismatch",
            "margin",
            "iterations",
            "method",
        ]
        assert frame["sigma"][0] == "1 3 2"

    def test_full_precision(self):
        value = 0.1 + 0.2
        table = pd.read_csv(io.StringIO(results_csv([result(cuts=(value, 0.6))])))
        assert table["c_1"][0] == value

    def test_mixed_k(self):
        with pytest.raises(ValueError, match="different numbers"):
            results_frame([result(), result((2, 1, 4, 3), (0.1, 0.2, 0.3))])

    def test_empty(self):
        with pytest.raises(ValueError, match="no results"):
            results_frame([])

    def test_write(self, tmp_path):
        path = tmp_path / "out.csv"
        write_results_csv([result()], path)
        assert path.read_text().splitlines()[0].startswith("sigma,c_1,c_2,residual")
