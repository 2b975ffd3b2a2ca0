"""
Deterministic SVG figures of a curve, its cut points and a rearrangement.
"""

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path
from typing import List, Union

import numpy as np

from .curve_kernel import DEFAULT_RESOLUTION, TurningCurve
from .rearrange import ArcChain, Cuts, Perm, rearranged

VIEW_SIZE = 1000.0
PADDING = 0.05
SAMPLES_PER_ARC = 256
ORIGINAL_COLOR = "#a0a0a0"
CUT_COLOR = "#202020"
ORIGINAL_WIDTH = "6"
ARC_WIDTH = "4"
MARKER_RADIUS = "8"
PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#17becf",
    "#8c564b",
    "#e377c2",
)


def arc_color(index: int) -> str:
    return PALETTE[(index - 1) % len(PALETTE)]


@dataclass(frozen=True)
class Frame:
    """Uniform scale from plane coordinates to the padded viewBox, with y pointing up."""

    scale: float
    x0: float
    y0: float

    @classmethod
    def fit(cls, points: np.ndarray) -> "Frame":
        xs, ys = points.real, points.imag
        width = max(xs.max() - xs.min(), ys.max() - ys.min(), 1e-12)
        inner = VIEW_SIZE * (1.0 - 2.0 * PADDING)
        scale = inner / width
        # centre the drawing inside the padded square
        x0 = VIEW_SIZE * PADDING + 0.5 * (inner - scale * (xs.max() - xs.min())) - scale * xs.min()
        y0 = VIEW_SIZE * PADDING + 0.5 * (inner - scale * (ys.max() - ys.min())) - scale * ys.min()
        return cls(scale, x0, y0)

    def map(self, z: np.ndarray) -> np.ndarray:
        x = self.x0 + self.scale * z.real
        y = VIEW_SIZE - (self.y0 + self.scale * z.imag)
        return np.column_stack([x, y])


def _path_data(xy: np.ndarray) -> str:
    coords = [f"{x:.3f},{y:.3f}" for x, y in xy]
    return "M " + " L ".join(coords)


def _polyline(parent: ET.Element, xy: np.ndarray, color: str, width: str, name: str) -> None:
    ET.SubElement(
        parent,
        "path",
        {
            "d": _path_data(xy),
            "fill": "none",
            "stroke": color,
            "stroke-width": width,
            "stroke-linejoin": "round",
            "data-name": name,
        },
    )


def _marker(parent: ET.Element, x: float, y: float, color: str, name: str) -> None:
    ET.SubElement(
        parent,
        "circle",
        {
            "cx": f"{x:.3f}",
            "cy": f"{y:.3f}",
            "r": MARKER_RADIUS,
            "fill": color,
            "data-name": name,
        },
    )


def _arc_points(chain: ArcChain) -> List[np.ndarray]:
    pieces = []
    for arc, motion in zip(chain.arcs, chain.motions):
        s = np.linspace(arc.start, arc.end, 1 if arc.degenerate else SAMPLES_PER_ARC)
        pieces.append(motion.apply(arc.local(s)))
    return pieces


def render_svg(
    curve: TurningCurve,
    sigma: Perm,
    cuts: Cuts,
    resolution: int = DEFAULT_RESOLUTION,
) -> str:
    """
    Draw the original curve (gray) with its cut points and the rearranged curve,
    one color per original arc, in a shared 1000 x 1000 frame.
    """
    table = curve.table(resolution)
    original = table.position(np.linspace(0.0, 1.0, SAMPLES_PER_ARC * cuts.k))
    cut_points = table.position(np.array(cuts.values))
    chain = rearranged(curve, sigma, cuts, resolution)
    pieces = _arc_points(chain)

    frame = Frame.fit(np.concatenate([original, cut_points] + pieces))
    root = ET.Element(
        "svg",
        {
            "xmlns": "http://www.w3.org/2000/svg",
            "viewBox": f"0 0 {VIEW_SIZE:.0f} {VIEW_SIZE:.0f}",
            "width": f"{VIEW_SIZE:.0f}",
            "height": f"{VIEW_SIZE:.0f}",
        },
    )
    base = ET.SubElement(root, "g", {"id": "original"})
    _polyline(base, frame.map(original), ORIGINAL_COLOR, ORIGINAL_WIDTH, "original")
    for i, (x, y) in enumerate(frame.map(cut_points), start=1):
        _marker(base, x, y, CUT_COLOR, f"cut {i}")

    moved = ET.SubElement(root, "g", {"id": "rearranged", "data-sigma": str(sigma)})
    for arc, points in zip(chain.arcs, pieces):
        xy = frame.map(points)
        name = f"arc {arc.index}"
        if arc.degenerate:
            _marker(moved, xy[0, 0], xy[0, 1], arc_color(arc.index), name)
        else:
            _polyline(moved, xy, arc_color(arc.index), ARC_WIDTH, name)
    ET.indent(root)
    return ET.tostring(root, encoding="unicode") + "\n"


def write_svg(
    path: Union[str, Path],
    curve: TurningCurve,
    sigma: Perm,
    cuts: Cuts,
    resolution: int = DEFAULT_RESOLUTION,
) -> None:
    Path(path).write_text(render_svg(curve, sigma, cuts, resolution))

