# src/packing/render
"""
SVG-рисунок упаковки: круги сплошной линией, двойственные окружности
пунктиром, окружности орбиты - отдельным цветом. Прямые обрезаются по окну.
"""
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from jinja2 import Environment, FileSystemLoader, select_autoescape

from src.geometry.circlespace import GeneralizedCircle
from src.packing.packing import CirclePacking

logger = logging.getLogger(__name__)

TEMPLATES_DIR = Path(__file__).resolve().parent.parent / "templates"

_env = Environment(
    loader=FileSystemLoader(str(TEMPLATES_DIR)),
    autoescape=select_autoescape(["svg", "j2"]),
    trim_blocks=True,
    lstrip_blocks=True,
)


@dataclass(frozen=True)
class ViewBox:
    x: float
    y: float
    w: float
    h: float


def _round(c: GeneralizedCircle, filled: bool = False) -> dict:
    z = c.center
    return {"x": z.real, "y": z.imag, "r": c.radius, "filled": filled}


def _fit(circles: Sequence[GeneralizedCircle], margin: float = 0.05) -> Tuple[float, float, float, float]:
    """Границы (xmin, xmax, ymin, ymax) ограниченных окружностей, или [−2, 2]² если их нет"""
    bounded = [c for c in circles if not c.is_line]
    if not bounded:
        return -2.0, 2.0, -2.0, 2.0
    xs = [c.center.real for c in bounded]
    ys = [c.center.imag for c in bounded]
    rs = [c.radius for c in bounded]
    xmin = min(x - r for x, r in zip(xs, rs))
    xmax = max(x + r for x, r in zip(xs, rs))
    ymin = min(y - r for y, r in zip(ys, rs))
    ymax = max(y + r for y, r in zip(ys, rs))
    pad = margin * max(xmax - xmin, ymax - ymin)
    return xmin - pad, xmax + pad, ymin - pad, ymax + pad


def clip_line(circle: GeneralizedCircle, bounds: Tuple[float, float, float, float]) -> Optional[Tuple[float, ...]]:
    """Отрезок прямой Re(B̄z) = −C/2 внутри прямоугольника (метод Лианга - Барски)"""
    b = circle.B / abs(circle.B)
    p = -circle.C / (2.0 * abs(circle.B)) * b
    d = 1j * b
    xmin, xmax, ymin, ymax = bounds
    lo, hi = -math.inf, math.inf
    for start, step, a, c in ((p.real, d.real, xmin, xmax), (p.imag, d.imag, ymin, ymax)):
        if abs(step) < 1e-15:
            if not a <= start <= c:
                return None
            continue
        t1, t2 = sorted(((a - start) / step, (c - start) / step))
        lo, hi = max(lo, t1), min(hi, t2)
    if lo >= hi:
        return None
    q1, q2 = p + lo * d, p + hi * d
    return q1.real, q1.imag, q2.real, q2.imag


def render_svg(
    packing: Optional[CirclePacking] = None,
    orbit: Sequence[GeneralizedCircle] = (),
    duals: Optional[Sequence[GeneralizedCircle]] = None,
    width: int = 800,
    title: str = "klab",
) -> str:
    disks = packing.disks if packing is not None else []
    if duals is None:
        duals = packing.spec.dual_circles if packing is not None else []
    bounded = [d.circle for d in disks if not d.circle.is_line and d.curvature > 0]
    bounds = _fit(bounded or [d.circle for d in disks] + list(orbit))
    xmin, xmax, ymin, ymax = bounds
    box = ViewBox(xmin, -ymax, xmax - xmin, ymax - ymin)
    scale = max(box.w, box.h)

    lines: List[dict] = []
    for circles, color, dashed in (
        ([d.circle for d in disks], "#1f3b73", False),
        (list(duals), "#b03030", True),
        (list(orbit), "#2d7a2d", False),
    ):
        for c in circles:
            if c.is_line:
                seg = clip_line(c, bounds)
                if seg is not None:
                    x1, y1, x2, y2 = seg
                    lines.append({"x1": x1, "y1": y1, "x2": x2, "y2": y2, "color": color, "dashed": dashed})

    template = _env.get_template("packing.svg.j2")
    svg = template.render(
        width=width,
        height=int(round(width * box.h / box.w)),
        box=box,
        title=title,
        stroke=scale / 800.0,
        dash=f"{scale / 100.0:.6g} {scale / 200.0:.6g}",
        disks=[_round(d.circle, d.curvature > 0) for d in disks if not d.circle.is_line],
        lines=lines,
        duals=[_round(c) for c in duals if not c.is_line],
        orbit=[_round(c) for c in orbit if not c.is_line],
    )
    logger.info("SVG: %d кругов, %d прямых", len(disks), len(lines))
    return svg
