"""Figure regeneration for vlcsec results directories.

Consumes the simulator's episode CSVs (``<scenario>/<mode>/seed<k>.csv``)
purely as files — no import of the simulator itself — and renders the
four standard comparison figures.
"""

from .render import (
    DEFAULT_SMOOTH,
    FIGURES,
    FigureSpec,
    RenderError,
    build_figure,
    build_figures,
    column_curves,
    discover_runs,
    load_frames,
    render_all,
    smooth,
)

__all__ = [
    "DEFAULT_SMOOTH",
    "FIGURES",
    "FigureSpec",
    "RenderError",
    "build_figure",
    "build_figures",
    "column_curves",
    "discover_runs",
    "load_frames",
    "render_all",
    "smooth",
]
