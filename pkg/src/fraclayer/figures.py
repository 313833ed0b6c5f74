"""Data and plots for the two solution figures (qualitative reproduction).

``fig1``: reaction-diffusion, columns ``x,u,v0,v1``.
``fig2``: convection-diffusion, columns ``x,u,u_exact,layer_correction``.
Both at ``alpha = 1/2``, ``f = -1``, homogeneous boundary values.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .caputo import Mesh
from .layers import conv_layer_correction, mu_reac, reac_layer0, reac_layer1_model
from .output import csv_text, line_plot_svg
from .solver import ProblemSpec, solve_bvp

__all__ = ["FIGURE_ALPHA", "FIGURE_EPS", "FIGURE_N", "FigureData", "fig1_data", "fig2_data", "write_figures"]

FIGURE_ALPHA = 0.5
FIGURE_EPS = 1e-2
FIGURE_N = 512


@dataclass(frozen=True, eq=False)
class FigureData:
    name: str
    header: tuple
    columns: tuple
    title: str

    def csv(self) -> str:
        return csv_text(self.header, self.columns)

    def svg(self) -> str:
        x = self.columns[0]
        series = {h: (x, c) for h, c in zip(self.header[1:], self.columns[1:])}
        return line_plot_svg(series, title=self.title, xlabel="x")

    def column(self, name: str) -> np.ndarray:
        return self.columns[self.header.index(name)]


def fig1_data(eps: float = FIGURE_EPS, n: int = FIGURE_N) -> FigureData:
    alpha = FIGURE_ALPHA
    sol = solve_bvp(ProblemSpec.reaction(alpha, eps), Mesh.graded(n, 2.0, "both"))
    x = sol.x
    v0 = reac_layer0(x / eps ** (1.0 / (2.0 - alpha)), alpha)
    v1 = reac_layer1_model(x, eps, alpha, mu_reac(eps, alpha))
    title = f"Reaction-diffusion, alpha={alpha:g}, eps={eps:g}"
    return FigureData("fig1", ("x", "u", "v0", "v1"), (x, sol.values, v0, v1), title)


def fig2_data(eps: float = FIGURE_EPS, n: int = FIGURE_N) -> FigureData:
    alpha = FIGURE_ALPHA
    sol = solve_bvp(ProblemSpec.convection(alpha, eps), Mesh.graded(n, 2.0, "left"))
    x = sol.x
    layer = conv_layer_correction(x, eps)
    exact = x - 1.0 + layer
    title = f"Convection-diffusion, alpha={alpha:g}, eps={eps:g}"
    return FigureData("fig2", ("x", "u", "u_exact", "layer_correction"), (x, sol.values, exact, layer), title)


def write_figures(outdir, eps: float = FIGURE_EPS, n: int = FIGURE_N) -> list[Path]:
    """Write ``fig1.csv``, ``fig1.svg``, ``fig2.csv``, ``fig2.svg`` into ``outdir``."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for fig in (fig1_data(eps, n), fig2_data(eps, n)):
        for suffix, text in (("csv", fig.csv()), ("svg", fig.svg())):
            path = out / f"{fig.name}.{suffix}"
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            written.append(path)
    return written
