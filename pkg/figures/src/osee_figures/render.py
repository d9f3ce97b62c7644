"""Figure recipes and the render() dispatcher.

Four kinds, matching the simulation CLI's artifacts:

    heatmap     phase-diagram CSV -> S(gamma, h) heatmap + dashed critical line
    trace       trace CSV (+ fit JSON) -> S vs log t with the fitted slope
    dispersion  dispersion CSV (+ stationary-point JSON) -> bands with markers
    ensemble    disorder manifest -> one mean curve per strength + plateaus

Rendering is read-only presentation: the only derived quantities are the
fit line already contained in the fit JSON, interpolated marker heights, and
the trailing-third mean used to place plateau guide lines.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import (
    SchemaError,
    ensemble_csv_paths,
    read_dispersion_csv,
    read_ensemble_csv,
    read_fit_json,
    read_phase_csv,
    read_points_json,
    read_trace_csv,
)

KINDS = ("heatmap", "trace", "dispersion", "ensemble")


@dataclass(frozen=True)
class FigureRecipe:
    """One figure: what to read, what kind of plot, where to write it."""

    kind: str
    inputs: tuple[str, ...]
    out: str
    title: str | None = None
    dpi: int = 150
    critical_line: bool = True      # heatmap only
    annotate: bool = True           # slope / m annotations

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}, expected one of {KINDS}")
        if not self.inputs:
            raise SchemaError("recipe needs at least one input file")


def render(recipe: FigureRecipe) -> str:
    """Render the recipe and return the written image path."""
    fig = plt.figure(figsize=(6.0, 4.2))
    try:
        ax = fig.add_subplot(111)
        _RENDERERS[recipe.kind](recipe, ax)
        if recipe.title:
            ax.set_title(recipe.title)
        fig.tight_layout()
        fig.savefig(recipe.out, dpi=recipe.dpi, metadata={"Software": "osee-figures"})
    finally:
        plt.close(fig)
    return recipe.out


def _render_heatmap(recipe: FigureRecipe, ax) -> None:
    gamma, h, S = read_phase_csv(recipe.inputs[0])
    mesh = ax.pcolormesh(h, gamma, S, shading="nearest", cmap="viridis")
    ax.figure.colorbar(mesh, ax=ax, label="S (nats)")
    if recipe.critical_line:
        gg = np.linspace(gamma.min(), gamma.max(), 256)
        hc = np.abs(1.0 - gg**2)
        inside = (hc >= h.min()) & (hc <= h.max())
        ax.plot(hc[inside], gg[inside], "w--", lw=1.5, label=r"$h_c = |1-\gamma^2|$")
        ax.legend(loc="upper right", framealpha=0.6)
    ax.set_xlabel("h")
    ax.set_ylabel(r"$\gamma$")


def _render_trace(recipe: FigureRecipe, ax) -> None:
    t, S = read_trace_csv(recipe.inputs[0])
    ax.semilogx(t, S, "o-", ms=3, lw=1, label="S(t)")
    if len(recipe.inputs) > 1:
        fit = read_fit_json(recipe.inputs[1])
        window = (t >= fit["t_min"]) & (t <= fit["t_max"]) & (t > 0)
        if not np.any(window):
            raise SchemaError(
                f"{recipe.inputs[1]}: fit window [{fit['t_min']}, {fit['t_max']}]"
                " does not overlap the trace"
            )
        tw = t[window]
        ax.semilogx(tw, fit["c"] * np.log(tw) + fit["c_prime"], "k--", lw=1.5,
                    label=f"fit: c = {fit['c']:.3f}")
        if recipe.annotate:
            ax.annotate(f"$c = {fit['c']:.3f}$", xy=(0.05, 0.92),
                        xycoords="axes fraction")
    ax.set_xlabel("t")
    ax.set_ylabel("S (nats)")
    ax.legend(loc="lower right")


def _render_dispersion(recipe: FigureRecipe, ax) -> None:
    phi, bands = read_dispersion_csv(recipe.inputs[0])
    for b, band in enumerate(bands):
        ax.plot(phi, band, lw=1.2, label=f"band {b}" if len(bands) > 1 else r"$\varepsilon(\phi)$")
    if len(recipe.inputs) > 1:
        block = read_points_json(recipe.inputs[1])
        for p in block["points"]:
            b = int(p["band"])
            if not 0 <= b < len(bands):
                raise SchemaError(f"{recipe.inputs[1]}: point references band {b}")
            eps_star = float(np.interp(p["phi"], phi, bands[b]))
            marker = "*" if p["degenerate"] else "o"
            ax.plot([p["phi"]], [eps_star], marker, color="crimson", ms=10 if p["degenerate"] else 6)
        if recipe.annotate and block["m"] is not None:
            ax.annotate(f"$m = {block['m']}$, $c = {block['c_predicted']:.4g}$",
                        xy=(0.05, 0.92), xycoords="axes fraction")
    ax.set_xlabel(r"$\phi$")
    ax.set_ylabel(r"$\varepsilon(\phi)$")
    ax.legend(loc="upper right")


def _render_ensemble(recipe: FigureRecipe, ax) -> None:
    curves = ensemble_csv_paths(recipe.inputs[0])
    for eps, path in curves:
        t, mean, stderr = read_ensemble_csv(path)
        (line,) = ax.semilogx(t, mean, lw=1.2, label=rf"$\varepsilon = {eps:g}$")
        ax.fill_between(t, mean - stderr, mean + stderr, alpha=0.25,
                        color=line.get_color(), lw=0)
        # plateau guide: mean over the trailing third of the log-time range
        pos = t > 0
        log_t = np.log(t[pos])
        window = log_t >= log_t[-1] - (log_t[-1] - log_t[0]) / 3.0
        plateau = float(mean[pos][window].mean())
        ax.axhline(plateau, color=line.get_color(), ls=":", lw=1)
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\bar{S}$ (nats)")
    ax.legend(loc="lower right")


_RENDERERS = {
    "heatmap": _render_heatmap,
    "trace": _render_trace,
    "dispersion": _render_dispersion,
    "ensemble": _render_ensemble,
}
