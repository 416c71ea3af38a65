"""Plain-text tables and static figures for polygons and census runs."""

from __future__ import annotations

from collections import Counter
from collections.abc import Mapping

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .census import CensusResult  # noqa: E402
from .polygon import NewtonPolygon  # noqa: E402

# byte-stable SVG output across runs
matplotlib.rcParams["svg.hashsalt"] = "genericnp"
matplotlib.rcParams["svg.fonttype"] = "none"

_STYLES = {
    "HP": dict(color="0.45", linestyle="--", linewidth=1.2, marker="s", markersize=4),
    "GNP": dict(color="#b2182b", linewidth=2.0, marker="o", markersize=5),
}


def polygons_tsv(polygons: Mapping[str, NewtonPolygon]) -> str:
    """``label<TAB>x<TAB>num/den`` rows, one per vertex."""
    lines = []
    for label, poly in polygons.items():
        for row in poly.to_tsv().splitlines():
            lines.append(f"{label}\t{row}")
    return "\n".join(lines) + "\n"


def census_tsv(result: CensusResult) -> str:
    header = "coefficients\thasse_value\tis_generic\tlies_above\tnp_vertices\n"
    rows = []
    for r in result.records:
        coeffs = " ".join(":".join(map(str, c)) for c in r.coefficients) or "-"
        hv = ":".join(map(str, r.hasse_value))
        rows.append(f"{coeffs}\t{hv}\t{int(r.is_generic)}\t{int(r.lies_above)}\t{r.np_vertices}\n")
    return header + "".join(rows)


def plot_polygons(polygons: Mapping[str, NewtonPolygon], path: str, title: str = "") -> None:
    """Overlay several polygons and write the figure to ``path`` (format from suffix)."""
    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    palette = plt.get_cmap("tab10")
    extra = 0
    for label, poly in polygons.items():
        xs = [x for x, _ in poly.vertices]
        ys = [float(y) for _, y in poly.vertices]
        style = _STYLES.get(label.split(" ")[0])
        if style is None:
            style = dict(color=palette(extra % 10), linewidth=1.0, marker=".", alpha=0.8)
            extra += 1
        ax.plot(xs, ys, label=label, **style)
    ax.set_xlabel("n")
    ax.set_ylabel("$v_q$")
    if title:
        ax.set_title(title, fontsize=10)
    ax.grid(True, linewidth=0.3, alpha=0.5)
    ax.legend(fontsize=7, frameon=False, loc="upper left")
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None} if path.endswith(".svg") else None)
    plt.close(fig)


def plot_census(result: CensusResult, path: str) -> None:
    """HP, GNP and every distinct observed Newton polygon with its frequency."""
    d, p, m = result.params.d, result.params.p, result.m
    polys: dict[str, NewtonPolygon] = {"HP(d)": result.hodge, "GNP(d,p)": result.gnp}
    counts = Counter(str(r.np_vertices) for r in result.records)
    seen = {}
    for r in result.records:
        seen.setdefault(str(r.np_vertices), r.np_vertices)
    for key in sorted(seen):
        polys[f"NP x{counts[key]}: {key}"] = seen[key]
    plot_polygons(polys, path, title=f"d={d}, p={p}, q={p}^{m}: {len(result.records)} polynomials")
