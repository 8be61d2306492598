"""Minimal SVG line chart for convergence traces."""

from __future__ import annotations

from xml.sax.saxutils import escape

_COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd")
_REF_COLORS = ("#d62728", "#7f7f7f", "#8c564b", "#17becf", "#e377c2")


def convergence_svg(
    series: dict[str, list[tuple[float, float]]],
    reference_lines: dict[str, float],
    title: str = "Energy convergence",
    width: int = 720,
    height: int = 420,
) -> str:
    """Render ``series`` (label -> [(iteration, energy)]) with horizontal references."""
    margin_l, margin_r, margin_t, margin_b = 70, 190, 40, 50
    plot_w = width - margin_l - margin_r
    plot_h = height - margin_t - margin_b

    xs = [x for pts in series.values() for x, _ in pts] or [0.0, 1.0]
    ys = [y for pts in series.values() for _, y in pts] + list(reference_lines.values())
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1
    pad = 0.05 * ((y_hi - y_lo) or 1.0)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def sx(x):
        return margin_l + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y):
        return margin_t + (y_hi - y) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{margin_l}" y="24" font-size="15">{escape(title)}</text>',
        f'<rect x="{margin_l}" y="{margin_t}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="black"/>',
    ]
    for i in range(6):
        y = y_lo + (y_hi - y_lo) * i / 5
        out.append(
            f'<text x="{margin_l - 6}" y="{sy(y) + 4:.1f}" text-anchor="end">{y:.3f}</text>'
        )
        x = x_lo + (x_hi - x_lo) * i / 5
        out.append(
            f'<text x="{sx(x):.1f}" y="{margin_t + plot_h + 16}" text-anchor="middle">{x:.0f}</text>'
        )
    out.append(
        f'<text x="{margin_l + plot_w / 2}" y="{height - 10}" text-anchor="middle">iteration</text>'
    )
    out.append(
        f'<text x="16" y="{margin_t + plot_h / 2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {margin_t + plot_h / 2})">energy (Hartree)</text>'
    )

    legend_y = margin_t + 10
    for k, (label, value) in enumerate(reference_lines.items()):
        color = _REF_COLORS[k % len(_REF_COLORS)]
        y = sy(value)
        out.append(
            f'<line x1="{margin_l}" x2="{margin_l + plot_w}" y1="{y:.1f}" y2="{y:.1f}" '
            f'stroke="{color}" stroke-dasharray="6 4"/>'
        )
        out.append(_legend(width - margin_r + 12, legend_y, color, f"{label} ({value})", dashed=True))
        legend_y += 18
    for k, (label, pts) in enumerate(series.items()):
        color = _COLORS[k % len(_COLORS)]
        path = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in pts)
        out.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        out.append(_legend(width - margin_r + 12, legend_y, color, label))
        legend_y += 18
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _legend(x, y, color, label, dashed=False):
    dash = ' stroke-dasharray="6 4"' if dashed else ""
    return (
        f'<line x1="{x}" x2="{x + 20}" y1="{y}" y2="{y}" stroke="{color}"{dash}/>'
        f'<text x="{x + 26}" y="{y + 4}">{escape(label)}</text>'
    )
