"""Trade-off figure rendering and standalone plot-script emission.

Both outputs consume the same delimited files: the PNG is rendered directly
for immediate inspection, and the emitted script lets the figure be
regenerated or restyled later without rerunning any sweeps.
"""

from pathlib import Path

_SCRIPT_TEMPLATE = '''\
#!/usr/bin/env python3
"""Render the private-rate trade-off curves from the sweep CSV files.

Run from the directory containing the CSV files listed below.
"""

import csv

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

CURVES = {curves!r}

fig, ax = plt.subplots(figsize=(6.4, 4.8))
for theta, filename in CURVES:
    with open(filename, newline="") as fh:
        rows = list(csv.DictReader(fh))
    r12 = [float(row["r12"]) for row in rows]
    r13 = [float(row["r13"]) for row in rows]
    ax.plot(r12, r13, marker="o", markersize=3,
            label=f"theta = {{theta:g}}")
ax.set_xlabel("R12 (bits/use)")
ax.set_ylabel("R13 (bits/use)")
ax.set_title("Trade-off between R13 and R12")
ax.grid(True, alpha=0.3)
ax.legend()
fig.tight_layout()
fig.savefig("{png_name}", dpi=150)
print("wrote {png_name}")
'''


def write_plot_script(curve_files, path, png_name: str = "tradeoff.png") -> None:
    """Emit a standalone script plotting R12 (x) against R13 (y) per theta.

    curve_files is a sequence of (theta, csv_filename) pairs; filenames are
    interpreted relative to the script's own directory.
    """
    curves = [(float(theta), str(name)) for theta, name in curve_files]
    script = _SCRIPT_TEMPLATE.format(curves=curves, png_name=png_name)
    Path(path).write_text(script, encoding="utf-8")


def render_tradeoff_png(curves, path) -> None:
    """Render the trade-off curves to a PNG file.

    curves is a sequence of (theta, points) pairs where points iterate as
    objects with r12 and r13 attributes.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for theta, points in curves:
        r12 = [p.r12 for p in points]
        r13 = [p.r13 for p in points]
        ax.plot(r12, r13, marker="o", markersize=3,
                label=f"theta = {theta:g}")
    ax.set_xlabel("R12 (bits/use)")
    ax.set_ylabel("R13 (bits/use)")
    ax.set_title("Trade-off between R13 and R12")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
