"""Matplotlib rendering of loci tables and density-of-states records.

Figures are written straight to files (Agg backend); the CSV artifacts
remain the primary data products.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

STYLE = {
    "branch_chiI": dict(color="0.35", ls=":", marker=None, label=r"$\chi_I = 0$"),
    "branch_chiII": dict(color="0.6", ls="--", marker=None, label=r"$\chi_{II} = 0$"),
    "EOE": dict(color="tab:red", ls="", marker=".", label="EOE"),
    "EEE": dict(color="tab:blue", ls="", marker=".", label="EEE"),
    "ELE": dict(color="tab:green", ls="", marker="*", label="ELE"),
}


def loci_figure(table, path: str, title: str | None = None):
    """Scatter the pole and branch-point loci of one polarization/model."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for kind in ("branch_chiI", "branch_chiII", "EOE", "EEE", "ELE"):
        rows = table.by_kind(kind)
        if not rows:
            continue
        Rs = [r.R for r in rows]
        ws = [r.omega for r in rows]
        style = STYLE[kind]
        if style["marker"] is None:
            ax.plot(Rs, ws, ls=style["ls"], color=style["color"], label=style["label"])
        else:
            ax.plot(Rs, ws, style["marker"], ms=8 if kind == "ELE" else 3,
                    color=style["color"], label=style["label"])
    ax.set_xlabel(r"$R$")
    ax.set_ylabel(r"$\Omega'$")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)


def dos_figure(dos, path: str, title: str | None = None):
    """Continuum density-of-states samples with pole atoms as a rug plot."""
    fig, (ax0, ax1) = plt.subplots(2, 1, figsize=(6.0, 5.0), sharex=True,
                                   height_ratios=[3, 1])
    ax0.plot(dos.omega_grid, dos.continuum, color="tab:blue", lw=1.0)
    ax0.axhline(0.0, color="0.8", lw=0.6)
    ax0.set_ylabel(r"continuum $d\mathcal{N}/d\Omega'$")
    if dos.atoms:
        omegas = [a[0] for a in dos.atoms]
        weights = [a[1] for a in dos.atoms]
        ax1.vlines(omegas, 0.0, weights, color="tab:red", lw=0.8)
    ax1.set_ylabel("atom weight")
    ax1.set_xlabel(r"$\Omega'$")
    if title:
        ax0.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)
