"""Figure renderers for the CLI report paths.

Each function takes already-computed report data and writes one PNG next
to the delimited output. Rendering is headless (Agg) and date-free so a
repeated run produces the same file.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .ising import EntropyScan, chord_length

plt.rcParams.update({
    "figure.dpi": 110,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
})

_META = {"Software": "mpslab"}


def save_entropy_scan_figure(scan: EntropyScan, chi_required, path):
    """Block entropy against block size with the chord-length fit overlaid."""
    ls = np.asarray(scan.block_sizes, dtype=float)
    s = np.asarray(scan.entropies, dtype=float)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8.0, 3.2))

    ax1.plot(ls, s, "o", ms=4, label=r"measured $S_l$")
    if scan.fitted_c is not None:
        dense_l = np.linspace(ls[0], ls[-1], 200)
        fit_offset = np.mean(
            s - scan.fitted_c / 3.0 * np.log(chord_length(scan.n, ls, scan.boundary))
        )
        ax1.plot(
            dense_l,
            scan.fitted_c / 3.0 * np.log(chord_length(scan.n, dense_l, scan.boundary))
            + fit_offset,
            "-",
            lw=1,
            label=rf"fit $c = {scan.fitted_c:.3f}$",
        )
    ax1.set_xlabel("block size $l$")
    ax1.set_ylabel("entropy (nats)")
    ax1.set_title(f"n={scan.n}, h={scan.h}, {scan.boundary}")
    ax1.legend(frameon=False)

    if chi_required is not None:
        ax2.plot(ls, chi_required, "s", ms=4, label=r"measured $\chi(l)$")
        if scan.fitted_c is not None and scan.fitted_c > 0:
            ax2.plot(
                ls,
                ls ** (scan.fitted_c / 6.0),
                "--",
                lw=1,
                label=r"$l^{c/6}$ guide",
            )
        ax2.set_xlabel("block size $l$")
        ax2.set_ylabel(r"minimal $\chi$")
        ax2.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, metadata=_META)
    plt.close(fig)


def save_bond_profile_figure(bond_entropies, bond_dims, path, title=""):
    """Per-bond entropy and bond dimension of one open MPS."""
    cuts = np.arange(1, len(bond_entropies) + 1)
    fig, ax = plt.subplots(figsize=(4.8, 3.2))
    ax.plot(cuts, bond_entropies, "o-", ms=4, label="entropy (nats)")
    ax.plot(cuts, np.log(np.asarray(bond_dims, dtype=float)), "s--", ms=4,
            label=r"$\ln \chi$ bound")
    ax.set_xlabel("cut position")
    ax.set_ylabel("nats")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, metadata=_META)
    plt.close(fig)


def save_compression_figure(original, reconstructed, report, path):
    """Original and reconstructed rasters side by side."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(6.4, 3.4))
    for ax, img, name in ((ax1, original, "original"),
                          (ax2, reconstructed, "reconstructed")):
        ax.imshow(img.pixels, cmap="gray", vmin=0, vmax=img.max_value,
                  interpolation="nearest")
        ax.set_title(name)
        ax.set_xticks([])
        ax.set_yticks([])
        ax.grid(False)
    psnr_txt = "exact" if report.lossless else f"PSNR {report.psnr:.2f} dB"
    fig.suptitle(
        f"chi={report.chi}: {report.params_stored} of {report.params_raw} "
        f"parameters, {psnr_txt}"
    )
    fig.tight_layout()
    fig.savefig(path, metadata=_META)
    plt.close(fig)
