"""Per-degree dimension reports: a delimited table plus rendered figures,
written side by side into an output directory."""

import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402 - backend must be set first

from .dg import jacobian_quotient
from .pjcomplex import build_pj_complex, exactness_profile
from .quotient import corner_dims

# The bimodule complex bases are quadratic in the Jacobian basis; beyond this
# size the homology columns are skipped rather than stalling the report.
PJ_BUDGET = 90


def write_report(iqp, out_dir):
    """Write dimensions.csv, dimensions.png, and (when affordable)
    homology.png; returns the list of written paths."""
    os.makedirs(out_dir, exist_ok=True)
    n = iqp.truncation
    quotient = jacobian_quotient(iqp, n)
    boundary = corner_dims(quotient, iqp.ice_quiver.frozen_vertices)
    reduced = all(len(word) != 2 for word in iqp.potential.terms)
    homology = None
    if reduced and quotient.total <= PJ_BUDGET:
        homology = exactness_profile(build_pj_complex(iqp, n)).homology
    degrees = list(range(n + 1))

    paths = []
    csv_path = os.path.join(out_dir, "dimensions.csv")
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        header = ["degree", "jacobian_dim", "boundary_dim"]
        if homology is not None:
            header += ["homology_T3", "homology_T2", "homology_T1"]
        writer.writerow(header)
        for d in degrees:
            row = [d, quotient.dims[d], boundary[d]]
            if homology is not None:
                row += list(homology[d])
            writer.writerow(row)
    paths.append(csv_path)

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(degrees, quotient.dims, marker="o", label="Jacobian algebra")
    ax.plot(degrees, boundary, marker="s", label="boundary corner")
    ax.set_xlabel("path degree")
    ax.set_ylabel("dimension")
    ax.set_title(f"Truncated dimensions (N={n})")
    ax.legend()
    fig.tight_layout()
    dims_png = os.path.join(out_dir, "dimensions.png")
    fig.savefig(dims_png, dpi=150)
    plt.close(fig)
    paths.append(dims_png)

    if homology is not None:
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        for idx, label in enumerate(["at relations", "at duals", "at arrows"]):
            ax.plot(degrees, [h[idx] for h in homology], marker="o", label=label)
        ax.set_xlabel("total degree")
        ax.set_ylabel("homology dimension")
        ax.set_title("Bimodule complex homology per degree")
        ax.legend()
        fig.tight_layout()
        hom_png = os.path.join(out_dir, "homology.png")
        fig.savefig(hom_png, dpi=150)
        plt.close(fig)
        paths.append(hom_png)
    return paths
