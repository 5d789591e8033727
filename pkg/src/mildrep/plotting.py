"""Figure rendering for the CLI report paths (matplotlib, Agg backend)."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def save_potential_figure(path, rows, title):
    """rows: list of (r, w, dw)."""
    r = [row[0] for row in rows]
    w = [row[1] for row in rows]
    dw = [row[2] for row in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(r, w, label="w(r)")
    ax.plot(r, dw, "--", label="w'(r)")
    ax.axhline(0.0, color="0.7", lw=0.8)
    ax.set_xlabel("r")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_threshold_figure(path, reports):
    betas = [rep.beta for rep in reports]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(betas, [rep.underline_alpha for rep in reports], "o-",
            label="underline_alpha")
    ax.fill_between(betas, [rep.alpha_plus_lo for rep in reports],
                    [rep.alpha_plus_hi for rep in reports], alpha=0.3,
                    label="alpha_plus bracket")
    ax.plot(betas, [rep.alpha_star for rep in reports], "s-",
            label="alpha_star")
    ax.plot(betas, betas, ":", color="0.5", label="alpha = beta")
    ax.set_xlabel("beta")
    ax.set_ylabel("alpha")
    n = reports[0].n if reports else "?"
    ax.set_title(f"threshold bounds, n={n}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_flow_figure(path, result):
    pts = result.final.points
    n = result.final.dim
    if n == 3:
        fig = plt.figure(figsize=(9, 4))
        ax1 = fig.add_subplot(1, 2, 1)
        ax2 = fig.add_subplot(1, 2, 2, projection="3d")
        ax2.scatter(pts[:, 0], pts[:, 1], pts[:, 2], s=12)
    else:
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
        if n == 1:
            ax2.scatter(pts[:, 0], [0.0] * len(pts), s=12)
        else:
            ax2.scatter(pts[:, 0], pts[:, 1], s=12)
            ax2.set_aspect("equal")
    ax1.plot(result.energy_trace)
    ax1.set_xlabel("accepted step")
    ax1.set_ylabel("energy")
    ax2.set_title(str(result.classification))
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_fgrid_figure(path, table):
    """table: list of (n, t, f, f_limit) rows sorted by (n, t)."""
    by_n = {}
    for n, t, f, flim in table:
        by_n.setdefault(n, []).append((t, f, flim))
    fig, ax = plt.subplots(figsize=(6, 4))
    for n, rows in sorted(by_n.items()):
        ts = [r[0] for r in rows]
        ax.plot(ts, [r[1] for r in rows], label=f"n={n}")
    if by_n:
        rows = next(iter(sorted(by_n.items())))[1]
        ax.plot([r[0] for r in rows], [r[2] for r in rows], "k--",
                label="limit")
    ax.axhline(0.0, color="0.7", lw=0.8)
    ax.set_xlabel("t")
    ax.set_ylabel("probe gap")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
