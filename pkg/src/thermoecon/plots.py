"""Figure rendering for reports; files only, no interactive backends."""

from __future__ import annotations

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def save_demand_curve(model, phi, out_path, pr_market=None, steps=400):
    """Demand vs price at fixed wealth; shades the surplus area when
    a market price is given and the curve chokes."""
    plt = _pyplot()
    from .errors import DomainBoundsError

    try:
        choke = model.choke_price(phi)
    except DomainBoundsError:
        choke = None
    if choke is not None:
        hi = choke
        lo = pr_market / 2.0 if pr_market else choke / 20.0
    else:
        hi = (pr_market or 1.0) * 3.0
        lo = (pr_market or 1.0) / 10.0
    prices = np.linspace(lo, hi, steps)
    demand = np.array([model.qd_of(float(p), phi) for p in prices])

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(prices, demand, lw=2)
    if pr_market is not None and choke is not None:
        mask = prices >= pr_market
        ax.fill_between(prices[mask], demand[mask], alpha=0.3, label="surplus area")
        ax.axvline(pr_market, ls="--", lw=1, color="gray")
        ax.plot([pr_market], [model.qd_of(pr_market, phi)], "o", color="black")
        ax.legend()
    ax.set_xlabel("price")
    ax.set_ylabel("demand quantity")
    ax.set_title(f"demand at phi={phi:g}")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return str(out_path)


def save_path_figure(samples, out_path, kind=""):
    """Trace of one process in the (qd, pr) plane with marked endpoints."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(samples.qd, samples.pr, lw=2)
    ax.plot([samples.qd[0]], [samples.pr[0]], "o", color="green", label="start")
    ax.plot([samples.qd[-1]], [samples.pr[-1]], "s", color="red", label="end")
    ax.set_xlabel("demand quantity")
    ax.set_ylabel("price")
    if kind:
        ax.set_title(f"{kind} process")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return str(out_path)


def save_contact_figure(result, out_path):
    """Both sides' average wealth relaxing to the common level."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    t = result.trajectory.times
    ax.plot(t, result.trajectory.phi_a, lw=2, label="side a")
    ax.plot(t, result.trajectory.phi_b, lw=2, label="side b")
    ax.axhline(result.phi_star, ls="--", lw=1, color="gray", label="common phi*")
    ax.set_xlabel("time")
    ax.set_ylabel("average wealth")
    ax.set_title("wealth-exchanging contact")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return str(out_path)


def save_scatter(observations, out_path):
    """Observations in the (pr, qd) plane, colored by wealth."""
    plt = _pyplot()
    pr = [p.pr for p in observations]
    qd = [p.qd for p in observations]
    phi = [p.phi for p in observations]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    sc = ax.scatter(pr, qd, c=phi, cmap="viridis", s=18)
    fig.colorbar(sc, ax=ax, label="average wealth")
    ax.set_xlabel("price")
    ax.set_ylabel("demand quantity")
    ax.set_title("observations")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return str(out_path)
