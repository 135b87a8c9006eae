"""Scattering diagnostics: pull-backs, truncated wave operators, decay fits.

A trajectory scatters when its pull-back w(t) = e^{-it Laplacian} u(t)
converges; solitons are the non-scattering witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evolve import nonlinearity
from .grid import ComplexField, Trajectory
from .spectral import free_propagate, l2_norm, sobolev_norm, xt_norm


@dataclass
class ScatterReport:
    """Diagnostics of one trajectory.

    pullback_cauchy rows are (t1, t2, ||w(t2) - w(t1)||_{H^{s'}}) over
    consecutive checkpoint pairs; xt_norm_curve is nondecreasing in T.
    """

    pullback_cauchy: list
    decay_curve: list
    xt_norm_curve: list
    uplus_residual: float


def pullback(traj: Trajectory) -> Trajectory:
    """w(t) = e^{-it Laplacian} u(t) per snapshot."""
    snaps = [
        free_propagate(s, -t) for t, s in zip(traj.times, traj.snapshots)
    ]
    return Trajectory(traj.grid, traj.times, tuple(snaps))


def pullback_cauchy(traj: Trajectory, s_prime: float = 0.4,
                    checkpoints=(2.0, 4.0, 8.0)) -> list:
    """H^{s'} distances between pull-backs at consecutive checkpoints."""
    w = pullback(traj)
    idx = [int(np.argmin(np.abs(traj.times - t))) for t in checkpoints]
    rows = []
    for i, j in zip(idx[:-1], idx[1:]):
        diff = ComplexField(traj.grid, w.snapshots[j].values - w.snapshots[i].values)
        rows.append((float(traj.times[i]), float(traj.times[j]),
                     sobolev_norm(diff, s_prime)))
    return rows


def uplus_truncated(traj: Trajectory, sigma: float) -> ComplexField:
    """Truncated wave-operator profile u_plus = u(0) - int_0^T e^{-it' Lap} N(u(t')) dt'.

    Trapezoid in time over the stored snapshots; requires a dense
    trajectory (snapshot spacing <= 0.02).
    """
    if len(traj) < 2:
        raise ValueError("uplus_truncated needs at least 2 snapshots")
    dt_snap = float(np.max(np.diff(traj.times)))
    if dt_snap > 0.02 + 1e-12:
        raise ValueError(
            f"snapshot spacing {dt_snap:.4g} too sparse for the Duhamel "
            "quadrature; need <= 0.02"
        )
    acc = np.zeros(traj.grid.n_points, dtype=np.complex128)
    prev = None
    for k, (t, snap) in enumerate(zip(traj.times, traj.snapshots)):
        term = free_propagate(nonlinearity(snap, sigma), -t).values
        if prev is not None:
            acc += 0.5 * (traj.times[k] - traj.times[k - 1]) * (prev + term)
        prev = term
    return ComplexField(traj.grid, traj.snapshots[0].values - acc)


def decay_tracker(traj: Trajectory) -> list:
    """Per-snapshot (t, max |u|)."""
    return [(float(t), float(np.max(np.abs(s.values))))
            for t, s in zip(traj.times, traj.snapshots)]


def decay_exponent(curve, t_min: float = 2.0) -> float:
    """Log-log slope of the sup-norm tail; -1/2 in the dispersive regime."""
    pts = [(t, v) for t, v in curve if t >= t_min and v > 0]
    if len(pts) < 4:
        raise ValueError("too few points above t_min for a decay fit")
    t, v = np.array(pts).T
    return float(np.polyfit(np.log(t), np.log(v), 1)[0])


def xt_accumulate(traj: Trajectory, s: float, horizons=None) -> list:
    """Working-space norm on the prefixes [0, T]; nondecreasing in T."""
    if horizons is None:
        t_end = traj.times[-1]
        horizons = [t_end * 2.0 ** (-k) for k in reversed(range(4))]
    out = []
    for t_h in horizons:
        keep = traj.times <= t_h + 1e-12
        if np.sum(keep) < 2:
            continue
        prefix = Trajectory(traj.grid, traj.times[keep],
                            tuple(traj.snapshots[i] for i in np.nonzero(keep)[0]))
        out.append((float(prefix.times[-1]), xt_norm(prefix, s)))
    return out


def scatter_report(traj: Trajectory, sigma: float, s: float = 0.5,
                   s_prime: float = 0.4, checkpoints=(2.0, 4.0, 8.0)) -> ScatterReport:
    """Full diagnostic bundle for one computed trajectory."""
    cauchy = pullback_cauchy(traj, s_prime, checkpoints)
    decay = decay_tracker(traj)
    xt_curve = xt_accumulate(traj, s)
    try:
        uplus = uplus_truncated(traj, sigma)
        end = traj.times[-1]
        resid = l2_norm(ComplexField(
            traj.grid,
            traj.snapshots[-1].values - free_propagate(uplus, end).values,
        ))
    except ValueError:
        resid = float("nan")
    return ScatterReport(cauchy, decay, xt_curve, resid)
