"""Empirical boundedness probes for the linear space-time estimates.

Each probe computes LHS/RHS ratios of an inequality over a test
ensemble and reports the worst member.  Ratios are boundedness
signatures on the truncated box with finite horizon, not constants of
the continuum estimates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import ComplexField, GridSpec, Trajectory
from .spectral import (
    MixedNormSpec,
    free_propagate,
    l2_norm,
    lebesgue_norm,
    fractional_derivative,
    mixed_norm,
    sobolev_norm,
)

DEFAULT_PROBE_GRID = GridSpec(2048, 256.0)


@dataclass(frozen=True)
class ProbeEnsemble:
    members: tuple
    seed: int

    def __post_init__(self):
        for m in self.members:
            m.check_edge_decay()


@dataclass(frozen=True)
class ProbeReport:
    inequality_id: str
    worst_ratio: float
    worst_member: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (np.isfinite(self.worst_ratio) and self.worst_ratio >= 0):
            raise ValueError(f"worst_ratio must be finite and >= 0, got {self.worst_ratio}")


def gaussian_member(grid: GridSpec, width: float, velocity: float, center: float) -> ComplexField:
    x = grid.x
    vals = np.exp(-width * (x - center) ** 2) * np.exp(1j * velocity * x)
    return ComplexField(grid, vals)


def default_ensemble(grid: GridSpec = DEFAULT_PROBE_GRID, seed: int = 0) -> ProbeEnsemble:
    """5 widths x 5 velocities x 4 centers Gaussians plus 20 seeded random fields."""
    members = []
    for a in (0.5, 1.0, 2.0, 4.0, 8.0):
        for v in (-4.0, -2.0, 0.0, 2.0, 4.0):
            for x0 in (-6.0, -2.0, 2.0, 6.0):
                members.append(gaussian_member(grid, a, v, x0))
    rng = np.random.default_rng(seed)
    envelope = np.exp(-0.1 * grid.x**2)
    cut = np.abs(grid.xi) <= 8.0
    for _ in range(20):
        coef = rng.standard_normal(grid.n_points) + 1j * rng.standard_normal(grid.n_points)
        smooth = np.fft.ifft(np.where(cut, coef, 0.0))
        members.append(ComplexField(grid, envelope * smooth))
    return ProbeEnsemble(tuple(members), seed)


def free_trajectory(f: ComplexField, t_end: float, dt_snap: float = 0.05) -> Trajectory:
    n = int(round(t_end / dt_snap))
    times = dt_snap * np.arange(n + 1)
    snaps = tuple(free_propagate(f, t) for t in times)
    return Trajectory(f.grid, times, snaps)


def _worst(ratios, inequality_id: str, params: dict) -> ProbeReport:
    ratios = np.asarray(ratios)
    k = int(np.argmax(ratios))
    return ProbeReport(inequality_id, float(ratios[k]), k, params)


def strichartz_probe(ens: ProbeEnsemble, q: float, r: float, t_end: float) -> ProbeReport:
    """||e^{it Lap} f||_{L^q_t L^r_x([0,T])} / ||f||_{L^2} over the ensemble.

    Requires the admissibility relation 2/q = 1/2 - 1/r with q, r >= 2.
    """
    inv_q = 0.0 if np.isinf(q) else 1.0 / q
    inv_r = 0.0 if np.isinf(r) else 1.0 / r
    if not (q >= 2 and r >= 2) or abs(2.0 * inv_q - (0.5 - inv_r)) > 1e-12:
        raise ValueError(f"(q, r) = ({q}, {r}) is not an admissible pair")
    spec = MixedNormSpec("time", q, r)
    ratios = []
    for f in ens.members:
        traj = free_trajectory(f, t_end)
        ratios.append(mixed_norm(traj, spec) / l2_norm(f))
    return _worst(ratios, "strichartz", {"q": q, "r": r, "T": t_end})


def smoothing_probe(ens: ProbeEnsemble, t_end: float) -> ProbeReport:
    """||D^{1/2} e^{it Lap} f||_{L^inf_x L^2_t} / ||f||_{L^2} (local smoothing gain)."""
    spec = MixedNormSpec("space", np.inf, 2.0, derivative_order=0.5)
    ratios = []
    for f in ens.members:
        traj = free_trajectory(f, t_end)
        ratios.append(mixed_norm(traj, spec) / l2_norm(f))
    return _worst(ratios, "smoothing", {"T": t_end})


def maximal_probe(ens: ProbeEnsemble, p: float, s: float, t_end: float) -> ProbeReport:
    """||e^{it Lap} f||_{L^p_x L^inf_t} / ||f||_{H^s}; needs p >= 4, s >= 1/2 - 1/p."""
    if not 4 <= p <= 16:
        raise ValueError(f"p must lie in [4, 16], got {p}")
    if s < 0.5 - 1.0 / p - 1e-12:
        raise ValueError(f"s = {s} below the admissibility threshold 1/2 - 1/p")
    spec = MixedNormSpec("space", p, np.inf)
    ratios = []
    for f in ens.members:
        traj = free_trajectory(f, t_end)
        ratios.append(mixed_norm(traj, spec) / sobolev_norm(f, s))
    return _worst(ratios, "maximal", {"p": p, "s": s, "T": t_end})


def maximal_ratio(f: ComplexField, p: float, s: float, t_end: float) -> float:
    """Single-member maximal-estimate ratio (frequency-sweep diagnostics)."""
    spec = MixedNormSpec("space", p, np.inf)
    traj = free_trajectory(f, t_end)
    return mixed_norm(traj, spec) / sobolev_norm(f, s)


def leibniz_probe(pairs, s: float, p: float, p1: float, p2: float,
                  p3: float, p4: float) -> ProbeReport:
    """Fractional Leibniz ratio ||D^s(fg)||_p / (||D^s f||_{p1} ||g||_{p2} + ||D^s g||_{p3} ||f||_{p4})."""
    if not 0 < s < 1:
        raise ValueError(f"s must lie in (0, 1), got {s}")
    for pa, pb in ((p1, p2), (p3, p4)):
        if abs(1.0 / p - (1.0 / pa + 1.0 / pb)) > 1e-12:
            raise ValueError(
                f"exponents ({pa}, {pb}) are not Hoelder-compatible with p = {p}"
            )
    ratios = []
    for f, g in pairs:
        prod = ComplexField(f.grid, f.values * g.values)
        lhs = lebesgue_norm(fractional_derivative(prod, s), p)
        rhs = (
            lebesgue_norm(fractional_derivative(f, s), p1) * lebesgue_norm(g, p2)
            + lebesgue_norm(fractional_derivative(g, s), p3) * lebesgue_norm(f, p4)
        )
        ratios.append(lhs / rhs if rhs > 0 else 0.0)
    return _worst(ratios, "leibniz", {"s": s, "p": p, "p1": p1, "p2": p2, "p3": p3, "p4": p4})
