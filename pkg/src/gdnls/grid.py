"""Periodic grid, complex fields and trajectories.

The spatial domain is the real line truncated to a periodic box
[-L/2, L/2).  Fields are only admissible when they decay below a small
threshold at the box edge, so the periodic wrap-around is invisible at
working precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

EDGE_DECAY_THRESHOLD = 1e-12


class ResolutionError(RuntimeError):
    """A field does not decay at the box edge / a profile is unresolved."""


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid with n_points samples on a box of length box_length."""

    n_points: int
    box_length: float

    def __post_init__(self):
        if self.n_points < 16 or not _is_power_of_two(self.n_points):
            raise ValueError(f"n_points must be a power of two >= 16, got {self.n_points}")
        if not self.box_length > 0:
            raise ValueError(f"box_length must be positive, got {self.box_length}")

    @property
    def spacing(self) -> float:
        return self.box_length / self.n_points

    @property
    def x(self) -> np.ndarray:
        """Sample points -L/2 + j*h, j = 0..n-1."""
        return -0.5 * self.box_length + self.spacing * np.arange(self.n_points)

    @property
    def xi(self) -> np.ndarray:
        """Angular frequencies 2*pi*k/L in FFT ordering."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.spacing)


@dataclass(frozen=True)
class ComplexField:
    """One complex sample per grid point (physical space)."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.grid.n_points,):
            raise ValueError(
                f"values must have shape ({self.grid.n_points},), got {v.shape}"
            )
        if not np.all(np.isfinite(v.view(np.float64))):
            raise ValueError("field contains non-finite samples")
        object.__setattr__(self, "values", v)

    def edge_magnitude(self) -> float:
        """Largest sample magnitude in the outermost 8 points on each side."""
        v = np.abs(self.values)
        return float(max(v[:8].max(), v[-8:].max()))

    def check_edge_decay(self, threshold: float = EDGE_DECAY_THRESHOLD) -> None:
        m = self.edge_magnitude()
        if m > threshold:
            raise ResolutionError(
                f"field magnitude {m:.3e} at box edge exceeds {threshold:.0e}; "
                "enlarge the box or the profile is unresolved"
            )


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered snapshots of a field on a fixed grid."""

    grid: GridSpec
    times: np.ndarray
    snapshots: tuple = field(default=())

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.size == 0:
            raise ValueError("trajectory must contain at least one time")
        if t[0] != 0.0:
            raise ValueError("times must start at 0")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("times must be strictly increasing")
        snaps = tuple(self.snapshots)
        if len(snaps) != t.size:
            raise ValueError("one snapshot per time required")
        for s in snaps:
            if s.grid != self.grid:
                raise ValueError("all snapshots must share the trajectory grid")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "snapshots", snaps)

    def __len__(self) -> int:
        return len(self.snapshots)

    def matrix(self) -> np.ndarray:
        """Snapshots stacked as a (n_times, n_points) array."""
        return np.stack([s.values for s in self.snapshots])

    @staticmethod
    def from_matrix(grid: GridSpec, times, matrix) -> "Trajectory":
        snaps = tuple(ComplexField(grid, row) for row in np.asarray(matrix))
        return Trajectory(grid, np.asarray(times, dtype=float), snaps)
