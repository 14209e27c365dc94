"""Random-waypoint mobility on a square grid (stands in for a road network)."""

from __future__ import annotations

import numpy as np


class RandomWaypoint:
    """Vectorised random waypoint without pauses.

    Each vehicle heads to a uniformly drawn waypoint at a uniformly drawn
    speed; on arrival it draws a new waypoint and speed. Only vehicles in
    ``mask`` move.
    """

    def __init__(self, positions, grid_size, speed_range, rng: np.random.Generator):
        self.grid_size = float(grid_size)
        self.speed_range = speed_range
        self.rng = rng
        self.pos = np.array(positions, dtype=float)
        n = len(self.pos)
        self.target = rng.uniform(0, self.grid_size, size=(n, 2))
        self.speed = rng.uniform(*speed_range, size=n)

    def advance(self, dt: float, mask=None) -> None:
        if mask is None:
            mask = np.ones(len(self.pos), dtype=bool)
        delta = self.target - self.pos
        dist = np.hypot(delta[:, 0], delta[:, 1])
        travel = self.speed * dt
        moving = mask & (travel > 0)
        arrive = moving & (dist <= travel)
        cruise = moving & ~arrive
        if cruise.any():
            scale = (travel[cruise] / dist[cruise])[:, None]
            self.pos[cruise] += delta[cruise] * scale
        if arrive.any():
            idx = np.nonzero(arrive)[0]
            self.pos[idx] = self.target[idx]
            self.target[idx] = self.rng.uniform(0, self.grid_size, size=(len(idx), 2))
            self.speed[idx] = self.rng.uniform(*self.speed_range, size=len(idx))
        np.clip(self.pos, 0.0, self.grid_size, out=self.pos)
