"""Fixed-step RK4 for u' = Bu at double precision, tracking H and the Casimirs."""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .exact import RatMatrix
from .sampling import random_point


@dataclass(frozen=True)
class FlowConfig:
    t_max: float = 10.0
    steps: int = 1000
    seed: int = 0


def to_array(m: RatMatrix) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in m.tolist()], dtype=float)


def rk4(b: np.ndarray, u0: np.ndarray, h: float, steps: int) -> np.ndarray:
    """Trajectory of shape (steps + 1, m)."""
    out = np.empty((steps + 1, u0.size))
    out[0] = u = u0
    for k in range(steps):
        k1 = b @ u
        k2 = b @ (u + 0.5 * h * k1)
        k3 = b @ (u + 0.5 * h * k2)
        k4 = b @ (u + h * k3)
        u = u + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        out[k + 1] = u
    return out


def demo_flow(b: RatMatrix, s: RatMatrix, casimirs: list[RatMatrix], cfg: FlowConfig):
    """Times, H(u(t)) = 1/2 u^t S u, and each linear Casimir along the trajectory."""
    u0 = to_array(random_point(random.Random(cfg.seed), b.rows)).ravel()
    h = cfg.t_max / cfg.steps
    traj = rk4(to_array(b), u0, h, cfg.steps)
    sm = to_array(s)
    ham = 0.5 * np.einsum("ti,ij,tj->t", traj, sm, traj)
    cas = [traj @ to_array(c).ravel() for c in casimirs]
    times = np.arange(cfg.steps + 1) * h
    return times, ham, cas


def relative_drift(values: np.ndarray) -> float:
    return float(np.max(np.abs(values - values[0])) / max(1.0, abs(values[0])))
