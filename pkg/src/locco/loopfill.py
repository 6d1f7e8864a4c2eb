"""Loop contractions, the recursive simplex filler and sampled paths.

A loop contraction slides a carrier to its zero element through additive
maps: time 0 is the identity, time 1 the constant zero.  Out of it the
edge filler interpolates two points, and the recursive simplex filler turns
barycentric weights into carrier elements, one cone at a time.  Carriers are
numpy arrays, so vectors and uniformly sampled paths share all the code.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError

BRANCH_EPS = 1e-12
DEFAULT_PATH_SAMPLES = 257


@dataclass(frozen=True)
class LoopContraction:
    """Additive family of self-maps with identity at 0 and zero map at 1.

    ``reversed`` adapts carriers whose native sliding runs the other way
    (zero map at 0); the evaluation flips the time argument.
    """

    name: str
    apply: Callable
    reversed: bool = False

    def __call__(self, v, t: float):
        s = 1.0 - t if self.reversed else t
        return self.apply(np.asarray(v, dtype=float), float(s))


def linear_contraction() -> LoopContraction:
    """Straight-line sliding of a real vector space: v goes to (1 - t) v."""
    return LoopContraction(name="linear", apply=lambda v, t: (1.0 - t) * v)


def check_contraction_axioms(contraction: LoopContraction, carrier_samples: Sequence,
                             rng, trials: int = 50, tol: float = 1e-9) -> "CheckReport":
    """Identity at 0, zero at 1, additivity in the carrier argument."""
    dev = 0.0
    count = 0
    pool = list(carrier_samples)
    for _ in range(trials):
        v = pool[rng.integers(len(pool))]
        w = pool[rng.integers(len(pool))]
        t = float(rng.uniform(0.0, 1.0))
        dev = max(dev, _dist(contraction(v, 0.0), v))
        dev = max(dev, float(np.max(np.abs(contraction(v, 1.0)))))
        dev = max(dev, _dist(contraction(np.asarray(v) + np.asarray(w), t),
                             np.asarray(contraction(v, t)) + np.asarray(contraction(w, t))))
        count += 3
    return CheckReport("contraction-axioms", count, dev, tol, dev <= tol)


# ---------------------------------------------------------------------------
# fillers


def edge_fill(contraction: LoopContraction, v0, w, t: float) -> np.ndarray:
    """Slide from w (time 0) to v0 (time 1) along the contraction."""
    v0 = np.asarray(v0, dtype=float)
    w = np.asarray(w, dtype=float)
    return v0 + np.asarray(contraction(w - v0, t))


def check_barycentric(weights: Sequence[float], tol: float = 1e-12) -> tuple:
    ws = tuple(float(w) for w in weights)
    if not ws:
        raise DomainError("need at least one barycentric weight")
    if any(w < -tol for w in ws):
        raise DomainError(f"negative barycentric weight in {ws}")
    if abs(sum(ws) - 1.0) > tol:
        raise DomainError(f"barycentric weights sum to {sum(ws)}, not 1")
    return ws


def sigma_fill(contraction: LoopContraction, vertices: Sequence,
               weights: Sequence[float], tol: float = 1e-12) -> np.ndarray:
    """Recursive cone filler: barycentric weights select a carrier element.

    The first weight drives an edge fill between the first vertex and the
    filler of the remaining vertices at renormalized weights; weight 1 on
    the first vertex short-circuits to that vertex.
    """
    vs = [np.asarray(v, dtype=float) for v in vertices]
    ws = check_barycentric(weights, tol)
    if len(vs) != len(ws):
        raise DomainError(f"{len(vs)} vertices against {len(ws)} weights")

    def rec(vs_, ws_):
        if len(vs_) == 1:
            return vs_[0]
        t0 = ws_[0]
        if t0 > 1.0 - BRANCH_EPS:
            return vs_[0]
        rest = [w / (1.0 - t0) for w in ws_[1:]]
        return edge_fill(contraction, vs_[0], rec(vs_[1:], rest), t0)

    return rec(vs, list(ws))


def linear_combination(vertices: Sequence, weights: Sequence[float]) -> np.ndarray:
    """Closed form the filler must reproduce over a linear contraction."""
    vs = [np.asarray(v, dtype=float) for v in vertices]
    acc = np.zeros_like(vs[0])
    for v, w in zip(vs, weights):
        acc = acc + float(w) * v
    return acc


# ---------------------------------------------------------------------------
# property batteries


@dataclass(frozen=True)
class CheckReport:
    name: str
    trials: int
    max_deviation: float
    tolerance: float
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "passed": bool(self.passed),
        }


def _dist(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))))


def random_barycentric(rng, count: int) -> list:
    raw = -np.log(rng.uniform(1e-12, 1.0, size=count))
    raw = raw / raw.sum()
    return [float(x) for x in raw]


def check_vertex_property(contraction: LoopContraction, make_vertex: Callable,
                          n: int, rng, trials: int = 50,
                          tol: float = 1e-12) -> CheckReport:
    """Weight 1 at slot i must return vertex i exactly."""
    dev = 0.0
    for _ in range(trials):
        vs = [make_vertex(rng) for _ in range(n + 1)]
        i = int(rng.integers(n + 1))
        e_i = [0.0] * (n + 1)
        e_i[i] = 1.0
        dev = max(dev, _dist(sigma_fill(contraction, vs, e_i), vs[i]))
    return CheckReport(f"vertex-property-n{n}", trials, dev, tol, dev <= tol)


def check_face_compatibility(contraction: LoopContraction, make_vertex: Callable,
                             n: int, rng, trials: int = 50,
                             tol: float = 1e-12) -> CheckReport:
    """Inserting zero weight at a slot matches dropping that vertex."""
    dev = 0.0
    for _ in range(trials):
        vs = [make_vertex(rng) for _ in range(n + 2)]
        ws = random_barycentric(rng, n + 1)
        i = int(rng.integers(n + 2))
        small = vs[:i] + vs[i + 1:]
        big_ws = ws[:i] + [0.0] + ws[i:]
        dev = max(dev, _dist(sigma_fill(contraction, small, ws),
                             sigma_fill(contraction, vs, big_ws)))
    return CheckReport(f"face-compatibility-n{n}", trials, dev, tol, dev <= tol)


def check_additivity(contraction: LoopContraction, make_vertex: Callable,
                     n: int, rng, trials: int = 50,
                     tol: float = 1e-12) -> CheckReport:
    """The filler is additive in the vertex family."""
    dev = 0.0
    for _ in range(trials):
        vs = [make_vertex(rng) for _ in range(n + 1)]
        us = [make_vertex(rng) for _ in range(n + 1)]
        ws = random_barycentric(rng, n + 1)
        lhs = sigma_fill(contraction, [np.asarray(v) + np.asarray(u) for v, u in zip(vs, us)], ws)
        rhs = np.asarray(sigma_fill(contraction, vs, ws)) + np.asarray(sigma_fill(contraction, us, ws))
        dev = max(dev, _dist(lhs, rhs))
    return CheckReport(f"additivity-n{n}", trials, dev, tol, dev <= tol)


def check_diagonal_constancy(contraction: LoopContraction, make_vertex: Callable,
                             n: int, rng, trials: int = 50,
                             tol: float = 1e-12) -> CheckReport:
    """Equal vertices give a constant filler."""
    dev = 0.0
    for _ in range(trials):
        v = make_vertex(rng)
        ws = random_barycentric(rng, n + 1)
        dev = max(dev, _dist(sigma_fill(contraction, [v] * (n + 1), ws), v))
    return CheckReport(f"diagonal-constancy-n{n}", trials, dev, tol, dev <= tol)


def check_linear_oracle(contraction: LoopContraction, dim: int, n: int, rng,
                        trials: int = 100, tol: float = 1e-12) -> CheckReport:
    """Against the closed-form weighted sum; only for the linear contraction."""
    dev = 0.0
    for _ in range(trials):
        vs = [rng.uniform(-1.0, 1.0, size=dim) for _ in range(n + 1)]
        ws = random_barycentric(rng, n + 1)
        dev = max(dev, _dist(sigma_fill(contraction, vs, ws), linear_combination(vs, ws)))
    return CheckReport(f"linear-oracle-n{n}", trials, dev, tol, dev <= tol)


def vector_battery(dim: int, n_max: int, seed: int, trials: int = 50,
                   tol: float = 1e-12) -> list:
    """All filler checks on real vectors up to the requested simplex size."""
    rng = np.random.default_rng(seed)
    contraction = linear_contraction()
    make_vertex = lambda r: r.uniform(-1.0, 1.0, size=dim)
    out = [check_contraction_axioms(contraction,
                                    [rng.uniform(-1.0, 1.0, size=dim) for _ in range(8)],
                                    rng, tol=tol)]
    for n in range(1, n_max + 1):
        out.append(check_vertex_property(contraction, make_vertex, n, rng, trials, tol))
        out.append(check_face_compatibility(contraction, make_vertex, n, rng, trials, tol))
        out.append(check_additivity(contraction, make_vertex, n, rng, trials, tol))
        out.append(check_diagonal_constancy(contraction, make_vertex, n, rng, trials, tol))
        out.append(check_linear_oracle(contraction, dim, n, rng, trials, tol))
    return out


# ---------------------------------------------------------------------------
# sampled paths


@dataclass(frozen=True)
class SampledPath:
    """Uniform samples of a based path; the first sample is the identity."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim not in (1, 2) or arr.shape[0] < 2:
            raise DomainError("a sampled path needs at least two samples")
        if float(np.max(np.abs(arr[0]))) > 1e-12:
            raise DomainError("a based path must start at the identity")
        object.__setattr__(self, "values", arr)

    @property
    def samples(self) -> int:
        return int(self.values.shape[0])

    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.samples)

    def at(self, t) -> np.ndarray:
        """Linear interpolation between samples."""
        t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
        grid = self.grid()
        if self.values.ndim == 1:
            return np.interp(t, grid, self.values)
        return np.stack([np.interp(t, grid, self.values[:, k])
                         for k in range(self.values.shape[1])], axis=-1)

    def add(self, other: "SampledPath") -> "SampledPath":
        if self.values.shape != other.values.shape:
            raise DomainError("paths have different sample shapes")
        return SampledPath(self.values + other.values)


def path_from_function(func: Callable, samples: int = DEFAULT_PATH_SAMPLES) -> SampledPath:
    grid = np.linspace(0.0, 1.0, samples)
    return SampledPath(np.asarray([func(t) for t in grid], dtype=float))


def path_group_contraction(path: SampledPath, s: float) -> SampledPath:
    """Freeze the tail of a based path: resample at (1 - s) times the grid.

    At s = 0 the path is unchanged, at s = 1 only the identity remains, so
    the sliding runs in the package's orientation.
    """
    if not (0.0 <= s <= 1.0):
        raise DomainError(f"contraction time must lie in [0, 1], got {s}")
    grid = path.grid()
    return SampledPath(path.at((1.0 - float(s)) * grid))


def path_loop_contraction(samples: int = DEFAULT_PATH_SAMPLES) -> LoopContraction:
    """The path-group contraction as a raw-array loop contraction."""
    grid = np.linspace(0.0, 1.0, samples)

    def apply(values: np.ndarray, s: float) -> np.ndarray:
        target = (1.0 - s) * grid
        if values.ndim == 1:
            return np.interp(target, grid, values)
        return np.stack([np.interp(target, grid, values[:, k])
                         for k in range(values.shape[1])], axis=-1)

    return LoopContraction(name="path-group", apply=apply)


def random_path_values(rng, samples: int = DEFAULT_PATH_SAMPLES) -> np.ndarray:
    """Smooth random based path: a few sine modes vanishing at time zero."""
    grid = np.linspace(0.0, 1.0, samples)
    coeffs = rng.uniform(-1.0, 1.0, size=3)
    out = np.zeros_like(grid)
    for k, c in enumerate(coeffs, start=1):
        out = out + c * np.sin(0.5 * np.pi * k * grid)
    return out


def path_battery(n_max: int, seed: int, samples: int = DEFAULT_PATH_SAMPLES,
                 trials: int = 20, tol: float = 1e-9) -> list:
    """Filler checks over the sampled path carrier."""
    rng = np.random.default_rng(seed)
    contraction = path_loop_contraction(samples)
    make_vertex = lambda r: random_path_values(r, samples)
    out = [check_contraction_axioms(contraction,
                                    [random_path_values(rng, samples) for _ in range(6)],
                                    rng, tol=tol)]
    for n in range(1, n_max + 1):
        out.append(check_vertex_property(contraction, make_vertex, n, rng, trials, tol))
        out.append(check_face_compatibility(contraction, make_vertex, n, rng, trials, tol))
        out.append(check_additivity(contraction, make_vertex, n, rng, trials, tol))
        out.append(check_diagonal_constancy(contraction, make_vertex, n, rng, trials, tol))
    return out
