"""Real Z-eigenpairs of symmetric tensors: S v^{m-1} = lambda v with |v| = 1.

Three routes are provided and kept deliberately independent so they can
cross-check each other:

* tensor power iteration (normalized contraction map) with period-2 cycle
  detection, which only finds attracting pairs;
* Newton refinement of the square KKT system F(v, lambda) = 0, which polishes
  any nearby pair regardless of its stability;
* an exhaustive angle scan for n = 2, where the tangential residual
  g(theta) = v_perp . S v(theta)^{m-1} is a trigonometric polynomial whose
  sign changes on [0, pi) locate every eigenvector direction.

Sign convention: eigenpairs come in sign classes ((lambda, v) with
(-1)^m lambda, -v). The canonical representative has lambda >= 0 for odd
order; for even order the entries of v sum to a positive value (ties broken
by the first nonzero component).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from statistics import NormalDist
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .tensors import SymmetricTensor, apply_m, apply_m1, apply_m2

ACCEPT_TOL = 1e-10
ZERO_LAMBDA_TOL = 1e-10
DEGENERATE_CONTRACTION_TOL = 1e-12
UNIT_NORM_TOL = 1e-12

MIN_SCAN_GRID = 360
SCAN_THETA_RESOLUTION = 1e-14
ISOTROPY_REL_TOL = 1e-12

# A true period-2 orbit keeps its two points separated by a fixed distance.
# A negative Jacobian mode at an attracting fixed point also alternates, but
# both alternation points collapse onto the limit, so requiring a minimum
# separation tells the two apart.
CYCLE_SEPARATION = 1e-6

SOURCE_POWER = "power_method"
SOURCE_NEWTON = "newton"
SOURCE_SCAN = "angle_scan"
SOURCE_CLOSED = "closed_form"

STATUS_CONVERGED = "converged"
STATUS_CYCLING = "cycling"
STATUS_MAX_ITER = "max_iter"


class DegeneratePointError(ValueError):
    """The power map is undefined: S v^{m-1} vanished at v (lambda = 0 direction)."""


class RefinementError(RuntimeError):
    """Newton refinement failed; ``residual`` holds the best KKT residual seen."""

    def __init__(self, message: str, residual: Optional[float] = None):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True, eq=False)
class Eigenpair:
    """A canonicalized Z-eigenpair with its KKT residual and provenance."""

    lam: float
    v: np.ndarray
    kkt_residual: float
    iterations: int = 0
    source: str = SOURCE_CLOSED
    zero_lambda: bool = False

    def __post_init__(self):
        v = np.array(self.v, dtype=float, copy=True)
        if v.ndim != 1:
            raise ValueError("eigenvector must be 1-d")
        if abs(np.linalg.norm(v) - 1.0) > UNIT_NORM_TOL:
            raise ValueError("eigenvector must have unit norm")
        v.setflags(write=False)
        object.__setattr__(self, "v", v)


def canonical_sign(lam: float, v: np.ndarray, order: int) -> Tuple[float, np.ndarray]:
    """Canonical representative of the eigenpair sign class (see module doc)."""
    if order % 2:
        if lam < 0.0:
            return -lam, -v
        if lam > 0.0:
            return lam, v
        # lambda exactly zero: fall through to the even-order vector rule
    s = float(np.sum(v))
    if s > 0.0:
        return lam, v
    if s < 0.0:
        return lam, -v
    for x in v:
        if x != 0.0:
            return (lam, v) if x > 0.0 else (lam, -v)
    return lam, v


def make_eigenpair(tensor: SymmetricTensor, v, iterations: int = 0,
                   source: str = SOURCE_CLOSED) -> Eigenpair:
    """Normalize v, evaluate lambda = S v^m, canonicalize, record the residual."""
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("cannot build an eigenpair from the zero vector")
    v = v / norm
    lam = apply_m(tensor, v)
    lam, v = canonical_sign(lam, v, tensor.order)
    g = apply_m1(tensor, v)
    residual = float(np.linalg.norm(g - lam * v))
    return Eigenpair(
        lam=float(lam),
        v=v,
        kkt_residual=residual,
        iterations=iterations,
        source=source,
        zero_lambda=bool(np.linalg.norm(g) <= ZERO_LAMBDA_TOL),
    )


def angle_between(a: np.ndarray, b: np.ndarray) -> float:
    """Angle between unit vectors. Near 0 and pi the arccos of the dot
    product cannot resolve below ~1.5e-8, so use the chord length instead."""
    if float(np.dot(a, b)) >= 0.0:
        return 2.0 * math.asin(min(1.0, 0.5 * float(np.linalg.norm(a - b))))
    return math.pi - 2.0 * math.asin(min(1.0, 0.5 * float(np.linalg.norm(a + b))))


def power_step(tensor: SymmetricTensor, v) -> np.ndarray:
    """One step of the normalized power map v -> S v^{m-1} / |S v^{m-1}|."""
    v = np.asarray(v, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > UNIT_NORM_TOL:
        raise ValueError("power step expects a unit vector")
    g = apply_m1(tensor, v)
    norm = np.linalg.norm(g)
    if norm <= DEGENERATE_CONTRACTION_TOL:
        raise DegeneratePointError(
            "S v^{m-1} vanished; v is a lambda = 0 direction or near one"
        )
    return g / norm


@dataclass(eq=False)
class PowerResult:
    """Power iteration outcome; ``pair`` is set only when status is converged."""

    status: str
    pair: Optional[Eigenpair]
    iterations: int
    trajectory_tail: List[np.ndarray]


def power_method(tensor: SymmetricTensor, v0, tol: float = 1e-12,
                 max_iter: int = 5000) -> PowerResult:
    """Iterate the power map until the displacement |v_{k+1} - v_k| <= tol.

    A fixed point of the map is an eigenvector with lambda > 0 (for the
    orientation the map settles into). Period-2 oscillation between two
    separated points, the signature of a negative eigenvalue under an even
    order or of boundary dynamics, is reported as cycling rather than ground
    out to max_iter. Oscillation with a collapsing separation is not a
    cycle: a contraction with a negative Jacobian eigenvalue alternates on
    its way in, and that trajectory is allowed to run to convergence.
    """
    if tol <= 0:
        raise ValueError("power method tolerance must be positive")
    if max_iter < 1:
        raise ValueError("power method needs max_iter >= 1")
    cur = np.asarray(v0, dtype=float)
    norm = np.linalg.norm(cur)
    if norm == 0.0:
        raise ValueError("starting vector must be nonzero")
    cur = cur / norm
    tail: deque = deque([cur], maxlen=4)
    prev: Optional[np.ndarray] = None
    for k in range(max_iter):
        nxt = power_step(tensor, cur)
        tail.append(nxt)
        if np.linalg.norm(nxt - cur) <= tol:
            pair = make_eigenpair(tensor, nxt, iterations=k, source=SOURCE_POWER)
            return PowerResult(STATUS_CONVERGED, pair, k, list(tail))
        if prev is not None and np.linalg.norm(nxt - prev) <= tol \
                and np.linalg.norm(nxt - cur) > CYCLE_SEPARATION:
            return PowerResult(STATUS_CYCLING, None, k, list(tail))
        prev = cur
        cur = nxt
    return PowerResult(STATUS_MAX_ITER, None, max_iter, list(tail))


def newton_refine(tensor: SymmetricTensor, v0, tol: float = ACCEPT_TOL,
                  max_iter: int = 50) -> Eigenpair:
    """Newton's method on F(v, lambda) = (S v^{m-1} - lambda v, v.v - 1).

    The linearization is the bordered system
        [ (m-1) S v^{m-2} - lambda I   -v ]
        [ 2 v^T                         0 ].
    Convergence is judged on the KKT residual of the normalized iterate, so a
    start that already satisfies it is returned after zero steps.
    """
    if tol <= 0:
        raise ValueError("refinement tolerance must be positive")
    n, m = tensor.dim, tensor.order
    v = np.asarray(v0, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("starting vector must be nonzero")
    v = v / norm
    lam = apply_m(tensor, v)
    best: Optional[float] = None
    for k in range(max_iter + 1):
        vn = v / np.linalg.norm(v)
        lam_n = apply_m(tensor, vn)
        residual = float(np.linalg.norm(apply_m1(tensor, vn) - lam_n * vn))
        if residual <= tol:
            return make_eigenpair(tensor, vn, iterations=k, source=SOURCE_NEWTON)
        best = residual if best is None else min(best, residual)
        if k == max_iter:
            break
        bordered = np.zeros((n + 1, n + 1))
        bordered[:n, :n] = (m - 1) * apply_m2(tensor, v) - lam * np.eye(n)
        bordered[:n, n] = -v
        bordered[n, :n] = 2.0 * v
        rhs = np.empty(n + 1)
        rhs[:n] = apply_m1(tensor, v) - lam * v
        rhs[n] = float(v @ v) - 1.0
        try:
            step = np.linalg.solve(bordered, -rhs)
        except np.linalg.LinAlgError as exc:
            raise RefinementError(
                f"singular linearization after {k} steps", residual=best
            ) from exc
        if not np.all(np.isfinite(step)):
            raise RefinementError(
                f"non-finite Newton step after {k} steps", residual=best
            )
        v = v + step[:n]
        lam = lam + float(step[n])
        if np.linalg.norm(v) == 0.0:
            raise RefinementError("iterate collapsed to zero", residual=best)
    raise RefinementError(
        f"no convergence within {max_iter} Newton steps", residual=best
    )


def dedup(pairs: Sequence[Eigenpair], angle_tol: float = 1e-8,
          lambda_tol: float = 1e-8) -> List[Eigenpair]:
    """Merge canonicalized duplicates; keep the representative with the
    smallest KKT residual. Output is sorted by descending lambda, then
    lexicographically by eigenvector entries."""
    if angle_tol <= 0 or lambda_tol <= 0:
        raise ValueError("dedup tolerances must be positive")
    ordered = sorted(
        pairs, key=lambda p: (p.kkt_residual, -p.lam, tuple(p.v))
    )
    reps: List[Eigenpair] = []
    for p in ordered:
        if not any(
            abs(p.lam - r.lam) <= lambda_tol
            and angle_between(p.v, r.v) <= angle_tol
            for r in reps
        ):
            reps.append(p)
    reps.sort(key=lambda p: (-p.lam, tuple(p.v)))
    return reps


@dataclass(eq=False)
class Enumeration2D:
    """Angle-scan result. ``isotropic`` marks the degenerate case where the
    restriction of S to the unit circle is constant: every direction is then
    an eigenvector and ``pairs`` holds representatives only."""

    pairs: List[Eigenpair]
    isotropic: bool
    grid: int


def _tangential_residual(tensor: SymmetricTensor, theta: float) -> Tuple[float, float]:
    v = np.array([math.cos(theta), math.sin(theta)])
    g = apply_m1(tensor, v)
    return float(-v[1] * g[0] + v[0] * g[1]), float(np.linalg.norm(g))


def enumerate_2d(tensor: SymmetricTensor, grid: int = 720,
                 angle_tol: float = 1e-8,
                 lambda_tol: float = 1e-8) -> Enumeration2D:
    """Exhaustive eigenpair enumeration for n = 2 by scanning the half circle.

    g(theta) = v_perp . S v(theta)^{m-1} is a trig polynomial of degree m, so
    a grid finer than max(grid, 8 m) brackets every simple root; each bracket
    is bisected down to an angular width of 1e-14. Roots at theta and
    theta + pi are the same sign class and collapse under canonicalization.
    """
    if tensor.dim != 2:
        raise ValueError("angle-scan enumeration requires a 2-dimensional tensor")
    if grid < MIN_SCAN_GRID:
        raise ValueError(f"grid must be at least {MIN_SCAN_GRID}")
    cells = max(int(grid), 8 * tensor.order)
    thetas = np.linspace(0.0, math.pi, cells + 1)
    gvals = np.empty(cells + 1)
    scale = 0.0
    for i, t in enumerate(thetas):
        gvals[i], gnorm = _tangential_residual(tensor, t)
        scale = max(scale, gnorm)
    if scale <= 1e-13:
        raise ValueError(
            "S v^{m-1} vanishes identically on the circle: zero tensor"
        )
    if np.max(np.abs(gvals)) <= ISOTROPY_REL_TOL * max(1.0, scale):
        # S restricted to the circle is constant; return spread-out witnesses.
        reps = [
            make_eigenpair(tensor,
                           np.array([math.cos(t), math.sin(t)]),
                           source=SOURCE_SCAN)
            for t in (0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4)
        ]
        return Enumeration2D(dedup(reps, angle_tol, lambda_tol), True, cells)
    # A residual at the noise floor marks a root sitting on a grid point
    # (frame vectors often do); relying on a sign change there would make the
    # detection depend on the sign of roundoff noise.
    zero_floor = 1e-13 * float(np.max(np.abs(gvals)))
    roots: List[float] = [
        float(thetas[i]) for i in range(cells)  # theta = pi repeats theta = 0
        if abs(gvals[i]) <= zero_floor
    ]
    for i in range(cells):
        a, b = float(thetas[i]), float(thetas[i + 1])
        ga, gb = float(gvals[i]), float(gvals[i + 1])
        if abs(ga) <= zero_floor or abs(gb) <= zero_floor:
            continue  # endpoint roots are already collected
        if ga * gb > 0.0:
            continue
        while b - a > SCAN_THETA_RESOLUTION:
            mid = 0.5 * (a + b)
            gm, _ = _tangential_residual(tensor, mid)
            if gm == 0.0:
                a = b = mid
                break
            if (ga > 0.0) != (gm > 0.0):
                b = mid
            else:
                a, ga = mid, gm
        roots.append(0.5 * (a + b))
    pairs = [
        make_eigenpair(tensor, np.array([math.cos(t), math.sin(t)]),
                       source=SOURCE_SCAN)
        for t in roots
    ]
    return Enumeration2D(dedup(pairs, angle_tol, lambda_tol), False, cells)


@dataclass(eq=False)
class SolveSummary:
    """Multi-start outcome. ``basin_counts[i]`` tallies the starts whose power
    iteration converged to ``pairs[i]``; pairs recovered only by Newton rescue
    from a non-converged trajectory carry a count of zero. ``failures`` counts
    starts whose power iteration did not converge (rescued or not)."""

    pairs: List[Eigenpair]
    basin_counts: List[int]
    failures: int
    starts: int
    seed: int


def multi_start(tensor: SymmetricTensor, starts: int, seed: int,
                tol: float = 1e-12, max_iter: int = 5000,
                newton_tol: float = ACCEPT_TOL,
                angle_tol: float = 1e-8,
                lambda_tol: float = 1e-8) -> SolveSummary:
    """Power iteration from ``starts`` random unit vectors, Newton-polished.

    Start i draws from the substream seeded by (seed, i), so results do not
    depend on execution order and identical arguments reproduce the identical
    summary. Non-converged trajectories are still handed to Newton, which
    often recovers repelling pairs the power map cannot settle on.
    """
    if starts < 1:
        raise ValueError("multi_start needs at least one start")
    converged: List[Eigenpair] = []
    rescued: List[Eigenpair] = []
    failures = 0
    for i in range(starts):
        rng = np.random.default_rng([seed, i])
        d = rng.standard_normal(tensor.dim)
        while np.linalg.norm(d) < 1e-12:
            d = rng.standard_normal(tensor.dim)
        d /= np.linalg.norm(d)
        try:
            run = power_method(tensor, d, tol=tol, max_iter=max_iter)
        except DegeneratePointError:
            failures += 1
            continue
        if run.status == STATUS_CONVERGED:
            try:
                converged.append(
                    newton_refine(tensor, run.pair.v, tol=newton_tol)
                )
            except RefinementError:
                failures += 1
        else:
            failures += 1
            try:
                rescued.append(
                    newton_refine(tensor, run.trajectory_tail[-1], tol=newton_tol)
                )
            except RefinementError:
                pass
    pairs = dedup(converged + rescued, angle_tol, lambda_tol)
    counts = [0] * len(pairs)
    for p in converged:
        for j, r in enumerate(pairs):
            if (abs(p.lam - r.lam) <= lambda_tol
                    and angle_between(p.v, r.v) <= angle_tol):
                counts[j] += 1
                break
    return SolveSummary(pairs, counts, failures, starts, seed)


def _generalized_golden(dim: int) -> float:
    # positive root of x^{dim+1} = x + 1, the usual generator for a
    # low-discrepancy Kronecker lattice in dim coordinates
    x = 1.0
    for _ in range(64):
        x = (1.0 + x) ** (1.0 / (dim + 1))
    return x


def sphere_grid(dim: int, count: int) -> List[np.ndarray]:
    """Deterministic quasi-uniform unit vectors: equal angles on the circle,
    the golden-angle (Fibonacci) spiral on S^2, and for higher dimensions a
    Kronecker lattice pushed through the normal quantile and normalized."""
    if dim < 2:
        raise ValueError("sphere grid needs dim >= 2")
    if count < 1:
        raise ValueError("sphere grid needs count >= 1")
    if dim == 2:
        return [
            np.array([math.cos(math.pi * k / count), math.sin(math.pi * k / count)])
            for k in range(count)
        ]
    if dim == 3:
        golden_angle = math.pi * (3.0 - math.sqrt(5.0))
        points = []
        for k in range(count):
            z = 1.0 - (2.0 * k + 1.0) / count
            r = math.sqrt(max(0.0, 1.0 - z * z))
            points.append(
                np.array([r * math.cos(golden_angle * k),
                          r * math.sin(golden_angle * k), z])
            )
        return points
    phi = _generalized_golden(dim)
    alphas = np.array([(1.0 / phi) ** (i + 1) % 1.0 for i in range(dim)])
    quantile = NormalDist().inv_cdf
    points = []
    for k in range(count):
        u = np.clip((0.5 + (k + 1) * alphas) % 1.0, 1e-12, 1.0 - 1e-12)
        x = np.array([quantile(ui) for ui in u])
        norm = np.linalg.norm(x)
        if norm > 1e-12:
            points.append(x / norm)
    return points


def pair_to_payload(pair: Eigenpair) -> dict:
    return {
        "lambda": float(pair.lam),
        "v": [float(x) for x in pair.v],
        "residual": float(pair.kkt_residual),
        "source": pair.source,
    }


def pair_from_payload(payload: dict) -> Eigenpair:
    v = np.asarray(payload["v"], dtype=float)
    g_zero = bool(payload.get("zero_lambda", abs(payload["lambda"]) <= ZERO_LAMBDA_TOL))
    return Eigenpair(
        lam=float(payload["lambda"]),
        v=v,
        kkt_residual=float(payload["residual"]),
        iterations=int(payload.get("iterations", 0)),
        source=str(payload.get("source", SOURCE_CLOSED)),
        zero_lambda=g_zero,
    )


def pairs_to_payload(tensor: SymmetricTensor, pairs: Sequence[Eigenpair],
                     seed: Optional[int]) -> dict:
    from .tensors import tensor_to_payload

    return {
        "tensor": tensor_to_payload(tensor),
        "pairs": [pair_to_payload(p) for p in pairs],
        "seed": seed,
    }


def pairs_from_payload(payload: dict):
    """Inverse of pairs_to_payload: (tensor, eigenpairs, seed)."""
    from .tensors import tensor_from_payload

    tensor = tensor_from_payload(payload["tensor"])
    pairs = [pair_from_payload(p) for p in payload["pairs"]]
    return tensor, pairs, payload.get("seed")
