"""Real symmetric tensors, stored dense or as a weighted sum of outer powers.

The three contractions against a vector v are the workhorses for everything
downstream: S v^m (scalar), S v^{m-1} (vector) and S v^{m-2} (matrix) feed
eigenpair residuals, the power map, Hessians and power-map Jacobians. The
factored form keeps contractions at O(r * n) regardless of order, so dense
storage (n^m entries, capped) is only ever needed on request.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import jsonio

DEFAULT_DENSE_CAP = 10_000_000
CAP_ENV_VAR = "SIMPLEX_SPECTRA_CAP"
UNIT_NORM_TOL = 1e-12


class CapacityError(Exception):
    """A dense tensor would exceed the configured entry budget."""


def dense_capacity() -> int:
    """Current dense-entry cap; the SIMPLEX_SPECTRA_CAP env var overrides it."""
    raw = os.environ.get(CAP_ENV_VAR)
    return int(raw) if raw else DEFAULT_DENSE_CAP


def _check_capacity(dim: int, order: int, cap: Optional[int]) -> None:
    limit = dense_capacity() if cap is None else int(cap)
    if dim ** order > limit:
        raise CapacityError(
            f"dense tensor with {dim}^{order} entries exceeds the cap of {limit}"
        )


def _as_unit_vector(v, what: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError(f"{what} must be a nonempty 1-d vector, got shape {v.shape}")
    if abs(np.linalg.norm(v) - 1.0) > UNIT_NORM_TOL:
        raise ValueError(f"{what} must have unit norm (within {UNIT_NORM_TOL})")
    return v


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SymmetricTensor:
    """Order-m symmetric tensor over R^n.

    Exactly one storage form is populated: ``entries`` (dense, shape
    ``(dim,) * order``) or the pair ``weights``/``vectors`` (factored,
    sum of weights[i] * vectors[:, i]^{outer order}). Instances are
    immutable; all arrays are read-only copies.
    """

    order: int
    dim: int
    entries: Optional[np.ndarray] = None
    weights: Optional[np.ndarray] = None
    vectors: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("tensor order must be at least 2")
        if self.dim < 1:
            raise ValueError("tensor dimension must be at least 1")
        dense = self.entries is not None
        factored = self.weights is not None or self.vectors is not None
        if dense == factored:
            raise ValueError("provide dense entries or factored terms, not both")
        if dense:
            arr = _readonly(self.entries)
            if arr.shape != (self.dim,) * self.order:
                raise ValueError(
                    f"dense entries must have shape {(self.dim,) * self.order}, "
                    f"got {arr.shape}"
                )
            object.__setattr__(self, "entries", arr)
        else:
            if self.weights is None or self.vectors is None:
                raise ValueError("factored form needs both weights and vectors")
            w = _readonly(self.weights)
            vs = _readonly(self.vectors)
            if w.ndim != 1 or w.size == 0:
                raise ValueError("factored weights must be a nonempty 1-d array")
            if vs.shape != (self.dim, w.size):
                raise ValueError(
                    f"factored vectors must have shape ({self.dim}, {w.size}), "
                    f"got {vs.shape}"
                )
            norms = np.linalg.norm(vs, axis=0)
            if np.max(np.abs(norms - 1.0)) > UNIT_NORM_TOL:
                raise ValueError("every factored vector must have unit norm")
            object.__setattr__(self, "weights", w)
            object.__setattr__(self, "vectors", vs)

    @property
    def is_dense(self) -> bool:
        return self.entries is not None

    @property
    def is_factored(self) -> bool:
        return self.entries is None

    @property
    def repr_kind(self) -> str:
        return "dense" if self.is_dense else "factored"

    @property
    def rank_one_terms(self) -> List[Tuple[float, np.ndarray]]:
        """Factored terms as (weight, vector) pairs; empty for dense storage."""
        if self.is_dense:
            return []
        return [
            (float(c), self.vectors[:, i])
            for i, c in enumerate(self.weights)
        ]


def outer_power(v, order: int, cap: Optional[int] = None) -> SymmetricTensor:
    """Dense m-th outer power v (x) v (x) ... (x) v of a unit vector."""
    v = _as_unit_vector(v, "outer-power vector")
    if order < 2:
        raise ValueError("outer power needs order >= 2")
    _check_capacity(v.size, order, cap)
    entries = reduce(np.multiply.outer, [v] * order)
    return SymmetricTensor(order=order, dim=v.size, entries=entries)


def from_rank_one_sum(terms: Iterable[Tuple[float, Sequence[float]]],
                      order: int) -> SymmetricTensor:
    """Factored tensor sum_i c_i w_i^{(x) order} from (weight, unit vector) terms."""
    if order < 2:
        raise ValueError("rank-one sum needs order >= 2")
    terms = list(terms)
    if not terms:
        raise ValueError("rank-one term list is empty")
    weights = []
    vectors = []
    for c, w in terms:
        vectors.append(_as_unit_vector(w, "rank-one vector"))
        weights.append(float(c))
    dims = {v.size for v in vectors}
    if len(dims) != 1:
        raise ValueError(f"rank-one vectors disagree on dimension: {sorted(dims)}")
    return SymmetricTensor(
        order=order,
        dim=dims.pop(),
        weights=np.array(weights),
        vectors=np.column_stack(vectors),
    )


def _sampled_symmetry_check(entries: np.ndarray, samples: int = 48,
                            max_perms: int = 24) -> None:
    # Full verification is n^m * m! comparisons; sampling keeps load cheap
    # while still catching any honest asymmetry.
    order = entries.ndim
    dim = entries.shape[0]
    rng = np.random.default_rng(12345)
    for _ in range(samples):
        idx = tuple(int(i) for i in rng.integers(0, dim, size=order))
        ref = entries[idx]
        if order <= 4:
            perms = set(itertools.permutations(idx))
        else:
            perms = {tuple(rng.permutation(idx)) for _ in range(max_perms)}
        for p in perms:
            if entries[tuple(int(i) for i in p)] != ref:
                raise ValueError(
                    f"dense entries are not permutation symmetric at index {idx}"
                )


def from_dense(entries, validate: bool = True,
               cap: Optional[int] = None) -> SymmetricTensor:
    """Dense tensor from an ndarray-like; symmetry is spot-checked by sampling."""
    arr = np.asarray(entries, dtype=float)
    if arr.ndim < 2:
        raise ValueError("dense tensor needs at least 2 axes")
    if len(set(arr.shape)) != 1:
        raise ValueError(f"dense tensor axes must agree, got shape {arr.shape}")
    _check_capacity(arr.shape[0], arr.ndim, cap)
    if validate:
        _sampled_symmetry_check(arr)
    return SymmetricTensor(order=arr.ndim, dim=arr.shape[0], entries=arr)


def densify(tensor: SymmetricTensor, cap: Optional[int] = None) -> SymmetricTensor:
    """Dense copy of a factored tensor; dense input is returned unchanged."""
    if tensor.is_dense:
        return tensor
    _check_capacity(tensor.dim, tensor.order, cap)
    total = np.zeros((tensor.dim,) * tensor.order)
    for c, w in tensor.rank_one_terms:
        total += c * reduce(np.multiply.outer, [w] * tensor.order)
    return SymmetricTensor(order=tensor.order, dim=tensor.dim, entries=total)


def _check_operand(tensor: SymmetricTensor, v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (tensor.dim,):
        raise ValueError(
            f"vector has shape {v.shape}, tensor expects ({tensor.dim},)"
        )
    return v


def _dense_contract(entries: np.ndarray, v: np.ndarray, times: int):
    out = entries
    for _ in range(times):
        out = out @ v
    return out


def apply_m(tensor: SymmetricTensor, v) -> float:
    """Full contraction S v^m (a scalar)."""
    v = _check_operand(tensor, v)
    if tensor.is_factored:
        dots = tensor.vectors.T @ v
        return float(np.dot(tensor.weights, dots ** tensor.order))
    return float(_dense_contract(tensor.entries, v, tensor.order))


def apply_m1(tensor: SymmetricTensor, v) -> np.ndarray:
    """Vector contraction S v^{m-1}."""
    v = _check_operand(tensor, v)
    if tensor.is_factored:
        dots = tensor.vectors.T @ v
        return tensor.vectors @ (tensor.weights * dots ** (tensor.order - 1))
    return np.asarray(_dense_contract(tensor.entries, v, tensor.order - 1))


def apply_m2(tensor: SymmetricTensor, v) -> np.ndarray:
    """Matrix contraction S v^{m-2}; the result is symmetrized against roundoff."""
    v = _check_operand(tensor, v)
    if tensor.is_factored:
        coef = tensor.weights * (tensor.vectors.T @ v) ** (tensor.order - 2)
        out = (tensor.vectors * coef) @ tensor.vectors.T
    else:
        out = np.asarray(_dense_contract(tensor.entries, v, tensor.order - 2))
    return 0.5 * (out + out.T)


def tensor_to_payload(tensor: SymmetricTensor) -> dict:
    if tensor.is_dense:
        return {
            "order": tensor.order,
            "dim": tensor.dim,
            "repr": "dense",
            "entries": [float(x) for x in tensor.entries.ravel(order="C")],
        }
    return {
        "order": tensor.order,
        "dim": tensor.dim,
        "repr": "factored",
        "terms": [
            {"weight": float(c), "vector": [float(x) for x in w]}
            for c, w in tensor.rank_one_terms
        ],
    }


def tensor_from_payload(payload: dict) -> SymmetricTensor:
    order = int(payload["order"])
    dim = int(payload["dim"])
    kind = payload["repr"]
    if kind == "dense":
        flat = np.asarray(payload["entries"], dtype=float)
        if flat.size != dim ** order:
            raise ValueError(
                f"dense payload has {flat.size} entries, expected {dim ** order}"
            )
        return from_dense(flat.reshape((dim,) * order))
    if kind == "factored":
        terms = [(t["weight"], t["vector"]) for t in payload["terms"]]
        tensor = from_rank_one_sum(terms, order)
        if tensor.dim != dim:
            raise ValueError(
                f"factored payload vectors have dim {tensor.dim}, header says {dim}"
            )
        return tensor
    raise ValueError(f"unknown tensor repr {kind!r}")


def save_tensor(tensor: SymmetricTensor, path) -> None:
    jsonio.dump(tensor_to_payload(tensor), path)


def load_tensor(path) -> SymmetricTensor:
    return tensor_from_payload(jsonio.load(path))
