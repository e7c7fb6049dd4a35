"""Shannon and von Neumann entropy calculus on finite tables.

All entropies are in bits (base-2 logarithms). Joint distributions are dense
numpy arrays with one axis per register; mutual information and its
multivariate generalization are computed directly from marginal entropies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

PROB_TOL = 1e-12
LN2 = math.log(2.0)


def _as_prob_array(p, tol: float = PROB_TOL) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.size == 0:
        raise ValueError("empty distribution")
    if np.any(arr < -tol):
        raise ValueError(f"negative probability: min entry {arr.min()!r}")
    total = float(arr.sum())
    if abs(total - 1.0) > max(tol, 1e-9 * arr.size):
        raise ValueError(f"distribution sums to {total!r}, not 1")
    return arr


def _plogp_bits(p: np.ndarray) -> np.ndarray:
    # -p*log2(p) with the 0*log(0) = 0 convention; tiny negatives from float
    # noise are treated as zero mass
    out = np.zeros_like(p)
    mask = p > 0.0
    out[mask] = -p[mask] * np.log2(p[mask])
    return out


def shannon_entropy(p) -> float:
    """H(p) = -sum p_i log2 p_i for a finite distribution."""
    arr = _as_prob_array(p)
    return float(_plogp_bits(arr.ravel()).sum())


def binary_entropy(x: float) -> float:
    """H(x) for a two-outcome distribution (x, 1-x); 0 at the endpoints."""
    if x < -PROB_TOL or x > 1.0 + PROB_TOL:
        raise ValueError(f"binary_entropy argument {x!r} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    if x == 0.0 or x == 1.0:
        return 0.0
    # log1p keeps the (1-x) term accurate near the endpoints
    return float(-x * np.log2(x) - (1.0 - x) * np.log1p(-x) / LN2)


@dataclass(frozen=True, eq=False)
class Distribution:
    """Finite probability distribution with an optional outcome labelling."""

    probs: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        arr = _as_prob_array(self.probs).ravel()
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)
        if self.labels and len(self.labels) != arr.size:
            raise ValueError("label count does not match outcome count")

    def entropy(self) -> float:
        return float(_plogp_bits(self.probs).sum())


@dataclass(frozen=True, eq=False)
class JointTable:
    """Dense joint distribution over named registers (one array axis each)."""

    register_names: tuple[str, ...]
    probs: np.ndarray

    def __post_init__(self):
        arr = _as_prob_array(self.probs)
        if arr.ndim != len(self.register_names):
            raise ValueError("register count does not match table rank")
        if len(set(self.register_names)) != len(self.register_names):
            raise ValueError("duplicate register names")
        arr = np.array(arr, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)
        object.__setattr__(self, "register_names", tuple(self.register_names))

    def _axes(self, names: Sequence[str]) -> tuple[int, ...]:
        try:
            return tuple(self.register_names.index(n) for n in names)
        except ValueError as exc:
            raise KeyError(f"unknown register in {names!r}") from exc

    def marginal(self, names: Sequence[str]) -> "JointTable":
        keep = self._axes(names)
        if len(set(keep)) != len(keep):
            raise ValueError("repeated register in marginal request")
        drop = tuple(i for i in range(self.probs.ndim) if i not in keep)
        marg = self.probs.sum(axis=drop) if drop else self.probs
        # axis order follows the requested name order
        order = tuple(sorted(range(len(keep)), key=lambda i: keep[i]))
        inv = tuple(order.index(i) for i in range(len(keep)))
        return JointTable(tuple(names), np.transpose(marg, inv))

    def entropy(self, names: Sequence[str] | None = None) -> float:
        table = self if names is None else self.marginal(names)
        return float(_plogp_bits(table.probs.ravel()).sum())


def mutual_information(table: JointTable, a: str, b: str) -> float:
    """I(A:B) = H(A) + H(B) - H(AB), marginalizing any other registers."""
    return table.entropy([a]) + table.entropy([b]) - table.entropy([a, b])


def conditional_mutual_information(table: JointTable, a: str, b: str, given: Sequence[str]) -> float:
    """I(A:B|C) = H(AC) + H(BC) - H(ABC) - H(C)."""
    c = list(given)
    return (
        table.entropy([a, *c])
        + table.entropy([b, *c])
        - table.entropy([a, b, *c])
        - (table.entropy(c) if c else 0.0)
    )


def multivariate_mutual_information(table: JointTable, names: Sequence[str] | None = None) -> float:
    """Total correlation sum_i H(A_i) - H(A_1...A_n); 0 for a single register."""
    names = tuple(names) if names is not None else table.register_names
    if len(names) <= 1:
        return 0.0
    return sum(table.entropy([n]) for n in names) - table.entropy(names)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian unit-trace positive-semidefinite matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density operator must be square")
        if np.max(np.abs(m - m.conj().T)) > 1e-9:
            raise ValueError("density operator is not Hermitian")
        if abs(np.trace(m).real - 1.0) > 1e-9:
            raise ValueError(f"trace is {np.trace(m).real!r}, not 1")
        if np.linalg.eigvalsh(m).min() < -1e-9:
            raise ValueError("density operator has a negative eigenvalue")
        m = np.array(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def von_neumann_entropy(rho) -> float:
    """S(rho) = -Tr rho log2 rho via the eigenvalue spectrum."""
    matrix = rho.matrix if isinstance(rho, DensityOperator) else DensityOperator(rho).matrix
    eigs = np.linalg.eigvalsh(matrix)
    eigs = np.clip(eigs, 0.0, None)
    return float(_plogp_bits(eigs).sum())


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of stress-testing one entropy axiom on random instances."""

    axiom: str
    entropy_kind: str
    trials: int
    max_violation: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "axiom": self.axiom,
            "entropy_kind": self.entropy_kind,
            "trials": self.trials,
            "max_violation": self.max_violation,
            "passed": self.passed,
        }
