"""Seeded random instances: joint tables, density matrices, ensembles."""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .catalog import CatalogEntry
from .engine import CorrelatedEnsemble, EnsembleEntry, build_ensemble
from .gpt import NormConstraint, Polytope, Quantum, RestrictedClassical, State, density_to_coords


def random_joint_table(rng: np.random.Generator, shape: Sequence[int]) -> np.ndarray:
    flat = rng.dirichlet(np.ones(int(np.prod(shape))))
    return flat.reshape(tuple(shape))


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    # fix phases so the distribution is Haar rather than QR-convention-biased
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_density_matrix(rng: np.random.Generator, dim: int) -> np.ndarray:
    eigs = rng.dirichlet(np.ones(dim))
    u = haar_unitary(rng, dim)
    return (u * eigs) @ u.conj().T


def random_projective_measurement(rng: np.random.Generator, dim: int) -> list[np.ndarray]:
    u = haar_unitary(rng, dim)
    return [np.outer(u[:, i], u[:, i].conj()) for i in range(dim)]


def random_state(entry: CatalogEntry, rng: np.random.Generator) -> State:
    v = entry.theory.variant
    tid = entry.theory.theory_id
    if isinstance(v, Polytope):
        w = rng.dirichlet(np.ones(len(v.vertices)))
        coords = w @ np.array([s.coords for s in v.vertices])
        return State(coords, tid)
    if isinstance(v, RestrictedClassical):
        return State(rng.dirichlet(np.ones(v.internal_states)), tid)
    if isinstance(v, NormConstraint):
        direction = rng.normal(size=v.k)
        if math.isinf(v.p):
            norm = np.abs(direction).max()
        else:
            norm = float((np.abs(direction) ** v.p).sum()) ** (1.0 / v.p)
        radius = rng.uniform() ** (1.0 / v.k)
        return State(np.append(direction / norm * radius, 1.0), tid)
    if isinstance(v, Quantum):
        return State(density_to_coords(random_density_matrix(rng, v.hilbert_dim)), tid)
    raise TypeError(f"unsupported variant {v!r}")  # pragma: no cover


def random_ensemble(
    entry: CatalogEntry,
    rng: np.random.Generator,
    n_registers: int = 2,
    alphabet: int = 2,
) -> CorrelatedEnsemble:
    """Random correlated ensemble with one entry per register combination."""
    combos = [
        tuple(int(x) for x in np.unravel_index(i, (alphabet,) * n_registers))
        for i in range(alphabet**n_registers)
    ]
    probs = rng.dirichlet(np.ones(len(combos)))
    entries = [
        EnsembleEntry(float(p), random_state(entry, rng), combo)
        for p, combo in zip(probs, combos)
    ]
    return build_ensemble(entry.theory, entries, (alphabet,) * n_registers)
