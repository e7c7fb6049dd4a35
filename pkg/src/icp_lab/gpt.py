"""Core state/effect/measurement machinery for generalized probabilistic theories.

States and effects are real coordinate vectors and an effect applied to a
state is their Euclidean inner product. Each theory variant embeds its states
so that this single convention covers all of them:

* ``Polytope`` -- explicit extreme states and extreme effects (classical
  simplices, polygon models). Catalog constructions carry a trailing
  normalization coordinate fixed to 1, with the unit effect reading it off.
* ``NormConstraint`` -- states hold k fiducial mean values followed by a
  normalization coordinate, ``(s_1, ..., s_k, 1)``, constrained by
  ``sum_i |s_i|^p <= 1``. The fiducial effects ``(1 +/- s_i)/2`` are then
  linear in the embedded vector.
* ``RestrictedClassical`` -- probability vectors over an internal simplex
  whose measurements are restricted to a fixed list of coarse readouts.
* ``Quantum`` -- density matrices flattened to concatenated real and
  imaginary parts, so the dot product of effect and state coordinates equals
  ``Tr(E rho)`` exactly for Hermitian operators.

Extreme states and effects of polytope theories are indexed 1-based with
wraparound (vertex n+k is vertex k), matching the usual polygon conventions.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

MEMBERSHIP_TOL = 1e-9
PROB_TOL = 1e-12
DISTINGUISH_TOL = 1e-9


def _frozen_vector(coords) -> np.ndarray:
    arr = np.array(coords, dtype=float)
    if arr.ndim != 1:
        raise ValueError("coordinates must be a flat vector")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class State:
    """Point of a theory's state space, in the theory's embedding."""

    coords: np.ndarray
    theory_id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "coords", _frozen_vector(self.coords))


@dataclass(frozen=True, eq=False)
class Effect:
    """Linear functional mapping states to outcome probabilities."""

    coords: np.ndarray
    theory_id: str = ""
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "coords", _frozen_vector(self.coords))


@dataclass(frozen=True, eq=False)
class Measurement:
    """Finite collection of effects summing to the unit effect."""

    label: str
    effects: tuple[Effect, ...]

    def __post_init__(self):
        effects = tuple(self.effects)
        if not effects:
            raise ValueError("measurement needs at least one outcome")
        dims = {e.coords.size for e in effects}
        if len(dims) != 1:
            raise ValueError("effect dimensions disagree within a measurement")
        object.__setattr__(self, "effects", effects)

    def __len__(self) -> int:
        return len(self.effects)


@dataclass(frozen=True, eq=False)
class Polytope:
    vertices: tuple[State, ...]
    extreme_effects: tuple[Effect, ...]
    unit: Effect

    def __post_init__(self):
        if len(self.vertices) < 1:
            raise ValueError("polytope needs at least one vertex")
        coords = np.array([v.coords for v in self.vertices])
        for i, j in itertools.combinations(range(len(coords)), 2):
            if np.max(np.abs(coords[i] - coords[j])) <= 1e-12:
                raise ValueError(f"vertices {i + 1} and {j + 1} coincide")


@dataclass(frozen=True)
class NormConstraint:
    """k fiducial observables with sum_i |s_i|^p <= 1; p = math.inf allowed."""

    p: float
    k: int

    def __post_init__(self):
        if not (self.p >= 2.0):
            raise ValueError(f"norm exponent must be >= 2, got {self.p!r}")
        if self.k not in (2, 3):
            raise ValueError(f"unsupported fiducial count {self.k!r}")


@dataclass(frozen=True, eq=False)
class RestrictedClassical:
    internal_states: int
    allowed_measurements: tuple[Measurement, ...]

    def __post_init__(self):
        if self.internal_states < 2:
            raise ValueError("need at least two internal states")
        if not self.allowed_measurements:
            raise ValueError("restricted theory needs at least one measurement")


@dataclass(frozen=True)
class Quantum:
    hilbert_dim: int

    def __post_init__(self):
        if not 2 <= self.hilbert_dim <= 8:
            raise ValueError("hilbert_dim must lie in 2..8")


Variant = Polytope | NormConstraint | RestrictedClassical | Quantum


@dataclass(frozen=True, eq=False)
class Theory:
    theory_id: str
    variant: Variant
    measurements: Mapping[str, Measurement] = field(default_factory=dict)

    def measurement(self, name: str) -> Measurement:
        try:
            return self.measurements[name]
        except KeyError as exc:
            raise KeyError(f"theory {self.theory_id!r} has no measurement {name!r}") from exc


def ambient_dimension(theory: Theory) -> int:
    v = theory.variant
    if isinstance(v, Polytope):
        return v.unit.coords.size
    if isinstance(v, NormConstraint):
        return v.k + 1
    if isinstance(v, RestrictedClassical):
        return v.internal_states
    return 2 * v.hilbert_dim**2


def state_space_dimension(theory: Theory) -> int:
    """Affine dimension of the state space (3 for a gbit, d^2-1 for quantum)."""
    v = theory.variant
    if isinstance(v, Polytope):
        coords = np.array([s.coords for s in v.vertices])
        if len(coords) == 1:
            return 0
        return int(np.linalg.matrix_rank(coords[1:] - coords[0], tol=1e-9))
    if isinstance(v, NormConstraint):
        return v.k
    if isinstance(v, RestrictedClassical):
        return v.internal_states - 1
    return v.hilbert_dim**2 - 1


def unit_effect(theory: Theory) -> Effect:
    v = theory.variant
    if isinstance(v, Polytope):
        return v.unit
    if isinstance(v, NormConstraint):
        coords = np.zeros(v.k + 1)
        coords[-1] = 1.0
        return Effect(coords, theory.theory_id, "u")
    if isinstance(v, RestrictedClassical):
        return Effect(np.ones(v.internal_states), theory.theory_id, "u")
    return Effect(density_to_coords(np.eye(v.hilbert_dim)), theory.theory_id, "u")


# --- quantum embedding -------------------------------------------------------

def density_to_coords(matrix) -> np.ndarray:
    """Flatten a Hermitian matrix to (Re entries, Im entries).

    The Euclidean dot product of two such vectors equals Tr(AB) for
    Hermitian A, B, which is what makes quantum effects linear here.
    """
    m = np.asarray(matrix, dtype=complex)
    return np.concatenate([m.real.ravel(), m.imag.ravel()])


def coords_to_density(coords, dim: int) -> np.ndarray:
    arr = np.asarray(coords, dtype=float)
    if arr.size != 2 * dim * dim:
        raise ValueError(f"expected {2 * dim * dim} coordinates for dimension {dim}")
    re = arr[: dim * dim].reshape(dim, dim)
    im = arr[dim * dim :].reshape(dim, dim)
    return re + 1j * im


# --- evaluation --------------------------------------------------------------

def apply_effect(effect: Effect, state: State, clamp_tol: float = MEMBERSHIP_TOL) -> float:
    """Outcome probability of an effect on a state.

    Values within ``clamp_tol`` of 0 or 1 snap to the boundary so that exactly
    distinguishable configurations produce exactly deterministic statistics.
    """
    if effect.coords.size != state.coords.size:
        raise ValueError(
            f"effect dimension {effect.coords.size} != state dimension {state.coords.size}"
        )
    value = float(np.dot(effect.coords, state.coords))
    if value < -clamp_tol or value > 1.0 + clamp_tol:
        raise ValueError(f"effect value {value!r} outside [0, 1]; invalid effect/state pair")
    if abs(value) <= clamp_tol:
        return 0.0
    if abs(value - 1.0) <= clamp_tol:
        return 1.0
    return value


@dataclass(frozen=True)
class Validation:
    ok: bool
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _validate_polytope_state(v: Polytope, state: State, tol: float) -> Validation:
    # dual feasibility: every extreme effect (and the unit) must stay in [0, 1].
    # For the catalog polytopes the extreme effects cut out the state space
    # exactly, so this is a membership test, not just a necessary condition.
    for e in (*v.extreme_effects, v.unit):
        val = float(np.dot(e.coords, state.coords))
        if val < -tol or val > 1.0 + tol:
            return Validation(False, f"effect {e.label or '?'} evaluates to {val!r}")
    uval = float(np.dot(v.unit.coords, state.coords))
    if abs(uval - 1.0) > tol:
        return Validation(False, f"unit effect evaluates to {uval!r}, not 1")
    return Validation(True, "inside all supporting halfspaces")


def validate_state(theory: Theory, state: State, tol: float = MEMBERSHIP_TOL) -> Validation:
    """Membership test for a state in the theory's state space."""
    v = theory.variant
    if state.coords.size != ambient_dimension(theory):
        return Validation(False, "ambient dimension mismatch")
    if isinstance(v, Polytope):
        return _validate_polytope_state(v, state, tol)
    if isinstance(v, NormConstraint):
        if abs(state.coords[-1] - 1.0) > tol:
            return Validation(False, "normalization coordinate is not 1")
        s = np.abs(state.coords[:-1])
        norm = float(s.max()) if math.isinf(v.p) else float((s**v.p).sum()) ** (1.0 / v.p)
        if norm > 1.0 + tol:
            return Validation(False, f"p-norm {norm!r} exceeds 1")
        return Validation(True, f"p-norm {norm!r}")
    if isinstance(v, RestrictedClassical):
        if state.coords.min() < -tol:
            return Validation(False, "negative internal weight")
        total = float(state.coords.sum())
        if abs(total - 1.0) > tol:
            return Validation(False, f"weights sum to {total!r}")
        return Validation(True, "internal simplex point")
    dim = v.hilbert_dim
    m = coords_to_density(state.coords, dim)
    if np.max(np.abs(m - m.conj().T)) > tol:
        return Validation(False, "density matrix is not Hermitian")
    if abs(np.trace(m).real - 1.0) > tol:
        return Validation(False, f"trace is {np.trace(m).real!r}")
    lo = float(np.linalg.eigvalsh(m).min())
    if lo < -tol:
        return Validation(False, f"negative eigenvalue {lo!r}")
    return Validation(True, f"least eigenvalue {lo!r}")


def validate_measurement(theory: Theory, measurement: Measurement, tol: float = PROB_TOL) -> Validation:
    u = unit_effect(theory)
    total = np.sum([e.coords for e in measurement.effects], axis=0)
    dev = float(np.max(np.abs(total - u.coords)))
    if dev > tol:
        return Validation(False, f"effects sum deviates from unit by {dev!r}")
    return Validation(True, f"effects sum to unit within {dev!r}")


def measure(theory: Theory, measurement: Measurement, state: State) -> np.ndarray:
    """Outcome distribution of a measurement on a state."""
    if isinstance(theory.variant, RestrictedClassical):
        allowed = theory.variant.allowed_measurements
        if all(m is not measurement and m.label != measurement.label for m in allowed):
            raise ValueError(
                f"measurement {measurement.label!r} is not available in {theory.theory_id!r}"
            )
    probs = np.array([apply_effect(e, state) for e in measurement.effects])
    total = probs.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"outcome probabilities sum to {total!r}")
    return probs


# --- distinguishability and observed dimension -------------------------------

@dataclass(frozen=True, eq=False)
class DistinguishabilityCertificate:
    """States plus a measurement claimed to satisfy e_j(w_i) = delta_ij."""

    states: tuple[State, ...]
    measurement: Measurement
    verified: bool
    max_deviation: float = float("nan")


def verify_distinguishable(
    theory: Theory,
    states: Sequence[State],
    measurement: Measurement,
    tol: float = DISTINGUISH_TOL,
) -> DistinguishabilityCertificate:
    """Check that outcome j fires exactly on state j (pairing by position)."""
    states = tuple(states)
    if len(measurement.effects) < len(states):
        raise ValueError("measurement has fewer outcomes than states")
    for s in states:
        ok = validate_state(theory, s)
        if not ok:
            raise ValueError(f"state outside the state space: {ok.detail}")
    ok = validate_measurement(theory, measurement, tol=1e-9)
    if not ok:
        raise ValueError(ok.detail)
    worst = 0.0
    for i, s in enumerate(states):
        for j, e in enumerate(measurement.effects[: len(states)]):
            target = 1.0 if i == j else 0.0
            worst = max(worst, abs(float(np.dot(e.coords, s.coords)) - target))
    return DistinguishabilityCertificate(states, measurement, worst <= tol, worst)


@dataclass(frozen=True, eq=False)
class DimensionReport:
    """Largest certified count of jointly perfectly distinguishable states."""

    d: int
    certificate: DistinguishabilityCertificate
    exhaustive: bool
    notes: str = ""


_DIMENSION_CACHE: dict[str, DimensionReport] = {}


def _dedupe_effects(effects: Iterable[Effect]) -> list[Effect]:
    seen = {}
    for e in effects:
        key = tuple(np.round(e.coords, 12))
        if key not in seen:
            seen[key] = e
    return list(seen.values())


def _polytope_dimension(theory: Theory, budget: int) -> DimensionReport:
    v = theory.variant
    vertices = v.vertices
    nv = len(vertices)
    unit = v.unit
    candidates = _dedupe_effects(
        [
            *v.extreme_effects,
            *(
                Effect(unit.coords - e.coords, theory.theory_id, f"u-{e.label or '?'}")
                for e in v.extreme_effects
            ),
            unit,
        ]
    )
    P = np.array([[float(np.dot(e.coords, s.coords)) for s in vertices] for e in candidates])
    ones = [int(sum(1 << i for i in range(nv) if abs(P[j, i] - 1.0) <= DISTINGUISH_TOL)) for j in range(len(candidates))]
    zeros = [int(sum(1 << i for i in range(nv) if abs(P[j, i]) <= DISTINGUISH_TOL)) for j in range(len(candidates))]
    by_one = [[j for j in range(len(candidates)) if ones[j] >> i & 1] for i in range(nv)]
    cap = min(nv, state_space_dimension(theory) + 1)

    best = DimensionReport(
        1,
        verify_distinguishable(theory, [vertices[0]], Measurement("trivial", (unit,))),
        True,
        "single state, unit effect",
    )
    work = 0
    for m in range(2, cap + 1):
        found = None
        for subset in itertools.combinations(range(nv), m):
            work += 1
            if work > budget:
                return DimensionReport(
                    best.d, best.certificate, False, f"search budget {budget} exhausted at size {m}"
                )
            mask = sum(1 << i for i in subset)
            selectors = []
            for i in subset:
                need = mask & ~(1 << i)
                cand = [j for j in by_one[i] if zeros[j] & need == need]
                if not cand:
                    selectors = None
                    break
                selectors.append(cand)
            if selectors is None:
                continue
            for combo in itertools.product(*selectors):
                work += 1
                if work > budget:
                    return DimensionReport(
                        best.d, best.certificate, False, f"search budget {budget} exhausted at size {m}"
                    )
                remainder = unit.coords - np.sum([candidates[j].coords for j in combo], axis=0)
                rem_vals = np.array([float(np.dot(remainder, s.coords)) for s in vertices])
                if rem_vals.min() < -DISTINGUISH_TOL:
                    continue
                effects = [candidates[j] for j in combo]
                if np.max(np.abs(rem_vals)) > PROB_TOL or np.max(np.abs(remainder)) > PROB_TOL:
                    effects.append(Effect(remainder, theory.theory_id, "rest"))
                cert = verify_distinguishable(
                    theory,
                    [vertices[i] for i in subset],
                    Measurement(f"distinguish-{m}", tuple(effects)),
                )
                if cert.verified:
                    found = cert
                    break
            if found:
                break
        if found is None:
            return DimensionReport(best.d, best.certificate, True, "exhaustive over extreme points")
        best = DimensionReport(m, found, True, "exhaustive over extreme points")
    return best


def _restricted_dimension(theory: Theory, states: Sequence[State], label: str) -> DimensionReport:
    # a state is a deterministic pointer for outcome j when e_j fires with
    # certainty; effects of one measurement then exclude each other
    best: tuple[int, DistinguishabilityCertificate] | None = None
    for m in _allowed_measurements(theory):
        chosen: list[State] = []
        for e in m.effects:
            hit = next(
                (s for s in states if abs(float(np.dot(e.coords, s.coords)) - 1.0) <= DISTINGUISH_TOL),
                None,
            )
            if hit is not None:
                chosen.append(hit)
            else:
                break
        if len(chosen) >= 1 and (best is None or len(chosen) > best[0]):
            if len(chosen) == len(m.effects):
                cert = verify_distinguishable(theory, chosen, m)
                if cert.verified:
                    best = (len(chosen), cert)
    if best is None:
        u = unit_effect(theory)
        cert = verify_distinguishable(theory, [states[0]], Measurement("trivial", (u,)))
        return DimensionReport(1, cert, True, "no deterministic readout found")
    return DimensionReport(best[0], best[1], True, label)


def _allowed_measurements(theory: Theory) -> tuple[Measurement, ...]:
    v = theory.variant
    if isinstance(v, RestrictedClassical):
        return v.allowed_measurements
    return tuple(theory.measurements.values())


def _norm_corner_states(theory: Theory) -> list[State]:
    v = theory.variant
    states = []
    for axis in range(v.k):
        for sign in (1.0, -1.0):
            coords = np.zeros(v.k + 1)
            coords[axis] = sign
            coords[-1] = 1.0
            states.append(State(coords, theory.theory_id))
    return states


def observed_dimension(theory: Theory, budget: int = 2_000_000, use_cache: bool = True) -> DimensionReport:
    """Largest number of jointly perfectly distinguishable states.

    Polytope theories are searched exhaustively over extreme states and
    extreme effects (distinguishing states can be taken extremal, and any
    distinguishing measurement can be refined to extremal effects).
    Restricted and norm-constraint theories search their available
    measurements; quantum theories have an analytic basis certificate.
    """
    if use_cache and theory.theory_id in _DIMENSION_CACHE:
        return _DIMENSION_CACHE[theory.theory_id]
    v = theory.variant
    if isinstance(v, Polytope):
        report = _polytope_dimension(theory, budget)
    elif isinstance(v, RestrictedClassical):
        basis = [
            State(np.eye(v.internal_states)[i], theory.theory_id)
            for i in range(v.internal_states)
        ]
        report = _restricted_dimension(theory, basis, "restricted measurement catalog")
    elif isinstance(v, NormConstraint):
        report = _restricted_dimension(theory, _norm_corner_states(theory), "fiducial readouts")
    else:
        dim = v.hilbert_dim
        states = tuple(
            State(density_to_coords(np.outer(b, b.conj())), theory.theory_id)
            for b in np.eye(dim)
        )
        effects = tuple(
            Effect(density_to_coords(np.outer(b, b.conj())), theory.theory_id, f"P{i}")
            for i, b in enumerate(np.eye(dim))
        )
        cert = verify_distinguishable(theory, states, Measurement("basis", effects))
        report = DimensionReport(dim, cert, True, "projective basis (analytic)")
    if use_cache and report.exhaustive:
        _DIMENSION_CACHE[theory.theory_id] = report
    return report


def composite_dimension_bound(component_dims: Sequence[int]) -> int:
    """Upper bound prod_i (dim_i + 1) on the observed dimension of a product.

    ``component_dims`` are the affine state-space dimensions of the factors;
    each factor alone obeys d <= dim + 1, with equality only for simplices.
    """
    dims = list(component_dims)
    if not dims:
        raise ValueError("no components")
    out = 1
    for d in dims:
        if d < 1 or d != int(d):
            raise ValueError(f"state-space dimension must be a positive integer, got {d!r}")
        out *= int(d) + 1
    return out
