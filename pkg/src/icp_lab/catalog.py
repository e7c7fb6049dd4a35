"""Catalog of the concrete theories the constructions run on.

Polygon models: n extreme states on a circle of radius r_n = 1/sqrt(cos(pi/n))
at height 1,

    w_i = (r_n cos(2 i pi / n), r_n sin(2 i pi / n), 1),       i = 1..n,

with extreme effects

    e_i = (r_n cos((2i-1) pi / n), r_n sin((2i-1) pi / n), 1) / 2     (n even)
    e_i = (r_n cos(2 i pi / n),  r_n sin(2 i pi / n),  1) / (1+r_n^2) (n odd)

and unit effect u = (0, 0, 1). Indices are 1-based and wrap modulo n. Each
named measurement ``Ei`` is the two-outcome pair {e_i, u - e_i}; for even n
the complement u - e_i coincides with e_{i + n/2}.

The square model (sbit) is polygon(4) with X = E2 and Z = E3, so the four
vertices are the deterministic corners (s_x, s_z) = (+-1, +-1). The hbit is a
four-state classical simplex that only exposes the two coarse parity readouts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gpt import (
    Effect,
    Measurement,
    NormConstraint,
    Polytope,
    Quantum,
    RestrictedClassical,
    State,
    Theory,
    density_to_coords,
    validate_measurement,
    validate_state,
)


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    entry_id: str
    theory: Theory
    default_measurements: dict[str, Measurement]
    notes: str = ""

    def measurement(self, name: str) -> Measurement:
        return self.theory.measurement(name)


def _checked(entry: CatalogEntry) -> CatalogEntry:
    for m in entry.theory.measurements.values():
        ok = validate_measurement(entry.theory, m)
        if not ok:
            raise AssertionError(f"{entry.entry_id}/{m.label}: {ok.detail}")
    return entry


def polygon_vertex(n: int, i: int, theory_id: str | None = None) -> State:
    """Vertex w_i of the n-gon model, 1-based with wraparound."""
    r = 1.0 / math.sqrt(math.cos(math.pi / n))
    angle = 2.0 * math.pi * (i % n) / n
    return State(
        np.array([r * math.cos(angle), r * math.sin(angle), 1.0]),
        theory_id if theory_id is not None else f"polygon:{n}",
    )


def polygon_effect(n: int, i: int, theory_id: str | None = None) -> Effect:
    """Extreme effect e_i of the n-gon model, 1-based with wraparound."""
    tid = theory_id if theory_id is not None else f"polygon:{n}"
    r = 1.0 / math.sqrt(math.cos(math.pi / n))
    if n % 2 == 0:
        angle = (2.0 * (((i - 1) % n) + 1) - 1.0) * math.pi / n
        coords = 0.5 * np.array([r * math.cos(angle), r * math.sin(angle), 1.0])
    else:
        angle = 2.0 * math.pi * (i % n) / n
        coords = np.array([r * math.cos(angle), r * math.sin(angle), 1.0]) / (1.0 + r * r)
    return Effect(coords, tid, f"e{((i - 1) % n) + 1}")


def polygon(n: int, entry_id: str | None = None) -> CatalogEntry:
    """Polygon model with n extreme states; n = 3 is the classical trit."""
    if n < 3:
        raise ValueError(f"polygon needs n >= 3, got {n}")
    tid = entry_id or f"polygon:{n}"
    unit = Effect(np.array([0.0, 0.0, 1.0]), tid, "u")
    vertices = tuple(polygon_vertex(n, i, tid) for i in range(1, n + 1))
    extremes = tuple(polygon_effect(n, i, tid) for i in range(1, n + 1))
    measurements = {}
    for i, e in enumerate(extremes, start=1):
        comp = Effect(unit.coords - e.coords, tid, f"u-e{i}")
        measurements[f"E{i}"] = Measurement(f"E{i}", (e, comp))
    theory = Theory(tid, Polytope(vertices, extremes, unit), measurements)
    return _checked(
        CatalogEntry(
            tid,
            theory,
            measurements,
            notes=f"{n}-gon model, r = 1/sqrt(cos(pi/{n}))",
        )
    )


def classical_trit() -> CatalogEntry:
    entry = polygon(3, entry_id="classical-trit")
    return CatalogEntry(
        "classical-trit",
        entry.theory,
        entry.default_measurements,
        notes="three-outcome classical system (triangle model)",
    )


def classical_bit() -> CatalogEntry:
    """Single classical bit exposing the same readout under two names."""
    tid = "classical-bit"
    v0 = State(np.array([1.0, 0.0]), tid)
    v1 = State(np.array([0.0, 1.0]), tid)
    p0 = Effect(np.array([1.0, 0.0]), tid, "p0")
    p1 = Effect(np.array([0.0, 1.0]), tid, "p1")
    unit = Effect(np.array([1.0, 1.0]), tid, "u")
    # X and Z are the same underlying readout: copies of one bit
    measurements = {
        "X": Measurement("X", (Effect(p0.coords, tid, "X0"), Effect(p1.coords, tid, "X1"))),
        "Z": Measurement("Z", (Effect(p0.coords, tid, "Z0"), Effect(p1.coords, tid, "Z1"))),
    }
    theory = Theory(tid, Polytope((v0, v1), (p0, p1), unit), measurements)
    return _checked(
        CatalogEntry(tid, theory, measurements, notes="one bit read twice (X and Z coincide)")
    )


def sbit() -> CatalogEntry:
    """Square model: X and Z are simultaneously deterministic on the corners."""
    entry = polygon(4, entry_id="sbit")
    theory = entry.theory
    e2 = theory.measurement("E2")
    e3 = theory.measurement("E3")
    measurements = dict(theory.measurements)
    measurements["X"] = Measurement("X", e2.effects)
    measurements["Z"] = Measurement("Z", e3.effects)
    theory = Theory("sbit", theory.variant, measurements)
    return _checked(
        CatalogEntry(
            "sbit",
            theory,
            measurements,
            notes="square model; corners carry definite X and Z values at once",
        )
    )


def sbit_state(sx: float, sz: float, entry: CatalogEntry | None = None) -> State:
    """Square-model state with mean values (s_x, s_z); corners at (+-1, +-1)."""
    if max(abs(sx), abs(sz)) > 1.0 + 1e-12:
        raise ValueError("square-model mean values must lie in [-1, 1]")
    r = 1.0 / math.sqrt(math.cos(math.pi / 4.0))
    tid = entry.entry_id if entry is not None else "sbit"
    return State(np.array([-r * (sx + sz) / 2.0, r * (sx - sz) / 2.0, 1.0]), tid)


def hbit() -> CatalogEntry:
    """Four-state classical simplex restricted to two binary parity readouts."""
    tid = "hbit"
    x = Measurement(
        "X",
        (
            Effect(np.array([1.0, 1.0, 0.0, 0.0]), tid, "X0"),
            Effect(np.array([0.0, 0.0, 1.0, 1.0]), tid, "X1"),
        ),
    )
    z = Measurement(
        "Z",
        (
            Effect(np.array([1.0, 0.0, 1.0, 0.0]), tid, "Z0"),
            Effect(np.array([0.0, 1.0, 0.0, 1.0]), tid, "Z1"),
        ),
    )
    measurements = {"X": x, "Z": z}
    theory = Theory(tid, RestrictedClassical(4, (x, z)), measurements)
    return _checked(
        CatalogEntry(
            tid,
            theory,
            measurements,
            notes="hidden 4-state bit; only the two coarse readouts are available",
        )
    )


def hbit_state(a: int, b: int) -> State:
    """Internal state with definite readouts X = a, Z = b."""
    if a not in (0, 1) or b not in (0, 1):
        raise ValueError("readout values must be 0 or 1")
    coords = np.zeros(4)
    coords[2 * a + b] = 1.0
    return State(coords, "hbit")


_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def _qubit_axis_measurement(axis: np.ndarray, label: str, tid: str) -> Measurement:
    ops = (np.eye(2) + axis[0] * _SIGMA_X + axis[1] * _SIGMA_Y + axis[2] * _SIGMA_Z) / 2.0, (
        np.eye(2) - axis[0] * _SIGMA_X - axis[1] * _SIGMA_Y - axis[2] * _SIGMA_Z
    ) / 2.0
    return Measurement(
        label,
        tuple(Effect(density_to_coords(op), tid, f"{label}{i}") for i, op in enumerate(ops)),
    )


def qubit() -> CatalogEntry:
    tid = "qubit"
    measurements = {
        "X": _qubit_axis_measurement(np.array([1.0, 0.0, 0.0]), "X", tid),
        "Z": _qubit_axis_measurement(np.array([0.0, 0.0, 1.0]), "Z", tid),
    }
    theory = Theory(tid, Quantum(2), measurements)
    return _checked(
        CatalogEntry(tid, theory, measurements, notes="projective X and Z on one qubit")
    )


def qubit_z_rotated(theta: float) -> Measurement:
    """Projective readout along cos(theta) z + sin(theta) x; theta = 0 is Z."""
    axis = np.array([math.sin(theta), 0.0, math.cos(theta)])
    return _qubit_axis_measurement(axis, f"Z({theta:.6g})", "qubit")


def qubit_state_from_bloch(bx: float, by: float, bz: float) -> State:
    b = np.array([bx, by, bz])
    if np.linalg.norm(b) > 1.0 + 1e-12:
        raise ValueError("Bloch vector lies outside the unit ball")
    rho = (np.eye(2) + bx * _SIGMA_X + by * _SIGMA_Y + bz * _SIGMA_Z) / 2.0
    return State(density_to_coords(rho), "qubit")


_PGNST_AXES = ("X", "Y", "Z")


def pgnst_id(p: float, k: int) -> str:
    p_str = "inf" if math.isinf(p) else f"{p:g}"
    return f"pgnst:{p_str}:{k}"


def pgnst(p: float, k: int = 2) -> CatalogEntry:
    """Norm-constraint theory: k fiducial observables with sum |s_i|^p <= 1.

    p = 2, k = 3 is the Bloch ball; p > 2 admits states sharper than any
    quantum uncertainty tradeoff allows; p = inf, k = 2 is the square model
    in fiducial coordinates (a gbit for k = 3).
    """
    tid = pgnst_id(p, k)
    names = _PGNST_AXES[:k] if k < 3 else _PGNST_AXES
    if k == 2:
        names = ("X", "Z")
    measurements = {}
    for axis, name in enumerate(names):
        plus = np.zeros(k + 1)
        plus[axis] = 0.5
        plus[-1] = 0.5
        minus = np.zeros(k + 1)
        minus[axis] = -0.5
        minus[-1] = 0.5
        measurements[name] = Measurement(
            name,
            (Effect(plus, tid, f"{name}0"), Effect(minus, tid, f"{name}1")),
        )
    theory = Theory(tid, NormConstraint(float(p), k), measurements)
    return _checked(
        CatalogEntry(
            tid,
            theory,
            measurements,
            notes=f"|s|_p <= 1 ball over {k} fiducial readouts",
        )
    )


def norm_state(entry: CatalogEntry, means) -> State:
    """State of a norm-constraint theory from its fiducial mean values."""
    variant = entry.theory.variant
    if not isinstance(variant, NormConstraint):
        raise TypeError(f"{entry.entry_id!r} is not a norm-constraint theory")
    means = np.asarray(means, dtype=float)
    if means.size != variant.k:
        raise ValueError(f"expected {variant.k} mean values")
    state = State(np.append(means, 1.0), entry.entry_id)
    ok = validate_state(entry.theory, state)
    if not ok:
        raise ValueError(ok.detail)
    return state


def list_catalog() -> list[CatalogEntry]:
    return [classical_bit(), classical_trit(), hbit(), sbit(), qubit()]


def resolve(theory_id: str) -> CatalogEntry:
    """Build a catalog entry from its identifier, e.g. polygon:7 or pgnst:3:2."""
    fixed = {
        "classical-bit": classical_bit,
        "classical-trit": classical_trit,
        "hbit": hbit,
        "sbit": sbit,
        "qubit": qubit,
    }
    if theory_id in fixed:
        return fixed[theory_id]()
    if theory_id.startswith("polygon:"):
        return polygon(int(theory_id.split(":", 1)[1]))
    if theory_id.startswith("pgnst:"):
        parts = theory_id.split(":")
        if len(parts) != 3:
            raise ValueError(f"expected pgnst:<p>:<k>, got {theory_id!r}")
        p = math.inf if parts[1] == "inf" else float(parts[1])
        return pgnst(p, int(parts[2]))
    raise KeyError(f"unknown theory id {theory_id!r}")
