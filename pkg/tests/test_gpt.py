"""State/effect layer: membership tests, measurement statistics, observed dimension."""
import numpy as np
import pytest

from icp_lab import (
    MEMBERSHIP_TOL,
    State,
    apply_effect,
    catalog,
    composite_dimension_bound,
    measure,
    observed_dimension,
    unit_effect,
    validate_measurement,
    validate_state,
    verify_distinguishable,
)


def test_apply_effect_snaps_boundary(sbit_entry):
    # corner state against its own supporting effect: exactly 1 after snapping
    s = catalog.sbit_state(1.0, 1.0)
    x = sbit_entry.theory.measurement("X")
    val = apply_effect(x.effects[0], s)
    assert 0.0 <= val <= 1.0


def test_apply_effect_rejects_out_of_range_value(qubit_entry):
    # trace-10 "density": the Z0 readout would report probability 10
    bad = State(np.array([10.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]), "qubit")
    e = qubit_entry.theory.measurement("Z").effects[0]
    with pytest.raises(ValueError):
        apply_effect(e, bad)


def test_apply_effect_rejects_dimension_mismatch(sbit_entry, qubit_entry):
    s = catalog.sbit_state(0.0, 0.0)
    e = qubit_entry.theory.measurement("Z").effects[0]
    with pytest.raises(ValueError):
        apply_effect(e, s)


def test_validate_state_polytope(sbit_entry):
    th = sbit_entry.theory
    assert validate_state(th, catalog.sbit_state(0.3, -0.8))
    corner = catalog.sbit_state(1.0, 0.0)
    outside = State(corner.coords * np.array([1.5, 1.5, 1.0]), corner.theory_id)
    assert not validate_state(th, outside)


def test_validate_state_quantum(qubit_entry):
    from icp_lab.gpt import density_to_coords

    th = qubit_entry.theory
    assert validate_state(th, catalog.qubit_state_from_bloch(0.6, 0.0, 0.8))
    with pytest.raises(ValueError):
        catalog.qubit_state_from_bloch(0.9, 0.0, 0.9)
    # hermitian, unit trace, but with a negative eigenvalue
    not_psd = State(density_to_coords(np.array([[0.9, 0.6], [0.6, 0.1]])), "qubit")
    assert not validate_state(th, not_psd)


def test_validate_state_restricted_classical(hbit_entry):
    th = hbit_entry.theory
    assert validate_state(th, catalog.hbit_state(1, 0))
    assert not validate_state(th, State(np.array([0.5, 0.7, -0.2, 0.0]), th.theory_id))


def test_validate_measurement_completeness(qubit_entry):
    th = qubit_entry.theory
    for label in ("X", "Z"):
        assert validate_measurement(th, th.measurement(label))


def test_measure_returns_distribution(qubit_entry):
    th = qubit_entry.theory
    s = catalog.qubit_state_from_bloch(0.6, 0.0, 0.8)
    probs = measure(th, th.measurement("Z"), s)
    assert probs.shape == (2,)
    assert probs.sum() == pytest.approx(1.0, abs=1e-12)
    assert probs[0] == pytest.approx(0.9, abs=1e-12)  # (1 + bz) / 2


def test_unit_effect_sums_measurement(sbit_entry):
    th = sbit_entry.theory
    u = unit_effect(th)
    m = th.measurement("X")
    total = np.sum([e.coords for e in m.effects], axis=0)
    assert np.allclose(total, u.coords, atol=1e-12)


@pytest.mark.parametrize("n,expected", [(3, 3), (4, 2), (5, 2), (6, 2), (12, 2), (20, 2)])
def test_polygon_observed_dimension(n, expected):
    report = observed_dimension(catalog.polygon(n).theory)
    assert report.d == expected
    assert report.certificate.verified


def test_observed_dimension_fixed_entries(hbit_entry, qubit_entry, trit_entry, bit_entry):
    assert observed_dimension(hbit_entry.theory).d == 2
    assert observed_dimension(qubit_entry.theory).d == 2
    assert observed_dimension(trit_entry.theory).d == 3
    assert observed_dimension(bit_entry.theory).d == 2


def test_observed_dimension_pgnst():
    assert observed_dimension(catalog.pgnst(3.0, 2).theory).d == 2
    assert observed_dimension(catalog.pgnst(float("inf"), 2).theory).d == 2


def test_verify_distinguishable_triangle():
    th = catalog.polygon(3).theory
    cert = observed_dimension(th).certificate
    assert cert.verified
    assert len(cert.states) == 3
    assert cert.max_deviation <= 1e-9
    # the same measurement with two states swapped is no longer a certificate
    sts = list(cert.states)
    bad = verify_distinguishable(th, [sts[1], sts[0], sts[2]], cert.measurement)
    assert not bad.verified


def test_verify_distinguishable_rejects_invalid_state(qubit_entry):
    from icp_lab.gpt import density_to_coords

    th = qubit_entry.theory
    bad = State(density_to_coords(np.array([[0.9, 0.6], [0.6, 0.1]])), "qubit")
    with pytest.raises(ValueError):
        verify_distinguishable(th, [bad], th.measurement("Z"))


def test_composite_dimension_bound():
    assert composite_dimension_bound([2]) == 3
    assert composite_dimension_bound([2, 2]) == 9
    assert composite_dimension_bound([3, 3, 3]) == 64
    with pytest.raises(ValueError):
        composite_dimension_bound([])
    with pytest.raises(ValueError):
        composite_dimension_bound([0])
