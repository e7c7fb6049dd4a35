"""Entropy axiom stress tests and the step-by-step inequality derivation."""
import os
import subprocess
import sys

import numpy as np
import pytest

from icp_lab import (
    AXIOM_TOL,
    ChainNotApplicable,
    IDENTITY_TOL,
    ObservableAssignment,
    axiom_suite,
    build_ensemble,
    catalog,
    proof_chain_check,
    sampling,
)


@pytest.mark.parametrize("kind", ["shannon", "von-neumann"])
def test_axiom_suite_passes(kind):
    reports = axiom_suite(kind, trials=300, seed=5)
    assert [r.axiom for r in reports] == ["i", "ii", "iii", "iv", "v"]
    for r in reports:
        assert r.passed, f"axiom {r.axiom} violated by {r.max_violation}"
        assert r.max_violation <= AXIOM_TOL
        assert r.entropy_kind == kind
        assert r.trials == 300


def test_axiom_suite_rejects_unknown_kind():
    with pytest.raises(ValueError):
        axiom_suite("renyi", trials=10)


def test_axiom_suite_thread_count_invariant():
    code = (
        "import icp_lab\n"
        "for r in icp_lab.axiom_suite('shannon', 200, seed=9):\n"
        "    print(r.axiom, repr(r.max_violation))\n"
    )
    outs = []
    for threads in ("1", "4"):
        env = dict(os.environ, ICP_LAB_THREADS=threads)
        run = subprocess.run(
            [sys.executable, "-c", code], capture_output=True, text=True, env=env
        )
        assert run.returncode == 0, run.stderr
        outs.append(run.stdout)
    assert outs[0] == outs[1]


def _two_register_assignment(entry):
    th = entry.theory
    return ObservableAssignment(((th.measurement("X"), 0), (th.measurement("Z"), 1)))


def test_chain_not_applicable_for_square_state_space(sbit_entry):
    states = {(a, b): catalog.sbit_state(2 * a - 1.0, 2 * b - 1.0) for a in (0, 1) for b in (0, 1)}
    ens = build_ensemble(
        sbit_entry.theory,
        [(0.25, states[(a, b)], (a, b)) for a in (0, 1) for b in (0, 1)],
        (2, 2),
    )
    with pytest.raises(ChainNotApplicable):
        proof_chain_check(ens, _two_register_assignment(sbit_entry))


def test_chain_pinpoints_restricted_classical_break(hbit_entry):
    """With hidden four-state classicality the chain runs, and it localizes the
    failure: every step holds except the dimension bound on the source entropy."""
    ens = build_ensemble(
        hbit_entry.theory,
        [(0.25, catalog.hbit_state(a, b), (a, b)) for a in (0, 1) for b in (0, 1)],
        (2, 2),
    )
    ledger = proof_chain_check(ens, _two_register_assignment(hbit_entry))
    assert not ledger.all_hold()
    broken = [s for s in ledger.steps if s.kind == "inequality" and s.margin < -AXIOM_TOL]
    names = {s.name for s in broken}
    assert "H(S) <= log2(d)" in names
    assert any("sum of gains" in n for n in names)
    # the structural steps are all intact
    for step in ledger.steps:
        if step.name in names:
            continue
        if step.kind == "identity":
            assert abs(step.lhs - step.rhs) <= IDENTITY_TOL
        else:
            assert step.margin >= -AXIOM_TOL


def test_chain_holds_on_random_classical_ensembles(rng, bit_entry):
    assignment = _two_register_assignment(bit_entry)
    for _ in range(200):
        ens = sampling.random_ensemble(bit_entry, rng)
        ledger = proof_chain_check(ens, assignment)
        assert ledger.all_hold()
        assert ledger.min_inequality_margin() >= -AXIOM_TOL
        assert ledger.max_identity_error() <= IDENTITY_TOL


def test_chain_holds_on_random_qubit_ensembles(rng, qubit_entry):
    assignment = _two_register_assignment(qubit_entry)
    for _ in range(50):
        ens = sampling.random_ensemble(qubit_entry, rng)
        ledger = proof_chain_check(ens, assignment)
        assert ledger.all_hold()


def test_chain_three_observables_classical(rng, trit_entry):
    th = trit_entry.theory
    assignment = ObservableAssignment(
        tuple((th.measurement(l), i) for i, l in enumerate(("E1", "E2", "E3")))
    )
    for _ in range(25):
        ens = sampling.random_ensemble(trit_entry, rng, n_registers=3, alphabet=2)
        ledger = proof_chain_check(ens, assignment)
        assert ledger.all_hold()
        assert ledger.bound == pytest.approx(np.log2(3), abs=1e-15)


def test_chain_step_serialization(rng, bit_entry):
    ens = sampling.random_ensemble(bit_entry, rng)
    ledger = proof_chain_check(ens, _two_register_assignment(bit_entry))
    doc = ledger.to_json()
    assert doc["observed_dimension"] == 2
    assert len(doc["steps"]) == len(ledger.steps)
    for raw, step in zip(doc["steps"], ledger.steps):
        assert raw["name"] == step.name
        assert raw["kind"] in ("identity", "inequality")
        assert raw["margin"] == pytest.approx(step.margin, abs=0.0)
