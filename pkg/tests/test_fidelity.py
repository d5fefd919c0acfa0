import numpy as np
import pytest
from scipy.stats import unitary_group

from shuttlesim.core import SeedSpec
from shuttlesim.dynamics.fidelity import (
    FidelityReport,
    process_fidelity_with_leakage,
    state_fidelity,
    subspace_block,
)


def embed(v, d_full):
    u = np.eye(d_full, dtype=complex)
    u[: v.shape[0], : v.shape[1]] = v
    return u


def test_exact_target_on_subspace():
    rng = np.random.default_rng(0)
    v = unitary_group.rvs(2, random_state=rng)
    leak = unitary_group.rvs(2, random_state=rng)
    u = np.zeros((4, 4), dtype=complex)
    u[:2, :2] = v
    u[2:, 2:] = leak  # anything on the leaked space
    basis = np.eye(4)[:, :2]
    f, l = process_fidelity_with_leakage(u, v, basis)
    assert f == pytest.approx(1.0, abs=1e-12)
    assert l == pytest.approx(0.0, abs=1e-12)


def test_full_leakage():
    # U maps the subspace entirely into the leaked space
    u = np.zeros((4, 4), dtype=complex)
    u[2, 0] = 1.0
    u[3, 1] = 1.0
    u[0, 2] = 1.0
    u[1, 3] = 1.0
    basis = np.eye(4)[:, :2]
    f, l = process_fidelity_with_leakage(u, np.eye(2), basis)
    assert f == pytest.approx(0.0, abs=1e-12)
    assert l == pytest.approx(1.0, abs=1e-12)


def test_haar_average_oracle():
    # F_avg equals the Haar-average state fidelity over the subspace.
    rng = np.random.default_rng(42)
    u = unitary_group.rvs(4, random_state=rng)
    v = unitary_group.rvs(2, random_state=rng)
    basis = np.eye(4)[:, :2]
    f, _ = process_fidelity_with_leakage(u, v, basis)

    n = 100_000
    z = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    m = v.conj().T @ subspace_block(u, basis)
    vals = np.abs(np.einsum("ni,ij,nj->n", z.conj(), m, z)) ** 2
    mc = vals.mean()
    err = vals.std(ddof=1) / np.sqrt(n)
    assert abs(f - mc) < 4 * err


def test_invariance_under_subspace_conjugation():
    rng = np.random.default_rng(1)
    u = unitary_group.rvs(6, random_state=rng)
    v = unitary_group.rvs(3, random_state=rng)
    basis = np.eye(6)[:, :3]
    w = unitary_group.rvs(3, random_state=rng)
    w_full = embed(w, 6)
    f1, l1 = process_fidelity_with_leakage(u, v, basis)
    f2, l2 = process_fidelity_with_leakage(w_full @ u @ w_full.conj().T, w @ v @ w.conj().T, basis)
    assert f1 == pytest.approx(f2, abs=1e-12)
    assert l1 == pytest.approx(l2, abs=1e-12)


def test_non_unitary_target_rejected():
    with pytest.raises(ValueError, match="unitary"):
        process_fidelity_with_leakage(np.eye(4), 0.5 * np.eye(2), np.eye(4)[:, :2])


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        process_fidelity_with_leakage(np.eye(3), np.eye(2), np.eye(4)[:, :2])


def test_state_fidelity():
    psi = np.array([1, 1j]) / np.sqrt(2)
    assert state_fidelity(psi, psi) == pytest.approx(1.0)
    assert state_fidelity(psi, np.array([1, -1j]) / np.sqrt(2)) == pytest.approx(0.0, abs=1e-15)


def test_report_yaml_roundtrip():
    r = FidelityReport(fidelity=0.9991, leakage=1e-4, stderr=2e-5, shots=2000,
                       seed=SeedSpec(7, 3))
    r2 = FidelityReport.from_yaml(r.to_yaml())
    assert r2 == r


def test_report_range_validation():
    with pytest.raises(ValueError):
        FidelityReport(fidelity=1.2, leakage=0, stderr=0, shots=1, seed=SeedSpec(0))
