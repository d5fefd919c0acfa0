"""Average-fidelity and leakage metrics for propagators with leaky subspaces."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import yaml

from shuttlesim.core import SeedSpec


def subspace_block(u: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Restriction B^dagger U B of a full-space operator to a subspace basis.

    ``basis`` holds orthonormal subspace vectors as columns (d_full, d).
    """
    return basis.conj().T @ u @ basis


def process_fidelity_with_leakage(u: np.ndarray, target: np.ndarray,
                                  basis: np.ndarray) -> tuple[float, float]:
    """Average gate fidelity and leakage of ``u`` against a subspace target.

    ``target`` is the intended unitary expressed in the subspace basis
    (d x d). With M = V^dagger P U P restricted to the subspace,

        F_avg = (Tr(M^dagger M) + |Tr M|^2) / (d (d + 1))
        L     = 1 - Tr(M^dagger M) / d
    """
    d_full, d = basis.shape
    if u.shape != (d_full, d_full):
        raise ValueError(f"propagator shape {u.shape} does not match basis {basis.shape}")
    if target.shape != (d, d):
        raise ValueError(f"target must be {d}x{d} in the subspace basis")
    defect = np.linalg.norm(target.conj().T @ target - np.eye(d))
    if defect > 1e-8:
        raise ValueError(f"target is not unitary on the subspace (defect {defect:.2e})")
    m = target.conj().T @ subspace_block(u, basis)
    return fidelity_from_block(m)


def fidelity_from_block(m: np.ndarray) -> tuple[float, float]:
    """(F_avg, leakage) from the pre-multiplied subspace block M = V^dag P U P."""
    d = m.shape[-1]
    tr_mm = float(np.einsum("...ij,...ij->...", m.conj(), m).real)
    tr_m = np.trace(m, axis1=-2, axis2=-1)
    f = (tr_mm + abs(tr_m) ** 2) / (d * (d + 1))
    leakage = 1.0 - tr_mm / d
    return float(f), float(leakage)


def state_fidelity(psi: np.ndarray, target: np.ndarray) -> float:
    """|<target|psi>|^2."""
    return float(abs(np.vdot(target, psi)) ** 2)


@dataclass(frozen=True)
class FidelityReport:
    """Monte Carlo fidelity summary.

    ``stderr`` is the sample standard deviation of the per-shot fidelities
    divided by sqrt(shots).
    """

    fidelity: float
    leakage: float
    stderr: float
    shots: int
    seed: SeedSpec
    per_shot: np.ndarray | None = None

    def __post_init__(self):
        if not (-1e-9 <= self.fidelity <= 1 + 1e-9):
            raise ValueError(f"fidelity out of range: {self.fidelity}")
        if not (-1e-9 <= self.leakage <= 1 + 1e-9):
            raise ValueError(f"leakage out of range: {self.leakage}")

    def to_dict(self) -> dict:
        return {
            "fidelity": float(self.fidelity),
            "leakage": float(self.leakage),
            "stderr": float(self.stderr),
            "shots": int(self.shots),
            "seed": {"master_seed": self.seed.master_seed, "stream_id": self.seed.stream_id},
        }

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=True)

    @classmethod
    def from_yaml(cls, text: str) -> "FidelityReport":
        data = yaml.safe_load(text)
        return cls(fidelity=data["fidelity"], leakage=data["leakage"],
                   stderr=data["stderr"], shots=data["shots"],
                   seed=SeedSpec(**data["seed"]))


def aggregate_report(per_shot_f: np.ndarray, per_shot_l: np.ndarray, seed: SeedSpec,
                     keep_per_shot: bool = False) -> FidelityReport:
    """Order-independent aggregation of per-shot values (indexed by shot)."""
    shots = len(per_shot_f)
    mean_f = math.fsum(per_shot_f) / shots
    mean_l = math.fsum(per_shot_l) / shots
    if shots > 1:
        var = math.fsum((f - mean_f) ** 2 for f in per_shot_f) / (shots - 1)
        stderr = math.sqrt(var / shots)
    else:
        stderr = 0.0
    return FidelityReport(fidelity=mean_f, leakage=mean_l, stderr=stderr, shots=shots,
                          seed=seed, per_shot=per_shot_f if keep_per_shot else None)
