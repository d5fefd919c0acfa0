import math

import numpy as np
import pytest

from shuttlesim.core import HBAR_UEV_NS, SeedSpec
from shuttlesim.dynamics.model import (
    NoiseChannel,
    constant_model,
    psd_from_amplitude_per_sqrt_hz,
)
from shuttlesim.dynamics.montecarlo import monte_carlo_fidelity

SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def ramsey_model(b_uev, channel):
    # H = (B + delta)/2 sigma_z with noise on the splitting.
    return constant_model(0.5 * b_uev * SZ, couplings={"ez": 0.5 * SZ},
                          noise_channels=(channel,))


def coherence_from_report(report):
    # For pure dephasing with target = noiseless evolution:
    # F_avg = (2 + E[cos(delta_phi)]) / 3, so C = 3 F - 2.
    return 3.0 * report.fidelity - 2.0


def free_evolution_target(b_uev, t):
    phase = b_uev * t / (2 * HBAR_UEV_NS)
    return np.diag([np.exp(-1j * phase), np.exp(1j * phase)])


def test_zero_noise_equals_deterministic():
    model = ramsey_model(1.0, NoiseChannel("quasistatic", "ez", sigma=0.0))
    t = 5.0
    report = monte_carlo_fidelity(model, t, free_evolution_target(1.0, t), np.eye(2),
                                  shots=10, seed=SeedSpec(1))
    assert report.fidelity == pytest.approx(1.0, abs=1e-10)
    assert report.stderr == pytest.approx(0.0, abs=1e-12)


def test_quasistatic_dephasing_oracle():
    # coherence = exp(-sigma^2 t^2 / (2 hbar^2)) within 2% at 1e4 shots
    sigma = 0.05  # ueV
    t = 12.0  # ns
    model = ramsey_model(0.3, NoiseChannel("quasistatic", "ez", sigma=sigma))
    report = monte_carlo_fidelity(model, t, free_evolution_target(0.3, t), np.eye(2),
                                  shots=10_000, seed=SeedSpec(11))
    expected = math.exp(-(sigma**2) * t**2 / (2 * HBAR_UEV_NS**2))
    assert expected < 0.9  # meaningful decay
    assert coherence_from_report(report) == pytest.approx(expected, rel=0.02)


def test_white_noise_dephasing_oracle():
    # coherence = exp(-S t / (4 hbar^2)) within 2% at 1e4 shots
    psd = 0.02  # ueV^2/GHz
    t = 40.0
    model = ramsey_model(0.2, NoiseChannel("white", "ez", psd=psd))
    report = monte_carlo_fidelity(model, t, free_evolution_target(0.2, t), np.eye(2),
                                  shots=10_000, seed=SeedSpec(13), dt=0.05)
    expected = math.exp(-psd * t / (4 * HBAR_UEV_NS**2))
    assert expected < 0.9
    assert coherence_from_report(report) == pytest.approx(expected, rel=0.02)


def test_reports_reproducible_per_seed():
    model = ramsey_model(0.3, NoiseChannel("quasistatic", "ez", sigma=0.02))
    t = 8.0
    kwargs = dict(shots=64, seed=SeedSpec(21, 4))
    a = monte_carlo_fidelity(model, t, free_evolution_target(0.3, t), np.eye(2), **kwargs)
    b = monte_carlo_fidelity(model, t, free_evolution_target(0.3, t), np.eye(2), **kwargs)
    assert a.fidelity == b.fidelity
    assert a.stderr == b.stderr


def test_block_size_does_not_change_result():
    model = ramsey_model(0.3, NoiseChannel("white", "ez", psd=0.01))
    t = 8.0
    target = free_evolution_target(0.3, t)
    a = monte_carlo_fidelity(model, t, target, np.eye(2), shots=50, seed=SeedSpec(5),
                             block_size=7)
    b = monte_carlo_fidelity(model, t, target, np.eye(2), shots=50, seed=SeedSpec(5),
                             block_size=50)
    assert a.fidelity == b.fidelity


def test_stderr_scales_with_shots():
    sigma = 0.05
    t = 6.0
    model = ramsey_model(0.3, NoiseChannel("quasistatic", "ez", sigma=sigma))
    target = free_evolution_target(0.3, t)
    r1 = monte_carlo_fidelity(model, t, target, np.eye(2), shots=2000, seed=SeedSpec(3))
    r2 = monte_carlo_fidelity(model, t, target, np.eye(2), shots=4000, seed=SeedSpec(3))
    ratio = r1.stderr / r2.stderr
    assert ratio == pytest.approx(math.sqrt(2), rel=0.1)


def test_psd_conversion_from_per_sqrt_hz():
    # 0.02 neV/sqrt(Hz) expressed in ueV: 2e-5 ueV/sqrt(Hz) -> 4e-10 ueV^2/Hz
    # -> 0.4 ueV^2/GHz.
    s = psd_from_amplitude_per_sqrt_hz(0.02e-3)
    assert s == pytest.approx(0.4, rel=1e-12)


def test_shots_validation():
    model = ramsey_model(0.3, NoiseChannel("quasistatic", "ez", sigma=0.0))
    with pytest.raises(ValueError):
        monte_carlo_fidelity(model, 1.0, np.eye(2), np.eye(2), shots=0, seed=SeedSpec(0))
