"""Statevector backend, semiclassical phase estimation and the factoring loop."""

import math

import numpy as np
import pytest

from dirtyshor.adders import AdderSpec, const_adder
from dirtyshor.modular import mod_adder
from dirtyshor.revsim import SimulationError, permutation_table
from dirtyshor.shor import (
    SV_WIDTH_CAP,
    ShorRun,
    Statevector,
    continued_fraction_order,
    exact_outcome_distribution,
    format_transcript,
    order_to_factors,
    semiclassical_angle,
    shor_factor,
    shor_period_finding,
    sv_run,
    validate_modulus,
)

SQ2 = math.sqrt(0.5)


# --------------------------------------------------------------------------
# statevector backend


def test_statevector_width_cap():
    assert Statevector(1).width == 1
    with pytest.raises(SimulationError):
        Statevector(0)
    with pytest.raises(SimulationError):
        Statevector(SV_WIDTH_CAP + 1)
    # the cap is configurable, not hardwired
    assert Statevector(5, cap=5).width == 5
    with pytest.raises(SimulationError):
        Statevector(6, cap=5)


def test_statevector_basis_value_range():
    sv = Statevector(3, value=5)
    assert sv.amps[5] == 1.0
    with pytest.raises(SimulationError):
        Statevector(3, value=8)


def test_from_amplitudes():
    sv = Statevector.from_amplitudes([SQ2, 0.0, 0.0, SQ2])
    assert sv.width == 2
    with pytest.raises(SimulationError):
        Statevector.from_amplitudes([1.0, 0.0, 0.0])  # not a power of two
    with pytest.raises(SimulationError):
        Statevector.from_amplitudes([1.0, 1.0])  # norm sqrt(2)


def test_hadamard_is_self_inverse():
    sv = Statevector(3, value=5)
    before = sv.amps.copy()
    sv.hadamard(1)
    sv.hadamard(1)
    assert np.allclose(sv.amps, before, atol=1e-12)


def test_phase_shift_hits_only_the_one_component():
    sv = Statevector(1)
    sv.hadamard(0)
    sv.phase_shift(math.pi / 2, 0)
    assert np.allclose(sv.amps, [SQ2, SQ2 * 1j], atol=1e-12)


def test_probability_and_forced_measure():
    sv = Statevector(2)
    sv.hadamard(0)
    assert abs(sv.probability(0) - 0.5) < 1e-12
    assert abs(sv.probability(1)) < 1e-12
    bit = sv.measure(0, forced=1)
    assert bit == 1
    assert abs(sv.norm() - 1.0) < 1e-12
    assert np.allclose(sv.amps, [0.0, 1.0, 0.0, 0.0], atol=1e-12)


def test_measure_zero_probability_outcome_raises():
    sv = Statevector(1)
    with pytest.raises(SimulationError):
        sv.measure(0, forced=1)


def test_measure_needs_rng_or_forced():
    sv = Statevector(1)
    with pytest.raises(SimulationError):
        sv.measure(0)
    assert sv.measure(0, rng=np.random.default_rng(0)) == 0


def test_permutation_size_is_checked():
    sv = Statevector(2)
    with pytest.raises(SimulationError):
        sv.apply_permutation(np.arange(8))


def test_sv_run_width_mismatch():
    circ = const_adder(AdderSpec.standard(3, 5))
    with pytest.raises(SimulationError):
        sv_run(circ, Statevector(circ.width + 1))


@pytest.mark.parametrize(
    "circ",
    [
        const_adder(AdderSpec.standard(3, 5)),
        mod_adder(3, 7, (0, 1, 2), (3, 4), 5),
    ],
    ids=["const-adder", "mod-adder"],
)
def test_statevector_agrees_with_bit_simulator(circ):
    perm = permutation_table(circ)
    for v in range(1 << circ.width):
        sv, record = sv_run(circ, v)
        assert record == []
        assert abs(sv.amps[perm[v]] - 1.0) < 1e-12


# --------------------------------------------------------------------------
# semiclassical angles


def test_semiclassical_angles():
    z = semiclassical_angle(0, ())
    assert z == 0.0 and math.copysign(1.0, z) == 1.0
    assert semiclassical_angle(1, (1,)) == -math.pi / 2
    assert semiclassical_angle(2, (1, 1)) == -math.pi * 0.75
    assert semiclassical_angle(3, (0, 0, 0)) == 0.0


# --------------------------------------------------------------------------
# exact outcome distributions


def test_distribution_n15_a7_uniform_on_four_peaks():
    dist = exact_outcome_distribution(15, 7)
    assert set(dist) == {0, 64, 128, 192}
    tv = 0.5 * sum(abs(p - 0.25) for p in dist.values())
    assert tv <= 1e-9


def test_distribution_n15_a4_two_peaks():
    dist = exact_outcome_distribution(15, 4)
    assert set(dist) == {0, 128}
    assert abs(dist[0] - 0.5) <= 1e-9
    assert abs(dist[128] - 0.5) <= 1e-9


def test_distribution_n21_a2_order_six():
    # order 6: only phases 0 and 1/2 are representable in 10 bits, so y=0
    # and y=512 each carry their eigenvector's exact 1/6 plus tiny tails
    # leaked by the four irrational-phase eigenvectors
    dist = exact_outcome_distribution(21, 2)
    assert abs(sum(dist.values()) - 1.0) <= 1e-9
    for y in (0, 512):
        assert dist[y] >= 1 / 6 - 1e-12
        assert abs(dist[y] - 1 / 6) <= 2e-5
    # the nearest integers to Q k/6 for k in {1,2,4,5} are the next peaks
    for y in (171, 341, 683, 853):
        assert dist[y] > 0.11


def test_distribution_rejects_shared_factor():
    with pytest.raises(ValueError):
        exact_outcome_distribution(15, 6)


# --------------------------------------------------------------------------
# classical post-processing


def test_continued_fraction_order_examples():
    assert continued_fraction_order(192, 256, 15, 7) == 4
    assert continued_fraction_order(128, 256, 15, 7) == 4  # doubled from q=2
    assert continued_fraction_order(171, 1024, 21, 2) == 6
    assert continued_fraction_order(0, 256, 15, 7) is None
    with pytest.raises(ValueError):
        continued_fraction_order(256, 256, 15, 7)
    with pytest.raises(ValueError):
        continued_fraction_order(-1, 256, 15, 7)


def test_order_to_factors():
    assert order_to_factors(7, 4, 15) == (3, 5)
    assert order_to_factors(2, 6, 21) == (3, 7)
    assert order_to_factors(7, None, 15) is None
    assert order_to_factors(7, 3, 15) is None  # odd order
    assert order_to_factors(14, 2, 15) is None  # a^(r/2) = N-1


def test_validate_modulus():
    for N in (15, 21, 33, 4095):
        validate_modulus(N)
    for bad in (1, 16, -3):
        with pytest.raises(ValueError):
            validate_modulus(bad)
    for prime in (13, 17):
        with pytest.raises(ValueError):
            validate_modulus(prime)
    for pp in (9, 25, 27, 49):
        with pytest.raises(ValueError):
            validate_modulus(pp)
    with pytest.raises(SimulationError):
        validate_modulus(4097)  # 17 * 241, but 28 qubits


# --------------------------------------------------------------------------
# period finding and the driver


def test_period_finding_is_deterministic():
    r1 = shor_period_finding(15, 7, seed=3)
    r2 = shor_period_finding(15, 7, seed=3)
    assert r1 == r2
    assert r1.width == 10
    assert len(r1.bits) == 8
    assert r1.y == sum(b << i for i, b in enumerate(r1.bits))


def test_period_finding_rejects_shared_factor():
    with pytest.raises(ValueError):
        shor_period_finding(15, 5)


def test_shor_factor_15():
    out = shor_factor(15, seed=0)
    assert out.factors == (3, 5)
    assert out.attempts_used == 1
    assert all(run.width == 10 for run in out.runs if run.y is not None)


def test_shor_factor_21():
    out = shor_factor(21, seed=0)
    assert out.factors == (3, 7)
    assert out.attempts_used == 2
    assert all(run.width == 12 for run in out.runs if run.y is not None)


def test_shor_factor_rejects_bad_modulus():
    # the gate is validate_modulus; spot-check one input of each class
    with pytest.raises(ValueError):
        shor_factor(16)
    with pytest.raises(ValueError):
        shor_factor(13)
    with pytest.raises(ValueError):
        shor_factor(25)
    with pytest.raises(SimulationError):
        shor_factor(4097)


def test_transcript_format():
    run = ShorRun(
        N=15, a=7, seed=0, bits=(0, 1), y=2, r=4, factors=(3, 5), width=10
    )
    text = format_transcript(run)
    lines = text.splitlines()
    assert lines[0] == "i=0 m=0 theta=0.0"
    assert lines[1].startswith("i=1 m=1 theta=")
    assert lines[-1] == "y=2 r=4 factors=3,5"
    empty = ShorRun(N=15, a=3, seed=None, bits=(), y=None, r=None, factors=None, width=10)
    assert format_transcript(empty) == "y=none r=none factors=none\n"
