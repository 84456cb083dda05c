"""Unit tests for KL expressibility estimation."""

import math

import numpy as np
import pytest

from pqc_expressibility.catalog import compile_instance, default_catalog, get_template, instantiate
from pqc_expressibility.errors import CircuitError, ConfigError
from pqc_expressibility.expressibility import (
    FidelityHistogram,
    SamplingConfig,
    StreamKey,
    arcsine_oracle_kl,
    convergence_study,
    estimate_expressibility,
    haar_bin_mass,
    haar_bin_masses,
    kl_divergence,
    reference_instance,
    sample_fidelities,
)


class TestHaarMasses:
    """Test the binned Haar fidelity law."""

    @pytest.mark.parametrize("n_qubits", [1, 2, 4, 10, 18])
    def test_masses_sum_to_one(self, n_qubits):
        assert float(np.sum(haar_bin_masses(n_qubits, 75))) == pytest.approx(1.0, abs=1e-12)

    def test_single_qubit_is_uniform(self):
        assert np.allclose(haar_bin_masses(1, 75), 1.0 / 75)

    def test_two_qubit_closed_form(self):
        # N = 4: mass of [a, b) is (1 - a)^3 - (1 - b)^3
        assert haar_bin_mass(2, 0, 10) == pytest.approx(1.0 - 0.9**3, rel=1e-12)
        assert haar_bin_mass(2, 9, 10) == pytest.approx(0.1**3, rel=1e-12)

    def test_large_register_tail_is_floored(self):
        masses = haar_bin_masses(18, 75)
        assert np.all(masses > 0)

    def test_bin_index_out_of_range(self):
        with pytest.raises(CircuitError):
            haar_bin_mass(2, 10, 10)

    def test_result_is_read_only(self):
        with pytest.raises(ValueError):
            haar_bin_masses(3, 20)[0] = 1.0


class TestKLDivergence:
    """Test KL divergence conventions."""

    def test_identical_distributions(self):
        q = haar_bin_masses(3, 75)
        assert kl_divergence(q, q) == pytest.approx(0.0, abs=1e-12)

    def test_point_mass_on_last_bin(self):
        p = np.zeros(75)
        p[-1] = 1.0
        assert kl_divergence(p, haar_bin_masses(1, 75)) == pytest.approx(math.log(75), abs=1e-12)

    def test_bin_count_mismatch(self):
        with pytest.raises(CircuitError):
            kl_divergence(np.ones(3) / 3, np.ones(4) / 4)


class TestFidelityHistogram:
    """Test histogram binning."""

    def test_fidelity_one_lands_in_last_bin(self):
        histogram = FidelityHistogram.from_fidelities([1.0, 0.0, 0.5], 4)
        assert histogram.bin_probabilities.tolist() == pytest.approx([1 / 3, 0.0, 1 / 3, 1 / 3])

    def test_probabilities_sum_to_one(self):
        rng = np.random.default_rng(0)
        histogram = FidelityHistogram.from_fidelities(rng.uniform(size=1000), 75)
        assert float(np.sum(histogram.bin_probabilities)) == pytest.approx(1.0, abs=1e-12)
        assert histogram.sample_count == 1000


class TestSampling:
    """Test fidelity sampling and determinism."""

    def test_parameterless_instance_gives_ones(self):
        fidelities = sample_fidelities(reference_instance("idle"), 10, StreamKey(1, 0, 1, 1, 0))
        assert fidelities.tolist() == [1.0] * 10

    def test_undecomposed_instance_rejected(self):
        instance = instantiate(get_template(default_catalog(), 3), 2, 1)
        with pytest.raises(CircuitError):
            sample_fidelities(instance, 10, StreamKey(1, 3, 2, 1, 0))

    def test_prefix_stable_across_sample_sizes(self):
        instance = compile_instance(get_template(default_catalog(), 2), 3, 1)
        key = StreamKey.for_instance(instance, 5, 0)
        short = sample_fidelities(instance, 300, key)
        long = sample_fidelities(instance, 600, key)
        assert np.array_equal(short[:250], long[:250])

    def test_streams_differ_per_repetition(self):
        instance = compile_instance(get_template(default_catalog(), 2), 3, 1)
        first = sample_fidelities(instance, 50, StreamKey.for_instance(instance, 5, 0))
        second = sample_fidelities(instance, 50, StreamKey.for_instance(instance, 5, 1))
        assert not np.array_equal(first, second)


class TestEstimate:
    """Test the expressibility estimate."""

    def test_idle_reference_gives_ln_bins(self):
        estimate = estimate_expressibility(reference_instance("idle"), SamplingConfig(n_pairs=100))
        assert abs(estimate.mean_kl - math.log(75)) < 1e-12
        assert estimate.std_kl == 0.0

    def test_rx_reference_matches_arcsine_oracle(self):
        estimate = estimate_expressibility(reference_instance("rx"), SamplingConfig(n_pairs=20_000, n_repetitions=10))
        oracle = arcsine_oracle_kl(75)
        assert abs(estimate.mean_kl - oracle) <= 3.0 * max(estimate.std_kl, 1e-3)

    def test_deterministic_and_thread_independent(self):
        instance = compile_instance(get_template(default_catalog(), 9), 3, 2)
        config = SamplingConfig(n_pairs=400, n_repetitions=4, master_seed=17)
        serial = estimate_expressibility(instance, config, threads=1)
        parallel = estimate_expressibility(instance, config, threads=4)
        assert serial.per_repetition == parallel.per_repetition

    def test_seed_changes_result(self):
        instance = compile_instance(get_template(default_catalog(), 9), 3, 1)
        a = estimate_expressibility(instance, SamplingConfig(n_pairs=300, n_repetitions=2, master_seed=1))
        b = estimate_expressibility(instance, SamplingConfig(n_pairs=300, n_repetitions=2, master_seed=2))
        assert a.per_repetition != b.per_repetition

    def test_entangled_template_more_expressive_than_idle(self):
        instance = compile_instance(get_template(default_catalog(), 2), 2, 3)
        estimate = estimate_expressibility(instance, SamplingConfig(n_pairs=2000, n_repetitions=2))
        assert 0.0 <= estimate.mean_kl < math.log(75)

    def test_convergence_rows(self):
        rows = convergence_study(reference_instance("rx"), [100, 400], SamplingConfig(n_repetitions=3))
        assert [row.samples for row in rows] == [100, 400]
        assert all(row.std_kl >= 0 for row in rows)


class TestSamplingConfig:
    """Test sampling settings validation."""

    @pytest.mark.parametrize(
        "kwargs",
        [{"n_pairs": 0}, {"n_bins": 1}, {"n_repetitions": 0}, {"master_seed": -1}],
    )
    def test_invalid_settings(self, kwargs):
        with pytest.raises(ConfigError):
            SamplingConfig(**kwargs)

    def test_with_pairs(self):
        assert SamplingConfig(n_pairs=5).with_pairs(9).n_pairs == 9

    def test_unknown_reference(self):
        with pytest.raises(ConfigError):
            reference_instance("zz")
