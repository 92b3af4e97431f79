"""Tests for the sample data set and the instance generator."""

import numpy as np
import pytest

from alopt.data import (
    DEFAULT_MIXTURES,
    GeneratorConfig,
    Instance,
    ModeMixture,
    generate_instance,
    generate_masses,
    generate_sized_instance,
    round_half_away,
    sample_masses,
    split_sizes,
)
from alopt.data.reference import REFERENCE_CONTAINERS
from alopt.exceptions import GenerationError, SpecError
from alopt.settings import SEED_ENV


class TestReferenceInstance:
    """The sample data set, field for field."""

    def test_aircraft(self, reference_instance: Instance) -> None:
        """Test the aircraft parameters."""
        spec = reference_instance.spec
        assert spec.bin_count == 20
        assert spec.max_payload == 40000
        assert spec.empty_mass == 120000
        assert spec.empty_cg == -0.05
        assert (spec.cg_min, spec.cg_max, spec.cg_target) == (-0.1, 0.2, 0.1)
        assert spec.shear_limit.peak == 22000
        assert spec.shear_limit.shape == "linear"

    def test_containers(self, reference_instance: Instance) -> None:
        """Test all 30 triplets and their totals."""
        payload = reference_instance.payload
        assert len(payload) == 30
        assert [(c.id, c.size, c.mass) for c in payload.containers] == list(REFERENCE_CONTAINERS)
        assert payload.size_counts == (20, 10, 0)
        assert payload.total_mass == 57897
        assert payload.by_id[5].mass == 3500
        assert payload.by_id[29].mass == 659

    def test_w_max_cap(self, reference_instance: Instance) -> None:
        """Test W^max = min(40000, 57897)."""
        assert reference_instance.w_max_cap == 40000
        assert reference_instance.provenance.kind == "reference"


class TestSplitSizes:
    """Tests for the n/2, n/3, n/6 split."""

    @pytest.mark.parametrize(
        ("n", "expected"),
        [(1, (1, 0, 0)), (2, (1, 1, 0)), (6, (3, 2, 1)), (30, (15, 10, 5)), (31, (16, 10, 5))],
    )
    def test_known_splits(self, n: int, expected: tuple[int, int, int]) -> None:
        """Test rounding of the shares."""
        assert split_sizes(n) == expected

    @pytest.mark.parametrize("n", range(1, 60))
    def test_split_sums_to_n(self, n: int) -> None:
        """Test the counts always add up."""
        assert sum(split_sizes(n)) == n

    def test_split_conserves_count_up_to_ten_thousand(self) -> None:
        """Test every n in 1..10^4 splits into counts within one of n/2, n/3, n/6."""
        for n in range(1, 10**4 + 1):
            counts = split_sizes(n)
            assert sum(counts) == n
            for count, share in zip(counts, (n / 2, n / 3, n / 6), strict=True):
                assert abs(count - share) < 1

    def test_zero_rejected(self) -> None:
        """Test n < 1 is rejected."""
        with pytest.raises(SpecError):
            split_sizes(0)


class TestRounding:
    """Tests for round_half_away."""

    def test_halves_go_away_from_zero(self) -> None:
        """Test 2.5 -> 3 and -2.5 -> -3, unlike banker's rounding."""
        values = np.array([2.5, -2.5, 1.49, 0.5])
        assert round_half_away(values).tolist() == [3.0, -3.0, 1.0, 1.0]


class TestGenerator:
    """Tests for generate_masses."""

    def test_ids_and_sizes(self) -> None:
        """Test ids run 1..n in size order."""
        payload = generate_masses(GeneratorConfig(3, 2, 1, 20, seed=1))
        assert [c.id for c in payload.containers] == [1, 2, 3, 4, 5, 6]
        assert [c.size for c in payload.containers] == [1, 1, 1, 2, 2, 3]

    @pytest.mark.parametrize("bin_count", [10, 20, 40])
    def test_masses_inside_scaled_window(self, bin_count: int) -> None:
        """Test every mass lies strictly inside its scaled truncation window."""
        payload = generate_masses(GeneratorConfig(20, 15, 10, bin_count, seed=3))
        for c in payload.containers:
            lo, hi = DEFAULT_MIXTURES[c.size].scaled_window(bin_count)
            assert lo < c.mass < hi
            assert isinstance(c.mass, int)

    def test_same_seed_same_payload(self) -> None:
        """Test generation is reproducible from the seed."""
        config = GeneratorConfig(5, 4, 2, 16, seed=42)
        assert generate_masses(config) == generate_masses(config)

    def test_different_seeds_differ(self) -> None:
        """Test different seeds give different masses."""
        a = generate_masses(GeneratorConfig(10, 5, 3, 20, seed=1))
        b = generate_masses(GeneratorConfig(10, 5, 3, 20, seed=2))
        assert [c.mass for c in a.containers] != [c.mass for c in b.containers]

    def test_size_streams_are_independent(self) -> None:
        """Test adding size-3 containers leaves the size-1 masses unchanged."""
        a = generate_masses(GeneratorConfig(6, 0, 0, 20, seed=9))
        b = generate_masses(GeneratorConfig(6, 0, 4, 20, seed=9))
        assert [c.mass for c in a.containers] == [c.mass for c in b.containers[:6]]

    def test_seed_from_environment(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test ALOPT_SEED fills in a missing seed."""
        monkeypatch.setenv(SEED_ENV, "42")
        assert GeneratorConfig(1, 0, 0, 20).seed == 42

    def test_unreachable_window(self) -> None:
        """Test a window with no admissible integer mass raises GenerationError."""
        config = GeneratorConfig(0, 3, 0, 40000, seed=0, oversample=1, max_extra_draws=10)
        with pytest.raises(GenerationError) as info:
            generate_masses(config)
        assert info.value.size == 2
        assert info.value.requested == 3
        assert info.value.accepted == 0

    def test_invalid_counts(self) -> None:
        """Test negative or all-zero counts are rejected."""
        with pytest.raises(SpecError):
            GeneratorConfig(-1, 2, 0, 20)
        with pytest.raises(SpecError):
            GeneratorConfig(0, 0, 0, 20)

    def test_mixture_must_contain_modes(self) -> None:
        """Test a window that excludes a mode is rejected."""
        with pytest.raises(SpecError):
            ModeMixture(1500, 3500, 1600, 3700)


class TestMassDistribution:
    """Sample statistics of the truncated two-mode draws."""

    SAMPLES = 10**4

    @pytest.mark.parametrize("size", [1, 2, 3])
    @pytest.mark.parametrize("bin_count", [20, 40])
    def test_samples_strictly_inside_window(self, size: int, bin_count: int) -> None:
        """Test 10^4 integer samples per size class stay strictly inside the scaled window."""
        mixture = DEFAULT_MIXTURES[size]  # type: ignore[index]
        rng = np.random.default_rng(100 + size)
        masses = sample_masses(rng, mixture, self.SAMPLES, bin_count, oversample=3, size=size)
        lo, hi = mixture.scaled_window(bin_count)
        assert masses.size == self.SAMPLES
        assert masses.dtype == np.int64
        assert bool(np.all((masses > lo) & (masses < hi)))

    def test_halved_window_at_forty_bins(self) -> None:
        """Test N = 40 halves the truncation window."""
        for mixture in DEFAULT_MIXTURES.values():
            lo, hi = mixture.scaled_window(40)
            assert (lo, hi) == (mixture.window_low / 2, mixture.window_high / 2)

    def test_size_one_is_bimodal(self) -> None:
        """Test each mode's one-sigma neighborhood holds 20% to 45% of 10^4 samples."""
        mixture = DEFAULT_MIXTURES[1]
        masses = sample_masses(np.random.default_rng(8), mixture, self.SAMPLES, 20, oversample=3, size=1)
        for mode in (mixture.low_mode, mixture.high_mode):
            share = float(np.mean(np.abs(masses - mode) <= mixture.sigma))
            assert 0.20 <= share <= 0.45
        middle = float(np.mean(np.abs(masses - 2500) <= 100))
        near_low = float(np.mean(np.abs(masses - mixture.low_mode) <= 100))
        assert middle < near_low


class TestInstances:
    """Tests for instance bundles."""

    def test_generated_provenance(self) -> None:
        """Test a generated instance records its seed and config."""
        instance = generate_sized_instance(12, 10, seed=5)
        assert instance.provenance.kind == "generated"
        assert instance.provenance.seed == 5
        assert instance.provenance.config is not None
        assert instance.provenance.config.counts == (6, 4, 2)
        assert instance.spec.bin_count == 10

    def test_aircraft_bin_count_must_match(self, reference_instance: Instance) -> None:
        """Test the aircraft and generator must agree on N."""
        with pytest.raises(SpecError):
            generate_instance(GeneratorConfig(2, 1, 0, 12, seed=0), aircraft=reference_instance.spec)
