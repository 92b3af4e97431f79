"""Tests for loading physics and validation."""

from fractions import Fraction

import numpy as np
import pytest

from alopt.cgopt import mass_floor_row
from alopt.data import Instance
from alopt.exceptions import DimensionError
from alopt.model import (
    build_constraints,
    center_of_gravity,
    cg_deviation,
    shear_profile,
    simulate_packing,
    total_mass,
    validate,
)
from alopt.types import AircraftSpec, Assignment, Payload, ShearLimit
from tests.helpers import payload_of, small_aircraft


def random_placements(rng: np.random.Generator, spec: AircraftSpec, payload: Payload) -> Assignment:
    """Each container in a uniform legal bin or, with bin 0, left out."""
    placements: dict[int, int] = {}
    for c in payload.containers:
        top = spec.bin_count - 1 if c.size == 3 else spec.bin_count
        j = int(rng.integers(0, top + 1))
        if j:
            placements[c.id] = j
    return Assignment.from_placements(placements)


class TestPhysics:
    """Tests for mass, CG and shear of a loading."""

    def test_empty_loading(self, reference_instance: Instance) -> None:
        """Test an empty aircraft sits at its empty CG."""
        spec, payload = reference_instance.spec, reference_instance.payload
        empty = Assignment.empty()
        assert total_mass(empty, payload) == 0
        assert center_of_gravity(empty, spec, payload) == Fraction(-1, 20)
        assert cg_deviation(empty, spec, payload) == Fraction(3, 20)

    def test_center_of_gravity_is_exact(self) -> None:
        """Test the CG is the mass-weighted mean of the empty CG and container centers."""
        spec = small_aircraft(4)
        payload = payload_of((1, 1, 2000), (2, 3, 4000))
        loading = Assignment.from_placements({1: 4, 2: 1})
        # d(1, 4) = 3/8, d(3, 1) = -1/4
        expected = (120000 * Fraction(-1, 20) + 2000 * Fraction(3, 8) + 4000 * Fraction(-1, 4)) / 126000
        assert center_of_gravity(loading, spec, payload) == expected

    def test_shear_profile_order_and_limits(self) -> None:
        """Test left samples come first and limits follow the linear curve."""
        spec = small_aircraft(4)
        payload = payload_of((1, 1, 2000), (2, 2, 700))
        points = shear_profile(Assignment.from_placements({1: 1, 2: 4}), spec, payload)
        assert [(p.side, p.j) for p in points] == [("left", 1), ("left", 2), ("right", 1), ("right", 2)]
        assert [p.load for p in points] == [2000, 2000, 700, 700]
        assert [p.limit for p in points] == [11000, 22000, 11000, 22000]
        assert all(p.within_limit for p in points)

    def test_unknown_container_rejected(self, reference_instance: Instance) -> None:
        """Test an id outside the payload raises DimensionError."""
        with pytest.raises(DimensionError):
            total_mass(Assignment.from_placements({99: 1}), reference_instance.payload)

    def test_out_of_domain_bin_rejected(self) -> None:
        """Test a size-3 container in bin N raises DimensionError."""
        spec = small_aircraft(4)
        with pytest.raises(DimensionError):
            center_of_gravity(Assignment.from_placements({1: 4}), spec, payload_of((1, 3, 4000)))


class TestValidate:
    """Tests for validate."""

    def test_empty_loading_is_feasible(self, reference_instance: Instance) -> None:
        """Test the empty assignment passes every row of the sample set."""
        report = validate(Assignment.empty(), reference_instance.spec, reference_instance.payload)
        assert report.feasible
        assert report.summary() == "feasible"
        assert report.objective == 0

    def test_overweight_loading(self, reference_instance: Instance) -> None:
        """Test loading everything violates the weight row with negative slack."""
        spec, payload = reference_instance.spec, reference_instance.payload
        placements = {k: (k - 1) % 20 + 1 for k in range(1, 31)}
        report = validate(Assignment.from_placements(placements), spec, payload)
        weight = [v for v in report.violations if v.tag == "weight"]
        assert len(weight) == 1
        assert weight[0].lhs == 57897
        assert weight[0].slack == 40000 - 57897
        assert "weight[0]" in report.summary()
        assert report.objective == -57897

    def test_prebuilt_system_with_extra_rows(self, tiny_instance: Instance) -> None:
        """Test validate checks the rows of a supplied system."""
        spec, payload = tiny_instance.spec, tiny_instance.payload
        system = build_constraints(spec, payload).with_rows([mass_floor_row(spec, payload, 1.0, 1000)])
        report = validate(Assignment.empty(), spec, payload, system=system)
        assert [v.tag for v in report.violations] == ["mass_floor"]

    def test_objective_follows_system(self, tiny_instance: Instance) -> None:
        """Test the report carries the objective of the system it checked."""
        spec, payload = tiny_instance.spec, tiny_instance.payload
        assignment = Assignment.from_placements({1: 1, 2: 3})
        report = validate(assignment, spec, payload)
        assert report.objective == -total_mass(assignment, payload) == -3500
        system = build_constraints(spec, payload).with_objective(None)
        assert validate(assignment, spec, payload, system=system).objective == 0


class TestSimulatePacking:
    """Tests for the half-slot packing simulator."""

    def test_overlap_detected(self) -> None:
        """Test a size-3 container collides with a size-1 in its second bin."""
        spec = small_aircraft(4)
        payload = payload_of((1, 3, 4000), (2, 1, 1000))
        result = simulate_packing(Assignment.from_placements({1: 2, 2: 3}), spec, payload)
        assert result.overfull_bins == (3,)
        assert not result.ok

    def test_repeated_container(self) -> None:
        """Test a container placed twice is reported."""
        spec = small_aircraft(4)
        payload = payload_of((1, 2, 500))
        result = simulate_packing(Assignment.from_pairs([(1, 1), (1, 2)]), spec, payload)
        assert result.repeated_containers == (1,)

    def test_agrees_with_bin_rows(self) -> None:
        """Test 10^3 random loadings: bin rows hold iff packing fits, and validate implies packing."""
        spec = small_aircraft(5)
        payload = payload_of((1, 1, 900), (2, 1, 800), (3, 2, 700), (4, 2, 600), (5, 2, 500), (6, 3, 3000))
        system = build_constraints(spec, payload)
        rng = np.random.default_rng(11)
        feasible = 0
        for _ in range(1000):
            assignment = random_placements(rng, spec, payload)
            x = system.variables.to_vector(assignment)
            bin_ok = not [v for v in system.violations(x) if v.tag == "bin"]
            packed = simulate_packing(assignment, spec, payload).ok
            assert bin_ok == packed
            if validate(assignment, spec, payload, system=system).feasible:
                feasible += 1
                assert packed
        assert feasible > 0


class TestShearRows:
    """Shear rows of the system against the direct shear profile."""

    @pytest.mark.parametrize("bin_count", [4, 5, 8])
    def test_rows_match_profile(self, bin_count: int) -> None:
        """Test each shear row's lhs, rhs and verdict equal the profile point."""
        spec = small_aircraft(bin_count, shear_limit=ShearLimit(peak=6000))
        payload = payload_of((1, 1, 2500), (2, 1, 1800), (3, 2, 900), (4, 2, 1300), (5, 3, 4200), (6, 3, 3100))
        system = build_constraints(spec, payload)
        rows = {(r.tag, r.index): r for r in system.rows if r.tag in ("shear_left", "shear_right")}
        rng = np.random.default_rng(bin_count)
        verdicts = set()
        for _ in range(300):
            assignment = random_placements(rng, spec, payload)
            x = system.variables.to_vector(assignment)
            points = shear_profile(assignment, spec, payload)
            assert len(points) == len(rows) == 2 * spec.half_bins
            for point in points:
                row = rows[(f"shear_{point.side}", point.j)]
                assert row.lhs(x) == point.load
                assert row.rhs == point.limit
                assert (row.lhs(x) <= row.rhs) == point.within_limit
                verdicts.add(point.within_limit)
        assert verdicts == {True, False}
